#include "breakgauge/hac.hpp"

#include "breakgauge/errors.hpp"

#include <cmath>

namespace breakgauge {
namespace {

// lag argument for weight j of an integer-truncated window; the Bartlett
// window follows the Newey-West j/(bw+1) convention so that bandwidth 1
// still puts weight 1/2 on the first lag
double lag_fraction(KernelKind kind, double j, double bw) {
    if (kind == KernelKind::bartlett) return j / (bw + 1.0);
    return bw > 0.0 ? j / bw : 2.0;
}

} // namespace

double kernel_weight(KernelKind kind, double x) {
    if (x < 0.0) throw ValidationError("kernel_weight: negative argument");
    switch (kind) {
    case KernelKind::parzen:
        if (x <= 0.5) return 1.0 - 6.0 * x * x + 6.0 * x * x * x;
        if (x <= 1.0) return 2.0 * std::pow(1.0 - x, 3.0);
        return 0.0;
    case KernelKind::bartlett:
        return x <= 1.0 ? 1.0 - x : 0.0;
    }
    return 0.0;
}

double andrews_bandwidth(const Eigen::MatrixXd& moments, KernelKind kind) {
    const Eigen::Index T = moments.rows(), q = moments.cols();
    if (T < 10) throw ValidationError("andrews_bandwidth: need at least 10 rows");

    double num = 0.0, den = 0.0;
    for (Eigen::Index a = 0; a < q; ++a) {
        Eigen::VectorXd col = moments.col(a);
        col.array() -= col.mean();
        double s_yy = col.head(T - 1).squaredNorm();
        if (s_yy <= 0.0)
            throw NumericalError("andrews_bandwidth: degenerate moment column");
        double rho = col.tail(T - 1).dot(col.head(T - 1)) / s_yy;
        rho = std::clamp(rho, -0.97, 0.97); // keep the plug-in finite near unit roots
        double sig2 =
            (col.tail(T - 1) - rho * col.head(T - 1)).squaredNorm() / (T - 1);

        double omr = 1.0 - rho, opr = 1.0 + rho;
        den += sig2 * sig2 / std::pow(omr, 4);
        if (kind == KernelKind::parzen) {
            num += 4.0 * rho * rho * sig2 * sig2 / std::pow(omr, 8);
        } else {
            num += 4.0 * rho * rho * sig2 * sig2 /
                   (std::pow(omr, 6) * opr * opr);
        }
    }
    if (den <= 0.0) throw NumericalError("andrews_bandwidth: zero denominator");
    double alpha = num / den;

    if (kind == KernelKind::parzen)
        return 2.6614 * std::pow(alpha * static_cast<double>(T), 0.2);
    return 1.1447 * std::pow(alpha * static_cast<double>(T), 1.0 / 3.0);
}

LongRunCovariance long_run_covariance(const Eigen::MatrixXd& moments,
                                      const KernelSpec& spec) {
    const Eigen::Index T = moments.rows(), q = moments.cols();
    if (T == 0 || q == 0) throw ValidationError("long_run_covariance: empty input");

    double bw = spec.automatic ? andrews_bandwidth(moments, spec.kind) : spec.bandwidth;
    if (bw < 0.0) throw ValidationError("long_run_covariance: negative bandwidth");
    // a plug-in bandwidth can exceed short samples (clamped near-unit-root
    // columns); cap it rather than fail, but reject infeasible explicit choices
    if (spec.automatic)
        bw = std::min(bw, static_cast<double>(T - 1));
    else if (bw >= static_cast<double>(T))
        throw ValidationError("long_run_covariance: bandwidth >= sample size");

    Eigen::MatrixXd m = moments;
    for (Eigen::Index a = 0; a < q; ++a) m.col(a).array() -= m.col(a).mean();

    Eigen::MatrixXd s = m.transpose() * m / static_cast<double>(T);
    const Eigen::Index max_lag = static_cast<Eigen::Index>(std::floor(bw));
    for (Eigen::Index j = 1; j <= max_lag && j < T; ++j) {
        double w = kernel_weight(spec.kind,
                                 lag_fraction(spec.kind, static_cast<double>(j), bw));
        if (w == 0.0) continue;
        Eigen::MatrixXd gamma = m.bottomRows(T - j).transpose() * m.topRows(T - j) /
                                static_cast<double>(T);
        s += w * (gamma + gamma.transpose());
    }
    s = ((s + s.transpose()) / 2.0).eval();

    LongRunCovariance out;
    out.matrix = std::move(s);
    out.bandwidth_used = bw;
    out.kind = spec.kind;
    return out;
}

double long_run_variance(std::span<const double> values, const KernelSpec& spec) {
    Eigen::MatrixXd m(values.size(), 1);
    for (std::size_t i = 0; i < values.size(); ++i) m(static_cast<Eigen::Index>(i), 0) = values[i];
    return long_run_covariance(m, spec).matrix(0, 0);
}

KernelKind kernel_kind_from_string(const std::string& name) {
    if (name == "parzen") return KernelKind::parzen;
    if (name == "bartlett") return KernelKind::bartlett;
    throw ValidationError("unknown kernel kind: " + name);
}

std::string to_string(KernelKind kind) {
    return kind == KernelKind::parzen ? "parzen" : "bartlett";
}

} // namespace breakgauge
