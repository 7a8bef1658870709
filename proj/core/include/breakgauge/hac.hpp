#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>

namespace breakgauge {

enum class KernelKind { parzen, bartlett };

/// Kernel and bandwidth choice for long-run covariance estimation.
struct KernelSpec {
    KernelKind kind = KernelKind::parzen;
    bool automatic = true;  // Andrews AR(1) plug-in
    double bandwidth = 0.0; // used when !automatic

    static KernelSpec andrews(KernelKind k = KernelKind::parzen) { return {k, true, 0.0}; }
    static KernelSpec fixed(KernelKind k, double bw) { return {k, false, bw}; }
};

struct LongRunCovariance {
    Eigen::MatrixXd matrix;
    double bandwidth_used = 0.0;
    KernelKind kind = KernelKind::parzen;
};

/// Lag-window weight at normalized lag x >= 0.
double kernel_weight(KernelKind kind, double x);

/// Andrews (1991) AR(1) plug-in bandwidth with equal column weights.
double andrews_bandwidth(const Eigen::MatrixXd& moments, KernelKind kind);

/// S = Gamma_0 + sum_j w_j (Gamma_j + Gamma_j') over the demeaned moment
/// columns; the result is symmetrized.
LongRunCovariance long_run_covariance(const Eigen::MatrixXd& moments,
                                      const KernelSpec& spec);

/// Scalar convenience wrapper (q = 1).
double long_run_variance(std::span<const double> values, const KernelSpec& spec);

KernelKind kernel_kind_from_string(const std::string& name);
std::string to_string(KernelKind kind);

} // namespace breakgauge
