#pragma once

#include <Eigen/Dense>

#include <span>
#include <utility>
#include <vector>

namespace sinetune {

enum class MaternNu { half, three_halves, five_halves };

struct KernelConfig {
    MaternNu nu = MaternNu::five_halves;
    Eigen::VectorXd lengthscales;  // one per input dimension, all > 0
    double signal_variance = 1.0;
    double noise_variance = 0.0;
    double jitter = 1e-8;

    /// Unit-cube defaults: lengthscale 0.2 per dimension, unit signal
    /// variance, noise 1e-6.
    static KernelConfig defaults(Eigen::Index dim);

    /// Defaults with the signal variance set from the sample variance of the
    /// observations (1.0 when there are fewer than two or they are constant)
    /// and noise variance 1e-6 times that.
    static KernelConfig for_data(Eigen::Index dim, std::span<const double> y);

    void validate() const;  // throws std::invalid_argument
};

/// Matérn covariance between two points; nu selects the 1/2, 3/2 or 5/2 form.
double kernel_eval(const KernelConfig& config, const Eigen::VectorXd& a,
                   const Eigen::VectorXd& b);

/// Gaussian-process posterior over observations. Fitting centres y by its
/// mean and factorises K + (noise + jitter) I once; prediction is then a
/// dot product and a triangular solve. Immutable after fit; predict() is
/// safe to call concurrently.
class GpModel {
public:
    GpModel() = default;

    /// Fits on `points` (same dimension as config.lengthscales) and values.
    /// An empty training set yields the prior. When the Cholesky
    /// factorisation fails the jitter is doubled, up to 1e-2, before
    /// giving up.
    static GpModel fit(const KernelConfig& config, std::vector<Eigen::VectorXd> points,
                       std::vector<double> values);

    /// Posterior mean and variance at a query point; variance is clamped to
    /// be non-negative.
    std::pair<double, double> predict(const Eigen::VectorXd& x) const;

    std::size_t size() const { return points_.size(); }
    const KernelConfig& config() const { return config_; }
    double mean_offset() const { return mean_offset_; }
    double effective_jitter() const { return effective_jitter_; }

private:
    KernelConfig config_;
    std::vector<Eigen::VectorXd> points_;
    double mean_offset_ = 0.0;
    Eigen::MatrixXd chol_;   // lower-triangular factor of K + (noise + jitter) I
    Eigen::VectorXd alpha_;  // (K + (noise + jitter) I)^-1 (y - mean)
    double effective_jitter_ = 0.0;
};

}  // namespace sinetune
