#include "sinetune/gp.hpp"

#include <cmath>
#include <stdexcept>

namespace sinetune {
namespace {

double scaled_distance(const Eigen::VectorXd& lengthscales, const Eigen::VectorXd& a,
                       const Eigen::VectorXd& b) {
    double sum = 0.0;
    for (Eigen::Index d = 0; d < lengthscales.size(); ++d) {
        double delta = (a[d] - b[d]) / lengthscales[d];
        sum += delta * delta;
    }
    return std::sqrt(sum);
}

double matern(MaternNu nu, double r) {
    switch (nu) {
        case MaternNu::half:
            return std::exp(-r);
        case MaternNu::three_halves: {
            const double root3 = std::sqrt(3.0);
            return (1.0 + root3 * r) * std::exp(-root3 * r);
        }
        case MaternNu::five_halves:
        default: {
            const double root5 = std::sqrt(5.0);
            return (1.0 + root5 * r + 5.0 * r * r / 3.0) * std::exp(-root5 * r);
        }
    }
}

}  // namespace

KernelConfig KernelConfig::defaults(Eigen::Index dim) {
    KernelConfig config;
    config.lengthscales = Eigen::VectorXd::Constant(dim, 0.2);
    config.signal_variance = 1.0;
    config.noise_variance = 1e-6;
    return config;
}

KernelConfig KernelConfig::for_data(Eigen::Index dim, std::span<const double> y) {
    KernelConfig config = defaults(dim);
    if (y.size() >= 2) {
        double mean = 0.0;
        for (double v : y) mean += v;
        mean /= static_cast<double>(y.size());
        double var = 0.0;
        for (double v : y) var += (v - mean) * (v - mean);
        var /= static_cast<double>(y.size() - 1);
        if (var > 0.0 && std::isfinite(var)) config.signal_variance = var;
    }
    config.noise_variance = 1e-6 * config.signal_variance;
    return config;
}

void KernelConfig::validate() const {
    if (lengthscales.size() == 0) throw std::invalid_argument("lengthscales must be non-empty");
    for (Eigen::Index d = 0; d < lengthscales.size(); ++d)
        if (!(lengthscales[d] > 0.0)) throw std::invalid_argument("lengthscales must be > 0");
    if (!(signal_variance > 0.0)) throw std::invalid_argument("signal variance must be > 0");
    if (noise_variance < 0.0) throw std::invalid_argument("noise variance must be >= 0");
    if (!(jitter > 0.0)) throw std::invalid_argument("jitter must be > 0");
}

double kernel_eval(const KernelConfig& config, const Eigen::VectorXd& a,
                   const Eigen::VectorXd& b) {
    if (a.size() != config.lengthscales.size() || b.size() != config.lengthscales.size())
        throw std::invalid_argument("kernel_eval: dimension mismatch");
    return config.signal_variance * matern(config.nu, scaled_distance(config.lengthscales, a, b));
}

GpModel GpModel::fit(const KernelConfig& config, std::vector<Eigen::VectorXd> points,
                     std::vector<double> values) {
    config.validate();
    if (points.size() != values.size())
        throw std::invalid_argument("fit: points and values differ in length");

    GpModel model;
    model.config_ = config;
    if (points.empty()) return model;

    const auto n = static_cast<Eigen::Index>(points.size());
    for (const Eigen::VectorXd& x : points)
        if (x.size() != config.lengthscales.size())
            throw std::invalid_argument("fit: point dimension mismatch");

    double offset = 0.0;
    for (double v : values) offset += v;
    offset /= static_cast<double>(values.size());

    Eigen::VectorXd centred(n);
    for (Eigen::Index i = 0; i < n; ++i) centred[i] = values[static_cast<std::size_t>(i)] - offset;

    Eigen::MatrixXd gram(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            double k = kernel_eval(config, points[static_cast<std::size_t>(i)],
                                   points[static_cast<std::size_t>(j)]);
            gram(i, j) = k;
            gram(j, i) = k;
        }
    }

    double jitter = config.jitter;
    Eigen::LLT<Eigen::MatrixXd> llt;
    while (true) {
        Eigen::MatrixXd regularised = gram;
        regularised.diagonal().array() += config.noise_variance + jitter;
        llt.compute(regularised);
        if (llt.info() == Eigen::Success) break;
        jitter *= 2.0;
        if (jitter > 1e-2)
            throw std::runtime_error(
                "GP fit: Cholesky factorisation failed even with jitter 1e-2 "
                "(duplicate points with contradictory noiseless observations?)");
    }

    model.points_ = std::move(points);
    model.mean_offset_ = offset;
    model.chol_ = llt.matrixL();
    model.alpha_ = llt.solve(centred);
    model.effective_jitter_ = jitter;
    return model;
}

std::pair<double, double> GpModel::predict(const Eigen::VectorXd& x) const {
    if (x.size() != config_.lengthscales.size())
        throw std::invalid_argument("predict: dimension mismatch");
    double prior_var = config_.signal_variance;
    if (points_.empty()) return {mean_offset_, prior_var};

    const auto n = static_cast<Eigen::Index>(points_.size());
    Eigen::VectorXd kstar(n);
    for (Eigen::Index i = 0; i < n; ++i)
        kstar[i] = kernel_eval(config_, x, points_[static_cast<std::size_t>(i)]);

    double mean = mean_offset_ + kstar.dot(alpha_);
    Eigen::VectorXd v = chol_.triangularView<Eigen::Lower>().solve(kstar);
    double variance = prior_var - v.squaredNorm();
    return {mean, std::max(variance, 0.0)};
}

}  // namespace sinetune
