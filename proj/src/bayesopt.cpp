#include "sinetune/bayesopt.hpp"

#include "sinetune/detail/format.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sinetune {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Smallest unit-cube coordinate an open-low dimension may decode from.
constexpr double kOpenLowNudge = 0x1.0p-53;

Eigen::VectorXd random_unit_vector(std::size_t dim, Rng& rng) {
    Eigen::VectorXd u(static_cast<Eigen::Index>(dim));
    for (Eigen::Index d = 0; d < u.size(); ++d) u[d] = rng.uniform();
    return u;
}

std::string point_to_string(std::span<const double> point) {
    std::string out = "(";
    for (std::size_t d = 0; d < point.size(); ++d) {
        if (d > 0) out += ", ";
        out += detail::format_double(point[d]);
    }
    return out + ")";
}

class IncumbentTracker {
public:
    bool offer(std::size_t index, double value) {
        if (!has_ || value > best_value_) {
            has_ = true;
            best_value_ = value;
            best_index_ = index;
            return true;
        }
        return false;
    }
    std::size_t best_index() const { return best_index_; }

private:
    bool has_ = false;
    double best_value_ = 0.0;
    std::size_t best_index_ = 0;
};

double evaluate_checked(const Objective& objective, std::span<const double> point) {
    try {
        return objective(point);
    } catch (const std::exception& e) {
        throw std::runtime_error("objective evaluation failed at " + point_to_string(point) +
                                 ": " + e.what());
    }
}

}  // namespace

SearchSpace SearchSpace::sine_default() {
    SearchSpace space;
    space.dims = {
        Dimension{"t", false, 0.0, 20.0, true},
        Dimension{"g", true, 1.0, 128.0, false},
        Dimension{"k", true, 0.0, 256.0, false},
    };
    return space;
}

void SearchSpace::validate() const {
    if (dims.empty()) throw std::invalid_argument("search space has no dimensions");
    for (const Dimension& dim : dims) {
        if (!(dim.low < dim.high))
            throw std::invalid_argument("dimension '" + dim.name + "': low must be < high");
        if (!std::isfinite(dim.low) || !std::isfinite(dim.high))
            throw std::invalid_argument("dimension '" + dim.name + "': bounds must be finite");
        if (dim.is_integer &&
            (dim.low != std::floor(dim.low) || dim.high != std::floor(dim.high)))
            throw std::invalid_argument("dimension '" + dim.name +
                                        "': integer bounds must be integers");
    }
}

Eigen::VectorXd encode(const SearchSpace& space, std::span<const double> point) {
    if (point.size() != space.size())
        throw std::invalid_argument("encode: point dimension mismatch");
    Eigen::VectorXd unit(static_cast<Eigen::Index>(space.size()));
    for (std::size_t d = 0; d < space.size(); ++d) {
        const Dimension& dim = space.dims[d];
        double x = point[d];
        bool below = dim.low_open ? !(x > dim.low) : x < dim.low;
        if (below || x > dim.high)
            throw std::invalid_argument("encode: coordinate '" + dim.name + "' = " +
                                        detail::format_double(x) + " is out of bounds");
        unit[static_cast<Eigen::Index>(d)] = (x - dim.low) / (dim.high - dim.low);
    }
    return unit;
}

std::vector<double> decode(const SearchSpace& space, const Eigen::VectorXd& unit) {
    if (static_cast<std::size_t>(unit.size()) != space.size())
        throw std::invalid_argument("decode: vector dimension mismatch");
    std::vector<double> point(space.size());
    for (std::size_t d = 0; d < space.size(); ++d) {
        const Dimension& dim = space.dims[d];
        double u = unit[static_cast<Eigen::Index>(d)];
        if (u < 0.0 || u > 1.0)
            throw std::invalid_argument("decode: coordinate '" + dim.name +
                                        "' is outside the unit interval");
        if (dim.low_open && u < kOpenLowNudge) u = kOpenLowNudge;
        double x = dim.low + u * (dim.high - dim.low);
        if (dim.is_integer) {
            x = std::floor(x + 0.5);  // half-way ties toward high
            x = std::clamp(x, dim.low, dim.high);
        }
        point[d] = x;
    }
    return point;
}

void TuneConfig::validate() const {
    if (n_random_starts < 1) throw std::invalid_argument("n_random_starts must be >= 1");
    if (n_iterations < 0) throw std::invalid_argument("n_iterations must be >= 0");
    if (!(beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
    if (candidate_count < 1) throw std::invalid_argument("candidate_count must be >= 1");
}

Eigen::VectorXd propose_next(const GpModel& model, const SearchSpace& space, double beta,
                             int candidate_count, Rng& rng) {
    const std::size_t dim = space.size();
    auto acquisition = [&](const Eigen::VectorXd& u) {
        auto [mean, variance] = model.predict(u);
        return ucb(mean, std::sqrt(std::max(variance, 0.0)), beta);
    };

    Eigen::VectorXd best = random_unit_vector(dim, rng);
    double best_value = acquisition(best);
    for (int c = 1; c < candidate_count; ++c) {
        Eigen::VectorXd candidate = random_unit_vector(dim, rng);
        double value = acquisition(candidate);
        if (value > best_value) {
            best_value = value;
            best = std::move(candidate);
        }
    }

    // One coordinate-wise refinement pass of ternary search; every probe
    // competes for the argmax.
    Eigen::VectorXd probe = best;
    for (std::size_t d = 0; d < dim; ++d) {
        const auto idx = static_cast<Eigen::Index>(d);
        double lo = 0.0, hi = 1.0;
        double coord_best = best[idx];
        double coord_best_value = best_value;
        auto offer = [&](double coord) {
            probe[idx] = coord;
            double value = acquisition(probe);
            if (value > coord_best_value) {
                coord_best_value = value;
                coord_best = coord;
            }
            return value;
        };
        for (int step = 0; step < 20; ++step) {
            double m1 = lo + (hi - lo) / 3.0;
            double m2 = hi - (hi - lo) / 3.0;
            if (offer(m1) < offer(m2))
                lo = m1;
            else
                hi = m2;
        }
        offer(0.5 * (lo + hi));
        if (coord_best_value > best_value) {
            best_value = coord_best_value;
            best[idx] = coord_best;
        }
        probe[idx] = best[idx];
    }
    return best;
}

TuneRun optimize(const Objective& objective, const SearchSpace& space, const TuneConfig& config) {
    space.validate();
    config.validate();

    const auto start = Clock::now();
    Rng rng(config.seed);
    TuneRun run;
    IncumbentTracker incumbent;
    std::vector<Eigen::VectorXd> unit_points;
    std::vector<double> values;

    auto evaluate = [&](const Eigen::VectorXd& u) {
        std::vector<double> point = decode(space, u);
        const auto eval_start = Clock::now();
        double value = evaluate_checked(objective, point);
        run.objective_seconds += seconds_since(eval_start);
        unit_points.push_back(u);
        values.push_back(value);
        if (incumbent.offer(run.history.size(), value)) run.best_index = incumbent.best_index();
        run.history.push_back(Evaluation{std::move(point), value});
    };

    for (int i = 0; i < config.n_random_starts; ++i)
        evaluate(random_unit_vector(space.size(), rng));

    for (int it = 0; it < config.n_iterations; ++it) {
        GpModel model = GpModel::fit(
            KernelConfig::for_data(static_cast<Eigen::Index>(space.size()), values), unit_points,
            values);
        Eigen::VectorXd proposal = propose_next(model, space, config.beta, config.candidate_count,
                                                rng);
        auto seen = [&](const Eigen::VectorXd& u) {
            std::vector<double> decoded = decode(space, u);
            return std::any_of(run.history.begin(), run.history.end(),
                               [&](const Evaluation& e) { return e.point == decoded; });
        };
        if (seen(proposal))
            proposal = propose_next(model, space, config.beta, config.candidate_count, rng);
        evaluate(proposal);
    }

    run.evaluations = run.history.size();
    run.wall_seconds = seconds_since(start);
    return run;
}

std::vector<double> grid_axis_values(const Dimension& dim, int steps) {
    if (steps < 1) throw std::invalid_argument("grid steps must be >= 1");
    std::vector<double> axis;
    axis.reserve(static_cast<std::size_t>(steps));
    double span = dim.high - dim.low;
    if (dim.low_open && !dim.is_integer) {
        // Right-closed spacing keeps every node strictly above the open bound.
        for (int i = 0; i < steps; ++i)
            axis.push_back(dim.low + span * static_cast<double>(i + 1) /
                                         static_cast<double>(steps));
    } else if (steps == 1) {
        axis.push_back(dim.low);
    } else {
        for (int i = 0; i < steps; ++i)
            axis.push_back(dim.low +
                           span * static_cast<double>(i) / static_cast<double>(steps - 1));
    }
    if (dim.is_integer) {
        for (double& v : axis) v = std::clamp(std::floor(v + 0.5), dim.low, dim.high);
        axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
    }
    return axis;
}

TuneRun grid_search(const Objective& objective, const SearchSpace& space,
                    std::span<const int> steps_per_dim) {
    space.validate();
    if (steps_per_dim.size() != space.size())
        throw std::invalid_argument("grid_search: steps_per_dim length mismatch");

    std::vector<std::vector<double>> axes;
    axes.reserve(space.size());
    for (std::size_t d = 0; d < space.size(); ++d)
        axes.push_back(grid_axis_values(space.dims[d], steps_per_dim[d]));

    const auto start = Clock::now();
    TuneRun run;
    IncumbentTracker incumbent;
    std::vector<std::size_t> cursor(space.size(), 0);
    std::vector<double> point(space.size());
    while (true) {
        for (std::size_t d = 0; d < space.size(); ++d) point[d] = axes[d][cursor[d]];
        const auto eval_start = Clock::now();
        double value = evaluate_checked(objective, point);
        run.objective_seconds += seconds_since(eval_start);
        if (incumbent.offer(run.history.size(), value)) run.best_index = incumbent.best_index();
        run.history.push_back(Evaluation{point, value});

        // Row-major: advance the last dimension fastest.
        std::size_t d = space.size();
        while (d > 0) {
            --d;
            if (++cursor[d] < axes[d].size()) break;
            cursor[d] = 0;
            if (d == 0) {
                run.evaluations = run.history.size();
                run.wall_seconds = seconds_since(start);
                return run;
            }
        }
    }
}

TuneRun grid_search(const Objective& objective, const SearchSpace& space, int steps_per_dim) {
    std::vector<int> steps(space.size(), steps_per_dim);
    return grid_search(objective, space, steps);
}

void EpsilonGreedyConfig::validate() const {
    if (epsilon < 0.0 || epsilon > 1.0) throw std::invalid_argument("epsilon must be in [0, 1]");
    if (n_evaluations < 1) throw std::invalid_argument("n_evaluations must be >= 1");
    if (!(neighborhood_radius > 0.0))
        throw std::invalid_argument("neighborhood radius must be > 0");
}

TuneRun epsilon_greedy(const Objective& objective, const SearchSpace& space,
                       const EpsilonGreedyConfig& config) {
    space.validate();
    config.validate();

    const auto start = Clock::now();
    Rng rng(config.seed);
    TuneRun run;
    IncumbentTracker incumbent;
    Eigen::VectorXd incumbent_unit;

    auto evaluate = [&](const Eigen::VectorXd& u) {
        std::vector<double> point = decode(space, u);
        const auto eval_start = Clock::now();
        double value = evaluate_checked(objective, point);
        run.objective_seconds += seconds_since(eval_start);
        if (incumbent.offer(run.history.size(), value)) {
            run.best_index = incumbent.best_index();
            incumbent_unit = u;
        }
        run.history.push_back(Evaluation{std::move(point), value});
    };

    evaluate(random_unit_vector(space.size(), rng));
    for (int i = 1; i < config.n_evaluations; ++i) {
        Eigen::VectorXd u(static_cast<Eigen::Index>(space.size()));
        if (rng.uniform() < config.epsilon) {
            u = random_unit_vector(space.size(), rng);
        } else {
            for (Eigen::Index d = 0; d < u.size(); ++d) {
                double lo = std::max(0.0, incumbent_unit[d] - config.neighborhood_radius);
                double hi = std::min(1.0, incumbent_unit[d] + config.neighborhood_radius);
                u[d] = rng.uniform(lo, hi);
            }
        }
        evaluate(u);
    }

    run.evaluations = run.history.size();
    run.wall_seconds = seconds_since(start);
    return run;
}

std::string history_to_csv(const TuneRun& run, std::span<const std::string> columns) {
    std::ostringstream out;
    out << "iter";
    for (const std::string& c : columns) out << ',' << c;
    out << ",objective,is_incumbent\n";
    bool have_best = false;
    double best = 0.0;
    for (std::size_t i = 0; i < run.history.size(); ++i) {
        const Evaluation& e = run.history[i];
        bool improved = !have_best || e.value > best;
        if (improved) {
            have_best = true;
            best = e.value;
        }
        out << i;
        for (double v : e.point) out << ',' << detail::format_double(v);
        out << ',' << detail::format_double(e.value) << ',' << (improved ? 1 : 0) << '\n';
    }
    return out.str();
}

}  // namespace sinetune
