#pragma once

#include "sinetune/gp.hpp"
#include "sinetune/rng.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace sinetune {

struct Dimension {
    std::string name;
    bool is_integer = false;
    double low = 0.0;
    double high = 1.0;
    /// Open at `low`: decoding and grids stay strictly above the bound.
    bool low_open = false;
};

struct SearchSpace {
    std::vector<Dimension> dims;

    /// t in (0, 20], g in [1, 128], k in [0, 256].
    static SearchSpace sine_default();
    void validate() const;
    std::size_t size() const { return dims.size(); }
};

/// Affine map into the unit cube. Throws on out-of-bounds input.
Eigen::VectorXd encode(const SearchSpace& space, std::span<const double> point);

/// Inverse of encode. Integer dimensions are rounded to the nearest integer,
/// half-way ties toward `high`; open-low dimensions are nudged off the bound.
std::vector<double> decode(const SearchSpace& space, const Eigen::VectorXd& unit);

/// UCB(x) = mean + beta * sd.
inline double ucb(double mean, double sd, double beta) { return mean + beta * sd; }

struct TuneConfig {
    int n_random_starts = 2;
    int n_iterations = 3;
    double beta = 2.0;
    int candidate_count = 1000;
    std::uint64_t seed = 0;

    void validate() const;
};

struct Evaluation {
    std::vector<double> point;  // original units
    double value = 0.0;
};

struct TuneRun {
    std::vector<Evaluation> history;
    std::size_t best_index = 0;
    std::size_t evaluations = 0;
    double wall_seconds = 0.0;
    double objective_seconds = 0.0;

    const Evaluation& incumbent() const { return history.at(best_index); }
};

using Objective = std::function<double(std::span<const double>)>;

/// Maximises the UCB acquisition over the unit cube: best of
/// `candidate_count` uniform draws, refined by one coordinate-wise pass of
/// 20-step ternary search. Deterministic given the rng state.
Eigen::VectorXd propose_next(const GpModel& model, const SearchSpace& space, double beta,
                             int candidate_count, Rng& rng);

/// GP-UCB loop: `n_random_starts` uniform evaluations, then `n_iterations`
/// rounds of fit / propose / evaluate. The surrogate sees unrounded
/// coordinates; rounding happens when the objective is evaluated. A proposal
/// that decodes onto an already-evaluated point is re-proposed once, then
/// evaluated regardless.
TuneRun optimize(const Objective& objective, const SearchSpace& space, const TuneConfig& config);

/// Grid nodes for one dimension: continuous dimensions evenly spaced
/// including endpoints (open-low dimensions exclude the open bound and close
/// on the right); integer dimensions evenly spaced, rounded, de-duplicated.
std::vector<double> grid_axis_values(const Dimension& dim, int steps);

/// Full Cartesian grid over per-dimension axes from grid_axis_values. Ties go
/// to the first point in row-major order (last dimension fastest).
TuneRun grid_search(const Objective& objective, const SearchSpace& space,
                    std::span<const int> steps_per_dim);
TuneRun grid_search(const Objective& objective, const SearchSpace& space, int steps_per_dim);

struct EpsilonGreedyConfig {
    double epsilon = 0.1;
    int n_evaluations = 1;
    /// Half-width of the axis-aligned search box around the incumbent, in
    /// unit-cube units.
    double neighborhood_radius = 0.05;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Greedy local search around the incumbent; with probability epsilon a step
/// restarts from a fresh uniform point.
TuneRun epsilon_greedy(const Objective& objective, const SearchSpace& space,
                       const EpsilonGreedyConfig& config);

/// CSV with header `iter,<columns...>,objective,is_incumbent`; is_incumbent
/// marks rows that improved the running best.
std::string history_to_csv(const TuneRun& run, std::span<const std::string> columns);

}  // namespace sinetune
