#pragma once

#include "sinetune/bayesopt.hpp"
#include "sinetune/gen.hpp"
#include "sinetune/metrics.hpp"

#include <array>
#include <iosfwd>
#include <optional>

namespace sinetune::cli {

/// Bad user input (flags, ranges, files); mapped to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// lo == hi pins the parameter to that value instead of searching over it.
struct Range {
    double lo = 0.0;
    double hi = 0.0;
    bool pinned() const { return lo == hi; }
};

struct SpaceOptions {
    Range t{0.0, 20.0};
    Range g{1.0, 128.0};
    Range k{0.0, 256.0};
};

/// Search space over the unpinned parameters, in t, g, k order, plus the
/// mapping back to full parameter triples.
struct SineSpace {
    SearchSpace space;
    std::array<std::optional<double>, 3> pinned;  // t, g, k

    static SineSpace from_options(const SpaceOptions& options);

    SineParams params_at(std::span<const double> point) const;
    std::vector<double> full_point(std::span<const double> point) const;
};

struct SelectOptions {
    std::string corpus_path;
    std::string out_dir;
    SineParams params;
    unsigned threads = 0;  // 0 = machine parallelism
};

struct TuneOptions {
    std::string corpus_path;
    std::string out_dir;
    SpaceOptions space;
    TuneConfig tune;
    unsigned threads = 0;  // 0 = machine parallelism
};

enum class BaselineMode { grid, epsilon };

struct BaselineOptions {
    std::string corpus_path;
    std::string out_dir;
    SpaceOptions space;
    BaselineMode mode = BaselineMode::grid;
    std::vector<int> grid_steps;  // one per unpinned dim, or a single broadcast value
    EpsilonGreedyConfig epsilon;
    unsigned threads = 0;  // 0 = machine parallelism
};

/// Exhaustive grid over the integer parameters crossed with a 1-D GP-UCB run
/// over t per grid cell.
struct MixedOptions {
    std::string corpus_path;
    std::string out_dir;
    SpaceOptions space;
    TuneConfig tune;
    std::vector<int> grid_steps;  // for the integer dims only
    unsigned threads = 0;  // 0 = machine parallelism
};

struct GenOptions {
    GenConfig gen;
    std::string out_path;
};

void run_select(const SelectOptions& options, std::ostream& log);
void run_tune(const TuneOptions& options, std::ostream& log);
void run_baseline(const BaselineOptions& options, std::ostream& log);
void run_grid_mixed(const MixedOptions& options, std::ostream& log);
void run_gen(const GenOptions& options, std::ostream& log);

Corpus load_corpus_file(const std::string& path);

}  // namespace sinetune::cli
