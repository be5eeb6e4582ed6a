#include "sinetune/cli.hpp"

#include "sinetune/detail/format.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

namespace sinetune::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::array<std::string, 3> kParamNames{"t", "g", "k"};

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << contents;
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

fs::path prepare_out_dir(const std::string& out_dir) {
    if (out_dir.empty()) throw UsageError("--out directory is required");
    fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw UsageError("cannot create output directory '" + out_dir + "': " + ec.message());
    return dir;
}

unsigned resolve_threads(unsigned threads) {
    if (threads != 0) return threads;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

std::size_t count_intersection(std::span<const FactId> a, std::span<const FactId> b) {
    std::size_t count = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib)
            ++ia;
        else if (*ib < *ia)
            ++ib;
        else
            ++count, ++ia, ++ib;
    }
    return count;
}

/// Runs selection for every conjecture, chunked over threads. Results are a
/// pure per-conjecture function, so the outcome is thread-count independent.
std::vector<std::vector<FactId>> select_all(const Corpus& corpus, const SineSelector& selector,
                                            unsigned threads) {
    const std::size_t n = corpus.conjectures.size();
    std::vector<std::vector<FactId>> out(n);
    auto work = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) out[i] = selector.select(corpus.conjectures[i]);
    };
    threads = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), n));
    if (threads <= 1) {
        work(0, n);
        return out;
    }
    std::vector<std::thread> pool;
    std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        std::size_t lo = static_cast<std::size_t>(t) * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(work, lo, hi);
    }
    for (std::thread& t : pool) t.join();
    return out;
}

TuneRun to_full_run(const TuneRun& run, const SineSpace& binding) {
    TuneRun full = run;
    for (Evaluation& e : full.history) e.point = binding.full_point(e.point);
    return full;
}

json best_json(const TuneRun& full_run) {
    const Evaluation& best = full_run.incumbent();
    return {{"t", best.point[0]},
            {"g", static_cast<long long>(best.point[1])},
            {"k", static_cast<long long>(best.point[2])}};
}

void fill_common_summary(json& summary, const TuneRun& full_run) {
    summary["best"] = best_json(full_run);
    summary["best_objective"] = full_run.incumbent().value;
    summary["evaluations"] = full_run.evaluations;
    summary["wall_time_total_s"] = full_run.wall_seconds;
    summary["wall_time_objective_s"] = full_run.objective_seconds;
}

void write_run_artifacts(const fs::path& dir, const TuneRun& full_run, json summary,
                         std::ostream& log) {
    fill_common_summary(summary, full_run);
    write_file(dir / "history.csv", history_to_csv(full_run, kParamNames));
    write_file(dir / "summary.json", summary.dump(2) + "\n");
    const Evaluation& best = full_run.incumbent();
    log << "best t=" << detail::format_double(best.point[0]) << " g=" << best.point[1]
        << " k=" << best.point[2] << " objective=" << detail::format_double(best.value) << " ("
        << full_run.evaluations << " evaluations)\n";
}

Objective make_objective(const Corpus& corpus, const SineSpace& binding, unsigned threads) {
    unsigned resolved = resolve_threads(threads);
    return [&corpus, binding, resolved](std::span<const double> point) {
        return aggregate_score(corpus, binding.params_at(point), resolved);
    };
}

std::vector<int> resolve_grid_steps(const std::vector<int>& steps, std::size_t dims) {
    if (dims == 0) return {};
    std::vector<int> resolved;
    if (steps.empty())
        throw UsageError("--grid-steps is required for grid runs");
    if (steps.size() == 1)
        resolved.assign(dims, steps[0]);
    else if (steps.size() == dims)
        resolved = steps;
    else
        throw UsageError("--grid-steps needs one value or one per searched dimension");
    for (int s : resolved)
        if (s < 1) throw UsageError("--grid-steps values must be >= 1");
    return resolved;
}

/// Figure-style profile of the fitted posterior along a single continuous
/// dimension: t, posterior mean, posterior sd, UCB.
std::string posterior_profile_csv(const TuneRun& run, const SearchSpace& space, double beta) {
    std::vector<Eigen::VectorXd> unit_points;
    std::vector<double> values;
    for (const Evaluation& e : run.history) {
        unit_points.push_back(encode(space, e.point));
        values.push_back(e.value);
    }
    GpModel model = GpModel::fit(KernelConfig::for_data(1, values), unit_points, values);

    std::ostringstream out;
    out << "t,posterior_mean,posterior_sd,ucb\n";
    const int kSteps = 200;
    const int first = space.dims[0].low_open ? 1 : 0;
    for (int i = first; i <= kSteps; ++i) {
        Eigen::VectorXd u(1);
        u[0] = static_cast<double>(i) / kSteps;
        auto [mean, variance] = model.predict(u);
        double sd = std::sqrt(std::max(variance, 0.0));
        out << detail::format_double(decode(space, u)[0]) << ','
            << detail::format_double(mean) << ',' << detail::format_double(sd) << ','
            << detail::format_double(ucb(mean, sd, beta)) << '\n';
    }
    return out.str();
}

}  // namespace

SineSpace SineSpace::from_options(const SpaceOptions& options) {
    SineSpace binding;
    auto add_dim = [&](std::size_t slot, const Range& range, bool is_integer) {
        const std::string& name = kParamNames[slot];
        if (!std::isfinite(range.lo) || !std::isfinite(range.hi) || range.lo > range.hi)
            throw UsageError("--" + name + "-range: bounds must be finite with lo <= hi");
        if (is_integer &&
            (range.lo != std::floor(range.lo) || range.hi != std::floor(range.hi)))
            throw UsageError("--" + name + "-range: bounds must be integers");
        if (range.pinned()) {
            binding.pinned[slot] = range.lo;
            return;
        }
        Dimension dim{name, is_integer, range.lo, range.hi, false};
        if (slot == 0 && range.lo <= 0.0) {
            if (range.lo < 0.0) throw UsageError("--t-range: lower bound must be >= 0");
            dim.low_open = true;  // t must stay strictly positive
        }
        binding.space.dims.push_back(std::move(dim));
    };
    add_dim(0, options.t, false);
    add_dim(1, options.g, true);
    add_dim(2, options.k, true);

    if (options.t.pinned() && !(options.t.lo > 0.0))
        throw UsageError("--t-range: pinned t must be > 0");
    if (options.g.pinned() && options.g.lo < 1.0)
        throw UsageError("--g-range: pinned g must be >= 1");
    if (options.k.pinned() && options.k.lo < 0.0)
        throw UsageError("--k-range: pinned k must be >= 0");
    if (!binding.space.dims.empty()) binding.space.validate();
    return binding;
}

SineParams SineSpace::params_at(std::span<const double> point) const {
    std::vector<double> full = full_point(point);
    return SineParams{full[0], static_cast<int>(std::llround(full[1])),
                      static_cast<int>(std::llround(full[2]))};
}

std::vector<double> SineSpace::full_point(std::span<const double> point) const {
    if (point.size() != space.size())
        throw std::invalid_argument("point dimension does not match the search space");
    std::vector<double> full(3);
    std::size_t next = 0;
    for (std::size_t slot = 0; slot < 3; ++slot)
        full[slot] = pinned[slot] ? *pinned[slot] : point[next++];
    return full;
}

Corpus load_corpus_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open corpus file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_corpus(buffer.str());
}

void run_select(const SelectOptions& options, std::ostream& log) {
    try {
        options.params.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    Corpus corpus = load_corpus_file(options.corpus_path);
    if (corpus.conjectures.empty()) throw UsageError("corpus has no conjectures");
    fs::path dir = prepare_out_dir(options.out_dir);

    SineSelector selector(corpus, options.params);
    std::vector<std::vector<FactId>> selections = select_all(corpus, selector, options.threads);

    ScoreReport report;
    std::ostringstream selections_csv;
    selections_csv << "conjecture,recommended_facts\n";
    std::size_t proved = 0;
    for (std::size_t i = 0; i < corpus.conjectures.size(); ++i) {
        const Conjecture& conj = corpus.conjectures[i];
        const std::vector<FactId>& rec = selections[i];
        std::size_t inter = count_intersection(conj.required, rec);
        report.per_conjecture.push_back(ConjectureScore{
            conj.name, score_from_counts(conj.required.size(), rec.size(), inter), rec.size(),
            inter});
        report.total += report.per_conjecture.back().score;
        if (inter == conj.required.size()) ++proved;

        selections_csv << conj.name << ',';
        for (std::size_t r = 0; r < rec.size(); ++r)
            selections_csv << (r == 0 ? "" : " ") << corpus.facts[rec[r]].name;
        selections_csv << '\n';
    }
    report.proofs_found_fraction =
        static_cast<double>(proved) / static_cast<double>(corpus.conjectures.size());

    write_file(dir / "selections.csv", selections_csv.str());
    write_file(dir / "scores.csv", report_to_csv(report));
    write_file(dir / "summary.json", report_summary_json(report, options.params));
    log << "S = " << detail::format_double(report.total)
        << "\nproofs_found = " << detail::format_double(report.proofs_found_fraction) << '\n';
}

void run_tune(const TuneOptions& options, std::ostream& log) {
    Corpus corpus = load_corpus_file(options.corpus_path);
    if (corpus.conjectures.empty()) throw UsageError("corpus has no conjectures");
    SineSpace binding = SineSpace::from_options(options.space);
    if (binding.space.dims.empty())
        throw UsageError("tune needs at least one unpinned parameter range");
    fs::path dir = prepare_out_dir(options.out_dir);

    TuneRun run = optimize(make_objective(corpus, binding, options.threads), binding.space,
                           options.tune);

    json summary{{"method", "gp-ucb"},
                 {"seed", options.tune.seed},
                 {"beta", options.tune.beta},
                 {"n_random_starts", options.tune.n_random_starts},
                 {"n_iterations", options.tune.n_iterations}};
    write_run_artifacts(dir, to_full_run(run, binding), std::move(summary), log);

    if (binding.space.size() == 1 && !binding.space.dims[0].is_integer)
        write_file(dir / "posterior.csv",
                   posterior_profile_csv(run, binding.space, options.tune.beta));
}

void run_baseline(const BaselineOptions& options, std::ostream& log) {
    Corpus corpus = load_corpus_file(options.corpus_path);
    if (corpus.conjectures.empty()) throw UsageError("corpus has no conjectures");
    SineSpace binding = SineSpace::from_options(options.space);
    if (binding.space.dims.empty())
        throw UsageError("baseline needs at least one unpinned parameter range");
    fs::path dir = prepare_out_dir(options.out_dir);
    Objective objective = make_objective(corpus, binding, options.threads);

    TuneRun run;
    json summary;
    if (options.mode == BaselineMode::grid) {
        std::vector<int> steps = resolve_grid_steps(options.grid_steps, binding.space.size());
        run = grid_search(objective, binding.space, steps);
        summary = json{{"method", "grid"}, {"grid_steps", steps}};
    } else {
        try {
            options.epsilon.validate();
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        run = epsilon_greedy(objective, binding.space, options.epsilon);
        summary = json{{"method", "epsilon-greedy"},
                       {"epsilon", options.epsilon.epsilon},
                       {"neighborhood_radius", options.epsilon.neighborhood_radius},
                       {"seed", options.epsilon.seed}};
    }
    write_run_artifacts(dir, to_full_run(run, binding), std::move(summary), log);
}

void run_grid_mixed(const MixedOptions& options, std::ostream& log) {
    Corpus corpus = load_corpus_file(options.corpus_path);
    if (corpus.conjectures.empty()) throw UsageError("corpus has no conjectures");
    SineSpace binding = SineSpace::from_options(options.space);
    if (binding.pinned[0])
        throw UsageError("grid-mixed optimises t; leave --t-range unpinned");
    fs::path dir = prepare_out_dir(options.out_dir);

    std::vector<const Dimension*> integer_dims;
    for (const Dimension& dim : binding.space.dims)
        if (dim.is_integer) integer_dims.push_back(&dim);

    std::vector<int> steps = integer_dims.empty()
                                 ? std::vector<int>{}
                                 : resolve_grid_steps(options.grid_steps, integer_dims.size());
    std::vector<std::vector<double>> axes;
    for (std::size_t d = 0; d < integer_dims.size(); ++d)
        axes.push_back(grid_axis_values(*integer_dims[d], steps[d]));

    SearchSpace t_space;
    t_space.dims.push_back(binding.space.dims[0]);
    unsigned threads = resolve_threads(options.threads);

    TuneRun combined;
    std::size_t cells = 1;
    for (const auto& axis : axes) cells *= axis.size();

    bool has_best = false;
    double best_value = 0.0;
    std::vector<std::size_t> cursor(axes.size(), 0);
    for (std::size_t cell = 0; cell < cells; ++cell) {
        SineSpace cell_binding = binding;
        std::size_t axis_index = 0;
        for (std::size_t slot = 1; slot < 3; ++slot) {
            if (cell_binding.pinned[slot]) continue;
            cell_binding.pinned[slot] = axes[axis_index][cursor[axis_index]];
            ++axis_index;
        }
        cell_binding.space = t_space;

        TuneConfig cell_config = options.tune;
        cell_config.seed = options.tune.seed + cell;
        TuneRun sub = optimize(
            [&corpus, &cell_binding, threads](std::span<const double> point) {
                return aggregate_score(corpus, cell_binding.params_at(point), threads);
            },
            t_space, cell_config);

        for (const Evaluation& e : sub.history) {
            Evaluation full{cell_binding.full_point(e.point), e.value};
            if (!has_best || full.value > best_value) {
                has_best = true;
                best_value = full.value;
                combined.best_index = combined.history.size();
            }
            combined.history.push_back(std::move(full));
        }
        combined.wall_seconds += sub.wall_seconds;
        combined.objective_seconds += sub.objective_seconds;

        for (std::size_t d = axes.size(); d > 0;) {
            --d;
            if (++cursor[d] < axes[d].size()) break;
            cursor[d] = 0;
        }
    }
    combined.evaluations = combined.history.size();

    json summary{{"method", "grid-mixed"},
                 {"cells", cells},
                 {"grid_steps", steps},
                 {"seed", options.tune.seed},
                 {"beta", options.tune.beta},
                 {"n_random_starts", options.tune.n_random_starts},
                 {"n_iterations", options.tune.n_iterations}};
    fill_common_summary(summary, combined);
    write_file(dir / "history.csv", history_to_csv(combined, kParamNames));
    write_file(dir / "summary.json", summary.dump(2) + "\n");
    const Evaluation& best = combined.incumbent();
    log << "best t=" << detail::format_double(best.point[0]) << " g=" << best.point[1]
        << " k=" << best.point[2] << " objective=" << detail::format_double(best.value) << " ("
        << combined.evaluations << " evaluations)\n";
}

void run_gen(const GenOptions& options, std::ostream& log) {
    try {
        options.gen.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (options.out_path.empty()) throw UsageError("--out corpus path is required");
    Corpus corpus = generate_corpus(options.gen);
    fs::path path(options.out_path);
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    write_file(path, render_corpus(corpus));
    log << "wrote " << corpus.facts.size() << " facts, " << corpus.conjectures.size()
        << " conjectures to " << options.out_path << '\n';
}

}  // namespace sinetune::cli
