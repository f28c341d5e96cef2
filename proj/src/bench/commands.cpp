#include "adukf/bench/commands.hpp"

#include <algorithm>
#include <cmath>

#include "adukf/ad_model.hpp"
#include "adukf/errors.hpp"
#include "adukf/evaluation.hpp"

namespace adukf::bench {

namespace {

std::vector<std::string> numbered(const std::vector<std::string>& prefix,
                                  std::initializer_list<std::pair<std::string, int>> groups) {
    std::vector<std::string> out = prefix;
    for (const auto& [stem, count] : groups) {
        for (int i = 1; i <= count; ++i) {
            std::string name = stem;
            const std::size_t at = name.find('#');
            name.replace(at, 1, std::to_string(i));
            out.push_back(std::move(name));
        }
    }
    return out;
}

Metadata sim_metadata(std::uint64_t seed) {
    return {{"seed", std::to_string(seed)}, {"generator", std::string(scenario::kGeneratorId)}};
}

std::string gamma_label(std::optional<double> g) {
    return g ? format_number(*g) : std::string("nominal");
}

// Commas and newlines would break the strict CSV layout.
std::string sanitize(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

std::vector<Vector> means(const FilterRun& run) {
    std::vector<Vector> out;
    out.reserve(run.trajectory.size());
    for (const EstimatorState& s : run.trajectory) out.push_back(s.mean);
    return out;
}

}  // namespace

const std::vector<std::string>& truth_header() {
    static const auto h = numbered({"t_d", "u_Lpd"}, {{"x#", 6}, {"y#_clean", 3}});
    return h;
}

const std::vector<std::string>& measurements_header() {
    static const auto h = numbered({"t_d", "u_Lpd"}, {{"y#", 3}});
    return h;
}

const std::vector<std::string>& estimates_header() {
    static const auto h = numbered({"t_d"}, {{"xhat#", 6}, {"P_diag#", 6}});
    return h;
}

const std::vector<std::string>& summary_header() {
    static const std::vector<std::string> h{"seed",        "variant",           "gamma",
                                            "nrmse_x",     "nrmse_y",           "wall_time_s",
                                            "median_cost_evals", "median_iters", "error"};
    return h;
}

Simulation simulate(const scenario::ScenarioConfig& cfg, std::uint64_t seed) {
    Simulation sim;
    sim.truth = scenario::simulate_truth(cfg);
    sim.measurements = scenario::synthesize_measurements(sim.truth, cfg.sigma, seed);
    sim.seed = seed;
    return sim;
}

CsvTable truth_table(const Simulation& sim) {
    CsvTable t{sim_metadata(sim.seed), truth_header(), {}};
    const auto& tr = sim.truth;
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        std::vector<std::string> row{format_number(tr.times[k]), format_number(tr.feed[k])};
        for (Index i = 0; i < tr.states[k].size(); ++i) row.push_back(format_number(tr.states[k](i)));
        for (Index i = 0; i < tr.outputs[k].size(); ++i) row.push_back(format_number(tr.outputs[k](i)));
        t.rows.push_back(std::move(row));
    }
    return t;
}

CsvTable measurements_table(const Simulation& sim) {
    CsvTable t{sim_metadata(sim.seed), measurements_header(), {}};
    const auto& tr = sim.truth;
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        std::vector<std::string> row{format_number(tr.times[k]), format_number(tr.feed[k])};
        for (Index i = 0; i < sim.measurements[k].size(); ++i) {
            row.push_back(format_number(sim.measurements[k](i)));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

MeasurementSeries from_simulation(const Simulation& sim) {
    return {sim.truth.times, sim.truth.feed, sim.measurements};
}

MeasurementSeries read_measurements(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path, measurements_header());
    MeasurementSeries m;
    for (const auto& row : t.rows) {
        m.times.push_back(parse_number(row[0]));
        m.feed.push_back(parse_number(row[1]));
        Vector y(3);
        for (Index i = 0; i < 3; ++i) y(i) = parse_number(row[static_cast<std::size_t>(2 + i)]);
        m.y.push_back(std::move(y));
    }
    if (m.times.empty()) {
        throw ConfigError("measurements file '" + path.string() + "' has no data rows");
    }
    return m;
}

FilterRun estimate(const RunConfig& cfg, const Variant& variant, const MeasurementSeries& data,
                   std::optional<double> gamma) {
    const FilterSpec spec = make_filter_spec(variant, cfg.filter, gamma);
    const scenario::Tuning tuning = scenario::default_tuning(cfg.scenario.sigma);
    FilterInputs inputs;
    inputs.times = data.times;
    inputs.feed = data.feed;
    inputs.measurements = data.y;
    inputs.initial.mean = tuning.x0_hat;
    inputs.initial.cov = tuning.p0;
    inputs.noise = {tuning.q, tuning.r};
    const SystemModel model = ad::make_system_model(cfg.scenario.filter_params, cfg.scenario.integrator);
    return run_filter(spec, inputs, model);
}

CsvTable estimates_table(const FilterRun& run, const Metadata& meta) {
    CsvTable t{meta, estimates_header(), {}};
    for (const EstimatorState& s : run.trajectory) {
        std::vector<std::string> row{format_number(s.time)};
        for (Index i = 0; i < s.mean.size(); ++i) row.push_back(format_number(s.mean(i)));
        for (Index i = 0; i < s.cov.rows(); ++i) row.push_back(format_number(s.cov(i, i)));
        t.rows.push_back(std::move(row));
    }
    return t;
}

double effective_gamma(const FilterBlock& block, std::optional<double> gamma) {
    if (gamma) return *gamma;
    if (block.tuning.gamma_override) return *block.tuning.gamma_override;
    return scaling(ad::kStates, block.tuning).gamma;
}

std::vector<SummaryRow> run_benchmark(const RunConfig& cfg, const BenchmarkOptions& options) {
    std::vector<Variant> variants;
    const auto& names = options.variant_filter.empty() ? cfg.benchmark.variants : options.variant_filter;
    if (names.empty()) {
        variants = registered_variants();
    } else {
        for (const std::string& n : names) variants.push_back(require_variant(n));
    }

    std::vector<SummaryRow> rows;
    for (std::uint64_t seed : cfg.benchmark.seeds) {
        const Simulation sim = simulate(cfg.scenario, seed);
        const MeasurementSeries data = from_simulation(sim);
        for (const Variant& v : variants) {
            // The spread sweep applies to gain-based filters; constrained ones use the configured spread.
            std::vector<std::optional<double>> gammas;
            if (options.gamma) {
                gammas = {options.gamma};
            } else if (v.constrained()) {
                gammas = {std::nullopt};
            } else {
                gammas = cfg.benchmark.gammas;
            }
            for (const auto& g : gammas) {
                SummaryRow row;
                row.seed = seed;
                row.variant = v.name;
                row.gamma = effective_gamma(cfg.filter, g);
                try {
                    const FilterRun run = estimate(cfg, v, data, g);
                    const auto est = means(run);
                    row.nrmse_x = eval::group_nrmse(est, sim.truth.states, eval::kUnmeasured);
                    row.nrmse_y = eval::group_nrmse(est, sim.truth.states, eval::kMeasured);
                    row.wall_time = run.wall_time;
                    if (v.constrained()) {
                        std::vector<double> evals;
                        std::vector<double> iters;
                        for (const auto& s : run.solve_stats) {
                            evals.push_back(s.cost_evaluations);
                            iters.push_back(s.iterations);
                        }
                        if (*v.formulation != Formulation::qp) row.median_cost_evals = median(evals);
                        row.median_iters = median(iters);
                    }
                    if (options.estimates_dir) {
                        Metadata meta = sim_metadata(seed);
                        meta["variant"] = v.name;
                        meta["gamma"] = format_number(row.gamma);
                        write_csv(*options.estimates_dir / ("estimates_s" + std::to_string(seed) + "_" +
                                                            v.name + "_g" + gamma_label(g) + ".csv"),
                                  estimates_table(run, meta));
                    }
                } catch (const NumericalError& e) {
                    row.nrmse_x = row.nrmse_y = row.wall_time = std::nan("");
                    row.error = sanitize(e.what());
                }
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

CsvTable summary_table(const std::vector<SummaryRow>& rows) {
    CsvTable t{{}, summary_header(), {}};
    auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
    for (const SummaryRow& r : rows) {
        t.rows.push_back({std::to_string(r.seed), r.variant, format_number(r.gamma),
                          format_number(r.nrmse_x), format_number(r.nrmse_y),
                          format_number(r.wall_time), opt(r.median_cost_evals), opt(r.median_iters),
                          r.error});
    }
    return t;
}

void cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const Simulation sim = simulate(cfg.scenario, cfg.scenario.seed);
    write_csv(out_dir / "truth.csv", truth_table(sim));
    write_csv(out_dir / "measurements.csv", measurements_table(sim));
}

void cmd_estimate(const RunConfig& cfg, const std::filesystem::path& measurements,
                  const std::filesystem::path& out_csv, std::optional<double> gamma) {
    const Variant v = require_variant(cfg.filter.variant);
    const MeasurementSeries data = read_measurements(measurements);
    const FilterRun run = estimate(cfg, v, data, gamma);
    Metadata meta{{"variant", v.name}, {"gamma", format_number(effective_gamma(cfg.filter, gamma))}};
    if (out_csv.has_parent_path()) std::filesystem::create_directories(out_csv.parent_path());
    write_csv(out_csv, estimates_table(run, meta));
}

void cmd_benchmark(const RunConfig& cfg, const std::filesystem::path& out_dir,
                   const BenchmarkOptions& options) {
    std::filesystem::create_directories(out_dir);
    BenchmarkOptions opts = options;
    if (cfg.output.write_estimates && !opts.estimates_dir) opts.estimates_dir = out_dir;
    const auto rows = run_benchmark(cfg, opts);
    write_csv(out_dir / "summary.csv", summary_table(rows));
}

}  // namespace adukf::bench
