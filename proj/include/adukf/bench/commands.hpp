#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "adukf/bench/config.hpp"
#include "adukf/bench/csv.hpp"
#include "adukf/bench/variants.hpp"
#include "adukf/filter.hpp"
#include "adukf/scenario.hpp"

namespace adukf::bench {

const std::vector<std::string>& truth_header();
const std::vector<std::string>& measurements_header();
const std::vector<std::string>& estimates_header();
const std::vector<std::string>& summary_header();

struct Simulation {
    scenario::TruthTrajectory truth;
    std::vector<Vector> measurements;
    std::uint64_t seed{};
};

Simulation simulate(const scenario::ScenarioConfig& cfg, std::uint64_t seed);

CsvTable truth_table(const Simulation& sim);
CsvTable measurements_table(const Simulation& sim);

struct MeasurementSeries {
    std::vector<double> times;
    std::vector<double> feed;
    std::vector<Vector> y;
};

MeasurementSeries from_simulation(const Simulation& sim);
/// Throws ConfigError on schema mismatch.
MeasurementSeries read_measurements(const std::filesystem::path& path);

/// Runs one variant with the default tuning for the scenario noise level.
FilterRun estimate(const RunConfig& cfg, const Variant& variant, const MeasurementSeries& data,
                   std::optional<double> gamma = std::nullopt);

CsvTable estimates_table(const FilterRun& run, const Metadata& meta = {});

struct SummaryRow {
    std::uint64_t seed{};
    std::string variant;
    double gamma{};
    double nrmse_x{};
    double nrmse_y{};
    double wall_time{};
    std::optional<double> median_cost_evals;  ///< NLP formulations only
    std::optional<double> median_iters;       ///< constrained formulations only
    std::string error;                        ///< empty on success
};

/// Spread actually used by a variant: the override or sqrt(n + lambda).
double effective_gamma(const FilterBlock& block, std::optional<double> gamma);

struct BenchmarkOptions {
    std::optional<std::filesystem::path> estimates_dir;
    std::vector<std::string> variant_filter;  ///< overrides the config list when non-empty
    std::optional<double> gamma;              ///< replaces the gamma sweep when set
};

/// One row per (seed, variant, gamma) cell in deterministic order. A cell that
/// throws a numerical error is recorded with its message; the others proceed.
std::vector<SummaryRow> run_benchmark(const RunConfig& cfg, const BenchmarkOptions& options = {});

CsvTable summary_table(const std::vector<SummaryRow>& rows);

// Command entry points. They throw ConfigError / NumericalError; the CLI maps
// those to exit codes.
void cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out_dir);
void cmd_estimate(const RunConfig& cfg, const std::filesystem::path& measurements,
                  const std::filesystem::path& out_csv, std::optional<double> gamma);
void cmd_benchmark(const RunConfig& cfg, const std::filesystem::path& out_dir,
                   const BenchmarkOptions& options);

}  // namespace adukf::bench
