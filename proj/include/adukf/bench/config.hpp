#pragma once
// JSON run configuration. Every key is optional; unknown keys are rejected
// so that typos do not silently fall back to defaults.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adukf/optimizers.hpp"
#include "adukf/scenario.hpp"
#include "adukf/sigma_points.hpp"

namespace adukf::bench {

struct FilterBlock {
    std::string variant = "ukf-add";
    UkfTuning tuning;
    bool redraw_before_measurement = false;
    opt::QpOptions qp;
    opt::NlpOptions nlp;
};

struct OutputBlock {
    std::filesystem::path dir = "out";
    bool write_estimates = true;  ///< benchmark: one estimates CSV per cell
};

struct BenchmarkBlock {
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    /// Empty means every registered variant.
    std::vector<std::string> variants;
    /// Spreads swept for unconstrained variants; nullopt is the nominal sqrt(n + lambda).
    std::vector<std::optional<double>> gammas{std::nullopt, 1.0};
};

struct RunConfig {
    scenario::ScenarioConfig scenario;
    FilterBlock filter;
    OutputBlock output;
    BenchmarkBlock benchmark;
};

/// Throws ConfigError naming the offending key, e.g. "scenario.dt_h".
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace adukf::bench
