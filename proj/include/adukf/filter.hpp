#pragma once

#include <optional>
#include <vector>

#include "adukf/constrained.hpp"
#include "adukf/ukf.hpp"

namespace adukf {

/// A complete filter: unconstrained settings plus an optional constrained update.
struct FilterSpec {
    VariantConfig ukf;
    std::optional<ConstrainedSetup> constrained;
};

/// Sample-aligned inputs. feed[k] is held over [times[k], times[k+1]).
/// The initial state is the estimate at times[0]; measurements[0] is not used.
struct FilterInputs {
    std::vector<double> times;
    std::vector<double> feed;
    std::vector<Vector> measurements;
    EstimatorState initial;
    NoiseCovariances noise;
};

struct FilterRun {
    std::vector<EstimatorState> trajectory;  ///< one state per sample, starting at times[0]
    std::vector<opt::SolveStats> solve_stats;  ///< every per-point solve (constrained only)
    double wall_time{};                        ///< seconds, excluding I/O
};

/// One time update and one measurement update per sample after the first.
/// Deterministic for identical inputs.
FilterRun run_filter(const FilterSpec& spec, const FilterInputs& inputs, const SystemModel& model);

}  // namespace adukf
