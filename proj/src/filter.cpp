#include "adukf/filter.hpp"

#include <chrono>
#include <stdexcept>

namespace adukf {

FilterRun run_filter(const FilterSpec& spec, const FilterInputs& inputs, const SystemModel& model) {
    const std::size_t n = inputs.measurements.size();
    if (inputs.times.size() != n || inputs.feed.size() != n) {
        throw std::invalid_argument("run_filter: times, feed and measurements must align");
    }
    spec.ukf.validate();
    if (spec.constrained && spec.ukf.square_root) {
        throw std::invalid_argument("run_filter: constrained update has no square-root form");
    }

    FilterRun run;
    EstimatorState state = inputs.initial;
    if (n == 0) {
        run.trajectory.push_back(state);
        return run;
    }
    state.time = inputs.times.front();
    run.trajectory.reserve(n);

    const auto start = std::chrono::steady_clock::now();
    run.trajectory.push_back(state);
    for (std::size_t k = 1; k < n; ++k) {
        const double dt = inputs.times[k] - inputs.times[k - 1];
        const double u = inputs.feed[k - 1];
        const Vector& y = inputs.measurements[k];
        if (spec.ukf.square_root) {
            state = sr_step(state, u, y, dt, inputs.noise, model, spec.ukf);
        } else {
            const Prediction pred = time_update(state, u, dt, inputs.noise, model, spec.ukf);
            if (spec.constrained) {
                ConstrainedUpdate cu = constrained_measurement_update(
                    pred.prior, pred.points, y, inputs.noise.measurement, model, *spec.constrained);
                run.solve_stats.insert(run.solve_stats.end(), cu.point_stats.begin(),
                                       cu.point_stats.end());
                state = std::move(cu.posterior);
            } else {
                state = measurement_update(pred.prior, pred.points, y, inputs.noise, model,
                                           spec.ukf);
            }
        }
        state.time = inputs.times[k];
        run.trajectory.push_back(state);
    }
    run.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return run;
}

}  // namespace adukf
