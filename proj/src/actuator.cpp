#include "agrione/actuator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "agrione/error.hpp"

namespace agrione::actuator {

namespace {

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

} // namespace

void ActuatorConfig::validate() const {
    if (!positive(steps_per_metre) || !positive(max_depth_m) || !positive(step_rate_hz)) {
        throw RangeError("actuator steps_per_metre, max_depth_m and step_rate_hz must be > 0");
    }
}

std::int64_t depth_to_steps(double depth_m, const ActuatorConfig& cfg) {
    return std::llround(depth_m * cfg.steps_per_metre);
}

ActuatorState state_at(std::int64_t position_steps, const ActuatorConfig& cfg) {
    return ActuatorState{position_steps,
                         static_cast<double>(position_steps) / cfg.steps_per_metre, false};
}

ActuatorState lower_to(const ActuatorState& state, double target_depth_m,
                       std::optional<double> obstruction_depth_m, const ActuatorConfig& cfg) {
    if (!(target_depth_m >= 0.0) || target_depth_m > cfg.max_depth_m) {
        throw RangeError("target depth outside [0, max_depth_m]");
    }
    const std::int64_t target = depth_to_steps(target_depth_m, cfg);
    std::int64_t reached = target;
    bool stalled = false;
    // An obstruction only stops downward travel that would cross it.
    if (obstruction_depth_m) {
        const std::int64_t stop = depth_to_steps(std::max(*obstruction_depth_m, 0.0), cfg);
        if (stop >= state.position_steps && stop < target) {
            reached = stop;
            stalled = true;
        }
    }
    ActuatorState next = state_at(reached, cfg);
    next.stalled = stalled;
    return next;
}

ActuatorState retract(const ActuatorState&) { return ActuatorState{}; }

double motion_duration(std::int64_t from_steps, std::int64_t to_steps, const ActuatorConfig& cfg) {
    return static_cast<double>(std::llabs(to_steps - from_steps)) / cfg.step_rate_hz;
}

} // namespace agrione::actuator
