#pragma once

#include <cstdint>
#include <optional>

namespace agrione::actuator {

// Stepper-driven linear actuator carrying the probe. Position 0 is fully
// retracted; depth grows with step count.
struct ActuatorConfig {
    double steps_per_metre = 20000.0;
    double max_depth_m = 0.15;
    double step_rate_hz = 500.0;

    // Throws RangeError unless every field is finite and strictly positive.
    void validate() const;
};

struct ActuatorState {
    std::int64_t position_steps = 0;
    double depth_m = 0.0;
    bool stalled = false;

    friend bool operator==(const ActuatorState&, const ActuatorState&) = default;
};

std::int64_t depth_to_steps(double depth_m, const ActuatorConfig& cfg);
ActuatorState state_at(std::int64_t position_steps, const ActuatorConfig& cfg);

// Drives to target_depth_m (rounded to whole steps). An obstruction shallower
// than the target stops the probe at the obstruction and sets stalled.
// Throws RangeError when the target is negative or beyond max_depth_m.
ActuatorState lower_to(const ActuatorState& state, double target_depth_m,
                       std::optional<double> obstruction_depth_m, const ActuatorConfig& cfg);

ActuatorState retract(const ActuatorState& state);

double motion_duration(std::int64_t from_steps, std::int64_t to_steps, const ActuatorConfig& cfg);

} // namespace agrione::actuator
