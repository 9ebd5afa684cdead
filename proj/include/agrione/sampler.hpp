#pragma once

// Surface-aware collection at one point: lower the probe, let it settle,
// measure over SDI-12, validate, and either finish or retract, shift the
// probe and try again.

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "agrione/actuator.hpp"
#include "agrione/calib.hpp"
#include "agrione/fieldsim.hpp"
#include "agrione/geometry.hpp"
#include "agrione/sample.hpp"
#include "agrione/sdi12.hpp"

namespace agrione::sampler {

struct SamplerConfig {
    double target_depth_m = 0.05;
    double settle_s = 1.0;
    int max_attempts = 3;
    double reposition_offset_m = 0.10;

    // Throws ConfigError when a field is out of range or the target depth is
    // beyond the actuator's reach.
    void validate(const actuator::ActuatorConfig& actuator) const;
};

enum class Phase { Idle, Lowering, Settling, Measuring, Validating, Repositioning, Retracting, Done };

std::string_view to_string(Phase p) noexcept;
bool is_allowed_transition(Phase from, Phase to) noexcept;

struct AttemptRecord {
    int attempt_index = 1;
    std::optional<sdi12::RawReading> reading;
    std::optional<calib::Vwc> theta;
    double achieved_depth_m = 0.0;
    calib::Validity validity = calib::Validity::SensorError;
    Point2 probe_xy;
    GeoPoint probe_position;
    // Seconds since the start of this point, taken when measuring finished.
    double measured_at_s = 0.0;
};

struct PointOutcome {
    std::vector<AttemptRecord> attempts;
    calib::Validity final_validity = calib::Validity::SensorError;
    std::vector<Phase> phases;
    double elapsed_s = 0.0;       // lowering, settling and retracting over all attempts
    double final_retract_s = 0.0; // part of elapsed_s spent on the last retraction
};

// Probe shift for an attempt relative to the waypoint. Attempt 1 is on the
// waypoint; attempt k >= 2 is offset_m along bearing 90 * (k - 1) degrees
// clockwise from north.
Point2 attempt_offset(int attempt_index, double offset_m);

struct Actuator {
    actuator::ActuatorConfig config;
    actuator::ActuatorState state;
};

// Requires a retracted actuator (throws RangeError otherwise). The actuator
// is retracted again on every exit path. Sensor failures are recorded as
// SensorError attempts and never propagate.
PointOutcome attempt_point(const Waypoint& point, sdi12::SensorPort& sensor,
                           sdi12::Address address, Actuator& actuator,
                           fieldsim::SimulatedField& field, const SamplerConfig& cfg,
                           const calib::Thresholds& thresholds = {});

// Record for the first Valid attempt, or the last attempt when none is valid.
SoilSample finalize_sample(const Waypoint& point, std::span<const AttemptRecord> attempts,
                           calib::Validity final_validity, double target_depth_m,
                           double timestamp_s);

} // namespace agrione::sampler
