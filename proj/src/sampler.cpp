#include "agrione/sampler.hpp"

#include <cmath>

#include "agrione/error.hpp"

namespace agrione::sampler {

namespace {

// Walks the phase graph and refuses edges the collection loop does not have.
class PhaseTracker {
public:
    explicit PhaseTracker(std::vector<Phase>& trace) : trace_(trace) { trace_.push_back(Phase::Idle); }

    void enter(Phase next) {
        if (!is_allowed_transition(trace_.back(), next)) {
            throw std::logic_error(std::string("illegal sampler transition ") +
                                   std::string(to_string(trace_.back())) + " -> " +
                                   std::string(to_string(next)));
        }
        trace_.push_back(next);
    }

private:
    std::vector<Phase>& trace_;
};

// Leaves the probe retracted and lifted however attempt_point exits.
class RetractGuard {
public:
    RetractGuard(Actuator& actuator, fieldsim::SimulatedField& field)
        : actuator_(actuator), field_(field) {}
    ~RetractGuard() {
        actuator_.state = actuator::retract(actuator_.state);
        field_.lift_probe();
    }
    RetractGuard(const RetractGuard&) = delete;
    RetractGuard& operator=(const RetractGuard&) = delete;

private:
    Actuator& actuator_;
    fieldsim::SimulatedField& field_;
};

} // namespace

void SamplerConfig::validate(const actuator::ActuatorConfig& actuator) const {
    if (!std::isfinite(target_depth_m) || target_depth_m < 0.0 ||
        target_depth_m > actuator.max_depth_m) {
        throw ConfigError("target_depth_m must lie in [0, max_depth_m]");
    }
    if (!std::isfinite(settle_s) || settle_s < 0.0) {
        throw ConfigError("settle_s must be >= 0");
    }
    if (max_attempts < 1) {
        throw ConfigError("max_attempts must be >= 1");
    }
    if (!std::isfinite(reposition_offset_m)) {
        throw ConfigError("reposition_offset_m must be finite");
    }
}

std::string_view to_string(Phase p) noexcept {
    switch (p) {
    case Phase::Idle: return "Idle";
    case Phase::Lowering: return "Lowering";
    case Phase::Settling: return "Settling";
    case Phase::Measuring: return "Measuring";
    case Phase::Validating: return "Validating";
    case Phase::Repositioning: return "Repositioning";
    case Phase::Retracting: return "Retracting";
    case Phase::Done: return "Done";
    }
    return "Idle";
}

bool is_allowed_transition(Phase from, Phase to) noexcept {
    switch (from) {
    case Phase::Idle: return to == Phase::Lowering;
    case Phase::Lowering: return to == Phase::Settling;
    case Phase::Settling: return to == Phase::Measuring;
    case Phase::Measuring: return to == Phase::Validating;
    case Phase::Validating: return to == Phase::Retracting;
    case Phase::Retracting: return to == Phase::Repositioning || to == Phase::Done;
    case Phase::Repositioning: return to == Phase::Lowering;
    case Phase::Done: return false;
    }
    return false;
}

Point2 attempt_offset(int attempt_index, double offset_m) {
    if (attempt_index <= 1) {
        return {};
    }
    const int quarter_turns = (attempt_index - 1) % 4;
    // Exact unit vectors for the four compass bearings.
    static constexpr Point2 kBearing[4] = {{0.0, 1.0}, {1.0, 0.0}, {0.0, -1.0}, {-1.0, 0.0}};
    return {kBearing[quarter_turns].x * offset_m, kBearing[quarter_turns].y * offset_m};
}

PointOutcome attempt_point(const Waypoint& point, sdi12::SensorPort& sensor,
                           sdi12::Address address, Actuator& actuator,
                           fieldsim::SimulatedField& field, const SamplerConfig& cfg,
                           const calib::Thresholds& thresholds) {
    if (actuator.state.position_steps != 0) {
        throw RangeError("attempt_point needs a retracted actuator");
    }
    PointOutcome out;
    PhaseTracker phase(out.phases);
    RetractGuard guard(actuator, field);
    double clock = 0.0;

    for (int k = 1; k <= cfg.max_attempts; ++k) {
        AttemptRecord rec;
        rec.attempt_index = k;
        rec.probe_xy = point.xy + attempt_offset(k, cfg.reposition_offset_m);
        rec.probe_position = fieldsim::local_to_wgs84(field.spec(), rec.probe_xy.x, rec.probe_xy.y);

        phase.enter(Phase::Lowering);
        const auto before = actuator.state.position_steps;
        actuator.state = actuator::lower_to(actuator.state, cfg.target_depth_m,
                                            field.obstruction_at(rec.probe_xy), actuator.config);
        clock += actuator::motion_duration(before, actuator.state.position_steps, actuator.config);
        rec.achieved_depth_m = actuator.state.depth_m;
        field.place_probe(rec.probe_xy, !actuator.state.stalled);

        phase.enter(Phase::Settling);
        clock += cfg.settle_s;

        phase.enter(Phase::Measuring);
        try {
            rec.reading = sdi12::run_transaction(sensor, address);
        } catch (const Error&) {
            rec.reading.reset();
        }
        rec.measured_at_s = clock;

        phase.enter(Phase::Validating);
        if (rec.reading) {
            rec.theta = calib::raw_to_vwc(rec.reading->raw_counts);
            rec.validity = calib::classify(*rec.theta, rec.achieved_depth_m, cfg.target_depth_m,
                                           thresholds);
        } else {
            rec.validity = calib::Validity::SensorError;
        }
        const bool valid = rec.validity == calib::Validity::Valid;
        out.attempts.push_back(rec);

        phase.enter(Phase::Retracting);
        const double retract_s =
            actuator::motion_duration(actuator.state.position_steps, 0, actuator.config);
        actuator.state = actuator::retract(actuator.state);
        field.lift_probe();
        clock += retract_s;

        if (valid || k == cfg.max_attempts) {
            out.final_retract_s = retract_s;
            out.final_validity = rec.validity;
            phase.enter(Phase::Done);
            break;
        }
        phase.enter(Phase::Repositioning);
    }
    out.elapsed_s = clock;
    return out;
}

SoilSample finalize_sample(const Waypoint& point, std::span<const AttemptRecord> attempts,
                           calib::Validity final_validity, double target_depth_m,
                           double timestamp_s) {
    if (attempts.empty()) {
        throw EmptyInputError("finalize_sample needs at least one attempt");
    }
    const AttemptRecord* chosen = &attempts.back();
    for (const auto& a : attempts) {
        if (a.validity == calib::Validity::Valid) {
            chosen = &a;
            break;
        }
    }
    SoilSample s;
    s.point_id = point.id;
    s.timestamp_s = timestamp_s;
    s.lat = chosen->probe_position.lat;
    s.lon = chosen->probe_position.lon;
    s.target_depth_m = target_depth_m;
    s.achieved_depth_m = chosen->achieved_depth_m;
    s.attempts = static_cast<int>(attempts.size());
    if (chosen->reading) {
        s.raw_counts = chosen->reading->raw_counts;
        s.temp_c = chosen->reading->temp_c;
        s.ec_us_cm = chosen->reading->ec_us_cm;
    }
    if (chosen->theta) {
        s.theta = chosen->theta->theta;
    }
    s.status = final_validity;
    return s;
}

} // namespace agrione::sampler
