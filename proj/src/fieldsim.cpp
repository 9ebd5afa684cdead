#include "agrione/fieldsim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "agrione/calib.hpp"
#include "agrione/error.hpp"

namespace agrione::fieldsim {

namespace {

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

} // namespace

void FieldSpec::validate() const {
    if (!positive(width_m) || !positive(height_m)) {
        throw ConfigError("field width_m and height_m must be > 0");
    }
    if (!std::isfinite(origin_lat) || std::fabs(origin_lat) >= 90.0 || !std::isfinite(origin_lon)) {
        throw ConfigError("field origin must be a finite latitude in (-90, 90) and longitude");
    }
    if (!std::isfinite(base_theta)) {
        throw ConfigError("base_theta must be finite");
    }
    for (const auto& b : blobs) {
        if (!positive(b.sigma_m) || !std::isfinite(b.amplitude)) {
            throw ConfigError("blob sigma_m must be > 0 and amplitude finite");
        }
    }
    for (const auto& d : obstructions) {
        if (!std::isfinite(d.radius_m) || d.radius_m < 0.0) {
            throw ConfigError("obstruction radius_m must be >= 0");
        }
    }
    if (!std::isfinite(noise_sigma_raw) || noise_sigma_raw < 0.0) {
        throw ConfigError("noise_sigma_raw must be >= 0");
    }
}

bool FieldSpec::contains(Point2 p) const noexcept {
    return p.x >= 0.0 && p.x <= width_m && p.y >= 0.0 && p.y <= height_m;
}

FieldSpec default_field() {
    FieldSpec spec;
    spec.origin_lat = 45.0;
    spec.origin_lon = 10.0;
    spec.width_m = 19.0;
    spec.height_m = 20.0;
    spec.base_theta = 0.22;
    // Wetter shaded corner, drier low hill near the middle.
    spec.blobs = {Blob{{6.0, 14.0}, 4.0, 0.12}, Blob{{12.5, 8.0}, 3.5, -0.08}};
    return spec;
}

double standard_normal(Rng& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    return dist(rng);
}

double theta_true(const FieldSpec& spec, double x, double y) {
    double theta = spec.base_theta;
    for (const auto& b : spec.blobs) {
        const double dx = x - b.center.x;
        const double dy = y - b.center.y;
        theta += b.amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * b.sigma_m * b.sigma_m));
    }
    return std::clamp(theta, 0.0, kThetaCeiling);
}

std::optional<double> obstruction_at(const FieldSpec& spec, double x, double y) {
    for (const auto& d : spec.obstructions) {
        const double dx = x - d.center.x;
        const double dy = y - d.center.y;
        if (dx * dx + dy * dy <= d.radius_m * d.radius_m) {
            return kStallDepthM;
        }
    }
    return std::nullopt;
}

double sense_raw(const FieldSpec& spec, double x, double y, Rng& rng) {
    const double exact = (theta_true(spec, x, y) - calib::kVwcIntercept) / calib::kVwcSlope;
    return std::max(0.0, exact + spec.noise_sigma_raw * standard_normal(rng));
}

double sense_raw_air(const FieldSpec& spec, Rng& rng) {
    return std::max(0.0, kAirRawMean + spec.noise_sigma_raw * standard_normal(rng));
}

GeoPoint local_to_wgs84(const FieldSpec& spec, double x, double y) {
    constexpr double deg = 180.0 / std::numbers::pi;
    const double cos_lat = std::cos(spec.origin_lat / deg);
    return GeoPoint{spec.origin_lat + (y / kEarthRadiusM) * deg,
                    spec.origin_lon + (x / (kEarthRadiusM * cos_lat)) * deg};
}

Point2 wgs84_to_local(const FieldSpec& spec, double lat, double lon) {
    constexpr double deg = 180.0 / std::numbers::pi;
    const double cos_lat = std::cos(spec.origin_lat / deg);
    return Point2{(lon - spec.origin_lon) / deg * kEarthRadiusM * cos_lat,
                  (lat - spec.origin_lat) / deg * kEarthRadiusM};
}

SimulatedField::SimulatedField(FieldSpec spec) : spec_(std::move(spec)), rng_(spec_.seed) {}

std::optional<double> SimulatedField::obstruction_at(Point2 p) const {
    return fieldsim::obstruction_at(spec_, p.x, p.y);
}

void SimulatedField::place_probe(Point2 p, bool inserted) {
    probe_ = p;
    inserted_ = inserted;
}

void SimulatedField::lift_probe() { inserted_ = false; }

sdi12::RawReading SimulatedField::measure() {
    const double raw =
        inserted_ ? sense_raw(spec_, probe_.x, probe_.y, rng_) : sense_raw_air(spec_, rng_);
    return sdi12::RawReading{raw, kPassthroughTempC, kPassthroughEcUsCm};
}

VirtualSensor::VirtualSensor(SimulatedField& field, sdi12::Address address)
    : field_(field), address_(address) {}

void VirtualSensor::set_random_faults(double probability, std::uint64_t seed) {
    fault_probability_ = probability;
    fault_rng_.seed(seed);
}

SensorFault VirtualSensor::next_fault() {
    if (!queued_faults_.empty()) {
        const SensorFault f = queued_faults_.front();
        queued_faults_.pop_front();
        return f;
    }
    if (fault_probability_ <= 0.0) {
        return SensorFault::None;
    }
    static constexpr std::array kinds{SensorFault::SilentAck, SensorFault::SilentData,
                                      SensorFault::Garbled, SensorFault::WrongArity,
                                      SensorFault::OutOfRange};
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (coin(fault_rng_) >= fault_probability_) {
        return SensorFault::None;
    }
    std::uniform_int_distribution<std::size_t> pick(0, kinds.size() - 1);
    return kinds[pick(fault_rng_)];
}

std::optional<sdi12::SensorPort::Reply> VirtualSensor::transact(std::string_view command) {
    trace_.emplace_back(command);
    sdi12::Command cmd = sdi12::Command::address_query();
    try {
        cmd = sdi12::parse_command(command);
    } catch (const FrameError&) {
        return std::nullopt;
    }
    if (cmd.address() && *cmd.address() != address_) {
        return std::nullopt;
    }
    clock_s_ += kReplyLatencyS;
    auto reply = [](std::string bytes) { return Reply{std::move(bytes), kReplyLatencyS}; };

    switch (cmd.verb()) {
    case sdi12::Verb::AddressQuery:
    case sdi12::Verb::Acknowledge:
        return reply(sdi12::encode_address_reply(address_));
    case sdi12::Verb::Identify:
        return reply(std::string(1, address_.value()) + "13METER   TER12 400" +
                     std::string(sdi12::kResponseTerminator));
    case sdi12::Verb::StartMeasurement:
        ++measurements_;
        pending_ = field_.measure();
        pending_fault_ = next_fault();
        if (pending_fault_ == SensorFault::SilentAck) {
            pending_.reset();
            return std::nullopt;
        }
        return reply(sdi12::encode_measure_ack(sdi12::MeasureAck{address_, kMeasureDelayS, 3}));
    case sdi12::Verb::SendData:
        break;
    }

    ++data_requests_;
    if (!pending_ || cmd.data_index() != 0) {
        return reply(sdi12::encode_address_reply(address_));
    }
    sdi12::RawReading r = *pending_;
    const SensorFault fault = pending_fault_;
    pending_.reset();
    pending_fault_ = SensorFault::None;
    switch (fault) {
    case SensorFault::SilentData:
        return std::nullopt;
    case SensorFault::Garbled:
        return reply(std::string(1, address_.value()) + "+20x1.5+24.0" +
                     std::string(sdi12::kResponseTerminator));
    case SensorFault::WrongArity:
        return reply(sdi12::encode_data_response(
            sdi12::DataResponse{address_, {r.raw_counts, r.temp_c}}));
    case SensorFault::OutOfRange:
        r.raw_counts = -r.raw_counts - 1.0;
        break;
    case SensorFault::None:
    case SensorFault::SilentAck:
        break;
    }
    return reply(sdi12::encode_data_response(sdi12::encode_reading(address_, r)));
}

} // namespace agrione::fieldsim
