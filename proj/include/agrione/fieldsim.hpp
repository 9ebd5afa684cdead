#pragma once

// Deterministic synthetic field: a ground-truth moisture surface, surface
// obstructions that stop the probe, an inverse TEROS 12 model that turns
// moisture back into RAW counts, and a virtual SDI-12 sensor on top of it.

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "agrione/geometry.hpp"
#include "agrione/sdi12.hpp"

namespace agrione::fieldsim {

inline constexpr double kThetaCeiling = 0.60;
inline constexpr double kStallDepthM = 0.01;
inline constexpr double kAirRawMean = 200.0;
inline constexpr double kPassthroughTempC = 24.0;
inline constexpr double kPassthroughEcUsCm = 150.0;
inline constexpr double kEarthRadiusM = 6371000.0;

using Rng = std::mt19937_64;

// Gaussian bump added to the base moisture level.
struct Blob {
    Point2 center;
    double sigma_m = 1.0;
    double amplitude = 0.0;
};

// Surface disk where the probe cannot penetrate. Boundary is inside.
struct Disk {
    Point2 center;
    double radius_m = 0.0;
};

struct FieldSpec {
    double origin_lat = 0.0;
    double origin_lon = 0.0;
    double width_m = 1.0;
    double height_m = 1.0;
    double base_theta = 0.2;
    std::vector<Blob> blobs;
    std::vector<Disk> obstructions;
    double noise_sigma_raw = 0.0;
    std::uint64_t seed = 0;

    // Throws ConfigError on non-positive extents, sigmas or radii.
    void validate() const;
    bool contains(Point2 p) const noexcept;
};

// Two-blob field over the 19 x 20 m arena used by the bundled scenarios.
FieldSpec default_field();

double standard_normal(Rng& rng);

double theta_true(const FieldSpec& spec, double x, double y);
std::optional<double> obstruction_at(const FieldSpec& spec, double x, double y);

// RAW counts for a fully inserted probe (inverse calibration plus noise).
double sense_raw(const FieldSpec& spec, double x, double y, Rng& rng);
// RAW counts for a probe left in air.
double sense_raw_air(const FieldSpec& spec, Rng& rng);

GeoPoint local_to_wgs84(const FieldSpec& spec, double x, double y);
Point2 wgs84_to_local(const FieldSpec& spec, double lat, double lon);

// The field as the probe sees it. Owns the only random generator.
class SimulatedField {
public:
    explicit SimulatedField(FieldSpec spec);

    const FieldSpec& spec() const noexcept { return spec_; }
    Rng& rng() noexcept { return rng_; }

    std::optional<double> obstruction_at(Point2 p) const;

    void place_probe(Point2 p, bool inserted);
    void lift_probe();

    // Draws one reading for the current probe placement.
    sdi12::RawReading measure();

private:
    FieldSpec spec_;
    Rng rng_;
    Point2 probe_;
    bool inserted_ = false;
};

enum class SensorFault {
    None,
    SilentAck,   // no reply to aM!
    SilentData,  // acknowledges, then no reply to aD0!
    Garbled,     // data frame with a malformed value
    WrongArity,  // two values instead of three
    OutOfRange,  // negative RAW counts
};

// TEROS-12-like responder on a simulated SDI-12 bus. Each aM! takes one
// reading from the field; the following aD0! returns it.
class VirtualSensor final : public sdi12::SensorPort {
public:
    static constexpr int kMeasureDelayS = 1;
    static constexpr double kReplyLatencyS = 0.015;

    explicit VirtualSensor(SimulatedField& field, sdi12::Address address = sdi12::Address('0'));

    // Queued faults apply to successive measurements, in order.
    void inject(SensorFault fault) { queued_faults_.push_back(fault); }
    // Each measurement without a queued fault fails with this probability,
    // cycling through the fault kinds. Uses its own generator.
    void set_random_faults(double probability, std::uint64_t seed);

    std::optional<Reply> transact(std::string_view command) override;
    void wait(double seconds) override { clock_s_ += seconds; }

    const std::vector<std::string>& trace() const noexcept { return trace_; }
    std::size_t measurements_started() const noexcept { return measurements_; }
    std::size_t data_requests() const noexcept { return data_requests_; }
    double clock_s() const noexcept { return clock_s_; }

private:
    SensorFault next_fault();

    SimulatedField& field_;
    sdi12::Address address_;
    std::deque<SensorFault> queued_faults_;
    double fault_probability_ = 0.0;
    Rng fault_rng_;
    std::optional<sdi12::RawReading> pending_;
    SensorFault pending_fault_ = SensorFault::None;
    std::vector<std::string> trace_;
    std::size_t measurements_ = 0;
    std::size_t data_requests_ = 0;
    double clock_s_ = 0.0;
};

} // namespace agrione::fieldsim
