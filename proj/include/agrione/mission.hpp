#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "agrione/actuator.hpp"
#include "agrione/calib.hpp"
#include "agrione/fieldsim.hpp"
#include "agrione/geometry.hpp"
#include "agrione/sample.hpp"
#include "agrione/sampler.hpp"

namespace agrione::mission {

inline constexpr std::size_t kMaxPlacementTrials = 100000;

struct MissionConfig {
    double speed_mps = 0.5;
    std::vector<Waypoint> waypoints;
    fieldsim::FieldSpec field;
    sampler::SamplerConfig sampler;
    actuator::ActuatorConfig actuator;
    calib::Thresholds thresholds;
    char sensor_address = '0';
    // Probability that a measurement suffers an injected sensor fault.
    double fault_probability = 0.0;

    // Throws ConfigError on any broken cross-module constraint.
    void validate() const;
};

struct MissionSummary {
    int points_total = 0;
    int points_valid = 0;
    int points_invalid = 0;
    double duration_s = 0.0;
    double area_convex_hull_m2 = 0.0;

    friend bool operator==(const MissionSummary&, const MissionSummary&) = default;
};

struct MissionResult {
    std::vector<SoilSample> samples;
    MissionSummary summary;
};

// Rejection-sampled points at least min_spacing_m apart, ids 1..count in
// nearest-neighbour order starting from the field origin. Throws
// InfeasibleError after kMaxPlacementTrials draws.
std::vector<Waypoint> generate_waypoints(const fieldsim::FieldSpec& field, int count,
                                         double min_spacing_m, std::uint64_t seed);

MissionResult run_mission(const MissionConfig& cfg);

// Counter-clockwise hull, collinear points dropped.
std::vector<Point2> convex_hull(std::span<const Point2> points);
// Throws DegenerateError for fewer than three points or a collinear set.
double convex_hull_area(std::span<const Point2> points);
double convex_hull_area(std::span<const SoilSample> samples, const fieldsim::FieldSpec& field);

MissionSummary summarize(std::span<const SoilSample> samples, double duration_s,
                         const fieldsim::FieldSpec& field);

std::string summary_to_json(const MissionSummary& summary);

} // namespace agrione::mission
