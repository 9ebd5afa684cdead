#include "agrione/mission.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <json.hpp>

#include "agrione/error.hpp"

namespace agrione::mission {

namespace {

double cross(Point2 o, Point2 a, Point2 b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double shoelace(std::span<const Point2> ring) {
    double twice = 0.0;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        const Point2 a = ring[i];
        const Point2 b = ring[(i + 1) % ring.size()];
        twice += a.x * b.y - b.x * a.y;
    }
    return std::fabs(twice) / 2.0;
}

std::vector<Waypoint> nearest_neighbour_order(std::vector<Point2> pending) {
    std::vector<Waypoint> ordered;
    ordered.reserve(pending.size());
    Point2 at{0.0, 0.0};
    while (!pending.empty()) {
        auto nearest = std::min_element(pending.begin(), pending.end(), [&](Point2 a, Point2 b) {
            return distance(at, a) < distance(at, b);
        });
        at = *nearest;
        ordered.push_back(Waypoint{static_cast<int>(ordered.size()) + 1, at});
        pending.erase(nearest);
    }
    return ordered;
}

} // namespace

void MissionConfig::validate() const {
    if (!std::isfinite(speed_mps) || speed_mps <= 0.0) {
        throw ConfigError("speed_mps must be > 0");
    }
    if (waypoints.empty()) {
        throw ConfigError("mission needs at least one waypoint");
    }
    field.validate();
    try {
        actuator.validate();
    } catch (const RangeError& e) {
        throw ConfigError(e.what());
    }
    sampler.validate(actuator);
    if (!sdi12::Address::is_valid(sensor_address)) {
        throw ConfigError("invalid sensor address");
    }
    if (!(fault_probability >= 0.0 && fault_probability <= 1.0)) {
        throw ConfigError("fault_probability must lie in [0, 1]");
    }
    std::vector<int> ids;
    for (const auto& w : waypoints) {
        if (!field.contains(w.xy)) {
            throw ConfigError("waypoint " + std::to_string(w.id) + " lies outside the field");
        }
        ids.push_back(w.id);
    }
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
        throw ConfigError("waypoint ids must be unique");
    }
}

std::vector<Waypoint> generate_waypoints(const fieldsim::FieldSpec& field, int count,
                                         double min_spacing_m, std::uint64_t seed) {
    if (count < 1) {
        throw InfeasibleError("waypoint count must be >= 1");
    }
    fieldsim::Rng rng(seed);
    std::uniform_real_distribution<double> ux(0.0, field.width_m);
    std::uniform_real_distribution<double> uy(0.0, field.height_m);
    std::vector<Point2> accepted;
    std::size_t trials = 0;
    while (accepted.size() < static_cast<std::size_t>(count)) {
        if (++trials > kMaxPlacementTrials) {
            throw InfeasibleError("could not place " + std::to_string(count) + " points " +
                                  std::to_string(min_spacing_m) + " m apart");
        }
        const Point2 candidate{ux(rng), uy(rng)};
        const bool clear = std::none_of(accepted.begin(), accepted.end(), [&](Point2 p) {
            return distance(p, candidate) < min_spacing_m;
        });
        if (clear) {
            accepted.push_back(candidate);
        }
    }
    return nearest_neighbour_order(std::move(accepted));
}

MissionResult run_mission(const MissionConfig& cfg) {
    cfg.validate();
    fieldsim::SimulatedField field(cfg.field);
    const sdi12::Address address(cfg.sensor_address);
    fieldsim::VirtualSensor sensor(field, address);
    if (cfg.fault_probability > 0.0) {
        sensor.set_random_faults(cfg.fault_probability, cfg.field.seed ^ 0x9e3779b97f4a7c15ULL);
    }
    sampler::Actuator actuator{cfg.actuator, {}};

    MissionResult result;
    double clock = 0.0;
    Point2 at{0.0, 0.0};
    for (const auto& wp : cfg.waypoints) {
        clock += distance(at, wp.xy) / cfg.speed_mps;
        at = wp.xy;
        const auto outcome =
            sampler::attempt_point(wp, sensor, address, actuator, field, cfg.sampler, cfg.thresholds);
        const double timestamp = clock + outcome.attempts.back().measured_at_s;
        result.samples.push_back(sampler::finalize_sample(
            wp, outcome.attempts, outcome.final_validity, cfg.sampler.target_depth_m, timestamp));
        clock += outcome.elapsed_s;
    }
    result.summary = summarize(result.samples, clock, cfg.field);
    return result;
}

std::vector<Point2> convex_hull(std::span<const Point2> points) {
    std::vector<Point2> p(points.begin(), points.end());
    std::sort(p.begin(), p.end(), [](Point2 a, Point2 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    p.erase(std::unique(p.begin(), p.end()), p.end());
    if (p.size() < 3) {
        return p;
    }
    std::vector<Point2> hull(2 * p.size());
    std::size_t k = 0;
    for (const Point2& q : p) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], q) <= 0.0) {
            --k;
        }
        hull[k++] = q;
    }
    for (std::size_t i = p.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], p[i]) <= 0.0) {
            --k;
        }
        hull[k++] = p[i];
    }
    hull.resize(k - 1);
    return hull;
}

double convex_hull_area(std::span<const Point2> points) {
    if (points.size() < 3) {
        throw DegenerateError("convex hull needs at least three points");
    }
    const auto hull = convex_hull(points);
    const double area = hull.size() < 3 ? 0.0 : shoelace(hull);
    if (area == 0.0) {
        throw DegenerateError("points are collinear");
    }
    return area;
}

double convex_hull_area(std::span<const SoilSample> samples, const fieldsim::FieldSpec& field) {
    std::vector<Point2> local;
    local.reserve(samples.size());
    for (const auto& s : samples) {
        local.push_back(fieldsim::wgs84_to_local(field, s.lat, s.lon));
    }
    return convex_hull_area(local);
}

MissionSummary summarize(std::span<const SoilSample> samples, double duration_s,
                         const fieldsim::FieldSpec& field) {
    MissionSummary s;
    s.points_total = static_cast<int>(samples.size());
    s.points_valid = static_cast<int>(std::count_if(samples.begin(), samples.end(), [](const auto& x) {
        return x.status == calib::Validity::Valid;
    }));
    s.points_invalid = s.points_total - s.points_valid;
    s.duration_s = duration_s;
    try {
        s.area_convex_hull_m2 = convex_hull_area(samples, field);
    } catch (const DegenerateError&) {
        s.area_convex_hull_m2 = 0.0;
    }
    return s;
}

std::string summary_to_json(const MissionSummary& summary) {
    nlohmann::ordered_json j;
    j["points_total"] = summary.points_total;
    j["points_valid"] = summary.points_valid;
    j["points_invalid"] = summary.points_invalid;
    j["duration_s"] = summary.duration_s;
    j["area_convex_hull_m2"] = summary.area_convex_hull_m2;
    return j.dump();
}

} // namespace agrione::mission
