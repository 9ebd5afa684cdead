#include "agrione/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "agrione/error.hpp"

namespace agrione::scenario {

namespace {

using Json = nlohmann::json;

// A JSON object plus its path, for error messages and unknown-key checks.
class Section {
public:
    Section(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) {
            throw ConfigError(path_ + ": expected an object");
        }
    }

    ~Section() noexcept(false) {
        if (std::uncaught_exceptions() > 0) {
            return;
        }
        for (const auto& [key, value] : j_.items()) {
            if (!seen_.count(key)) {
                throw ConfigError(path_ + "." + key + ": unknown key");
            }
        }
    }

    bool has(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key);
    }

    const Json& raw(const std::string& key) {
        if (!has(key)) {
            throw ConfigError(path_ + "." + key + ": required key missing");
        }
        return j_.at(key);
    }

    Section child(const std::string& key) { return Section(raw(key), path_ + "." + key); }

    void number(const std::string& key, double& out) {
        if (!has(key)) {
            return;
        }
        out = required_number(key);
    }

    double required_number(const std::string& key) {
        const Json& v = raw(key);
        if (!v.is_number()) {
            throw ConfigError(path_ + "." + key + ": expected a number");
        }
        return v.get<double>();
    }

    void integer(const std::string& key, int& out) {
        if (!has(key)) {
            return;
        }
        const Json& v = raw(key);
        if (!v.is_number_integer()) {
            throw ConfigError(path_ + "." + key + ": expected an integer");
        }
        out = v.get<int>();
    }

    std::uint64_t required_u64(const std::string& key) {
        const Json& v = raw(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
            throw ConfigError(path_ + "." + key + ": expected a non-negative integer");
        }
        return v.get<std::uint64_t>();
    }

    const std::string& path() const { return path_; }

private:
    const Json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

fieldsim::FieldSpec parse_field(Section s) {
    fieldsim::FieldSpec f;
    f.origin_lat = s.required_number("origin_lat");
    f.origin_lon = s.required_number("origin_lon");
    f.width_m = s.required_number("width_m");
    f.height_m = s.required_number("height_m");
    s.number("base_theta", f.base_theta);
    s.number("noise_sigma_raw", f.noise_sigma_raw);
    f.seed = s.required_u64("seed");
    if (s.has("blobs")) {
        const Json& arr = s.raw("blobs");
        if (!arr.is_array()) {
            throw ConfigError(s.path() + ".blobs: expected an array");
        }
        for (std::size_t i = 0; i < arr.size(); ++i) {
            Section b(arr[i], s.path() + ".blobs[" + std::to_string(i) + "]");
            f.blobs.push_back(fieldsim::Blob{{b.required_number("x"), b.required_number("y")},
                                             b.required_number("sigma_m"),
                                             b.required_number("amplitude")});
        }
    }
    if (s.has("obstructions")) {
        const Json& arr = s.raw("obstructions");
        if (!arr.is_array()) {
            throw ConfigError(s.path() + ".obstructions: expected an array");
        }
        for (std::size_t i = 0; i < arr.size(); ++i) {
            Section d(arr[i], s.path() + ".obstructions[" + std::to_string(i) + "]");
            f.obstructions.push_back(fieldsim::Disk{{d.required_number("x"), d.required_number("y")},
                                                    d.required_number("radius_m")});
        }
    }
    f.validate();
    return f;
}

std::vector<Waypoint> parse_waypoints(const Json& j, const std::string& path,
                                      const fieldsim::FieldSpec& field) {
    if (j.is_object()) {
        Section s(j, path);
        Section g = s.child("generate");
        int count = 0;
        g.integer("count", count);
        const double spacing = g.required_number("min_spacing_m");
        const std::uint64_t seed = g.required_u64("seed");
        try {
            return mission::generate_waypoints(field, count, spacing, seed);
        } catch (const InfeasibleError& e) {
            throw ConfigError(path + ".generate: " + e.what());
        }
    }
    if (!j.is_array()) {
        throw ConfigError(path + ": expected an array or a generate object");
    }
    std::vector<Waypoint> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        Section w(j[i], path + "[" + std::to_string(i) + "]");
        Waypoint wp;
        w.integer("id", wp.id);
        if (!w.has("id")) {
            throw ConfigError(w.path() + ".id: required key missing");
        }
        if (w.has("lat") || w.has("lon")) {
            wp.xy = fieldsim::wgs84_to_local(field, w.required_number("lat"), w.required_number("lon"));
        } else {
            wp.xy = {w.required_number("x"), w.required_number("y")};
        }
        out.push_back(wp);
    }
    return out;
}

} // namespace

ScenarioConfig parse_scenario(std::string_view json_text) {
    Json root;
    try {
        root = Json::parse(json_text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
    }
    ScenarioConfig cfg;
    auto& m = cfg.mission;
    {
        Section top(root, "$");
        m.field = parse_field(top.child("field"));

        Section ms = top.child("mission");
        ms.number("speed_mps", m.speed_mps);
        ms.number("fault_probability", m.fault_probability);
        if (ms.has("sensor_address")) {
            const Json& a = ms.raw("sensor_address");
            if (!a.is_string() || a.get<std::string>().size() != 1) {
                throw ConfigError("$.mission.sensor_address: expected a one-character string");
            }
            m.sensor_address = a.get<std::string>()[0];
        }
        m.waypoints = parse_waypoints(ms.raw("waypoints"), "$.mission.waypoints", m.field);

        if (top.has("sampler")) {
            Section s = top.child("sampler");
            s.number("target_depth_m", m.sampler.target_depth_m);
            s.number("settle_s", m.sampler.settle_s);
            s.integer("max_attempts", m.sampler.max_attempts);
            s.number("reposition_offset_m", m.sampler.reposition_offset_m);
        }
        if (top.has("actuator")) {
            Section s = top.child("actuator");
            s.number("steps_per_metre", m.actuator.steps_per_metre);
            s.number("max_depth_m", m.actuator.max_depth_m);
            s.number("step_rate_hz", m.actuator.step_rate_hz);
        }
        if (top.has("calib")) {
            Section s = top.child("calib");
            s.number("theta_min", m.thresholds.theta_min);
            s.number("theta_max", m.thresholds.theta_max);
            s.number("depth_tol_m", m.thresholds.depth_tol_m);
        }
        if (top.has("idw")) {
            Section s = top.child("idw");
            s.number("power", cfg.idw.power);
            s.number("cutoff_radius_m", cfg.idw.cutoff_radius_m);
            s.number("exact_radius_m", cfg.idw.exact_radius_m);
        }
        if (top.has("map")) {
            Section s = top.child("map");
            s.number("cell_size_m", cfg.cell_size_m);
        }
    }
    m.validate();
    cfg.idw.validate();
    if (!std::isfinite(cfg.cell_size_m) || cfg.cell_size_m <= 0.0) {
        throw ConfigError("$.map.cell_size_m must be > 0");
    }
    return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open scenario " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario(text.str());
}

} // namespace agrione::scenario
