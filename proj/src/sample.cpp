#include "agrione/sample.hpp"

#include <istream>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "agrione/error.hpp"

namespace agrione {

namespace {

using Json = nlohmann::ordered_json;

Json optional_number(const std::optional<double>& v) {
    return v ? Json(*v) : Json(nullptr);
}

const Json& field(const Json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) {
        throw LogFormatError(std::string("missing field '") + key + "'", 0);
    }
    return *it;
}

double number(const Json& j, const char* key) {
    const Json& v = field(j, key);
    if (!v.is_number()) {
        throw LogFormatError(std::string("field '") + key + "' is not a number", 0);
    }
    return v.get<double>();
}

int integer(const Json& j, const char* key) {
    const Json& v = field(j, key);
    if (!v.is_number_integer()) {
        throw LogFormatError(std::string("field '") + key + "' is not an integer", 0);
    }
    const auto wide = v.get<long long>();
    if (wide < std::numeric_limits<int>::min() || wide > std::numeric_limits<int>::max()) {
        throw LogFormatError(std::string("field '") + key + "' out of range", 0);
    }
    return static_cast<int>(wide);
}

std::optional<double> nullable_number(const Json& j, const char* key) {
    const Json& v = field(j, key);
    if (v.is_null()) {
        return std::nullopt;
    }
    return number(j, key);
}

} // namespace

std::string to_json_line(const SoilSample& s) {
    Json j;
    j["point_id"] = s.point_id;
    j["timestamp_s"] = s.timestamp_s;
    j["lat"] = s.lat;
    j["lon"] = s.lon;
    j["target_depth_m"] = s.target_depth_m;
    j["achieved_depth_m"] = s.achieved_depth_m;
    j["attempts"] = s.attempts;
    j["raw_counts"] = optional_number(s.raw_counts);
    j["temp_c"] = optional_number(s.temp_c);
    j["ec_us_cm"] = optional_number(s.ec_us_cm);
    j["theta"] = optional_number(s.theta);
    j["status"] = calib::to_string(s.status);
    return j.dump();
}

SoilSample sample_from_json(std::string_view line) {
    Json j;
    try {
        j = Json::parse(line);
    } catch (const Json::parse_error& e) {
        throw LogFormatError(std::string("not a JSON object: ") + e.what(), 0);
    }
    if (!j.is_object()) {
        throw LogFormatError("record is not a JSON object", 0);
    }
    SoilSample s;
    s.point_id = integer(j, "point_id");
    s.timestamp_s = number(j, "timestamp_s");
    s.lat = number(j, "lat");
    s.lon = number(j, "lon");
    s.target_depth_m = number(j, "target_depth_m");
    s.achieved_depth_m = number(j, "achieved_depth_m");
    s.attempts = integer(j, "attempts");
    s.raw_counts = nullable_number(j, "raw_counts");
    s.temp_c = nullable_number(j, "temp_c");
    s.ec_us_cm = nullable_number(j, "ec_us_cm");
    s.theta = nullable_number(j, "theta");
    const Json& status = field(j, "status");
    const auto validity =
        status.is_string() ? calib::validity_from_string(status.get<std::string>()) : std::nullopt;
    if (!validity) {
        throw LogFormatError("unknown status", 0);
    }
    s.status = *validity;
    if (s.status == calib::Validity::Valid && !s.theta) {
        throw LogFormatError("Valid record without theta", 0);
    }
    return s;
}

void write_sample_log(std::ostream& out, std::span<const SoilSample> samples) {
    for (const auto& s : samples) {
        out << to_json_line(s) << '\n';
    }
}

std::vector<SoilSample> read_sample_log(std::istream& in) {
    std::vector<SoilSample> samples;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        try {
            samples.push_back(sample_from_json(line));
        } catch (const LogFormatError& e) {
            throw LogFormatError(e.what(), number);
        }
    }
    return samples;
}

std::vector<SoilSample> valid_only(std::span<const SoilSample> samples) {
    std::vector<SoilSample> out;
    for (const auto& s : samples) {
        if (s.status == calib::Validity::Valid) {
            out.push_back(s);
        }
    }
    return out;
}

} // namespace agrione
