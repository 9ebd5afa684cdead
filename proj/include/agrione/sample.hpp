#pragma once

// SoilSample, the persisted record of one visited point, and its JSON Lines
// sample-log encoding.

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "agrione/calib.hpp"

namespace agrione {

struct SoilSample {
    int point_id = 0;
    double timestamp_s = 0.0;
    double lat = 0.0;
    double lon = 0.0;
    double target_depth_m = 0.0;
    double achieved_depth_m = 0.0;
    int attempts = 0;
    // Absent when the sensor transaction failed.
    std::optional<double> raw_counts;
    std::optional<double> temp_c;
    std::optional<double> ec_us_cm;
    std::optional<double> theta;
    calib::Validity status = calib::Validity::SensorError;

    friend bool operator==(const SoilSample&, const SoilSample&) = default;
};

std::string to_json_line(const SoilSample& s);
// Throws LogFormatError (line 0) when the text is not a valid record.
SoilSample sample_from_json(std::string_view line);

void write_sample_log(std::ostream& out, std::span<const SoilSample> samples);
// Blank lines are skipped. Throws LogFormatError carrying the 1-based line.
std::vector<SoilSample> read_sample_log(std::istream& in);

std::vector<SoilSample> valid_only(std::span<const SoilSample> samples);

} // namespace agrione
