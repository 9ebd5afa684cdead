#pragma once

#include <optional>
#include <string_view>

namespace agrione::calib {

// TEROS 12 mineral-soil calibration: theta = slope * RAW + intercept (m3/m3).
inline constexpr double kVwcSlope = 3.879e-4;
inline constexpr double kVwcIntercept = -0.6956;

struct Vwc {
    double theta = 0.0;

    friend bool operator==(const Vwc&, const Vwc&) = default;
};

enum class Validity { Valid, NotPenetrated, SensorError };

std::string_view to_string(Validity v) noexcept;
std::optional<Validity> validity_from_string(std::string_view s) noexcept;

struct Thresholds {
    double theta_min = 0.0;
    double theta_max = 0.70;
    double depth_tol_m = 0.005;
};

Vwc raw_to_vwc(double raw_counts) noexcept;

// RAW value at which the calibration crosses theta = 0.
inline constexpr double zero_crossing_raw() noexcept { return -kVwcIntercept / kVwcSlope; }

// A probe that stopped short of the target depth, or a theta outside the
// plausibility window, is NotPenetrated. Never returns SensorError.
Validity classify(Vwc theta, double achieved_depth_m, double target_depth_m,
                  const Thresholds& thresholds = {}) noexcept;

} // namespace agrione::calib
