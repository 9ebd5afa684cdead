#include "agrione/calib.hpp"

namespace agrione::calib {

std::string_view to_string(Validity v) noexcept {
    switch (v) {
    case Validity::Valid:
        return "Valid";
    case Validity::NotPenetrated:
        return "NotPenetrated";
    case Validity::SensorError:
        return "SensorError";
    }
    return "SensorError";
}

std::optional<Validity> validity_from_string(std::string_view s) noexcept {
    for (auto v : {Validity::Valid, Validity::NotPenetrated, Validity::SensorError}) {
        if (to_string(v) == s) {
            return v;
        }
    }
    return std::nullopt;
}

Vwc raw_to_vwc(double raw_counts) noexcept {
    return Vwc{kVwcSlope * raw_counts + kVwcIntercept};
}

Validity classify(Vwc theta, double achieved_depth_m, double target_depth_m,
                  const Thresholds& t) noexcept {
    // Sub-nanometre slack so a shortfall of exactly depth_tol_m passes.
    constexpr double kDepthSlackM = 1e-12;
    if (target_depth_m - achieved_depth_m > t.depth_tol_m + kDepthSlackM) {
        return Validity::NotPenetrated;
    }
    if (!(theta.theta >= t.theta_min && theta.theta <= t.theta_max)) {
        return Validity::NotPenetrated;
    }
    return Validity::Valid;
}

} // namespace agrione::calib
