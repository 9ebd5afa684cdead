#include "agrione/geomap.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

#include "agrione/error.hpp"

namespace agrione::geomap {

void IdwParams::validate() const {
    for (double v : {power, cutoff_radius_m, exact_radius_m}) {
        if (!std::isfinite(v) || v <= 0.0) {
            throw ConfigError("IDW power and radii must be > 0");
        }
    }
}

std::vector<LocalSample> to_local(std::span<const SoilSample> samples, const fieldsim::FieldSpec& frame) {
    std::vector<LocalSample> out;
    for (const auto& s : samples) {
        if (s.status == calib::Validity::Valid && s.theta) {
            out.push_back({s.point_id, fieldsim::wgs84_to_local(frame, s.lat, s.lon), *s.theta});
        }
    }
    return out;
}

std::optional<double> idw_at(std::span<const LocalSample> samples, Point2 query,
                             const IdwParams& params) {
    if (samples.empty()) {
        throw EmptyInputError("interpolation needs at least one sample");
    }
    const LocalSample* exact = nullptr;
    double exact_d = 0.0;
    for (const auto& s : samples) {
        const double d = distance(s.xy, query);
        if (d <= params.exact_radius_m &&
            (!exact || d < exact_d || (d == exact_d && s.point_id < exact->point_id))) {
            exact = &s;
            exact_d = d;
        }
    }
    if (exact) {
        return exact->theta;
    }

    double weighted = 0.0;
    double total = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& s : samples) {
        const double d = distance(s.xy, query);
        if (d > params.cutoff_radius_m) {
            continue;
        }
        const double w = std::pow(d, -params.power);
        weighted += w * s.theta;
        total += w;
        lo = std::min(lo, s.theta);
        hi = std::max(hi, s.theta);
    }
    if (total == 0.0) {
        return std::nullopt;
    }
    // Rounding must not push a convex combination outside its inputs.
    return std::clamp(weighted / total, lo, hi);
}

MoistureGrid build_grid(std::span<const LocalSample> samples, const Bounds& bounds,
                        const IdwParams& params, double cell_size_m) {
    if (samples.empty()) {
        throw EmptyInputError("interpolation needs at least one sample");
    }
    if (!std::isfinite(cell_size_m) || cell_size_m <= 0.0) {
        throw ConfigError("cell size must be > 0");
    }
    MoistureGrid grid;
    grid.origin = bounds.min;
    grid.cell_size_m = cell_size_m;
    const auto cells = [&](double extent) {
        return std::max(1, static_cast<int>(std::ceil(extent / cell_size_m - 1e-9)));
    };
    grid.nx = cells(bounds.max.x - bounds.min.x);
    grid.ny = cells(bounds.max.y - bounds.min.y);
    grid.values.reserve(static_cast<std::size_t>(grid.nx) * grid.ny);
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            grid.values.push_back(idw_at(samples, grid.cell_center(i, j), params));
        }
    }
    return grid;
}

std::string export_points_geojson(std::span<const SoilSample> samples) {
    using Json = nlohmann::ordered_json;
    Json features = Json::array();
    for (const auto& s : samples) {
        Json f;
        f["type"] = "Feature";
        f["geometry"] = {{"type", "Point"}, {"coordinates", {s.lon, s.lat}}};
        Json props;
        props["point_id"] = s.point_id;
        props["theta"] = s.theta ? Json(*s.theta) : Json(nullptr);
        props["status"] = calib::to_string(s.status);
        props["attempts"] = s.attempts;
        f["properties"] = std::move(props);
        features.push_back(std::move(f));
    }
    Json doc;
    doc["type"] = "FeatureCollection";
    doc["features"] = std::move(features);
    return doc.dump(2) + "\n";
}

std::string export_grid_ascii(const MoistureGrid& grid) {
    std::string out;
    char buf[64];
    const auto line = [&](const char* key, double v) {
        std::snprintf(buf, sizeof buf, "%-13s ", key);
        out += buf;
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
        out.append(buf, ec == std::errc{} ? end : buf);
        out += '\n';
    };
    line("ncols", grid.nx);
    line("nrows", grid.ny);
    line("xllcorner", grid.origin.x);
    line("yllcorner", grid.origin.y);
    line("cellsize", grid.cell_size_m);
    line("NODATA_value", kNoData);
    for (int j = grid.ny - 1; j >= 0; --j) {
        for (int i = 0; i < grid.nx; ++i) {
            const auto& v = grid.at(i, j);
            std::snprintf(buf, sizeof buf, "%.6f", v ? *v : kNoData);
            if (i > 0) {
                out += ' ';
            }
            out += buf;
        }
        out += '\n';
    }
    return out;
}

} // namespace agrione::geomap
