#pragma once

// Inverse-distance-weighted moisture raster from Valid samples, plus the
// GeoJSON point layer and ESRI ASCII grid writers.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "agrione/fieldsim.hpp"
#include "agrione/geometry.hpp"
#include "agrione/sample.hpp"

namespace agrione::geomap {

inline constexpr double kNoData = -9999.0;

struct IdwParams {
    double power = 2.0;
    double cutoff_radius_m = 10.0;
    double exact_radius_m = 1e-6;

    // Throws ConfigError unless every field is finite and > 0.
    void validate() const;
};

struct LocalSample {
    int point_id = 0;
    Point2 xy;
    double theta = 0.0;
};

struct Bounds {
    Point2 min;
    Point2 max;
};

// Row j = 0 is the southernmost row.
struct MoistureGrid {
    Point2 origin;
    double cell_size_m = 0.5;
    int nx = 0;
    int ny = 0;
    std::vector<std::optional<double>> values;

    const std::optional<double>& at(int i, int j) const { return values[static_cast<std::size_t>(j) * nx + i]; }
    Point2 cell_center(int i, int j) const {
        return {origin.x + (i + 0.5) * cell_size_m, origin.y + (j + 0.5) * cell_size_m};
    }
};

// Valid samples projected into the field's local frame.
std::vector<LocalSample> to_local(std::span<const SoilSample> samples, const fieldsim::FieldSpec& frame);

// nullopt when no sample lies within the cutoff radius. Throws
// EmptyInputError for an empty sample set.
std::optional<double> idw_at(std::span<const LocalSample> samples, Point2 query,
                             const IdwParams& params = {});

MoistureGrid build_grid(std::span<const LocalSample> samples, const Bounds& bounds,
                        const IdwParams& params = {}, double cell_size_m = 0.5);

std::string export_points_geojson(std::span<const SoilSample> samples);
std::string export_grid_ascii(const MoistureGrid& grid);

} // namespace agrione::geomap
