#pragma once

#include <cmath>

namespace agrione {

// Local metric frame: x east, y north, metres from the field origin.
struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }

inline double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

// WGS84 degrees.
struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

struct Waypoint {
    int id = 0;
    Point2 xy;

    friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

} // namespace agrione
