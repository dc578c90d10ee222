#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace svgloop {

struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(Point a, double s) { return {a.x * s, a.y * s}; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double length(Point a) { return std::hypot(a.x, a.y); }

struct Bbox {
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();

  bool empty() const { return min_x > max_x || min_y > max_y; }

  void add(Point p) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }

  // Closed-interval overlap, widened by `eps`.
  bool overlaps(const Bbox& o, double eps = 0.0) const {
    return !(o.min_x > max_x + eps || o.max_x < min_x - eps || o.min_y > max_y + eps ||
             o.max_y < min_y - eps);
  }

  bool operator==(const Bbox&) const = default;
};

// Curve flattening. Each appends points after the start point (the start point
// itself is never emitted), keeping every chord within `tolerance` of the curve.
void flatten_quad(Point p0, Point p1, Point p2, double tolerance, std::vector<Point>& out);
void flatten_cubic(Point p0, Point p1, Point p2, Point p3, double tolerance,
                   std::vector<Point>& out);

struct ArcParams;
void flatten_arc(Point from, const ArcParams& arc, Point to, double tolerance,
                 std::vector<Point>& out);

}  // namespace svgloop
