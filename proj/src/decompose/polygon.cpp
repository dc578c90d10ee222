#include <algorithm>
#include <set>

#include "svgloop/decompose.hpp"
#include "svgloop/error.hpp"

namespace svgloop {
namespace {

// Sign of c relative to line a->b, zero within kGeomEpsilon of the line.
int side(Point a, Point b, Point c) {
  Point d = b - a;
  double len = length(d);
  double v = cross(d, c - a);
  if (len == 0.0) return 0;
  if (std::abs(v) <= kGeomEpsilon * len) return 0;
  return v > 0.0 ? 1 : -1;
}

double distance_to_segment(Point p, Point a, Point b) {
  Point d = b - a;
  double len2 = dot(d, d);
  if (len2 == 0.0) return length(p - a);
  double t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
  return length(p - (a + d * t));
}

template <typename Fn>
bool any_edge_pair(const Polygon& p, const Polygon& q, Fn&& fn) {
  for (const auto& ra : p.rings) {
    for (std::size_t i = 0; i < ra.size(); ++i) {
      Point a0 = ra[i];
      Point a1 = ra[(i + 1) % ra.size()];
      for (const auto& rb : q.rings) {
        for (std::size_t j = 0; j < rb.size(); ++j) {
          if (fn(a0, a1, rb[j], rb[(j + 1) % rb.size()])) return true;
        }
      }
    }
  }
  return false;
}

bool any_proper_crossing(const Polygon& p, const Polygon& q) {
  return any_edge_pair(p, q, [](Point a0, Point a1, Point b0, Point b1) {
    return segments_cross_properly(a0, a1, b0, b1);
  });
}

}  // namespace

Polygon flatten_to_polygon(const Subpath& subpath, double tolerance) {
  std::vector<Point> pts = flatten_subpath(subpath, tolerance);
  std::vector<Point> ring;
  ring.reserve(pts.size());
  for (Point p : pts) {
    if (ring.empty() || !(ring.back() == p)) ring.push_back(p);
  }
  while (ring.size() > 1 && ring.back() == ring.front()) ring.pop_back();

  std::set<std::pair<double, double>> distinct;
  for (Point p : ring) distinct.emplace(p.x, p.y);
  if (distinct.size() < 3)
    throw Error(ErrorKind::DegenerateSubpath, "subpath has " + std::to_string(distinct.size()) + " distinct points");

  Polygon poly;
  for (Point p : ring) poly.bbox.add(p);
  poly.rings.push_back(std::move(ring));
  return poly;
}

bool segments_cross_properly(Point a0, Point a1, Point b0, Point b1) {
  int d1 = side(b0, b1, a0);
  int d2 = side(b0, b1, a1);
  int d3 = side(a0, a1, b0);
  int d4 = side(a0, a1, b1);
  return d1 * d2 < 0 && d3 * d4 < 0;
}

PointLocation locate_point(Point p, const Polygon& poly) {
  bool inside = false;
  for (const auto& ring : poly.rings) {
    for (std::size_t i = 0; i < ring.size(); ++i) {
      Point a = ring[i];
      Point b = ring[(i + 1) % ring.size()];
      if (distance_to_segment(p, a, b) <= kGeomEpsilon) return PointLocation::Boundary;
      if ((a.y > p.y) != (b.y > p.y)) {
        double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
        if (p.x < x) inside = !inside;
      }
    }
  }
  return inside ? PointLocation::Inside : PointLocation::Outside;
}

bool contains(const Polygon& outer, const Polygon& inner) {
  const Bbox& o = outer.bbox;
  const Bbox& i = inner.bbox;
  if (i.min_x < o.min_x - kGeomEpsilon || i.max_x > o.max_x + kGeomEpsilon || i.min_y < o.min_y - kGeomEpsilon ||
      i.max_y > o.max_y + kGeomEpsilon)
    return false;
  for (const auto& ring : inner.rings)
    for (Point p : ring)
      if (locate_point(p, outer) == PointLocation::Outside) return false;
  return !any_proper_crossing(inner, outer);
}

bool intersects(const Polygon& a, const Polygon& b) {
  if (!a.bbox.overlaps(b.bbox, kGeomEpsilon)) return false;
  if (any_proper_crossing(a, b)) return true;
  for (const auto& ring : a.rings)
    for (Point p : ring)
      if (locate_point(p, b) != PointLocation::Outside) return true;
  for (const auto& ring : b.rings)
    for (Point p : ring)
      if (locate_point(p, a) != PointLocation::Outside) return true;
  return false;
}

}  // namespace svgloop
