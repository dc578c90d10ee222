#include "svgloop/geometry.hpp"

#include <numbers>

#include "svgloop/svg.hpp"

namespace svgloop {
namespace {

// Uniform subdivision into n pieces deviates from the curve by at most
// max|B''| / (8 n^2), so n is chosen from a bound on the second derivative.
int segments_for(double second_derivative_bound, double tolerance) {
  if (!(second_derivative_bound > 0.0)) return 1;
  double n = std::ceil(std::sqrt(second_derivative_bound / (8.0 * tolerance)));
  return static_cast<int>(std::clamp(n, 1.0, 10000.0));
}

}  // namespace

void flatten_quad(Point p0, Point p1, Point p2, double tolerance, std::vector<Point>& out) {
  double dd = 2.0 * length(p0 - p1 * 2.0 + p2);
  int n = segments_for(dd, tolerance);
  for (int i = 1; i <= n; ++i) {
    double t = static_cast<double>(i) / n;
    double mt = 1.0 - t;
    out.push_back(p0 * (mt * mt) + p1 * (2.0 * mt * t) + p2 * (t * t));
  }
}

void flatten_cubic(Point p0, Point p1, Point p2, Point p3, double tolerance,
                   std::vector<Point>& out) {
  double d1 = length(p0 - p1 * 2.0 + p2);
  double d2 = length(p1 - p2 * 2.0 + p3);
  int n = segments_for(6.0 * std::max(d1, d2), tolerance);
  for (int i = 1; i <= n; ++i) {
    double t = static_cast<double>(i) / n;
    double mt = 1.0 - t;
    double a = mt * mt * mt;
    double b = 3.0 * mt * mt * t;
    double c = 3.0 * mt * t * t;
    double d = t * t * t;
    out.push_back(p0 * a + p1 * b + p2 * c + p3 * d);
  }
}

void flatten_arc(Point from, const ArcParams& arc, Point to, double tolerance,
                 std::vector<Point>& out) {
  double rx = std::abs(arc.rx);
  double ry = std::abs(arc.ry);
  if (from == to) return;
  if (rx == 0.0 || ry == 0.0) {
    out.push_back(to);
    return;
  }
  // Endpoint to center parameterization (SVG implementation notes, F.6.5).
  double phi = arc.x_axis_rotation * std::numbers::pi / 180.0;
  double cos_phi = std::cos(phi);
  double sin_phi = std::sin(phi);
  double dx = (from.x - to.x) / 2.0;
  double dy = (from.y - to.y) / 2.0;
  double x1 = cos_phi * dx + sin_phi * dy;
  double y1 = -sin_phi * dx + cos_phi * dy;

  double lambda = (x1 * x1) / (rx * rx) + (y1 * y1) / (ry * ry);
  if (lambda > 1.0) {
    double s = std::sqrt(lambda);
    rx *= s;
    ry *= s;
  }
  double num = rx * rx * ry * ry - rx * rx * y1 * y1 - ry * ry * x1 * x1;
  double den = rx * rx * y1 * y1 + ry * ry * x1 * x1;
  double coef = den > 0.0 ? std::sqrt(std::max(0.0, num / den)) : 0.0;
  if (arc.large_arc == arc.sweep) coef = -coef;
  double cx1 = coef * rx * y1 / ry;
  double cy1 = -coef * ry * x1 / rx;
  double cx = cos_phi * cx1 - sin_phi * cy1 + (from.x + to.x) / 2.0;
  double cy = sin_phi * cx1 + cos_phi * cy1 + (from.y + to.y) / 2.0;

  auto angle = [](double ux, double uy, double vx, double vy) {
    return std::atan2(ux * vy - uy * vx, ux * vx + uy * vy);
  };
  double theta1 = angle(1.0, 0.0, (x1 - cx1) / rx, (y1 - cy1) / ry);
  double dtheta = angle((x1 - cx1) / rx, (y1 - cy1) / ry, (-x1 - cx1) / rx, (-y1 - cy1) / ry);
  if (!arc.sweep && dtheta > 0.0) dtheta -= 2.0 * std::numbers::pi;
  if (arc.sweep && dtheta < 0.0) dtheta += 2.0 * std::numbers::pi;

  // Sagitta r (1 - cos(step / 2)) <= tolerance.
  double r = std::max(rx, ry);
  double step = tolerance < r ? 2.0 * std::acos(1.0 - tolerance / r) : std::numbers::pi / 2.0;
  step = std::min(step, std::numbers::pi / 2.0);
  int n = static_cast<int>(std::clamp(std::ceil(std::abs(dtheta) / step), 1.0, 10000.0));
  for (int i = 1; i < n; ++i) {
    double t = theta1 + dtheta * i / n;
    double ex = rx * std::cos(t);
    double ey = ry * std::sin(t);
    out.push_back({cos_phi * ex - sin_phi * ey + cx, sin_phi * ex + cos_phi * ey + cy});
  }
  out.push_back(to);
}

std::vector<Point> flatten_subpath(const Subpath& subpath, double tolerance) {
  std::vector<Point> out;
  if (subpath.commands.empty()) return out;
  Point current = subpath.commands.front().points.front();
  out.push_back(current);
  for (std::size_t i = 1; i < subpath.commands.size(); ++i) {
    const PathCommand& c = subpath.commands[i];
    switch (c.kind) {
      case CommandKind::MoveTo:
      case CommandKind::LineTo:
        out.push_back(c.points[0]);
        break;
      case CommandKind::QuadTo:
        flatten_quad(current, c.points[0], c.points[1], tolerance, out);
        break;
      case CommandKind::CubicTo:
        flatten_cubic(current, c.points[0], c.points[1], c.points[2], tolerance, out);
        break;
      case CommandKind::ArcTo:
        flatten_arc(current, c.arc, c.points[0], tolerance, out);
        break;
      case CommandKind::ClosePath:
        continue;
    }
    current = c.points.back();
  }
  return out;
}

}  // namespace svgloop
