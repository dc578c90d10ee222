#include <algorithm>
#include <cmath>
#include <numbers>

#include "svgloop/error.hpp"
#include "svgloop/raster.hpp"

namespace svgloop {
namespace {

constexpr int kSubScanlines = 4;
constexpr double kFlattenTolerancePx = 0.05;

struct Edge {
  double x0, y0, x1, y1;  // y0 < y1
  int winding;
};

struct DeviceTransform {
  double scale = 1.0;
  double tx = 0.0;
  double ty = 0.0;

  Point apply(Point p) const { return {p.x * scale + tx, p.y * scale + ty}; }
};

DeviceTransform fit_view_box(const ViewBox& vb, int width, int height) {
  DeviceTransform t;
  t.scale = std::min(width / vb.width, height / vb.height);
  t.tx = (width - vb.width * t.scale) / 2.0 - vb.x * t.scale;
  t.ty = (height - vb.height * t.scale) / 2.0 - vb.y * t.scale;
  return t;
}

void check_finite(Point p) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y))
    throw Error(ErrorKind::RenderFailure, "non-finite coordinate");
}

// Adds the closed polygon `ring` to `edges`, skipping horizontal edges.
void add_ring(std::span<const Point> ring, std::vector<Edge>& edges, Bbox& bounds) {
  if (ring.size() < 2) return;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    Point a = ring[i];
    Point b = ring[(i + 1) % ring.size()];
    bounds.add(a);
    if (a.y == b.y) continue;
    if (a.y < b.y) edges.push_back({a.x, a.y, b.x, b.y, 1});
    else edges.push_back({b.x, b.y, a.x, a.y, -1});
  }
}

// Coverage in [0,1] per pixel: kSubScanlines sample rows per pixel, exact
// horizontal span coverage within each sample row.
void rasterize(std::vector<Edge>& edges, const Bbox& bounds, FillRule rule, int width, int height,
               std::vector<float>& coverage) {
  coverage.assign(static_cast<std::size_t>(width) * height, 0.0f);
  if (edges.empty() || bounds.empty()) return;
  int row_begin = std::max(0, static_cast<int>(std::floor(bounds.min_y)));
  int row_end = std::min(height, static_cast<int>(std::ceil(bounds.max_y)) + 1);
  if (row_begin >= row_end || bounds.max_x < 0.0 || bounds.min_x > width) return;

  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.y0 < b.y0; });
  std::vector<const Edge*> active;
  std::vector<std::pair<double, int>> crossings;
  std::vector<double> accum(static_cast<std::size_t>(width) + 1);
  std::size_t next = 0;
  const double weight = 1.0 / kSubScanlines;

  for (int py = row_begin; py < row_end; ++py) {
    std::fill(accum.begin(), accum.end(), 0.0);
    bool any = false;
    for (int s = 0; s < kSubScanlines; ++s) {
      double sy = py + (s + 0.5) / kSubScanlines;
      while (next < edges.size() && edges[next].y0 <= sy) active.push_back(&edges[next++]);
      std::erase_if(active, [sy](const Edge* e) { return e->y1 <= sy; });
      crossings.clear();
      for (const Edge* e : active) {
        if (e->y0 > sy) continue;
        double x = e->x0 + (sy - e->y0) * (e->x1 - e->x0) / (e->y1 - e->y0);
        crossings.emplace_back(x, e->winding);
      }
      if (crossings.size() < 2) continue;
      std::sort(crossings.begin(), crossings.end());
      int winding = 0;
      for (std::size_t i = 0; i + 1 < crossings.size(); ++i) {
        winding += crossings[i].second;
        bool inside = rule == FillRule::EvenOdd ? (winding & 1) != 0 : winding != 0;
        if (!inside) continue;
        double a = std::clamp(crossings[i].first, 0.0, static_cast<double>(width));
        double b = std::clamp(crossings[i + 1].first, 0.0, static_cast<double>(width));
        if (b <= a) continue;
        any = true;
        int ia = static_cast<int>(a);
        int ib = static_cast<int>(b);
        if (ia == ib) {
          accum[ia] += (b - a) * weight;
        } else {
          accum[ia] += (ia + 1 - a) * weight;
          for (int x = ia + 1; x < ib; ++x) accum[x] += weight;
          accum[ib] += (b - ib) * weight;
        }
      }
    }
    if (!any) continue;
    float* row = &coverage[static_cast<std::size_t>(py) * width];
    for (int x = 0; x < width; ++x) row[x] = static_cast<float>(std::min(1.0, accum[x]));
  }
}

void add_oriented(std::vector<Point> poly, std::vector<Edge>& edges, Bbox& bounds) {
  double area = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) area += cross(poly[i], poly[(i + 1) % poly.size()]);
  if (area < 0.0) std::reverse(poly.begin(), poly.end());
  add_ring(poly, edges, bounds);
}

// Stroke outline as a union of consistently oriented segment quads and round
// joins, filled with the nonzero rule. Caps are butt.
void add_stroke(std::span<const Point> pts, bool closed, double half_width, std::vector<Edge>& edges,
                Bbox& bounds) {
  std::size_t n = pts.size();
  if (n < 2) return;
  std::size_t segments = closed ? n : n - 1;
  for (std::size_t i = 0; i < segments; ++i) {
    Point a = pts[i];
    Point b = pts[(i + 1) % n];
    Point d = b - a;
    double len = length(d);
    if (len == 0.0) continue;
    Point normal{-d.y / len * half_width, d.x / len * half_width};
    add_oriented({a + normal, b + normal, b - normal, a - normal}, edges, bounds);
  }
  double step = half_width > kFlattenTolerancePx ? 2.0 * std::acos(1.0 - kFlattenTolerancePx / half_width)
                                                 : std::numbers::pi / 2.0;
  int disc_segments = std::clamp(static_cast<int>(std::ceil(2.0 * std::numbers::pi / step)), 8, 256);
  for (std::size_t i = closed ? 0 : 1; i < (closed ? n : n - 1); ++i) {
    std::vector<Point> disc;
    disc.reserve(disc_segments);
    for (int k = 0; k < disc_segments; ++k) {
      double t = 2.0 * std::numbers::pi * k / disc_segments;
      disc.push_back({pts[i].x + half_width * std::cos(t), pts[i].y + half_width * std::sin(t)});
    }
    add_oriented(std::move(disc), edges, bounds);
  }
}

std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0))); }

void paint_one(Raster& canvas, const DeviceTransform& xf, const PathElement& el) {
  if (el.opacity <= 0.0 || (!el.fill && !el.stroke)) return;
  const int w = canvas.width();
  const int h = canvas.height();
  const double tolerance = kFlattenTolerancePx / xf.scale;

  std::vector<std::vector<Point>> polylines;
  for (const Subpath& sp : el.subpaths) {
    std::vector<Point> pts = flatten_subpath(sp, tolerance);
    for (Point& p : pts) {
      check_finite(p);
      p = xf.apply(p);
    }
    polylines.push_back(std::move(pts));
  }

  std::vector<float> fill_cov;
  std::vector<float> stroke_cov;
  if (el.fill && el.fill->a > 0) {
    std::vector<Edge> edges;
    Bbox bounds;
    for (const auto& pts : polylines) add_ring(pts, edges, bounds);
    rasterize(edges, bounds, el.fill_rule, w, h, fill_cov);
  }
  if (el.stroke && el.stroke->color.a > 0) {
    std::vector<Edge> edges;
    Bbox bounds;
    double half = el.stroke->width * xf.scale / 2.0;
    for (std::size_t i = 0; i < polylines.size(); ++i) {
      add_stroke(polylines[i], el.subpaths[i].closed, half, edges, bounds);
    }
    rasterize(edges, bounds, FillRule::NonZero, w, h, stroke_cov);
  }

  const double fill_a = el.fill ? el.fill->a / 255.0 : 0.0;
  const double stroke_a = el.stroke ? el.stroke->color.a / 255.0 : 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::size_t i = static_cast<std::size_t>(y) * w + x;
      double fa = fill_cov.empty() ? 0.0 : fill_cov[i] * fill_a;
      double sa = stroke_cov.empty() ? 0.0 : stroke_cov[i] * stroke_a;
      if (fa <= 0.0 && sa <= 0.0) continue;
      // Stroke over fill inside the element, then the element over the canvas.
      double alpha = sa + fa * (1.0 - sa);
      double premul[3] = {0.0, 0.0, 0.0};
      if (fa > 0.0) {
        premul[0] += el.fill->r * fa * (1.0 - sa);
        premul[1] += el.fill->g * fa * (1.0 - sa);
        premul[2] += el.fill->b * fa * (1.0 - sa);
      }
      if (sa > 0.0) {
        premul[0] += el.stroke->color.r * sa;
        premul[1] += el.stroke->color.g * sa;
        premul[2] += el.stroke->color.b * sa;
      }
      double a = alpha * el.opacity;
      std::uint8_t* px = canvas.pixel(x, y);
      for (int c = 0; c < 3; ++c) px[c] = to_byte(premul[c] * el.opacity + px[c] * (1.0 - a));
      px[3] = 255;
    }
  }
}

}  // namespace

Raster::Raster(int width, int height, Rgba background) : width_(width), height_(height) {
  if (width <= 0 || height <= 0) throw Error(ErrorKind::InvalidArgument, "raster dimensions must be positive");
  pixels_.resize(static_cast<std::size_t>(width) * height * 4);
  for (std::size_t i = 0; i < pixels_.size(); i += 4) {
    pixels_[i] = background.r;
    pixels_[i + 1] = background.g;
    pixels_[i + 2] = background.b;
    pixels_[i + 3] = background.a;
  }
}

void paint_elements(Raster& canvas, const SvgDocument& frame, std::span<const PathElement> elements) {
  if (!(frame.view_box.width > 0.0) || !(frame.view_box.height > 0.0))
    throw Error(ErrorKind::RenderFailure, "degenerate viewBox");
  DeviceTransform xf = fit_view_box(frame.view_box, canvas.width(), canvas.height());
  for (const PathElement& el : elements) paint_one(canvas, xf, el);
}

Raster render(const SvgDocument& doc, int width, int height) {
  Raster canvas(width, height);
  paint_elements(canvas, doc, doc.elements);
  return canvas;
}

}  // namespace svgloop
