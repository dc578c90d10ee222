#include <algorithm>
#include <map>

#include "svgloop/decompose.hpp"
#include "svgloop/error.hpp"
#include "svgloop/raster.hpp"
#include "union_find.hpp"

namespace svgloop {
namespace {

double signed_area(const std::vector<Point>& ring) {
  double a = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) a += cross(ring[i], ring[(i + 1) % ring.size()]);
  return a / 2.0;
}

bool self_intersecting(const std::vector<Point>& ring) {
  std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent through the closing edge
      if (segments_cross_properly(ring[i], ring[(i + 1) % n], ring[j], ring[(j + 1) % n])) return true;
    }
  }
  return false;
}

// Whether the overlap of two opaque subpaths paints differently once they are
// drawn as separate elements.
class FillRuleCoupling {
 public:
  FillRuleCoupling(const std::vector<std::optional<Polygon>>& polys, FillRule rule) : polys_(polys), rule_(rule) {}

  bool coupled(std::size_t i, std::size_t j) {
    if (rule_ == FillRule::EvenOdd) return true;
    return !simple(i) || !simple(j) || orientation(i) != orientation(j);
  }

 private:
  bool simple(std::size_t i) {
    auto it = simple_.find(i);
    if (it != simple_.end()) return it->second;
    return simple_[i] = !self_intersecting(polys_[i]->rings.front());
  }

  int orientation(std::size_t i) { return signed_area(polys_[i]->rings.front()) >= 0.0 ? 1 : -1; }

  const std::vector<std::optional<Polygon>>& polys_;
  FillRule rule_;
  std::map<std::size_t, bool> simple_;
};

}  // namespace

double effective_opacity(const PathElement& el) {
  double fill_alpha = el.fill ? el.fill->a / 255.0 : 1.0;
  return el.opacity * fill_alpha;
}

DependencyGraph build_dependency_graph(const PathElement& el, double tolerance) {
  DependencyGraph g;
  g.node_count = el.subpaths.size();
  g.degenerate.assign(g.node_count, false);
  std::vector<std::optional<Polygon>> polys(g.node_count);
  for (std::size_t i = 0; i < g.node_count; ++i) {
    try {
      polys[i] = flatten_to_polygon(el.subpaths[i], tolerance);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegenerateSubpath) throw;
      g.degenerate[i] = true;
    }
  }

  const bool translucent = effective_opacity(el) < 1.0;
  FillRuleCoupling coupling(polys, el.fill_rule);
  for (std::size_t i = 0; i < g.node_count; ++i) {
    if (!polys[i]) continue;
    for (std::size_t j = i + 1; j < g.node_count; ++j) {
      if (!polys[j]) continue;
      const Polygon& a = *polys[i];
      const Polygon& b = *polys[j];
      if (contains(a, b) || contains(b, a)) {
        g.edges.push_back({i, j, EdgeReason::Containment});
      } else if (intersects(a, b)) {
        if (translucent) g.edges.push_back({i, j, EdgeReason::OpacityOverlap});
        else if (coupling.coupled(i, j)) g.edges.push_back({i, j, EdgeReason::FillRuleOverlap});
      }
    }
  }
  return g;
}

std::vector<PathElement> decompose_path(const PathElement& el, double tolerance) {
  if (el.subpaths.size() <= 1 || el.stroke) return {el};
  DependencyGraph g = build_dependency_graph(el, tolerance);
  UnionFind sets(g.node_count);
  for (const DependencyEdge& e : g.edges) sets.unite(e.a, e.b);

  // Degenerate subpaths paint nothing; they ride along with the nearest
  // preceding real subpath (or the first one) instead of becoming empty steps.
  std::optional<std::size_t> anchor;
  for (std::size_t i = 0; i < g.node_count; ++i) {
    if (!g.degenerate[i]) {
      anchor = i;
      break;
    }
  }
  if (anchor) {
    for (std::size_t i = 0; i < g.node_count; ++i) {
      if (!g.degenerate[i]) anchor = i;
      else sets.unite(i, *anchor);
    }
  }

  std::vector<PathElement> out;
  std::map<std::size_t, std::size_t> component_slot;  // root -> index in `out`
  for (std::size_t i = 0; i < g.node_count; ++i) {
    std::size_t root = sets.find(i);
    auto [it, inserted] = component_slot.try_emplace(root, out.size());
    if (inserted) {
      PathElement part = el;
      part.subpaths.clear();
      out.push_back(std::move(part));
    }
    out[it->second].subpaths.push_back(el.subpaths[i]);
  }
  return out;
}

SvgDocument decompose_document(const SvgDocument& doc, double tolerance) {
  std::vector<PathElement> elements;
  elements.reserve(doc.elements.size());
  for (const PathElement& el : doc.elements) {
    for (PathElement& part : decompose_path(el, tolerance)) elements.push_back(std::move(part));
  }
  return with_elements(doc, std::move(elements));
}

DecompositionReport decompose_with_report(const SvgDocument& doc, bool verify, double tolerance) {
  DecompositionReport report;
  report.document = decompose_document(doc, tolerance);
  report.elements_before = doc.elements.size();
  report.elements_after = report.document.elements.size();
  if (verify) report.pixel_diff = pixel_diff(render(doc), render(report.document));
  return report;
}

}  // namespace svgloop
