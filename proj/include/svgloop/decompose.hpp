#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "svgloop/svg.hpp"

namespace svgloop {

// Distance under which a point counts as lying on a boundary or line.
inline constexpr double kGeomEpsilon = 1e-6;
// Flattening tolerance for topology queries, in user units.
inline constexpr double kTopologyTolerance = 0.1;

struct Polygon {
  std::vector<std::vector<Point>> rings;  // closed loops, closing edge implicit
  Bbox bbox;
};

// Throws Error(DegenerateSubpath) when fewer than 3 distinct points remain.
Polygon flatten_to_polygon(const Subpath& subpath, double tolerance = kTopologyTolerance);

enum class PointLocation { Outside, Inside, Boundary };

// Even-odd classification against all rings of `poly`.
PointLocation locate_point(Point p, const Polygon& poly);

// True when segments cross at a single point interior to both.
bool segments_cross_properly(Point a0, Point a1, Point b0, Point b1);

// Every ring point of `inner` is inside or on `outer` and no edges cross properly.
bool contains(const Polygon& outer, const Polygon& inner);

// Edges cross properly, or either polygon has a point inside or on the other.
bool intersects(const Polygon& a, const Polygon& b);

enum class EdgeReason {
  Containment,
  OpacityOverlap,
  // Overlap inside an opaque path whose fill rule makes the overlap region
  // depend on both subpaths (even-odd, or nonzero with opposing windings).
  FillRuleOverlap,
};

struct DependencyEdge {
  std::size_t a = 0;  // a < b
  std::size_t b = 0;
  EdgeReason reason = EdgeReason::Containment;

  bool operator==(const DependencyEdge&) const = default;
};

struct DependencyGraph {
  std::size_t node_count = 0;
  std::vector<DependencyEdge> edges;
  std::vector<bool> degenerate;  // per node; degenerate nodes carry no edges
};

// Opacity × fill alpha; the value the non-unity opacity test looks at.
double effective_opacity(const PathElement& el);

DependencyGraph build_dependency_graph(const PathElement& el, double tolerance = kTopologyTolerance);

// One element per connected component of the dependency graph, ordered by the
// component's first subpath. Stroked or single-subpath elements come back unchanged.
std::vector<PathElement> decompose_path(const PathElement& el, double tolerance = kTopologyTolerance);

// Replaces each element in place by its components; paint order is kept.
SvgDocument decompose_document(const SvgDocument& doc, double tolerance = kTopologyTolerance);

struct DecompositionReport {
  SvgDocument document;
  std::size_t elements_before = 0;
  std::size_t elements_after = 0;
  std::optional<double> pixel_diff;  // set when verification ran
};

// Decomposes and, when `verify` is set, measures pixel_diff between the two
// renders at the default canvas size.
DecompositionReport decompose_with_report(const SvgDocument& doc, bool verify,
                                          double tolerance = kTopologyTolerance);

}  // namespace svgloop
