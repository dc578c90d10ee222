#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "svgloop/geometry.hpp"

namespace svgloop {

enum class CommandKind : std::uint8_t { MoveTo, LineTo, CubicTo, QuadTo, ArcTo, ClosePath };

struct ArcParams {
  double rx = 0.0;
  double ry = 0.0;
  double x_axis_rotation = 0.0;  // degrees
  bool large_arc = false;
  bool sweep = false;

  bool operator==(const ArcParams&) const = default;
};

// One absolute path command. `points` holds the control points followed by the
// end point: MoveTo/LineTo/ArcTo 1, QuadTo 2, CubicTo 3, ClosePath 0.
struct PathCommand {
  CommandKind kind = CommandKind::MoveTo;
  std::vector<Point> points;
  ArcParams arc{};

  Point end_point() const { return points.back(); }

  bool operator==(const PathCommand&) const = default;

  static PathCommand move_to(Point p) { return {CommandKind::MoveTo, {p}, {}}; }
  static PathCommand line_to(Point p) { return {CommandKind::LineTo, {p}, {}}; }
  static PathCommand quad_to(Point c, Point p) { return {CommandKind::QuadTo, {c, p}, {}}; }
  static PathCommand cubic_to(Point c1, Point c2, Point p) {
    return {CommandKind::CubicTo, {c1, c2, p}, {}};
  }
  static PathCommand arc_to(ArcParams arc, Point p) { return {CommandKind::ArcTo, {p}, arc}; }
  static PathCommand close() { return {CommandKind::ClosePath, {}, {}}; }
};

std::size_t expected_arity(CommandKind kind);

struct Subpath {
  std::vector<PathCommand> commands;  // commands[0] is the only MoveTo
  bool closed = false;

  bool operator==(const Subpath&) const = default;
};

struct Rgba {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  std::uint8_t a = 255;

  bool operator==(const Rgba&) const = default;
};

enum class FillRule : std::uint8_t { NonZero, EvenOdd };

struct Stroke {
  Rgba color{};
  double width = 1.0;

  bool operator==(const Stroke&) const = default;
};

struct PathElement {
  std::vector<Subpath> subpaths;
  std::optional<Rgba> fill = Rgba{};  // nullopt means fill="none"
  FillRule fill_rule = FillRule::NonZero;
  double opacity = 1.0;
  std::optional<Stroke> stroke;
  int source_index = 0;

  bool operator==(const PathElement&) const = default;
};

struct ViewBox {
  double x = 0.0;
  double y = 0.0;
  double width = 224.0;
  double height = 224.0;

  bool operator==(const ViewBox&) const = default;
};

struct SvgDocument {
  double width = 224.0;
  double height = 224.0;
  ViewBox view_box{};
  std::vector<PathElement> elements;  // paint order
  std::optional<std::string> prompt_metadata;

  bool operator==(const SvgDocument&) const = default;
};

enum class ParseMode { Strict, Lenient };

struct ParseOptions {
  ParseMode mode = ParseMode::Lenient;
  // When false, a document with no paintable element parses to an empty element list.
  bool require_elements = true;
};

struct ParseResult {
  SvgDocument document;
  std::vector<std::string> warnings;  // lenient-mode record of dropped features
};

// Parses a complete SVG document. Numbers are snapped to a 1e-3 grid so the
// model is exactly representable by the canonical serialization.
ParseResult parse_document(std::string_view text, const ParseOptions& options = {});

// Parses bare fragments such as `<path .../>` by wrapping them in an implicit
// `<svg viewBox=...>` root.
ParseResult parse_fragment(std::string_view fragment, const ParseOptions& options = {},
                           const ViewBox& view_box = {});

// Path data (`d` attribute) to absolute commands.
std::vector<PathCommand> parse_path_data(std::string_view d);

std::vector<Subpath> split_subpaths(std::span<const PathCommand> commands);

// Polyline through the subpath (start point included, closing edge implicit),
// every chord within `tolerance` of the true curve.
std::vector<Point> flatten_subpath(const Subpath& subpath, double tolerance);
std::vector<PathCommand> flatten_commands(std::span<const Subpath> subpaths);

// Canonical text: fixed attribute order, numbers with at most 3 decimals.
std::string serialize_document(const SvgDocument& doc);
std::string serialize_element(const PathElement& el);
std::string serialize_path_data(std::span<const Subpath> subpaths);
std::string format_number(double value);

std::optional<Rgba> parse_color(std::string_view text);
std::string format_color(Rgba color);

// Wraps elements in the document's root for rendering or re-parsing.
SvgDocument with_elements(const SvgDocument& frame, std::vector<PathElement> elements);

}  // namespace svgloop
