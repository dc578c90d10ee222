#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "svgloop/error.hpp"
#include "svgloop/svg.hpp"

using namespace svgloop;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no Error thrown");
  return ErrorKind::Config;
}

std::string wrap(const std::string& body) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 100 100\">" + body + "</svg>";
}

// Random canonical-ish path data using every command letter.
std::string random_path_data(std::mt19937& rng) {
  std::uniform_real_distribution<double> v(-50, 150);
  std::uniform_int_distribution<int> cmd(0, 9), flag(0, 1), count(1, 8);
  auto n = [&] { return format_number(v(rng)); };
  std::string d = "M" + n() + " " + n();
  int k = count(rng);
  for (int i = 0; i < k; ++i) {
    switch (cmd(rng)) {
      case 0: d += " L" + n() + " " + n(); break;
      case 1: d += " l" + n() + " " + n(); break;
      case 2: d += " H" + n(); break;
      case 3: d += " v" + n(); break;
      case 4: d += " C" + n() + " " + n() + " " + n() + " " + n() + " " + n() + " " + n(); break;
      case 5: d += " s" + n() + " " + n() + " " + n() + " " + n(); break;
      case 6: d += " Q" + n() + " " + n() + " " + n() + " " + n(); break;
      case 7: d += " t" + n() + " " + n(); break;
      case 8:
        d += " A" + format_number(std::abs(v(rng))) + " " + format_number(std::abs(v(rng))) + " " + n() + " " +
             std::to_string(flag(rng)) + " " + std::to_string(flag(rng)) + " " + n() + " " + n();
        break;
      default: d += " Z M" + n() + " " + n(); break;
    }
  }
  return d;
}

double dist_to_polyline(Point p, const std::vector<Point>& poly) {
  double best = 1e300;
  for (std::size_t i = 0; i + 1 < poly.size(); ++i) best = std::min(best, oracle::seg_distance(p, poly[i], poly[i + 1]));
  return best;
}

}  // namespace

TEST_CASE("format_number is canonical") {
  CHECK(format_number(0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(-0.0001) == "0");
  CHECK(format_number(1.5) == "1.5");
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(1.23456) == "1.235");
  CHECK(format_number(-10.1) == "-10.1");
}

TEST_CASE("path data grammar") {
  SUBCASE("relative and absolute forms agree") {
    auto a = parse_path_data("M10 10 L20 10 L20 20 H10 V15 Z");
    auto b = parse_path_data("m10 10 l10 0 0 10 h-10 v-5 z");
    CHECK(a == b);
  }
  SUBCASE("compact numbers and arc flags") {
    auto cmds = parse_path_data("M.5.5L-1e1-2a5 5 0 015 5");
    REQUIRE(cmds.size() == 3);
    CHECK(cmds[0].points[0] == Point{0.5, 0.5});
    CHECK(cmds[1].points[0] == Point{-10, -2});
    CHECK(cmds[2].kind == CommandKind::ArcTo);
    CHECK_FALSE(cmds[2].arc.large_arc);
    CHECK(cmds[2].arc.sweep);
    CHECK(cmds[2].points[0] == Point{-5, 3});
  }
  SUBCASE("implicit lineto after moveto") {
    auto cmds = parse_path_data("M0 0 10 0 10 10");
    REQUIRE(cmds.size() == 3);
    CHECK(cmds[1].kind == CommandKind::LineTo);
    CHECK(cmds[2].kind == CommandKind::LineTo);
  }
  SUBCASE("smooth curves reflect the previous control point") {
    auto cmds = parse_path_data("M0 0 C0 10 10 10 10 0 S20 -10 20 0");
    REQUIRE(cmds.size() == 3);
    CHECK(cmds[2].points[0] == Point{10, -10});
    auto q = parse_path_data("M0 0 Q5 10 10 0 T20 0");
    CHECK(q[2].points[0] == Point{15, -10});
    auto lone = parse_path_data("M0 0 L5 5 T20 0");
    CHECK(lone[2].points[0] == Point{5, 5});
  }
  SUBCASE("drawing after close starts at the subpath origin") {
    auto subs = split_subpaths(parse_path_data("M10 10 L20 10 L20 20 Z l5 0"));
    REQUIRE(subs.size() == 2);
    CHECK(subs[0].closed);
    CHECK(subs[1].commands[0] == PathCommand::move_to({10, 10}));
    CHECK(subs[1].commands[1] == PathCommand::line_to({15, 10}));
  }
  SUBCASE("errors") {
    CHECK(kind_of([] { parse_path_data("L10 10"); }) == ErrorKind::NoInitialMoveTo);
    CHECK(kind_of([] { parse_path_data("M10"); }) == ErrorKind::PathSyntax);
    CHECK(kind_of([] { parse_path_data("M0 0 X5"); }) == ErrorKind::PathSyntax);
    CHECK(kind_of([] { parse_path_data("M0 0 A5 5 0 2 0 1 1"); }) == ErrorKind::PathSyntax);
    std::vector<PathCommand> bad{PathCommand::line_to({1, 1})};
    CHECK(kind_of([&] { split_subpaths(bad); }) == ErrorKind::NoInitialMoveTo);
  }
  SUBCASE("numbers snap to the 1e-3 grid") {
    auto cmds = parse_path_data("M0.12345 1.99999");
    CHECK(cmds[0].points[0] == Point{0.123, 2.0});
  }
}

TEST_CASE("parse and serialize round-trip on random path data") {
  std::mt19937 rng(3);
  for (int i = 0; i < 500; ++i) {
    std::string d = random_path_data(rng);
    auto subs = split_subpaths(parse_path_data(d));
    std::string canon = serialize_path_data(subs);
    auto again = split_subpaths(parse_path_data(canon));
    INFO(d);
    CHECK(again == subs);
    CHECK(serialize_path_data(again) == canon);
  }
}

TEST_CASE("document round-trip is a fixed point") {
  for (const auto& f : std::filesystem::directory_iterator(SVGLOOP_CORPUS_DIR)) {
    SvgDocument doc = parse_document(oracle::read_file(f.path())).document;
    std::string once = serialize_document(doc);
    SvgDocument back = parse_document(once).document;
    INFO(f.path().filename().string());
    CHECK(back == doc);
    CHECK(serialize_document(back) == once);
  }
}

TEST_CASE("colors") {
  CHECK(parse_color("#fff") == Rgba{255, 255, 255, 255});
  CHECK(parse_color("#102030") == Rgba{16, 32, 48, 255});
  CHECK(parse_color("rgb(1, 2, 3)") == Rgba{1, 2, 3, 255});
  CHECK(parse_color("rgb(100%,0%,50%)") == Rgba{255, 0, 128, 255});
  CHECK(parse_color("red") == Rgba{255, 0, 0, 255});
  CHECK_FALSE(parse_color("#12").has_value());
  CHECK_FALSE(parse_color("nonsense").has_value());
  CHECK(format_color({16, 32, 48, 255}) == "#102030");
}

TEST_CASE("style resolution") {
  SUBCASE("inheritance and style attribute precedence") {
    auto doc = parse_document(wrap("<g fill=\"#00ff00\" fill-rule=\"evenodd\"><path d=\"M0 0 L10 0 L0 10 Z\" "
                                   "style=\"fill:#0000ff\"/><path d=\"M0 0 L10 0 L0 10 Z\"/></g>"))
                   .document;
    REQUIRE(doc.elements.size() == 2);
    CHECK(doc.elements[0].fill == Rgba{0, 0, 255, 255});
    CHECK(doc.elements[1].fill == Rgba{0, 255, 0, 255});
    CHECK(doc.elements[1].fill_rule == FillRule::EvenOdd);
  }
  SUBCASE("fill-opacity without stroke folds into opacity") {
    auto el = parse_document(wrap("<path d=\"M0 0 L10 0 L0 10 Z\" fill=\"red\" fill-opacity=\"0.5\" opacity=\"0.5\"/>"))
                  .document.elements.at(0);
    CHECK(el.opacity == doctest::Approx(0.25));
    CHECK(el.fill->a == 255);
  }
  SUBCASE("fill none and strokes") {
    auto el = parse_document(wrap("<path d=\"M0 0 L10 0\" fill=\"none\" stroke=\"#000\" stroke-width=\"2\"/>"))
                  .document.elements.at(0);
    CHECK_FALSE(el.fill.has_value());
    REQUIRE(el.stroke.has_value());
    CHECK(el.stroke->width == 2.0);
  }
  SUBCASE("invisible elements are kept in the model") {
    auto doc = parse_document(wrap("<path d=\"M0 0 L10 0 L0 10 Z\" opacity=\"0\"/>")).document;
    CHECK(doc.elements.size() == 1);
  }
}

TEST_CASE("basic shapes become paths") {
  auto doc = parse_document(wrap("<rect x=\"1\" y=\"2\" width=\"3\" height=\"4\"/><circle cx=\"50\" cy=\"50\" r=\"10\"/>"
                                 "<ellipse cx=\"5\" cy=\"5\" rx=\"2\" ry=\"1\"/><line x1=\"0\" y1=\"0\" x2=\"5\" y2=\"5\" "
                                 "stroke=\"black\"/><polygon points=\"0,0 5,0 5,5\"/><polyline points=\"0 0 1 1 2 0\"/>"))
                 .document;
  REQUIRE(doc.elements.size() == 6);
  CHECK(serialize_path_data(doc.elements[0].subpaths) == "M1 2 L4 2 L4 6 L1 6 Z");
  CHECK(doc.elements[1].subpaths.at(0).closed);
  CHECK(serialize_path_data(doc.elements[4].subpaths) == "M0 0 L5 0 L5 5 Z");
  CHECK_FALSE(doc.elements[5].subpaths.at(0).closed);
}

TEST_CASE("strict and lenient modes") {
  std::string with_transform = wrap("<path d=\"M0 0 L10 0 L0 10 Z\" transform=\"rotate(10)\"/>");
  CHECK(kind_of([&] { parse_document(with_transform, {ParseMode::Strict, true}); }) == ErrorKind::UnsupportedFeature);
  auto lenient = parse_document(with_transform);
  CHECK_FALSE(lenient.warnings.empty());

  std::string unknown = wrap("<text>hi</text><path d=\"M0 0 L10 0 L0 10 Z\"/>");
  CHECK(kind_of([&] { parse_document(unknown, {ParseMode::Strict, true}); }) == ErrorKind::UnsupportedFeature);
  CHECK(parse_document(unknown).document.elements.size() == 1);
}

TEST_CASE("document errors") {
  CHECK(kind_of([] { parse_document("<svg><path d=\"M0 0\""); }) == ErrorKind::XmlMalformed);
  CHECK(kind_of([] { parse_document("<html/>"); }) == ErrorKind::XmlMalformed);
  CHECK(kind_of([] { parse_document(wrap("")); }) == ErrorKind::EmptyDocument);
  CHECK(parse_document(wrap(""), {ParseMode::Lenient, false}).document.elements.empty());
  CHECK(kind_of([] { parse_document(wrap("<path d=\"L0 0\"/>"), {ParseMode::Strict, true}); }) ==
        ErrorKind::NoInitialMoveTo);
  // Lenient parsing drops the broken path with a warning.
  auto lenient = parse_document(wrap("<path d=\"L0 0\"/><path d=\"M0 0 L1 0 L0 1 Z\"/>"));
  CHECK(lenient.document.elements.size() == 1);
  CHECK(lenient.warnings.size() == 1);
}

TEST_CASE("root geometry and metadata") {
  auto doc = parse_document("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"448px\" height=\"224\" "
                            "viewBox=\"-10 0 200 100\"><title>a cat</title><path d=\"M0 0 L1 0 L0 1 Z\"/></svg>")
                 .document;
  CHECK(doc.width == 448);
  CHECK(doc.view_box == ViewBox{-10, 0, 200, 100});
  CHECK(doc.prompt_metadata == std::optional<std::string>("a cat"));
}

TEST_CASE("fragments") {
  auto r = parse_fragment("<path d=\"M0 0 L10 0 L0 10 Z\"/><path d=\"M5 5 L6 6 L5 6 Z\"/>", {}, {0, 0, 50, 50});
  CHECK(r.document.elements.size() == 2);
  CHECK(r.document.view_box == ViewBox{0, 0, 50, 50});
  CHECK(kind_of([] { parse_fragment("<path d=\"M0 0 L10 0 L0 10 Z\"", {ParseMode::Strict, true}); }) ==
        ErrorKind::XmlMalformed);
}

TEST_CASE("with_elements reindexes") {
  SvgDocument frame;
  PathElement e;
  e.source_index = 7;
  auto doc = with_elements(frame, {e, e});
  CHECK(doc.elements[0].source_index == 0);
  CHECK(doc.elements[1].source_index == 1);
}

TEST_CASE("flattening stays within tolerance of the true curve") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> v(0, 200);
  for (int i = 0; i < 200; ++i) {
    Point p0{v(rng), v(rng)}, p1{v(rng), v(rng)}, p2{v(rng), v(rng)}, p3{v(rng), v(rng)};
    const double tol = 0.1;
    std::vector<Point> poly{p0};
    flatten_cubic(p0, p1, p2, p3, tol, poly);
    CHECK(poly.back() == p3);
    double worst = 0.0;
    for (int s = 0; s <= 400; ++s) {
      double t = s / 400.0, u = 1 - t;
      Point b = p0 * (u * u * u) + p1 * (3 * u * u * t) + p2 * (3 * u * t * t) + p3 * (t * t * t);
      worst = std::max(worst, dist_to_polyline(b, poly));
    }
    CHECK(worst <= tol * 1.01);
  }
  // Arc endpoints and radius.
  std::vector<Point> arc{{0, 0}};
  flatten_arc({0, 0}, {10, 10, 0, false, true}, {20, 0}, 0.05, arc);
  CHECK(arc.back() == Point{20, 0});
  for (Point p : arc) CHECK(std::hypot(p.x - 10, p.y) == doctest::Approx(10).epsilon(1e-6));
}
