// Writes the bundled synthetic corpus used by the decomposition tests. Output
// is a pure function of the seed, so regenerating it reproduces the checked-in files.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>

#include "svgloop/svg.hpp"

namespace {

using svgloop::format_number;

class Corpus {
 public:
  explicit Corpus(unsigned seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::round(std::uniform_real_distribution<double>(lo, hi)(rng_) * 2.0) / 2.0; }
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  std::string color() {
    static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#17becf", "#000000", "#444444"};
    return palette[pick(0, 9)];
  }

  static std::string rect(double x, double y, double w, double h, bool ccw = false) {
    auto f = format_number;
    if (ccw) return "M" + f(x) + " " + f(y) + " V" + f(y + h) + " H" + f(x + w) + " V" + f(y) + " Z";
    return "M" + f(x) + " " + f(y) + " H" + f(x + w) + " V" + f(y + h) + " H" + f(x) + " Z";
  }

  // Four-cubic circle approximation.
  static std::string circle(double cx, double cy, double r, bool ccw = false) {
    const double k = 0.5523 * r;
    auto f = format_number;
    auto p = [&](double x, double y) { return f(x) + " " + f(y); };
    if (!ccw) {
      return "M" + p(cx + r, cy) + " C" + p(cx + r, cy + k) + " " + p(cx + k, cy + r) + " " + p(cx, cy + r) + " C" +
             p(cx - k, cy + r) + " " + p(cx - r, cy + k) + " " + p(cx - r, cy) + " C" + p(cx - r, cy - k) + " " +
             p(cx - k, cy - r) + " " + p(cx, cy - r) + " C" + p(cx + k, cy - r) + " " + p(cx + r, cy - k) + " " +
             p(cx + r, cy) + " Z";
    }
    return "M" + p(cx + r, cy) + " C" + p(cx + r, cy - k) + " " + p(cx + k, cy - r) + " " + p(cx, cy - r) + " C" +
           p(cx - k, cy - r) + " " + p(cx - r, cy - k) + " " + p(cx - r, cy) + " C" + p(cx - r, cy + k) + " " +
           p(cx - k, cy + r) + " " + p(cx, cy + r) + " C" + p(cx + k, cy + r) + " " + p(cx + r, cy + k) + " " +
           p(cx + r, cy) + " Z";
  }

  static std::string triangle(double x0, double y0, double x1, double y1, double x2, double y2) {
    auto f = format_number;
    return "M" + f(x0) + " " + f(y0) + " L" + f(x1) + " " + f(y1) + " L" + f(x2) + " " + f(y2) + " Z";
  }

  static std::string path(const std::string& d, const std::string& attrs) {
    return "<path d=\"" + d + "\" " + attrs + "/>\n";
  }

  static std::string document(const std::string& title, const std::string& body) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"224\" height=\"224\" viewBox=\"0 0 224 224\">\n"
           "<title>" + title + "</title>\n" + body + "</svg>\n";
  }

  // k non-touching squares on a grid, all in one path.
  std::string disjoint_squares(int k) {
    std::string d;
    for (int i = 0; i < k; ++i) {
      double x = 8.0 + (i % 4) * 52.0 + uniform(0, 6);
      double y = 8.0 + (i / 4) * 52.0 + uniform(0, 6);
      d += (d.empty() ? "" : " ") + rect(x, y, uniform(20, 38), uniform(20, 38));
    }
    return path(d, "fill=\"" + color() + "\"");
  }

  std::string evenodd_ring() {
    double cx = uniform(70, 150), cy = uniform(70, 150), r = uniform(35, 60);
    std::string d = circle(cx, cy, r) + " " + circle(cx, cy, r * 0.55) + " " + rect(5, 5, 20, 20);
    return path(d, "fill=\"" + color() + "\" fill-rule=\"evenodd\"");
  }

  std::string nested_evenodd() {
    double c = uniform(100, 124);
    std::string d = rect(c - 90, c - 90, 180, 180) + " " + rect(c - 60, c - 60, 120, 120) + " " +
                    circle(c, c, uniform(25, 40));
    return path(d, "fill=\"" + color() + "\" fill-rule=\"evenodd\"");
  }

  // Nonzero rule with an oppositely wound hole.
  std::string nonzero_hole() {
    double x = uniform(20, 60), y = uniform(20, 60);
    std::string d = rect(x, y, 120, 120) + " " + rect(x + 30, y + 30, 50, 50, true) + " " + circle(200, 200, 15);
    return path(d, "fill=\"" + color() + "\"");
  }

  std::string translucent_overlap() {
    std::string bg = path(rect(0, 0, 224, 112), "fill=\"#cccccc\"");
    std::string d = circle(80, 100, 40) + " " + circle(120, 100, 40) + " " + circle(190, 190, 25);
    return bg + path(d, "fill=\"" + color() + "\" opacity=\"0.5\"");
  }

  std::string fill_opacity_overlap() {
    std::string bg = path(rect(40, 40, 144, 144), "fill=\"#222222\"");
    std::string d = rect(20, 20, 100, 100) + " " + rect(70, 70, 100, 100) + " " + rect(180, 10, 30, 30);
    return bg + path(d, "fill=\"" + color() + "\" fill-opacity=\"0.6\"");
  }

  std::string curves() {
    std::string d = circle(50, 50, uniform(20, 35)) + " M120 20 Q160 80 200 20 Z M20 150 A 30 20 0 1 1 80 150 Z" +
                    " M130 150 C 150 110 190 110 210 150 S 190 210 170 200 Z";
    return path(d, "fill=\"" + color() + "\"");
  }

  std::string projector() {
    std::string d = rect(20, 80, 90, 60) + " " + circle(85, 110, 18) + " " + triangle(115, 100, 210, 60, 210, 90) +
                    " " + triangle(115, 120, 210, 130, 210, 160);
    return path(d, "fill=\"" + color() + "\" fill-rule=\"evenodd\"");
  }

  std::string evenodd_overlap() {
    std::string d = rect(30, 30, 100, 100) + " " + rect(80, 80, 100, 100) + " " + rect(190, 10, 20, 20);
    return path(d, "fill=\"" + color() + "\" fill-rule=\"evenodd\"");
  }

  std::string stroked() {
    std::string d = rect(30, 30, 60, 60) + " " + circle(160, 160, 30);
    return path(d, "fill=\"" + color() + "\" stroke=\"#000000\" stroke-width=\"4\"") +
           path("M10 200 L60 180 L110 200", "fill=\"none\" stroke=\"" + color() + "\" stroke-width=\"3\"");
  }

  std::string relative_mixed() {
    return path("m20 20 h40 v40 h-40 z m80 0 h40 v40 h-40 z m-40 80 l20 -20 l20 20 t 20 20 z", "fill=\"" + color() + "\"") +
           path("M150 150 c10 -20 30 -20 40 0 s -10 40 -20 40 s -30 -20 -20 -40 Z", "fill=\"" + color() + "\"");
  }

  std::string nonzero_overlap() {
    std::string d = circle(90, 90, 50) + " " + circle(130, 130, 50) + " " + rect(10, 180, 30, 30);
    return path(d, "fill=\"" + color() + "\"");
  }

 private:
  std::mt19937 rng_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate the synthetic decomposition corpus"};
  std::string out_dir;
  unsigned seed = 20260101;
  int count = 60;
  app.add_option("output", out_dir)->required();
  app.add_option("--seed", seed);
  app.add_option("--count", count);
  CLI11_PARSE(app, argc, argv);

  std::filesystem::create_directories(out_dir);
  Corpus corpus(seed);
  for (int i = 0; i < count; ++i) {
    std::string kind;
    std::string body;
    switch (i % 12) {
      case 0: {
        int k = 2 + (i / 12) % 6;
        kind = "disjoint" + std::to_string(k);
        body = corpus.disjoint_squares(k);
        break;
      }
      case 1: kind = "evenodd_ring"; body = corpus.evenodd_ring(); break;
      case 2: kind = "nested_evenodd"; body = corpus.nested_evenodd(); break;
      case 3: kind = "nonzero_hole"; body = corpus.nonzero_hole(); break;
      case 4: kind = "translucent_overlap"; body = corpus.translucent_overlap(); break;
      case 5: kind = "fill_opacity_overlap"; body = corpus.fill_opacity_overlap(); break;
      case 6: kind = "curves"; body = corpus.curves(); break;
      case 7: kind = "projector"; body = corpus.projector(); break;
      case 8: kind = "evenodd_overlap"; body = corpus.evenodd_overlap(); break;
      case 9: kind = "stroked"; body = corpus.stroked(); break;
      case 10: kind = "relative_mixed"; body = corpus.relative_mixed(); break;
      case 11: kind = "nonzero_overlap"; body = corpus.nonzero_overlap(); break;
    }
    // A second, unrelated element keeps paint order in play.
    body = Corpus::path(Corpus::rect(0, 0, 224, 224), "fill=\"#f4f4f4\"") + body;
    char name[64];
    std::snprintf(name, sizeof name, "%03d_%s.svg", i, kind.c_str());
    std::ofstream(std::filesystem::path(out_dir) / name) << Corpus::document("synthetic " + kind + " " + std::to_string(i), body);
  }
  std::cout << "wrote " << count << " files to " << out_dir << '\n';
  return 0;
}
