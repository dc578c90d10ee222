#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "svgloop/error.hpp"
#include "svgloop/svg.hpp"
#include "svg_internal.hpp"

namespace svgloop {

std::size_t expected_arity(CommandKind kind) {
  switch (kind) {
    case CommandKind::MoveTo:
    case CommandKind::LineTo:
    case CommandKind::ArcTo:
      return 1;
    case CommandKind::QuadTo:
      return 2;
    case CommandKind::CubicTo:
      return 3;
    case CommandKind::ClosePath:
      return 0;
  }
  return 0;
}

double snap(double v) {
  double s = std::round(v * 1000.0) / 1000.0;
  return s == 0.0 ? 0.0 : s;  // no negative zero
}

std::string format_number(double value) {
  double v = snap(value);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s(buf);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

namespace {

class PathScanner {
 public:
  explicit PathScanner(std::string_view d) : d_(d) {}

  void skip_separators() {
    while (pos_ < d_.size() && (std::isspace(static_cast<unsigned char>(d_[pos_])) || d_[pos_] == ','))
      ++pos_;
  }

  bool at_end() {
    skip_separators();
    return pos_ >= d_.size();
  }

  bool next_is_number() {
    skip_separators();
    if (pos_ >= d_.size()) return false;
    char c = d_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.';
  }

  char command() {
    skip_separators();
    char c = d_[pos_];
    if (!std::isalpha(static_cast<unsigned char>(c)))
      throw Error(ErrorKind::PathSyntax, "expected command letter at offset " + std::to_string(pos_));
    ++pos_;
    return c;
  }

  // SVG number grammar: sign? (digits ('.' digits?)? | '.' digits) exponent?
  double number() {
    skip_separators();
    std::size_t start = pos_;
    if (pos_ < d_.size() && (d_[pos_] == '+' || d_[pos_] == '-')) ++pos_;
    bool digits = false;
    while (pos_ < d_.size() && std::isdigit(static_cast<unsigned char>(d_[pos_]))) {
      ++pos_;
      digits = true;
    }
    if (pos_ < d_.size() && d_[pos_] == '.') {
      ++pos_;
      while (pos_ < d_.size() && std::isdigit(static_cast<unsigned char>(d_[pos_]))) {
        ++pos_;
        digits = true;
      }
    }
    if (!digits) throw Error(ErrorKind::PathSyntax, "expected number at offset " + std::to_string(start));
    if (pos_ < d_.size() && (d_[pos_] == 'e' || d_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < d_.size() && (d_[pos_] == '+' || d_[pos_] == '-')) ++pos_;
      bool exp_digits = false;
      while (pos_ < d_.size() && std::isdigit(static_cast<unsigned char>(d_[pos_]))) {
        ++pos_;
        exp_digits = true;
      }
      if (!exp_digits) pos_ = save;
    }
    std::string_view token = d_.substr(start, pos_ - start);
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value))
      throw Error(ErrorKind::PathSyntax, "bad number '" + std::string(token) + "'");
    return value;
  }

  // Arc flags may be written without separators ("a1 1 0 01 5 5").
  bool flag() {
    skip_separators();
    if (pos_ < d_.size() && (d_[pos_] == '0' || d_[pos_] == '1')) return d_[pos_++] == '1';
    throw Error(ErrorKind::PathSyntax, "expected arc flag at offset " + std::to_string(pos_));
  }

 private:
  std::string_view d_;
  std::size_t pos_ = 0;
};

Point snap(Point p) { return {svgloop::snap(p.x), svgloop::snap(p.y)}; }

}  // namespace

std::vector<PathCommand> parse_path_data(std::string_view d) {
  PathScanner scan(d);
  std::vector<PathCommand> out;
  Point current{};
  Point subpath_start{};
  Point last_cubic_ctrl{};
  Point last_quad_ctrl{};
  char prev = 0;
  bool open_subpath = false;  // a MoveTo is in effect for the current subpath

  auto ensure_moveto = [&] {
    if (out.empty()) throw Error(ErrorKind::NoInitialMoveTo, "path data must start with M/m");
    if (!open_subpath) {
      // Drawing after Z continues from the closed subpath's start point.
      out.push_back(PathCommand::move_to(current));
      open_subpath = true;
    }
  };

  while (!scan.at_end()) {
    char cmd = scan.command();
    char upper = static_cast<char>(std::toupper(static_cast<unsigned char>(cmd)));
    bool rel = cmd != upper;
    if (out.empty() && upper != 'M')
      throw Error(ErrorKind::NoInitialMoveTo, "path data must start with M/m");
    bool first = true;
    do {
      Point base = rel ? current : Point{};
      switch (upper) {
        case 'M': {
          double x = scan.number();
          double y = scan.number();
          Point p = snap(base + Point{x, y});
          if (first) {
            out.push_back(PathCommand::move_to(p));
            subpath_start = p;
            open_subpath = true;
          } else {
            out.push_back(PathCommand::line_to(p));
          }
          current = p;
          break;
        }
        case 'L': {
          ensure_moveto();
          double x = scan.number();
          double y = scan.number();
          current = snap(base + Point{x, y});
          out.push_back(PathCommand::line_to(current));
          break;
        }
        case 'H': {
          ensure_moveto();
          double x = scan.number();
          current = {svgloop::snap((rel ? current.x : 0.0) + x), current.y};
          out.push_back(PathCommand::line_to(current));
          break;
        }
        case 'V': {
          ensure_moveto();
          double y = scan.number();
          current = {current.x, svgloop::snap((rel ? current.y : 0.0) + y)};
          out.push_back(PathCommand::line_to(current));
          break;
        }
        case 'C':
        case 'S': {
          ensure_moveto();
          Point c1;
          if (upper == 'C') {
            double x1 = scan.number();
            double y1 = scan.number();
            c1 = snap(base + Point{x1, y1});
          } else {
            bool chained = prev == 'C' || prev == 'S';
            c1 = chained ? snap(current * 2.0 - last_cubic_ctrl) : current;
          }
          double x2 = scan.number();
          double y2 = scan.number();
          double x = scan.number();
          double y = scan.number();
          Point c2 = snap(base + Point{x2, y2});
          Point p = snap(base + Point{x, y});
          out.push_back(PathCommand::cubic_to(c1, c2, p));
          last_cubic_ctrl = c2;
          current = p;
          break;
        }
        case 'Q':
        case 'T': {
          ensure_moveto();
          Point c;
          if (upper == 'Q') {
            double x1 = scan.number();
            double y1 = scan.number();
            c = snap(base + Point{x1, y1});
          } else {
            bool chained = prev == 'Q' || prev == 'T';
            c = chained ? snap(current * 2.0 - last_quad_ctrl) : current;
          }
          double x = scan.number();
          double y = scan.number();
          Point p = snap(base + Point{x, y});
          out.push_back(PathCommand::quad_to(c, p));
          last_quad_ctrl = c;
          current = p;
          break;
        }
        case 'A': {
          ensure_moveto();
          ArcParams arc;
          arc.rx = svgloop::snap(std::abs(scan.number()));
          arc.ry = svgloop::snap(std::abs(scan.number()));
          arc.x_axis_rotation = svgloop::snap(scan.number());
          arc.large_arc = scan.flag();
          arc.sweep = scan.flag();
          double x = scan.number();
          double y = scan.number();
          Point p = snap(base + Point{x, y});
          out.push_back(PathCommand::arc_to(arc, p));
          current = p;
          break;
        }
        case 'Z': {
          if (open_subpath) {
            out.push_back(PathCommand::close());
            open_subpath = false;
          }
          current = subpath_start;
          break;
        }
        default:
          throw Error(ErrorKind::PathSyntax, std::string("unknown command '") + cmd + "'");
      }
      // Extra coordinate pairs after a MoveTo continue as LineTo.
      prev = (upper == 'M' && !first) ? 'L' : upper;
      first = false;
    } while (upper != 'Z' && scan.next_is_number());
  }
  return out;
}

std::vector<Subpath> split_subpaths(std::span<const PathCommand> commands) {
  std::vector<Subpath> out;
  if (commands.empty()) return out;
  if (commands.front().kind != CommandKind::MoveTo)
    throw Error(ErrorKind::NoInitialMoveTo, "first command is not MoveTo");
  for (const PathCommand& c : commands) {
    if (c.kind == CommandKind::MoveTo) {
      out.emplace_back();
    } else if (out.back().closed) {
      throw Error(ErrorKind::PathSyntax, "command after ClosePath without MoveTo");
    }
    if (c.points.size() != expected_arity(c.kind))
      throw Error(ErrorKind::PathSyntax, "command arity mismatch");
    out.back().commands.push_back(c);
    if (c.kind == CommandKind::ClosePath) out.back().closed = true;
  }
  return out;
}

std::vector<PathCommand> flatten_commands(std::span<const Subpath> subpaths) {
  std::vector<PathCommand> out;
  for (const Subpath& sp : subpaths) out.insert(out.end(), sp.commands.begin(), sp.commands.end());
  return out;
}

std::string serialize_path_data(std::span<const Subpath> subpaths) {
  std::string d;
  auto pt = [&](Point p) {
    d += format_number(p.x);
    d += ' ';
    d += format_number(p.y);
  };
  for (const Subpath& sp : subpaths) {
    for (const PathCommand& c : sp.commands) {
      if (!d.empty()) d += ' ';
      switch (c.kind) {
        case CommandKind::MoveTo: d += 'M'; break;
        case CommandKind::LineTo: d += 'L'; break;
        case CommandKind::CubicTo: d += 'C'; break;
        case CommandKind::QuadTo: d += 'Q'; break;
        case CommandKind::ArcTo: d += 'A'; break;
        case CommandKind::ClosePath: d += 'Z'; break;
      }
      if (c.kind == CommandKind::ArcTo) {
        d += format_number(c.arc.rx) + ' ' + format_number(c.arc.ry) + ' ' +
             format_number(c.arc.x_axis_rotation) + ' ' + (c.arc.large_arc ? '1' : '0') + ' ' +
             (c.arc.sweep ? '1' : '0') + ' ';
        pt(c.points[0]);
        continue;
      }
      for (std::size_t i = 0; i < c.points.size(); ++i) {
        if (i > 0) d += ' ';
        pt(c.points[i]);
      }
    }
  }
  return d;
}

}  // namespace svgloop
