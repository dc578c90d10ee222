#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

#include "svgloop/svg.hpp"

namespace svgloop {
namespace {

struct NamedColor {
  std::string_view name;
  std::uint32_t rgb;
};

constexpr std::array<NamedColor, 40> kNamedColors{{
    {"aqua", 0x00ffff},    {"black", 0x000000},     {"blue", 0x0000ff},    {"brown", 0xa52a2a},
    {"coral", 0xff7f50},   {"crimson", 0xdc143c},   {"cyan", 0x00ffff},    {"darkblue", 0x00008b},
    {"darkgray", 0xa9a9a9}, {"darkgreen", 0x006400}, {"darkgrey", 0xa9a9a9}, {"darkred", 0x8b0000},
    {"fuchsia", 0xff00ff}, {"gold", 0xffd700},      {"gray", 0x808080},    {"green", 0x008000},
    {"grey", 0x808080},    {"indigo", 0x4b0082},    {"ivory", 0xfffff0},   {"khaki", 0xf0e68c},
    {"lightblue", 0xadd8e6}, {"lightgray", 0xd3d3d3}, {"lightgrey", 0xd3d3d3}, {"lime", 0x00ff00},
    {"magenta", 0xff00ff}, {"maroon", 0x800000},    {"navy", 0x000080},    {"olive", 0x808000},
    {"orange", 0xffa500},  {"pink", 0xffc0cb},      {"purple", 0x800080},  {"red", 0xff0000},
    {"salmon", 0xfa8072},  {"silver", 0xc0c0c0},    {"skyblue", 0x87ceeb}, {"teal", 0x008080},
    {"tomato", 0xff6347},  {"violet", 0xee82ee},    {"white", 0xffffff},   {"yellow", 0xffff00},
}};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// "rgb(1, 2, 3)", "rgb(10%, 0%, 0%)", "rgba(1, 2, 3, 0.5)"
std::optional<Rgba> parse_functional(std::string_view s, bool with_alpha) {
  auto open = s.find('(');
  auto close = s.rfind(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open)
    return std::nullopt;
  std::string_view args = s.substr(open + 1, close - open - 1);
  std::vector<std::string_view> parts;
  while (true) {
    auto comma = args.find(',');
    parts.push_back(trim(args.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    args.remove_prefix(comma + 1);
  }
  if (parts.size() != (with_alpha ? 4u : 3u)) return std::nullopt;
  std::array<std::uint8_t, 4> ch{0, 0, 0, 255};
  for (std::size_t i = 0; i < 3; ++i) {
    std::string_view p = parts[i];
    bool percent = !p.empty() && p.back() == '%';
    if (percent) p.remove_suffix(1);
    auto v = to_double(p);
    if (!v) return std::nullopt;
    double scaled = percent ? *v * 255.0 / 100.0 : *v;
    ch[i] = static_cast<std::uint8_t>(std::lround(std::clamp(scaled, 0.0, 255.0)));
  }
  if (with_alpha) {
    auto a = to_double(parts[3]);
    if (!a) return std::nullopt;
    ch[3] = static_cast<std::uint8_t>(std::lround(std::clamp(*a, 0.0, 1.0) * 255.0));
  }
  return Rgba{ch[0], ch[1], ch[2], ch[3]};
}

}  // namespace

std::optional<Rgba> parse_color(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) return std::nullopt;
  if (s.front() == '#') {
    s.remove_prefix(1);
    std::array<int, 6> d{};
    if (s.size() != 3 && s.size() != 6) return std::nullopt;
    for (std::size_t i = 0; i < s.size(); ++i) {
      d[i] = hex_digit(s[i]);
      if (d[i] < 0) return std::nullopt;
    }
    if (s.size() == 3) {
      return Rgba{static_cast<std::uint8_t>(d[0] * 17), static_cast<std::uint8_t>(d[1] * 17),
                  static_cast<std::uint8_t>(d[2] * 17), 255};
    }
    return Rgba{static_cast<std::uint8_t>(d[0] * 16 + d[1]), static_cast<std::uint8_t>(d[2] * 16 + d[3]),
                static_cast<std::uint8_t>(d[4] * 16 + d[5]), 255};
  }
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower.starts_with("rgba(")) return parse_functional(lower, true);
  if (lower.starts_with("rgb(")) return parse_functional(lower, false);
  for (const NamedColor& nc : kNamedColors) {
    if (nc.name == lower) {
      return Rgba{static_cast<std::uint8_t>(nc.rgb >> 16), static_cast<std::uint8_t>((nc.rgb >> 8) & 0xff),
                  static_cast<std::uint8_t>(nc.rgb & 0xff), 255};
    }
  }
  return std::nullopt;
}

std::string format_color(Rgba color) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", color.r, color.g, color.b);
  return buf;
}

}  // namespace svgloop
