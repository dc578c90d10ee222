#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>

#include "svg_internal.hpp"
#include "svgloop/error.hpp"
#include "svgloop/svg.hpp"

namespace svgloop {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Inheritable presentation properties, as raw strings until an element needs them.
struct Style {
  std::optional<std::string> fill;
  std::optional<std::string> fill_rule;
  std::optional<std::string> fill_opacity;
  std::optional<std::string> stroke;
  std::optional<std::string> stroke_width;
  std::optional<std::string> stroke_opacity;
  double group_opacity = 1.0;
};

class DocumentBuilder {
 public:
  explicit DocumentBuilder(const ParseOptions& options) : options_(options) {}

  ParseResult build(const XmlNode& root) {
    if (root.name != "svg") throw Error(ErrorKind::XmlMalformed, "root element is <" + root.name + ">, expected <svg>");
    read_root_geometry(root);
    Style style;
    apply_presentation(root, style);
    walk_children(root, style, /*at_root=*/true);

    bool paintable = std::any_of(doc_.elements.begin(), doc_.elements.end(), [](const PathElement& el) {
      return !el.subpaths.empty() && (el.fill || el.stroke);
    });
    if (options_.require_elements && !paintable)
      throw Error(ErrorKind::EmptyDocument, "document has no paintable elements");
    return {std::move(doc_), std::move(warnings_)};
  }

 private:
  void unsupported(const std::string& what) {
    if (options_.mode == ParseMode::Strict) throw Error(ErrorKind::UnsupportedFeature, what);
    warnings_.push_back("dropped " + what);
  }

  std::optional<double> number(std::string_view raw, const std::string& what) {
    std::string_view s = trim(raw);
    if (s.ends_with("px")) s.remove_suffix(2);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      unsupported("value '" + std::string(raw) + "' for " + what);
      return std::nullopt;
    }
    return v;
  }

  double number_or(const XmlNode& node, std::string_view key, double fallback) {
    const std::string* raw = node.attribute(key);
    if (!raw) return fallback;
    return number(*raw, std::string(key) + " on <" + node.name + ">").value_or(fallback);
  }

  void read_root_geometry(const XmlNode& root) {
    std::optional<double> w, h;
    if (const std::string* raw = root.attribute("width")) w = number(*raw, "width on <svg>");
    if (const std::string* raw = root.attribute("height")) h = number(*raw, "height on <svg>");
    if (const std::string* raw = root.attribute("viewBox")) {
      std::string s = *raw;
      std::replace(s.begin(), s.end(), ',', ' ');
      std::vector<double> vals;
      std::string_view rest = s;
      while (true) {
        rest = trim(rest);
        if (rest.empty()) break;
        auto sp = rest.find(' ');
        auto v = number(rest.substr(0, sp), "viewBox");
        if (!v) break;
        vals.push_back(*v);
        if (sp == std::string_view::npos) break;
        rest.remove_prefix(sp);
      }
      if (vals.size() == 4 && vals[2] > 0.0 && vals[3] > 0.0) {
        doc_.view_box = {snap(vals[0]), snap(vals[1]), snap(vals[2]), snap(vals[3])};
      } else {
        unsupported("malformed viewBox '" + *raw + "'");
      }
    } else if (w && h && *w > 0.0 && *h > 0.0) {
      doc_.view_box = {0.0, 0.0, snap(*w), snap(*h)};
    }
    doc_.width = snap(w && *w > 0.0 ? *w : doc_.view_box.width);
    doc_.height = snap(h && *h > 0.0 ? *h : doc_.view_box.height);
  }

  // Presentation attributes, then the style attribute, which takes precedence.
  void apply_presentation(const XmlNode& node, Style& style) {
    auto assign = [&](std::string_view key, std::string_view value) {
      std::string v(trim(value));
      if (key == "fill") style.fill = v;
      else if (key == "fill-rule") style.fill_rule = v;
      else if (key == "fill-opacity") style.fill_opacity = v;
      else if (key == "stroke") style.stroke = v;
      else if (key == "stroke-width") style.stroke_width = v;
      else if (key == "stroke-opacity") style.stroke_opacity = v;
      else if (key == "opacity") {
        if (auto o = number(v, "opacity")) style.group_opacity *= std::clamp(*o, 0.0, 1.0);
      } else if (key == "transform" || key == "clip-path" || key == "mask" || key == "filter") {
        unsupported("attribute " + std::string(key) + " on <" + node.name + ">");
      }
    };
    for (const auto& [k, v] : node.attributes) {
      if (k != "style") assign(k, v);
    }
    if (const std::string* css = node.attribute("style")) {
      std::string_view rest = *css;
      while (!rest.empty()) {
        auto semi = rest.find(';');
        std::string_view decl = rest.substr(0, semi);
        auto colon = decl.find(':');
        if (colon != std::string_view::npos) assign(trim(decl.substr(0, colon)), decl.substr(colon + 1));
        if (semi == std::string_view::npos) break;
        rest.remove_prefix(semi + 1);
      }
    }
  }

  void walk_children(const XmlNode& parent, const Style& inherited, bool at_root) {
    for (const XmlNode& child : parent.children) {
      const std::string& name = child.name;
      if (name == "title" || name == "desc") {
        if (at_root && name == "title" && !doc_.prompt_metadata) {
          std::string_view t = trim(child.text);
          if (!t.empty()) doc_.prompt_metadata = std::string(t);
        }
        continue;
      }
      if (name == "metadata") continue;
      if (name == "defs") {
        for (const XmlNode& d : child.children) unsupported("element <" + d.name + "> in <defs>");
        continue;
      }
      Style style = inherited;
      style.group_opacity = 1.0;
      if (name == "g") {
        apply_presentation(child, style);
        if (style.group_opacity < 1.0) {
          if (options_.mode == ParseMode::Strict) throw Error(ErrorKind::UnsupportedFeature, "group opacity");
          warnings_.push_back("folded group opacity into children");
        }
        style.group_opacity *= inherited.group_opacity;
        walk_children(child, style, false);
        continue;
      }
      std::optional<std::string> d = geometry_of(child);
      if (!d) {
        unsupported("element <" + name + ">");
        continue;
      }
      apply_presentation(child, style);
      style.group_opacity *= inherited.group_opacity;
      add_element(child, *d, style);
    }
  }

  // Path data for path and basic shapes; nullopt for anything else.
  std::optional<std::string> geometry_of(const XmlNode& node) {
    const std::string& n = node.name;
    auto f = [](double v) { return format_number(v); };
    if (n == "path") {
      const std::string* d = node.attribute("d");
      return d ? *d : std::string();
    }
    if (n == "rect") {
      double x = number_or(node, "x", 0.0), y = number_or(node, "y", 0.0);
      double w = number_or(node, "width", 0.0), h = number_or(node, "height", 0.0);
      if (w <= 0.0 || h <= 0.0) return std::string();
      const std::string* rx_raw = node.attribute("rx");
      const std::string* ry_raw = node.attribute("ry");
      double rx = number_or(node, "rx", 0.0), ry = number_or(node, "ry", 0.0);
      if (rx_raw && !ry_raw) ry = rx;
      if (ry_raw && !rx_raw) rx = ry;
      rx = std::clamp(rx, 0.0, w / 2.0);
      ry = std::clamp(ry, 0.0, h / 2.0);
      if (rx <= 0.0 || ry <= 0.0) {
        return "M" + f(x) + " " + f(y) + " H" + f(x + w) + " V" + f(y + h) + " H" + f(x) + " Z";
      }
      std::string a = "A" + f(rx) + " " + f(ry) + " 0 0 1 ";
      return "M" + f(x + rx) + " " + f(y) + " H" + f(x + w - rx) + " " + a + f(x + w) + " " + f(y + ry) +
             " V" + f(y + h - ry) + " " + a + f(x + w - rx) + " " + f(y + h) + " H" + f(x + rx) + " " + a +
             f(x) + " " + f(y + h - ry) + " V" + f(y + ry) + " " + a + f(x + rx) + " " + f(y) + " Z";
    }
    if (n == "circle" || n == "ellipse") {
      double cx = number_or(node, "cx", 0.0), cy = number_or(node, "cy", 0.0);
      double rx = 0.0, ry = 0.0;
      if (n == "circle") {
        rx = ry = number_or(node, "r", 0.0);
      } else {
        rx = number_or(node, "rx", 0.0);
        ry = number_or(node, "ry", 0.0);
      }
      if (rx <= 0.0 || ry <= 0.0) return std::string();
      std::string a = "A" + f(rx) + " " + f(ry) + " 0 0 1 ";
      return "M" + f(cx + rx) + " " + f(cy) + " " + a + f(cx - rx) + " " + f(cy) + " " + a + f(cx + rx) + " " +
             f(cy) + " Z";
    }
    if (n == "line") {
      return "M" + f(number_or(node, "x1", 0.0)) + " " + f(number_or(node, "y1", 0.0)) + " L" +
             f(number_or(node, "x2", 0.0)) + " " + f(number_or(node, "y2", 0.0));
    }
    if (n == "polyline" || n == "polygon") {
      const std::string* pts = node.attribute("points");
      if (!pts || trim(*pts).empty()) return std::string();
      return "M" + *pts + (n == "polygon" ? " Z" : "");
    }
    return std::nullopt;
  }

  std::optional<Rgba> paint(const std::optional<std::string>& raw, std::optional<Rgba> fallback,
                            const std::string& what) {
    if (!raw) return fallback;
    if (*raw == "none" || *raw == "transparent") return std::nullopt;
    if (auto c = parse_color(*raw)) return c;
    unsupported(what + " paint '" + *raw + "'");
    return fallback;
  }

  double unit_interval(const std::optional<std::string>& raw, const std::string& what) {
    if (!raw) return 1.0;
    return std::clamp(number(*raw, what).value_or(1.0), 0.0, 1.0);
  }

  void add_element(const XmlNode& node, const std::string& d, const Style& style) {
    std::vector<PathCommand> commands;
    try {
      commands = parse_path_data(d);
    } catch (const Error& e) {
      if (options_.mode == ParseMode::Strict) throw;
      warnings_.push_back(std::string("dropped <") + node.name + ">: " + e.what());
      return;
    }
    if (commands.empty()) {
      warnings_.push_back("dropped <" + node.name + "> with empty geometry");
      return;
    }

    PathElement el;
    el.subpaths = split_subpaths(commands);
    el.fill = paint(style.fill, Rgba{}, "fill");
    if (style.fill_rule) {
      if (*style.fill_rule == "evenodd") el.fill_rule = FillRule::EvenOdd;
      else if (*style.fill_rule != "nonzero") unsupported("fill-rule '" + *style.fill_rule + "'");
    }
    if (auto sc = paint(style.stroke, std::nullopt, "stroke")) {
      double width = style.stroke_width ? number(*style.stroke_width, "stroke-width").value_or(1.0) : 1.0;
      if (width > 0.0) {
        double a = sc->a / 255.0 * unit_interval(style.stroke_opacity, "stroke-opacity");
        sc->a = static_cast<std::uint8_t>(std::lround(a * 255.0));
        el.stroke = Stroke{*sc, snap(width)};
      }
    }
    double opacity = style.group_opacity;
    if (el.fill) {
      double fill_alpha = el.fill->a / 255.0 * unit_interval(style.fill_opacity, "fill-opacity");
      if (el.stroke) {
        el.fill->a = static_cast<std::uint8_t>(std::lround(fill_alpha * 255.0));
      } else {
        el.fill->a = 255;
        opacity *= fill_alpha;
      }
    }
    el.opacity = std::clamp(snap(opacity), 0.0, 1.0);
    el.source_index = static_cast<int>(doc_.elements.size());
    doc_.elements.push_back(std::move(el));
  }

  ParseOptions options_;
  SvgDocument doc_;
  std::vector<std::string> warnings_;
};

}  // namespace

ParseResult parse_document(std::string_view text, const ParseOptions& options) {
  XmlNode root = parse_xml(text);
  return DocumentBuilder(options).build(root);
}

ParseResult parse_fragment(std::string_view fragment, const ParseOptions& options, const ViewBox& view_box) {
  std::string_view body = trim(fragment);
  if (body.starts_with("<?xml") || body.starts_with("<svg")) return parse_document(body, options);
  std::string wrapped = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_number(view_box.width) +
                        "\" height=\"" + format_number(view_box.height) + "\" viewBox=\"" +
                        format_number(view_box.x) + " " + format_number(view_box.y) + " " +
                        format_number(view_box.width) + " " + format_number(view_box.height) + "\">" +
                        std::string(body) + "</svg>";
  return parse_document(wrapped, options);
}

SvgDocument with_elements(const SvgDocument& frame, std::vector<PathElement> elements) {
  SvgDocument doc;
  doc.width = frame.width;
  doc.height = frame.height;
  doc.view_box = frame.view_box;
  doc.prompt_metadata = frame.prompt_metadata;
  doc.elements = std::move(elements);
  for (std::size_t i = 0; i < doc.elements.size(); ++i) doc.elements[i].source_index = static_cast<int>(i);
  return doc;
}

}  // namespace svgloop
