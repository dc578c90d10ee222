#include "svg_internal.hpp"
#include "svgloop/svg.hpp"

namespace svgloop {

std::string serialize_element(const PathElement& el) {
  std::string out = "<path d=\"" + serialize_path_data(el.subpaths) + "\"";
  if (el.fill) {
    out += " fill=\"" + format_color(*el.fill) + "\"";
    if (el.fill->a != 255) out += " fill-opacity=\"" + format_number(el.fill->a / 255.0) + "\"";
  } else {
    out += " fill=\"none\"";
  }
  if (el.fill_rule == FillRule::EvenOdd) out += " fill-rule=\"evenodd\"";
  if (el.opacity != 1.0) out += " opacity=\"" + format_number(el.opacity) + "\"";
  if (el.stroke) {
    out += " stroke=\"" + format_color(el.stroke->color) + "\"";
    out += " stroke-width=\"" + format_number(el.stroke->width) + "\"";
    if (el.stroke->color.a != 255)
      out += " stroke-opacity=\"" + format_number(el.stroke->color.a / 255.0) + "\"";
  }
  out += "/>";
  return out;
}

std::string serialize_document(const SvgDocument& doc) {
  const ViewBox& vb = doc.view_box;
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_number(doc.width) +
                    "\" height=\"" + format_number(doc.height) + "\" viewBox=\"" + format_number(vb.x) + " " +
                    format_number(vb.y) + " " + format_number(vb.width) + " " + format_number(vb.height) +
                    "\">\n";
  if (doc.prompt_metadata) out += "<title>" + xml_escape(*doc.prompt_metadata) + "</title>\n";
  for (const PathElement& el : doc.elements) out += serialize_element(el) + "\n";
  out += "</svg>\n";
  return out;
}

}  // namespace svgloop
