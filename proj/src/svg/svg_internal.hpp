#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace svgloop {

// Rounds to the 1e-3 grid used by the canonical text form.
double snap(double v);

struct XmlNode {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<XmlNode> children;
  std::string text;

  const std::string* attribute(std::string_view key) const {
    for (const auto& [k, v] : attributes)
      if (k == key) return &v;
    return nullptr;
  }
};

// Builds a small DOM with expat. Throws Error(XmlMalformed) on bad input.
XmlNode parse_xml(std::string_view text);

std::string xml_escape(std::string_view text);

}  // namespace svgloop
