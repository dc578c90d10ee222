#include <expat.h>

#include <memory>

#include "svg_internal.hpp"
#include "svgloop/error.hpp"

namespace svgloop {
namespace {

struct BuildState {
  XmlNode root;
  std::vector<XmlNode*> stack;
  bool has_root = false;
};

void on_start(void* user, const XML_Char* name, const XML_Char** attrs) {
  auto* st = static_cast<BuildState*>(user);
  XmlNode* node = nullptr;
  if (st->stack.empty()) {
    st->root.name = name;
    st->has_root = true;
    node = &st->root;
  } else {
    XmlNode* parent = st->stack.back();
    parent->children.emplace_back();
    node = &parent->children.back();
    node->name = name;
  }
  for (int i = 0; attrs[i] != nullptr; i += 2) node->attributes.emplace_back(attrs[i], attrs[i + 1]);
  st->stack.push_back(node);
}

void on_end(void* user, const XML_Char*) { static_cast<BuildState*>(user)->stack.pop_back(); }

void on_text(void* user, const XML_Char* s, int len) {
  auto* st = static_cast<BuildState*>(user);
  if (!st->stack.empty()) st->stack.back()->text.append(s, static_cast<std::size_t>(len));
}

}  // namespace

XmlNode parse_xml(std::string_view text) {
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(
      XML_ParserCreate("UTF-8"), &XML_ParserFree);
  if (!parser) throw Error(ErrorKind::XmlMalformed, "cannot create XML parser");
  BuildState state;
  XML_SetUserData(parser.get(), &state);
  XML_SetElementHandler(parser.get(), &on_start, &on_end);
  XML_SetCharacterDataHandler(parser.get(), &on_text);
  if (XML_Parse(parser.get(), text.data(), static_cast<int>(text.size()), XML_TRUE) ==
      XML_STATUS_ERROR) {
    throw Error(ErrorKind::XmlMalformed,
                std::string(XML_ErrorString(XML_GetErrorCode(parser.get()))) + " at line " +
                    std::to_string(XML_GetCurrentLineNumber(parser.get())));
  }
  if (!state.has_root) throw Error(ErrorKind::XmlMalformed, "no root element");
  return std::move(state.root);
}

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace svgloop
