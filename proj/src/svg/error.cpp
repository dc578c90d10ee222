#include "svgloop/error.hpp"

namespace svgloop {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::XmlMalformed: return "XmlMalformed";
    case ErrorKind::UnsupportedFeature: return "UnsupportedFeature";
    case ErrorKind::EmptyDocument: return "EmptyDocument";
    case ErrorKind::NoInitialMoveTo: return "NoInitialMoveTo";
    case ErrorKind::PathSyntax: return "PathSyntax";
    case ErrorKind::RenderFailure: return "RenderFailure";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::TooSmall: return "TooSmall";
    case ErrorKind::DegenerateSubpath: return "DegenerateSubpath";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::IoFailure: return "IoFailure";
    case ErrorKind::GeneratorUnavailable: return "GeneratorUnavailable";
    case ErrorKind::Config: return "Config";
  }
  return "Unknown";
}

}  // namespace svgloop
