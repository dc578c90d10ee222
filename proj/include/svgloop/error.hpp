#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace svgloop {

enum class ErrorKind {
  XmlMalformed,
  UnsupportedFeature,
  EmptyDocument,
  NoInitialMoveTo,
  PathSyntax,
  RenderFailure,
  DimensionMismatch,
  TooSmall,
  DegenerateSubpath,
  InvalidArgument,
  IoFailure,
  GeneratorUnavailable,
  Config,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace svgloop
