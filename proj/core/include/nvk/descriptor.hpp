#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "nvk/measures.hpp"
#include "nvk/representation.hpp"

namespace nvk {

inline constexpr std::string_view kSchemaVersion = "nvk-1";

/// Invalid descriptor. line and column are 1-based positions in the source
/// text (0 when unknown); path is a JSON pointer to the offending value.
class DescriptorError : public std::invalid_argument {
 public:
  DescriptorError(const std::string& message, std::size_t line, std::size_t column, std::string path);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& path() const { return path_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string path_;
};

/// Parses and validates a full descriptor:
///   {"schema": "nvk-1", "a": 0, "b": [0], "measure": {...}}
/// Numbers may be JSON numbers or expression strings ("pi", "2*pi", "inf").
RepresentationData parse_descriptor(std::string_view text);

/// Accepts either a full descriptor (returns its measure) or a bare measure
/// object.
Measure parse_measure_document(std::string_view text);

/// Serializes data to a descriptor that parse_descriptor reads back exactly.
/// Throws std::invalid_argument for densities without an expression.
std::string write_descriptor(const RepresentationData& data, int indent = 2);

}  // namespace nvk
