#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "privsq/tensor.hpp"

namespace privsq {

inline constexpr const char* kStateFormat = "privsq-state";
inline constexpr int kStateFormatVersion = 1;

// A state file that could not be read. `what()` names the file, the byte
// offset for syntax errors, and the violated invariant otherwise.
class StateFileError : public std::runtime_error {
 public:
  StateFileError(std::string source, std::optional<std::size_t> offset, std::string problem);

  const std::string& source() const { return source_; }
  std::optional<std::size_t> offset() const { return offset_; }
  const std::string& problem() const { return problem_; }

 private:
  std::string source_;
  std::optional<std::size_t> offset_;
  std::string problem_;
};

/// JSON text with the layout and the row-major real and imaginary parts.
std::string format_state(const DensityOperator& rho);

/// Parses and validates; `source` is used in diagnostics only.
DensityOperator parse_state(const std::string& text, const std::string& source = "<memory>");

void write_state_file(const std::string& path, const DensityOperator& rho);
DensityOperator read_state_file(const std::string& path);

}  // namespace privsq
