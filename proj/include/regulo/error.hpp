#pragma once

#include <stdexcept>
#include <string>

namespace regulo {

enum class ErrorKind {
  invalid_parameter,
  memory_ceiling_exceeded,
  corrupt_checkpoint,
  version_mismatch,
  not_symmetric,
  window_out_of_range,
  output_cap_exceeded,
  cap_exceeded,
  combinatorial_blowup,
  resolution_guard,
  non_convergence,
  pole_proximity,
  sample_out_of_domain,
  io_error,
};

const char* to_string(ErrorKind kind) noexcept;

/// Operational failure. Mathematical refutations are never reported this way;
/// they are results carrying a witness.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace regulo
