#include "regulo/error.hpp"

namespace regulo {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::memory_ceiling_exceeded: return "memory-ceiling-exceeded";
    case ErrorKind::corrupt_checkpoint: return "corrupt-checkpoint";
    case ErrorKind::version_mismatch: return "version-mismatch";
    case ErrorKind::not_symmetric: return "not-symmetric";
    case ErrorKind::window_out_of_range: return "window-out-of-range";
    case ErrorKind::output_cap_exceeded: return "output-cap-exceeded";
    case ErrorKind::cap_exceeded: return "cap-exceeded";
    case ErrorKind::combinatorial_blowup: return "combinatorial-blowup";
    case ErrorKind::resolution_guard: return "resolution-guard";
    case ErrorKind::non_convergence: return "non-convergence";
    case ErrorKind::pole_proximity: return "pole-proximity";
    case ErrorKind::sample_out_of_domain: return "sample-out-of-domain";
    case ErrorKind::io_error: return "io-error";
  }
  return "unknown";
}

}  // namespace regulo
