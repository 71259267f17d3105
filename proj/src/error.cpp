#include "hybhuff/error.hpp"

namespace hybhuff {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Format: return "format error";
    case ErrorKind::Structure: return "structure error";
    case ErrorKind::Range: return "range error";
    case ErrorKind::Consistency: return "consistency error";
    case ErrorKind::Generation: return "generation error";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Model: return "model error";
    case ErrorKind::Fit: return "fit error";
    case ErrorKind::Decode: return "decode error";
    case ErrorKind::Internal: return "internal error";
    case ErrorKind::Io: return "i/o error";
  }
  return "error";
}

}  // namespace hybhuff
