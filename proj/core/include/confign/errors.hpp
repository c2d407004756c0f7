#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace confign {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input text (Newick or similar); `position` is a 0-based offset.
struct ParseError : Error {
  std::size_t position;
  ParseError(const std::string& msg, std::size_t pos)
      : Error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

// A configured size/resource cap was exceeded.
struct CapError : Error {
  using Error::Error;
};

// A certification step could not establish its claim (e.g. a sign could not
// be separated from the tail bound, or precision escalation hit its ceiling).
struct CertifyError : Error {
  using Error::Error;
};

}  // namespace confign
