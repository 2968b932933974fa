#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace padicfhe {

// Error categories. The CLI maps each one to a distinct exit status.
enum class errc {
  invalid_argument,   // malformed value, out-of-range digit, bad flag value
  context_mismatch,   // operands built over different (p, K)
  domain,             // mathematical precondition violated (non-unit, bad valuation)
  even_prime,         // operation only defined for odd p
  not_lipschitz,      // input is required to be 1-Lipschitz and is not
  parse,              // formula or file syntax error
  incompatible,       // formula uses an operation the key is not homomorphic for
  io,                 // file could not be read or written
};

inline std::string_view errc_name(errc code) {
  switch (code) {
    case errc::invalid_argument: return "invalid_argument";
    case errc::context_mismatch: return "context_mismatch";
    case errc::domain: return "domain";
    case errc::even_prime: return "even_prime";
    case errc::not_lipschitz: return "not_lipschitz";
    case errc::parse: return "parse";
    case errc::incompatible: return "incompatible";
    case errc::io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

// Syntax error carrying the byte offset where parsing stopped.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& what)
      : Error(errc::parse, what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace padicfhe
