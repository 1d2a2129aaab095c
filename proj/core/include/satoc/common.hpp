#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace satoc {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input text (DIMACS, QASM, sweep spec).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

/// A request that no circuit can satisfy (e.g. too few ancillas).
/// min_feasible_ancillas is 0 when the notion does not apply.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg, uint32_t min_feasible = 0)
      : Error(msg), min_feasible_ancillas(min_feasible) {}
  uint32_t min_feasible_ancillas;
};

/// Violation of an IR-level precondition (qubit collision, level rule, ...).
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& msg) : Error(msg) {}
};

/// Deterministic 64-bit PRNG: splitmix64 (Steele, Lea & Flood; public domain
/// reference sequence). Chosen because the whole generator is eight lines of
/// overflow-defined arithmetic, so benchmark ensembles reproduce bit-for-bit
/// on any platform.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform draw in [0, bound) via rejection; bound must be nonzero.
  uint64_t below(uint64_t bound) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t v = next();
    while (v >= limit) v = next();
    return v % bound;
  }

  bool coin() { return next() >> 63; }

 private:
  uint64_t state_;
};

}  // namespace satoc
