#pragma once

#include <cstdint>
#include <numeric>
#include <optional>

#include "padicfhe/error.hpp"

// Word-size modular helpers used for digit-level (mod p) work and for
// residues of desk-scale tables (mod p^K <= 2^20).
namespace padicfhe::modular {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t result = 1;
  base %= m;
  while (exp != 0) {
    if (exp & 1U) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

// Inverse of a modulo m by the extended Euclidean algorithm; nullopt when
// gcd(a, m) != 1.
inline std::optional<std::uint64_t> invmod(std::uint64_t a, std::uint64_t m) {
  if (m == 1) return 0;
  std::int64_t old_r = static_cast<std::int64_t>(a % m), r = static_cast<std::int64_t>(m);
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::int64_t tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) return std::nullopt;
  std::int64_t x = old_s % static_cast<std::int64_t>(m);
  if (x < 0) x += static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(x);
}

// Deterministic trial division; p is small by construction.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

// base^exp, or nullopt if the result exceeds limit.
inline std::optional<std::uint64_t> checked_pow(std::uint64_t base, unsigned exp,
                                                std::uint64_t limit = UINT64_MAX) {
  std::uint64_t result = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && result > limit / base) return std::nullopt;
    result *= base;
  }
  return result;
}

// Exponent of p in n (n > 0).
inline unsigned valuation(std::uint64_t n, std::uint64_t p) {
  unsigned v = 0;
  while (n != 0 && n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

// Number of base-p digits of m minus one, with the convention 0 for m = 0.
inline unsigned floor_log(std::uint64_t m, std::uint64_t p) {
  unsigned k = 0;
  while (m >= p) {
    m /= p;
    ++k;
  }
  return k;
}

}  // namespace padicfhe::modular
