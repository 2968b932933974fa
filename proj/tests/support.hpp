#pragma once

// Independent integer oracles used across the test suites. These work on
// plain uint64 residues so that they never share code paths with the library.

#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "padicfhe/padic.hpp"

namespace oracle {

inline std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e-- != 0) r *= b;
  return r;
}

// Repeated multiplication, no square-and-multiply.
inline std::uint64_t slow_pow(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  for (std::uint64_t i = 0; i < e; ++i) r = static_cast<std::uint64_t>((unsigned __int128)r * b % m);
  return r;
}

inline std::optional<std::uint64_t> scan_inverse(std::uint64_t a, std::uint64_t m) {
  for (std::uint64_t x = 0; x < m; ++x) {
    if ((unsigned __int128)a * x % m == 1 % m) return x;
  }
  return std::nullopt;
}

inline std::vector<std::uint32_t> digits_of(std::uint64_t v, std::uint32_t p, int k) {
  std::vector<std::uint32_t> d(static_cast<std::size_t>(k));
  for (auto& x : d) {
    x = static_cast<std::uint32_t>(v % p);
    v /= p;
  }
  return d;
}

inline std::uint64_t value_of(const std::vector<std::uint32_t>& d, std::uint32_t p) {
  std::uint64_t v = 0;
  for (auto it = d.rbegin(); it != d.rend(); ++it) v = v * p + *it;
  return v;
}

inline std::uint64_t digitwise(std::uint64_t x, std::uint64_t y, std::uint32_t p, int k, bool mul) {
  auto dx = digits_of(x, p, k);
  const auto dy = digits_of(y, p, k);
  for (std::size_t i = 0; i < dx.size(); ++i) dx[i] = mul ? dx[i] * dy[i] % p : (dx[i] + dy[i]) % p;
  return value_of(dx, p);
}

inline std::uint64_t residue(const padicfhe::PadicInt& x) { return *x.to_uint64(); }

inline padicfhe::PadicInt make(const padicfhe::PadicContext& ctx, std::uint64_t v) {
  return padicfhe::PadicInt::from_integer(ctx, v);
}

}  // namespace oracle

namespace oracle {

// Pairwise definition of 1-Lipschitz: x = y mod p^j implies f(x) = f(y) mod p^j.
inline bool lipschitz_pairwise(const std::vector<std::uint64_t>& f, std::uint32_t p, int k) {
  const std::uint64_t n = f.size();
  for (std::uint64_t x = 0; x < n; ++x) {
    for (std::uint64_t y = x + 1; y < n; ++y) {
      std::uint64_t pj = 1;
      for (int j = 1; j <= k; ++j) {
        pj *= p;
        if (x % pj == y % pj && f[x] % pj != f[y] % pj) return false;
      }
    }
  }
  return true;
}

// Bijective reduction mod p^j for every j, by sorting images.
inline bool bijective_every_level(const std::vector<std::uint64_t>& f, std::uint32_t p, int k) {
  std::uint64_t pj = 1;
  for (int j = 1; j <= k; ++j) {
    pj *= p;
    std::vector<bool> hit(pj);
    for (std::uint64_t x = 0; x < pj; ++x) hit[f[x] % pj] = true;
    for (bool h : hit) {
      if (!h) return false;
    }
  }
  return true;
}

}  // namespace oracle
