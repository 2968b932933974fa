#pragma once

// Finite-precision representations of 1-Lipschitz maps Z_p -> Z_p:
// value tables, van der Put series and coordinate functions, together with
// the three equivalent measure-preservation criteria.

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "padicfhe/error.hpp"
#include "padicfhe/modular.hpp"
#include "padicfhe/padic.hpp"

namespace padicfhe {

// Upper bound on p^K for the exhaustive representations.
inline constexpr std::uint64_t kMaxTableSize = std::uint64_t{1} << 20U;

namespace detail {

inline std::uint64_t table_size(const PadicContext& ctx) {
  const auto size = modular::checked_pow(ctx.prime(), static_cast<unsigned>(ctx.precision()),
                                         kMaxTableSize);
  if (!size) {
    throw Error(errc::invalid_argument,
                "p^K exceeds the table limit of 2^20 (p = " + std::to_string(ctx.prime()) +
                    ", K = " + std::to_string(ctx.precision()) + ")");
  }
  return *size;
}

inline std::vector<std::uint64_t> prime_powers(const PadicContext& ctx) {
  std::vector<std::uint64_t> pk(static_cast<std::size_t>(ctx.precision()) + 1, 1);
  for (std::size_t i = 1; i < pk.size(); ++i) pk[i] = pk[i - 1] * ctx.prime();
  return pk;
}

inline void check_residues(std::span<const std::uint64_t> values, std::uint64_t size,
                           const char* what) {
  if (values.size() != size) {
    throw Error(errc::invalid_argument, std::string(what) + ": expected " +
                                            std::to_string(size) + " entries, got " +
                                            std::to_string(values.size()));
  }
  for (auto v : values) {
    if (v >= size) {
      throw Error(errc::invalid_argument,
                  std::string(what) + ": residue " + std::to_string(v) + " out of range");
    }
  }
}

}  // namespace detail

// values[x] = f(x) mod p^K for every x in [0, p^K).
class ValueTable {
 public:
  ValueTable(const PadicContext& ctx, std::vector<std::uint64_t> values)
      : ctx_(ctx), values_(std::move(values)) {
    detail::check_residues(values_, detail::table_size(ctx_), "ValueTable");
  }

  template <typename F>
  static ValueTable from_function(const PadicContext& ctx, F&& f) {
    const auto size = detail::table_size(ctx);
    std::vector<std::uint64_t> values(size);
    for (std::uint64_t x = 0; x < size; ++x) {
      values[x] = *f(PadicInt::from_integer(ctx, x)).to_uint64();
    }
    return ValueTable(ctx, std::move(values));
  }

  static ValueTable identity(const PadicContext& ctx) {
    std::vector<std::uint64_t> values(detail::table_size(ctx));
    for (std::uint64_t x = 0; x < values.size(); ++x) values[x] = x;
    return ValueTable(ctx, std::move(values));
  }

  const PadicContext& context() const noexcept { return ctx_; }
  std::span<const std::uint64_t> values() const noexcept { return values_; }
  std::uint64_t size() const noexcept { return values_.size(); }
  std::uint64_t operator[](std::uint64_t x) const { return values_.at(x); }

  PadicInt apply(const PadicInt& x) const {
    require_same_context(ctx_, x.context());
    return PadicInt::from_integer(ctx_, values_[*x.to_uint64()]);
  }

  friend bool operator==(const ValueTable&, const ValueTable&) = default;

 private:
  PadicContext ctx_;
  std::vector<std::uint64_t> values_;
};

// f(x) = sum_m B_m chi(m, x), coefficients B_m mod p^K for m in [0, p^K).
class VdpSeries {
 public:
  VdpSeries(const PadicContext& ctx, std::vector<std::uint64_t> coefficients)
      : ctx_(ctx), coefficients_(std::move(coefficients)) {
    detail::check_residues(coefficients_, detail::table_size(ctx_), "VdpSeries");
  }

  const PadicContext& context() const noexcept { return ctx_; }
  std::span<const std::uint64_t> coefficients() const noexcept { return coefficients_; }
  std::uint64_t size() const noexcept { return coefficients_.size(); }
  std::uint64_t coefficient(std::uint64_t m) const { return coefficients_.at(m); }

  // p^floor(log_p m) divides B_m.
  bool divisible(std::uint64_t m) const {
    const auto shift = modular::floor_log(m, ctx_.prime());
    return coefficients_.at(m) % *modular::checked_pow(ctx_.prime(), shift) == 0;
  }

  // Normalized coefficient b_m = B_m / p^floor(log_p m), known modulo
  // p^(K - floor(log_p m)). Requires divisible(m).
  std::uint64_t normalized(std::uint64_t m) const {
    if (!divisible(m)) {
      throw Error(errc::not_lipschitz, "B_" + std::to_string(m) +
                                           " is not divisible by p^floor(log_p m)");
    }
    const auto shift = modular::floor_log(m, ctx_.prime());
    return coefficients_[m] / *modular::checked_pow(ctx_.prime(), shift);
  }

  friend bool operator==(const VdpSeries&, const VdpSeries&) = default;

 private:
  PadicContext ctx_;
  std::vector<std::uint64_t> coefficients_;
};

// f(x) = sum_k p^k phi_k(x_0, ..., x_k). phi[k] has p^(k+1) entries indexed
// by the prefix value x mod p^(k+1).
class CoordRep {
 public:
  CoordRep(const PadicContext& ctx, std::vector<std::vector<Digit>> phi)
      : ctx_(ctx), phi_(std::move(phi)) {
    detail::table_size(ctx_);
    if (phi_.size() != static_cast<std::size_t>(ctx_.precision())) {
      throw Error(errc::invalid_argument, "CoordRep: expected one table per digit");
    }
    std::uint64_t expected = ctx_.prime();
    for (const auto& level : phi_) {
      if (level.size() != expected) {
        throw Error(errc::invalid_argument, "CoordRep: coordinate table has wrong size");
      }
      for (Digit d : level) {
        if (d >= ctx_.prime()) throw Error(errc::invalid_argument, "CoordRep: digit out of range");
      }
      expected *= ctx_.prime();
    }
  }

  const PadicContext& context() const noexcept { return ctx_; }

  // phi_k as a table over prefixes of length k+1.
  std::span<const Digit> phi(int k) const { return phi_.at(static_cast<std::size_t>(k)); }

  // Sub-function x_k -> phi_k(a_0, ..., a_{k-1}, x_k) for the fixed prefix a < p^k.
  std::vector<Digit> subfn(int k, std::uint64_t a) const {
    const auto& level = phi_.at(static_cast<std::size_t>(k));
    const std::uint64_t pk = level.size() / ctx_.prime();
    if (a >= pk) throw Error(errc::invalid_argument, "subfn: prefix out of range");
    std::vector<Digit> out(ctx_.prime());
    for (std::uint64_t t = 0; t < out.size(); ++t) out[t] = level[a + t * pk];
    return out;
  }

  friend bool operator==(const CoordRep&, const CoordRep&) = default;

 private:
  PadicContext ctx_;
  std::vector<std::vector<Digit>> phi_;
};

// ---------------------------------------------------------------------------
// van der Put series

// chi(m, x) = 1 iff x = m mod p^n, n = number of base-p digits of m (n = 1 for m = 0).
inline int chi(std::uint64_t m, const PadicInt& x) {
  const PadicContext& ctx = x.context();
  if (m >= detail::table_size(ctx)) {
    throw Error(errc::invalid_argument, "chi: index " + std::to_string(m) + " out of range");
  }
  const auto n = modular::floor_log(m, ctx.prime()) + 1;
  const auto pn = *modular::checked_pow(ctx.prime(), n);
  std::uint64_t prefix = 0;
  for (int i = static_cast<int>(n) - 1; i >= 0; --i) prefix = prefix * ctx.prime() + x.digit(i);
  return prefix == m % pn ? 1 : 0;
}

// Sums B_m over the distinct indices m with chi(m, x) = 1: x mod p, and
// x mod p^n for every n >= 2 whose digit n-1 of x is nonzero.
inline PadicInt vdp_eval(const VdpSeries& s, const PadicInt& x) {
  const PadicContext& ctx = s.context();
  require_same_context(ctx, x.context());
  const auto size = s.size();
  std::uint64_t prefix = x.digit(0);
  std::uint64_t sum = s.coefficient(prefix);
  std::uint64_t pn = ctx.prime();
  for (int n = 1; n < ctx.precision(); ++n) {
    if (x.digit(n) != 0) {
      prefix += x.digit(n) * pn;
      sum = (sum + s.coefficient(prefix)) % size;
    }
    pn *= ctx.prime();
  }
  return PadicInt::from_integer(ctx, sum);
}

// B_m = f(m) for m < p, otherwise f(m) - f(m - m_{n-1} p^{n-1}).
inline VdpSeries vdp_interpolate(const ValueTable& t) {
  const auto& ctx = t.context();
  const std::uint64_t p = ctx.prime();
  const auto size = t.size();
  std::vector<std::uint64_t> b(size);
  for (std::uint64_t m = 0; m < size; ++m) {
    if (m < p) {
      b[m] = t[m];
      continue;
    }
    const auto top = *modular::checked_pow(p, modular::floor_log(m, p));
    const auto lower = m % top;
    b[m] = (t[m] + size - t[lower]) % size;
  }
  return VdpSeries(ctx, std::move(b));
}

inline ValueTable table_from_vdp(const VdpSeries& s) {
  return ValueTable::from_function(s.context(), [&](const PadicInt& x) { return vdp_eval(s, x); });
}

// ---------------------------------------------------------------------------
// 1-Lipschitz tests

// x = y mod p^j implies f(x) = f(y) mod p^j, checked against the
// representative x mod p^j of each class.
inline bool check_one_lipschitz(const ValueTable& t) {
  const auto pk = detail::prime_powers(t.context());
  for (std::size_t j = 1; j + 1 < pk.size(); ++j) {
    for (std::uint64_t x = pk[j]; x < t.size(); ++x) {
      if (t[x] % pk[j] != t[x % pk[j]] % pk[j]) return false;
    }
  }
  return true;
}

inline bool check_one_lipschitz(const VdpSeries& s) {
  for (std::uint64_t m = s.context().prime(); m < s.size(); ++m) {
    if (!s.divisible(m)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Coordinate representation

inline CoordRep coord_from_table(const ValueTable& t) {
  if (!check_one_lipschitz(t)) {
    throw Error(errc::not_lipschitz, "coord_from_table: table is not 1-Lipschitz");
  }
  const auto& ctx = t.context();
  const auto pk = detail::prime_powers(ctx);
  std::vector<std::vector<Digit>> phi(static_cast<std::size_t>(ctx.precision()));
  for (std::size_t k = 0; k < phi.size(); ++k) {
    phi[k].resize(pk[k + 1]);
    for (std::uint64_t v = 0; v < pk[k + 1]; ++v) {
      phi[k][v] = static_cast<Digit>(t[v] / pk[k] % ctx.prime());
    }
  }
  return CoordRep(ctx, std::move(phi));
}

inline ValueTable table_from_coord(const CoordRep& c) {
  const auto& ctx = c.context();
  const auto pk = detail::prime_powers(ctx);
  std::vector<std::uint64_t> values(pk.back());
  for (std::uint64_t x = 0; x < values.size(); ++x) {
    std::uint64_t y = 0;
    for (int k = 0; k < ctx.precision(); ++k) y += pk[k] * c.phi(k)[x % pk[k + 1]];
    values[x] = y;
  }
  return ValueTable(ctx, std::move(values));
}

// ---------------------------------------------------------------------------
// Measure-preservation criteria

// Bijectivity of x -> f(x) mod p^k on Z/p^k for every k in [1, K].
inline bool check_measure_bruteforce(const ValueTable& t) {
  const auto pk = detail::prime_powers(t.context());
  std::vector<char> seen;
  for (std::size_t k = 1; k < pk.size(); ++k) {
    seen.assign(pk[k], 0);
    for (std::uint64_t x = 0; x < pk[k]; ++x) {
      const auto y = t[x] % pk[k];
      if (seen[y]) return false;
      seen[y] = 1;
    }
  }
  return true;
}

// Normalized-coefficient criterion: {b_0..b_{p-1}} is a complete residue
// system mod p, and for each k in [min_level, K-1] and m < p^k the residues
// b_{m + i p^k} mod p, i = 1..p-1, are exactly the nonzero residues.
// min_level = 1 is the correct criterion; larger values are accepted so the
// weaker reading (conditions only from k = 2 on) can be evaluated.
inline bool check_measure_vdp(const VdpSeries& s, int min_level = 1) {
  if (!check_one_lipschitz(s)) {
    throw Error(errc::not_lipschitz, "check_measure_vdp: series fails the divisibility test");
  }
  const auto& ctx = s.context();
  const std::uint64_t p = ctx.prime();
  std::vector<char> seen(p, 0);
  for (std::uint64_t m = 0; m < p; ++m) {
    const auto r = s.normalized(m) % p;
    if (seen[r]) return false;
    seen[r] = 1;
  }
  const auto pk = detail::prime_powers(ctx);
  for (int k = std::max(min_level, 1); k < ctx.precision(); ++k) {
    for (std::uint64_t m = 0; m < pk[k]; ++m) {
      std::fill(seen.begin(), seen.end(), 0);
      for (std::uint64_t i = 1; i < p; ++i) {
        const auto r = s.normalized(m + i * pk[k]) % p;
        if (r == 0 || seen[r]) return false;
        seen[r] = 1;
      }
    }
  }
  return true;
}

namespace detail {
inline bool is_permutation_of_digits(std::span<const Digit> f, std::uint32_t p) {
  std::vector<char> seen(p, 0);
  for (Digit d : f) {
    if (seen[d]) return false;
    seen[d] = 1;
  }
  return true;
}
}  // namespace detail

// phi_0 and every sub-function phi_{k,[a]_k} are bijections of {0..p-1}.
inline bool check_measure_coord(const CoordRep& c) {
  const auto& ctx = c.context();
  if (!detail::is_permutation_of_digits(c.phi(0), ctx.prime())) return false;
  std::uint64_t pk = ctx.prime();
  for (int k = 1; k < ctx.precision(); ++k) {
    for (std::uint64_t a = 0; a < pk; ++a) {
      if (!detail::is_permutation_of_digits(c.subfn(k, a), ctx.prime())) return false;
    }
    pk *= ctx.prime();
  }
  return true;
}

// ---------------------------------------------------------------------------
// Random generation

// Random 1-Lipschitz table built from independent coordinate sub-functions.
// Each sub-function is a uniformly random permutation with probability
// bijective_probability, otherwise a uniformly random map {0..p-1} -> {0..p-1}.
template <typename Rng>
CoordRep random_coord_rep(const PadicContext& ctx, Rng& rng, double bijective_probability = 0.9) {
  detail::table_size(ctx);
  const auto pk = detail::prime_powers(ctx);
  const std::uint32_t p = ctx.prime();
  std::bernoulli_distribution bijective(bijective_probability);
  std::uniform_int_distribution<Digit> digit(0, p - 1);
  std::vector<std::vector<Digit>> phi(static_cast<std::size_t>(ctx.precision()));
  std::vector<Digit> sub(p);
  for (std::size_t k = 0; k < phi.size(); ++k) {
    phi[k].resize(pk[k + 1]);
    for (std::uint64_t a = 0; a < pk[k]; ++a) {
      if (bijective(rng)) {
        for (Digit t = 0; t < p; ++t) sub[t] = t;
        std::shuffle(sub.begin(), sub.end(), rng);
      } else {
        for (auto& d : sub) d = digit(rng);
      }
      for (Digit t = 0; t < p; ++t) phi[k][a + t * pk[k]] = sub[t];
    }
  }
  return CoordRep(ctx, std::move(phi));
}

template <typename Rng>
ValueTable random_lipschitz_table(const PadicContext& ctx, Rng& rng,
                                  double bijective_probability = 0.9) {
  return table_from_coord(random_coord_rep(ctx, rng, bijective_probability));
}

}  // namespace padicfhe
