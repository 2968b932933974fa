#pragma once

// Homomorphic cipher families over Z_p at precision K, and the binary
// operations G for which linear ciphers x -> Ax with A^d = 1 stay
// homomorphic.
//
//   additive        f(x) = A x,                       A a unit
//   multiplicative  f(p^k u) = p^k A^k w(u_0)^s <u>^a, gcd(s, p-1) = 1
//   xor             f_k = sum_{i<=k} alpha_i^(k) x_i mod p, alpha_k^(k) != 0
//   and             f_k = x_k^(s_k) mod p,             gcd(s_k, p-1) = 1
//   fhe             f(x) = A x,                       A^d = 1 for the declared G
//
// In the multiplicative family w is the Teichmuller lift and <u> = u / w(u_0)
// the principal unit part, which makes the map exactly multiplicative.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "padicfhe/error.hpp"
#include "padicfhe/lipschitz.hpp"
#include "padicfhe/modular.hpp"
#include "padicfhe/padic.hpp"

namespace padicfhe {

// ---------------------------------------------------------------------------
// Operations G

struct LinearG {
  PadicInt a;
  PadicInt b;
};
struct G1 {};  // x y^(p-1)
struct G2 {};  // x^(p-1) y + x y^(p-1)
struct G3 {};  // x^((p-1)/2) y^((p-1)/2)
struct G4 {};  // x / (1 - p x^(p-1)) + y / (1 - p y^(p-1))

// c + a x + b y + sum c_ij x^i y^j over a finite term list, i + j >= 2.
struct SeriesG {
  PadicInt c;
  PadicInt a;
  PadicInt b;
  std::map<std::pair<unsigned, unsigned>, PadicInt> terms;
};

class GOperation {
 public:
  using Variant = std::variant<LinearG, G1, G2, G3, G4, SeriesG>;

  template <typename T>
    requires std::is_constructible_v<Variant, T>
  GOperation(T op) : GOperation(Variant(std::move(op)), 0) {}  // NOLINT(google-explicit-constructor)

 private:
  GOperation(Variant op, int) : op_(std::move(op)) {
    if (const auto* s = std::get_if<SeriesG>(&op_)) {
      require_same_context(s->c.context(), s->a.context());
      require_same_context(s->c.context(), s->b.context());
      for (const auto& [ij, coeff] : s->terms) {
        require_same_context(s->c.context(), coeff.context());
        if (ij.first + ij.second < 2) {
          throw Error(errc::invalid_argument, "series term must have total degree >= 2");
        }
      }
    } else if (const auto* l = std::get_if<LinearG>(&op_)) {
      require_same_context(l->a.context(), l->b.context());
    }
  }


 public:
  const Variant& get() const noexcept { return op_; }
  bool is_linear() const noexcept { return std::holds_alternative<LinearG>(op_); }

  std::string name() const {
    return std::visit(
        [](const auto& op) -> std::string {
          using T = std::decay_t<decltype(op)>;
          if constexpr (std::is_same_v<T, LinearG>) return "GLIN";
          if constexpr (std::is_same_v<T, G1>) return "G1";
          if constexpr (std::is_same_v<T, G2>) return "G2";
          if constexpr (std::is_same_v<T, G3>) return "G3";
          if constexpr (std::is_same_v<T, G4>) return "G4";
          if constexpr (std::is_same_v<T, SeriesG>) return "SERIES";
        },
        op_);
  }

 private:
  Variant op_;
};

inline PadicInt g4_series(const PadicInt& x, const PadicInt& y) {
  const auto& ctx = x.context();
  const std::uint64_t p = ctx.prime();
  PadicInt sum = PadicInt::zero(ctx);
  for (int s = 0; s < ctx.precision(); ++s) {
    const auto n = (p - 1) * static_cast<std::uint64_t>(s) + 1;
    sum += (pow_nat(x, n) + pow_nat(y, n)).shift_up(s);
  }
  return sum;
}

inline PadicInt g_eval(const GOperation& op, const PadicInt& x, const PadicInt& y) {
  require_same_context(x.context(), y.context());
  const auto& ctx = x.context();
  const std::uint64_t p = ctx.prime();
  return std::visit(
      [&](const auto& g) -> PadicInt {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, LinearG>) {
          return g.a * x + g.b * y;
        } else if constexpr (std::is_same_v<T, G1>) {
          return x * pow_nat(y, p - 1);
        } else if constexpr (std::is_same_v<T, G2>) {
          return pow_nat(x, p - 1) * y + x * pow_nat(y, p - 1);
        } else if constexpr (std::is_same_v<T, G3>) {
          require_odd_prime(ctx, "G3");
          return pow_nat(x, (p - 1) / 2) * pow_nat(y, (p - 1) / 2);
        } else if constexpr (std::is_same_v<T, G4>) {
          const PadicInt one = PadicInt::one(ctx);
          const PadicInt pp = PadicInt::from_integer(ctx, p);
          return x * invert_unit(one - pp * pow_nat(x, p - 1)) +
                 y * invert_unit(one - pp * pow_nat(y, p - 1));
        } else {
          PadicInt sum = g.c + g.a * x + g.b * y;
          for (const auto& [ij, coeff] : g.terms) {
            sum += coeff * pow_nat(x, ij.first) * pow_nat(y, ij.second);
          }
          return sum;
        }
      },
      op.get());
}

// Total degrees n of the non-linear part that carry a nonzero term at
// precision K. Terms of G4 with s >= K vanish mod p^K.
inline std::vector<std::uint64_t> degree_set(const GOperation& op, const PadicContext& ctx) {
  const std::uint64_t p = ctx.prime();
  return std::visit(
      [&](const auto& g) -> std::vector<std::uint64_t> {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, LinearG>) {
          return {};
        } else if constexpr (std::is_same_v<T, G1> || std::is_same_v<T, G2>) {
          return {p};
        } else if constexpr (std::is_same_v<T, G3>) {
          return {p - 1};
        } else if constexpr (std::is_same_v<T, G4>) {
          std::vector<std::uint64_t> out;
          for (int s = 1; s < std::max(2, ctx.precision()); ++s) {
            out.push_back((p - 1) * static_cast<std::uint64_t>(s) + 1);
          }
          return out;
        } else {
          std::set<std::uint64_t> degrees;
          for (const auto& [ij, coeff] : g.terms) {
            if (!coeff.is_zero()) degrees.insert(ij.first + ij.second);
          }
          return {degrees.begin(), degrees.end()};
        }
      },
      op.get());
}

struct AdmissibleMultipliers {
  bool all_units = false;               // linear G: every unit A works
  std::uint64_t d = 0;                  // gcd of (n - 1) over the degree set
  std::vector<PadicInt> values;         // solutions of A^d = 1, ascending by residue
};

// Solutions of A^d = 1 in Z_p (p odd): the Teichmuller lifts w(j) with
// j^d = 1 mod p, since 1 + pZ_p is torsion-free.
inline AdmissibleMultipliers admissible_multipliers(const PadicContext& ctx, const GOperation& op) {
  require_odd_prime(ctx, "admissible_multipliers");
  AdmissibleMultipliers out;
  const auto degrees = degree_set(op, ctx);
  if (degrees.empty()) {
    out.all_units = true;
    return out;
  }
  for (auto n : degrees) out.d = std::gcd(out.d, n - 1);
  const std::uint32_t p = ctx.prime();
  bool constant_term = false;
  if (const auto* s = std::get_if<SeriesG>(&op.get())) constant_term = !s->c.is_zero();
  for (Digit j = 1; j < p; ++j) {
    if (constant_term && j != 1) continue;  // A c = c forces A = 1
    if (modular::powmod(j, out.d, p) == 1) out.values.push_back(teichmuller(ctx, j));
  }
  std::sort(out.values.begin(), out.values.end());
  return out;
}

// ---------------------------------------------------------------------------
// Keys

enum class Family { additive, multiplicative, xor_digits, and_digits, fhe };

inline std::string_view family_name(Family f) {
  switch (f) {
    case Family::additive: return "additive";
    case Family::multiplicative: return "multiplicative";
    case Family::xor_digits: return "xor";
    case Family::and_digits: return "and";
    case Family::fhe: return "fhe";
  }
  return "?";
}

inline Family parse_family(std::string_view name) {
  for (auto f : {Family::additive, Family::multiplicative, Family::xor_digits, Family::and_digits,
                 Family::fhe}) {
    if (family_name(f) == name) return f;
  }
  throw Error(errc::invalid_argument, "unknown cipher family '" + std::string(name) + "'");
}

struct AdditiveKey {
  PadicInt A;
};

struct MultiplicativeKey {
  PadicInt A;
  std::uint32_t s;
  PadicInt a;
};

struct XorKey {
  PadicContext ctx;
  std::vector<std::vector<Digit>> rows;  // rows[k] = alpha_0^(k) .. alpha_k^(k)
};

struct AndKey {
  PadicContext ctx;
  std::vector<std::uint32_t> exponents;  // s_k per digit
};

struct FheKey {
  PadicInt A;
  std::uint64_t d;  // A^d = 1; 0 for a linear G (no constraint)
  GOperation g;
};

class CipherKey {
 public:
  using Variant = std::variant<AdditiveKey, MultiplicativeKey, XorKey, AndKey, FheKey>;

  static CipherKey additive(PadicInt A) {
    if (!A.is_unit()) throw Error(errc::domain, "additive key: A must be a unit");
    return CipherKey(AdditiveKey{std::move(A)});
  }

  static CipherKey multiplicative(PadicInt A, std::uint32_t s, PadicInt a) {
    require_same_context(A.context(), a.context());
    const auto& ctx = A.context();
    require_odd_prime(ctx, "multiplicative key");
    if (!A.is_unit() || !a.is_unit()) {
      throw Error(errc::domain, "multiplicative key: A and a must be units");
    }
    if (s < 1 || s >= ctx.prime() || std::gcd<std::uint64_t>(s, ctx.prime() - 1) != 1) {
      throw Error(errc::domain, "multiplicative key: s must be in [1, p-1] with gcd(s, p-1) = 1");
    }
    return CipherKey(MultiplicativeKey{std::move(A), s, std::move(a)});
  }

  static CipherKey xor_digits(const PadicContext& ctx, std::vector<std::vector<Digit>> rows) {
    if (rows.size() != static_cast<std::size_t>(ctx.precision())) {
      throw Error(errc::invalid_argument, "xor key: expected one row per digit");
    }
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (rows[k].size() != k + 1) {
        throw Error(errc::invalid_argument, "xor key: row " + std::to_string(k) + " must have " +
                                                std::to_string(k + 1) + " coefficients");
      }
      for (Digit d : rows[k]) {
        if (d >= ctx.prime()) throw Error(errc::invalid_argument, "xor key: coefficient >= p");
      }
      if (rows[k][k] == 0) throw Error(errc::domain, "xor key: zero diagonal coefficient");
    }
    return CipherKey(XorKey{ctx, std::move(rows)});
  }

  static CipherKey and_digits(const PadicContext& ctx, std::vector<std::uint32_t> exponents) {
    if (exponents.size() != static_cast<std::size_t>(ctx.precision())) {
      throw Error(errc::invalid_argument, "and key: expected one exponent per digit");
    }
    for (auto s : exponents) {
      if (s < 1 || s >= std::max<std::uint32_t>(ctx.prime(), 2) ||
          std::gcd<std::uint64_t>(s, ctx.prime() - 1) != 1) {
        throw Error(errc::domain, "and key: exponents must lie in [1, p-1] and be prime to p-1");
      }
    }
    return CipherKey(AndKey{ctx, std::move(exponents)});
  }

  static CipherKey fhe(PadicInt A, GOperation g) {
    const auto& ctx = A.context();
    if (!A.is_unit()) throw Error(errc::domain, "fhe key: A must be a unit");
    const auto adm = admissible_multipliers(ctx, g);
    if (!adm.all_units &&
        std::find(adm.values.begin(), adm.values.end(), A) == adm.values.end()) {
      throw Error(errc::domain, "fhe key: A = " + A.to_string() + " is not admissible for " +
                                    g.name() + " (needs A^" + std::to_string(adm.d) + " = 1)");
    }
    if (const auto* l = std::get_if<LinearG>(&g.get())) require_same_context(ctx, l->a.context());
    return CipherKey(FheKey{std::move(A), adm.all_units ? 0 : adm.d, std::move(g)});
  }

  Family family() const { return static_cast<Family>(key_.index()); }

  const PadicContext& context() const {
    return std::visit(
        [](const auto& k) -> const PadicContext& {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, XorKey> || std::is_same_v<T, AndKey>) {
            return k.ctx;
          } else {
            return k.A.context();
          }
        },
        key_);
  }

  const Variant& get() const noexcept { return key_; }

 private:
  explicit CipherKey(Variant key) : key_(std::move(key)) {}
  Variant key_;
};

// ---------------------------------------------------------------------------
// Per-family encryption

inline PadicInt additive_encrypt(const AdditiveKey& key, const PadicInt& x) { return key.A * x; }
inline PadicInt additive_decrypt(const AdditiveKey& key, const PadicInt& y) {
  return invert_unit(key.A) * y;
}

inline PadicInt multiplicative_encrypt(const MultiplicativeKey& key, const PadicInt& x) {
  require_same_context(key.A.context(), x.context());
  const auto k = x.valuation();
  if (!k) return x;
  const auto& ctx = x.context();
  const PadicInt u = x.shift_down(*k);
  const PadicInt omega = teichmuller(ctx, u.digit(0));
  const PadicInt principal = u * invert_unit(omega);
  const PadicInt image = pow_nat(key.A, static_cast<std::uint64_t>(*k)) * pow_nat(omega, key.s) *
                         pow_unit(principal, key.a);
  return image.shift_up(*k);
}

inline PadicInt multiplicative_decrypt(const MultiplicativeKey& key, const PadicInt& y) {
  require_same_context(key.A.context(), y.context());
  const auto k = y.valuation();
  if (!k) return y;
  const auto& ctx = y.context();
  const std::uint32_t p = ctx.prime();
  const PadicInt c =
      y.shift_down(*k) * invert_unit(pow_nat(key.A, static_cast<std::uint64_t>(*k)));
  const auto s_inv = *modular::invmod(key.s, p - 1);
  const auto t0 = static_cast<Digit>(modular::powmod(c.digit(0), s_inv == 0 ? 1 : s_inv, p));
  const PadicInt omega = teichmuller(ctx, t0);
  const PadicInt principal_pow = c * invert_unit(pow_nat(omega, key.s));
  const PadicInt principal = pow_unit(principal_pow, invert_unit(key.a));
  return (omega * principal).shift_up(*k);
}

// The map p^k A^k (t_0^s mod p) (1 + p t)^a for x = p^k (t_0 + p t), read
// literally with integer t_0^s mod p. Not multiplicative for s != 1; kept
// for comparison with the corrected form above.
inline PadicInt multiplicative_encrypt_literal(const MultiplicativeKey& key, const PadicInt& x) {
  const auto dec = unit_decompose(x);
  if (!dec.valuation) return x;
  const auto& ctx = x.context();
  const auto lead = modular::powmod(dec.unit_digit, key.s, ctx.prime());
  const PadicInt base = PadicInt::one(ctx) + dec.unit_tail.shift_up(1);
  const PadicInt image = pow_nat(key.A, static_cast<std::uint64_t>(*dec.valuation)) *
                         PadicInt::from_integer(ctx, lead) * pow_unit(base, key.a);
  return image.shift_up(*dec.valuation);
}

inline PadicInt xor_encrypt(const XorKey& key, const PadicInt& x) {
  require_same_context(key.ctx, x.context());
  const std::uint64_t p = key.ctx.prime();
  std::vector<Digit> out(x.digits().size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i <= k; ++i) acc += static_cast<std::uint64_t>(key.rows[k][i]) * x.digit(static_cast<int>(i));
    out[k] = static_cast<Digit>(acc % p);
  }
  return PadicInt::from_digits(key.ctx, out);
}

// Forward substitution through the lower-triangular digit map.
inline PadicInt xor_decrypt(const XorKey& key, const PadicInt& y) {
  require_same_context(key.ctx, y.context());
  const std::uint64_t p = key.ctx.prime();
  std::vector<Digit> x(y.digits().size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    std::uint64_t acc = y.digit(static_cast<int>(k));
    for (std::size_t i = 0; i < k; ++i) {
      acc += (p - key.rows[k][i]) * static_cast<std::uint64_t>(x[i]) % p;
    }
    const auto inv = *modular::invmod(key.rows[k][k], p);
    x[k] = static_cast<Digit>(acc % p * inv % p);
  }
  return PadicInt::from_digits(key.ctx, x);
}

inline PadicInt and_encrypt(const AndKey& key, const PadicInt& x) {
  require_same_context(key.ctx, x.context());
  std::vector<Digit> out(x.digits().size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = static_cast<Digit>(
        modular::powmod(x.digit(static_cast<int>(k)), key.exponents[k], key.ctx.prime()));
  }
  return PadicInt::from_digits(key.ctx, out);
}

inline PadicInt and_decrypt(const AndKey& key, const PadicInt& y) {
  require_same_context(key.ctx, y.context());
  const std::uint32_t p = key.ctx.prime();
  std::vector<Digit> out(y.digits().size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    auto inv = *modular::invmod(key.exponents[k], p - 1);
    if (inv == 0) inv = 1;  // p = 2: the only exponent is 1
    out[k] = static_cast<Digit>(modular::powmod(y.digit(static_cast<int>(k)), inv, p));
  }
  return PadicInt::from_digits(key.ctx, out);
}

inline PadicInt fhe_encrypt(const FheKey& key, const PadicInt& x) { return key.A * x; }
inline PadicInt fhe_decrypt(const FheKey& key, const PadicInt& y) {
  return invert_unit(key.A) * y;
}

inline PadicInt encrypt(const CipherKey& key, const PadicInt& x) {
  require_same_context(key.context(), x.context());
  return std::visit(
      [&](const auto& k) -> PadicInt {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, AdditiveKey>) return additive_encrypt(k, x);
        if constexpr (std::is_same_v<T, MultiplicativeKey>) return multiplicative_encrypt(k, x);
        if constexpr (std::is_same_v<T, XorKey>) return xor_encrypt(k, x);
        if constexpr (std::is_same_v<T, AndKey>) return and_encrypt(k, x);
        if constexpr (std::is_same_v<T, FheKey>) return fhe_encrypt(k, x);
      },
      key.get());
}

inline PadicInt decrypt(const CipherKey& key, const PadicInt& y) {
  require_same_context(key.context(), y.context());
  return std::visit(
      [&](const auto& k) -> PadicInt {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, AdditiveKey>) return additive_decrypt(k, y);
        if constexpr (std::is_same_v<T, MultiplicativeKey>) return multiplicative_decrypt(k, y);
        if constexpr (std::is_same_v<T, XorKey>) return xor_decrypt(k, y);
        if constexpr (std::is_same_v<T, AndKey>) return and_decrypt(k, y);
        if constexpr (std::is_same_v<T, FheKey>) return fhe_decrypt(k, y);
      },
      key.get());
}

inline ValueTable encryption_table(const CipherKey& key) {
  return ValueTable::from_function(key.context(),
                                   [&](const PadicInt& x) { return encrypt(key, x); });
}

// ---------------------------------------------------------------------------
// Key generation

namespace detail {

template <typename Rng>
PadicInt random_residue(const PadicContext& ctx, Rng& rng) {
  std::uniform_int_distribution<Digit> digit(0, ctx.prime() - 1);
  std::vector<Digit> digits(static_cast<std::size_t>(ctx.precision()));
  for (auto& d : digits) d = digit(rng);
  return PadicInt::from_digits(ctx, digits);
}

template <typename Rng>
PadicInt random_unit(const PadicContext& ctx, Rng& rng) {
  std::uniform_int_distribution<Digit> lead(1, ctx.prime() - 1);
  std::vector<Digit> digits = random_residue(ctx, rng).to_digits();
  digits[0] = lead(rng);
  return PadicInt::from_digits(ctx, digits);
}

// Elements of [1, p-1] prime to p-1.
inline std::vector<std::uint32_t> exponent_units(std::uint32_t p) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t s = 1; s < std::max<std::uint32_t>(p, 2); ++s) {
    if (std::gcd<std::uint64_t>(s, p - 1) == 1) out.push_back(s);
  }
  return out;
}

template <typename T, typename Rng>
const T& pick(const std::vector<T>& items, Rng& rng) {
  std::uniform_int_distribution<std::size_t> index(0, items.size() - 1);
  return items[index(rng)];
}

}  // namespace detail

// Uniformly random key satisfying the family's constraints. Fhe keys need the
// operation G and exclude A = 1 whenever another admissible multiplier exists.
template <typename Rng>
CipherKey keygen(const PadicContext& ctx, Family family, Rng& rng,
                 const std::optional<GOperation>& g = std::nullopt) {
  switch (family) {
    case Family::additive:
      return CipherKey::additive(detail::random_unit(ctx, rng));
    case Family::multiplicative: {
      require_odd_prime(ctx, "multiplicative keygen");
      PadicInt A = detail::random_unit(ctx, rng);
      const auto s = detail::pick(detail::exponent_units(ctx.prime()), rng);
      PadicInt a = detail::random_unit(ctx, rng);
      return CipherKey::multiplicative(std::move(A), s, std::move(a));
    }
    case Family::xor_digits: {
      std::uniform_int_distribution<Digit> digit(0, ctx.prime() - 1);
      std::uniform_int_distribution<Digit> nonzero(1, ctx.prime() - 1);
      std::vector<std::vector<Digit>> rows(static_cast<std::size_t>(ctx.precision()));
      for (std::size_t k = 0; k < rows.size(); ++k) {
        rows[k].resize(k + 1);
        for (std::size_t i = 0; i < k; ++i) rows[k][i] = digit(rng);
        rows[k][k] = nonzero(rng);
      }
      return CipherKey::xor_digits(ctx, std::move(rows));
    }
    case Family::and_digits: {
      const auto units = detail::exponent_units(ctx.prime());
      std::vector<std::uint32_t> exponents(static_cast<std::size_t>(ctx.precision()));
      for (auto& s : exponents) s = detail::pick(units, rng);
      return CipherKey::and_digits(ctx, std::move(exponents));
    }
    case Family::fhe: {
      if (!g) throw Error(errc::invalid_argument, "fhe keygen needs an operation G");
      const auto adm = admissible_multipliers(ctx, *g);
      if (adm.all_units) {
        PadicInt A = detail::random_unit(ctx, rng);
        while (A == PadicInt::one(ctx) && ctx.prime() > 2) A = detail::random_unit(ctx, rng);
        return CipherKey::fhe(std::move(A), *g);
      }
      std::vector<PadicInt> candidates;
      for (const auto& A : adm.values) {
        if (!(A == PadicInt::one(ctx))) candidates.push_back(A);
      }
      if (candidates.empty()) {
        throw Error(errc::domain, "fhe keygen: A = 1 is the only solution of A^" +
                                      std::to_string(adm.d) + " = 1 for " + g->name() +
                                      " at p = " + std::to_string(ctx.prime()));
      }
      return CipherKey::fhe(detail::pick(candidates, rng), *g);
    }
  }
  throw Error(errc::invalid_argument, "unknown family");
}

// Encryption map equal to the identity on every residue mod p^K. Exhaustive
// at desk scale; otherwise probes all residues below 2^16 plus every
// single-digit value d p^i and 1 + d p^i.
inline bool is_identity_key(const CipherKey& key) {
  const auto& ctx = key.context();
  const auto fixed = [&](const PadicInt& v) { return encrypt(key, v) == v; };
  const auto full = modular::checked_pow(ctx.prime(), static_cast<unsigned>(ctx.precision()),
                                         std::uint64_t{1} << 16U);
  const std::uint64_t limit = full ? *full : std::uint64_t{1} << 16U;
  for (std::uint64_t x = 0; x < limit; ++x) {
    if (!fixed(PadicInt::from_integer(ctx, x))) return false;
  }
  if (full) return true;
  const PadicInt one = PadicInt::one(ctx);
  for (int i = 1; i < ctx.precision(); ++i) {
    for (Digit d = 1; d < std::min<Digit>(ctx.prime(), 64); ++d) {
      const PadicInt v = PadicInt::from_integer(ctx, d).shift_up(i);
      if (!fixed(v) || !fixed(one + v)) return false;
    }
  }
  return true;
}

}  // namespace padicfhe
