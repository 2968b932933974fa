#pragma once

// Fixed-precision p-adic integers.
//
// A PadicInt is the residue of a p-adic integer modulo p^K, stored as K
// little-endian base-p digits. Every operation here is 1-Lipschitz, so the
// first K digits of a result are exactly the first K digits of the
// infinite-precision answer.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "padicfhe/error.hpp"
#include "padicfhe/modular.hpp"

namespace padicfhe {

using Digit = std::uint32_t;

class PadicContext {
 public:
  static constexpr int kDefaultMaxPrecision = 64;
  // Keeps digit products and K-term column sums inside 64 bits.
  static constexpr std::uint32_t kMaxPrime = 65521;

  PadicContext(std::uint32_t p, int precision, int max_precision = kDefaultMaxPrecision)
      : p_(p), k_(precision) {
    if (p > kMaxPrime || !modular::is_prime(p)) {
      throw Error(errc::invalid_argument, "p must be a prime below " +
                                              std::to_string(kMaxPrime) + ", got " +
                                              std::to_string(p));
    }
    if (precision < 1 || precision > max_precision) {
      throw Error(errc::invalid_argument, "precision must be in [1, " +
                                              std::to_string(max_precision) + "], got " +
                                              std::to_string(precision));
    }
  }

  std::uint32_t prime() const noexcept { return p_; }
  int precision() const noexcept { return k_; }
  bool odd() const noexcept { return p_ != 2; }

  // Same prime, different precision; used for truncation and for the
  // internal guard digits of the exp/log series.
  PadicContext with_precision(int precision) const {
    return PadicContext(p_, precision, std::max(precision, kDefaultMaxPrecision));
  }

  // p^K when it fits in 64 bits.
  std::optional<std::uint64_t> modulus() const {
    return modular::checked_pow(p_, static_cast<unsigned>(k_));
  }

  friend bool operator==(const PadicContext&, const PadicContext&) = default;

 private:
  std::uint32_t p_;
  int k_;
};

inline void require_same_context(const PadicContext& a, const PadicContext& b) {
  if (!(a == b)) {
    throw Error(errc::context_mismatch,
                "context mismatch: (" + std::to_string(a.prime()) + ", " +
                    std::to_string(a.precision()) + ") vs (" + std::to_string(b.prime()) +
                    ", " + std::to_string(b.precision()) + ")");
  }
}

class PadicInt {
 public:
  explicit PadicInt(const PadicContext& ctx)
      : ctx_(ctx), digits_(static_cast<std::size_t>(ctx.precision()), 0) {}

  static PadicInt zero(const PadicContext& ctx) { return PadicInt(ctx); }
  static PadicInt one(const PadicContext& ctx) { return from_integer(ctx, 1); }

  // Reduces value mod p^K.
  static PadicInt from_integer(const PadicContext& ctx, std::uint64_t value) {
    PadicInt out(ctx);
    const std::uint64_t p = ctx.prime();
    for (auto& d : out.digits_) {
      if (value == 0) break;
      d = static_cast<Digit>(value % p);
      value /= p;
    }
    return out;
  }

  // Little-endian digits; sequences longer than K are truncated.
  static PadicInt from_digits(const PadicContext& ctx, std::span<const Digit> digits) {
    PadicInt out(ctx);
    for (std::size_t i = 0; i < digits.size(); ++i) {
      if (digits[i] >= ctx.prime()) {
        throw Error(errc::invalid_argument, "digit " + std::to_string(digits[i]) +
                                                " out of range for p = " +
                                                std::to_string(ctx.prime()));
      }
      if (i < out.digits_.size()) out.digits_[i] = digits[i];
    }
    return out;
  }

  // Plain non-negative decimal integer of any length, reduced mod p^K.
  static PadicInt from_decimal(const PadicContext& ctx, std::string_view text) {
    if (text.empty()) throw Error(errc::invalid_argument, "empty decimal literal");
    PadicInt out(ctx);
    for (char c : text) {
      if (c < '0' || c > '9') {
        throw Error(errc::invalid_argument,
                    "invalid decimal literal '" + std::string(text) + "'");
      }
      out.mul_small_add(10, static_cast<std::uint64_t>(c - '0'));
    }
    return out;
  }

  const PadicContext& context() const noexcept { return ctx_; }
  std::uint32_t prime() const noexcept { return ctx_.prime(); }
  int precision() const noexcept { return ctx_.precision(); }

  Digit digit(int i) const { return digits_.at(static_cast<std::size_t>(i)); }
  std::span<const Digit> digits() const noexcept { return digits_; }
  std::vector<Digit> to_digits() const { return digits_; }

  PadicInt truncate(int precision) const {
    if (precision > ctx_.precision()) {
      throw Error(errc::invalid_argument, "cannot truncate to a larger precision");
    }
    PadicInt out(ctx_.with_precision(precision));
    std::copy_n(digits_.begin(), precision, out.digits_.begin());
    return out;
  }

  // Zero-extends to a larger precision. The new digits carry no information
  // about the infinite-precision value; callers must account for that.
  PadicInt extend(int precision) const {
    PadicInt out(ctx_.with_precision(precision));
    std::copy_n(digits_.begin(), std::min(precision, ctx_.precision()), out.digits_.begin());
    return out;
  }

  std::optional<std::uint64_t> to_uint64() const {
    unsigned __int128 value = 0;
    for (auto it = digits_.rbegin(); it != digits_.rend(); ++it) {
      value = value * ctx_.prime() + *it;
      if (value > UINT64_MAX) return std::nullopt;
    }
    return static_cast<std::uint64_t>(value);
  }

  bool is_zero() const {
    return std::all_of(digits_.begin(), digits_.end(), [](Digit d) { return d == 0; });
  }
  bool is_unit() const { return digits_[0] != 0; }

  // Index of the first nonzero digit; nullopt for the zero residue.
  std::optional<int> valuation() const {
    for (std::size_t i = 0; i < digits_.size(); ++i) {
      if (digits_[i] != 0) return static_cast<int>(i);
    }
    return std::nullopt;
  }

  // Multiplication by p^k.
  PadicInt shift_up(int k) const {
    PadicInt out(ctx_);
    for (int i = k; i < ctx_.precision(); ++i) out.digits_[i] = digits_[i - k];
    return out;
  }

  // Exact division by p^k of a value whose first k digits are zero; the k
  // unknown top digits are filled with zeros.
  PadicInt shift_down(int k) const {
    PadicInt out(ctx_);
    for (int i = 0; i + k < ctx_.precision(); ++i) out.digits_[i] = digits_[i + k];
    return out;
  }

  // Canonical text form `p:K:d0,d1,...`.
  std::string to_string() const {
    std::string out = std::to_string(ctx_.prime()) + ":" + std::to_string(ctx_.precision()) + ":";
    for (std::size_t i = 0; i < digits_.size(); ++i) {
      if (i != 0) out += ',';
      out += std::to_string(digits_[i]);
    }
    return out;
  }

  friend PadicInt operator+(const PadicInt& x, const PadicInt& y) {
    require_same_context(x.ctx_, y.ctx_);
    PadicInt out(x.ctx_);
    const Digit p = x.prime();
    Digit carry = 0;
    for (std::size_t i = 0; i < out.digits_.size(); ++i) {
      Digit v = x.digits_[i] + y.digits_[i] + carry;
      carry = v >= p ? 1 : 0;
      out.digits_[i] = v - carry * p;
    }
    return out;
  }

  friend PadicInt operator-(const PadicInt& x, const PadicInt& y) {
    require_same_context(x.ctx_, y.ctx_);
    PadicInt out(x.ctx_);
    const Digit p = x.prime();
    Digit borrow = 0;
    for (std::size_t i = 0; i < out.digits_.size(); ++i) {
      const Digit sub = y.digits_[i] + borrow;
      if (x.digits_[i] >= sub) {
        out.digits_[i] = x.digits_[i] - sub;
        borrow = 0;
      } else {
        out.digits_[i] = x.digits_[i] + p - sub;
        borrow = 1;
      }
    }
    return out;
  }

  friend PadicInt operator-(const PadicInt& x) { return PadicInt(x.ctx_) - x; }

  // Schoolbook product truncated to K digits.
  friend PadicInt operator*(const PadicInt& x, const PadicInt& y) {
    require_same_context(x.ctx_, y.ctx_);
    const std::size_t k = x.digits_.size();
    std::vector<std::uint64_t> acc(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
      if (x.digits_[i] == 0) continue;
      const std::uint64_t xi = x.digits_[i];
      for (std::size_t j = 0; i + j < k; ++j) acc[i + j] += xi * y.digits_[j];
    }
    PadicInt out(x.ctx_);
    const std::uint64_t p = x.prime();
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const std::uint64_t v = acc[i] + carry;
      out.digits_[i] = static_cast<Digit>(v % p);
      carry = v / p;
    }
    return out;
  }

  PadicInt& operator+=(const PadicInt& y) { return *this = *this + y; }
  PadicInt& operator-=(const PadicInt& y) { return *this = *this - y; }
  PadicInt& operator*=(const PadicInt& y) { return *this = *this * y; }

  friend bool operator==(const PadicInt& x, const PadicInt& y) {
    return x.ctx_ == y.ctx_ && x.digits_ == y.digits_;
  }

  // Lexicographic on (context, digits from the top); only for ordered containers.
  friend bool operator<(const PadicInt& x, const PadicInt& y) {
    if (x.prime() != y.prime()) return x.prime() < y.prime();
    if (x.precision() != y.precision()) return x.precision() < y.precision();
    return std::lexicographical_compare(x.digits_.rbegin(), x.digits_.rend(), y.digits_.rbegin(),
                                        y.digits_.rend());
  }

 private:
  void mul_small_add(std::uint64_t factor, std::uint64_t addend) {
    const std::uint64_t p = prime();
    std::uint64_t carry = addend;
    for (auto& d : digits_) {
      const std::uint64_t v = static_cast<std::uint64_t>(d) * factor + carry;
      d = static_cast<Digit>(v % p);
      carry = v / p;
    }
  }

  PadicContext ctx_;
  std::vector<Digit> digits_;
};

// Parses the canonical form `p:K:d0,...` (which must match ctx) or a plain
// decimal integer reduced mod p^K.
inline PadicInt parse_padic(std::string_view text, const PadicContext& ctx);

// Parses the canonical form only; the context is taken from the text.
inline PadicInt parse_padic(std::string_view text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string_view::npos) {
    throw Error(errc::invalid_argument,
                "expected canonical form p:K:d0,... got '" + std::string(text) + "'");
  }
  auto parse_uint = [&](std::string_view s) -> std::uint64_t {
    if (s.empty() || s.size() > 18 ||
        !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw Error(errc::invalid_argument, "malformed number '" + std::string(s) + "' in '" +
                                              std::string(text) + "'");
    }
    return std::stoull(std::string(s));
  };
  const auto p = parse_uint(text.substr(0, c1));
  const auto k = parse_uint(text.substr(c1 + 1, c2 - c1 - 1));
  if (p > PadicContext::kMaxPrime || k > 1U << 20U) {
    throw Error(errc::invalid_argument, "context out of range in '" + std::string(text) + "'");
  }
  PadicContext ctx(static_cast<std::uint32_t>(p), static_cast<int>(k));
  std::vector<Digit> digits;
  std::string_view rest = text.substr(c2 + 1);
  while (true) {
    const auto comma = rest.find(',');
    const auto d = parse_uint(rest.substr(0, comma));
    if (d >= p) {
      throw Error(errc::invalid_argument,
                  "digit " + std::to_string(d) + " out of range in '" + std::string(text) + "'");
    }
    digits.push_back(static_cast<Digit>(d));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  if (digits.size() != k) {
    throw Error(errc::invalid_argument, "expected " + std::to_string(k) + " digits in '" +
                                            std::string(text) + "'");
  }
  return PadicInt::from_digits(ctx, digits);
}

inline PadicInt parse_padic(std::string_view text, const PadicContext& ctx) {
  if (text.find(':') == std::string_view::npos) return PadicInt::from_decimal(ctx, text);
  PadicInt value = parse_padic(text);
  require_same_context(value.context(), ctx);
  return value;
}

// ---------------------------------------------------------------------------
// Digitwise logical operations (no carries).

inline PadicInt xor_p(const PadicInt& x, const PadicInt& y) {
  require_same_context(x.context(), y.context());
  const Digit p = x.prime();
  std::vector<Digit> out(x.digits().begin(), x.digits().end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (out[i] + y.digits()[i]) % p;
  return PadicInt::from_digits(x.context(), out);
}

inline PadicInt and_p(const PadicInt& x, const PadicInt& y) {
  require_same_context(x.context(), y.context());
  const std::uint64_t p = x.prime();
  std::vector<Digit> out(x.digits().begin(), x.digits().end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<Digit>(static_cast<std::uint64_t>(out[i]) * y.digits()[i] % p);
  }
  return PadicInt::from_digits(x.context(), out);
}

// The identity element of and_p: every digit equal to 1.
inline PadicInt and_identity(const PadicContext& ctx) {
  std::vector<Digit> ones(static_cast<std::size_t>(ctx.precision()), 1);
  return PadicInt::from_digits(ctx, ones);
}

// ---------------------------------------------------------------------------
// Valuation and unit part.

// x = p^valuation * (unit_digit + p * unit_tail) at precision K. The zero
// residue has no finite valuation; unit_digit is then 0.
struct UnitDecomposition {
  std::optional<int> valuation;
  Digit unit_digit;
  PadicInt unit_tail;

  PadicInt recompose() const {
    const PadicContext& ctx = unit_tail.context();
    if (!valuation) return PadicInt::zero(ctx);
    PadicInt unit = PadicInt::from_integer(ctx, unit_digit) + unit_tail.shift_up(1);
    return unit.shift_up(*valuation);
  }
};

inline std::optional<int> valuation(const PadicInt& x) { return x.valuation(); }

inline UnitDecomposition unit_decompose(const PadicInt& x) {
  const auto v = x.valuation();
  if (!v) return {std::nullopt, 0, PadicInt::zero(x.context())};
  return {v, x.digit(*v), x.shift_down(*v + 1)};
}

// ---------------------------------------------------------------------------
// Powers, inverses, roots of unity.

inline PadicInt pow_nat(PadicInt base, std::uint64_t n) {
  PadicInt result = PadicInt::one(base.context());
  while (n != 0) {
    if (n & 1U) result *= base;
    n >>= 1U;
    if (n != 0) base *= base;
  }
  return result;
}

// Newton iteration y <- y(2 - xy), doubling the number of correct digits.
inline PadicInt invert_unit(const PadicInt& x) {
  if (!x.is_unit()) {
    throw Error(errc::domain, "invert_unit: " + x.to_string() + " is not a unit");
  }
  const PadicContext& ctx = x.context();
  const auto inv0 = modular::invmod(x.digit(0), ctx.prime());
  PadicInt y = PadicInt::from_integer(ctx, *inv0);
  const PadicInt two = PadicInt::from_integer(ctx, 2);
  for (int correct = 1; correct < ctx.precision(); correct *= 2) y = y * (two - x * y);
  return y;
}

inline void require_odd_prime(const PadicContext& ctx, const char* what) {
  if (!ctx.odd()) throw Error(errc::even_prime, std::string(what) + " requires an odd prime");
}

// base^e for base in 1 + pZ_p and a p-adic exponent e. 1 + pZ_p mod p^K has
// order p^(K-1), so only the first K-1 digits of e matter:
// base^e = prod_i (base^(p^i))^(e_i).
inline PadicInt pow_unit(const PadicInt& base, const PadicInt& e) {
  require_same_context(base.context(), e.context());
  require_odd_prime(base.context(), "pow_unit");
  if (base.digit(0) != 1) {
    throw Error(errc::domain, "pow_unit: base " + base.to_string() + " is not 1 mod p");
  }
  const std::uint32_t p = base.prime();
  PadicInt result = PadicInt::one(base.context());
  PadicInt step = base;
  for (int i = 0; i + 1 < base.precision(); ++i) {
    if (e.digit(i) != 0) result *= pow_nat(step, e.digit(i));
    step = pow_nat(step, p);
  }
  return result;
}

// Teichmuller lift: the (p-1)-th root of unity congruent to a mod p.
// Each application of A <- A^p fixes one more digit.
inline PadicInt teichmuller(const PadicContext& ctx, Digit a) {
  require_odd_prime(ctx, "teichmuller");
  if (a == 0 || a >= ctx.prime()) {
    throw Error(errc::invalid_argument, "teichmuller: digit " + std::to_string(a) +
                                            " not in [1, p-1]");
  }
  PadicInt lift = PadicInt::from_integer(ctx, a);
  for (int i = 1; i < ctx.precision(); ++i) lift = pow_nat(lift, ctx.prime());
  return lift;
}

// ---------------------------------------------------------------------------
// p-adic exponential and logarithm.
//
// Both series divide by integers n = p^v * m. Each term is computed with
// enough guard digits that dividing by p^v leaves K exact digits, and the
// loop stops at the first n from which every later term has valuation >= K.

inline PadicInt exp_p(const PadicInt& x) {
  const PadicContext& ctx = x.context();
  require_odd_prime(ctx, "exp_p");
  if (x.digit(0) != 0) {
    throw Error(errc::domain, "exp_p: argument " + x.to_string() + " must have valuation >= 1");
  }
  const std::uint64_t p = ctx.prime();
  const int k = ctx.precision();
  // v_p(x^n / n!) >= n - (n-1)/(p-1), which reaches K once n(p-2)+1 >= K(p-1).
  std::uint64_t last = 1;
  while (last * (p - 2) + 1 < static_cast<std::uint64_t>(k) * (p - 1)) ++last;
  unsigned guard = 0;
  for (std::uint64_t n = 2; n < last; ++n) guard += modular::valuation(n, p);

  const int wide = k + static_cast<int>(guard);
  const PadicInt xw = x.extend(wide);
  PadicInt sum = PadicInt::one(ctx);
  PadicInt power = PadicInt::one(xw.context());
  PadicInt fact_unit = PadicInt::one(ctx);  // p-free part of n!
  int fact_val = 0;
  for (std::uint64_t n = 1; n < last; ++n) {
    power *= xw;
    const unsigned v = modular::valuation(n, p);
    fact_val += static_cast<int>(v);
    std::uint64_t m = n;
    for (unsigned i = 0; i < v; ++i) m /= p;
    fact_unit *= PadicInt::from_integer(ctx, m);
    const PadicInt numer = power.shift_down(fact_val).truncate(k);
    sum += numer * invert_unit(fact_unit);
  }
  return sum;
}

inline PadicInt ln_p(const PadicInt& u) {
  const PadicContext& ctx = u.context();
  require_odd_prime(ctx, "ln_p");
  if (u.digit(0) != 1) {
    throw Error(errc::domain, "ln_p: argument " + u.to_string() + " must be 1 mod p");
  }
  const std::uint64_t p = ctx.prime();
  const int k = ctx.precision();
  // v_p(y^n / n) >= n - floor(log_p n), nondecreasing in n.
  std::uint64_t last = 1;
  while (last - modular::floor_log(last, p) < static_cast<std::uint64_t>(k)) ++last;
  const int guard = static_cast<int>(modular::floor_log(last, p));

  const int wide = k + guard;
  const PadicInt y = (u - PadicInt::one(ctx)).extend(wide);
  PadicInt sum = PadicInt::zero(ctx);
  PadicInt power = PadicInt::one(y.context());
  for (std::uint64_t n = 1; n < last; ++n) {
    power *= y;
    const unsigned v = modular::valuation(n, p);
    std::uint64_t m = n;
    for (unsigned i = 0; i < v; ++i) m /= p;
    const PadicInt term = power.shift_down(static_cast<int>(v)).truncate(k) *
                          invert_unit(PadicInt::from_integer(ctx, m));
    if (n % 2 == 1) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  return sum;
}

}  // namespace padicfhe
