#pragma once

// Homomorphism testing and counterexample search.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "padicfhe/ciphers.hpp"
#include "padicfhe/error.hpp"
#include "padicfhe/lipschitz.hpp"
#include "padicfhe/padic.hpp"

namespace padicfhe {

class OpSymbol {
 public:
  enum class Kind { add, mul, xor_digits, and_digits, g };

  static OpSymbol add() { return OpSymbol(Kind::add); }
  static OpSymbol mul() { return OpSymbol(Kind::mul); }
  static OpSymbol xor_digits() { return OpSymbol(Kind::xor_digits); }
  static OpSymbol and_digits() { return OpSymbol(Kind::and_digits); }
  static OpSymbol g(GOperation op) { return OpSymbol(std::move(op)); }

  Kind kind() const noexcept { return kind_; }
  const GOperation* g_operation() const noexcept { return g_ ? &*g_ : nullptr; }

  std::string name() const {
    switch (kind_) {
      case Kind::add: return "ADD";
      case Kind::mul: return "MUL";
      case Kind::xor_digits: return "XOR";
      case Kind::and_digits: return "AND";
      case Kind::g: return g_->name();
    }
    return "?";
  }

 private:
  explicit OpSymbol(Kind kind) : kind_(kind) {}
  explicit OpSymbol(GOperation op) : kind_(Kind::g), g_(std::move(op)) {}

  Kind kind_;
  std::optional<GOperation> g_;
};

// ADD, MUL, XOR, AND, G1..G4.
inline OpSymbol parse_op_symbol(std::string_view name) {
  if (name == "ADD") return OpSymbol::add();
  if (name == "MUL") return OpSymbol::mul();
  if (name == "XOR") return OpSymbol::xor_digits();
  if (name == "AND") return OpSymbol::and_digits();
  if (name == "G1") return OpSymbol::g(G1{});
  if (name == "G2") return OpSymbol::g(G2{});
  if (name == "G3") return OpSymbol::g(G3{});
  if (name == "G4") return OpSymbol::g(G4{});
  throw Error(errc::invalid_argument, "unknown operation '" + std::string(name) + "'");
}

inline PadicInt apply_op(const OpSymbol& op, const PadicInt& x, const PadicInt& y) {
  switch (op.kind()) {
    case OpSymbol::Kind::add: return x + y;
    case OpSymbol::Kind::mul: return x * y;
    case OpSymbol::Kind::xor_digits: return xor_p(x, y);
    case OpSymbol::Kind::and_digits: return and_p(x, y);
    case OpSymbol::Kind::g: return g_eval(*op.g_operation(), x, y);
  }
  throw Error(errc::invalid_argument, "unknown operation");
}

// The cipher family whose keys are homomorphic for op, if any.
inline std::optional<Family> family_for(const OpSymbol& op) {
  switch (op.kind()) {
    case OpSymbol::Kind::add: return Family::additive;
    case OpSymbol::Kind::mul: return Family::multiplicative;
    case OpSymbol::Kind::xor_digits: return Family::xor_digits;
    case OpSymbol::Kind::and_digits: return Family::and_digits;
    case OpSymbol::Kind::g: return std::nullopt;
  }
  return std::nullopt;
}

struct SearchMode {
  enum class Kind { exhaustive, randomized };
  Kind kind = Kind::exhaustive;
  int k = 1;                  // exhaustive: all pairs mod p^k
  std::uint64_t seed = 0;     // randomized
  std::uint64_t trials = 0;   // randomized

  static SearchMode exhaustive(int k) { return {Kind::exhaustive, k, 0, 0}; }
  static SearchMode randomized(std::uint64_t seed, std::uint64_t trials) {
    return {Kind::randomized, 0, seed, trials};
  }
};

struct SearchReport {
  enum class Verdict { pass, counterexample, exhausted };
  Verdict verdict = Verdict::pass;
  std::optional<PadicInt> x;
  std::optional<PadicInt> y;
  std::uint64_t trials = 0;
  SearchMode mode;
  std::string note;

  bool found() const noexcept { return verdict == Verdict::counterexample; }
};

inline std::string_view verdict_name(SearchReport::Verdict v) {
  switch (v) {
    case SearchReport::Verdict::pass: return "pass";
    case SearchReport::Verdict::counterexample: return "counterexample";
    case SearchReport::Verdict::exhausted: return "exhausted";
  }
  return "?";
}

using UnaryMap = std::function<PadicInt(const PadicInt&)>;

// f(g(x, y)) == g(f(x), f(y)), compared mod p^k.
inline bool commutes_at(const UnaryMap& f, const OpSymbol& op, const PadicInt& x,
                        const PadicInt& y, int k) {
  const PadicInt lhs = f(apply_op(op, x, y));
  const PadicInt rhs = apply_op(op, f(x), f(y));
  return lhs.truncate(k) == rhs.truncate(k);
}

// Exhaustive mode decides homomorphism of the map reduced mod p^k (all maps
// and operations involved are 1-Lipschitz). Randomized mode samples pairs at
// full precision.
inline SearchReport homomorphism_test(const PadicContext& ctx, const UnaryMap& f,
                                      const OpSymbol& op, const SearchMode& mode) {
  SearchReport report;
  report.mode = mode;
  if (mode.kind == SearchMode::Kind::exhaustive) {
    if (mode.k < 1 || mode.k > ctx.precision()) {
      throw Error(errc::invalid_argument, "exhaustive level must be in [1, K]");
    }
    const auto count = modular::checked_pow(ctx.prime(), static_cast<unsigned>(mode.k),
                                            kMaxTableSize);
    if (!count) throw Error(errc::invalid_argument, "exhaustive level too large");
    std::vector<PadicInt> inputs;
    std::vector<PadicInt> images;
    inputs.reserve(*count);
    images.reserve(*count);
    for (std::uint64_t v = 0; v < *count; ++v) {
      inputs.push_back(PadicInt::from_integer(ctx, v));
      images.push_back(f(inputs.back()));
    }
    for (std::uint64_t i = 0; i < *count; ++i) {
      for (std::uint64_t j = 0; j < *count; ++j) {
        ++report.trials;
        const PadicInt lhs = f(apply_op(op, inputs[i], inputs[j]));
        const PadicInt rhs = apply_op(op, images[i], images[j]);
        if (!(lhs.truncate(mode.k) == rhs.truncate(mode.k))) {
          report.verdict = SearchReport::Verdict::counterexample;
          report.x = inputs[i];
          report.y = inputs[j];
          return report;
        }
      }
    }
    return report;
  }
  std::mt19937_64 rng(mode.seed);
  for (std::uint64_t t = 0; t < mode.trials; ++t) {
    ++report.trials;
    const PadicInt x = detail::random_residue(ctx, rng);
    const PadicInt y = detail::random_residue(ctx, rng);
    if (!commutes_at(f, op, x, y, ctx.precision())) {
      report.verdict = SearchReport::Verdict::counterexample;
      report.x = x;
      report.y = y;
      return report;
    }
  }
  return report;
}

inline SearchReport homomorphism_test(const ValueTable& t, const OpSymbol& op,
                                      const SearchMode& mode) {
  return homomorphism_test(
      t.context(), [&](const PadicInt& x) { return t.apply(x); }, op, mode);
}

inline SearchReport homomorphism_test(const CipherKey& key, const OpSymbol& op,
                                      const SearchMode& mode) {
  return homomorphism_test(
      key.context(), [&](const PadicInt& x) { return encrypt(key, x); }, op, mode);
}

// Re-evaluates a reported counterexample.
inline bool replay(const SearchReport& report, const UnaryMap& f, const OpSymbol& op) {
  if (!report.found()) return false;
  const int k = report.mode.kind == SearchMode::Kind::exhaustive ? report.mode.k
                                                                  : report.x->precision();
  return !commutes_at(f, op, *report.x, *report.y, k);
}

inline bool replay(const SearchReport& report, const CipherKey& key, const OpSymbol& op) {
  return replay(report, [&](const PadicInt& x) { return encrypt(key, x); }, op);
}

// Exhaustive over pairs mod p^k for k = 1..exhaustive_k, then random pairs at
// full precision. Verdict is counterexample or exhausted.
inline SearchReport find_counterexample(const CipherKey& key, const OpSymbol& op,
                                        int exhaustive_k, std::uint64_t seed,
                                        std::uint64_t random_trials) {
  std::uint64_t spent = 0;
  SearchReport report;
  for (int k = 1; k <= std::min(exhaustive_k, key.context().precision()); ++k) {
    report = homomorphism_test(key, op, SearchMode::exhaustive(k));
    spent += report.trials;
    if (report.found()) {
      report.trials = spent;
      return report;
    }
  }
  if (random_trials > 0) {
    report = homomorphism_test(key, op, SearchMode::randomized(seed, random_trials));
    spent += report.trials;
    if (report.found()) {
      report.trials = spent;
      return report;
    }
  }
  report.verdict = SearchReport::Verdict::exhausted;
  report.trials = spent;
  return report;
}

struct ScanEntry {
  CipherKey key;
  SearchReport report;
};

// For each of n_keys sampled non-identity keys homomorphic for first, looks
// for a pair on which the key fails to commute with second.
template <typename Rng>
std::vector<ScanEntry> intersection_scan(const PadicContext& ctx, const OpSymbol& first,
                                         const OpSymbol& second, std::size_t n_keys, Rng& rng,
                                         int exhaustive_k, std::uint64_t random_trials = 0) {
  const auto family = family_for(first);
  if (!family) {
    throw Error(errc::invalid_argument, "intersection_scan: " + first.name() +
                                            " has no cipher family");
  }
  constexpr int kMaxDraws = 1000;
  std::vector<ScanEntry> out;
  out.reserve(n_keys);
  for (std::size_t i = 0; i < n_keys; ++i) {
    std::optional<CipherKey> key;
    for (int draw = 0; draw < kMaxDraws && !key; ++draw) {
      CipherKey candidate = keygen(ctx, *family, rng);
      if (!is_identity_key(candidate)) key = std::move(candidate);
    }
    if (!key) {
      throw Error(errc::domain, "intersection_scan: every sampled " +
                                    std::string(family_name(*family)) +
                                    " key is the identity at p = " + std::to_string(ctx.prime()));
    }
    const std::uint64_t seed = rng();
    SearchReport report = find_counterexample(*key, second, exhaustive_k, seed, random_trials);
    out.push_back({std::move(*key), std::move(report)});
  }
  return out;
}

// Checks the van der Put coefficients of a multiplicative encryption table:
//   b_{t0 p^k}                          = A^k t0^s         (mod p)
//   b_{t0 p^k + t p^(k+1) + h p^(k+r)}  = a A^k t0^(s-1) h (mod p), r >= 1
// On failure x is the coefficient index and y the observed residue.
inline SearchReport vdp_coefficient_probe(const MultiplicativeKey& key) {
  const auto& ctx = key.A.context();
  require_odd_prime(ctx, "vdp_coefficient_probe");
  if (!modular::checked_pow(ctx.prime(), static_cast<unsigned>(ctx.precision()),
                            std::uint64_t{1} << 16U)) {
    throw Error(errc::invalid_argument, "vdp_coefficient_probe: p^K exceeds 2^16");
  }
  const auto table = ValueTable::from_function(
      ctx, [&](const PadicInt& x) { return multiplicative_encrypt(key, x); });
  const auto series = vdp_interpolate(table);
  const std::uint64_t p = ctx.prime();
  const std::uint64_t big_a = key.A.digit(0);
  const std::uint64_t small_a = key.a.digit(0);
  const int k_max = ctx.precision();
  const auto pk = detail::prime_powers(ctx);

  SearchReport report;
  report.mode = SearchMode::exhaustive(k_max);
  auto fail = [&](std::uint64_t m, std::uint64_t observed, const char* family) {
    report.verdict = SearchReport::Verdict::counterexample;
    report.x = PadicInt::from_integer(ctx, m);
    report.y = PadicInt::from_integer(ctx, observed);
    report.note = family;
    return report;
  };

  for (int k = 0; k < k_max; ++k) {
    const auto ak = modular::powmod(big_a, static_cast<std::uint64_t>(k), p);
    for (std::uint64_t t0 = 1; t0 < p; ++t0) {
      ++report.trials;
      const std::uint64_t m = t0 * pk[k];
      const auto expected = ak * modular::powmod(t0, key.s, p) % p;
      const auto observed = series.normalized(m) % p;
      if (observed != expected) return fail(m, observed, "leading");

      const auto base = small_a * ak % p * modular::powmod(t0, key.s - 1, p) % p;
      for (int r = 1; k + r < k_max; ++r) {
        for (std::uint64_t t = 0; t < pk[r - 1]; ++t) {
          for (std::uint64_t h = 1; h < p; ++h) {
            ++report.trials;
            const std::uint64_t index = m + t * pk[k + 1] + h * pk[k + r];
            const auto want = base * h % p;
            const auto got = series.normalized(index) % p;
            if (got != want) return fail(index, got, "increment");
          }
        }
      }
    }
  }
  return report;
}

}  // namespace padicfhe
