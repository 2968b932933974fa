#pragma once

// Mealy digit transducers over the alphabet {0, ..., p-1}. Reading the input
// word least-significant digit first, an initial automaton computes a
// 1-Lipschitz map on Z_p; the initial state plays the role of the key.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "padicfhe/error.hpp"
#include "padicfhe/lipschitz.hpp"
#include "padicfhe/padic.hpp"

namespace padicfhe {

using StateId = std::size_t;

class MealyMachine {
 public:
  // Tables are row-major by state: transition[s * p + t] = S(t, s) and
  // output[s * p + t] = L(t, s).
  MealyMachine(std::uint32_t p, std::size_t states, StateId initial,
               std::vector<StateId> transition, std::vector<Digit> output)
      : p_(p),
        states_(states),
        initial_(initial),
        transition_(std::move(transition)),
        output_(std::move(output)) {
    if (p < 2) throw Error(errc::invalid_argument, "MealyMachine: alphabet size must be >= 2");
    if (states == 0) throw Error(errc::invalid_argument, "MealyMachine: no states");
    if (initial >= states) throw Error(errc::invalid_argument, "MealyMachine: bad initial state");
    const std::size_t cells = states * p;
    if (transition_.size() != cells || output_.size() != cells) {
      throw Error(errc::invalid_argument, "MealyMachine: tables must have states * p entries");
    }
    for (std::size_t i = 0; i < cells; ++i) {
      if (transition_[i] >= states) {
        throw Error(errc::invalid_argument, "MealyMachine: transition to unknown state");
      }
      if (output_[i] >= p) throw Error(errc::invalid_argument, "MealyMachine: output digit >= p");
    }
  }

  std::uint32_t alphabet() const noexcept { return p_; }
  std::size_t states() const noexcept { return states_; }
  StateId initial() const noexcept { return initial_; }
  std::span<const StateId> transition_table() const noexcept { return transition_; }
  std::span<const Digit> output_table() const noexcept { return output_; }

  StateId next(Digit t, StateId s) const { return transition_[s * p_ + t]; }
  Digit emit(Digit t, StateId s) const { return output_[s * p_ + t]; }

  MealyMachine with_initial(StateId s) const {
    return MealyMachine(p_, states_, s, transition_, output_);
  }

  friend bool operator==(const MealyMachine&, const MealyMachine&) = default;

 private:
  std::uint32_t p_;
  std::size_t states_;
  StateId initial_;
  std::vector<StateId> transition_;
  std::vector<Digit> output_;
};

// Single-owner cursor over a machine. One output digit per input digit.
class TransducerRun {
 public:
  explicit TransducerRun(const MealyMachine& m) : machine_(&m), state_(m.initial()) {}

  Digit step(Digit t) {
    if (t >= machine_->alphabet()) {
      throw Error(errc::invalid_argument, "input digit " + std::to_string(t) + " out of range");
    }
    const Digit out = machine_->emit(t, state_);
    state_ = machine_->next(t, state_);
    ++consumed_;
    return out;
  }

  StateId state() const noexcept { return state_; }
  std::size_t consumed() const noexcept { return consumed_; }

 private:
  const MealyMachine* machine_;
  StateId state_;
  std::size_t consumed_ = 0;
};

inline std::vector<Digit> run(const MealyMachine& m, std::span<const Digit> input) {
  TransducerRun cursor(m);
  std::vector<Digit> out;
  out.reserve(input.size());
  for (Digit t : input) out.push_back(cursor.step(t));
  return out;
}

// States are the prefix classes (k, a), a < p^k, for k < K, numbered level
// by level, plus one absorbing state reached after K digits.
inline MealyMachine unroll_from_function(const ValueTable& t) {
  const CoordRep coords = coord_from_table(t);  // throws for non-1-Lipschitz input
  const auto& ctx = t.context();
  const std::uint32_t p = ctx.prime();
  const int k_max = ctx.precision();

  std::vector<std::size_t> level_offset(static_cast<std::size_t>(k_max) + 1, 0);
  std::uint64_t pk = 1;
  for (int k = 0; k < k_max; ++k) {
    level_offset[k + 1] = level_offset[k] + pk;
    pk *= p;
  }
  const std::size_t sink = level_offset[k_max];
  const std::size_t states = sink + 1;

  std::vector<StateId> transition(states * p);
  std::vector<Digit> output(states * p, 0);
  pk = 1;
  for (int k = 0; k < k_max; ++k) {
    const auto phi = coords.phi(k);
    for (std::uint64_t a = 0; a < pk; ++a) {
      const StateId s = level_offset[k] + a;
      for (Digit d = 0; d < p; ++d) {
        const std::uint64_t prefix = a + d * pk;
        output[s * p + d] = phi[prefix];
        transition[s * p + d] = k + 1 < k_max ? level_offset[k + 1] + prefix : sink;
      }
    }
    pk *= p;
  }
  for (Digit d = 0; d < p; ++d) transition[sink * p + d] = sink;
  return MealyMachine(p, states, 0, std::move(transition), std::move(output));
}

// Table of the automaton function on all p^K inputs.
inline ValueTable function_of_automaton(const MealyMachine& m, int precision) {
  const PadicContext ctx(m.alphabet(), precision);
  return ValueTable::from_function(ctx, [&](const PadicInt& x) {
    return PadicInt::from_digits(ctx, run(m, x.digits()));
  });
}

// Every induced length-n word map, n = 1..K, is a bijection. Enumerates the
// words directly rather than going through the value table.
inline bool check_induced_bijections(const MealyMachine& m, int precision) {
  const std::uint32_t p = m.alphabet();
  const auto total = modular::checked_pow(p, static_cast<unsigned>(precision), kMaxTableSize);
  if (!total) throw Error(errc::invalid_argument, "check_induced_bijections: p^K too large");
  std::vector<Digit> word;
  std::vector<char> seen;
  std::uint64_t count = 1;
  for (int n = 1; n <= precision; ++n) {
    count *= p;
    seen.assign(count, 0);
    word.assign(static_cast<std::size_t>(n), 0);
    for (std::uint64_t w = 0; w < count; ++w) {
      std::uint64_t rest = w;
      for (auto& d : word) {
        d = static_cast<Digit>(rest % p);
        rest /= p;
      }
      const auto image = run(m, word);
      std::uint64_t index = 0;
      for (auto it = image.rbegin(); it != image.rend(); ++it) index = index * p + *it;
      if (seen[index]) return false;
      seen[index] = 1;
    }
  }
  return true;
}

// With permuting_outputs every state's output row is a permutation of the
// alphabet, which makes every induced length-n map bijective.
template <typename Rng>
MealyMachine random_machine(std::uint32_t p, std::size_t states, Rng& rng,
                            bool permuting_outputs = false) {
  std::uniform_int_distribution<StateId> state(0, states - 1);
  std::uniform_int_distribution<Digit> digit(0, p - 1);
  std::vector<StateId> transition(states * p);
  std::vector<Digit> output(states * p);
  for (auto& s : transition) s = state(rng);
  if (permuting_outputs) {
    for (std::size_t s = 0; s < states; ++s) {
      const auto row = output.begin() + static_cast<std::ptrdiff_t>(s * p);
      std::iota(row, row + p, Digit{0});
      std::shuffle(row, row + p, rng);
    }
  } else {
    for (auto& d : output) d = digit(rng);
  }
  return MealyMachine(p, states, state(rng), std::move(transition), std::move(output));
}

}  // namespace padicfhe
