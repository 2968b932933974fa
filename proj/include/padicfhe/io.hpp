#pragma once

// Serialization: JSON for keys, machines and search reports; a line-oriented
// text format for value tables and van der Put series:
//
//   p K kind          (kind = table | vdp)
//   p:K:d0,...        one residue per line, p^K lines

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "padicfhe/analysis.hpp"
#include "padicfhe/automaton.hpp"
#include "padicfhe/ciphers.hpp"
#include "padicfhe/error.hpp"
#include "padicfhe/lipschitz.hpp"
#include "padicfhe/padic.hpp"

namespace padicfhe::io {

using nlohmann::json;

namespace detail {

template <typename T>
T field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) {
    throw Error(errc::invalid_argument, std::string("missing field '") + name + "'");
  }
  try {
    return j.at(name).get<T>();
  } catch (const json::exception&) {
    throw Error(errc::invalid_argument, std::string("field '") + name + "' has the wrong type");
  }
}

inline PadicInt padic_field(const json& j, const char* name, const PadicContext& ctx) {
  return parse_padic(field<std::string>(j, name), ctx);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Operations G

inline json g_to_json(const GOperation& g) {
  json out;
  out["g"] = g.name();
  if (const auto* lin = std::get_if<LinearG>(&g.get())) {
    out["a"] = lin->a.to_string();
    out["b"] = lin->b.to_string();
  } else if (const auto* s = std::get_if<SeriesG>(&g.get())) {
    out["c"] = s->c.to_string();
    out["a"] = s->a.to_string();
    out["b"] = s->b.to_string();
    json terms = json::array();
    for (const auto& [ij, coeff] : s->terms) {
      terms.push_back({{"i", ij.first}, {"j", ij.second}, {"coefficient", coeff.to_string()}});
    }
    out["terms"] = terms;
  }
  return out;
}

inline GOperation g_from_json(const json& j, const PadicContext& ctx) {
  const auto name = detail::field<std::string>(j, "g");
  if (name == "G1") return G1{};
  if (name == "G2") return G2{};
  if (name == "G3") return G3{};
  if (name == "G4") return G4{};
  if (name == "GLIN") {
    return LinearG{detail::padic_field(j, "a", ctx), detail::padic_field(j, "b", ctx)};
  }
  if (name == "SERIES") {
    SeriesG s{detail::padic_field(j, "c", ctx), detail::padic_field(j, "a", ctx),
              detail::padic_field(j, "b", ctx), {}};
    for (const auto& term : detail::field<json>(j, "terms")) {
      s.terms.emplace(std::make_pair(detail::field<unsigned>(term, "i"),
                                     detail::field<unsigned>(term, "j")),
                      detail::padic_field(term, "coefficient", ctx));
    }
    return s;
  }
  throw Error(errc::invalid_argument, "unknown operation G '" + name + "'");
}

// ---------------------------------------------------------------------------
// Keys

inline json key_to_json(const CipherKey& key) {
  const auto& ctx = key.context();
  json out;
  out["family"] = std::string(family_name(key.family()));
  out["p"] = ctx.prime();
  out["precision"] = ctx.precision();
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, AdditiveKey>) {
          out["A"] = k.A.to_string();
        } else if constexpr (std::is_same_v<T, MultiplicativeKey>) {
          out["A"] = k.A.to_string();
          out["s"] = k.s;
          out["a"] = k.a.to_string();
        } else if constexpr (std::is_same_v<T, XorKey>) {
          out["rows"] = k.rows;
        } else if constexpr (std::is_same_v<T, AndKey>) {
          out["exponents"] = k.exponents;
        } else {
          out["A"] = k.A.to_string();
          out["d"] = k.d;
          out.update(g_to_json(k.g));
        }
      },
      key.get());
  return out;
}

inline CipherKey key_from_json(const json& j) {
  const auto family = parse_family(detail::field<std::string>(j, "family"));
  const PadicContext ctx(detail::field<std::uint32_t>(j, "p"), detail::field<int>(j, "precision"));
  switch (family) {
    case Family::additive:
      return CipherKey::additive(detail::padic_field(j, "A", ctx));
    case Family::multiplicative:
      return CipherKey::multiplicative(detail::padic_field(j, "A", ctx),
                                       detail::field<std::uint32_t>(j, "s"),
                                       detail::padic_field(j, "a", ctx));
    case Family::xor_digits:
      return CipherKey::xor_digits(ctx, detail::field<std::vector<std::vector<Digit>>>(j, "rows"));
    case Family::and_digits:
      return CipherKey::and_digits(ctx, detail::field<std::vector<std::uint32_t>>(j, "exponents"));
    case Family::fhe: {
      CipherKey key = CipherKey::fhe(detail::padic_field(j, "A", ctx), g_from_json(j, ctx));
      if (j.contains("d") && detail::field<std::uint64_t>(j, "d") != std::get<FheKey>(key.get()).d) {
        throw Error(errc::invalid_argument, "fhe key: stored d does not match the operation");
      }
      return key;
    }
  }
  throw Error(errc::invalid_argument, "unknown family");
}

// ---------------------------------------------------------------------------
// Machines

inline json machine_to_json(const MealyMachine& m) {
  return {{"p", m.alphabet()},
          {"states", m.states()},
          {"initial", m.initial()},
          {"transition", std::vector<StateId>(m.transition_table().begin(), m.transition_table().end())},
          {"output", std::vector<Digit>(m.output_table().begin(), m.output_table().end())}};
}

inline MealyMachine machine_from_json(const json& j) {
  return MealyMachine(detail::field<std::uint32_t>(j, "p"), detail::field<std::size_t>(j, "states"),
                      detail::field<StateId>(j, "initial"),
                      detail::field<std::vector<StateId>>(j, "transition"),
                      detail::field<std::vector<Digit>>(j, "output"));
}

// ---------------------------------------------------------------------------
// Reports

inline json mode_to_json(const SearchMode& mode) {
  if (mode.kind == SearchMode::Kind::exhaustive) return {{"kind", "exhaustive"}, {"k", mode.k}};
  return {{"kind", "randomized"}, {"seed", mode.seed}, {"trials", mode.trials}};
}

inline json report_to_json(const SearchReport& r) {
  json out{{"verdict", std::string(verdict_name(r.verdict))},
           {"trials", r.trials},
           {"mode", mode_to_json(r.mode)}};
  if (r.x) out["x"] = r.x->to_string();
  if (r.y) out["y"] = r.y->to_string();
  if (!r.note.empty()) out["note"] = r.note;
  return out;
}

// ---------------------------------------------------------------------------
// Table text format

using TableFile = std::variant<ValueTable, VdpSeries>;

inline void write_residues(std::ostream& out, const PadicContext& ctx, std::string_view kind,
                           std::span<const std::uint64_t> values) {
  out << ctx.prime() << ' ' << ctx.precision() << ' ' << kind << '\n';
  for (auto v : values) out << PadicInt::from_integer(ctx, v).to_string() << '\n';
}

inline void write_table(std::ostream& out, const ValueTable& t) {
  write_residues(out, t.context(), "table", t.values());
}

inline void write_table(std::ostream& out, const VdpSeries& s) {
  write_residues(out, s.context(), "vdp", s.coefficients());
}

inline TableFile read_table(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw Error(errc::parse, "table file: missing header");
  std::istringstream hs(header);
  std::uint32_t p = 0;
  int k = 0;
  std::string kind, extra;
  if (!(hs >> p >> k >> kind) || (hs >> extra)) {
    throw Error(errc::parse, "table file: header must be 'p K kind'");
  }
  if (kind != "table" && kind != "vdp") {
    throw Error(errc::parse, "table file: unknown kind '" + kind + "'");
  }
  const PadicContext ctx(p, k);
  std::vector<std::uint64_t> values;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      const auto v = parse_padic(line, ctx).to_uint64();
      values.push_back(*v);
    } catch (const Error& e) {
      throw Error(errc::parse, "table file line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (kind == "table") return ValueTable(ctx, std::move(values));
  return VdpSeries(ctx, std::move(values));
}

}  // namespace padicfhe::io
