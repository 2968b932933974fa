#pragma once

// Command-line front end. run_command is the whole tool; main() only adapts
// argv and the standard streams.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "padicfhe/analysis.hpp"
#include "padicfhe/ciphers.hpp"
#include "padicfhe/error.hpp"
#include "padicfhe/formula.hpp"
#include "padicfhe/io.hpp"
#include "padicfhe/lipschitz.hpp"
#include "padicfhe/padic.hpp"

namespace padicfhe::cli {

enum ExitCode : int {
  kOk = 0,
  kBadFlags = 2,
  kMalformedInput = 3,
  kIncompatible = 4,
  kDomain = 5,
  kIo = 6,
  kInternal = 70,
};

inline int exit_code_for(errc code) {
  switch (code) {
    case errc::invalid_argument: return kBadFlags;
    case errc::parse: return kMalformedInput;
    case errc::incompatible: return kIncompatible;
    case errc::context_mismatch:
    case errc::domain:
    case errc::even_prime:
    case errc::not_lipschitz: return kDomain;
    case errc::io: return kIo;
  }
  return kInternal;
}

namespace detail {

using nlohmann::json;

struct Options {
  std::uint32_t p = 5;
  int precision = 16;
  std::uint64_t seed = 0;
  bool json_output = false;

  std::string family;
  std::string g;
  std::string key_file;
  std::string out_file;
  std::string table_file;
  std::string formula;
  std::vector<std::string> env;
  std::vector<std::string> pairs;
  std::string value;
  std::string op;
  int exhaustive_k = 0;
  std::size_t keys = 100;
  std::uint64_t random_trials = 0;
  std::uint64_t trials = 1;
  bool measure = false;
  bool lipschitz = false;
  bool paper_example = false;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(errc::io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes via a temporary file so a failure never leaves a partial file.
inline void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(errc::io, "cannot write '" + path + "'");
    out << contents;
    if (!out.flush()) {
      std::remove(tmp.c_str());
      throw Error(errc::io, "cannot write '" + path + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw Error(errc::io, "cannot write '" + path + "': " + ec.message());
  }
}

inline CipherKey load_key(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return io::key_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw Error(errc::parse, "key file '" + path + "': " + e.what());
  } catch (const Error& e) {
    throw Error(errc::parse, "key file '" + path + "': " + e.what());
  }
}

inline io::TableFile load_table(const std::string& path) {
  std::istringstream in(read_file(path));
  try {
    return io::read_table(in);
  } catch (const Error& e) {
    throw Error(errc::parse, "table file '" + path + "': " + e.what());
  }
}

// Values typed on the command line are input, so text errors map to "parse".
inline PadicInt parse_value(const std::string& text, const PadicContext& ctx) {
  try {
    return parse_padic(text, ctx);
  } catch (const Error& e) {
    if (e.code() != errc::invalid_argument) throw;
    throw Error(errc::parse, e.what());
  }
}

inline Env parse_env(const std::vector<std::string>& entries, const PadicContext& ctx) {
  Env env;
  for (const auto& entry : entries) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(errc::invalid_argument, "--env entries must be name=value, got '" + entry + "'");
    }
    env.insert_or_assign(entry.substr(0, eq), parse_value(entry.substr(eq + 1), ctx));
  }
  return env;
}

inline std::optional<GOperation> parse_g(const std::string& name, const PadicContext& ctx,
                                         std::mt19937_64& rng) {
  if (name.empty()) return std::nullopt;
  if (name == "GLIN") {
    return GOperation(LinearG{padicfhe::detail::random_residue(ctx, rng),
                              padicfhe::detail::random_residue(ctx, rng)});
  }
  const auto op = parse_op_symbol(name);
  if (op.kind() != OpSymbol::Kind::g) {
    throw Error(errc::invalid_argument, "--g must be one of G1, G2, G3, G4, GLIN");
  }
  return *op.g_operation();
}

inline void print_fields(std::ostream& out, const json& fields) {
  for (const auto& [name, value] : fields.items()) {
    out << name << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
  }
}

inline int cmd_keygen(const Options& o, std::ostream& out, std::ostream& err) {
  const PadicContext ctx(o.p, o.precision);
  std::mt19937_64 rng(o.seed);
  const Family family = parse_family(o.family);
  const auto g = parse_g(o.g, ctx, rng);
  if (family == Family::fhe && !g) throw Error(errc::invalid_argument, "--family fhe needs --g");
  const CipherKey key = keygen(ctx, family, rng, g);
  if (family == Family::fhe && !g->is_linear()) {
    const auto count = admissible_multipliers(ctx, *g).values.size();
    err << "warning: only " << count << " multipliers satisfy A^d = 1 at p = " << ctx.prime()
        << "; use a large prime for a meaningful key space\n";
  }
  const std::string text = io::key_to_json(key).dump(2) + "\n";
  if (o.out_file.empty()) {
    out << text;
  } else {
    write_file_atomic(o.out_file, text);
    if (o.json_output) {
      out << json{{"written", o.out_file}}.dump() << '\n';
    } else {
      out << "wrote " << o.out_file << '\n';
    }
  }
  return kOk;
}

inline int cmd_crypt(const Options& o, std::ostream& out, bool forward) {
  const CipherKey key = load_key(o.key_file);
  const PadicInt input = parse_value(o.value, key.context());
  const PadicInt result = forward ? encrypt(key, input) : decrypt(key, input);
  if (o.json_output) {
    out << json{{forward ? "ciphertext" : "plaintext", result.to_string()}}.dump() << '\n';
  } else {
    out << result.to_string() << '\n';
  }
  return kOk;
}

inline json demo_json(const DemoReport& r) {
  json enc = json::object();
  for (const auto& [name, value] : r.encrypted_env) enc[name] = value.to_string();
  return {{"plain", r.plain.to_string()},
          {"encrypted_env", enc},
          {"encrypted_path", r.cipher_result.to_string()},
          {"decrypted", r.decrypted.to_string()},
          {"match", r.match}};
}

inline int cmd_eval(const Options& o, std::ostream& out) {
  const FormulaAst ast = parse_formula(o.formula);
  if (o.key_file.empty()) {
    const PadicContext ctx(o.p, o.precision);
    const PadicInt value = eval_formula(ast, ctx, parse_env(o.env, ctx));
    json result{{"formula", print_formula(ast)}, {"value", value.to_string()}};
    if (o.json_output) {
      out << result.dump() << '\n';
    } else {
      print_fields(out, result);
    }
    return kOk;
  }
  const CipherKey key = load_key(o.key_file);
  const DemoReport report = encrypted_eval_demo(ast, parse_env(o.env, key.context()), key);
  json result = demo_json(report);
  result["formula"] = print_formula(ast);
  if (o.json_output) {
    out << result.dump() << '\n';
  } else {
    out << "formula: " << print_formula(ast) << '\n';
    out << "plain: " << report.plain.to_string() << '\n';
    out << "encrypted_path: " << report.cipher_result.to_string() << '\n';
    out << "decrypted: " << report.decrypted.to_string() << '\n';
    out << "match: " << (report.match ? "true" : "false") << '\n';
  }
  return report.match ? kOk : kInternal;
}

inline int default_exhaustive_k(const PadicContext& ctx) {
  int k = 1;
  while (k < ctx.precision() &&
         modular::checked_pow(ctx.prime(), static_cast<unsigned>(2 * (k + 1)), kMaxTableSize)) {
    ++k;
  }
  return k;
}

inline int cmd_check(const Options& o, std::ostream& out) {
  if (o.table_file.empty() == o.key_file.empty()) {
    throw Error(errc::invalid_argument, "check needs exactly one of --table or --key");
  }
  const bool want_lipschitz = o.lipschitz || !o.measure;
  const bool want_measure = o.measure || !o.lipschitz;
  json result;
  std::optional<ValueTable> table;
  std::optional<CipherKey> key;
  if (!o.table_file.empty()) {
    auto file = load_table(o.table_file);
    if (auto* t = std::get_if<ValueTable>(&file)) {
      result["kind"] = "table";
      table = std::move(*t);
    } else {
      const auto& s = std::get<VdpSeries>(file);
      result["kind"] = "vdp";
      if (want_lipschitz) result["vdp_divisibility"] = check_one_lipschitz(s);
      table = table_from_vdp(s);
    }
  } else {
    key = load_key(o.key_file);
    result["kind"] = "key";
    result["family"] = std::string(family_name(key->family()));
    table = encryption_table(*key);
  }
  const auto& ctx = table->context();
  result["p"] = ctx.prime();
  result["precision"] = ctx.precision();
  const bool lipschitz = check_one_lipschitz(*table);
  if (want_lipschitz) result["one_lipschitz"] = lipschitz;
  if (want_measure) {
    if (lipschitz) {
      const bool brute = check_measure_bruteforce(*table);
      const bool vdp = check_measure_vdp(vdp_interpolate(*table));
      const bool coord = check_measure_coord(coord_from_table(*table));
      result["measure_bruteforce"] = brute;
      result["measure_vdp"] = vdp;
      result["measure_coord"] = coord;
      result["preserving"] = brute && vdp && coord;
    } else {
      result["preserving"] = false;
      result["note"] = "measure criteria apply to 1-Lipschitz maps only";
    }
  }
  if (!o.op.empty()) {
    const OpSymbol op = parse_op_symbol(o.op);
    const int k = o.exhaustive_k > 0 ? o.exhaustive_k : default_exhaustive_k(ctx);
    const auto report = key ? homomorphism_test(*key, op, SearchMode::exhaustive(k))
                            : homomorphism_test(*table, op, SearchMode::exhaustive(k));
    result["homomorphism"] = io::report_to_json(report);
    result["homomorphism"]["op"] = op.name();
  }
  if (o.json_output) {
    out << result.dump() << '\n';
  } else {
    print_fields(out, result);
  }
  return kOk;
}

inline std::vector<std::pair<OpSymbol, OpSymbol>> parse_pairs(const std::vector<std::string>& pairs) {
  std::vector<std::pair<OpSymbol, OpSymbol>> out;
  if (pairs.empty()) {
    const char* all[][2] = {{"ADD", "MUL"}, {"ADD", "XOR"}, {"ADD", "AND"},
                            {"MUL", "XOR"}, {"MUL", "AND"}, {"XOR", "AND"}};
    for (const auto& [a, b] : all) out.emplace_back(parse_op_symbol(a), parse_op_symbol(b));
    return out;
  }
  for (const auto& pair : pairs) {
    const auto comma = pair.find(',');
    if (comma == std::string::npos) {
      throw Error(errc::invalid_argument, "--pair expects FIRST,SECOND, got '" + pair + "'");
    }
    out.emplace_back(parse_op_symbol(pair.substr(0, comma)), parse_op_symbol(pair.substr(comma + 1)));
  }
  return out;
}

inline int cmd_search(const Options& o, std::ostream& out) {
  const PadicContext ctx(o.p, o.precision);
  std::mt19937_64 rng(o.seed);
  const int k = o.exhaustive_k > 0 ? o.exhaustive_k : default_exhaustive_k(ctx);
  json all = json::array();
  for (const auto& [first, second] : parse_pairs(o.pairs)) {
    const auto entries = intersection_scan(ctx, first, second, o.keys, rng, k, o.random_trials);
    json keys = json::array();
    std::size_t found = 0;
    for (const auto& e : entries) {
      found += e.report.found() ? 1 : 0;
      keys.push_back({{"key", io::key_to_json(e.key)}, {"report", io::report_to_json(e.report)}});
    }
    all.push_back({{"first", first.name()},
                   {"second", second.name()},
                   {"keys_sampled", entries.size()},
                   {"counterexamples", found},
                   {"results", keys}});
    if (!o.json_output) {
      out << first.name() << "," << second.name() << ": " << found << "/" << entries.size()
          << " keys with counterexample";
      if (!entries.empty() && entries.front().report.found()) {
        const auto& r = entries.front().report;
        out << " (first: x=" << r.x->to_string() << " y=" << r.y->to_string() << ")";
      }
      out << '\n';
    }
  }
  if (o.json_output) out << all.dump() << '\n';
  return kOk;
}

inline int cmd_demo(const Options& o, std::ostream& out) {
  const PadicContext ctx(o.p, o.precision);
  std::mt19937_64 rng(o.seed);
  const FormulaAst ast = parse_formula(o.formula.empty() || o.paper_example
                                           ? std::string(kStarExampleFormula)
                                           : o.formula);
  const CipherKey key = keygen(ctx, Family::fhe, rng, GOperation(G1{}));
  const auto vars = variables_used(ast);
  std::optional<DemoReport> first;
  Env first_env;
  std::uint64_t matched = 0;
  for (std::uint64_t t = 0; t < std::max<std::uint64_t>(o.trials, 1); ++t) {
    Env env;
    for (const auto& name : vars) env.emplace(name, padicfhe::detail::random_residue(ctx, rng));
    DemoReport report = encrypted_eval_demo(ast, env, key);
    matched += report.match ? 1 : 0;
    if (!first) {
      first = std::move(report);
      first_env = std::move(env);
    }
  }
  const std::uint64_t trials = std::max<std::uint64_t>(o.trials, 1);
  json env_json = json::object();
  for (const auto& [name, value] : first_env) env_json[name] = value.to_string();
  json result{{"formula", print_formula(ast)},
              {"p", ctx.prime()},
              {"precision", ctx.precision()},
              {"key", io::key_to_json(key)},
              {"trials", trials},
              {"matched", matched},
              {"env", env_json}};
  result.update(demo_json(*first));
  result["match"] = matched == trials;
  if (o.json_output) {
    out << result.dump() << '\n';
  } else {
    out << "formula: " << print_formula(ast) << '\n';
    out << "p: " << ctx.prime() << "  precision: " << ctx.precision() << '\n';
    out << "key: A = " << std::get<FheKey>(key.get()).A.to_string() << " (G1)\n";
    for (const auto& [name, value] : first_env) out << name << " = " << value.to_string() << '\n';
    out << "plain: " << first->plain.to_string() << '\n';
    out << "encrypted_path: " << first->cipher_result.to_string() << '\n';
    out << "decrypted: " << first->decrypted.to_string() << '\n';
    out << "trials: " << trials << "  matched: " << matched << '\n';
    out << "match: " << (matched == trials ? "true" : "false") << '\n';
  }
  return matched == trials ? kOk : kInternal;
}

inline void report_error(std::ostream& err, const std::string& kind, const std::string& message,
                         int code) {
  err << json{{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}}.dump()
      << '\n';
}

}  // namespace detail

// args[0] is the program name, as in argv.
inline int run_command(const std::vector<std::string>& args, std::ostream& out,
                       std::ostream& err) {
  using detail::Options;
  Options o;
  CLI::App app{"p-adic homomorphic cipher toolkit", "padicfhe"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--p", o.p, "prime (default 5)");
  app.add_option("--precision", o.precision, "working precision K in digits (default 16)");
  app.add_option("--seed", o.seed, "random seed (default 0)");
  app.add_flag("--json", o.json_output, "structured JSON output");

  auto* keygen_cmd = app.add_subcommand("keygen", "generate a cipher key");
  keygen_cmd->add_option("--family", o.family, "additive|multiplicative|xor|and|fhe")->required();
  keygen_cmd->add_option("--g", o.g, "operation for fhe keys: G1|G2|G3|G4|GLIN");
  keygen_cmd->add_option("--out", o.out_file, "key file to write (default stdout)");

  auto* encrypt_cmd = app.add_subcommand("encrypt", "encrypt a value");
  auto* decrypt_cmd = app.add_subcommand("decrypt", "decrypt a value");
  for (auto* cmd : {encrypt_cmd, decrypt_cmd}) {
    cmd->add_option("--key", o.key_file, "key file")->required();
    cmd->add_option("value", o.value, "p:K:d0,... or decimal")->required();
  }

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a formula, over ciphertexts with --key");
  eval_cmd->add_option("--formula", o.formula, "formula text")->required();
  eval_cmd->add_option("--env", o.env, "variable bindings name=value");
  eval_cmd->add_option("--key", o.key_file, "key file");

  auto* check_cmd = app.add_subcommand("check", "1-Lipschitz, measure and homomorphism checks");
  check_cmd->add_option("--table", o.table_file, "table or vdp file");
  check_cmd->add_option("--key", o.key_file, "key file (checks its encryption map)");
  check_cmd->add_flag("--measure", o.measure, "measure-preservation criteria");
  check_cmd->add_flag("--lipschitz", o.lipschitz, "1-Lipschitz test");
  check_cmd->add_option("--op", o.op, "homomorphism test for ADD|MUL|XOR|AND|G1..G4");
  check_cmd->add_option("--exhaustive-k", o.exhaustive_k, "exhaustive level for --op");

  auto* search_cmd = app.add_subcommand("search", "counterexamples to joint homomorphism");
  search_cmd->add_option("--pair", o.pairs, "FIRST,SECOND (default: all six pairs)");
  search_cmd->add_option("--keys", o.keys, "keys sampled per pair (default 100)");
  search_cmd->add_option("--exhaustive-k", o.exhaustive_k, "exhaustive search depth");
  search_cmd->add_option("--random-trials", o.random_trials, "random pairs after exhaustive");

  auto* demo_cmd = app.add_subcommand("demo", "encrypted evaluation of the STAR example formula");
  demo_cmd->add_flag("--paper-example", o.paper_example, "use the STAR example formula");
  demo_cmd->add_option("--formula", o.formula, "formula text instead of the example");
  demo_cmd->add_option("--trials", o.trials, "random environments (default 1)");

  std::vector<std::string> reversed(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    detail::report_error(err, "bad_flags", e.what(), kBadFlags);
    return kBadFlags;
  }

  try {
    if (keygen_cmd->parsed()) return detail::cmd_keygen(o, out, err);
    if (encrypt_cmd->parsed()) return detail::cmd_crypt(o, out, true);
    if (decrypt_cmd->parsed()) return detail::cmd_crypt(o, out, false);
    if (eval_cmd->parsed()) return detail::cmd_eval(o, out);
    if (check_cmd->parsed()) return detail::cmd_check(o, out);
    if (search_cmd->parsed()) return detail::cmd_search(o, out);
    if (demo_cmd->parsed()) return detail::cmd_demo(o, out);
  } catch (const Error& e) {
    const int code = exit_code_for(e.code());
    detail::report_error(err, std::string(errc_name(e.code())), e.what(), code);
    return code;
  } catch (const std::exception& e) {
    detail::report_error(err, "internal", e.what(), kInternal);
    return kInternal;
  }
  return kBadFlags;
}

}  // namespace padicfhe::cli
