// Acceptance suite: one PASS/FAIL line per criterion. argv[1] is the CLI binary.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "padicfhe/padicfhe.hpp"
#include "support.hpp"

using namespace padicfhe;
using oracle::make;
using oracle::residue;

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// Failure details go here; an empty list means the criterion holds.
struct Outcome {
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void fail(std::string msg) {
    if (failures.size() < 8) failures.push_back(std::move(msg));
  }
  void expect(bool ok, const std::string& msg) {
    if (!ok) fail(msg);
  }
};

int g_failed = 0;

void criterion(int n, const std::string& title, const std::function<void(Outcome&)>& body,
               double limit_seconds = 0) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.fail(std::string("exception: ") + e.what());
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0 && secs > limit_seconds) {
    out.fail("took " + std::to_string(secs) + " s, limit " + std::to_string(limit_seconds) + " s");
  }
  const bool ok = out.failures.empty();
  if (!ok) ++g_failed;
  char timing[32];
  std::snprintf(timing, sizeof timing, "%.2f s", secs);
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << n << ": " << title << " [" << timing
            << "]\n";
  for (const auto& f : out.failures) std::cout << "    failure: " << f << '\n';
  for (const auto& s : out.notes) std::cout << "    note: " << s << '\n';
  std::cout.flush();
}

const Family kFamilies[] = {Family::additive, Family::multiplicative, Family::xor_digits,
                            Family::and_digits, Family::fhe};

CipherKey sample_key(const PadicContext& ctx, Family f, std::mt19937_64& rng) {
  return keygen(ctx, f, rng, f == Family::fhe ? std::optional<GOperation>(G1{}) : std::nullopt);
}

// The law each family satisfies, computed on plain integers mod p^k.
u64 oracle_law(Family f, u64 x, u64 y, std::uint32_t p, int k, u64 m) {
  switch (f) {
    case Family::additive:
    case Family::fhe: return (x + y) % m;
    case Family::multiplicative: return static_cast<u64>(u128(x) * y % m);
    case Family::xor_digits: return oracle::digitwise(x, y, p, k, false);
    case Family::and_digits: return oracle::digitwise(x, y, p, k, true);
  }
  return 0;
}

std::string name(Family f) { return std::string(family_name(f)); }

u64 random_below(std::mt19937_64& rng, u64 m) { return std::uniform_int_distribution<u64>(0, m - 1)(rng); }

// Integer forms of G1..G4 mod p^2, with p^2 small enough for scan_inverse.
u64 oracle_g(int which, u64 x, u64 y, std::uint32_t p) {
  const u64 m = u64{p} * p;
  const auto pw = [&](u64 b, u64 e) { return oracle::slow_pow(b, e, m); };
  switch (which) {
    case 1: return x * pw(y, p - 1) % m;
    case 2: return (pw(x, p - 1) * y + x * pw(y, p - 1)) % m;
    case 3: return pw(x, (p - 1) / 2) * pw(y, (p - 1) / 2) % m;
    case 4: {
      const auto term = [&](u64 v) {
        return v * *oracle::scan_inverse((1 + m - p * pw(v, p - 1) % m) % m, m) % m;
      };
      return (term(x) + term(y)) % m;
    }
  }
  return 0;
}

GOperation g_of(int which) {
  switch (which) {
    case 1: return G1{};
    case 2: return G2{};
    case 3: return G3{};
    default: return G4{};
  }
}

std::string run_capture(const std::string& cmd, int& status) {
  std::string text;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    status = -1;
    return text;
  }
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) text.append(buf, n);
  status = pclose(pipe);
  return text;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";

  criterion(1, "round trips, 200 keys x 50 plaintexts per family, p in {3,5,7}, K = 16",
            [](Outcome& out) {
              std::mt19937_64 rng(1);
              u64 checked = 0;
              for (std::uint32_t p : {3u, 5u, 7u}) {
                const PadicContext ctx(p, 16);
                for (auto f : kFamilies) {
                  for (int i = 0; i < 200; ++i) {
                    const auto key = sample_key(ctx, f, rng);
                    for (int j = 0; j < 50; ++j) {
                      const auto x = detail::random_residue(ctx, rng);
                      ++checked;
                      out.expect(decrypt(key, encrypt(key, x)) == x,
                                 name(f) + " p=" + std::to_string(p) + " x=" + x.to_string());
                    }
                  }
                }
              }
              out.notes.push_back(std::to_string(checked) + " round trips");
            },
            10.0);

  criterion(2, "homomorphism laws, all pairs mod 27 and 10^4 random pairs at K = 16",
            [](Outcome& out) {
              std::mt19937_64 rng(2);
              const auto start = std::chrono::steady_clock::now();
              const PadicContext small(3, 3);
              // 729 keys per family, each over all 729 pairs mod 27: 531,441 checks.
              for (auto f : kFamilies) {
                u64 bad = 0, checks = 0;
                for (int i = 0; i < 729; ++i) {
                  const auto key = sample_key(small, f, rng);
                  std::vector<u64> table(27);
                  for (u64 x = 0; x < 27; ++x) table[x] = residue(encrypt(key, make(small, x)));
                  for (u64 a = 0; a < 27; ++a) {
                    for (u64 b = 0; b < 27; ++b) {
                      ++checks;
                      if (table[oracle_law(f, a, b, 3, 3, 27)] != oracle_law(f, table[a], table[b], 3, 3, 27)) ++bad;
                    }
                  }
                }
                out.expect(bad == 0, name(f) + " law fails on " + std::to_string(bad) + " pairs mod 27");
                out.expect(checks == 531441, name(f) + " checked " + std::to_string(checks));
              }
              const double exhaustive_secs =
                  std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
              out.expect(exhaustive_secs < 30.0, "exhaustive phase over 30 s");

              const PadicContext big(5, 16);
              const u64 m = oracle::ipow(5, 16);
              for (auto f : kFamilies) {
                const auto key = sample_key(big, f, rng);
                u64 bad = 0;
                for (int i = 0; i < 10000; ++i) {
                  const u64 x = random_below(rng, m), y = random_below(rng, m);
                  const u64 lhs = residue(encrypt(key, make(big, oracle_law(f, x, y, 5, 16, m))));
                  const u64 rhs = oracle_law(f, residue(encrypt(key, make(big, x))),
                                             residue(encrypt(key, make(big, y))), 5, 16, m);
                  if (lhs != rhs) ++bad;
                }
                out.expect(bad == 0, name(f) + " law fails on " + std::to_string(bad) + " random pairs");
              }
            });

  criterion(3, "brute force, van der Put and coordinate measure criteria agree on 500 tables each",
            [](Outcome& out) {
              for (auto [p, k] : {std::pair{3u, 3}, {5u, 2}}) {
                const PadicContext ctx(p, k);
                std::mt19937_64 rng(300 + p);
                int preserving = 0, disagreements = 0;
                for (int i = 0; i < 500; ++i) {
                  const auto t = random_lipschitz_table(ctx, rng);
                  const std::vector<u64> values(t.values().begin(), t.values().end());
                  const bool brute = check_measure_bruteforce(t);
                  preserving += brute;
                  out.expect(brute == oracle::bijective_every_level(values, p, k), "brute force vs oracle");
                  const bool vdp = check_measure_vdp(vdp_interpolate(t));
                  const bool coord = check_measure_coord(coord_from_table(t));
                  if (vdp != brute || coord != brute) ++disagreements;
                }
                out.expect(disagreements == 0, std::to_string(disagreements) + " disagreements at p=" +
                                                   std::to_string(p));
                out.notes.push_back("p=" + std::to_string(p) + " K=" + std::to_string(k) + ": " +
                                    std::to_string(preserving) + "/500 preserving, 0 disagreements");
              }
              const PadicContext ctx(3, 3);
              std::mt19937_64 rng(303);
              int witnesses = 0;
              for (int i = 0; i < 500; ++i) {
                const auto t = random_lipschitz_table(ctx, rng);
                if (check_measure_vdp(vdp_interpolate(t), 2) != check_measure_bruteforce(t)) ++witnesses;
              }
              out.expect(witnesses > 0, "no table separates the k >= 2 reading from brute force");
              out.notes.push_back("k >= 2 reading disagrees with brute force on " +
                                  std::to_string(witnesses) + "/500 tables at p=3 K=3");
            });

  criterion(4, "every sampled non-identity key of each pair has a counterexample mod 27",
            [](Outcome& out) {
              const PadicContext ctx(3, 3);
              const auto key13 = CipherKey::additive(make(ctx, 13));
              const auto x = make(ctx, 4), y = make(ctx, 1);
              out.expect(residue(encrypt(key13, xor_p(x, y))) == 11, "f(4 XOR 1) != 11");
              out.expect(residue(xor_p(encrypt(key13, x), encrypt(key13, y))) == 2,
                         "f(4) XOR f(1) != 2");

              const char* pairs[][2] = {{"ADD", "MUL"}, {"ADD", "XOR"}, {"ADD", "AND"},
                                        {"MUL", "XOR"}, {"MUL", "AND"}, {"XOR", "AND"}};
              std::mt19937_64 rng(4);
              for (const auto& [a, b] : pairs) {
                const auto first = parse_op_symbol(a), second = parse_op_symbol(b);
                const auto entries = intersection_scan(ctx, first, second, 100, rng, 3);
                std::map<u64, int> escaped;
                int found = 0;
                for (const auto& e : entries) {
                  if (e.report.found()) {
                    ++found;
                    out.expect(replay(e.report, e.key, second), std::string(a) + "," + b + " bad replay");
                  } else {
                    ++escaped[residue(encryption_table(e.key).apply(make(ctx, 1)))];
                  }
                }
                out.notes.push_back(std::string(a) + "," + b + ": " + std::to_string(found) +
                                    "/100 keys with a counterexample");
                if (!escaped.empty()) {
                  std::string keys;
                  for (auto [v, c] : escaped) keys += " f(1)=" + std::to_string(v) + " x" + std::to_string(c);
                  out.fail(std::string(a) + "," + b + ": " + std::to_string(100 - found) +
                           " keys commute with " + b + " on all pairs mod 27:" + keys);
                  // The same multipliers one digit further out do have witnesses.
                  for (auto [v, c] : escaped) {
                    const auto wide = CipherKey::additive(make(PadicContext(3, 4), v));
                    const auto r = find_counterexample(wide, second, 4, 0, 0);
                    out.notes.push_back("A=" + std::to_string(v) + " at K=4: " +
                                        (r.found() ? "counterexample x=" + r.x->to_string() +
                                                         " y=" + r.y->to_string()
                                                   : std::string("none")));
                  }
                }
              }
            });

  criterion(5, "Teichmuller lifts, admissible multipliers and fully homomorphic keys",
            [](Outcome& out) {
              for (std::uint32_t p : {3u, 5u, 7u}) {
                const PadicContext ctx(p, 16);
                for (Digit a = 1; a < p; ++a) {
                  const auto w = teichmuller(ctx, a);
                  out.expect(w.digit(0) == a && pow_nat(w, p - 1) == PadicInt::one(ctx),
                             "omega(" + std::to_string(a) + ")^(p-1) != 1 at p=" + std::to_string(p));
                }
              }
              const PadicContext ctx(5, 2);
              const auto adm = admissible_multipliers(ctx, G1{});
              std::set<u64> found;
              for (const auto& A : adm.values) found.insert(residue(A));
              out.expect(adm.d == 4 && found == std::set<u64>{1, 7, 18, 24}, "admissible set for d = 4");

              // Every A with A^d = 1 mod 25 by scanning, for comparison.
              for (int g = 1; g <= 4; ++g) {
                const auto op = g_of(g);
                const auto set = admissible_multipliers(ctx, op);
                std::set<u64> lib, scan;
                for (const auto& A : set.values) lib.insert(residue(A));
                for (u64 A = 1; A < 25; ++A) {
                  if (A % 5 != 0 && oracle::slow_pow(A, set.d, 25) == 1 &&
                      oracle::slow_pow(A, 4, 25) == 1) {
                    scan.insert(A);
                  }
                }
                out.expect(lib == scan, op.name() + " admissible set differs from scan");
                for (u64 A : lib) {
                  const auto key = CipherKey::fhe(make(ctx, A), op);
                  std::vector<u64> f(25);
                  for (u64 x = 0; x < 25; ++x) f[x] = residue(encrypt(key, make(ctx, x)));
                  for (u64 x = 0; x < 25; ++x) {
                    for (u64 y = 0; y < 25; ++y) {
                      out.expect(f[(x + y) % 25] == (f[x] + f[y]) % 25, "ADD law, A=" + std::to_string(A));
                      out.expect(f[oracle_g(g, x, y, 5)] == oracle_g(g, f[x], f[y], 5),
                                 op.name() + " law, A=" + std::to_string(A) + " x=" +
                                     std::to_string(x) + " y=" + std::to_string(y));
                    }
                  }
                }
              }
              out.notes.push_back("G3 admits only A = 1 (total degree p-1)");

              const PadicContext big(5, 16);
              std::mt19937_64 rng(5);
              for (int g = 1; g <= 4; ++g) {
                const auto op = g_of(g);
                for (const auto& A : admissible_multipliers(big, op).values) {
                  const auto key = CipherKey::fhe(A, op);
                  for (int i = 0; i < 1000; ++i) {
                    const auto X = detail::random_residue(big, rng), Y = detail::random_residue(big, rng);
                    const auto fx = encrypt(key, X), fy = encrypt(key, Y);
                    out.expect(encrypt(key, X + Y) == fx + fy, "ADD law at K=16");
                    out.expect(encrypt(key, g_eval(op, X, Y)) == g_eval(op, fx, fy),
                               op.name() + " law at K=16, A=" + A.to_string());
                  }
                }
              }

              const auto key = CipherKey::fhe(make(ctx, 7), G1{});
              const auto x = make(ctx, 2), y = make(ctx, 3);
              out.expect(residue(g_eval(G1{}, x, y)) == 12, "G1(2,3) != 12");
              out.expect(residue(g_eval(G1{}, encrypt(key, x), encrypt(key, y))) == 9,
                         "G1(f(2), f(3)) != 9");
              out.expect(residue(decrypt(key, make(ctx, 9))) == 12, "f^-1(9) != 12");
            });

  criterion(6, "Teichmuller-corrected multiplicative cipher at p = 5, K = 2", [](Outcome& out) {
    const PadicContext ctx(5, 2);
    const auto key = CipherKey::multiplicative(make(ctx, 1), 3, make(ctx, 1));
    out.expect(residue(encrypt(key, make(ctx, 2))) == 23, "enc(2) != 23");
    out.expect(residue(encrypt(key, make(ctx, 4))) == 4, "enc(4) != 4");
    out.expect(23 * 23 % 25 == 4, "23^2 != 4 mod 25");
    out.expect(residue(decrypt(key, make(ctx, 23))) == 2, "dec(23) != 2");
    std::vector<u64> f(25);
    std::set<u64> images;
    for (u64 x = 0; x < 25; ++x) {
      f[x] = residue(encrypt(key, make(ctx, x)));
      images.insert(f[x]);
      out.expect(residue(decrypt(key, make(ctx, f[x]))) == x, "dec(enc(" + std::to_string(x) + "))");
    }
    out.expect(images.size() == 25, "not a bijection mod 25");
    for (u64 x = 0; x < 25; ++x) {
      for (u64 y = 0; y < 25; ++y) {
        out.expect(f[x * y % 25] == f[x] * f[y] % 25,
                   "f(xy) != f(x)f(y) at " + std::to_string(x) + "," + std::to_string(y));
      }
    }
    const MultiplicativeKey raw{make(ctx, 1), 3, make(ctx, 1)};
    const auto l2 = residue(multiplicative_encrypt_literal(raw, make(ctx, 2)));
    const auto l4 = residue(multiplicative_encrypt_literal(raw, make(ctx, 4)));
    out.expect(l2 * l2 % 25 == 9 && l4 == 4, "uncorrected form witness f(2)^2 = 9, f(4) = 4");
    out.notes.push_back("uncorrected form: f(2)^2 = " + std::to_string(l2 * l2 % 25) +
                        ", f(4) = " + std::to_string(l4));
  });

  criterion(7, "leading van der Put coefficients of 50 multiplicative keys, p in {3,5}, K = 3",
            [](Outcome& out) {
              std::mt19937_64 rng(7);
              int probes = 0;
              for (std::uint32_t p : {3u, 5u}) {
                const PadicContext ctx(p, 3);
                for (int i = 0; i < 50; ++i) {
                  const auto key = keygen(ctx, Family::multiplicative, rng);
                  const auto& mk = std::get<MultiplicativeKey>(key.get());
                  const u64 A = mk.A.digit(0);
                  // b_{t0 p^k} = f(t0 p^k) - f(0), divided by p^k.
                  const u64 f0 = residue(encrypt(key, make(ctx, 0)));
                  for (int k = 0; k < 3; ++k) {
                    const u64 pk = oracle::ipow(p, k);
                    for (u64 t0 = 1; t0 < p; ++t0) {
                      ++probes;
                      const u64 b = (residue(encrypt(key, make(ctx, t0 * pk))) + oracle::ipow(p, 3) - f0) %
                                    oracle::ipow(p, 3);
                      const u64 want = oracle::slow_pow(A, k, p) * oracle::slow_pow(t0, mk.s, p) % p;
                      out.expect(b % pk == 0 && b / pk % p == want,
                                 "p=" + std::to_string(p) + " key " + mk.A.to_string() + " m=" +
                                     std::to_string(t0 * pk));
                    }
                  }
                  const auto report = vdp_coefficient_probe(mk);
                  out.expect(!report.found(), "library probe: " + report.note + " at m=" +
                                                  (report.x ? report.x->to_string() : ""));
                }
              }
              out.notes.push_back(std::to_string(probes) + " leading coefficients checked");
            });

  criterion(8, "automaton round trip, Lipschitz outputs and induced bijections at p = 3",
            [](Outcome& out) {
              const PadicContext ctx(3, 4);
              std::mt19937_64 rng(8);
              for (int i = 0; i < 100; ++i) {
                const auto t = random_lipschitz_table(ctx, rng, 0.5);
                out.expect(function_of_automaton(unroll_from_function(t), 4) == t,
                           "round trip on table " + std::to_string(i));
              }
              int bijective = 0;
              for (int i = 0; i < 100; ++i) {
                const auto m = random_machine(3, 1 + i % 6, rng, i % 2 == 0);
                const auto t = function_of_automaton(m, 4);
                const std::vector<u64> values(t.values().begin(), t.values().end());
                out.expect(check_one_lipschitz(t) && oracle::lipschitz_pairwise(values, 3, 4),
                           "machine " + std::to_string(i) + " not 1-Lipschitz");
                const bool induced = check_induced_bijections(m, 4);
                bijective += induced;
                out.expect(induced == check_measure_bruteforce(t),
                           "induced bijections vs brute force on machine " + std::to_string(i));
              }
              out.notes.push_back(std::to_string(bijective) + "/100 machines bijective");
            });

  criterion(9, "STAR example: expanded form, encrypted evaluation and CLI demo", [&](Outcome& out) {
    const auto w = parse_formula(kStarExampleFormula);
    for (std::uint32_t p : {3u, 5u}) {
      const PadicContext ctx(p, 2);
      const u64 m = u64{p} * p;
      for (u64 x = 0; x < m; ++x) {
        for (u64 y = 0; y < m; ++y) {
          for (u64 z = 0; z < m; ++z) {
            const Env env{{"x", make(ctx, x)}, {"y", make(ctx, y)}, {"z", make(ctx, z)}};
            out.expect(eval_formula(w, ctx, env) ==
                           star_example_expanded(make(ctx, x), make(ctx, y), make(ctx, z)),
                       "p=" + std::to_string(p) + " env " + std::to_string(x) + "," +
                           std::to_string(y) + "," + std::to_string(z));
          }
        }
      }
    }
    const PadicContext ctx(5, 16);
    std::mt19937_64 rng(9);
    const auto key = keygen(ctx, Family::fhe, rng, G1{});
    int matched = 0;
    for (int i = 0; i < 1000; ++i) {
      Env env;
      for (const char* n : {"x", "y", "z"}) env.emplace(n, detail::random_residue(ctx, rng));
      matched += encrypted_eval_demo(w, env, key).match;
    }
    out.expect(matched == 1000, std::to_string(1000 - matched) + " envs mismatch");
    out.notes.push_back(std::to_string(matched) + "/1000 envs match");

    if (cli.empty()) {
      out.fail("CLI path not given");
      return;
    }
    const std::string cmd = cli + " demo --paper-example --p 5 --precision 16 --seed 1";
    int s1 = 0, s2 = 0;
    const auto first = run_capture(cmd, s1);
    const auto second = run_capture(cmd, s2);
    out.expect(s1 == 0 && s2 == 0, "CLI demo exit status");
    out.expect(!first.empty() && first == second, "CLI demo output differs between runs");
    out.expect(first.find("match: true") != std::string::npos, "CLI demo reports no match");
  });

  std::cout << (g_failed == 0 ? "all criteria passed" : std::to_string(g_failed) + " criteria failed")
            << '\n';
  return g_failed == 0 ? 0 : 1;
}
