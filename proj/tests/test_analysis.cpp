#include <gtest/gtest.h>

#include <random>

#include "padicfhe/analysis.hpp"
#include "support.hpp"

using namespace padicfhe;
using oracle::make;
using oracle::residue;
using Verdict = SearchReport::Verdict;

namespace {

const char* kBaseOps[] = {"ADD", "MUL", "XOR", "AND"};

}  // namespace

TEST(OpSymbols, ParseAndName) {
  for (const char* name : {"ADD", "MUL", "XOR", "AND", "G1", "G2", "G3", "G4"}) {
    EXPECT_EQ(parse_op_symbol(name).name(), name);
  }
  EXPECT_THROW(parse_op_symbol("SUB"), Error);
  EXPECT_EQ(family_for(parse_op_symbol("ADD")), Family::additive);
  EXPECT_EQ(family_for(parse_op_symbol("AND")), Family::and_digits);
  EXPECT_FALSE(family_for(parse_op_symbol("G2")).has_value());
}

TEST(Homomorphism, AdditiveKeyWithAdd) {
  const PadicContext ctx(5, 3);
  const auto key = CipherKey::additive(make(ctx, 7));
  const auto r = homomorphism_test(key, OpSymbol::add(), SearchMode::exhaustive(3));
  EXPECT_EQ(r.verdict, Verdict::pass);
  EXPECT_EQ(r.trials, 125u * 125u);
  EXPECT_EQ(homomorphism_test(key, OpSymbol::add(), SearchMode::randomized(1, 1000)).verdict,
            Verdict::pass);
}

TEST(Homomorphism, AdditiveKeyWithAndFindsSmallestWitness) {
  const PadicContext ctx(5, 3);
  const auto key = CipherKey::additive(make(ctx, 2));
  const auto r = homomorphism_test(key, OpSymbol::and_digits(), SearchMode::exhaustive(1));
  ASSERT_EQ(r.verdict, Verdict::counterexample);
  EXPECT_EQ(residue(*r.x), 1u);
  EXPECT_EQ(residue(*r.y), 1u);
  EXPECT_EQ(residue(encrypt(key, and_p(*r.x, *r.y))), 2u);
  EXPECT_EQ(residue(and_p(encrypt(key, *r.x), encrypt(key, *r.y))), 4u);
  EXPECT_TRUE(replay(r, key, OpSymbol::and_digits()));
}

TEST(Homomorphism, IdentityTablePassesEverything) {
  const PadicContext ctx(3, 3);
  const auto id = ValueTable::identity(ctx);
  for (const char* name : {"ADD", "MUL", "XOR", "AND", "G1", "G2", "G3", "G4"}) {
    EXPECT_EQ(homomorphism_test(id, parse_op_symbol(name), SearchMode::exhaustive(3)).verdict,
              Verdict::pass)
        << name;
  }
}

TEST(Homomorphism, ExhaustiveModeIsADecisionProcedure) {
  // Compare against a direct double loop over the table.
  const PadicContext ctx(3, 2);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const auto t = random_lipschitz_table(ctx, rng, 0.7);
    for (const char* name : kBaseOps) {
      const auto op = parse_op_symbol(name);
      bool holds = true;
      for (std::uint64_t x = 0; x < 9 && holds; ++x) {
        for (std::uint64_t y = 0; y < 9 && holds; ++y) {
          std::uint64_t g = 0, gf = 0;
          if (std::string(name) == "ADD") { g = (x + y) % 9; gf = (t[x] + t[y]) % 9; }
          if (std::string(name) == "MUL") { g = x * y % 9; gf = t[x] * t[y] % 9; }
          if (std::string(name) == "XOR") { g = oracle::digitwise(x, y, 3, 2, false); gf = oracle::digitwise(t[x], t[y], 3, 2, false); }
          if (std::string(name) == "AND") { g = oracle::digitwise(x, y, 3, 2, true); gf = oracle::digitwise(t[x], t[y], 3, 2, true); }
          holds = t[g] == gf;
        }
      }
      const auto r = homomorphism_test(t, op, SearchMode::exhaustive(2));
      EXPECT_EQ(r.verdict == Verdict::pass, holds) << name;
      if (r.found()) {
        EXPECT_TRUE(replay(r, [&](const PadicInt& x) { return t.apply(x); }, op));
      }
    }
  }
}

TEST(Homomorphism, RejectsBadLevel) {
  const PadicContext ctx(3, 2);
  const auto key = CipherKey::additive(make(ctx, 2));
  EXPECT_THROW(homomorphism_test(key, OpSymbol::add(), SearchMode::exhaustive(0)), Error);
  EXPECT_THROW(homomorphism_test(key, OpSymbol::add(), SearchMode::exhaustive(3)), Error);
}

TEST(Search, AddXorWitnessForA13) {
  const PadicContext ctx(3, 3);
  const auto key = CipherKey::additive(make(ctx, 13));
  const auto x = make(ctx, 4), y = make(ctx, 1);
  EXPECT_EQ(residue(encrypt(key, xor_p(x, y))), 11u);
  EXPECT_EQ(residue(encrypt(key, x)), 25u);
  EXPECT_EQ(residue(encrypt(key, y)), 13u);
  EXPECT_EQ(residue(xor_p(encrypt(key, x), encrypt(key, y))), 2u);
  const auto r = homomorphism_test(key, OpSymbol::xor_digits(), SearchMode::exhaustive(3));
  ASSERT_TRUE(r.found());
  EXPECT_TRUE(replay(r, key, OpSymbol::xor_digits()));
}

TEST(Search, AddMulWitness) {
  const PadicContext ctx(5, 3);
  const auto key = CipherKey::additive(make(ctx, 2));
  const auto r = find_counterexample(key, OpSymbol::mul(), 3, 0, 0);
  ASSERT_EQ(r.verdict, Verdict::counterexample);
  EXPECT_EQ(residue(*r.x), 1u);
  EXPECT_EQ(residue(*r.y), 1u);
}

TEST(Search, ExhaustedWhenLawHolds) {
  const PadicContext ctx(3, 3);
  const auto key = CipherKey::additive(make(ctx, 2));
  const auto r = find_counterexample(key, OpSymbol::add(), 2, 5, 100);
  EXPECT_EQ(r.verdict, Verdict::exhausted);
  EXPECT_EQ(r.trials, 9u + 81u + 100u);
}

TEST(Search, XorAndCounterexampleWithinP2) {
  const PadicContext ctx(3, 3);
  std::mt19937_64 rng(13);
  for (int i = 0; i < 50; ++i) {
    const auto key = keygen(ctx, Family::xor_digits, rng);
    if (is_identity_key(key)) continue;
    const auto r = find_counterexample(key, OpSymbol::and_digits(), 3, 0, 0);
    EXPECT_TRUE(r.found());
    EXPECT_TRUE(replay(r, key, OpSymbol::and_digits()));
  }
}

TEST(Scan, AllSixPairsAtP3K3) {
  const PadicContext ctx(3, 3);
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const auto first = parse_op_symbol(kBaseOps[i]), second = parse_op_symbol(kBaseOps[j]);
      const auto entries = intersection_scan(ctx, first, second, 25, rng, 3);
      ASSERT_EQ(entries.size(), 25u);
      for (const auto& e : entries) {
        EXPECT_FALSE(is_identity_key(e.key));
        EXPECT_EQ(homomorphism_test(e.key, first, SearchMode::exhaustive(3)).verdict, Verdict::pass);
        if (!e.report.found()) {
          // Only A = 1 mod 9 escapes, and only against XOR; see below.
          ASSERT_EQ(e.key.family(), Family::additive);
          ASSERT_EQ(second.kind(), OpSymbol::Kind::xor_digits);
          EXPECT_EQ(std::get<AdditiveKey>(e.key.get()).A.truncate(2), PadicInt::one(PadicContext(3, 2)));
          continue;
        }
        EXPECT_TRUE(replay(e.report, e.key, second));
      }
    }
  }
}

TEST(Scan, TruncationArtifactAtP3K3) {
  // A = 1 + 9c maps x to x + 9 c x_0: mod 27 that only adds c x_0 to digit 2,
  // a digit-linear map, so XOR commutes. One more digit exposes the carry.
  for (std::uint64_t a : {10u, 19u}) {
    const auto key3 = CipherKey::additive(make(PadicContext(3, 3), a));
    EXPECT_FALSE(is_identity_key(key3));
    EXPECT_EQ(find_counterexample(key3, OpSymbol::xor_digits(), 3, 0, 0).verdict, Verdict::exhausted);
    const auto key4 = CipherKey::additive(make(PadicContext(3, 4), a));
    const auto r = find_counterexample(key4, OpSymbol::xor_digits(), 4, 0, 0);
    ASSERT_TRUE(r.found());
    EXPECT_TRUE(replay(r, key4, OpSymbol::xor_digits()));
  }
  // The same map as an XOR key commutes with ADD mod 27.
  const PadicContext ctx(3, 3);
  const auto xkey = CipherKey::xor_digits(ctx, {{1}, {0, 1}, {1, 0, 1}});
  EXPECT_EQ(encryption_table(xkey), encryption_table(CipherKey::additive(make(ctx, 10))));
  EXPECT_EQ(find_counterexample(xkey, OpSymbol::add(), 3, 0, 0).verdict, Verdict::exhausted);
}

TEST(Scan, OnlyArtifactKeysEscapeAtP3K3) {
  // Every non-identity additive key other than A = 10, 19 has a mod-27 XOR witness.
  const PadicContext ctx(3, 3);
  for (std::uint64_t a = 1; a < 27; ++a) {
    if (a % 3 == 0 || a == 1) continue;
    const auto key = CipherKey::additive(make(ctx, a));
    const bool found = find_counterexample(key, OpSymbol::xor_digits(), 3, 0, 0).found();
    EXPECT_EQ(found, a % 9 != 1) << a;
    for (const char* other : {"MUL", "AND"}) {
      EXPECT_TRUE(find_counterexample(key, parse_op_symbol(other), 3, 0, 0).found()) << a;
    }
  }
}

TEST(Scan, ReverseDirectionsToo) {
  const PadicContext ctx(3, 3);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < i; ++j) {
      const auto first = parse_op_symbol(kBaseOps[i]), second = parse_op_symbol(kBaseOps[j]);
      if (first.kind() == OpSymbol::Kind::and_digits) {
        // Every exponent prime to p - 1 = 2 is 1, so each AND key is the identity.
        EXPECT_THROW(intersection_scan(ctx, first, second, 1, rng, 3), Error);
        continue;
      }
      for (const auto& e : intersection_scan(ctx, first, second, 10, rng, 3)) {
        EXPECT_TRUE(e.report.found()) << kBaseOps[i] << "," << kBaseOps[j];
      }
    }
  }
  const PadicContext p5(5, 2);
  for (const auto& e : intersection_scan(p5, OpSymbol::and_digits(), OpSymbol::add(), 10, rng, 2)) {
    EXPECT_TRUE(e.report.found());
  }
}

TEST(Scan, RequiresKeyFamily) {
  const PadicContext ctx(3, 3);
  std::mt19937_64 rng(1);
  EXPECT_THROW(intersection_scan(ctx, OpSymbol::g(G1{}), OpSymbol::add(), 1, rng, 2), Error);
}

TEST(Scan, Deterministic) {
  const PadicContext ctx(3, 3);
  std::mt19937_64 a(99), b(99);
  const auto ra = intersection_scan(ctx, OpSymbol::add(), OpSymbol::xor_digits(), 10, a, 3);
  const auto rb = intersection_scan(ctx, OpSymbol::add(), OpSymbol::xor_digits(), 10, b, 3);
  for (std::size_t i = 0; i < ra.size(); ++i) {
    EXPECT_EQ(*ra[i].report.x, *rb[i].report.x);
    EXPECT_EQ(*ra[i].report.y, *rb[i].report.y);
  }
}

TEST(VdpProbe, IdentityAndWorkedKey) {
  const PadicContext ctx(5, 2);
  const MultiplicativeKey id{make(ctx, 1), 1, make(ctx, 1)};
  EXPECT_EQ(vdp_coefficient_probe(id).verdict, Verdict::pass);

  const MultiplicativeKey key{make(ctx, 1), 3, make(ctx, 1)};
  EXPECT_EQ(vdp_coefficient_probe(key).verdict, Verdict::pass);
  const auto s = vdp_interpolate(encryption_table(CipherKey::multiplicative(key.A, key.s, key.a)));
  for (std::uint64_t t0 = 1; t0 < 5; ++t0) EXPECT_EQ(s.normalized(t0) % 5, t0 * t0 * t0 % 5);
}

TEST(VdpProbe, RandomKeys) {
  std::mt19937_64 rng(15);
  for (std::uint32_t p : {3u, 5u, 7u}) {
    const PadicContext ctx(p, 3);
    for (int i = 0; i < 30; ++i) {
      const auto key = keygen(ctx, Family::multiplicative, rng);
      const auto r = vdp_coefficient_probe(std::get<MultiplicativeKey>(key.get()));
      EXPECT_EQ(r.verdict, Verdict::pass) << r.note;
    }
  }
}

TEST(VdpProbe, LeadingCoefficientsByDirectDifference) {
  // b_{t0 p^k} = (f(t0 p^k) - f(0)) / p^k, computed from the table directly.
  const PadicContext ctx(5, 3);
  std::mt19937_64 rng(16);
  for (int i = 0; i < 20; ++i) {
    const auto key = keygen(ctx, Family::multiplicative, rng);
    const auto& k = std::get<MultiplicativeKey>(key.get());
    const auto t = encryption_table(key);
    for (unsigned lvl = 0; lvl < 3; ++lvl) {
      const auto pk = oracle::ipow(5, lvl);
      for (std::uint64_t t0 = 1; t0 < 5; ++t0) {
        const auto b = (t[t0 * pk] + 125 - t[0]) % 125 / pk;
        EXPECT_EQ(b % 5, oracle::slow_pow(k.A.digit(0), lvl, 5) * oracle::slow_pow(t0, k.s, 5) % 5);
      }
    }
  }
}

TEST(VdpProbe, RejectsLargeTables) {
  const PadicContext ctx(5, 8);
  EXPECT_THROW(vdp_coefficient_probe({make(ctx, 1), 1, make(ctx, 1)}), Error);
}
