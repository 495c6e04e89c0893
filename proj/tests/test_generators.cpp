#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <vector>

#include "betagos/generators.hpp"
#include "betagos/moments.hpp"
#include "oracles.hpp"

using namespace betagos;

TEST_CASE("mixture: component frequencies and within-cluster noise") {
  RngStream rng(61);
  const int n = 100000;
  LabeledSeries s = gen_mixture({0.3, 0.7}, 0.0, 50.0, 0.25, n, rng);
  REQUIRE(static_cast<int>(s.y.size()) == n);
  REQUIRE(s.truth.size() == n);
  auto ass = s.truth.assignments();
  // the two components are far apart (sigma0 = 50), so truth has two blocks
  REQUIRE(s.truth.block_count() == 2);
  std::vector<double> freq(2, 0.0);
  for (int a : ass) freq[static_cast<std::size_t>(a)] += 1.0 / n;
  // block order is by first occurrence, so match frequencies as a set
  double lo = std::min(freq[0], freq[1]), hi = std::max(freq[0], freq[1]);
  double se = std::sqrt(0.3 * 0.7 / n);
  CHECK(std::abs(lo - 0.3) < 4 * se);
  CHECK(std::abs(hi - 0.7) < 4 * se);
  // emission noise around each component mean has sd tau
  for (int b = 0; b < 2; ++b) {
    std::vector<double> within;
    for (int i = 0; i < n; ++i)
      if (ass[static_cast<std::size_t>(i)] == b) within.push_back(s.y[static_cast<std::size_t>(i)]);
    CHECK(oracles::sd(within) == doctest::Approx(0.25).epsilon(0.05));
  }
}

TEST_CASE("mixture rejects a non-simplex pi") {
  RngStream rng(1);
  CHECK_THROWS_AS(gen_mixture({0.5, 0.6}, 0.0, 1.0, 0.1, 10, rng), std::invalid_argument);
  CHECK_THROWS_AS(gen_mixture({}, 0.0, 1.0, 0.1, 10, rng), std::invalid_argument);
}

TEST_CASE("truncated urn: degenerate regimes") {
  RngStream rng(67);
  SUBCASE("p_new = 1 gives all singletons") {
    LabeledSeries s = gen_truncated_urn(2, 1.0, {0.0, 0.0}, 0.0, 10.0, 0.1, 50, rng);
    CHECK(s.truth.block_count() == 50);
  }
  SUBCASE("always copy the most recent gives one block") {
    LabeledSeries s = gen_truncated_urn(1, 0.0, {1.0}, 0.0, 10.0, 0.1, 50, rng);
    CHECK(s.truth.block_count() == 1);
  }
}

TEST_CASE("truncated urn: blocks never recur after a gap larger than the lag") {
  RngStream rng(71);
  const int k = 3;
  LabeledSeries s = gen_truncated_urn(k, 0.35, {0.3, 0.2, 0.15}, 0.0, 10.0, 0.1, 5000, rng);
  for (const auto& block : s.truth.blocks)
    for (std::size_t t = 1; t < block.size(); ++t)
      CHECK(block[t] - block[t - 1] <= k);
}

TEST_CASE("truncated urn: fresh-draw rate matches p_new once the lag window fills") {
  RngStream rng(73);
  const int n = 60000, k = 3;
  const double p_new = 0.3;
  LabeledSeries s = gen_truncated_urn(k, p_new, {0.3, 0.25, 0.15}, 0.0, 10.0, 0.05, n, rng);
  auto ass = s.truth.assignments();
  int fresh = 0, total = 0;
  std::vector<bool> seen(static_cast<std::size_t>(s.truth.block_count()), false);
  for (int i = 0; i < n; ++i) {
    int b = ass[static_cast<std::size_t>(i)];
    bool is_new = !seen[static_cast<std::size_t>(b)];
    seen[static_cast<std::size_t>(b)] = true;
    if (i >= k) {
      ++total;
      if (is_new) ++fresh;
    }
  }
  double rate = static_cast<double>(fresh) / total;
  double se = std::sqrt(p_new * (1 - p_new) / total);
  CHECK(std::abs(rate - p_new) < 4 * se);
}

TEST_CASE("urn lag weights validate") {
  RngStream rng(2);
  CHECK_THROWS_AS(gen_truncated_urn(2, 0.5, {0.5}, 0.0, 1.0, 0.1, 10, rng),
                  std::invalid_argument);  // one weight per lag
  CHECK_THROWS_AS(gen_truncated_urn(2, 0.5, {0.4, 0.4}, 0.0, 1.0, 0.1, 10, rng),
                  std::invalid_argument);  // mass 1.3
  CHECK_THROWS_AS(gen_truncated_urn(0, 1.0, {}, 0.0, 1.0, 0.1, 10, rng),
                  std::invalid_argument);
}

TEST_CASE("two-regime HMM: switch rate changes at the regime boundary") {
  RngStream rng(79);
  const int n = 4000, sw = 2000;
  LabeledSeries s = gen_hmm_two_regime(default_hmm_sticky(4), default_hmm_switching(), 4,
                                       sw, {}, 0.0, 10.0, 0.1, n, rng);
  REQUIRE(static_cast<int>(s.states.size()) == n);
  int before_moves = 0, after_moves = 0;
  for (int i = 1; i < sw; ++i)
    if (s.states[static_cast<std::size_t>(i)] != s.states[static_cast<std::size_t>(i - 1)])
      ++before_moves;
  for (int i = sw + 1; i < n; ++i)
    if (s.states[static_cast<std::size_t>(i)] != s.states[static_cast<std::size_t>(i - 1)])
      ++after_moves;
  double rb = static_cast<double>(before_moves) / (sw - 1);
  double ra = static_cast<double>(after_moves) / (n - sw - 1);
  // sticky regime leaves the state with probability 0.09, switching with 0.6
  CHECK(std::abs(rb - 0.09) < 4 * std::sqrt(0.09 * 0.91 / (sw - 1)));
  CHECK(std::abs(ra - 0.60) < 4 * std::sqrt(0.6 * 0.4 / (n - sw - 1)));
  // truth groups observations by hidden state
  auto ass = s.truth.assignments();
  for (int i = 1; i < n; ++i)
    CHECK((s.states[static_cast<std::size_t>(i)] == s.states[static_cast<std::size_t>(0)]) ==
          (ass[static_cast<std::size_t>(i)] == ass[static_cast<std::size_t>(0)]));
}

TEST_CASE("HMM with an identity first regime holds its state until the switch") {
  std::vector<double> identity = {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};
  RngStream rng(83);
  LabeledSeries s = gen_hmm_two_regime(identity, default_hmm_switching(), 4, 30, {},
                                       0.0, 10.0, 0.1, 60, rng);
  for (int i = 1; i < 30; ++i)
    CHECK(s.states[static_cast<std::size_t>(i)] == s.states[0]);
}

TEST_CASE("beta-GOS generator matches the analytic expected block count") {
  BetaSchedule sched = BetaSchedule::constant(1.0, 1.0);
  RngStream rng(89);
  const int reps = 4000, n = 30;
  std::vector<double> ks;
  for (int t = 0; t < reps; ++t)
    ks.push_back(gen_betagos(sched, 0.0, 10.0, 0.1, n, rng).truth.block_count());
  CHECK(std::abs(oracles::mean(ks) - expected_K(sched, n)) < 4 * oracles::iid_se(ks));
}

TEST_CASE("DP generator reproduces the urn's expected block count") {
  GeneratorSpec spec = GeneratorSpec::parse("dp:1.5");
  spec.n = 40;
  RngStream rng(97);
  const int reps = 4000;
  std::vector<double> ks;
  for (int t = 0; t < reps; ++t) {
    RngStream sub = rng.split(static_cast<std::uint64_t>(t));
    ks.push_back(generate(spec, sub).truth.block_count());
  }
  double want = 0.0;
  for (int i = 0; i < 40; ++i) want += 1.5 / (1.5 + i);
  CHECK(std::abs(oracles::mean(ks) - want) < 4 * oracles::iid_se(ks));
}

TEST_CASE("generator specs parse, label, and validate") {
  CHECK(GeneratorSpec::parse("mixture").kind == GeneratorKind::kMixture);
  CHECK(GeneratorSpec::parse("urn").kind == GeneratorKind::kTruncatedUrn);
  CHECK(GeneratorSpec::parse("hmm").kind == GeneratorKind::kHmmTwoRegime);
  GeneratorSpec bg = GeneratorSpec::parse("betagos:const:2,3");
  CHECK(bg.kind == GeneratorKind::kBetaGos);
  CHECK(bg.label() == "betagos:const:2,3");
  GeneratorSpec dp = GeneratorSpec::parse("dp:2");
  CHECK(dp.kind == GeneratorKind::kDp);
  CHECK_THROWS_AS(GeneratorSpec::parse("nope"), std::invalid_argument);

  GeneratorSpec bad = GeneratorSpec::parse("mixture");
  bad.tau = -0.1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = GeneratorSpec::parse("mixture");
  bad.n = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = GeneratorSpec::parse("urn");
  bad.pi = {0.9, 0.2};
  bad.kind = GeneratorKind::kMixture;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("generation is reproducible from the stream state") {
  GeneratorSpec spec = GeneratorSpec::parse("mixture");
  spec.n = 50;
  RngStream a(5), b(5), c(6);
  LabeledSeries sa = generate(spec, a);
  LabeledSeries sb = generate(spec, b);
  LabeledSeries sc = generate(spec, c);
  CHECK(sa.y == sb.y);
  CHECK(sa.truth == sb.truth);
  CHECK(sa.y != sc.y);
}

TEST_CASE("published default parameters are exposed") {
  auto pi = default_mixture_pi();
  REQUIRE(pi.size() == 5);
  double total = 0.0;
  for (double p : pi) total += p;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  auto sticky = default_hmm_sticky(4);
  REQUIRE(sticky.size() == 16);
  CHECK(sticky[0] == doctest::Approx(0.91));
  CHECK(sticky[1] == doctest::Approx(0.03));
  auto sw = default_hmm_switching();
  REQUIRE(sw.size() == 16);
  for (int r = 0; r < 4; ++r) {
    double row = 0.0;
    for (int c = 0; c < 4; ++c) row += sw[static_cast<std::size_t>(r * 4 + c)];
    CHECK(row == doctest::Approx(1.0).epsilon(1e-12));
  }
}
