#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "nandwalk/baseline.hpp"
#include "oracles.hpp"

using namespace nandwalk;

TEST_CASE("truth tables") {
  CHECK(brute_force_truth_table(parse_formula("NAND(x1)")) == std::vector<std::uint8_t>{1, 0});
  const auto fig = brute_force_truth_table(balanced(3));
  const auto x = InputAssignment::from_string("00010111");
  std::uint64_t code = 0;
  for (std::uint32_t i = 1; i <= 8; ++i) code |= std::uint64_t(x.at(i)) << (i - 1);
  CHECK(fig[code] == 1);

  // balanced(2) by hand: NAND(NAND(a,b), NAND(c,d)) = (a AND b) OR (c AND d).
  const auto b2 = brute_force_truth_table(balanced(2));
  REQUIRE(b2.size() == 16);
  for (std::uint64_t c = 0; c < 16; ++c) {
    const int a = c & 1, b = (c >> 1) & 1, cc = (c >> 2) & 1, d = (c >> 3) & 1;
    CHECK(b2[c] == ((a & b) | (cc & d)));
  }
}

TEST_CASE("truth table agrees with the recursive oracle") {
  for (const auto& f : {balanced(4), chain(9), random_formula(14, 5),
                        parse_formula("NAND(x1,NAND(x1,x3),OR(x2,x3))")}) {
    const auto table = brute_force_truth_table(f);
    for (std::uint64_t c = 0; c < table.size(); ++c) {
      REQUIRE(table[c] == oracle::nand_value(f.root(), InputAssignment::from_index(c, f.num_vars())));
    }
  }
  CHECK_THROWS_AS(brute_force_truth_table(balanced(5)), SizeError);
}

TEST_CASE("alpha-beta values match brute force") {
  for (const auto& f : {balanced(3), balanced(4), chain(8), random_formula(12, 3),
                        random_formula(16, 8)}) {
    const auto table = brute_force_truth_table(f);
    for (std::uint64_t c = 0; c < table.size(); c += (table.size() > 4096 ? 7 : 1)) {
      const auto x = InputAssignment::from_index(c, f.num_vars());
      const auto r = alpha_beta_evaluate(f, x, c);
      REQUIRE(r.value == table[c]);
      REQUIRE(r.queries <= f.size());
      REQUIRE(r.queries >= 1);
    }
  }
}

TEST_CASE("alpha-beta on NAND(x1,x2)") {
  const auto f = parse_formula("NAND(x1,x2)");
  // x1 = 0: one query when x1 comes first, two otherwise.
  for (const char* bits : {"00", "01"}) {
    double total = 0.0;
    const int trials = 4000;
    for (int s = 0; s < trials; ++s) {
      total += static_cast<double>(alpha_beta_evaluate(f, InputAssignment::from_string(bits), s).queries);
    }
    const double mean = total / trials;
    CHECK(mean < 2.0);
    if (std::string(bits) == "00") CHECK(mean == 1.0);
    if (std::string(bits) == "01") CHECK(mean == doctest::Approx(1.5).epsilon(0.05));
  }
  // No 0 child: every leaf is read.
  CHECK(alpha_beta_evaluate(f, InputAssignment::from_string("11"), 1).queries == 2);
  CHECK(alpha_beta_evaluate(parse_formula("NAND(x1,x2,x3)"), InputAssignment::from_string("111"), 4)
            .queries == 3);
  // balanced(3) at all ones: each bottom gate is 0, so every upper gate stops
  // after its first child and exactly one bottom pair per 1-gate is read.
  CHECK(alpha_beta_evaluate(balanced(3), InputAssignment::from_string("11111111"), 4).queries ==
        4);
  CHECK_THROWS_AS(alpha_beta_evaluate(f, InputAssignment::from_string("1"), 0), DimensionError);
}

TEST_CASE("hard inputs") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    const auto f = balanced(4);
    const auto x = hard_input(f, rng);
    // Each 1-valued gate has exactly one 0-valued child.
    std::function<void(const NandNode&)> visit = [&](const NandNode& n) {
      if (n.is_leaf()) return;
      int zeros = 0;
      for (const auto& c : n.children) zeros += oracle::nand_value(c, x) == 0;
      CHECK(zeros == (oracle::nand_value(n, x) == 1 ? 1 : 0));
      for (const auto& c : n.children) visit(c);
    };
    visit(f.root());
  }
  Rng rng(0);
  CHECK_THROWS(hard_input(parse_formula("NAND(x1,x1)"), rng));
}

TEST_CASE("log-log fit") {
  const std::vector<double> x{1, 2, 4, 8, 16};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 0.75));
  const auto fit = fit_loglog(x, y);
  CHECK(fit.slope == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0));
  CHECK_THROWS(fit_loglog(std::vector<double>{1.0}, std::vector<double>{1.0}));
}

TEST_CASE("classical scaling on balanced trees") {
  CHECK(alpha_beta_branching_factor() == doctest::Approx((1 + std::sqrt(33.0)) / 4));
  CHECK(std::log2(alpha_beta_branching_factor()) == doctest::Approx(0.7537).epsilon(1e-3));
  std::vector<double> n, q;
  for (std::size_t d = 4; d <= 10; d += 2) {
    n.push_back(std::pow(2.0, static_cast<double>(d)));
    q.push_back(mean_alpha_beta_queries(balanced(d), 200, 1));
  }
  CHECK(mean_alpha_beta_queries(balanced(4), 50, 9) == mean_alpha_beta_queries(balanced(4), 50, 9));
  const auto fit = fit_loglog(n, q);
  CHECK(fit.slope == doctest::Approx(0.754).epsilon(0.07));
}
