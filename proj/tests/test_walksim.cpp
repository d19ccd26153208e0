#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "nandwalk/walksim.hpp"
#include "oracles.hpp"

using namespace nandwalk;

namespace {

// Phase estimation with an explicit counter register: amplitude of outcome k
// is (1/T) sum_t e^{-2 pi i t k / T} (-iU)^t |psi_0>, on the dense walk.
std::vector<double> dense_distribution(const CoinedWalk& walk, const InputAssignment& x,
                                       std::size_t t) {
  const Eigen::MatrixXcd u = cplx(0, -1) * walk.dense(&x);
  const auto d = u.rows();
  const auto e0 =
      static_cast<long>(walk.space().index(GateTree::kTailOuter, GateTree::kTailInner));
  std::vector<Eigen::VectorXcd> powers;
  Eigen::VectorXcd s = Eigen::VectorXcd::Zero(d);
  s(e0) = 1.0;
  for (std::size_t m = 0; m < t; ++m) {
    powers.push_back(s);
    s = u * s;
  }
  std::vector<double> p(t);
  for (std::size_t k = 0; k < t; ++k) {
    Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(d);
    for (std::size_t m = 0; m < t; ++m) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(m * k % t) /
                           static_cast<double>(t);
      amp += std::polar(1.0, angle) * powers[m];
    }
    p[k] = amp.squaredNorm() / static_cast<double>(t * t);
  }
  return p;
}

}  // namespace

TEST_CASE("counter size") {
  CHECK(Evaluator(balanced(3)).config().counter_size == 320 * 2);
  CHECK(Evaluator(balanced(6)).config().counter_size == 2560);
  CHECK(Evaluator(balanced(4)).config().counter_size == 1280);
  CHECK(Evaluator(parse_formula("x1")).config().counter_size == 320);

  const Evaluator ev(chain(8));
  const auto& st = ev.stats();
  const double target = 100.0 * ev.quantized().nh * oracle::sigma_minus(chain(8)) *
                        std::sqrt(oracle::sigma_plus(chain(8)));
  const auto t = ev.config().counter_size;
  CHECK_FALSE(ev.config().balanced_rule);
  CHECK(t % 2 == 0);
  CHECK(static_cast<double>(t) >= target);
  CHECK(static_cast<double>(t) < target + 2.0);
  CHECK(st.sigma_minus == doctest::Approx(oracle::sigma_minus(chain(8))));
}

TEST_CASE("query counts") {
  const auto x16 = InputAssignment::zeros(16);
  const auto r16 = Evaluator(balanced(4)).run(x16);
  CHECK(count_queries(r16) == 1279);
  CHECK(r16.mean_queries == doctest::Approx(639.5));
  CHECK(count_queries(Evaluator(parse_formula("x1")).run(InputAssignment::zeros(1))) == 319);
}

TEST_CASE("config validation") {
  PhaseEstimationConfig cfg;
  cfg.counter_size = 7;
  cfg.precision = 0.1;
  CHECK_THROWS(cfg.validate());
  cfg.counter_size = 8;
  CHECK_NOTHROW(cfg.validate());
  cfg.error_budget = 0.3;
  CHECK_THROWS(cfg.validate());
  cfg.error_budget = 0.2;
  cfg.mode = Mode::kSampled;
  cfg.reps = 0;
  CHECK_THROWS(cfg.validate());
  CHECK(parse_mode("sampled") == Mode::kSampled);
  CHECK(to_string(Mode::kExact) == "exact");
  CHECK_THROWS(parse_mode("quantum"));
  EvaluatorOptions opt;
  opt.counter_size = 3;
  CHECK_THROWS(Evaluator(balanced(1), opt));
}

TEST_CASE("streamed distribution equals an explicit counter register") {
  for (const auto& f : {balanced(1), chain(3), parse_formula("NAND(x1)")}) {
    EvaluatorOptions opt;
    opt.counter_size = 24;
    const Evaluator ev(f, opt);
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << f.num_vars()); ++code) {
      const auto x = InputAssignment::from_index(code, f.num_vars());
      const auto r = ev.run(x);
      const auto ref = dense_distribution(ev.quantized().walk, x, 24);
      double total = 0.0;
      for (std::size_t k = 0; k < 24; ++k) {
        CHECK(std::abs(r.distribution[k] - ref[k]) <= 1e-12);
        total += r.distribution[k];
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(r.mass_zero == doctest::Approx(ref[0]).epsilon(1e-12));
      CHECK(r.mass_half == doctest::Approx(ref[12]).epsilon(1e-12));
    }
  }
}

TEST_CASE("acceptance separation on balanced(3)") {
  EvaluatorOptions opt;
  opt.full_distribution = false;
  const Evaluator ev(balanced(3), opt);
  const auto x1 = InputAssignment::from_string("00010111");
  const auto r1 = ev.run(x1);
  CHECK(evaluate_classical(balanced(3), x1) == 1);
  CHECK(r1.acceptance < 0.2);
  CHECK(r1.decision == 1);
  const auto x0 = InputAssignment::from_string("11111111");
  const auto r0 = ev.run(x0);
  CHECK(evaluate_classical(balanced(3), x0) == 0);
  CHECK(evaluate_classical(balanced(3), InputAssignment::zeros(8)) == 1);
  CHECK(r0.acceptance >= 0.24);
  CHECK(r0.decision == 0);
  CHECK(r0.final_norm == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r1.final_norm == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("single leaf") {
  const Evaluator ev(parse_formula("x1"));
  const auto r0 = ev.run(InputAssignment::from_string("0"));
  CHECK(r0.acceptance >= 0.24);
  CHECK(r0.decision == 0);
  CHECK(ev.run(InputAssignment::from_string("1")).decision == 1);
}

TEST_CASE("NOT gate") {
  CHECK(evaluate(parse_formula("NAND(x1)"), InputAssignment::from_string("0")) == 1);
  CHECK(evaluate(parse_formula("NAND(x1)"), InputAssignment::from_string("1")) == 0);
}

TEST_CASE("exact decisions match the classical value") {
  for (const auto& f : {balanced(3), chain(4), random_formula(7, 3)}) {
    EvaluatorOptions opt;
    opt.full_distribution = false;
    const Evaluator ev(f, opt);
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << f.num_vars()); ++code) {
      const auto x = InputAssignment::from_index(code, f.num_vars());
      REQUIRE(ev.evaluate(x) == oracle::nand_value(f.root(), x));
    }
  }
}

TEST_CASE("acceptance masses at 0 and T/2 are individually symmetric") {
  const Evaluator ev(balanced(2));
  for (std::uint64_t code = 0; code < 16; ++code) {
    const auto r = ev.run(InputAssignment::from_index(code, 4));
    CHECK(std::abs(r.mass_zero - r.mass_half) <= 1e-12);
    const auto t = r.counter_size;
    for (std::size_t k = 1; k < t / 2; ++k) {
      CHECK(std::abs(r.distribution[k] - r.distribution[t - k]) <= 1e-12);
    }
  }
}

TEST_CASE("sampled mode") {
  EvaluatorOptions opt;
  opt.mode = Mode::kSampled;
  opt.seed = 1;
  opt.reps = 21;
  const Evaluator ev(chain(4), opt);
  const auto x = InputAssignment::from_string("1111");
  const auto a = ev.run(x);
  const auto b = ev.run(x);
  CHECK(a.samples == b.samples);
  CHECK(a.samples.size() == 21);
  CHECK(a.decision == evaluate_classical(chain(4), x));
  for (std::uint64_t code = 0; code < 16; ++code) {
    const auto y = InputAssignment::from_index(code, 4);
    CHECK(ev.evaluate(y) == evaluate_classical(chain(4), y));
  }
  opt.seed = 2;
  CHECK(Evaluator(chain(4), opt).run(x).samples != a.samples);
}

TEST_CASE("input length is checked") {
  CHECK_THROWS_AS(Evaluator(balanced(2)).run(InputAssignment::zeros(3)), DimensionError);
}

TEST_CASE("peaks sit at the arcsin of eigenvalues of M") {
  const Evaluator ev(balanced(2));
  const auto x = InputAssignment::from_string("0110");
  const auto r = ev.run(x);
  const auto walk = ev.quantized().walk.with_oracle_coins(x);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(walk.szegedy_matrix());
  const double t = static_cast<double>(r.counter_size);
  // Local maxima above 1e-3 must lie within one bin of some arcsin(lambda) mod pi.
  for (std::size_t k = 0; k < r.counter_size; ++k) {
    const double pk = r.distribution[k];
    const double prev = r.distribution[(k + r.counter_size - 1) % r.counter_size];
    const double next = r.distribution[(k + 1) % r.counter_size];
    if (pk < 1e-3 || pk < prev || pk < next) continue;
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(k) / t;
    double best = INFINITY;
    for (long a = 0; a < es.eigenvalues().size(); ++a) {
      const double theta = std::asin(std::clamp(es.eigenvalues()(a), -1.0, 1.0));
      for (double target : {-theta, std::numbers::pi + theta}) {
        double diff = std::fmod(std::abs(phase - target), 2.0 * std::numbers::pi);
        diff = std::min(diff, 2.0 * std::numbers::pi - diff);
        best = std::min(best, diff);
      }
    }
    CAPTURE(k);
    CHECK(best <= 2.0 * std::numbers::pi / t + 1e-12);
  }
}
