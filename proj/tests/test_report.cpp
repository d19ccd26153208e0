#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "nandwalk/report.hpp"

using namespace nandwalk;

TEST_CASE("text flattening") {
  Json j;
  j["a"]["b"] = 1;
  j["a"]["c"] = "text";
  j["d"] = std::vector<int>{1, 2};
  j["e"] = 0.5;
  j["f"] = true;
  CHECK(to_text(j) == "a.b: 1\na.c: text\nd: [1,2]\ne: 0.5\nf: true\n");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0) == "1.0");
}

TEST_CASE("config report") {
  const auto f = balanced(3);
  const Evaluator ev(f);
  const auto j = config_json(f, ev);
  CHECK(j["formula"]["leaves"] == 8);
  CHECK(j["hamiltonian"]["vertices"] == 17);
  CHECK(j["phase_estimation"]["counter_size"] == 640);
  CHECK(j["phase_estimation"]["rule"] == "balanced");
  CHECK(j["phase_estimation"]["mode"] == "exact");
  CHECK_FALSE(j["phase_estimation"].contains("seed"));

  EvaluatorOptions opt;
  opt.mode = Mode::kSampled;
  opt.seed = 42;
  const auto js = config_json(f, Evaluator(f, opt));
  CHECK(js["phase_estimation"]["seed"] == 42);
  CHECK(js["phase_estimation"]["reps"] == 21);
}

TEST_CASE("run reports are byte-identical for identical seeds") {
  const auto f = random_formula(9, 5);
  EvaluatorOptions opt;
  opt.mode = Mode::kSampled;
  opt.seed = 17;
  const auto x = InputAssignment::from_string("101100111");
  const auto render = [&] {
    const Evaluator ev(f, opt);
    const auto r = ev.run(x);
    Json j;
    j["config"] = config_json(f, ev);
    j["run"] = run_json(ev, x, r, evaluate_classical(f, x), false);
    return j.dump(2) + to_text(j);
  };
  const std::string first = render();
  CHECK(first == render());
  CHECK(first.find("wall_seconds") == std::string::npos);
  CHECK(first.find("\"samples\"") != std::string::npos);
}

TEST_CASE("timings appear only on request") {
  const auto f = balanced(1);
  const Evaluator ev(f);
  const auto x = InputAssignment::from_string("01");
  const auto r = ev.run(x);
  CHECK(run_json(ev, x, r, 1, true).contains("wall_seconds"));
  CHECK_FALSE(run_json(ev, x, r, 1, false).contains("wall_seconds"));
}

TEST_CASE("spectral report") {
  const auto f = balanced(2);
  const auto tree = build_tree_with_tail(f);
  const auto h0 = edge_weights(tree);
  const auto r0 = analyze(tree, h0, InputAssignment::from_string("0000"));
  const auto j0 = spectral_json(r0, false);
  CHECK(j0["phi"] == 0);
  CHECK(j0.contains("zero_eigenvector"));
  CHECK_FALSE(j0.contains("eigenvalues"));
  const auto r1 = analyze(tree, h0, InputAssignment::from_string("1111"));
  const auto j1 = spectral_json(r1, true);
  CHECK(j1["phi"] == 1);
  CHECK(j1["gap"]["ok"] == true);
  CHECK(j1["eigenvalues"].size() == 9);
}
