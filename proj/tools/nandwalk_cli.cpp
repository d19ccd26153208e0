// nandwalk: evaluate NAND formulas by simulated quantum-walk phase estimation.
//
//   nandwalk eval   --generate balanced:3 --input 00010111
//   nandwalk verify --formula phi.nand
//   nandwalk bench  --family balanced --sizes 4,16,64,256
//
// Exit codes: 0 ok, 1 verification failure, 2 parse error, 3 dimension error,
// 4 size over threshold, 5 other usage or I/O error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nandwalk/baseline.hpp"
#include "nandwalk/formula.hpp"
#include "nandwalk/hamiltonian.hpp"
#include "nandwalk/report.hpp"
#include "nandwalk/spectral.hpp"
#include "nandwalk/szegedy.hpp"
#include "nandwalk/walksim.hpp"

using namespace nandwalk;

namespace {

enum ExitCode { kOk = 0, kVerifyFailed = 1, kParse = 2, kDimension = 3, kSize = 4, kUsage = 5 };

struct Source {
  std::string formula_file;
  std::string family;
  std::uint64_t seed = 0;
};

void add_source(CLI::App* cmd, Source& src) {
  auto* f = cmd->add_option("--formula", src.formula_file, "Formula file");
  auto* g = cmd->add_option("--generate", src.family,
                            "Generated family: balanced:n, chain:N or random:N");
  f->excludes(g);
  g->excludes(f);
  cmd->add_option("--seed", src.seed, "Seed for random families and sampling");
}

FormulaAst load(const Source& src) {
  if (!src.formula_file.empty()) {
    std::ifstream in(src.formula_file);
    if (!in) throw std::runtime_error("cannot read " + src.formula_file);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_formula(ss.str());
  }
  if (!src.family.empty()) return generate(FamilySpec::parse(src.family, src.seed));
  throw std::runtime_error("one of --formula or --generate is required");
}

std::string describe(const Source& src) {
  if (!src.formula_file.empty()) return src.formula_file;
  return FamilySpec::parse(src.family, src.seed).to_string();
}

void write_json(const std::string& path, const Json& j) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  Source src;
  std::string input;
  bool all_inputs = false;
  std::string mode = "exact";
  std::size_t reps = kDefaultReps;
  double beta = kDefaultBeta;
  std::size_t counter_size = 0;
  std::string json_path;
  std::string matrix_path;
  bool timings = false;
  bool distribution = false;
};

int cmd_eval(const EvalArgs& a) {
  const FormulaAst ast = load(a.src);
  EvaluatorOptions opt;
  opt.beta = a.beta;
  opt.mode = parse_mode(a.mode);
  opt.reps = a.reps;
  opt.seed = a.src.seed;
  opt.full_distribution = a.distribution;
  if (a.counter_size) opt.counter_size = a.counter_size;

  std::vector<InputAssignment> inputs;
  if (a.all_inputs) {
    if (ast.num_vars() > kMaxTruthTableVars) {
      throw SizeError("--all-inputs needs at most " + std::to_string(kMaxTruthTableVars) +
                      " variables");
    }
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << ast.num_vars()); ++c) {
      inputs.push_back(InputAssignment::from_index(c, ast.num_vars()));
    }
  } else {
    if (a.input.empty()) throw std::runtime_error("--input or --all-inputs is required");
    inputs.push_back(InputAssignment::from_string(a.input));
    if (inputs.back().size() != ast.num_vars()) {
      throw DimensionError("input has " + std::to_string(inputs.back().size()) +
                           " bits but the formula has " + std::to_string(ast.num_vars()) +
                           " variables");
    }
  }

  const Evaluator ev(ast, opt);
  if (!a.matrix_path.empty()) {
    std::ofstream out(a.matrix_path);
    if (!out) throw std::runtime_error("cannot write " + a.matrix_path);
    const auto h = inputs.size() == 1 ? apply_input(ev.h0(), ev.tree(), inputs[0]) : ev.h0();
    write_coordinate(out, h);
  }

  Json doc;
  doc["command"] = "eval";
  doc["source"] = describe(a.src);
  doc["config"] = config_json(ast, ev);
  std::cout << to_text(Json{{"source", doc["source"]}}) << to_text(doc["config"]);
  Json runs = Json::array();
  std::size_t mismatches = 0;
  for (const auto& x : inputs) {
    const RunResult r = ev.run(x);
    const int classical = evaluate_classical(ast, x);
    if (r.decision != classical) ++mismatches;
    Json rj = run_json(ev, x, r, classical, a.timings);
    if (a.distribution) rj["distribution"] = r.distribution;
    std::cout << '\n' << to_text(rj);
    runs.push_back(std::move(rj));
  }
  if (inputs.size() > 1) {
    std::cout << "\ninputs: " << inputs.size() << "\nmismatches: " << mismatches << '\n';
  }
  doc["runs"] = std::move(runs);
  write_json(a.json_path, doc);
  return kOk;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  Source src;
  double beta = kDefaultBeta;
  std::size_t dense_threshold = kDefaultDenseThreshold;
  std::size_t samples = 256;
  std::string json_path;
  double corrupt_tail = 1.0;
  bool walk = false;
  bool eigenvalues = false;
};

int cmd_verify(const VerifyArgs& a) {
  const FormulaAst ast = load(a.src);
  const GateTree tree = build_tree_with_tail(ast);
  if (tree.vertex_count() > a.dense_threshold) {
    throw SizeError(std::to_string(tree.vertex_count()) +
                    " vertices exceed the dense threshold " +
                    std::to_string(a.dense_threshold));
  }
  WeightedAdjacency h0 = edge_weights(tree, a.beta);
  if (a.corrupt_tail != 1.0) {
    h0 = h0.with_scaled_edge(GateTree::kTailOuter, GateTree::kTailInner, a.corrupt_tail);
  }

  std::vector<InputAssignment> inputs;
  const std::uint32_t v = ast.num_vars();
  const bool exhaustive = v <= 16;
  if (exhaustive) {
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << v); ++c) {
      inputs.push_back(InputAssignment::from_index(c, v));
    }
  } else {
    Rng rng(a.src.seed);
    for (std::size_t i = 0; i < a.samples; ++i) {
      std::vector<std::uint8_t> bits(v);
      for (auto& b : bits) b = static_cast<std::uint8_t>(rng.below(2));
      inputs.emplace_back(std::move(bits));
    }
  }

  std::optional<QuantizedWalk> qw;
  if (a.walk) qw.emplace(quantize(h0, tree));

  Json doc;
  doc["command"] = "verify";
  doc["source"] = describe(a.src);
  doc["beta"] = a.beta;
  doc["vertices"] = tree.vertex_count();
  doc["sweep"] = exhaustive ? "exhaustive" : "sampled";
  doc["gap_bound"] = spectral_gap_bound(tree, a.beta);
  if (a.corrupt_tail != 1.0) doc["corrupt_tail"] = a.corrupt_tail;
  std::cout << to_text(doc);

  std::size_t failures = 0;
  Json results = Json::array();
  for (const auto& x : inputs) {
    const SpectralReport r = analyze(tree, h0, x, a.dense_threshold);
    Json rj = spectral_json(r, a.eigenvalues);
    bool ok = r.passed();
    if (qw) {
      const CoinedWalk w = qw->walk.with_oracle_coins(x);
      const auto corr = verify_correspondence(w, w.szegedy_matrix());
      rj["walk"]["max_residual"] = corr.max_residual;
      rj["walk"]["max_subspace_overlap"] = corr.max_subspace_overlap;
      rj["walk"]["max_arcsin_error"] = corr.max_arcsin_error;
      rj["walk"]["ok"] = corr.passed();
      ok = ok && corr.passed();
      rj["passed"] = ok;
    }
    if (!ok) ++failures;
    std::cout << x.to_string() << " phi=" << r.value << ' ' << (ok ? "pass" : "FAIL");
    if (r.value == 0) {
      std::cout << " residual=" << format_number(r.zero_residual)
                << " overlap=" << format_number(r.zero_overlap);
    } else {
      std::cout << " min_gap=" << (std::isfinite(r.min_gap) ? format_number(r.min_gap) : "inf");
    }
    std::cout << " kernel=" << r.support.kernel_dimension << '\n';
    results.push_back(std::move(rj));
  }
  std::cout << "inputs: " << inputs.size() << "\nfailures: " << failures << '\n';
  doc["inputs"] = inputs.size();
  doc["failures"] = failures;
  doc["results"] = std::move(results);
  write_json(a.json_path, doc);
  return failures ? kVerifyFailed : kOk;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
  std::string family = "balanced";
  std::vector<std::size_t> sizes{1, 4, 16, 64, 256};
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  double beta = kDefaultBeta;
  std::size_t quantum_max = 4096;
  std::string json_path;
};

FormulaAst bench_formula(const std::string& family, std::size_t n, std::uint64_t seed) {
  if (family == "balanced") {
    std::size_t depth = 0;
    while ((std::size_t{1} << depth) < n) ++depth;
    if ((std::size_t{1} << depth) != n) {
      throw std::invalid_argument("balanced sizes must be powers of two");
    }
    return balanced(depth);
  }
  return generate(FamilySpec::parse(family + ":" + std::to_string(n), seed));
}

int cmd_bench(const BenchArgs& a) {
  std::vector<double> qn, qv, cn, cv;
  Json rows = Json::array();
  std::printf("%8s %12s %12s %10s\n", "N", "quantum", "classical", "T");
  for (auto n : a.sizes) {
    const FormulaAst ast = bench_formula(a.family, n, a.seed);
    Json row;
    row["N"] = ast.size();
    std::optional<std::size_t> quantum;
    std::size_t counter = 0;
    if (ast.size() <= a.quantum_max) {
      EvaluatorOptions opt;
      opt.beta = a.beta;
      const Evaluator ev(ast, opt);
      counter = ev.config().counter_size;
      quantum = counter - 1;
      row["quantum_queries"] = *quantum;
      row["counter_size"] = counter;
      if (*quantum > 0) {
        qn.push_back(static_cast<double>(ast.size()));
        qv.push_back(static_cast<double>(*quantum));
      }
    }
    const double classical = mean_alpha_beta_queries(ast, a.trials, a.seed);
    row["classical_queries"] = classical;
    cn.push_back(static_cast<double>(ast.size()));
    cv.push_back(classical);
    std::printf("%8zu %12s %12.4f %10s\n", ast.size(),
                quantum ? std::to_string(*quantum).c_str() : "-", classical,
                quantum ? std::to_string(counter).c_str() : "-");
    rows.push_back(std::move(row));
  }
  Json doc;
  doc["command"] = "bench";
  doc["family"] = a.family;
  doc["trials"] = a.trials;
  doc["seed"] = a.seed;
  doc["rows"] = std::move(rows);
  auto exponent = [](const std::vector<double>& x, const std::vector<double>& y,
                     const char* name, Json& out) {
    std::size_t distinct = 0;
    for (std::size_t i = 0; i < x.size(); ++i) distinct += (i == 0 || x[i] != x[i - 1]);
    if (distinct < 2) {
      std::printf("%s exponent: -\n", name);
      return;
    }
    const LogLogFit f = fit_loglog(x, y);
    std::printf("%s exponent: %.4f (r^2 %.6f)\n", name, f.slope, f.r_squared);
    out[name] = f.slope;
  };
  Json exps;
  exponent(qn, qv, "quantum", exps);
  exponent(cn, cv, "classical", exps);
  std::printf("classical reference exponent: %.4f\n",
              std::log2(alpha_beta_branching_factor()));
  doc["exponents"] = std::move(exps);
  write_json(a.json_path, doc);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-walk NAND formula evaluation simulator"};
  app.require_subcommand(1);

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Evaluate a formula on one input (or all inputs)");
  add_source(eval, ea.src);
  eval->add_option("--input", ea.input, "Input bits x1..xV");
  eval->add_flag("--all-inputs", ea.all_inputs, "Sweep every input");
  eval->add_option("--mode", ea.mode, "exact or sampled")->check(CLI::IsMember({"exact", "sampled"}));
  eval->add_option("--reps", ea.reps, "Repetitions in sampled mode");
  eval->add_option("--beta", ea.beta, "Weight exponent in (0, 1/2]");
  eval->add_option("--counter-size", ea.counter_size, "Override the counter size T");
  eval->add_option("--json", ea.json_path, "Write a JSON report");
  eval->add_option("--export-matrix", ea.matrix_path, "Write H(x) in coordinate format");
  eval->add_flag("--timings", ea.timings, "Include wall-clock timings");
  eval->add_flag("--distribution", ea.distribution, "Report the full outcome distribution");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Spectral checks over all (or sampled) inputs");
  add_source(verify, va.src);
  verify->add_option("--beta", va.beta, "Weight exponent in (0, 1/2]");
  verify->add_option("--dense-threshold", va.dense_threshold, "Largest dense problem");
  verify->add_option("--samples", va.samples, "Inputs to sample when V > 16");
  verify->add_option("--json", va.json_path, "Write a JSON report");
  verify->add_flag("--walk", va.walk, "Also check the walk eigen-correspondence");
  verify->add_flag("--eigenvalues", va.eigenvalues, "Include spectra in the JSON report");
  verify->add_option("--corrupt-tail", va.corrupt_tail,
                     "Test hook: scale the r''-r' weight (negative control)");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Query-count scaling table");
  bench->add_option("--family", ba.family, "balanced, chain or random")
      ->check(CLI::IsMember({"balanced", "chain", "random"}));
  bench->add_option("--sizes", ba.sizes, "Leaf counts N")->delimiter(',');
  bench->add_option("--trials", ba.trials, "Alpha-beta trials per size");
  bench->add_option("--seed", ba.seed, "Seed");
  bench->add_option("--beta", ba.beta, "Weight exponent in (0, 1/2]");
  bench->add_option("--quantum-max", ba.quantum_max, "Skip the quantum column above this N");
  bench->add_option("--json", ba.json_path, "Write a JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (eval->parsed()) return cmd_eval(ea);
    if (verify->parsed()) return cmd_verify(va);
    return cmd_bench(ba);
  } catch (const nandwalk::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const DimensionError& e) {
    std::cerr << "dimension error: " << e.what() << '\n';
    return kDimension;
  } catch (const SizeError& e) {
    std::cerr << "size error: " << e.what() << '\n';
    return kSize;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}
