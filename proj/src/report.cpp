#include "nandwalk/report.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace nandwalk {

namespace {

Json number(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

void flatten(std::ostream& os, const std::string& prefix, const Json& j) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      flatten(os, prefix.empty() ? key : prefix + "." + key, value);
    }
    return;
  }
  os << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
}

}  // namespace

std::string format_number(double v) { return Json(v).dump(); }

Json config_json(const FormulaAst& ast, const Evaluator& ev) {
  const auto& st = ev.stats();
  const auto& cfg = ev.config();
  Json j;
  j["formula"]["leaves"] = st.leaf_count;
  j["formula"]["variables"] = ast.num_vars();
  j["formula"]["depth"] = st.depth;
  j["formula"]["max_fanin"] = ast.max_fanin();
  j["formula"]["sigma_minus"] = st.sigma_minus;
  j["formula"]["sigma_plus"] = st.sigma_plus;
  j["formula"]["approx_balanced"] = st.approx_balanced;
  j["formula"]["perfectly_balanced"] = st.perfectly_balanced;
  j["hamiltonian"]["beta"] = ev.h0().beta();
  j["hamiltonian"]["vertices"] = ev.tree().vertex_count();
  j["hamiltonian"]["tail_weight"] = ev.h0().tail_weight();
  j["hamiltonian"]["norm_bound"] = norm_upper_bound(ev.h0());
  j["hamiltonian"]["nh"] = ev.quantized().nh;
  j["walk"]["dimension"] = ev.quantized().walk.dimension();
  j["walk"]["power_iterations"] = ev.quantized().principal.iterations;
  j["phase_estimation"]["counter_size"] = cfg.counter_size;
  j["phase_estimation"]["rule"] = cfg.balanced_rule ? "balanced" : "general";
  j["phase_estimation"]["counter_constant"] = cfg.counter_constant;
  j["phase_estimation"]["precision"] = cfg.precision;
  j["phase_estimation"]["error_budget"] = cfg.error_budget;
  j["phase_estimation"]["threshold"] = cfg.threshold;
  j["phase_estimation"]["mode"] = to_string(cfg.mode);
  if (cfg.mode == Mode::kSampled) {
    j["phase_estimation"]["reps"] = cfg.reps;
    j["phase_estimation"]["seed"] = cfg.seed;
  }
  return j;
}

Json run_json(const Evaluator& ev, const InputAssignment& x, const RunResult& r,
              int classical, bool timings) {
  Json j;
  j["input"] = x.to_string();
  j["decision"] = r.decision;
  j["classical"] = classical;
  j["acceptance"] = r.acceptance;
  j["mass_zero"] = r.mass_zero;
  j["mass_half"] = r.mass_half;
  if (ev.config().mode == Mode::kSampled) {
    j["samples"] = r.samples;
    j["zero_fraction"] = r.zero_fraction;
  }
  j["queries"] = count_queries(r);
  j["mean_queries"] = r.mean_queries;
  j["final_norm"] = r.final_norm;
  if (timings) j["wall_seconds"] = r.wall_seconds;
  return j;
}

Json spectral_json(const SpectralReport& r, bool eigenvalues) {
  Json j;
  j["input"] = r.input;
  j["phi"] = r.value;
  j["passed"] = r.passed();
  j["symmetry"]["asymmetry"] = r.asymmetry;
  j["symmetry"]["ok"] = r.symmetry_ok;
  j["eigensolver"]["reconstruction"] = r.reconstruction_residual;
  j["eigensolver"]["orthonormality"] = r.orthonormality_residual;
  j["kernel"]["dimension"] = r.support.kernel_dimension;
  j["kernel"]["max_amplitude_on_one_vertices"] = r.support.max_amplitude;
  j["kernel"]["ok"] = r.support.passed;
  if (r.value == 0) {
    j["zero_eigenvector"]["residual"] = r.zero_residual;
    j["zero_eigenvector"]["overlap"] = r.zero_overlap;
    j["zero_eigenvector"]["root_ratio"] = r.root_ratio;
    j["zero_eigenvector"]["root_bound"] = r.root_bound;
    j["zero_eigenvector"]["ok"] = r.zero_eigenvector_ok;
  } else {
    j["gap"]["min"] = number(r.min_gap);
    j["gap"]["bound"] = r.gap_bound;
    j["gap"]["ok"] = r.gap_ok;
  }
  if (eigenvalues) j["eigenvalues"] = r.eigenvalues;
  return j;
}

std::string to_text(const Json& j) {
  std::ostringstream os;
  write_text(os, j);
  return os.str();
}

void write_text(std::ostream& os, const Json& j) { flatten(os, "", j); }

}  // namespace nandwalk
