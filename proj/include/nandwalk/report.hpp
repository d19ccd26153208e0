#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "nandwalk/spectral.hpp"
#include "nandwalk/walksim.hpp"

namespace nandwalk {

using Json = nlohmann::ordered_json;

// Formula identity and the configuration an evaluator was built with.
Json config_json(const FormulaAst& ast, const Evaluator& ev);

// Run record. Timing fields appear only when `timings` is set so that
// identical seeds give byte-identical reports.
Json run_json(const Evaluator& ev, const InputAssignment& x, const RunResult& r,
              int classical, bool timings);

Json spectral_json(const SpectralReport& r, bool eigenvalues);

// "key: value" lines; nested objects flatten to dotted keys, arrays print as
// compact JSON, strings unquoted.
std::string to_text(const Json& j);
void write_text(std::ostream& os, const Json& j);

// Shortest round-trip representation, as used in the JSON output.
std::string format_number(double v);

}  // namespace nandwalk
