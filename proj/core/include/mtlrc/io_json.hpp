#pragma once

#include "mtlrc/sample.hpp"
#include "mtlrc/sweeps.hpp"
#include "mtlrc/types.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace mtlrc {

using Json = nlohmann::json;

// Document schema: {"spectra": [[...],[...]], "graph": {"weights": [[...]], "eta": ...}}
Json spectra_to_json(const TaskSpectra& spectra);
TaskSpectra spectra_from_json(const Json& j);
Json graph_to_json(const GraphOperator& op);
GraphOperator graph_from_json(const Json& j);

ProblemParams params_from_json(const Json& j);
LossSpec loss_from_json(const Json& j);
ConfidenceParams confidence_from_json(const Json& j);
HypothesisFamily family_from_json(const Json& j);
PowerLawDecay decay_from_json(const Json& j);
SweepConfig sweep_config_from_json(const Json& j);
TraceComparisonConfig trace_comparison_from_json(const Json& j);
GraphComparisonConfig graph_comparison_from_json(const Json& j);

// FNV-1a hash of the canonical (compact) JSON serialization; identifies a
// configuration in CSV exports.
std::string config_hash(const Json& j);

// Sample CSV: header "task,y,x1..xp", one row per observation.
MultiTaskSample sample_from_csv(std::istream& in);
void sample_to_csv(const MultiTaskSample& sample, std::ostream& out);

Json load_json_file(const std::string& path);

}  // namespace mtlrc
