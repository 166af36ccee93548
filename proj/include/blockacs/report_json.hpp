#pragma once

#include "blockacs/coding.hpp"
#include "blockacs/equivalence.hpp"
#include "blockacs/experiment.hpp"
#include "blockacs/learn.hpp"
#include "blockacs/rip.hpp"

#include "json.hpp"

#include <string>

namespace blockacs {

using Json = nlohmann::ordered_json;

// All block indices in these documents are 1-based.
Json to_json(const SupportSet& support);
Json to_json(const RipReport& report);
Json to_json(const CodingResult& result);
Json to_json(const EquivalenceCertificate& certificate);
Json to_json(const KappaResult& result);
Json to_json(const TheoremInstanceReport& report);
Json to_json(const ExperimentConfig& config);
Json to_json(const ExperimentReport& report, bool include_timing = true);
Json learn_trace_json(const LearnResult& result);

// Field names mirror ExperimentConfig; missing fields keep their defaults.
// Throws ArgumentError on unknown fields or ill-typed values.
ExperimentConfig experiment_config_from_json(const Json& doc);

// "iteration,objective" rows.
std::string trace_csv(const LearnResult& result);

}  // namespace blockacs
