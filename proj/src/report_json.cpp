#include "blockacs/report_json.hpp"

#include "blockacs/errors.hpp"

#include <set>
#include <sstream>
#include <iomanip>

namespace blockacs {

namespace {

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (Index k = 0; k < v.size(); ++k) out.push_back(v(k));
  return out;
}

Json matrix_rows(const Matrix& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json one_based(const std::vector<int>& idx) {
  Json out = Json::array();
  for (int i : idx) out.push_back(i + 1);
  return out;
}

}  // namespace

Json to_json(const SupportSet& support) { return Json(support.one_based()); }

Json to_json(const RipReport& report) {
  return Json{{"level", report.level},
              {"delta", report.delta},
              {"mode", std::string(to_string(report.mode))},
              {"worst_support", to_json(report.worst_support)},
              {"supports_examined", report.supports_examined}};
}

Json to_json(const CodingResult& result) {
  return Json{{"method", std::string(to_string(result.method))},
              {"support", to_json(result.code.support)},
              {"selected", to_json(result.selected)},
              {"code", vector_json(result.code.values)},
              {"residual_norm", result.residual_norm}};
}

Json to_json(const EquivalenceCertificate& certificate) {
  Json pi = Json::array();
  for (int j : certificate.permutation.pi) pi.push_back(j < 0 ? Json(nullptr) : Json(j + 1));
  Json blocks = Json::array();
  for (const auto& d : certificate.diagonal.blocks) blocks.push_back(matrix_rows(d));
  return Json{{"status", std::string(to_string(certificate.status))},
              {"pi", std::move(pi)},
              {"D_blocks", std::move(blocks)},
              {"residual", certificate.residual},
              {"block_residuals", certificate.block_residuals},
              {"unmatched", one_based(certificate.match.unmatched)},
              {"ambiguous", one_based(certificate.match.ambiguous)},
              {"collisions", one_based(certificate.match.collisions)}};
}

Json to_json(const KappaResult& result) {
  Json probes = Json::array();
  for (const auto& T : result.probe_supports) probes.push_back(to_json(T));
  return Json{{"support", to_json(result.source)},
              {"kappa", to_json(result.kappa)},
              {"consistent", result.consistent},
              {"agreeing_probes", result.agreeing_probes},
              {"n_probes", result.probe_supports.size()},
              {"max_residual", result.max_residual},
              {"probe_supports", std::move(probes)}};
}

Json to_json(const TheoremInstanceReport& report) {
  Json supports = Json::array();
  for (const auto& c : report.supports) {
    supports.push_back(Json{{"support", to_json(c.support)},
                            {"kappa", c.kappa ? to_json(*c.kappa) : Json(nullptr)},
                            {"consistent", c.consistent},
                            {"violation", c.violation},
                            {"max_residual", c.max_residual}});
  }
  Json singletons = Json::array();
  for (const auto& k : report.kappa_singletons) singletons.push_back(k ? Json(*k + 1) : Json(nullptr));
  Json pi = Json::array();
  for (int j : report.certificate.permutation.pi) pi.push_back(j < 0 ? Json(nullptr) : Json(j + 1));
  return Json{{"s", report.s},
              {"rip", to_json(report.rip)},
              {"rip_hypothesis", report.rip_hypothesis},
              {"hypothesis", Json{{"holds", report.hypothesis_holds}, {"supports", std::move(supports)}}},
              {"conclusion", to_json(report.certificate)},
              {"agreement", Json{{"agrees", report.agreement},
                                 {"kappa_singletons", std::move(singletons)},
                                 {"pi", std::move(pi)}}}};
}

Json to_json(const ExperimentConfig& c) {
  return Json{{"structure", Json{{"K", c.structure.K}, {"alpha", c.structure.alpha},
                                 {"beta", c.structure.beta}, {"s", c.structure.s}}},
              {"ambient_dim", c.ambient_dim},
              {"n_samples", c.n_samples},
              {"seed", c.seed},
              {"noise_level", c.noise_level},
              {"learner_iterations", c.learner_iterations},
              {"tolerances", Json{{"rank", c.tolerances.rank},
                                  {"certificate", c.tolerances.certificate},
                                  {"coding", c.tolerances.coding}}},
              {"rip_mode", c.rip_exact ? "exact" : "sampled"},
              {"rip_samples", c.rip_samples},
              {"dictionary_mode", std::string(to_string(c.dictionary_mode))},
              {"coefficient_scale", c.coefficient_scale},
              {"learner_init", std::string(to_string(c.learner_init))},
              {"init_trials", c.init_trials},
              {"max_dictionary_retries", c.max_dictionary_retries}};
}

Json learn_trace_json(const LearnResult& result) {
  Json events = Json::array();
  for (const auto& e : result.events) {
    events.push_back(Json{{"iteration", e.iteration}, {"block", e.block + 1}, {"kind", e.kind},
                          {"sample", e.sample < 0 ? Json(nullptr) : Json(e.sample + 1)}});
  }
  return Json{{"objective", result.objective},
              {"events", std::move(events)},
              {"converged", result.converged},
              {"underdetermined", result.underdetermined},
              {"init", Json{{"mode", std::string(to_string(result.init.mode))},
                            {"trials_used", result.init.trials_used},
                            {"subspaces_found", result.init.subspaces_found},
                            {"block_spans_found", result.init.block_spans_found},
                            {"random_blocks", result.init.random_blocks}}}};
}

Json to_json(const ExperimentReport& report, bool include_timing) {
  Json out{{"config", to_json(report.config)}};
  if (report.generated) {
    out["rip"] = to_json(report.generated->rip);
    out["dictionary"] = Json{{"seed_used", report.generated->seed_used},
                             {"retries", report.generated->retries}};
  }
  if (report.learned) {
    out["trace"] = learn_trace_json(*report.learned);
    out["coding_residuals"] = report.learned->sample_residuals;
  }
  if (report.certificate) out["certificate"] = to_json(*report.certificate);
  Json errors = Json::array();
  for (const auto& e : report.errors) {
    errors.push_back(Json{{"stage", e.stage}, {"kind", e.kind}, {"message", e.message}});
  }
  out["errors"] = std::move(errors);
  if (include_timing) out["wall_clock_seconds"] = report.wall_clock_seconds;
  return out;
}

namespace {

template <typename T>
T read_field(const Json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ArgumentError(std::string("config field \"") + key + "\" has the wrong type");
  }
}

std::uint64_t read_seed(const Json& doc, const char* key, std::uint64_t fallback) {
  if (!doc.contains(key)) return fallback;
  const Json& v = doc.at(key);
  if (!v.is_number_unsigned()) throw ArgumentError(std::string("config field \"") + key + "\" must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

int read_int(const Json& doc, const char* key, int fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc.at(key).is_number_integer()) throw ArgumentError(std::string("config field \"") + key + "\" must be an integer");
  return doc.at(key).get<int>();
}

void reject_unknown(const Json& doc, std::initializer_list<const char*> known, const char* where) {
  if (!doc.is_object()) throw ArgumentError(std::string(where) + " must be a JSON object");
  std::set<std::string> names(known.begin(), known.end());
  for (const auto& [key, value] : doc.items()) {
    if (!names.count(key)) throw ArgumentError(std::string("unknown field \"") + key + "\" in " + where);
  }
}

}  // namespace

ExperimentConfig experiment_config_from_json(const Json& doc) {
  reject_unknown(doc,
                 {"structure", "ambient_dim", "n_samples", "seed", "noise_level", "learner_iterations",
                  "tolerances", "rip_mode", "rip_samples", "dictionary_mode", "coefficient_scale",
                  "learner_init", "init_trials", "max_dictionary_retries"},
                 "config");
  ExperimentConfig c;
  if (doc.contains("structure")) {
    const Json& s = doc.at("structure");
    reject_unknown(s, {"K", "alpha", "beta", "s"}, "structure");
    c.structure.K = read_int(s, "K", c.structure.K);
    c.structure.alpha = read_int(s, "alpha", c.structure.alpha);
    c.structure.beta = read_int(s, "beta", c.structure.beta);
    c.structure.s = read_int(s, "s", c.structure.s);
  }
  c.ambient_dim = read_int(doc, "ambient_dim", static_cast<int>(c.ambient_dim));
  c.n_samples = read_int(doc, "n_samples", c.n_samples);
  c.seed = read_seed(doc, "seed", c.seed);
  c.noise_level = read_field<double>(doc, "noise_level", c.noise_level);
  c.learner_iterations = read_int(doc, "learner_iterations", c.learner_iterations);
  if (doc.contains("tolerances")) {
    const Json& t = doc.at("tolerances");
    reject_unknown(t, {"rank", "certificate", "coding"}, "tolerances");
    c.tolerances.rank = read_field<double>(t, "rank", c.tolerances.rank);
    c.tolerances.certificate = read_field<double>(t, "certificate", c.tolerances.certificate);
    c.tolerances.coding = read_field<double>(t, "coding", c.tolerances.coding);
  }
  const std::string rip_mode = read_field<std::string>(doc, "rip_mode", c.rip_exact ? "exact" : "sampled");
  if (rip_mode != "exact" && rip_mode != "sampled") throw ArgumentError("rip_mode must be \"exact\" or \"sampled\"");
  c.rip_exact = rip_mode == "exact";
  c.rip_samples = read_seed(doc, "rip_samples", c.rip_samples);
  c.dictionary_mode = parse_dictionary_mode(
      read_field<std::string>(doc, "dictionary_mode", std::string(to_string(c.dictionary_mode))));
  c.coefficient_scale = read_field<double>(doc, "coefficient_scale", c.coefficient_scale);
  c.learner_init = parse_learner_init(read_field<std::string>(doc, "learner_init", std::string(to_string(c.learner_init))));
  c.init_trials = read_int(doc, "init_trials", c.init_trials);
  c.max_dictionary_retries = read_int(doc, "max_dictionary_retries", c.max_dictionary_retries);
  c.validate();
  return c;
}

std::string trace_csv(const LearnResult& result) {
  std::ostringstream out;
  out << "iteration,objective\n" << std::setprecision(17);
  for (std::size_t k = 0; k < result.objective.size(); ++k) out << k << ',' << result.objective[k] << '\n';
  return out.str();
}

}  // namespace blockacs
