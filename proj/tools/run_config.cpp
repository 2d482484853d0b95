#include "run_config.hpp"

#include <fstream>
#include <set>

namespace udsim::cli {

namespace {

void reject_unknown(const nlohmann::json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw ConfigError("unknown config key '" + where + "." + key + "'");
}

}  // namespace

void RunConfig::validate() const {
  try {
    sim.validate();
    kernel.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (sim.theta != kernel.theta) throw ConfigError("sim and kernel theta disagree");
  if (jobs == 0) throw ConfigError("jobs must be >= 1");
}

RunConfig run_config_from_json(const nlohmann::json& doc) {
  RunConfig c;
  try {
    reject_unknown(doc, {"constants", "aligner", "io", "jobs", "strict", "format",
                         "strip_deprel_subtypes"},
                   "config");
    if (doc.contains("constants")) {
      const auto& k = doc["constants"];
      reject_unknown(k, {"theta", "beta", "empty_dependent_sum", "alpha", "nu", "ck_beta", "ck_delta"},
                     "constants");
      if (k.contains("theta")) c.sim.theta = c.kernel.theta = k["theta"].get<double>();
      if (k.contains("beta")) c.sim.beta = k["beta"].get<double>();
      if (k.contains("empty_dependent_sum"))
        c.sim.empty_dependent_sum = parse_empty_dependent_sum(k["empty_dependent_sum"].get<std::string>());
      if (k.contains("alpha")) c.kernel.alpha = k["alpha"].get<double>();
      if (k.contains("nu")) c.kernel.nu = k["nu"].get<double>();
      if (k.contains("ck_beta")) c.kernel.ck_beta = k["ck_beta"].get<double>();
      if (k.contains("ck_delta")) c.kernel.ck_delta = k["ck_delta"].get<double>();
    }
    if (doc.contains("aligner")) {
      const auto& a = doc["aligner"];
      reject_unknown(a, {"backend", "lexicon_path", "file_path", "remote_url", "case_fold",
                         "timeout_ms", "retries", "max_in_flight"},
                     "aligner");
      if (a.contains("backend")) c.aligner.backend = parse_backend(a["backend"].get<std::string>());
      if (a.contains("lexicon_path")) c.aligner.lexicon_path = a["lexicon_path"].get<std::string>();
      if (a.contains("file_path")) c.aligner.file_path = a["file_path"].get<std::string>();
      if (a.contains("remote_url")) c.aligner.remote_url = a["remote_url"].get<std::string>();
      if (a.contains("case_fold")) c.aligner.case_fold = a["case_fold"].get<bool>();
      if (a.contains("timeout_ms")) c.aligner.timeout_ms = a["timeout_ms"].get<int>();
      if (a.contains("retries")) c.aligner.retries = a["retries"].get<int>();
      if (a.contains("max_in_flight")) c.aligner.max_in_flight = a["max_in_flight"].get<unsigned>();
    }
    if (doc.contains("io")) {
      const auto& io = doc["io"];
      reject_unknown(io, {"output", "matrix_dir"}, "io");
      if (io.contains("output")) c.output = io["output"].get<std::string>();
      if (io.contains("matrix_dir")) c.matrix_dir = io["matrix_dir"].get<std::string>();
    }
    if (doc.contains("jobs")) c.jobs = doc["jobs"].get<unsigned>();
    if (doc.contains("strict")) c.strict = doc["strict"].get<bool>();
    if (doc.contains("strip_deprel_subtypes"))
      c.strip_deprel_subtypes = doc["strip_deprel_subtypes"].get<bool>();
    if (doc.contains("format")) {
      auto f = doc["format"].get<std::string>();
      if (f == "tsv") c.format = OutputFormat::tsv;
      else if (f == "doc") c.format = OutputFormat::doc;
      else throw ConfigError("format must be 'tsv' or 'doc'");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return run_config_from_json(doc);
}

nlohmann::json to_json(const RunConfig& c) {
  return {
      {"constants",
       {{"theta", c.sim.theta},
        {"beta", c.sim.beta},
        {"empty_dependent_sum", to_string(c.sim.empty_dependent_sum)},
        {"alpha", c.kernel.alpha},
        {"nu", c.kernel.nu},
        {"ck_beta", c.kernel.ck_beta},
        {"ck_delta", c.kernel.ck_delta}}},
      {"aligner",
       {{"backend", to_string(c.aligner.backend)},
        {"lexicon_path", c.aligner.lexicon_path.string()},
        {"file_path", c.aligner.file_path.string()},
        {"remote_url", c.aligner.remote_url},
        {"case_fold", c.aligner.case_fold},
        {"timeout_ms", c.aligner.timeout_ms},
        {"retries", c.aligner.retries},
        {"max_in_flight", c.aligner.max_in_flight}}},
      {"io", {{"output", c.output.string()}, {"matrix_dir", c.matrix_dir.string()}}},
      {"jobs", c.jobs},
      {"strict", c.strict},
      {"format", c.format == OutputFormat::tsv ? "tsv" : "doc"},
      {"strip_deprel_subtypes", c.strip_deprel_subtypes},
  };
}

}  // namespace udsim::cli
