#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "udsim/aligner.hpp"
#include "udsim/kernels.hpp"
#include "udsim/similarity.hpp"

namespace udsim::cli {

enum class OutputFormat { tsv, doc };

// Everything that determines a run's output. Loaded from a JSON document,
// then overridden by command-line flags; the effective value is echoed into
// every output header.
struct RunConfig {
  SimConfig sim;
  KernelConfig kernel;
  AlignerConfig aligner;
  bool strip_deprel_subtypes = false;
  unsigned jobs = 1;
  bool strict = false;
  OutputFormat format = OutputFormat::tsv;
  std::filesystem::path output;      // empty: stdout
  std::filesystem::path matrix_dir;  // score: where per-pair matrices go

  void validate() const;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws ConfigError on unknown keys or invalid values.
RunConfig run_config_from_json(const nlohmann::json& doc);
RunConfig load_run_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& config);

}  // namespace udsim::cli
