#include "udsim/similarity.hpp"

#include <cmath>
#include <cstdio>

#include "udsim/parallel.hpp"

namespace udsim {

const char* to_string(SimErrorKind kind) {
  switch (kind) {
    case SimErrorKind::DimensionMismatch: return "DimensionMismatch";
    case SimErrorKind::DegenerateReference: return "DegenerateReference";
    case SimErrorKind::InsufficientData: return "InsufficientData";
    case SimErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

const char* to_string(EmptyDependentSum mode) {
  return mode == EmptyDependentSum::zero ? "zero" : "neutral";
}

EmptyDependentSum parse_empty_dependent_sum(std::string_view name) {
  if (name == "zero") return EmptyDependentSum::zero;
  if (name == "neutral") return EmptyDependentSum::neutral;
  throw SimilarityError(SimErrorKind::InvalidConfig,
                        "empty_dependent_sum must be 'zero' or 'neutral', got '" +
                            std::string(name) + "'");
}

void SimConfig::validate() const {
  if (!(theta >= 1.0))
    throw SimilarityError(SimErrorKind::InvalidConfig, "theta must be >= 1");
  if (!(beta >= 0.0)) throw SimilarityError(SimErrorKind::InvalidConfig, "beta must be >= 0");
}

double sim_n(const Hypernode& vi, const Hypernode& vj, const AlignmentSet& alignment,
             const SimConfig& config) {
  if (s(alignment, vi.token_index, vj.token_index) == 0) return 0.0;
  return q(vi.label, vj.label, config.theta);
}

double sim_e(const Hyperedge& ei, const Hyperedge& ej, const AlignmentSet& alignment,
             const SimConfig& config) {
  const double head = sim_n(ei.head, ej.head, alignment, config);
  if (head == 0.0) return 0.0;
  if (config.empty_dependent_sum == EmptyDependentSum::neutral && ei.dependents.empty() &&
      ej.dependents.empty())
    return head;
  double deps = 0.0;
  for (const auto& dk : ei.dependents)
    for (const auto& dl : ej.dependents) deps += sim_n(dk, dl, alignment, config);
  return head * deps;
}

double sim(const Hyperedge& ei, const Hyperedge& ej, const AlignmentSet& alignment,
           const SimConfig& config, double hi, double hj) {
  // hi * hj first: commutative, so M(A,B) is exactly M(B,A) transposed.
  return sim_e(ei, ej, alignment, config) * (hi * hj);
}

SimilarityMatrix build_matrix(const Hypergraph& src, const Hypergraph& tgt,
                              const AlignmentSet& alignment, const SimConfig& config,
                              unsigned jobs) {
  config.validate();
  if (alignment.src_len() != src.size() || alignment.tgt_len() != tgt.size())
    throw SimilarityError(SimErrorKind::DimensionMismatch,
                          "alignment is " + std::to_string(alignment.src_len()) + "x" +
                              std::to_string(alignment.tgt_len()) + " but sentences are " +
                              std::to_string(src.size()) + "x" + std::to_string(tgt.size()));

  const auto hs = src.heights(config.beta);
  const auto ht = tgt.heights(config.beta);
  SimilarityMatrix out{Matrix(src.size(), tgt.size()), src.sent_id(), tgt.sent_id(), config};
  parallel_for(src.size(), jobs, [&](std::size_t i) {
    for (std::size_t j = 0; j < tgt.size(); ++j)
      out.values(i, j) = sim(src.edge(i), tgt.edge(j), alignment, config, hs[i], ht[j]);
  });
  return out;
}

double score(const SimilarityMatrix& matrix) {
  const auto n = matrix.rows(), m = matrix.cols();
  if (n == 0 || m == 0)
    throw SimilarityError(SimErrorKind::DimensionMismatch, "score needs a non-empty matrix");
  double total = 0.0;
  for (double v : matrix.values.data()) total += v;
  return total / static_cast<double>(n + m);
}

double self_score(const DepTree& tree, const SimConfig& config, bool case_fold) {
  AlignerConfig exact;
  exact.case_fold = case_fold;
  const Hypergraph g(tree);
  return score(build_matrix(g, g, align(tree, tree, exact), config));
}

double normalized_score(double pair_score, double en_en_score) {
  if (!(en_en_score > 0.0))
    throw SimilarityError(SimErrorKind::DegenerateReference,
                          "reference self-score is zero; cannot normalize");
  return pair_score / en_en_score;
}

MeanSd mean_sd(std::span<const double> values) {
  if (values.size() < 2)
    throw SimilarityError(SimErrorKind::InsufficientData,
                          "mean/sd needs at least 2 values, got " + std::to_string(values.size()));
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

nlohmann::json to_json(const SimConfig& config) {
  return {{"theta", config.theta},
          {"beta", config.beta},
          {"empty_dependent_sum", to_string(config.empty_dependent_sum)}};
}

SimConfig sim_config_from_json(const nlohmann::json& doc) {
  SimConfig c;
  for (const auto& [key, value] : doc.items()) {
    if (key == "theta") c.theta = value.get<double>();
    else if (key == "beta") c.beta = value.get<double>();
    else if (key == "empty_dependent_sum")
      c.empty_dependent_sum = parse_empty_dependent_sum(value.get<std::string>());
    else
      throw SimilarityError(SimErrorKind::InvalidConfig, "unknown config key '" + key + "'");
  }
  c.validate();
  return c;
}

nlohmann::json to_json(const SimilarityMatrix& matrix) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    auto r = matrix.values.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return {{"n", matrix.rows()},       {"m", matrix.cols()},
          {"src_id", matrix.src_id},  {"tgt_id", matrix.tgt_id},
          {"config", to_json(matrix.config)}, {"values", std::move(rows)}};
}

SimilarityMatrix matrix_from_json(const nlohmann::json& doc) {
  SimilarityMatrix out;
  const auto n = doc.at("n").get<std::size_t>();
  const auto m = doc.at("m").get<std::size_t>();
  out.src_id = doc.at("src_id").get<std::string>();
  out.tgt_id = doc.at("tgt_id").get<std::string>();
  out.config = sim_config_from_json(doc.at("config"));
  const auto& rows = doc.at("values");
  if (rows.size() != n)
    throw SimilarityError(SimErrorKind::DimensionMismatch, "values has wrong number of rows");
  out.values = Matrix(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != m)
      throw SimilarityError(SimErrorKind::DimensionMismatch,
                            "row " + std::to_string(i) + " has wrong length");
    for (std::size_t j = 0; j < m; ++j) out.values(i, j) = rows[i][j].get<double>();
  }
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_tsv(const Matrix& values) {
  std::string out;
  for (std::size_t i = 0; i < values.rows(); ++i) {
    for (std::size_t j = 0; j < values.cols(); ++j) {
      if (j) out += '\t';
      out += format_double(values(i, j));
    }
    out += '\n';
  }
  return out;
}

}  // namespace udsim
