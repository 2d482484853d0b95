#pragma once

#include <span>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "udsim/aligner.hpp"
#include "udsim/hypergraph.hpp"
#include "udsim/matrix.hpp"

namespace udsim {

enum class SimErrorKind { DimensionMismatch, DegenerateReference, InsufficientData, InvalidConfig };

const char* to_string(SimErrorKind kind);

class SimilarityError : public std::runtime_error {
 public:
  SimilarityError(SimErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  SimErrorKind kind() const { return kind_; }

 private:
  SimErrorKind kind_;
};

// How an edge pair whose dependent sets are both empty is summed.
enum class EmptyDependentSum {
  zero,     // the literal empty sum
  neutral,  // 1, so leaf-headed edges still compare on their heads
};

const char* to_string(EmptyDependentSum mode);
EmptyDependentSum parse_empty_dependent_sum(std::string_view name);

struct SimConfig {
  double theta = 1.5;  // label-match bonus
  double beta = 0.2;   // height increment per level
  EmptyDependentSum empty_dependent_sum = EmptyDependentSum::zero;

  // Throws SimilarityError(InvalidConfig) unless theta >= 1 and beta >= 0.
  void validate() const;
  bool operator==(const SimConfig&) const = default;
};

// Label comparison: theta on equal labels, else 1.
inline double q(const std::string& a, const std::string& b, double theta) {
  return a == b ? theta : 1.0;
}

// s(w_i, w_j) * q(label_i, label_j); always one of {0, 1, theta}.
double sim_n(const Hypernode& vi, const Hypernode& vj, const AlignmentSet& alignment,
             const SimConfig& config);

// Head similarity times the summed similarity of all dependent cross pairs.
// Dependents are not visited when the heads do not match.
double sim_e(const Hyperedge& ei, const Hyperedge& ej, const AlignmentSet& alignment,
             const SimConfig& config);

// sim_e weighted by the heights of the two head nodes.
double sim(const Hyperedge& ei, const Hyperedge& ej, const AlignmentSet& alignment,
           const SimConfig& config, double hi, double hj);

struct SimilarityMatrix {
  Matrix values;  // row i = source edge e_i, column j = target edge e_j
  std::string src_id;
  std::string tgt_id;
  SimConfig config;

  std::size_t rows() const { return values.rows(); }
  std::size_t cols() const { return values.cols(); }
  bool operator==(const SimilarityMatrix&) const = default;
};

// Rows may be evaluated on `jobs` threads; each entry is computed
// independently, so the result does not depend on the thread count.
SimilarityMatrix build_matrix(const Hypergraph& src, const Hypergraph& tgt,
                              const AlignmentSet& alignment, const SimConfig& config,
                              unsigned jobs = 1);

// Sum of all entries over (n + m).
double score(const SimilarityMatrix& matrix);

// Score of a sentence against itself under the exact aligner.
double self_score(const DepTree& tree, const SimConfig& config, bool case_fold = true);

double normalized_score(double pair_score, double en_en_score);

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation (n - 1)
};

MeanSd mean_sd(std::span<const double> values);

// Structured document: n, m, src_id, tgt_id, config, values.
nlohmann::json to_json(const SimConfig& config);
SimConfig sim_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const SimilarityMatrix& matrix);
SimilarityMatrix matrix_from_json(const nlohmann::json& doc);

// Tab-separated rows, 17 significant digits.
std::string to_tsv(const Matrix& values);

// %.17g, the machine-format precision used by every export.
std::string format_double(double v);

}  // namespace udsim
