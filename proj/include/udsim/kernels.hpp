#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "udsim/conllu.hpp"

namespace udsim {

// Head form of the root token's bigram. Matches only itself.
inline constexpr const char* kRootSentinel = "⟨ROOT⟩";

enum class KernelErrorKind {
  EmptySentence,
  EmptyCorpus,
  ZeroNormalizer,
  SentenceNotInCorpus,
  DuplicateSentenceId,
  InvalidConfig,
};

const char* to_string(KernelErrorKind kind);

class KernelError : public std::runtime_error {
 public:
  KernelError(KernelErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  KernelErrorKind kind() const { return kind_; }

 private:
  KernelErrorKind kind_;
};

// {head, label, dependent}, one per token with that token as the tail node.
struct Bigram {
  std::string head;
  std::string label;
  std::string dependent;
  int dependent_index = 0;  // 1-based

  bool operator==(const Bigram&) const = default;
};

struct KernelConfig {
  double theta = 1.5;     // label bonus, shared with SimConfig
  double alpha = 1.0;     // children-kernel match constant
  double nu = 0.5;        // children-kernel decay
  double ck_beta = 0.5;   // composite weight of TABK
  double ck_delta = 0.5;  // composite weight of MSK

  void validate() const;
  bool operator==(const KernelConfig&) const = default;
};

std::vector<Bigram> extract_bigrams(const DepTree& tree);

// Sum of [s(d,d') + s(h,h')] * q(t,t') over all bigram pairs, over (m + n).
double sabk(std::span<const Bigram> a, std::span<const Bigram> b, const KernelConfig& config);
double sabk(const DepTree& a, const DepTree& b, const KernelConfig& config);

// Sentence-level term statistics. Each sentence is one document; the root
// sentinel counts as a term occurring once in every sentence, so its idf is 0.
class TfIdfTable {
 public:
  int tf(const std::string& sent_id, const std::string& form) const;
  double idf(const std::string& form) const;
  std::size_t collection_size() const { return collection_size_; }
  bool contains(const std::string& sent_id) const { return tf_.count(sent_id) != 0; }

  const std::map<std::string, std::map<std::string, int>>& tf_table() const { return tf_; }
  const std::map<std::string, double>& idf_table() const { return idf_; }

 private:
  friend TfIdfTable build_tfidf(std::span<const DepTree> corpus);
  std::map<std::string, std::map<std::string, int>> tf_;
  std::map<std::string, double> idf_;
  std::size_t collection_size_ = 0;
};

// idf(form) = ln(N / df(form)). Sentence ids must be unique and non-empty.
TfIdfTable build_tfidf(std::span<const DepTree> corpus);

// sqrt(sum_i (tf_d idf_d)^2 + (tf_h idf_h)^2) over the sentence's bigrams.
double normalizer(const DepTree& tree, const TfIdfTable& tfidf);

double tabk(const DepTree& a, const DepTree& b, const TfIdfTable& tfidf,
            const KernelConfig& config);

// Nodes are 1-based token ids in their trees.
double children_kernel(const DepTree& ta, int ni, const DepTree& tb, int nj,
                       const KernelConfig& config);

// TABK plus, for every bigram pair with a positive sim_t, the children
// kernel summed over the child pairs of the two dependents, normalized like
// TABK.
double msk(const DepTree& a, const DepTree& b, const TfIdfTable& tfidf,
           const KernelConfig& config);

double composite_kernel(const DepTree& a, const DepTree& b, const TfIdfTable& tfidf,
                        const KernelConfig& config);

struct KernelScores {
  double sabk = 0.0;
  double tabk = 0.0;
  double msk = 0.0;
  double ck = 0.0;
};

// All four in one pass over the shared tf-idf terms.
KernelScores all_kernels(const DepTree& a, const DepTree& b, const TfIdfTable& tfidf,
                         const KernelConfig& config);

}  // namespace udsim
