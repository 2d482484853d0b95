#include "udsim/kernels.hpp"

#include <cmath>

namespace udsim {

const char* to_string(KernelErrorKind kind) {
  switch (kind) {
    case KernelErrorKind::EmptySentence: return "EmptySentence";
    case KernelErrorKind::EmptyCorpus: return "EmptyCorpus";
    case KernelErrorKind::ZeroNormalizer: return "ZeroNormalizer";
    case KernelErrorKind::SentenceNotInCorpus: return "SentenceNotInCorpus";
    case KernelErrorKind::DuplicateSentenceId: return "DuplicateSentenceId";
    case KernelErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

void KernelConfig::validate() const {
  if (!(theta >= 1.0)) throw KernelError(KernelErrorKind::InvalidConfig, "theta must be >= 1");
  if (!(alpha >= 0.0)) throw KernelError(KernelErrorKind::InvalidConfig, "alpha must be >= 0");
  if (!(nu >= 0.0 && nu < 1.0))
    throw KernelError(KernelErrorKind::InvalidConfig, "nu must lie in [0, 1)");
  if (!(ck_beta >= 0.0) || !(ck_delta >= 0.0))
    throw KernelError(KernelErrorKind::InvalidConfig, "composite weights must be >= 0");
}

namespace {

double label_q(const std::string& a, const std::string& b, double theta) {
  return a == b ? theta : 1.0;
}

}  // namespace

std::vector<Bigram> extract_bigrams(const DepTree& tree) {
  std::vector<Bigram> out;
  out.reserve(tree.size());
  for (const Token& t : tree.tokens())
    out.push_back({t.head == 0 ? std::string(kRootSentinel) : tree.token(t.head).form, t.deprel,
                   t.form, t.id});
  return out;
}

double sabk(std::span<const Bigram> a, std::span<const Bigram> b, const KernelConfig& config) {
  config.validate();
  if (a.empty() || b.empty())
    throw KernelError(KernelErrorKind::EmptySentence, "SABK needs two non-empty sentences");
  double total = 0.0;
  for (const auto& x : a)
    for (const auto& y : b) {
      const int matches = (x.dependent == y.dependent ? 1 : 0) + (x.head == y.head ? 1 : 0);
      if (matches) total += matches * label_q(x.label, y.label, config.theta);
    }
  return total / static_cast<double>(a.size() + b.size());
}

double sabk(const DepTree& a, const DepTree& b, const KernelConfig& config) {
  const auto ba = extract_bigrams(a), bb = extract_bigrams(b);
  return sabk(ba, bb, config);
}

int TfIdfTable::tf(const std::string& sent_id, const std::string& form) const {
  auto it = tf_.find(sent_id);
  if (it == tf_.end())
    throw KernelError(KernelErrorKind::SentenceNotInCorpus,
                      "sentence '" + sent_id + "' is not in the tf-idf corpus");
  auto f = it->second.find(form);
  return f == it->second.end() ? 0 : f->second;
}

double TfIdfTable::idf(const std::string& form) const {
  auto it = idf_.find(form);
  return it == idf_.end() ? 0.0 : it->second;
}

TfIdfTable build_tfidf(std::span<const DepTree> corpus) {
  if (corpus.empty()) throw KernelError(KernelErrorKind::EmptyCorpus, "tf-idf corpus is empty");
  TfIdfTable table;
  std::map<std::string, int> df;
  for (const auto& tree : corpus) {
    if (tree.sent_id().empty())
      throw KernelError(KernelErrorKind::DuplicateSentenceId,
                        "tf-idf corpus sentences need a sent_id");
    auto [slot, inserted] = table.tf_.try_emplace(tree.sent_id());
    if (!inserted)
      throw KernelError(KernelErrorKind::DuplicateSentenceId,
                        "sent_id '" + tree.sent_id() + "' occurs twice in the corpus");
    auto& counts = slot->second;
    counts[kRootSentinel] = 1;
    for (const Token& t : tree.tokens()) ++counts[t.form];
    for (const auto& [form, n] : counts) ++df[form];
  }
  table.collection_size_ = corpus.size();
  const double n = static_cast<double>(corpus.size());
  for (const auto& [form, d] : df) table.idf_[form] = std::log(n / d);
  return table;
}

double normalizer(const DepTree& tree, const TfIdfTable& tfidf) {
  double sum = 0.0;
  for (const auto& bg : extract_bigrams(tree)) {
    const double wd = tfidf.tf(tree.sent_id(), bg.dependent) * tfidf.idf(bg.dependent);
    const double wh = tfidf.tf(tree.sent_id(), bg.head) * tfidf.idf(bg.head);
    sum += wd * wd + wh * wh;
  }
  return std::sqrt(sum);
}

namespace {

struct WeightedBigram {
  Bigram bigram;
  double tf_dependent;
  double tf_head;
};

std::vector<WeightedBigram> weighted(const DepTree& tree, const TfIdfTable& tfidf) {
  std::vector<WeightedBigram> out;
  for (auto& bg : extract_bigrams(tree)) {
    double td = tfidf.tf(tree.sent_id(), bg.dependent);
    double th = tfidf.tf(tree.sent_id(), bg.head);
    out.push_back({std::move(bg), td, th});
  }
  return out;
}

double sim_t(const WeightedBigram& x, const WeightedBigram& y, double theta) {
  double v = 0.0;
  if (x.bigram.dependent == y.bigram.dependent) v += x.tf_dependent * y.tf_dependent;
  if (x.bigram.head == y.bigram.head) v += x.tf_head * y.tf_head;
  return v * label_q(x.bigram.label, y.bigram.label, theta);
}

double norm_product(const DepTree& a, const DepTree& b, const TfIdfTable& tfidf) {
  const double na = normalizer(a, tfidf), nb = normalizer(b, tfidf);
  if (na == 0.0 || nb == 0.0)
    throw KernelError(KernelErrorKind::ZeroNormalizer,
                      "tf-idf normalizer is zero for '" + (na == 0.0 ? a.sent_id() : b.sent_id()) +
                          "' (every term has idf 0)");
  return na * nb;
}

double kc(const DepTree& ta, int ni, const DepTree& tb, int nj, const KernelConfig& config) {
  const Token& x = ta.token(ni);
  const Token& y = tb.token(nj);
  if (x.form != y.form || x.deprel != y.deprel) return 0.0;
  double children = 0.0;
  for (int ci : ta.children(ni))
    for (int cj : tb.children(nj)) children += kc(ta, ci, tb, cj, config);
  return config.alpha + config.nu * children;
}

struct TabkMsk {
  double tabk;
  double msk;
};

TabkMsk tabk_and_msk(const DepTree& a, const DepTree& b, const TfIdfTable& tfidf,
                     const KernelConfig& config, bool with_subtrees) {
  config.validate();
  const double denom = norm_product(a, b, tfidf);
  const auto wa = weighted(a, tfidf), wb = weighted(b, tfidf);
  double bigram_sum = 0.0, subtree_sum = 0.0;
  for (const auto& x : wa)
    for (const auto& y : wb) {
      const double st = sim_t(x, y, config.theta);
      bigram_sum += st;
      if (!with_subtrees || st <= 0.0 || x.bigram.dependent != y.bigram.dependent) continue;
      double children = 0.0;
      for (int ck : a.children(x.bigram.dependent_index))
        for (int cl : b.children(y.bigram.dependent_index))
          children += kc(a, ck, b, cl, config);
      subtree_sum += children;
    }
  const double t = bigram_sum / denom;
  return {t, t + subtree_sum / denom};
}

}  // namespace

double tabk(const DepTree& a, const DepTree& b, const TfIdfTable& tfidf,
            const KernelConfig& config) {
  return tabk_and_msk(a, b, tfidf, config, false).tabk;
}

double children_kernel(const DepTree& ta, int ni, const DepTree& tb, int nj,
                       const KernelConfig& config) {
  config.validate();
  return kc(ta, ni, tb, nj, config);
}

double msk(const DepTree& a, const DepTree& b, const TfIdfTable& tfidf,
           const KernelConfig& config) {
  return tabk_and_msk(a, b, tfidf, config, true).msk;
}

double composite_kernel(const DepTree& a, const DepTree& b, const TfIdfTable& tfidf,
                        const KernelConfig& config) {
  const auto r = tabk_and_msk(a, b, tfidf, config, true);
  return config.ck_beta * r.tabk + config.ck_delta * r.msk;
}

KernelScores all_kernels(const DepTree& a, const DepTree& b, const TfIdfTable& tfidf,
                         const KernelConfig& config) {
  KernelScores out;
  out.sabk = sabk(a, b, config);
  const auto r = tabk_and_msk(a, b, tfidf, config, true);
  out.tabk = r.tabk;
  out.msk = r.msk;
  out.ck = config.ck_beta * r.tabk + config.ck_delta * r.msk;
  return out;
}

}  // namespace udsim
