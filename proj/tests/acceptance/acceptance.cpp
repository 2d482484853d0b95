// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "random_trees.hpp"
#include "udsim/aligner.hpp"
#include "udsim/attention.hpp"
#include "udsim/hypergraph.hpp"
#include "udsim/kernels.hpp"
#include "udsim/pair_reorg.hpp"
#include "udsim/similarity.hpp"

using namespace udsim;

namespace {

constexpr double kOracleTol = 1e-12;
constexpr double kAttentionTol = 1e-9;
constexpr double kWorkedTol = 1e-12;
constexpr double kSymmetryTol = 1e-12;
constexpr double kCorrRTol = 0.01;
constexpr double kCorrPTol = 0.005;

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  std::string id;
  std::string name;
  double time_limit_s;  // 0: none
  std::function<Outcome()> check;
};

std::vector<Token> toks(const DepTree& t) { return {t.tokens().begin(), t.tokens().end()}; }

DepTree load(const char* name) { return read_conllu_file(testing::fixture(name)).at(0); }

AlignmentSet random_alignment(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  AlignmentSet a(n, m);
  std::bernoulli_distribution keep(0.1 + 0.5 * std::uniform_real_distribution<double>(0, 1)(rng));
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j)
      if (keep(rng)) a.insert(static_cast<int>(i), static_cast<int>(j));
  return a;
}

Matrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  std::uniform_real_distribution<double> u(-1, 1);
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = u(rng);
  return m;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Outcome ac1() {
  const std::vector<std::string> want = {
      "⟨⟨⟩, Jim_nsubj⟩",
      "⟨⟨Jim_nsubj, Tim_obl⟩, won_root⟩",
      "⟨⟨⟩, against_case⟩",
      "⟨⟨against_case⟩, Tim_obl⟩",
      "⟨⟨⟩, 吉姆_nsubj⟩",
      "⟨⟨吉姆_nsubj, 蒂姆_obj, 了_aux⟩, 打败_root⟩",
      "⟨⟨⟩, 了_aux⟩",
      "⟨⟨⟩, 蒂姆_obj⟩",
  };
  auto got = build_hypergraph(load("en1.conllu"), DependentOrder::relation_taxonomy).render_lines();
  const auto zh = build_hypergraph(load("zh1_table.conllu"), DependentOrder::relation_taxonomy).render_lines();
  got.insert(got.end(), zh.begin(), zh.end());
  std::size_t match = 0;
  for (std::size_t k = 0; k < std::min(got.size(), want.size()); ++k) match += got[k] == want[k];
  const bool ok = got.size() == 8 && match == 8;
  return {ok, std::to_string(match) + "/8 hyperedges match"};
}

Outcome ac2() {
  struct Row {
    std::string model;
    double r, p;
  };
  const std::vector<Row> published = {{"Bert-base", 0.766, 0.076},
                                   {"Bert-large", 0.840, 0.036},
                                   {"Roberta-base", 0.871, 0.024},
                                   {"Roberta-large", 0.943, 0.005},
                                   {"Llama3-8B-Instruct", 0.973, 0.001}};
  std::ostringstream out, err;
  const int code = cli::run_cli({"--format", "doc", "correlate", "--scores", testing::fixture("similarity_means.tsv").string(),
                                 "--accuracy", testing::fixture("model_performance.tsv").string()},
                                out, err);
  if (code != 0) return {false, "correlate exited " + std::to_string(code) + ": " + err.str()};
  const auto doc = nlohmann::json::parse(out.str());
  std::map<std::string, std::pair<double, double>> got;
  for (const auto& row : doc["rows"]) got[row["model"]] = {row["r"], row["p"]};
  double worst_r = 0, worst_p = 0;
  bool ok = got.size() == published.size();
  for (const auto& t : published) {
    auto it = got.find(t.model);
    if (it == got.end()) return {false, "model " + t.model + " missing"};
    worst_r = std::max(worst_r, std::fabs(it->second.first - t.r));
    worst_p = std::max(worst_p, std::fabs(it->second.second - t.p));
  }
  ok = ok && worst_r <= kCorrRTol && worst_p <= kCorrPTol;
  return {ok, "5 models, max |dr| = " + fmt(worst_r) + ", max |dp| = " + fmt(worst_p)};
}

Outcome ac4() {
  std::mt19937_64 rng(2024);
  const KernelConfig kcfg;
  const SimConfig scfg;
  std::size_t pairs = 0, skipped = 0;
  double worst[5] = {0, 0, 0, 0, 0};
  while (pairs < 100) {
    std::vector<DepTree> corpus;
    for (int k = 0; k < 4; ++k) corpus.push_back(testing::random_tree(rng, "t" + std::to_string(k)));
    const auto& a = corpus[0];
    const auto& b = corpus[1];
    const auto table = build_tfidf(corpus);
    oracle::Corpus oc;
    for (const auto& t : corpus) oc.sentences.push_back(toks(t));

    const auto links = random_alignment(rng, a.size(), b.size());
    const auto m = build_matrix(Hypergraph(a), Hypergraph(b), links, scfg);
    const auto om = oracle::similarity_matrix(oc.sentences[0], oc.sentences[1], links.pairs(), scfg.theta,
                                              scfg.beta, false);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) worst[0] = std::max(worst[0], std::fabs(m.values(i, j) - om(i, j)));
    worst[1] = std::max(worst[1], std::fabs(sabk(a, b, kcfg) - oracle::sabk(oc.sentences[0], oc.sentences[1], kcfg.theta)));

    KernelScores k;
    try {
      k = all_kernels(a, b, table, kcfg);
    } catch (const KernelError& e) {
      if (e.kind() != KernelErrorKind::ZeroNormalizer) throw;
      ++skipped;
      continue;
    }
    worst[2] = std::max(worst[2], std::fabs(tabk(a, b, table, kcfg) - oracle::tabk(oc, 0, 1, kcfg.theta)));
    worst[3] = std::max(worst[3], std::fabs(msk(a, b, table, kcfg) - oracle::msk(oc, 0, 1, kcfg.theta, kcfg.alpha, kcfg.nu)));
    worst[4] = std::max(worst[4], std::fabs(composite_kernel(a, b, table, kcfg) -
                                            oracle::ck(oc, 0, 1, kcfg.theta, kcfg.alpha, kcfg.nu, kcfg.ck_beta,
                                                       kcfg.ck_delta)));
    ++pairs;
  }
  bool ok = true;
  for (double w : worst) ok = ok && w <= kOracleTol;
  return {ok, std::to_string(pairs) + " pairs (" + std::to_string(skipped) +
                  " zero-normalizer corpora redrawn), max error matrix " + fmt(worst[0]) + ", sabk " +
                  fmt(worst[1]) + ", tabk " + fmt(worst[2]) + ", msk " + fmt(worst[3]) + ", ck " + fmt(worst[4])};
}

Outcome ac5() {
  std::mt19937_64 rng(55);
  double worst = 0, worst_row = 0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t L = 1 + rng() % 16, d = 1 + rng() % 8;
    const auto q = random_matrix(rng, L, d), kk = random_matrix(rng, L, d), v = random_matrix(rng, L, d);
    const Matrix ones(L, L, 1.0);
    const auto got = ud_attention(q, kk, v, ones);
    const auto want = oracle::attention(q, kk, v, nullptr);
    for (std::size_t i = 0; i < L; ++i)
      for (std::size_t c = 0; c < d; ++c) worst = std::max(worst, std::fabs(got(i, c) - want(i, c)));
    const auto w = softmax_rows(ud_attention_logits(q, kk, ones));
    for (std::size_t i = 0; i < L; ++i) {
      double total = 0;
      for (double x : w.row(i)) total += x;
      worst_row = std::max(worst_row, std::fabs(total - 1));
    }
  }
  return {worst <= kAttentionTol && worst_row <= kAttentionTol,
          "50 instances, max |diff| = " + fmt(worst) + ", max |row sum - 1| = " + fmt(worst_row)};
}

Outcome ac6() {
  const auto en = load("en1.conllu");
  const auto zh = load("zh1_figure.conllu");
  AlignerConfig ac;
  ac.backend = AlignerBackend::lexicon;
  ac.lexicon_path = testing::fixture("lexicon_en_zh.tsv");
  const auto links = align(en, zh, ac);
  SimConfig c;
  c.theta = 1.5;
  c.beta = 0.2;
  c.empty_dependent_sum = EmptyDependentSum::zero;
  const auto m = build_matrix(Hypergraph(en), Hypergraph(zh), links, c);
  const auto om = oracle::similarity_matrix(toks(en), toks(zh), links.pairs(), 1.5, 0.2, false);
  const double m11 = m.values(1, 1), sc = score(m);
  const bool oracle_agrees = std::fabs(om(1, 1) - 7.56) <= kWorkedTol && std::fabs(oracle::score(om) - 0.945) <= kWorkedTol;
  const bool ok = std::fabs(m11 - 7.56) <= kWorkedTol && std::fabs(sc - 0.945) <= kWorkedTol && oracle_agrees;
  return {ok, "M[1][1] = " + format_double(m11) + ", Score = " + format_double(sc) +
                  (oracle_agrees ? ", oracle agrees" : ", oracle disagrees")};
}

Outcome ac7() {
  std::mt19937_64 rng(77);
  double worst = 0;
  for (int k = 0; k < 100; ++k) {
    std::vector<DepTree> corpus;
    for (int t = 0; t < 4; ++t) corpus.push_back(testing::random_tree(rng, "s" + std::to_string(t)));
    const auto& a = corpus[0];
    const auto& b = corpus[1];
    const Hypergraph ga(a), gb(b);
    const auto exact_ab = align(a, b, {}), exact_ba = align(b, a, {});
    worst = std::max(worst, std::fabs(score(build_matrix(ga, gb, exact_ab, {})) - score(build_matrix(gb, ga, exact_ba, {}))));
    const auto links = random_alignment(rng, a.size(), b.size());
    worst = std::max(worst, std::fabs(score(build_matrix(ga, gb, links, {})) -
                                      score(build_matrix(gb, ga, links.transposed(), {}))));
    const KernelConfig kc;
    worst = std::max(worst, std::fabs(sabk(a, b, kc) - sabk(b, a, kc)));
    const auto table = build_tfidf(corpus);
    try {
      const auto x = all_kernels(a, b, table, kc), y = all_kernels(b, a, table, kc);
      worst = std::max({worst, std::fabs(x.tabk - y.tabk), std::fabs(x.msk - y.msk), std::fabs(x.ck - y.ck)});
    } catch (const KernelError& e) {
      if (e.kind() != KernelErrorKind::ZeroNormalizer) throw;
      // both directions must fail the same way
      try {
        all_kernels(b, a, table, kc);
        return {false, "ZeroNormalizer raised in one direction only"};
      } catch (const KernelError&) {
      }
    }
  }
  return {worst <= kSymmetryTol, "100 pairs, max asymmetry " + fmt(worst)};
}

Outcome ac8() {
  const auto dir = testing::scratch_dir("acceptance_reorg");
  std::string tsv;
  for (int k = 0; k < 50; ++k)
    tsv += "q" + std::to_string(k) + "\ten a " + std::to_string(k) + "\ten b " + std::to_string(k) + "\txx a " +
           std::to_string(k) + "\txx b " + std::to_string(k) + "\tde\t" + std::to_string(k % 2) + "\n";
  std::ofstream(dir / "quads.tsv") << tsv;
  const auto quads = parse_quadruples(testing::slurp(dir / "quads.tsv"));
  if (quads.size() != 50) return {false, "parsed " + std::to_string(quads.size()) + " quadruples"};
  const auto fig = reorganize(quads, ReorgMode::figure);
  const auto full = reorganize(quads, ReorgMode::full);
  bool pattern = fig.size() == 100 && full.size() == 200;
  for (std::size_t k = 0; pattern && k < quads.size(); ++k) {
    const bool para = quads[k].original_label == PairLabel::paraphrase;
    const auto& p1 = fig[2 * k];
    const auto& p2 = fig[2 * k + 1];
    if (para)
      pattern = p1.side_b == quads[k].xx1 && p2.side_b == quads[k].xx2 && p1.label == PairLabel::paraphrase &&
                p2.label == PairLabel::paraphrase && p1.provenance == Provenance::same_index;
    else
      pattern = p1.side_b == quads[k].xx2 && p2.side_b == quads[k].xx1 && p1.label == PairLabel::non_paraphrase &&
                p2.label == PairLabel::non_paraphrase && p1.provenance == Provenance::cross_index;
    pattern = pattern && p1.side_a == quads[k].en1 && p2.side_a == quads[k].en2;
  }
  return {pattern, "figure " + std::to_string(fig.size()) + " pairs, full " + std::to_string(full.size()) +
                       " pairs from 50 quadruples"};
}

Outcome ac9() {
  std::mt19937_64 rng(99);
  std::size_t ok = 0, total = 0;
  for (int k = 0; k < 50; ++k) {
    const auto t = testing::random_tree(rng, "r" + std::to_string(k));
    const auto back = parse_conllu(serialize_conllu(t));
    ++total;
    ok += back.size() == 1 && back[0] == t;
  }
  for (const char* name : {"en1.conllu", "en2.conllu", "zh1_table.conllu", "zh1_figure.conllu", "zh2.conllu",
                           "corpus_mixed.conllu"}) {
    const auto trees = read_conllu_file(testing::fixture(name));
    ++total;
    ok += parse_conllu(serialize_conllu(trees)) == trees;
  }
  return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " inputs round-trip field-exact"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"AC1", "hyperedge fidelity", 1.0, ac1},
      {"AC2", "published correlations", 1.0, ac2},
      {"AC4", "oracle equivalence", 30.0, ac4},
      {"AC5", "attention identity", 0, ac5},
      {"AC6", "worked example", 0, ac6},
      {"AC7", "symmetry suite", 0, ac7},
      {"AC8", "reorganization arity", 0, ac8},
      {"AC9", "round trip", 0, ac9},
  };
  int failures = 0;
  std::printf("AC3 SKIP fine-tuning gains: needs GPU training of multilingual encoders, out of scope\n");
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0 && secs >= c.time_limit_s) {
      o.pass = false;
      o.detail += "; over the " + fmt(c.time_limit_s) + " s limit";
    }
    failures += !o.pass;
    std::printf("%s %s %s: %s (%.3f s)\n", c.id.c_str(), o.pass ? "PASS" : "FAIL", c.name.c_str(), o.detail.c_str(),
                secs);
  }
  std::fflush(stdout);
  return failures ? 1 : 0;
}
