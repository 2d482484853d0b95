#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "run_config.hpp"
#include "udsim/aligner.hpp"
#include "udsim/attention.hpp"
#include "udsim/conllu.hpp"
#include "udsim/hypergraph.hpp"
#include "udsim/kernels.hpp"
#include "udsim/pair_reorg.hpp"
#include "udsim/parallel.hpp"
#include "udsim/similarity.hpp"
#include "udsim/stats.hpp"

namespace udsim::cli {

namespace {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path.string());
  f << text;
}

void emit(const RunConfig& c, std::ostream& out, const std::string& text) {
  if (c.output.empty())
    out << text;
  else
    write_file(c.output, text);
}

std::string fixed3(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string config_header(const RunConfig& c) { return "# config: " + to_json(c).dump() + "\n"; }

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto p = line.find(sep, start);
    out.emplace_back(line.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

// Non-empty, non-comment lines with their 1-based line numbers.
std::vector<std::pair<std::size_t, std::string>> data_lines(const std::string& text) {
  std::vector<std::pair<std::size_t, std::string>> out;
  std::istringstream in(text);
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    out.emplace_back(no, line);
  }
  return out;
}

double parse_number(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError(where + ": '" + s + "' is not a number");
  }
}

std::string safe_name(const std::string& s) {
  std::string out = s;
  for (char& ch : out)
    if (ch == '/' || ch == '\\' || ch == ' ' || ch == '\t' || ch == ':') ch = '_';
  return out;
}

void assign_missing_ids(std::vector<DepTree>& trees) {
  for (std::size_t k = 0; k < trees.size(); ++k)
    if (trees[k].sent_id().empty()) trees[k] = trees[k].with_sent_id(std::to_string(k + 1));
}

nlohmann::json number_or_null(double v) {
  return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v);
}

std::string number_or_na(double v) { return std::isnan(v) ? "NA" : format_double(v); }

// ---------------------------------------------------------------- score

struct ScoreArgs {
  std::string src, tgt;
  std::string join = "order";
  std::string src_lang = "en", tgt_lang;
};

int cmd_score(const ScoreArgs& a, const RunConfig& c, std::ostream& out, std::ostream& err) {
  ConlluOptions src_opts{c.strip_deprel_subtypes, a.src_lang};
  ConlluOptions tgt_opts{c.strip_deprel_subtypes, a.tgt_lang};
  auto src = parse_conllu(read_file(a.src), src_opts);
  auto tgt = parse_conllu(read_file(a.tgt), tgt_opts);
  assign_missing_ids(src);
  assign_missing_ids(tgt);

  std::vector<std::pair<const DepTree*, const DepTree*>> pairs;
  if (a.join == "order") {
    if (src.size() != tgt.size())
      throw InputError("count mismatch: " + std::to_string(src.size()) + " source vs " +
                       std::to_string(tgt.size()) + " target sentences");
    for (std::size_t k = 0; k < src.size(); ++k) pairs.emplace_back(&src[k], &tgt[k]);
  } else {
    std::map<std::string, const DepTree*> by_id;
    for (const auto& t : tgt) by_id[t.sent_id()] = &t;
    std::string missing;
    for (const auto& s : src) {
      auto it = by_id.find(s.sent_id());
      if (it == by_id.end()) missing += " " + s.sent_id();
      else pairs.emplace_back(&s, it->second);
    }
    if (!missing.empty()) throw InputError("no target sentence for sent_id(s):" + missing);
  }

  const Aligner aligner(c.aligner);
  const auto alignments = aligner.align_batch(pairs);

  struct Row {
    SimilarityMatrix matrix;
    double score = 0.0;
    double normalized = std::nan("");
  };
  std::vector<Row> rows(pairs.size());
  parallel_for(pairs.size(), c.jobs, [&](std::size_t k) {
    const Hypergraph gs(*pairs[k].first), gt(*pairs[k].second);
    rows[k].matrix = build_matrix(gs, gt, alignments[k], c.sim);
    rows[k].score = score(rows[k].matrix);
    const double self = self_score(*pairs[k].first, c.sim, c.aligner.case_fold);
    if (self > 0.0) rows[k].normalized = normalized_score(rows[k].score, self);
  });

  std::size_t degenerate = 0;
  std::vector<double> scores, normalized;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    scores.push_back(rows[k].score);
    if (std::isnan(rows[k].normalized)) {
      ++degenerate;
      err << "warning: DegenerateReference for " << rows[k].matrix.src_id
          << ": self-score is zero, normalized score not available\n";
    } else {
      normalized.push_back(rows[k].normalized);
    }
  }

  if (!c.matrix_dir.empty()) {
    std::filesystem::create_directories(c.matrix_dir);
    for (const auto& r : rows) {
      const auto stem = safe_name(r.matrix.src_id) + "__" + safe_name(r.matrix.tgt_id);
      if (c.format == OutputFormat::doc)
        write_file(c.matrix_dir / (stem + ".json"), to_json(r.matrix).dump(2) + "\n");
      else
        write_file(c.matrix_dir / (stem + ".tsv"), to_tsv(r.matrix.values));
    }
  }

  auto summary = [](const std::vector<double>& v) -> std::pair<double, double> {
    if (v.empty()) return {std::nan(""), std::nan("")};
    if (v.size() == 1) return {v[0], std::nan("")};
    auto ms = mean_sd(v);
    return {ms.mean, ms.sd};
  };
  const auto [score_mean, score_sd] = summary(scores);
  const auto [norm_mean, norm_sd] = summary(normalized);

  std::string text;
  if (c.format == OutputFormat::doc) {
    nlohmann::json doc;
    doc["config"] = to_json(c);
    doc["pairs"] = nlohmann::json::array();
    for (const auto& r : rows)
      doc["pairs"].push_back({{"src_id", r.matrix.src_id},
                              {"tgt_id", r.matrix.tgt_id},
                              {"n", r.matrix.rows()},
                              {"m", r.matrix.cols()},
                              {"score", r.score},
                              {"normalized_score", number_or_null(r.normalized)}});
    doc["summary"] = {
        {"score", {{"mean", number_or_null(score_mean)}, {"sd", number_or_null(score_sd)}, {"n", scores.size()}}},
        {"normalized_score",
         {{"mean", number_or_null(norm_mean)}, {"sd", number_or_null(norm_sd)}, {"n", normalized.size()}}}};
    text = doc.dump(2) + "\n";
  } else {
    text = config_header(c);
    text += "src_id\ttgt_id\tn\tm\tscore\tnormalized_score\n";
    for (const auto& r : rows)
      text += r.matrix.src_id + '\t' + r.matrix.tgt_id + '\t' + std::to_string(r.matrix.rows()) + '\t' +
              std::to_string(r.matrix.cols()) + '\t' + format_double(r.score) + '\t' +
              number_or_na(r.normalized) + '\n';
    text += "# summary\tscore\tmean\t" + number_or_na(score_mean) + "\tsd\t" + number_or_na(score_sd) + '\n';
    text += "# summary\tnormalized_score\tmean\t" + number_or_na(norm_mean) + "\tsd\t" +
            number_or_na(norm_sd) + '\n';
  }
  emit(c, out, text);

  auto human = [](double v) { return std::isnan(v) ? std::string("NA") : fixed3(v); };
  err << "pairs: " << rows.size() << "  score mean " << human(score_mean) << " sd " << human(score_sd)
      << "  normalized mean " << human(norm_mean) << " sd " << human(norm_sd) << "\n";
  return (c.strict && degenerate) ? kExitInput : kExitOk;
}

// ---------------------------------------------------------------- kernel

struct KernelArgs {
  std::string corpus, pairs;
  std::string kind = "all";
};

int cmd_kernel(const KernelArgs& a, const RunConfig& c, std::ostream& out, std::ostream& err) {
  auto corpus = parse_conllu(read_file(a.corpus), {c.strip_deprel_subtypes, {}});
  assign_missing_ids(corpus);
  const auto tfidf = build_tfidf(corpus);
  std::map<std::string, const DepTree*> by_id;
  for (const auto& t : corpus) by_id[t.sent_id()] = &t;

  std::vector<std::pair<const DepTree*, const DepTree*>> pairs;
  for (const auto& [no, line] : data_lines(read_file(a.pairs))) {
    auto cols = split(line, '\t');
    if (cols.size() != 2)
      throw InputError(a.pairs + " line " + std::to_string(no) + ": expected src_id<TAB>tgt_id");
    for (const auto& id : cols)
      if (!by_id.count(id))
        throw InputError(a.pairs + " line " + std::to_string(no) + ": sent_id '" + id +
                         "' is not in the corpus");
    pairs.emplace_back(by_id[cols[0]], by_id[cols[1]]);
  }

  const std::vector<std::string> kinds =
      a.kind == "all" ? std::vector<std::string>{"sabk", "tabk", "msk", "ck"} : std::vector<std::string>{a.kind};
  const double nan = std::nan("");
  std::vector<KernelScores> results(pairs.size());
  std::vector<std::string> failures(pairs.size());
  parallel_for(pairs.size(), c.jobs, [&](std::size_t k) {
    const auto& [x, y] = pairs[k];
    KernelScores& r = results[k];
    r.sabk = sabk(*x, *y, c.kernel);
    if (a.kind == "sabk") return;
    try {
      const auto all = all_kernels(*x, *y, tfidf, c.kernel);
      r.tabk = all.tabk;
      r.msk = all.msk;
      r.ck = all.ck;
    } catch (const KernelError& e) {
      if (e.kind() != KernelErrorKind::ZeroNormalizer) throw;
      r.tabk = r.msk = r.ck = nan;
      failures[k] = e.what();
    }
  });

  std::size_t warnings = 0;
  for (std::size_t k = 0; k < pairs.size(); ++k)
    if (!failures[k].empty()) {
      ++warnings;
      err << "warning: ZeroNormalizer for " << pairs[k].first->sent_id() << " / "
          << pairs[k].second->sent_id() << ": " << failures[k] << "\n";
    }

  auto value = [](const KernelScores& r, const std::string& kind) {
    if (kind == "sabk") return r.sabk;
    if (kind == "tabk") return r.tabk;
    if (kind == "msk") return r.msk;
    return r.ck;
  };

  std::string text;
  if (c.format == OutputFormat::doc) {
    nlohmann::json doc;
    doc["config"] = to_json(c);
    doc["kind"] = a.kind;
    doc["rows"] = nlohmann::json::array();
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      nlohmann::json row = {{"src_id", pairs[k].first->sent_id()}, {"tgt_id", pairs[k].second->sent_id()}};
      for (const auto& kind : kinds) row[kind] = number_or_null(value(results[k], kind));
      doc["rows"].push_back(std::move(row));
    }
    text = doc.dump(2) + "\n";
  } else {
    text = config_header(c) + "src_id\ttgt_id";
    for (const auto& kind : kinds) text += '\t' + kind;
    text += '\n';
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      text += pairs[k].first->sent_id() + '\t' + pairs[k].second->sent_id();
      for (const auto& kind : kinds) text += '\t' + number_or_na(value(results[k], kind));
      text += '\n';
    }
  }
  emit(c, out, text);
  return (c.strict && warnings) ? kExitInput : kExitOk;
}

// ---------------------------------------------------------------- bias

struct BiasArgs {
  std::vector<std::string> matrices, token_maps;
  std::size_t length = 0;
  bool rescale = false;
  bool check = false;
  unsigned check_seeds = 10;
  std::uint64_t seed = 0;
  std::size_t dim = 8;
  std::string output_dir;
};

Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

int cmd_bias(const BiasArgs& a, const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (a.matrices.size() != a.token_maps.size())
    throw InputError("give one --token-map per --matrix (" + std::to_string(a.matrices.size()) +
                     " vs " + std::to_string(a.token_maps.size()) + ")");
  if (a.matrices.size() > 1 && a.output_dir.empty() && c.output.empty())
    throw InputError("several pairs need --output-dir");
  if (a.check && a.dim == 0) throw InputError("--dim must be >= 1");

  int status = kExitOk;
  for (std::size_t k = 0; k < a.matrices.size(); ++k) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(read_file(a.matrices[k]));
    } catch (const nlohmann::json::exception& e) {
      throw InputError(a.matrices[k] + ": not a matrix document: " + e.what());
    }
    SimilarityMatrix matrix;
    try {
      matrix = matrix_from_json(doc);
    } catch (const nlohmann::json::exception& e) {
      throw InputError(a.matrices[k] + ": " + e.what());
    }
    const auto token_map = TokenMap::parse(read_file(a.token_maps[k]));
    BiasMatrix bias;
    try {
      bias = expand_bias(matrix, token_map, {a.length, a.rescale});
    } catch (const AttentionError& e) {
      throw InputError(std::string(to_string(e.kind())) + " for " + matrix.src_id + "/" +
                       matrix.tgt_id + ": " + e.what());
    }

    if (a.check) {
      double worst = 0.0;
      const std::size_t L = bias.values.rows();
      for (unsigned s = 0; s < a.check_seeds; ++s) {
        std::mt19937_64 rng(a.seed + s);
        const auto q = random_matrix(rng, L, a.dim);
        const auto kk = random_matrix(rng, L, a.dim);
        const auto v = random_matrix(rng, L, a.dim);
        const auto weights = softmax_rows(ud_attention_logits(q, kk, bias.values));
        (void)ud_attention(q, kk, v, bias);
        for (std::size_t i = 0; i < weights.rows(); ++i) {
          double total = 0.0;
          for (double w : weights.row(i)) total += w;
          worst = std::max(worst, std::fabs(total - 1.0));
        }
      }
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.3g", worst);
      const bool ok = worst <= 1e-9;
      err << "check " << matrix.src_id << "/" << matrix.tgt_id << ": " << a.check_seeds
          << " seed(s), max |row sum - 1| = " << buf << (ok ? " ok" : " FAILED") << "\n";
      if (!ok) status = kExitFailure;
    }

    std::string text;
    if (c.format == OutputFormat::doc) {
      auto d = to_json(bias);
      d["config"] = to_json(c);
      text = d.dump(2) + "\n";
    } else {
      text = config_header(c) + to_tsv(bias.values);
    }
    if (!a.output_dir.empty()) {
      std::filesystem::create_directories(a.output_dir);
      const auto name = safe_name(matrix.src_id) + "__" + safe_name(matrix.tgt_id) +
                        (c.format == OutputFormat::doc ? ".bias.json" : ".bias.tsv");
      write_file(std::filesystem::path(a.output_dir) / name, text);
    } else {
      emit(c, out, text);
    }
  }
  return status;
}

// ---------------------------------------------------------------- reorg

struct ReorgArgs {
  std::string input;
  std::string mode = "figure";
};

int cmd_reorg(const ReorgArgs& a, const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto quads = parse_quadruples(read_file(a.input));
  const auto pairs = reorganize(quads, parse_reorg_mode(a.mode));
  const auto s = summarize(pairs);
  emit(c, out, config_header(c) + format_cross_pairs(pairs));
  err << "quadruples " << quads.size() << "  pairs " << s.total << "  paraphrase " << s.paraphrase
      << "  non-paraphrase " << s.non_paraphrase << "  same_index " << s.same_index << "  cross_index "
      << s.cross_index << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- correlate

struct CorrelateArgs {
  std::string scores, performance;
  std::string metric = "accuracy";
};

int cmd_correlate(const CorrelateArgs& a, const RunConfig& c, std::ostream& out, std::ostream&) {
  std::map<std::string, double> scores;
  for (const auto& [no, line] : data_lines(read_file(a.scores))) {
    auto cols = split(line, '\t');
    if (cols.size() == 2 && cols[0] == "pair") continue;
    const auto where = a.scores + " line " + std::to_string(no);
    if (cols.size() != 2) throw InputError(where + ": expected pair<TAB>value");
    if (!scores.emplace(cols[0], parse_number(cols[1], where)).second)
      throw InputError(where + ": duplicate pair '" + cols[0] + "'");
  }

  std::vector<AccuracyRecord> records;
  for (const auto& [no, line] : data_lines(read_file(a.performance))) {
    auto cols = split(line, '\t');
    if (cols.size() >= 2 && cols[0] == "pair" && cols[1] == "model") continue;
    const auto where = a.performance + " line " + std::to_string(no);
    if (cols.size() != 3 && cols.size() != 4)
      throw InputError(where + ": expected pair<TAB>model<TAB>accuracy[<TAB>f1]");
    std::size_t col = 2;
    if (a.metric == "f1") {
      if (cols.size() != 4) throw InputError(where + ": --metric f1 needs a fourth (f1) column");
      col = 3;
    }
    records.push_back({cols[0], cols[1], parse_number(cols[col], where)});
  }

  const auto rows = correlate_all(scores, records);
  std::string text;
  if (c.format == OutputFormat::doc) {
    nlohmann::json doc;
    doc["config"] = to_json(c);
    doc["metric"] = a.metric;
    doc["rows"] = nlohmann::json::array();
    for (const auto& r : rows)
      doc["rows"].push_back({{"model", r.model}, {"r", r.result.r}, {"p", r.result.p}, {"n", r.result.n}});
    text = doc.dump(2) + "\n";
  } else {
    text = config_header(c) + "model\tr\tp\n";
    for (const auto& r : rows)
      text += r.model + '\t' + fixed3(r.result.r) + '\t' +
              (r.result.p < 1e-12 ? std::string("<1e-12") : fixed3(r.result.p)) + '\n';
  }
  emit(c, out, text);
  return kExitOk;
}

// ---------------------------------------------------------------- stats

struct StatsArgs {
  std::vector<std::string> inputs;
  std::vector<std::string> labels;
  std::string column = "score";
};

int cmd_stats(const StatsArgs& a, const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (!a.labels.empty() && a.labels.size() != a.inputs.size())
    throw InputError("give one --label per input file");
  struct Column {
    std::string label;
    std::size_t n;
    MeanSd stats;
  };
  std::vector<Column> cols;
  for (std::size_t k = 0; k < a.inputs.size(); ++k) {
    const auto lines = data_lines(read_file(a.inputs[k]));
    if (lines.empty()) throw InputError(a.inputs[k] + ": no data");
    const auto header = split(lines.front().second, '\t');
    auto it = std::find(header.begin(), header.end(), a.column);
    if (it == header.end()) throw InputError(a.inputs[k] + ": no column '" + a.column + "'");
    const auto idx = static_cast<std::size_t>(it - header.begin());
    std::vector<double> values;
    std::size_t skipped = 0;
    for (std::size_t r = 1; r < lines.size(); ++r) {
      const auto fields = split(lines[r].second, '\t');
      const auto where = a.inputs[k] + " line " + std::to_string(lines[r].first);
      if (fields.size() != header.size()) throw InputError(where + ": wrong column count");
      if (fields[idx] == "NA") {
        ++skipped;
        continue;
      }
      values.push_back(parse_number(fields[idx], where));
    }
    if (skipped) err << "warning: " << a.inputs[k] << ": skipped " << skipped << " NA value(s)\n";
    const auto label =
        a.labels.empty() ? std::filesystem::path(a.inputs[k]).stem().string() : a.labels[k];
    cols.push_back({label, values.size(), mean_sd(values)});
  }

  std::string text;
  if (c.format == OutputFormat::doc) {
    nlohmann::json doc;
    doc["config"] = to_json(c);
    doc["column"] = a.column;
    doc["columns"] = nlohmann::json::array();
    for (const auto& col : cols)
      doc["columns"].push_back({{"label", col.label}, {"n", col.n}, {"mean", col.stats.mean}, {"sd", col.stats.sd}});
    text = doc.dump(2) + "\n";
  } else {
    text = config_header(c);
    std::string head, mean, sd, n;
    for (const auto& col : cols) {
      head += '\t' + col.label;
      mean += '\t' + fixed3(col.stats.mean);
      sd += '\t' + fixed3(col.stats.sd);
      n += '\t' + std::to_string(col.n);
    }
    text += head + "\nMean" + mean + "\nSD" + sd + "\nN" + n + "\n";
  }
  emit(c, out, text);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cross-lingual syntactic similarity from Universal Dependencies parses", "udsim"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<double> theta, beta;
  unsigned jobs = 1;
  bool strict = false;
  std::string format = "tsv";
  std::string output;
  bool strip_subtypes = false;
  auto* o_config = app.add_option("--config", config_path, "JSON run config (fallback: $UDSIM_CONFIG)");
  auto* o_theta = app.add_option("--theta", theta, "label-match bonus (default 1.5)");
  auto* o_beta = app.add_option("--beta", beta, "height increment (default 0.2)");
  auto* o_jobs = app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  auto* o_strict = app.add_flag("--strict", strict, "treat per-pair warnings as errors");
  auto* o_format = app.add_option("--format", format, "output format")->check(CLI::IsMember({"tsv", "doc"}));
  auto* o_output = app.add_option("-o,--output", output, "output file (default stdout)");
  auto* o_strip = app.add_flag("--strip-deprel-subtypes", strip_subtypes, "compare 'obl:arg' as 'obl'");
  (void)o_config;

  // Aligner and constant overrides shared by several commands.
  std::string aligner, lexicon, alignments, remote_url, empty_sum;
  bool no_case_fold = false;
  std::optional<int> timeout_ms, retries;
  std::optional<unsigned> max_in_flight;
  std::optional<double> alpha, nu, ck_beta, ck_delta;
  std::string matrix_dir;

  ScoreArgs score_args;
  auto* score = app.add_subcommand("score", "similarity score per sentence pair");
  score->add_option("--src", score_args.src, "source (English) CoNLL-U")->required();
  score->add_option("--tgt", score_args.tgt, "target CoNLL-U")->required();
  score->add_option("--join", score_args.join, "pair sentences by order or sent_id")
      ->check(CLI::IsMember({"order", "sent_id"}));
  score->add_option("--src-lang", score_args.src_lang, "language tag when the file names none");
  score->add_option("--tgt-lang", score_args.tgt_lang, "language tag when the file names none");
  auto* o_aligner = score->add_option("--aligner", aligner, "exact, lexicon, file or remote")
                        ->check(CLI::IsMember({"exact", "lexicon", "file", "remote"}));
  auto* o_lexicon = score->add_option("--lexicon", lexicon, "src<TAB>tgt lexicon");
  auto* o_alignments = score->add_option("--alignments", alignments, "Pharaoh alignment file");
  auto* o_remote = score->add_option("--remote-url", remote_url, "alignment service base URL");
  auto* o_timeout = score->add_option("--timeout-ms", timeout_ms, "remote request timeout");
  auto* o_retries = score->add_option("--retries", retries, "remote retries per pair");
  auto* o_inflight = score->add_option("--max-in-flight", max_in_flight, "concurrent remote requests");
  auto* o_nofold = score->add_flag("--no-case-fold", no_case_fold, "match forms case-sensitively");
  auto* o_empty = score->add_option("--empty-dependent-sum", empty_sum, "zero or neutral")
                      ->check(CLI::IsMember({"zero", "neutral"}));
  auto* o_matrix_dir = score->add_option("--matrix-dir", matrix_dir, "write each pair's matrix here");

  KernelArgs kernel_args;
  auto* kernel = app.add_subcommand("kernel", "dependency bigram kernels per sentence pair");
  kernel->add_option("--corpus", kernel_args.corpus, "CoNLL-U corpus (tf-idf collection)")->required();
  kernel->add_option("--pairs", kernel_args.pairs, "src_id<TAB>tgt_id per line")->required();
  kernel->add_option("--kind", kernel_args.kind, "sabk, tabk, msk, ck or all")
      ->check(CLI::IsMember({"sabk", "tabk", "msk", "ck", "all"}));
  auto* o_alpha = kernel->add_option("--alpha", alpha, "children-kernel match constant");
  auto* o_nu = kernel->add_option("--nu", nu, "children-kernel decay");
  auto* o_ckb = kernel->add_option("--ck-beta", ck_beta, "composite weight of TABK");
  auto* o_ckd = kernel->add_option("--ck-delta", ck_delta, "composite weight of MSK");

  BiasArgs bias_args;
  auto* bias = app.add_subcommand("bias", "expand matrices into attention bias");
  bias->add_option("--matrix", bias_args.matrices, "matrix document(s)")->required();
  bias->add_option("--token-map", bias_args.token_maps, "token map(s), one per matrix")->required();
  bias->add_option("-L,--length", bias_args.length, "sequence length (default: token map length)");
  bias->add_flag("--rescale", bias_args.rescale, "divide by the matrix maximum");
  bias->add_flag("--check", bias_args.check, "verify softmax rows on random Q/K/V");
  bias->add_option("--check-seeds", bias_args.check_seeds, "number of random instances");
  bias->add_option("--seed", bias_args.seed, "first random seed");
  bias->add_option("--dim", bias_args.dim, "head dimension for --check");
  bias->add_option("--output-dir", bias_args.output_dir, "one bias file per pair");

  ReorgArgs reorg_args;
  auto* reorg = app.add_subcommand("reorg", "cross-lingual pairs from quadruples");
  reorg->add_option("--input", reorg_args.input, "quadruple TSV")->required();
  reorg->add_option("--mode", reorg_args.mode, "figure or full")->check(CLI::IsMember({"figure", "full"}));

  CorrelateArgs corr_args;
  auto* correlate = app.add_subcommand("correlate", "Pearson r and p of scores vs performance");
  correlate->add_option("--scores", corr_args.scores, "pair<TAB>similarity")->required();
  correlate->add_option("--performance,--accuracy", corr_args.performance,
                        "pair<TAB>model<TAB>accuracy[<TAB>f1]")
      ->required();
  correlate->add_option("--metric", corr_args.metric, "accuracy or f1")
      ->check(CLI::IsMember({"accuracy", "f1"}));

  StatsArgs stats_args;
  auto* stats = app.add_subcommand("stats", "mean and SD of score reports");
  stats->add_option("inputs", stats_args.inputs, "score report TSVs")->required();
  stats->add_option("--label", stats_args.labels, "column label per input");
  stats->add_option("--column", stats_args.column, "score or normalized_score")
      ->check(CLI::IsMember({"score", "normalized_score"}));

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.push_back("udsim");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    RunConfig c;
    std::string path = config_path;
    if (path.empty())
      if (const char* env = std::getenv("UDSIM_CONFIG"); env && *env) path = env;
    if (!path.empty()) c = load_run_config(path);

    if (*o_theta) c.sim.theta = c.kernel.theta = *theta;
    if (*o_beta) c.sim.beta = *beta;
    if (*o_jobs) c.jobs = jobs;
    if (*o_strict) c.strict = strict;
    if (*o_format) c.format = format == "doc" ? OutputFormat::doc : OutputFormat::tsv;
    if (*o_output) c.output = output;
    if (*o_strip) c.strip_deprel_subtypes = strip_subtypes;
    if (*o_aligner) c.aligner.backend = parse_backend(aligner);
    if (*o_lexicon) c.aligner.lexicon_path = lexicon;
    if (*o_alignments) c.aligner.file_path = alignments;
    if (*o_remote) c.aligner.remote_url = remote_url;
    if (*o_timeout) c.aligner.timeout_ms = *timeout_ms;
    if (*o_retries) c.aligner.retries = *retries;
    if (*o_inflight) c.aligner.max_in_flight = *max_in_flight;
    if (*o_nofold) c.aligner.case_fold = false;
    if (*o_empty) c.sim.empty_dependent_sum = parse_empty_dependent_sum(empty_sum);
    if (*o_matrix_dir) c.matrix_dir = matrix_dir;
    if (*o_alpha) c.kernel.alpha = *alpha;
    if (*o_nu) c.kernel.nu = *nu;
    if (*o_ckb) c.kernel.ck_beta = *ck_beta;
    if (*o_ckd) c.kernel.ck_delta = *ck_delta;
    c.validate();

    if (score->parsed()) return cmd_score(score_args, c, out, err);
    if (kernel->parsed()) return cmd_kernel(kernel_args, c, out, err);
    if (bias->parsed()) return cmd_bias(bias_args, c, out, err);
    if (reorg->parsed()) return cmd_reorg(reorg_args, c, out, err);
    if (correlate->parsed()) return cmd_correlate(corr_args, c, out, err);
    if (stats->parsed()) return cmd_stats(stats_args, c, out, err);
    return kExitInput;
  } catch (const AlignError& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return e.kind() == AlignErrorKind::RemoteUnavailable ? kExitService : kExitInput;
  } catch (const ConlluError& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return kExitInput;
  } catch (const KernelError& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return kExitInput;
  } catch (const StatsError& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return kExitInput;
  } catch (const ReorgError& e) {
    err << "error: " << (e.kind() == ReorgErrorKind::IncompleteQuadruple ? "IncompleteQuadruple" : "InvalidLabel")
        << ": " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace udsim::cli
