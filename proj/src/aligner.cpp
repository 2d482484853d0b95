#include "udsim/aligner.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "udsim/parallel.hpp"
#include "udsim/text.hpp"

namespace udsim {

const char* to_string(AlignErrorKind kind) {
  switch (kind) {
    case AlignErrorKind::MissingAlignment: return "MissingAlignment";
    case AlignErrorKind::RemoteUnavailable: return "RemoteUnavailable";
    case AlignErrorKind::LexiconParseError: return "LexiconParseError";
    case AlignErrorKind::AlignmentParseError: return "AlignmentParseError";
    case AlignErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case AlignErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

void AlignmentSet::insert(int src, int tgt) {
  if (src < 1 || tgt < 1 || static_cast<std::size_t>(src) > src_len_ ||
      static_cast<std::size_t>(tgt) > tgt_len_)
    throw AlignError(AlignErrorKind::IndexOutOfRange,
                     "alignment pair (" + std::to_string(src) + "," + std::to_string(tgt) +
                         ") outside " + std::to_string(src_len_) + "x" + std::to_string(tgt_len_));
  pairs_.emplace(src, tgt);
}

AlignmentSet AlignmentSet::transposed() const {
  AlignmentSet t(tgt_len_, src_len_);
  for (auto [i, j] : pairs_) t.pairs_.emplace(j, i);
  return t;
}

int s(const AlignmentSet& alignment, int i, int j) {
  if (i < 1 || j < 1 || static_cast<std::size_t>(i) > alignment.src_len() ||
      static_cast<std::size_t>(j) > alignment.tgt_len())
    throw AlignError(AlignErrorKind::IndexOutOfRange,
                     "s(" + std::to_string(i) + "," + std::to_string(j) + ") outside " +
                         std::to_string(alignment.src_len()) + "x" +
                         std::to_string(alignment.tgt_len()));
  return alignment.contains(i, j) ? 1 : 0;
}

const char* to_string(AlignerBackend backend) {
  switch (backend) {
    case AlignerBackend::exact: return "exact";
    case AlignerBackend::lexicon: return "lexicon";
    case AlignerBackend::file: return "file";
    case AlignerBackend::remote: return "remote";
  }
  return "unknown";
}

AlignerBackend parse_backend(std::string_view name) {
  if (name == "exact") return AlignerBackend::exact;
  if (name == "lexicon") return AlignerBackend::lexicon;
  if (name == "file") return AlignerBackend::file;
  if (name == "remote") return AlignerBackend::remote;
  throw AlignError(AlignErrorKind::InvalidConfig, "unknown aligner backend '" + std::string(name) + "'");
}

namespace {

std::string slurp(const std::filesystem::path& path, AlignErrorKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw AlignError(kind, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return out;
}

}  // namespace

Lexicon Lexicon::parse(std::string_view text, bool fold) {
  Lexicon lex;
  lex.case_fold_ = fold;
  std::size_t line_no = 0;
  for (auto line : lines_of(text)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string_view::npos || line.find('\t', tab + 1) != std::string_view::npos ||
        tab == 0 || tab + 1 == line.size())
      throw AlignError(AlignErrorKind::LexiconParseError,
                       "lexicon line " + std::to_string(line_no) +
                           ": expected src_form<TAB>tgt_form");
    lex.add(std::string(line.substr(0, tab)), std::string(line.substr(tab + 1)));
  }
  return lex;
}

Lexicon Lexicon::load(const std::filesystem::path& path, bool fold) {
  return parse(slurp(path, AlignErrorKind::LexiconParseError), fold);
}

void Lexicon::add(const std::string& src, const std::string& tgt) {
  if (case_fold_)
    entries_[case_fold(src)].insert(case_fold(tgt));
  else
    entries_[src].insert(tgt);
}

bool Lexicon::links(const std::string& src, const std::string& tgt) const {
  auto it = entries_.find(case_fold_ ? case_fold(src) : src);
  if (it == entries_.end()) return false;
  return it->second.count(case_fold_ ? case_fold(tgt) : tgt) != 0;
}

std::size_t Lexicon::size() const {
  std::size_t n = 0;
  for (const auto& [k, v] : entries_) n += v.size();
  return n;
}

std::vector<std::pair<int, int>> parse_pharaoh_line(std::string_view line) {
  std::vector<std::pair<int, int>> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    if (pos >= line.size()) break;
    auto end = line.find_first_of(" \t", pos);
    auto item = line.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? line.size() : end;

    auto dash = item.find('-');
    int i = -1, j = -1;
    bool ok = dash != std::string_view::npos;
    if (ok) {
      auto a = item.substr(0, dash), b = item.substr(dash + 1);
      auto ra = std::from_chars(a.data(), a.data() + a.size(), i);
      auto rb = std::from_chars(b.data(), b.data() + b.size(), j);
      ok = ra.ec == std::errc{} && ra.ptr == a.data() + a.size() && rb.ec == std::errc{} &&
           rb.ptr == b.data() + b.size() && !a.empty() && !b.empty() && i >= 0 && j >= 0;
    }
    if (!ok)
      throw AlignError(AlignErrorKind::AlignmentParseError,
                       "bad Pharaoh pair '" + std::string(item) + "'");
    out.emplace_back(i, j);
  }
  return out;
}

PharaohFile PharaohFile::parse(std::string_view text) {
  PharaohFile file;
  auto lines = lines_of(text);
  constexpr std::string_view kKey = "# pair:";
  for (std::size_t k = 0; k < lines.size(); ++k) {
    auto line = lines[k];
    if (line.empty()) continue;
    if (line.substr(0, kKey.size()) != kKey)
      throw AlignError(AlignErrorKind::AlignmentParseError,
                       "alignment file line " + std::to_string(k + 1) + ": expected '# pair:'");
    std::istringstream ids{std::string(line.substr(kKey.size()))};
    std::string src, tgt, extra;
    if (!(ids >> src >> tgt) || (ids >> extra))
      throw AlignError(AlignErrorKind::AlignmentParseError,
                       "alignment file line " + std::to_string(k + 1) +
                           ": expected '# pair: <src_id> <tgt_id>'");
    std::vector<std::pair<int, int>> pairs;
    if (k + 1 < lines.size() && lines[k + 1].substr(0, kKey.size()) != kKey) {
      try {
        pairs = parse_pharaoh_line(lines[k + 1]);
      } catch (const AlignError& e) {
        throw AlignError(AlignErrorKind::AlignmentParseError,
                         "alignment file line " + std::to_string(k + 2) + ": " + e.what());
      }
      ++k;
    }
    file.entries_[{src, tgt}] = std::move(pairs);
  }
  return file;
}

PharaohFile PharaohFile::load(const std::filesystem::path& path) {
  return parse(slurp(path, AlignErrorKind::AlignmentParseError));
}

const std::vector<std::pair<int, int>>* PharaohFile::find(const std::string& src_id,
                                                          const std::string& tgt_id) const {
  auto it = entries_.find({src_id, tgt_id});
  return it == entries_.end() ? nullptr : &it->second;
}

Aligner::Aligner(AlignerConfig config) : config_(std::move(config)) {
  switch (config_.backend) {
    case AlignerBackend::exact:
      break;
    case AlignerBackend::lexicon:
      if (config_.lexicon_path.empty())
        throw AlignError(AlignErrorKind::InvalidConfig, "lexicon backend needs lexicon_path");
      lexicon_ = Lexicon::load(config_.lexicon_path, config_.case_fold);
      break;
    case AlignerBackend::file:
      if (config_.file_path.empty())
        throw AlignError(AlignErrorKind::InvalidConfig, "file backend needs file_path");
      file_ = PharaohFile::load(config_.file_path);
      break;
    case AlignerBackend::remote:
      if (config_.remote_url.empty())
        throw AlignError(AlignErrorKind::InvalidConfig, "remote backend needs remote_url");
      if (config_.max_in_flight == 0 || config_.timeout_ms <= 0 || config_.retries < 0)
        throw AlignError(AlignErrorKind::InvalidConfig, "invalid remote limits");
      break;
  }
}

AlignmentSet Aligner::align_exact(const DepTree& src, const DepTree& tgt) const {
  AlignmentSet out(src.size(), tgt.size());
  std::vector<std::string> tgt_forms;
  for (const Token& t : tgt.tokens())
    tgt_forms.push_back(config_.case_fold ? case_fold(t.form) : t.form);
  for (const Token& a : src.tokens()) {
    auto fa = config_.case_fold ? case_fold(a.form) : a.form;
    for (std::size_t j = 0; j < tgt_forms.size(); ++j)
      if (fa == tgt_forms[j]) out.insert(a.id, static_cast<int>(j + 1));
  }
  return out;
}

AlignmentSet Aligner::align_lexicon(const DepTree& src, const DepTree& tgt) const {
  AlignmentSet out(src.size(), tgt.size());
  for (const Token& a : src.tokens())
    for (const Token& b : tgt.tokens())
      if (lexicon_.links(a.form, b.form)) out.insert(a.id, b.id);
  return out;
}

AlignmentSet Aligner::align_file(const DepTree& src, const DepTree& tgt) const {
  const auto* pairs = file_.find(src.sent_id(), tgt.sent_id());
  if (!pairs)
    throw AlignError(AlignErrorKind::MissingAlignment,
                     "no alignment for pair (" + src.sent_id() + ", " + tgt.sent_id() + ")");
  AlignmentSet out(src.size(), tgt.size());
  for (auto [i, j] : *pairs) out.insert(i + 1, j + 1);
  return out;
}

AlignmentSet Aligner::align_remote(const DepTree& src, const DepTree& tgt) const {
  nlohmann::json body;
  body["src_tokens"] = nlohmann::json::array();
  body["tgt_tokens"] = nlohmann::json::array();
  for (const Token& t : src.tokens()) body["src_tokens"].push_back(t.form);
  for (const Token& t : tgt.tokens()) body["tgt_tokens"].push_back(t.form);
  body["src_lang"] = src.language();
  body["tgt_lang"] = tgt.language();
  const std::string payload = body.dump();

  httplib::Client client(config_.remote_url);
  auto secs = config_.timeout_ms / 1000;
  auto usecs = (config_.timeout_ms % 1000) * 1000;
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);

  std::string last_error;
  const int attempts = config_.retries + 1;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    auto res = client.Post("/align", payload, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    try {
      auto reply = nlohmann::json::parse(res->body);
      AlignmentSet out(src.size(), tgt.size());
      for (const auto& p : reply.at("pairs")) {
        if (!p.is_array() || p.size() != 2) throw std::runtime_error("pair is not [i, j]");
        out.insert(p.at(0).get<int>() + 1, p.at(1).get<int>() + 1);
      }
      return out;
    } catch (const std::exception& e) {
      // A malformed reply is a protocol failure; retrying will not fix it.
      throw AlignError(AlignErrorKind::RemoteUnavailable,
                       "bad reply from " + config_.remote_url + ": " + e.what(), attempt);
    }
  }
  throw AlignError(AlignErrorKind::RemoteUnavailable,
                   "aligner at " + config_.remote_url + " unavailable after " +
                       std::to_string(attempts) + " attempt(s): " + last_error,
                   attempts);
}

AlignmentSet Aligner::align(const DepTree& src, const DepTree& tgt) const {
  switch (config_.backend) {
    case AlignerBackend::exact: return align_exact(src, tgt);
    case AlignerBackend::lexicon: return align_lexicon(src, tgt);
    case AlignerBackend::file: return align_file(src, tgt);
    case AlignerBackend::remote: return align_remote(src, tgt);
  }
  throw AlignError(AlignErrorKind::InvalidConfig, "unknown backend");
}

std::vector<AlignmentSet> Aligner::align_batch(
    const std::vector<std::pair<const DepTree*, const DepTree*>>& pairs) const {
  std::vector<AlignmentSet> out(pairs.size());
  unsigned jobs = config_.backend == AlignerBackend::remote ? config_.max_in_flight : 1;
  parallel_for(pairs.size(), jobs,
               [&](std::size_t i) { out[i] = align(*pairs[i].first, *pairs[i].second); });
  return out;
}

AlignmentSet align(const DepTree& src, const DepTree& tgt, const AlignerConfig& config) {
  return Aligner(config).align(src, tgt);
}

}  // namespace udsim
