#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "udsim/conllu.hpp"

namespace udsim {

enum class AlignErrorKind {
  MissingAlignment,
  RemoteUnavailable,
  LexiconParseError,
  AlignmentParseError,
  IndexOutOfRange,
  InvalidConfig,
};

const char* to_string(AlignErrorKind kind);

class AlignError : public std::runtime_error {
 public:
  AlignError(AlignErrorKind kind, const std::string& what, int attempts = 0)
      : std::runtime_error(what), kind_(kind), attempts_(attempts) {}
  AlignErrorKind kind() const { return kind_; }
  // Number of requests issued before giving up (remote backend only).
  int attempts() const { return attempts_; }

 private:
  AlignErrorKind kind_;
  int attempts_;
};

// Cross-sentence token links, 1-based on both sides. Many-to-many allowed.
class AlignmentSet {
 public:
  AlignmentSet() = default;
  AlignmentSet(std::size_t src_len, std::size_t tgt_len) : src_len_(src_len), tgt_len_(tgt_len) {}

  // Throws AlignError(IndexOutOfRange) outside [1, src_len] x [1, tgt_len].
  void insert(int src, int tgt);
  bool contains(int src, int tgt) const { return pairs_.count({src, tgt}) != 0; }

  std::size_t src_len() const { return src_len_; }
  std::size_t tgt_len() const { return tgt_len_; }
  const std::set<std::pair<int, int>>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }

  AlignmentSet transposed() const;
  bool operator==(const AlignmentSet&) const = default;

 private:
  std::size_t src_len_ = 0;
  std::size_t tgt_len_ = 0;
  std::set<std::pair<int, int>> pairs_;
};

// 1 iff (i, j) is aligned. Throws AlignError(IndexOutOfRange) for indices
// outside the set's sentence lengths.
int s(const AlignmentSet& alignment, int i, int j);

enum class AlignerBackend { exact, lexicon, file, remote };

const char* to_string(AlignerBackend backend);
AlignerBackend parse_backend(std::string_view name);

struct AlignerConfig {
  AlignerBackend backend = AlignerBackend::exact;
  std::filesystem::path lexicon_path;
  std::filesystem::path file_path;
  std::string remote_url;  // e.g. "http://localhost:8080"
  bool case_fold = true;
  // Remote backend.
  int timeout_ms = 10000;
  int retries = 2;
  unsigned max_in_flight = 4;
};

// Bilingual form mapping, one "src<TAB>tgt" pair per line.
class Lexicon {
 public:
  Lexicon() = default;
  static Lexicon parse(std::string_view text, bool case_fold);
  static Lexicon load(const std::filesystem::path& path, bool case_fold);

  void add(const std::string& src, const std::string& tgt);
  bool links(const std::string& src, const std::string& tgt) const;
  std::size_t size() const;

 private:
  bool case_fold_ = true;
  std::map<std::string, std::set<std::string>> entries_;
};

// Pre-computed alignments keyed by sentence-id pair:
//   # pair: <src_sent_id> <tgt_sent_id>
//   0-0 1-1 3-3
class PharaohFile {
 public:
  static PharaohFile parse(std::string_view text);
  static PharaohFile load(const std::filesystem::path& path);

  // 0-based pairs as stored on disk.
  const std::vector<std::pair<int, int>>* find(const std::string& src_id,
                                               const std::string& tgt_id) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::pair<std::string, std::string>, std::vector<std::pair<int, int>>> entries_;
};

// Parses one "i-j i-j ..." line into 0-based pairs.
std::vector<std::pair<int, int>> parse_pharaoh_line(std::string_view line);

class Aligner {
 public:
  // Loads the lexicon or alignment file up front when the backend needs one.
  explicit Aligner(AlignerConfig config);

  const AlignerConfig& config() const { return config_; }

  AlignmentSet align(const DepTree& src, const DepTree& tgt) const;

  // Results are index-aligned with `pairs` whatever order requests finish
  // in. The remote backend keeps at most max_in_flight requests open.
  std::vector<AlignmentSet> align_batch(
      const std::vector<std::pair<const DepTree*, const DepTree*>>& pairs) const;

 private:
  AlignmentSet align_exact(const DepTree& src, const DepTree& tgt) const;
  AlignmentSet align_lexicon(const DepTree& src, const DepTree& tgt) const;
  AlignmentSet align_file(const DepTree& src, const DepTree& tgt) const;
  AlignmentSet align_remote(const DepTree& src, const DepTree& tgt) const;

  AlignerConfig config_;
  Lexicon lexicon_;
  PharaohFile file_;
};

AlignmentSet align(const DepTree& src, const DepTree& tgt, const AlignerConfig& config);

}  // namespace udsim
