#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace udsim {

// One basic word-level token. Only ID, FORM, LEMMA, UPOS, HEAD and DEPREL
// survive ingestion.
struct Token {
  int id = 0;
  std::string form;
  std::string lemma = "_";
  std::string upos = "_";
  std::string deprel;
  int head = 0;  // 0 = root

  bool operator==(const Token&) const = default;
};

enum class ConlluErrorKind {
  MalformedLine,
  CycleDetected,
  MultipleRoots,
  NoRoot,
  DanglingHead,
};

const char* to_string(ConlluErrorKind kind);

class ConlluError : public std::runtime_error {
 public:
  ConlluError(ConlluErrorKind kind, const std::string& what, std::size_t sentence = 0,
              std::string sent_id = {}, std::size_t line = 0)
      : std::runtime_error(what),
        kind_(kind),
        sentence_(sentence),
        sent_id_(std::move(sent_id)),
        line_(line) {}

  ConlluErrorKind kind() const { return kind_; }
  // 1-based ordinal of the sentence block in the input, 0 when unknown.
  std::size_t sentence() const { return sentence_; }
  const std::string& sent_id() const { return sent_id_; }
  // 1-based input line, 0 when the error did not come from text.
  std::size_t line() const { return line_; }

 private:
  ConlluErrorKind kind_;
  std::size_t sentence_;
  std::string sent_id_;
  std::size_t line_;
};

// A validated, single-rooted, acyclic dependency parse. Immutable once built.
class DepTree {
 public:
  // Throws ConlluError if the tokens do not form a tree with ids 1..n.
  DepTree(std::string sent_id, std::string language, std::vector<Token> tokens);

  const std::string& sent_id() const { return sent_id_; }
  const std::string& language() const { return language_; }
  std::span<const Token> tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }

  // 1-based access.
  const Token& token(int id) const { return tokens_.at(static_cast<std::size_t>(id - 1)); }
  int root_id() const { return root_id_; }
  // Ids of the dependents of `id`, ascending.
  std::span<const int> children(int id) const {
    return children_.at(static_cast<std::size_t>(id - 1));
  }

  DepTree with_sent_id(std::string sent_id) const;

  bool operator==(const DepTree& other) const {
    return sent_id_ == other.sent_id_ && language_ == other.language_ &&
           tokens_ == other.tokens_;
  }

 private:
  std::string sent_id_;
  std::string language_;
  std::vector<Token> tokens_;
  std::vector<std::vector<int>> children_;
  int root_id_ = 0;
};

struct TreeDefect {
  ConlluErrorKind kind;
  std::size_t position;  // 0-based index of the offending token
  std::string message;
};

// First invariant violation in a token sequence, if any.
std::optional<TreeDefect> find_defect(std::span<const Token> tokens);

struct ConlluOptions {
  // "obl:arg" -> "obl" when set.
  bool strip_deprel_subtypes = false;
  // Used when a block carries no "# lang = " comment.
  std::string default_language;
};

std::string strip_deprel_subtype(std::string_view deprel);

// Multiword-token ranges ("3-4") and empty nodes ("3.1") are skipped.
std::vector<DepTree> parse_conllu(std::string_view text, const ConlluOptions& options = {});
std::vector<DepTree> read_conllu_file(const std::filesystem::path& path,
                                      const ConlluOptions& options = {});

std::string serialize_conllu(const DepTree& tree);
std::string serialize_conllu(std::span<const DepTree> trees);

}  // namespace udsim
