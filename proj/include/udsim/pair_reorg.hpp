#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace udsim {

enum class ReorgErrorKind { IncompleteQuadruple, InvalidLabel };

class ReorgError : public std::runtime_error {
 public:
  ReorgError(ReorgErrorKind kind, const std::string& what, std::size_t line = 0)
      : std::runtime_error(what), kind_(kind), line_(line) {}
  ReorgErrorKind kind() const { return kind_; }
  std::size_t line() const { return line_; }

 private:
  ReorgErrorKind kind_;
  std::size_t line_;
};

enum class PairLabel { non_paraphrase = 0, paraphrase = 1 };
enum class Provenance { same_index, cross_index };

const char* to_string(PairLabel label);
const char* to_string(Provenance provenance);

// An English pair and its translations; xx1 translates en1, xx2 translates en2.
struct Quadruple {
  std::string id;
  std::string en1, en2;
  std::string xx1, xx2;
  std::string xx_lang;
  PairLabel original_label = PairLabel::non_paraphrase;
};

struct CrossPair {
  std::string id;
  std::string side_a;  // English
  std::string side_b;  // translation
  PairLabel label = PairLabel::non_paraphrase;
  Provenance provenance = Provenance::same_index;

  bool operator==(const CrossPair&) const = default;
};

enum class ReorgMode {
  // Paraphrase quadruples yield en1-xx1 and en2-xx2; non-paraphrase
  // quadruples yield en1-xx2 and en2-xx1.
  figure,
  // All four cross-lingual pairs: same-index pairs are paraphrases,
  // cross-index pairs inherit the original label.
  full,
};

ReorgMode parse_reorg_mode(std::string_view name);

std::vector<CrossPair> reorganize(std::span<const Quadruple> quads, ReorgMode mode = ReorgMode::figure);

struct ReorgSummary {
  std::size_t paraphrase = 0;
  std::size_t non_paraphrase = 0;
  std::size_t same_index = 0;
  std::size_t cross_index = 0;
  std::size_t total = 0;

  bool operator==(const ReorgSummary&) const = default;
};

ReorgSummary summarize(std::span<const CrossPair> pairs);

// id, en1, en2, xx1, xx2, xx_lang, label(0/1); no header.
std::vector<Quadruple> parse_quadruples(std::string_view tsv);
// id, side_a, side_b, label(0/1), provenance
std::string format_cross_pairs(std::span<const CrossPair> pairs);

}  // namespace udsim
