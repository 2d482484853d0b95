#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "udsim/matrix.hpp"
#include "udsim/similarity.hpp"

namespace udsim {

enum class AttentionErrorKind { MapOutOfRange, ShapeMismatch, MalformedTokenMap };

const char* to_string(AttentionErrorKind kind);

class AttentionError : public std::runtime_error {
 public:
  AttentionError(AttentionErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  AttentionErrorKind kind() const { return kind_; }

 private:
  AttentionErrorKind kind_;
};

enum class Side { src, tgt, special };

// Which word (1-based) of which sentence a model token belongs to.
struct TokenSlot {
  Side side = Side::special;
  int word_index = 0;

  static TokenSlot special() { return {Side::special, 0}; }
  bool operator==(const TokenSlot&) const = default;
};

// One slot per model token of the concatenated src+tgt sequence.
struct TokenMap {
  std::vector<TokenSlot> slots;

  std::size_t size() const { return slots.size(); }

  // One token per line: "src<TAB>i", "tgt<TAB>j" or "special".
  static TokenMap parse(std::string_view text);
  std::string serialize() const;
  bool operator==(const TokenMap&) const = default;
};

struct BiasMatrix {
  Matrix values;       // L x L
  TokenMap token_map;  // truncated or padded to L
  SimilarityMatrix source;
};

struct BiasOptions {
  std::size_t length = 0;  // L; 0 means the token map's own length
  // Divide the cross-sentence values by the largest entry of the matrix.
  bool rescale_to_max = false;
};

// Cross cells take M[i][j] (src row, tgt column) or its transpose; cells
// within one sentence and any cell touching a SPECIAL token are 1.
BiasMatrix expand_bias(const SimilarityMatrix& matrix, const TokenMap& token_map,
                       const BiasOptions& options = {});

// (Q K^T ⊙ bias) / sqrt(d), before the softmax.
Matrix ud_attention_logits(const Matrix& q, const Matrix& k, const Matrix& bias);

// Row-wise softmax, shifted by the row maximum.
Matrix softmax_rows(const Matrix& logits);

// softmax((Q K^T ⊙ bias) / sqrt(d)) V
Matrix ud_attention(const Matrix& q, const Matrix& k, const Matrix& v, const Matrix& bias);
inline Matrix ud_attention(const Matrix& q, const Matrix& k, const Matrix& v,
                           const BiasMatrix& bias) {
  return ud_attention(q, k, v, bias.values);
}

nlohmann::json to_json(const BiasMatrix& bias);

}  // namespace udsim
