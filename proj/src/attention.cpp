#include "udsim/attention.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace udsim {

const char* to_string(AttentionErrorKind kind) {
  switch (kind) {
    case AttentionErrorKind::MapOutOfRange: return "MapOutOfRange";
    case AttentionErrorKind::ShapeMismatch: return "ShapeMismatch";
    case AttentionErrorKind::MalformedTokenMap: return "MalformedTokenMap";
  }
  return "Unknown";
}

TokenMap TokenMap::parse(std::string_view text) {
  TokenMap map;
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    auto bad = [&] {
      return AttentionError(AttentionErrorKind::MalformedTokenMap,
                            "token map line " + std::to_string(line_no) + ": '" +
                                std::string(line) + "'");
    };
    if (line == "special") {
      map.slots.push_back(TokenSlot::special());
      continue;
    }
    auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw bad();
    auto side = line.substr(0, tab);
    auto idx = line.substr(tab + 1);
    int word = 0;
    auto [ptr, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), word);
    if (ec != std::errc{} || ptr != idx.data() + idx.size()) throw bad();
    if (side == "src")
      map.slots.push_back({Side::src, word});
    else if (side == "tgt")
      map.slots.push_back({Side::tgt, word});
    else
      throw bad();
  }
  return map;
}

std::string TokenMap::serialize() const {
  std::string out;
  for (const auto& s : slots) {
    switch (s.side) {
      case Side::special: out += "special\n"; break;
      case Side::src: out += "src\t" + std::to_string(s.word_index) + "\n"; break;
      case Side::tgt: out += "tgt\t" + std::to_string(s.word_index) + "\n"; break;
    }
  }
  return out;
}

BiasMatrix expand_bias(const SimilarityMatrix& matrix, const TokenMap& token_map,
                       const BiasOptions& options) {
  const auto n = matrix.rows(), m = matrix.cols();
  for (std::size_t k = 0; k < token_map.size(); ++k) {
    const auto& slot = token_map.slots[k];
    const std::size_t limit = slot.side == Side::src ? n : slot.side == Side::tgt ? m : 0;
    if (slot.side != Side::special &&
        (slot.word_index < 1 || static_cast<std::size_t>(slot.word_index) > limit))
      throw AttentionError(AttentionErrorKind::MapOutOfRange,
                           "token " + std::to_string(k) + " maps to word " +
                               std::to_string(slot.word_index) + " of a " +
                               std::to_string(limit) + "-word sentence");
  }

  const std::size_t length = options.length ? options.length : token_map.size();
  TokenMap fitted;
  fitted.slots.assign(token_map.slots.begin(),
                      token_map.slots.begin() +
                          static_cast<std::ptrdiff_t>(std::min(length, token_map.size())));
  fitted.slots.resize(length, TokenSlot::special());

  double scale = 1.0;
  if (options.rescale_to_max) {
    double peak = 0.0;
    for (double v : matrix.values.data()) peak = std::max(peak, v);
    if (peak > 0.0) scale = 1.0 / peak;
  }

  BiasMatrix out{Matrix(length, length, 1.0), fitted, matrix};
  for (std::size_t a = 0; a < length; ++a) {
    const auto& ra = fitted.slots[a];
    if (ra.side == Side::special) continue;
    for (std::size_t b = 0; b < length; ++b) {
      const auto& rb = fitted.slots[b];
      if (rb.side == Side::special || rb.side == ra.side) continue;
      const auto i = static_cast<std::size_t>((ra.side == Side::src ? ra : rb).word_index - 1);
      const auto j = static_cast<std::size_t>((ra.side == Side::src ? rb : ra).word_index - 1);
      out.values(a, b) = matrix.values(i, j) * scale;
    }
  }
  return out;
}

Matrix ud_attention_logits(const Matrix& q, const Matrix& k, const Matrix& bias) {
  if (q.cols() == 0 || q.cols() != k.cols() || q.rows() != k.rows())
    throw AttentionError(AttentionErrorKind::ShapeMismatch, "Q and K must both be L x d, d >= 1");
  if (bias.rows() != q.rows() || bias.cols() != k.rows())
    throw AttentionError(AttentionErrorKind::ShapeMismatch,
                         "bias must be " + std::to_string(q.rows()) + "x" +
                             std::to_string(k.rows()));
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(q.cols()));
  Matrix logits(q.rows(), k.rows());
  for (std::size_t i = 0; i < q.rows(); ++i)
    for (std::size_t j = 0; j < k.rows(); ++j) {
      double dot = 0.0;
      for (std::size_t c = 0; c < q.cols(); ++c) dot += q(i, c) * k(j, c);
      logits(i, j) = dot * bias(i, j) * inv_sqrt_d;
    }
  return logits;
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    auto row = logits.row(i);
    if (row.empty()) continue;
    const double peak = *std::max_element(row.begin(), row.end());
    double total = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) total += out(i, j) = std::exp(row[j] - peak);
    for (std::size_t j = 0; j < row.size(); ++j) out(i, j) /= total;
  }
  return out;
}

Matrix ud_attention(const Matrix& q, const Matrix& k, const Matrix& v, const Matrix& bias) {
  if (v.rows() != k.rows())
    throw AttentionError(AttentionErrorKind::ShapeMismatch, "V must have as many rows as K");
  const Matrix weights = softmax_rows(ud_attention_logits(q, k, bias));
  Matrix out(q.rows(), v.cols());
  for (std::size_t i = 0; i < weights.rows(); ++i)
    for (std::size_t j = 0; j < weights.cols(); ++j) {
      const double w = weights(i, j);
      for (std::size_t c = 0; c < v.cols(); ++c) out(i, c) += w * v(j, c);
    }
  return out;
}

nlohmann::json to_json(const BiasMatrix& bias) {
  nlohmann::json doc = to_json(bias.source);
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < bias.values.rows(); ++i) {
    auto r = bias.values.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  nlohmann::json map = nlohmann::json::array();
  for (const auto& s : bias.token_map.slots) {
    if (s.side == Side::special)
      map.push_back("special");
    else
      map.push_back({s.side == Side::src ? "src" : "tgt", s.word_index});
  }
  doc["length"] = bias.values.rows();
  doc["token_map"] = std::move(map);
  doc["bias"] = std::move(rows);
  return doc;
}

}  // namespace udsim
