#include "udsim/pair_reorg.hpp"

namespace udsim {

const char* to_string(PairLabel label) {
  return label == PairLabel::paraphrase ? "paraphrase" : "non-paraphrase";
}

const char* to_string(Provenance provenance) {
  return provenance == Provenance::same_index ? "same_index" : "cross_index";
}

ReorgMode parse_reorg_mode(std::string_view name) {
  if (name == "figure") return ReorgMode::figure;
  if (name == "full") return ReorgMode::full;
  throw std::invalid_argument("reorg mode must be 'figure' or 'full'");
}

namespace {

void check_complete(const Quadruple& q, std::size_t index) {
  if (q.id.empty() || q.en1.empty() || q.en2.empty() || q.xx1.empty() || q.xx2.empty() ||
      q.xx_lang.empty())
    throw ReorgError(ReorgErrorKind::IncompleteQuadruple,
                     "quadruple " + std::to_string(index + 1) + " (" + q.id +
                         ") has an empty field");
}

}  // namespace

std::vector<CrossPair> reorganize(std::span<const Quadruple> quads, ReorgMode mode) {
  std::vector<CrossPair> out;
  out.reserve(quads.size() * (mode == ReorgMode::full ? 4 : 2));
  for (std::size_t k = 0; k < quads.size(); ++k) {
    const Quadruple& q = quads[k];
    check_complete(q, k);
    const bool para = q.original_label == PairLabel::paraphrase;
    auto same = [&] {
      out.push_back({q.id + ".en1-xx1", q.en1, q.xx1, PairLabel::paraphrase, Provenance::same_index});
      out.push_back({q.id + ".en2-xx2", q.en2, q.xx2, PairLabel::paraphrase, Provenance::same_index});
    };
    auto cross = [&] {
      out.push_back({q.id + ".en1-xx2", q.en1, q.xx2, q.original_label, Provenance::cross_index});
      out.push_back({q.id + ".en2-xx1", q.en2, q.xx1, q.original_label, Provenance::cross_index});
    };
    if (mode == ReorgMode::full) {
      same();
      cross();
    } else if (para) {
      same();
    } else {
      cross();
    }
  }
  return out;
}

ReorgSummary summarize(std::span<const CrossPair> pairs) {
  ReorgSummary s;
  for (const auto& p : pairs) {
    (p.label == PairLabel::paraphrase ? s.paraphrase : s.non_paraphrase)++;
    (p.provenance == Provenance::same_index ? s.same_index : s.cross_index)++;
  }
  s.total = pairs.size();
  return s;
}

std::vector<Quadruple> parse_quadruples(std::string_view tsv) {
  std::vector<Quadruple> out;
  std::size_t pos = 0, line_no = 0;
  while (pos < tsv.size()) {
    auto nl = tsv.find('\n', pos);
    auto line = tsv.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? tsv.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      auto tab = line.find('\t', start);
      cols.emplace_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos
                                                                         : tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (cols.size() != 7)
      throw ReorgError(ReorgErrorKind::IncompleteQuadruple,
                       "line " + std::to_string(line_no) + ": expected 7 columns, found " +
                           std::to_string(cols.size()),
                       line_no);
    for (std::size_t c = 0; c < 6; ++c)
      if (cols[c].empty())
        throw ReorgError(ReorgErrorKind::IncompleteQuadruple,
                         "line " + std::to_string(line_no) + ": column " + std::to_string(c + 1) +
                             " is empty (missing translation?)",
                         line_no);
    if (cols[6] != "0" && cols[6] != "1")
      throw ReorgError(ReorgErrorKind::InvalidLabel,
                       "line " + std::to_string(line_no) + ": label must be 0 or 1", line_no);
    out.push_back({cols[0], cols[1], cols[2], cols[3], cols[4], cols[5],
                   cols[6] == "1" ? PairLabel::paraphrase : PairLabel::non_paraphrase});
  }
  return out;
}

std::string format_cross_pairs(std::span<const CrossPair> pairs) {
  std::string out;
  for (const auto& p : pairs) {
    out += p.id + '\t' + p.side_a + '\t' + p.side_b + '\t' +
           (p.label == PairLabel::paraphrase ? "1" : "0") + '\t' + to_string(p.provenance) + '\n';
  }
  return out;
}

}  // namespace udsim
