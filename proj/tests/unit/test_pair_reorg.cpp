#include <doctest.h>

#include "fixtures.hpp"
#include "udsim/pair_reorg.hpp"

using namespace udsim;

namespace {

std::string synthetic(std::size_t n) {
  std::string out;
  for (std::size_t k = 0; k < n; ++k)
    out += "q" + std::to_string(k) + "\tE1 " + std::to_string(k) + "\tE2 " + std::to_string(k) + "\tX1 " +
           std::to_string(k) + "\tX2 " + std::to_string(k) + "\tzh\t" + std::to_string(k % 3 == 0) + "\n";
  return out;
}

ReorgErrorKind error_kind(const std::string& tsv) {
  try {
    parse_quadruples(tsv);
  } catch (const ReorgError& e) {
    return e.kind();
  }
  FAIL("no error");
  return ReorgErrorKind::InvalidLabel;
}

}  // namespace

TEST_CASE("figure mode on the fixture") {
  const auto quads = parse_quadruples(testing::slurp(testing::fixture("quadruples.tsv")));
  REQUIRE(quads.size() == 2);
  const auto pairs = reorganize(quads);
  REQUIRE(pairs.size() == 4);
  CHECK(pairs[0] == CrossPair{"q1.en1-xx2", "Jim won against Tim", "蒂姆打败了吉姆", PairLabel::non_paraphrase,
                              Provenance::cross_index});
  CHECK(pairs[1].id == "q1.en2-xx1");
  CHECK(pairs[2] == CrossPair{"q2.en1-xx1", quads[1].en1, quads[1].xx1, PairLabel::paraphrase, Provenance::same_index});
  CHECK(pairs[3].id == "q2.en2-xx2");
}

TEST_CASE("arity and label pattern on 50 quadruples") {
  const auto quads = parse_quadruples(synthetic(50));
  const auto fig = reorganize(quads, ReorgMode::figure);
  CHECK(fig.size() == 100);
  for (std::size_t k = 0; k < quads.size(); ++k) {
    const bool para = quads[k].original_label == PairLabel::paraphrase;
    for (std::size_t e = 0; e < 2; ++e) {
      const auto& p = fig[2 * k + e];
      CHECK(p.provenance == (para ? Provenance::same_index : Provenance::cross_index));
      CHECK(p.label == quads[k].original_label);
    }
  }
  const auto full = reorganize(quads, ReorgMode::full);
  CHECK(full.size() == 200);
  for (const auto& p : full)
    if (p.provenance == Provenance::same_index) CHECK(p.label == PairLabel::paraphrase);
  const auto s = summarize(full);
  CHECK(s.total == 200);
  CHECK(s.same_index == 100);
  CHECK(s.cross_index == 100);
  CHECK(s.paraphrase == 100 + 2 * 17);
  CHECK(reorganize(quads) == fig);
}

TEST_CASE("empty input and summary counts") {
  CHECK(reorganize({}).empty());
  CHECK(summarize({}) == ReorgSummary{});
  std::vector<CrossPair> four = {{"a", "x", "y", PairLabel::paraphrase, Provenance::same_index},
                                 {"b", "x", "y", PairLabel::paraphrase, Provenance::same_index},
                                 {"c", "x", "y", PairLabel::non_paraphrase, Provenance::cross_index},
                                 {"d", "x", "y", PairLabel::non_paraphrase, Provenance::cross_index}};
  const auto s = summarize(four);
  CHECK(s.paraphrase == 2);
  CHECK(s.non_paraphrase == 2);
}

TEST_CASE("input validation") {
  CHECK(error_kind("q\ta\tb\tc\n") == ReorgErrorKind::IncompleteQuadruple);
  CHECK(error_kind("q\ta\tb\t\td\tzh\t1\n") == ReorgErrorKind::IncompleteQuadruple);
  CHECK(error_kind("q\ta\tb\tc\td\tzh\t2\n") == ReorgErrorKind::InvalidLabel);
  try {
    parse_quadruples("q\ta\tb\tc\td\tzh\t1\nq\ta\tb\tc\td\tzh\tyes\n");
  } catch (const ReorgError& e) {
    CHECK(e.line() == 2);
  }
  std::vector<Quadruple> missing = {{"q", "a", "b", "", "d", "zh", PairLabel::paraphrase}};
  CHECK_THROWS_AS(reorganize(missing), ReorgError);
}

TEST_CASE("output format") {
  std::vector<CrossPair> p = {{"q.en1-xx1", "A", "B", PairLabel::paraphrase, Provenance::same_index}};
  CHECK(format_cross_pairs(p) == "q.en1-xx1\tA\tB\t1\tsame_index\n");
  CHECK(parse_reorg_mode("full") == ReorgMode::full);
  CHECK_THROWS(parse_reorg_mode("half"));
}
