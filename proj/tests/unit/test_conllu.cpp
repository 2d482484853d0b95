#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "random_trees.hpp"
#include "udsim/conllu.hpp"

using namespace udsim;

namespace {

const char* kEn1 =
    "1\tJim\t_\t_\t_\t_\t2\tnsubj\t_\t_\n"
    "2\twon\t_\t_\t_\t_\t0\troot\t_\t_\n"
    "3\tagainst\t_\t_\t_\t_\t4\tcase\t_\t_\n"
    "4\tTim\t_\t_\t_\t_\t2\tobl\t_\t_\n";

ConlluErrorKind error_kind(const std::string& text) {
  try {
    parse_conllu(text);
  } catch (const ConlluError& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ConlluErrorKind::MalformedLine;
}

}  // namespace

TEST_CASE("parse EN1 block") {
  auto trees = parse_conllu(std::string(kEn1) + "\n");
  REQUIRE(trees.size() == 1);
  const auto& t = trees[0];
  CHECK(t.size() == 4);
  CHECK(t.token(t.root_id()).form == "won");
  CHECK(t.token(4).head == 2);
  CHECK(t.token(3).deprel == "case");
  CHECK(std::vector<int>(t.children(2).begin(), t.children(2).end()) == std::vector<int>{1, 4});
  CHECK(t.children(1).empty());
}

TEST_CASE("empty input yields no trees") {
  CHECK(parse_conllu("").empty());
  CHECK(parse_conllu("\n\n  \n").empty());
}

TEST_CASE("missing final blank line still closes the sentence") {
  CHECK(parse_conllu(kEn1).size() == 1);
}

TEST_CASE("structural errors") {
  CHECK(error_kind("1\ta\t_\t_\t_\t_\t0\troot\t_\t_\n2\tb\t_\t_\t_\t_\t0\troot\t_\t_\n\n") ==
        ConlluErrorKind::MultipleRoots);
  CHECK(error_kind("1\ta\t_\t_\t_\t_\t2\tdep\t_\t_\n2\tb\t_\t_\t_\t_\t1\tdep\t_\t_\n\n") ==
        ConlluErrorKind::CycleDetected);
  CHECK(error_kind("1\ta\t_\t_\t_\t_\t1\tdep\t_\t_\n\n") == ConlluErrorKind::CycleDetected);
  CHECK(error_kind("1\ta\t_\t_\t_\t_\t0\troot\t_\t_\n2\tb\t_\t_\t_\t_\t7\tdep\t_\t_\n\n") ==
        ConlluErrorKind::DanglingHead);
  CHECK(error_kind("1\ta\t_\t_\t_\t_\t0\troot\t_\n\n") == ConlluErrorKind::MalformedLine);
  CHECK(error_kind("1\ta\t_\t_\t_\t_\tx\troot\t_\t_\n\n") == ConlluErrorKind::MalformedLine);
  // a cycle detached from the root
  CHECK(error_kind("1\ta\t_\t_\t_\t_\t0\troot\t_\t_\n2\tb\t_\t_\t_\t_\t3\tdep\t_\t_\n"
                   "3\tc\t_\t_\t_\t_\t2\tdep\t_\t_\n\n") == ConlluErrorKind::CycleDetected);
}

TEST_CASE("errors name the sentence and line") {
  const std::string text = std::string("# sent_id = ok\n") + kEn1 + "\n# sent_id = bad\n" +
                           "1\ta\t_\t_\t_\t_\t0\troot\t_\t_\n2\tb\t_\t_\t_\t_\t0\troot\t_\t_\n\n";
  try {
    parse_conllu(text);
    FAIL("expected an error");
  } catch (const ConlluError& e) {
    CHECK(e.kind() == ConlluErrorKind::MultipleRoots);
    CHECK(e.sentence() == 2);
    CHECK(e.sent_id() == "bad");
    CHECK(e.line() >= 8);
  }
}

TEST_CASE("multiword ranges and empty nodes are skipped; subtypes optional") {
  auto trees = read_conllu_file(testing::fixture("corpus_mixed.conllu"));
  REQUIRE(trees.size() == 2);
  CHECK(trees[0].size() == 5);
  CHECK(trees[0].sent_id() == "fr1");
  CHECK(trees[0].language() == "fr");
  CHECK(trees[0].token(5).deprel == "obl:arg");
  CHECK(trees[1].size() == 3);

  auto stripped = read_conllu_file(testing::fixture("corpus_mixed.conllu"), {true, {}});
  CHECK(stripped[0].token(5).deprel == "obl");
  CHECK(strip_deprel_subtype("acl:relcl") == "acl");
  CHECK(strip_deprel_subtype("nsubj") == "nsubj");
}

TEST_CASE("default language applies when the block has none") {
  auto trees = parse_conllu(kEn1, {false, "en"});
  CHECK(trees[0].language() == "en");
}

TEST_CASE("serialize EN1: four token lines and a blank line") {
  auto t = parse_conllu(kEn1)[0];
  const auto text = serialize_conllu(t);
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);
  CHECK(text.substr(text.size() - 2) == "\n\n");
  CHECK(text.find("\t_\t") != std::string::npos);
  CHECK(parse_conllu(text)[0] == t);
}

TEST_CASE("round trip over random trees") {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 50; ++k) {
    auto t = testing::random_tree(rng, (k % 3) ? "s" + std::to_string(k) : "");
    auto back = parse_conllu(serialize_conllu(t));
    REQUIRE(back.size() == 1);
    CHECK(back[0] == t);
  }
}

TEST_CASE("round trip of the fixture corpus") {
  for (const char* name : {"en1.conllu", "en2.conllu", "zh1_table.conllu", "zh1_figure.conllu",
                           "zh2.conllu", "corpus_mixed.conllu"}) {
    auto trees = read_conllu_file(testing::fixture(name));
    CHECK(parse_conllu(serialize_conllu(trees)) == trees);
  }
}

TEST_CASE("DepTree rejects invalid token sequences") {
  CHECK_THROWS_AS(DepTree("x", "", {}), ConlluError);
  std::vector<Token> gap = {{1, "a", "_", "_", "root", 0}, {3, "b", "_", "_", "dep", 1}};
  CHECK_THROWS_AS(DepTree("x", "", gap), ConlluError);
  std::vector<Token> tab = {{1, "a\tb", "_", "_", "root", 0}};
  CHECK_THROWS_AS(DepTree("x", "", tab), ConlluError);
}
