#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "udsim/stats.hpp"

using namespace udsim;

namespace {

const std::map<std::string, double> kMeans = {{"EN-FR", 0.949}, {"EN-ES", 0.796}, {"EN-DE", 0.747},
                                               {"EN-ZH", 0.533}, {"EN-JA", 0.362}, {"EN-KO", 0.526}};

std::vector<AccuracyRecord> model(const std::string& name, std::vector<double> acc) {
  const std::vector<std::string> keys = {"EN-FR", "EN-ES", "EN-DE", "EN-ZH", "EN-JA", "EN-KO"};
  std::vector<AccuracyRecord> out;
  for (std::size_t k = 0; k < keys.size(); ++k) out.push_back({keys[k], name, acc[k]});
  return out;
}

}  // namespace

TEST_CASE("incomplete beta closed forms") {
  CHECK(incomplete_beta(1, 1, 0.3) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(incomplete_beta(2, 1, 0.5) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(incomplete_beta(0.5, 0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(incomplete_beta(3, 4, 0.0) == 0.0);
  CHECK(incomplete_beta(3, 4, 1.0) == 1.0);
  CHECK(incomplete_beta(2, 3, 0.4) + incomplete_beta(3, 2, 0.6) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS(incomplete_beta(0, 1, 0.5));
}

TEST_CASE("student t against Simpson integration") {
  for (double df : {1.0, 2.0, 4.0, 9.5, 30.0})
    for (double t : {-3.0, -0.7, 0.0, 0.4, 1.9, 5.0})
      CHECK(std::fabs(student_t_cdf(t, df) - oracle::t_cdf(t, df)) <= 1e-8);
  CHECK(student_t_two_tailed(0, 4) == doctest::Approx(1.0));
  // df = 1 is Cauchy: two-tailed p at t = 1 is 0.5
  CHECK(student_t_two_tailed(1, 1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("pearson basics") {
  const std::vector<double> x = {1, 2, 3, 4}, y = {2, 4, 6, 8}, z = {8, 6, 4, 2};
  CHECK(pearson(x, y).r == doctest::Approx(1.0));
  CHECK(pearson(x, y).p == 0.0);
  CHECK(pearson(x, z).r == doctest::Approx(-1.0));
  const std::vector<double> flat = {3, 3, 3, 3};
  try {
    pearson(x, flat);
    FAIL("expected ZeroVariance");
  } catch (const StatsError& e) {
    CHECK(e.kind() == StatsErrorKind::ZeroVariance);
  }
  const std::vector<double> two = {1, 2};
  CHECK_THROWS_AS(pearson(two, two), StatsError);
  CHECK_THROWS_AS(pearson(x, two), StatsError);
}

TEST_CASE("pearson is invariant under positive affine maps") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0, 1);
  for (int k = 0; k < 20; ++k) {
    std::vector<double> x(8), y(8), ya(8);
    for (int i = 0; i < 8; ++i) {
      x[i] = u(rng);
      y[i] = x[i] + u(rng);
      ya[i] = 3.5 * y[i] - 2.0;
    }
    const auto a = pearson(x, y), b = pearson(x, ya);
    CHECK(a.r == doctest::Approx(b.r).epsilon(1e-12));
    CHECK(a.p == doctest::Approx(b.p).epsilon(1e-9));
  }
}

TEST_CASE("model correlations from mean similarity and accuracy") {
  struct Row {
    const char* name;
    std::vector<double> acc;
    double r, p;
  };
  const std::vector<Row> rows = {
      {"Bert-base", {68.11, 66.76, 71.08, 60.54, 62.16, 63.78}, 0.766, 0.076},
      {"Bert-large", {71.35, 70.81, 72.16, 64.32, 65.41, 68.11}, 0.840, 0.036},
      {"Roberta-base", {80.81, 73.78, 78.65, 64.59, 67.57, 66.49}, 0.871, 0.024},
      {"Roberta-large", {91.08, 88.92, 89.18, 66.22, 64.32, 68.92}, 0.943, 0.005},
      {"Llama3-8B-Instruct", {90.86, 88.65, 88.11, 77.30, 74.57, 78.26}, 0.973, 0.001},
  };
  std::vector<AccuracyRecord> all;
  for (const auto& r : rows) {
    auto m = model(r.name, r.acc);
    all.insert(all.end(), m.begin(), m.end());
  }
  const auto got = correlate_all(kMeans, all);
  REQUIRE(got.size() == rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(got[k].model == rows[k].name);
    CHECK(got[k].result.n == 6);
    CHECK(std::fabs(got[k].result.r - rows[k].r) <= 0.001);
    CHECK(std::fabs(got[k].result.p - rows[k].p) <= 0.001);
  }
}

TEST_CASE("correlate_all ignores row order and reports key problems") {
  auto recs = model("m", {1, 2, 3, 4, 5, 7});
  auto shuffled = recs;
  std::reverse(shuffled.begin(), shuffled.end());
  CHECK(correlate_all(kMeans, recs)[0].result.r == correlate_all(kMeans, shuffled)[0].result.r);

  auto missing = recs;
  missing.pop_back();
  missing.push_back({"EN-XX", "m", 1});
  try {
    correlate_all(kMeans, missing);
    FAIL("expected KeyMismatch");
  } catch (const StatsError& e) {
    CHECK(e.kind() == StatsErrorKind::KeyMismatch);
    const std::string what = e.what();
    CHECK(what.find("EN-KO") != std::string::npos);
    CHECK(what.find("EN-XX") != std::string::npos);
  }
}
