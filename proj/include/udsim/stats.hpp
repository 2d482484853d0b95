#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace udsim {

enum class StatsErrorKind { ZeroVariance, TooFewPoints, LengthMismatch, KeyMismatch, NoConvergence };

const char* to_string(StatsErrorKind kind);

class StatsError : public std::runtime_error {
 public:
  StatsError(StatsErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  StatsErrorKind kind() const { return kind_; }

 private:
  StatsErrorKind kind_;
};

// Regularized incomplete beta I_x(a, b), continued fraction evaluated with
// the modified Lentz method (relative tolerance 1e-12, at most 300 terms).
double incomplete_beta(double a, double b, double x);

// Student t distribution with `df` degrees of freedom.
double student_t_cdf(double t, double df);
double student_t_two_tailed(double t, double df);

struct PairedSeries {
  std::vector<std::string> labels;
  std::vector<double> x;
  std::vector<double> y;
};

struct Correlation {
  double r = 0.0;
  double p = 1.0;  // two-tailed, t test with n - 2 degrees of freedom
  std::size_t n = 0;
};

Correlation pearson(std::span<const double> x, std::span<const double> y);
inline Correlation pearson(const PairedSeries& s) { return pearson(s.x, s.y); }

struct AccuracyRecord {
  std::string pair;
  std::string model;
  double value = 0.0;
};

struct ModelCorrelation {
  std::string model;
  Correlation result;
};

// Joins each model's performance with the similarity score table by
// language-pair key. Models are reported in order of first appearance; each
// series is sorted by pair key, so row order in the inputs has no effect.
// Throws StatsError(KeyMismatch) naming every missing or extra pair.
std::vector<ModelCorrelation> correlate_all(const std::map<std::string, double>& scores,
                                            std::span<const AccuracyRecord> performance);

}  // namespace udsim
