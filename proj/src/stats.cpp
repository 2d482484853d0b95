#include "udsim/stats.hpp"

#include <algorithm>
#include <cmath>

namespace udsim {

const char* to_string(StatsErrorKind kind) {
  switch (kind) {
    case StatsErrorKind::ZeroVariance: return "ZeroVariance";
    case StatsErrorKind::TooFewPoints: return "TooFewPoints";
    case StatsErrorKind::LengthMismatch: return "LengthMismatch";
    case StatsErrorKind::KeyMismatch: return "KeyMismatch";
    case StatsErrorKind::NoConvergence: return "NoConvergence";
  }
  return "Unknown";
}

namespace {

constexpr double kEps = 1e-12;
constexpr int kMaxIterations = 300;
constexpr double kTiny = 1e-300;

// Continued fraction for I_x(a, b), valid for x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) return h;
  }
  throw StatsError(StatsErrorKind::NoConvergence, "incomplete beta continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("incomplete_beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("incomplete_beta needs x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_tailed(double t, double df) {
  if (!(df > 0.0)) throw std::invalid_argument("degrees of freedom must be > 0");
  if (std::isinf(t)) return 0.0;
  return incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
}

double student_t_cdf(double t, double df) {
  const double tail = 0.5 * student_t_two_tailed(t, df);
  return t >= 0.0 ? 1.0 - tail : tail;
}

Correlation pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw StatsError(StatsErrorKind::LengthMismatch, "x and y differ in length");
  const std::size_t n = x.size();
  if (n < 3)
    throw StatsError(StatsErrorKind::TooFewPoints,
                     "pearson needs at least 3 points, got " + std::to_string(n));
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw StatsError(StatsErrorKind::ZeroVariance, sxx == 0.0 ? "x has zero variance" : "y has zero variance");

  Correlation out;
  out.n = n;
  out.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double df = static_cast<double>(n - 2);
  const double one_minus_r2 = 1.0 - out.r * out.r;
  if (one_minus_r2 <= 0.0) {
    out.p = 0.0;
  } else {
    const double t = out.r * std::sqrt(df / one_minus_r2);
    out.p = student_t_two_tailed(t, df);
  }
  return out;
}

std::vector<ModelCorrelation> correlate_all(const std::map<std::string, double>& scores,
                                            std::span<const AccuracyRecord> performance) {
  std::vector<std::string> models;
  std::map<std::string, std::map<std::string, double>> by_model;
  std::string problems;
  for (const auto& rec : performance) {
    auto [it, fresh] = by_model.try_emplace(rec.model);
    if (fresh) models.push_back(rec.model);
    if (!it->second.emplace(rec.pair, rec.value).second)
      problems += " duplicate " + rec.model + "/" + rec.pair + ";";
  }
  for (const auto& model : models) {
    const auto& values = by_model[model];
    for (const auto& [pair, v] : values)
      if (!scores.count(pair)) problems += " " + model + " has " + pair + " with no score;";
    for (const auto& [pair, v] : scores)
      if (!values.count(pair)) problems += " " + model + " missing " + pair + ";";
  }
  if (!problems.empty()) throw StatsError(StatsErrorKind::KeyMismatch, "key mismatch:" + problems);

  std::vector<ModelCorrelation> out;
  for (const auto& model : models) {
    std::vector<double> x, y;
    for (const auto& [pair, v] : by_model[model]) {
      x.push_back(scores.at(pair));
      y.push_back(v);
    }
    out.push_back({model, pearson(x, y)});
  }
  return out;
}

}  // namespace udsim
