#include "sqgame/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sqgame/error.hpp"

namespace sqgame::stats {

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::StudentTPooled: return "student_t_pooled";
    case Method::MwNormalApprox: return "mw_normal_approx";
    case Method::MwExact: return "mw_exact";
  }
  return "?";
}

namespace {

constexpr double kTolerance = 1e-10;
constexpr double kTiny = 1e-300;

// Continued fraction for I_x(a, b), valid for x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 10000; ++m) {
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
    if (std::fabs(delta - 1.0) < kTolerance) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double two_tailed_p_from_t(double t, double df) {
  if (std::isinf(t)) return 0.0;
  const double x = df / (df + t * t);
  return std::clamp(regularized_incomplete_beta(df / 2.0, 0.5, x), 0.0, 1.0);
}

double student_t_cdf(double t, double df) {
  const double tail = two_tailed_p_from_t(t, df) / 2.0;
  return t >= 0 ? 1.0 - tail : tail;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

StatResult t_test_independent(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw Error(ErrorCode::SampleTooSmall, "t-test needs at least 2 observations per group");
  }
  auto mean = [](std::span<const double> s) { return std::accumulate(s.begin(), s.end(), 0.0) / s.size(); };
  auto sum_sq = [](std::span<const double> s, double m) {
    double acc = 0.0;
    for (double v : s) acc += (v - m) * (v - m);
    return acc;
  };
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  const double ma = mean(a);
  const double mb = mean(b);
  const double df = n1 + n2 - 2.0;
  const double pooled = (sum_sq(a, ma) + sum_sq(b, mb)) / df;

  StatResult r;
  r.method = Method::StudentTPooled;
  r.df = df;
  if (pooled == 0.0) {
    if (ma == mb) throw Error(ErrorCode::ZeroVariance, "both samples are constant and equal");
    r.statistic = ma > mb ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    r.p_two_tailed = 0.0;
    return r;
  }
  r.statistic = (ma - mb) / std::sqrt(pooled * (1.0 / n1 + 1.0 / n2));
  r.p_two_tailed = two_tailed_p_from_t(r.statistic, df);
  return r;
}

double MwDistribution::cdf(int u) const {
  if (u < 0) return 0.0;
  double acc = 0.0;
  for (int i = 0; i <= u && i < static_cast<int>(pmf.size()); ++i) acc += pmf[static_cast<std::size_t>(i)];
  return std::min(acc, 1.0);
}

MwDistribution exact_mw_distribution(int n1, int n2) {
  if (n1 < 0 || n2 < 0) throw Error(ErrorCode::EmptySample, "group sizes must be non-negative");
  if (n1 > kExactMaxN || n2 > kExactMaxN) {
    throw Error(ErrorCode::TooLarge, "exact distribution limited to group sizes <= 12");
  }
  // count[i][j][u]: arrangements of i first-group and j second-group items
  // with statistic u. The largest item either belongs to the first group
  // (beating all j others) or to the second.
  const int max_u = n1 * n2;
  std::vector<std::vector<std::vector<double>>> count(
      static_cast<std::size_t>(n1 + 1),
      std::vector<std::vector<double>>(static_cast<std::size_t>(n2 + 1),
                                       std::vector<double>(static_cast<std::size_t>(max_u + 1), 0.0)));
  for (int i = 0; i <= n1; ++i) {
    for (int j = 0; j <= n2; ++j) {
      auto& cell = count[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (i == 0 || j == 0) {
        cell[0] = 1.0;
        continue;
      }
      const auto& drop_first = count[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)];
      const auto& drop_second = count[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)];
      for (int u = 0; u <= i * j; ++u) {
        double v = drop_second[static_cast<std::size_t>(u)];
        if (u >= j) v += drop_first[static_cast<std::size_t>(u - j)];
        cell[static_cast<std::size_t>(u)] = v;
      }
    }
  }
  MwDistribution dist{n1, n2, count[static_cast<std::size_t>(n1)][static_cast<std::size_t>(n2)]};
  const double total = std::accumulate(dist.pmf.begin(), dist.pmf.end(), 0.0);
  for (double& p : dist.pmf) p /= total;
  return dist;
}

std::vector<double> midranks(std::span<const double> pooled) {
  std::vector<std::size_t> order(pooled.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return pooled[x] < pooled[y]; });
  std::vector<double> ranks(pooled.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && pooled[order[j]] == pooled[order[i]]) ++j;
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

namespace {

double normal_p(double u, double n1, double n2, double tie_term, bool cc, double* z_out) {
  const double n = n1 + n2;
  const double mu = n1 * n2 / 2.0;
  double var = n1 * n2 / 12.0 * (n + 1.0);
  if (n > 1.0) var = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (var <= 0.0) {
    if (z_out) *z_out = 0.0;
    return 1.0;
  }
  const double diff = std::max(0.0, std::fabs(u - mu) - (cc ? 0.5 : 0.0));
  const double z = diff / std::sqrt(var);
  if (z_out) *z_out = z;
  return std::min(1.0, 2.0 * (1.0 - normal_cdf(z)));
}

}  // namespace

double mw_normal_p(double u, int n1, int n2, bool continuity_correction) {
  return normal_p(u, n1, n2, 0.0, continuity_correction, nullptr);
}

StatResult mann_whitney_u(std::span<const double> a, std::span<const double> b, MwOptions options) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::EmptySample, "Mann-Whitney needs non-empty groups");
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto ranks = midranks(pooled);

  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  const double r1 = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(a.size()), 0.0);
  const double u1 = r1 - n1 * (n1 + 1.0) / 2.0;
  const double u2 = n1 * n2 - u1;
  const double u = std::min(u1, u2);

  // Σ (t^3 - t) over tie groups.
  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  double tie_term = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }
  const bool ties = tie_term > 0.0;

  MwMethod method = options.method;
  if (method == MwMethod::Auto) {
    method = (!ties && a.size() <= static_cast<std::size_t>(kExactMaxN) &&
              b.size() <= static_cast<std::size_t>(kExactMaxN))
                 ? MwMethod::Exact
                 : MwMethod::NormalApprox;
  }

  StatResult r;
  r.statistic = u;
  if (method == MwMethod::Exact) {
    if (ties) throw Error(ErrorCode::BadRequest, "exact Mann-Whitney requires tie-free samples");
    const auto dist = exact_mw_distribution(static_cast<int>(a.size()), static_cast<int>(b.size()));
    r.method = Method::MwExact;
    r.p_two_tailed = std::min(1.0, 2.0 * dist.cdf(static_cast<int>(std::lround(u))));
    return r;
  }
  double z = 0.0;
  r.method = Method::MwNormalApprox;
  r.p_two_tailed = normal_p(u, n1, n2, tie_term, options.continuity_correction, &z);
  r.z = z;
  return r;
}

}  // namespace sqgame::stats
