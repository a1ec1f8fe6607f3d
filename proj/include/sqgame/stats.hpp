#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace sqgame::stats {

enum class Method { StudentTPooled, MwNormalApprox, MwExact };

std::string_view to_string(Method m) noexcept;

struct StatResult {
  double statistic = 0.0;          // t or U
  std::optional<double> df;        // t-test only
  double p_two_tailed = 1.0;
  Method method = Method::StudentTPooled;
  std::optional<double> z;         // normal approximation only
};

/// I_x(a, b) by Lentz's continued fraction, absolute tolerance 1e-10.
double regularized_incomplete_beta(double a, double b, double x);

double student_t_cdf(double t, double df);

/// 2 * (1 - F(|t|)) for Student's t with `df` degrees of freedom.
double two_tailed_p_from_t(double t, double df);

double normal_cdf(double z);

/// Pooled-variance Student t-test, df = n1 + n2 - 2. Sign follows
/// mean(a) - mean(b). Throws SampleTooSmall, ZeroVariance.
StatResult t_test_independent(std::span<const double> a, std::span<const double> b);

enum class MwMethod { Exact, NormalApprox, Auto };

struct MwOptions {
  MwMethod method = MwMethod::Auto;
  bool continuity_correction = true;
};

/// Largest group size the exact distribution is computed for.
inline constexpr int kExactMaxN = 12;

/// Null distribution of U for group sizes (n1, n2): pmf[u] = P(U = u).
struct MwDistribution {
  int n1 = 0;
  int n2 = 0;
  std::vector<double> pmf;

  double cdf(int u) const;
};

/// Counts rank arrangements by dynamic programming. Throws TooLarge when
/// either size exceeds 12.
MwDistribution exact_mw_distribution(int n1, int n2);

/// Midranks of the pooled sample, in input order (a then b).
std::vector<double> midranks(std::span<const double> pooled);

/// U = min(U1, U2) with midranks. Auto uses the exact distribution when
/// both sizes are <= 12 and there are no ties, otherwise the normal
/// approximation with tie-corrected variance. Throws EmptySample, and
/// BadRequest when Exact is requested for tied data.
StatResult mann_whitney_u(std::span<const double> a, std::span<const double> b, MwOptions options = {});

/// Two-tailed p of the normal approximation for a given U without ties.
double mw_normal_p(double u, int n1, int n2, bool continuity_correction = true);

}  // namespace sqgame::stats
