#pragma once

#include <cstdint>
#include <vector>

namespace mcdc::stats {

struct FisherResult {
    double p_value = 1.0;
    double odds_ratio = 1.0;
};

/// Two-sided Fisher exact test on [[a, b], [c, d]]. The odds ratio adds 0.5 to
/// every cell when any cell is zero.
FisherResult fisher_exact_2x2(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d);

/// P(x > y) + 0.5 P(x = y) over all pairs. Throws std::invalid_argument on an empty sample.
double vargha_delaney_a12(const std::vector<double>& xs, const std::vector<double>& ys);

inline constexpr std::size_t kWilcoxonMinSample = 5;

/// Mann-Whitney U statistic of xs (average ranks for ties).
double rank_sum_u(const std::vector<double>& xs, const std::vector<double>& ys);

/// Pooled sizes up to this use the exact conditional null distribution.
inline constexpr std::size_t kWilcoxonExactLimit = 60;

/// Two-sided rank-sum p-value. Exact given the ties for small pooled samples,
/// otherwise the normal approximation with tie and continuity correction.
/// Throws std::invalid_argument when a sample has fewer than 5 values.
double wilcoxon_rank_sum(const std::vector<double>& xs, const std::vector<double>& ys);

double median(std::vector<double> xs);

}  // namespace mcdc::stats
