#include "mcdc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mcdc::stats {

namespace {

double log_choose(std::uint64_t n, std::uint64_t k) {
    return std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
           std::lgamma(static_cast<double>(n - k) + 1);
}

}  // namespace

FisherResult fisher_exact_2x2(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
    FisherResult r;
    const std::uint64_t row1 = a + b, row2 = c + d, col1 = a + c, n = row1 + row2;
    const std::uint64_t lo = col1 > row2 ? col1 - row2 : 0;
    const std::uint64_t hi = std::min(row1, col1);
    const double log_total = log_choose(n, col1);
    auto prob = [&](std::uint64_t x) {
        return std::exp(log_choose(row1, x) + log_choose(row2, col1 - x) - log_total);
    };
    const double observed = prob(a);
    double p = 0.0;
    for (std::uint64_t x = lo; x <= hi; ++x) {
        double px = prob(x);
        if (px <= observed * (1 + 1e-7)) p += px;
    }
    r.p_value = std::min(1.0, p);

    double fa = a, fb = b, fc = c, fd = d;
    if (a == 0 || b == 0 || c == 0 || d == 0) {
        fa += 0.5;
        fb += 0.5;
        fc += 0.5;
        fd += 0.5;
    }
    r.odds_ratio = (fa * fd) / (fb * fc);
    return r;
}

double vargha_delaney_a12(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.empty() || ys.empty()) throw std::invalid_argument("A12 needs two nonempty samples");
    // Rank-based: A12 = U / (m n).
    return rank_sum_u(xs, ys) / (static_cast<double>(xs.size()) * static_cast<double>(ys.size()));
}

namespace {

struct Ranked {
    std::vector<double> ranks;  // combined sample, xs first
    double tie_term = 0.0;      // sum of t^3 - t over tie groups
};

Ranked rank(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size() + ys.size();
    std::vector<std::pair<double, std::size_t>> all;
    all.reserve(n);
    for (std::size_t i = 0; i < xs.size(); ++i) all.emplace_back(xs[i], i);
    for (std::size_t i = 0; i < ys.size(); ++i) all.emplace_back(ys[i], xs.size() + i);
    std::sort(all.begin(), all.end());
    Ranked r;
    r.ranks.resize(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && all[j].first == all[i].first) ++j;
        double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) r.ranks[all[k].second] = avg;
        double t = static_cast<double>(j - i);
        r.tie_term += t * t * t - t;
        i = j;
    }
    return r;
}

}  // namespace

double rank_sum_u(const std::vector<double>& xs, const std::vector<double>& ys) {
    Ranked r = rank(xs, ys);
    double sum = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) sum += r.ranks[i];
    double m = static_cast<double>(xs.size());
    return sum - m * (m + 1) / 2.0;
}

namespace {

// Two-sided p of the rank sum under the exact permutation distribution, given
// the observed tie structure. Ranks are doubled so midranks stay integral.
double exact_rank_sum_p(const std::vector<double>& xs, const std::vector<double>& ys) {
    std::vector<double> all = xs;
    all.insert(all.end(), ys.begin(), ys.end());
    std::sort(all.begin(), all.end());
    const std::size_t n = all.size(), m = xs.size();
    std::vector<std::pair<std::size_t, std::size_t>> groups;  // (size, doubled midrank)
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && all[j] == all[i]) ++j;
        groups.emplace_back(j - i, i + 1 + j);
        i = j;
    }
    const std::size_t max_sum = n * (n + 1);
    std::vector<std::vector<double>> ways(m + 1, std::vector<double>(max_sum + 1, 0.0));
    ways[0][0] = 1.0;
    std::size_t seen = 0;
    for (const auto& [size, rank2] : groups) {
        std::vector<double> binom(size + 1, 1.0);
        for (std::size_t k = 1; k <= size; ++k) binom[k] = binom[k - 1] * double(size - k + 1) / double(k);
        auto next = std::vector<std::vector<double>>(m + 1, std::vector<double>(max_sum + 1, 0.0));
        for (std::size_t j = 0; j <= std::min(m, seen); ++j)
            for (std::size_t s = 0; s <= max_sum; ++s) {
                if (ways[j][s] == 0.0) continue;
                for (std::size_t k = 0; k <= size && j + k <= m; ++k) next[j + k][s + k * rank2] += ways[j][s] * binom[k];
            }
        ways = std::move(next);
        seen += size;
    }
    Ranked r = rank(xs, ys);
    double observed2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) observed2 += 2.0 * r.ranks[i];
    const double centre2 = double(m) * double(n + 1);
    const double dev = std::fabs(observed2 - centre2);
    double total = 0.0, extreme = 0.0;
    for (std::size_t s = 0; s <= max_sum; ++s) {
        total += ways[m][s];
        if (std::fabs(double(s) - centre2) >= dev - 1e-9) extreme += ways[m][s];
    }
    return std::min(1.0, extreme / total);
}

}  // namespace

double wilcoxon_rank_sum(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() < kWilcoxonMinSample || ys.size() < kWilcoxonMinSample)
        throw std::invalid_argument("rank-sum test needs at least 5 values per sample");
    if (xs.size() + ys.size() <= kWilcoxonExactLimit) return exact_rank_sum_p(xs, ys);
    Ranked r = rank(xs, ys);
    const double m = static_cast<double>(xs.size()), n2 = static_cast<double>(ys.size()), n = m + n2;
    double sum = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) sum += r.ranks[i];
    const double u = sum - m * (m + 1) / 2.0;
    const double mu = m * n2 / 2.0;
    const double var = m * n2 / 12.0 * ((n + 1) - r.tie_term / (n * (n - 1)));
    if (var <= 0) return 1.0;
    const double z = std::max(0.0, std::fabs(u - mu) - 0.5) / std::sqrt(var);
    return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

double median(std::vector<double> xs) {
    if (xs.empty()) throw std::invalid_argument("median of an empty sample");
    std::sort(xs.begin(), xs.end());
    std::size_t k = xs.size() / 2;
    return xs.size() % 2 ? xs[k] : (xs[k - 1] + xs[k]) / 2.0;
}

}  // namespace mcdc::stats
