#include "ugvq/stats.hpp"

#include "ugvq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ugvq {

std::vector<double> average_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t pos = 0;
    while (pos < n) {
        std::size_t end = pos;
        while (end + 1 < n && values[order[end + 1]] == values[order[pos]]) ++end;
        // positions pos..end (0-based) share the mean rank
        double mean_rank = 0.5 * static_cast<double>(pos + end) + 1.0;
        for (std::size_t k = pos; k <= end; ++k) ranks[order[k]] = mean_rank;
        pos = end + 1;
    }
    return ranks;
}

std::vector<int> ordinal_ranks_desc(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    std::vector<int> ranks(n, 0);
    for (std::size_t r = 0; r < n; ++r) ranks[order[r]] = static_cast<int>(r) + 1;
    return ranks;
}

namespace {

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx;
        double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw DegenerateInput("rank variance is zero; correlation undefined");
    }
    return sxy / std::sqrt(sxx * syy);
}

} // namespace

double srocc(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw LengthMismatch(x.size(), y.size());
    if (x.size() < 3) throw DegenerateInput("SROCC requires at least 3 observations");
    return pearson(average_ranks(x), average_ranks(y));
}

SroccSignificance srocc_significance(double r, int n) {
    if (n < 3) throw DegenerateInput("significance test requires n >= 3");
    if (std::abs(r) >= 1.0) throw DegenerateInput("|r| = 1 leaves no residual degrees of freedom");
    double t = r * std::sqrt(static_cast<double>(n - 2) / (1.0 - r * r));
    double f = t * t;
    double crit = f_critical(0.05, 1.0, static_cast<double>(n - 2));
    return {f, f > crit};
}

RankDiffHistogram rank_differences(const std::vector<double>& predicted,
                                   const std::vector<double>& mos) {
    if (predicted.size() != mos.size()) throw LengthMismatch(predicted.size(), mos.size());
    std::vector<int> rp = ordinal_ranks_desc(predicted);
    std::vector<int> rm = ordinal_ranks_desc(mos);
    RankDiffHistogram h;
    h.differences.resize(predicted.size());
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        int d = rp[i] - rm[i];
        h.differences[i] = d;
        h.bins[d] += 1;
    }
    return h;
}

AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups) {
    if (groups.size() < 2) throw DegenerateInput("ANOVA requires at least 2 groups");
    std::size_t total_n = 0;
    double grand_sum = 0.0;
    for (const auto& g : groups) {
        if (g.size() < 2) throw DegenerateInput("every ANOVA group needs at least 2 values");
        total_n += g.size();
        grand_sum += std::accumulate(g.begin(), g.end(), 0.0);
    }
    double grand_mean = grand_sum / static_cast<double>(total_n);

    double ss_between = 0.0, ss_within = 0.0;
    for (const auto& g : groups) {
        double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
        ss_between += static_cast<double>(g.size()) * (mean - grand_mean) * (mean - grand_mean);
        for (double v : g) ss_within += (v - mean) * (v - mean);
    }

    double df_between = static_cast<double>(groups.size()) - 1.0;
    double df_within = static_cast<double>(total_n) - static_cast<double>(groups.size());
    if (ss_within == 0.0 && ss_between == 0.0) {
        throw DegenerateInput("all values identical; ANOVA undefined");
    }

    double f;
    if (ss_within == 0.0) {
        f = std::numeric_limits<double>::infinity();
        return {f, true, df_between, df_within};
    }
    f = (ss_between / df_between) / (ss_within / df_within);
    double crit = f_critical(0.01, df_between, df_within);
    return {f, f > crit, df_between, df_within};
}

// Continued-fraction evaluation of the regularized incomplete beta
// (modified Lentz); converges in a few dozen iterations for the arguments
// the F tests produce.
namespace {

double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kTiny = 1e-300;

    double qab = a + b;
    double qap = a + 1.0;
    double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw NumericError("incomplete beta continued fraction did not converge");
}

} // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0) throw InputError("incomplete beta requires a, b > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                      a * std::log(x) + b * std::log1p(-x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * betacf(a, b, x) / a;
    }
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double f_cdf(double x, double d1, double d2) {
    if (d1 <= 0.0 || d2 <= 0.0) throw InputError("F distribution requires positive dof");
    if (x <= 0.0) return 0.0;
    double z = d1 * x / (d1 * x + d2);
    return regularized_incomplete_beta(0.5 * d1, 0.5 * d2, z);
}

double f_critical(double alpha, double d1, double d2) {
    if (alpha <= 0.0 || alpha >= 1.0) throw InputError("alpha must lie in (0,1)");
    double target = 1.0 - alpha;
    double lo = 0.0;
    double hi = 1.0;
    while (f_cdf(hi, d1, d2) < target) {
        hi *= 2.0;
        if (hi > 1e12) throw NumericError("F critical value bracket failed");
    }
    for (int iter = 0; iter < 200; ++iter) {
        double mid = 0.5 * (lo + hi);
        if (f_cdf(mid, d1, d2) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-12 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace ugvq
