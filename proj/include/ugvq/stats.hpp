#pragma once

#include <map>
#include <vector>

namespace ugvq {

// Tie-averaged ranks, ascending (smallest value gets rank 1; tied values
// share the mean of their positional ranks).
std::vector<double> average_ranks(const std::vector<double>& values);

// Ordinal ranks with rank 1 = largest value, ties broken by position.
// This is the MOS ranking convention used for rank-difference histograms.
std::vector<int> ordinal_ranks_desc(const std::vector<double>& values);

// Spearman rank-order correlation: Pearson correlation of tie-averaged ranks.
double srocc(const std::vector<double>& x, const std::vector<double>& y);

struct SroccSignificance {
    double f_statistic;
    bool significant_at_0_05;
};

// F = t^2 with t = r * sqrt((n-2) / (1-r^2)), compared against the
// F(1, n-2) critical value at alpha = 0.05.
SroccSignificance srocc_significance(double r, int n);

struct RankDiffHistogram {
    std::vector<int> differences;   // rank(predicted_i) - rank(mos_i), per item
    std::map<int, int> bins;        // difference -> count, only non-empty bins
};

RankDiffHistogram rank_differences(const std::vector<double>& predicted,
                                   const std::vector<double>& mos);

struct AnovaResult {
    double f_statistic;
    bool significant_at_0_01;
    double df_between;
    double df_within;
};

AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups);

// F-distribution machinery. The CDF uses a continued-fraction regularized
// incomplete beta; critical values are solved by bisection. Accurate to
// better than 1e-8 over the tested range.
double regularized_incomplete_beta(double a, double b, double x);
double f_cdf(double x, double d1, double d2);
double f_critical(double alpha, double d1, double d2);

} // namespace ugvq
