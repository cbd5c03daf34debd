#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ugvq/errors.hpp"
#include "ugvq/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace ugvq;

namespace {

// Independent oracle: rank via sort-and-average, then textbook Pearson.
std::vector<double> oracle_ranks(const std::vector<double>& v) {
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        double below = 0.0, equal = 0.0;
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (v[j] < v[i]) ++below;
            if (v[j] == v[i]) ++equal;
        }
        ranks[i] = below + 0.5 * (equal + 1.0);
    }
    return ranks;
}

double oracle_srocc(const std::vector<double>& x, const std::vector<double>& y) {
    auto rx = oracle_ranks(x);
    auto ry = oracle_ranks(y);
    double n = static_cast<double>(x.size());
    double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double num = 0.0, dx = 0.0, dy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        num += (rx[i] - mx) * (ry[i] - my);
        dx += (rx[i] - mx) * (rx[i] - mx);
        dy += (ry[i] - my) * (ry[i] - my);
    }
    return num / std::sqrt(dx * dy);
}

// Textbook sums-of-squares ANOVA oracle.
double oracle_anova_f(const std::vector<std::vector<double>>& groups) {
    double total_n = 0.0, grand = 0.0;
    for (const auto& g : groups) {
        total_n += static_cast<double>(g.size());
        for (double v : g) grand += v;
    }
    grand /= total_n;
    double ssb = 0.0, ssw = 0.0;
    for (const auto& g : groups) {
        double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
        ssb += static_cast<double>(g.size()) * (mean - grand) * (mean - grand);
        for (double v : g) ssw += (v - mean) * (v - mean);
    }
    double k = static_cast<double>(groups.size());
    return (ssb / (k - 1.0)) / (ssw / (total_n - k));
}

} // namespace

TEST_CASE("average ranks with ties") {
    auto r = average_ranks({10.0, 20.0, 20.0, 5.0});
    CHECK(r[3] == 1.0);
    CHECK(r[0] == 2.0);
    CHECK(r[1] == 3.5);
    CHECK(r[2] == 3.5);
}

TEST_CASE("srocc on monotone map is 1") {
    std::vector<double> x{1, 2, 3, 4, 5};
    std::vector<double> y;
    for (double v : x) y.push_back(v * v);
    CHECK(srocc(x, y) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(srocc(x, x) == 1.0);
}

TEST_CASE("srocc on reversed input is -1") {
    std::vector<double> x{1, 2, 3, 4, 5, 6};
    std::vector<double> y(x.rbegin(), x.rend());
    CHECK(srocc(x, y) == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("srocc with ties matches scipy") {
    // frozen: scipy.stats.spearmanr on these vectors
    std::vector<double> x{1.0, 2.0, 2.0, 3.0, 5.0, 4.0, 4.0, 4.0};
    std::vector<double> y{2.0, 1.0, 3.0, 3.0, 6.0, 5.0, 4.0, 4.0};
    CHECK(srocc(x, y) == doctest::Approx(0.9256265453136692).epsilon(1e-12));
}

TEST_CASE("srocc matches naive oracle on random tied vectors") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 5 + rng() % 20;
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = static_cast<double>(rng() % 6); // plenty of ties
            y[i] = static_cast<double>(rng() % 6);
        }
        double ours, oracle;
        try {
            ours = srocc(x, y);
            oracle = oracle_srocc(x, y);
        } catch (const DegenerateInput&) {
            continue; // constant draw
        }
        CHECK(ours == doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("srocc argument errors") {
    CHECK_THROWS_AS(srocc({1, 2, 3}, {1, 2}), LengthMismatch);
    CHECK_THROWS_AS(srocc({1, 2}, {1, 2}), DegenerateInput);
    CHECK_THROWS_AS(srocc({1, 1, 1}, {1, 2, 3}), DegenerateInput);
}

TEST_CASE("srocc symmetry and monotone invariance") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x(12), y(12);
        for (auto& v : x) v = static_cast<double>(rng() % 100);
        for (auto& v : y) v = static_cast<double>(rng() % 100);
        double base;
        try {
            base = srocc(x, y);
        } catch (const DegenerateInput&) {
            continue;
        }
        CHECK(srocc(y, x) == doctest::Approx(base).epsilon(1e-14));
        std::vector<double> xt;
        for (double v : x) xt.push_back(std::exp(v / 25.0)); // strictly increasing
        CHECK(srocc(xt, y) == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("srocc significance reproduces the F statistic") {
    // r = 0.3364, n = 49: the one externally checkable value (F = 6.00)
    auto sig = srocc_significance(0.3364, 49);
    CHECK(sig.f_statistic == doctest::Approx(5.997454859248682).epsilon(1e-12));
    CHECK(std::abs(sig.f_statistic - 6.00) < 0.01);
    CHECK(sig.significant_at_0_05);

    auto zero = srocc_significance(0.0, 30);
    CHECK(zero.f_statistic == 0.0);
    CHECK_FALSE(zero.significant_at_0_05);

    // scalar arithmetic oracle at r=0.9, n=10
    double r = 0.9;
    double t = r * std::sqrt((10.0 - 2.0) / (1.0 - r * r));
    auto hi = srocc_significance(r, 10);
    CHECK(hi.f_statistic == doctest::Approx(t * t).epsilon(1e-14));
    CHECK(hi.significant_at_0_05);

    CHECK_THROWS_AS(srocc_significance(1.0, 10), DegenerateInput);
    CHECK_THROWS_AS(srocc_significance(0.5, 2), DegenerateInput);
}

TEST_CASE("rank differences") {
    std::vector<double> mos{3.0, 2.0, 1.0};

    SUBCASE("identical vectors pile up at zero") {
        auto h = rank_differences(mos, mos);
        CHECK(h.bins.size() == 1);
        CHECK(h.bins.at(0) == 3);
    }

    SUBCASE("reversed vector") {
        std::vector<double> rev{1.0, 2.0, 3.0};
        auto h = rank_differences(rev, mos);
        CHECK(h.differences == std::vector<int>{2, 0, -2});
    }

    SUBCASE("random permutations sum to n and differences to 0") {
        std::mt19937 rng(3);
        std::vector<double> pred{1, 2, 3, 4, 5, 6};
        for (int trial = 0; trial < 30; ++trial) {
            std::shuffle(pred.begin(), pred.end(), rng);
            std::vector<double> base{10, 20, 30, 40, 50, 60};
            std::shuffle(base.begin(), base.end(), rng);
            auto h = rank_differences(pred, base);
            int total = 0, sum = 0;
            for (const auto& [d, c] : h.bins) total += c;
            for (int d : h.differences) sum += d;
            CHECK(total == 6);
            CHECK(sum == 0);
            for (const auto& [d, c] : h.bins) {
                CHECK(d >= -5);
                CHECK(d <= 5);
            }
        }
    }

    SUBCASE("length mismatch") {
        CHECK_THROWS_AS(rank_differences({1.0, 2.0}, mos), LengthMismatch);
    }
}

TEST_CASE("one way anova") {
    SUBCASE("identical groups give F = 0") {
        std::vector<std::vector<double>> groups{{1, 2, 3}, {1, 2, 3}, {1, 2, 3}};
        auto r = one_way_anova(groups);
        CHECK(r.f_statistic == doctest::Approx(0.0));
        CHECK_FALSE(r.significant_at_0_01);
    }

    SUBCASE("large gap, tiny variance is significant") {
        std::vector<std::vector<double>> groups{{0.0, 0.01, -0.01}, {10.0, 10.01, 9.99}};
        auto r = one_way_anova(groups);
        CHECK(r.f_statistic > 1e4);
        CHECK(r.significant_at_0_01);
    }

    SUBCASE("frozen scipy example") {
        std::vector<std::vector<double>> groups{{3.1, 2.9, 3.5, 3.3},
                                                {4.0, 4.2, 3.8, 4.4},
                                                {2.0, 2.2, 1.9, 2.5}};
        auto r = one_way_anova(groups);
        CHECK(r.f_statistic == doctest::Approx(56.21311475409842).epsilon(1e-12));
        CHECK(r.significant_at_0_01);
    }

    SUBCASE("random groups match the sums-of-squares oracle") {
        std::mt19937 rng(17);
        std::normal_distribution<double> noise(0.0, 1.0);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<std::vector<double>> groups(4);
            for (int gi = 0; gi < 4; ++gi) {
                for (int i = 0; i < 49; ++i) groups[gi].push_back(noise(rng) + gi * 0.3);
            }
            auto r = one_way_anova(groups);
            CHECK(r.f_statistic == doctest::Approx(oracle_anova_f(groups)).epsilon(1e-10));
        }
    }

    SUBCASE("degenerate and invalid inputs") {
        CHECK_THROWS_AS(one_way_anova({{1.0, 1.0}, {1.0, 1.0}}), DegenerateInput);
        CHECK_THROWS_AS(one_way_anova({{1.0, 2.0}}), DegenerateInput);
        CHECK_THROWS_AS(one_way_anova({{1.0, 2.0}, {3.0}}), DegenerateInput);
        auto inf_case = one_way_anova({{1.0, 1.0}, {2.0, 2.0}});
        CHECK(std::isinf(inf_case.f_statistic));
        CHECK(inf_case.significant_at_0_01);
    }
}

TEST_CASE("F distribution machinery matches scipy to 1e-8") {
    CHECK(f_cdf(4.0, 1, 47) == doctest::Approx(0.9487022719702941).epsilon(1e-10));
    CHECK(f_cdf(1.0, 3, 20) == doctest::Approx(0.58674808593754).epsilon(1e-10));
    CHECK(f_cdf(2.5, 2, 10) == doctest::Approx(0.868312757201646).epsilon(1e-10));
    CHECK(f_cdf(6.0, 1, 47) == doctest::Approx(0.9819122937860086).epsilon(1e-10));
    CHECK(f_cdf(0.5, 5, 8) == doctest::Approx(0.23088940362577523).epsilon(1e-10));
    CHECK(f_cdf(10.0, 4, 100) == doctest::Approx(0.9999992451095108).epsilon(1e-10));

    CHECK(f_critical(0.05, 1, 47) == doctest::Approx(4.0470998945817005).epsilon(1e-8));
    CHECK(f_critical(0.05, 1, 10) == doctest::Approx(4.9646027437307145).epsilon(1e-8));
    CHECK(f_critical(0.01, 3, 192) == doctest::Approx(3.8852336632983486).epsilon(1e-8));
    CHECK(f_critical(0.01, 2, 12) == doctest::Approx(6.9266081401913).epsilon(1e-8));
    CHECK(f_critical(0.01, 3, 20) == doctest::Approx(4.938193382310539).epsilon(1e-8));
    CHECK(f_critical(0.05, 1, 3) == doctest::Approx(10.127964486013928).epsilon(1e-8));
}
