#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ugvq/errors.hpp"
#include "ugvq/pairdata.hpp"
#include "ugvq/synth.hpp"

#include <cmath>
#include <map>

using namespace ugvq;

TEST_CASE("bradley terry probability") {
    CHECK(bradley_terry_probability(1.0, 1.0) == 0.5);
    CHECK(bradley_terry_probability(100.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(bradley_terry_probability(0.0, 100.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(bradley_terry_probability(0.7, 0.2) ==
          doctest::Approx(1.0 / (1.0 + std::exp(-0.5))).epsilon(1e-15));
}

TEST_CASE("same seed gives bit-identical records") {
    SynthConfig config;
    config.true_scores = {1.0, 0.5, 0.0, -0.5, -1.0};
    config.comparisons_per_pair = 7;
    config.seed = 42;
    auto a = generate(config);
    auto b = generate(config);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].item_a == b[i].item_a);
        CHECK(a[i].item_b == b[i].item_b);
        CHECK(a[i].winner == b[i].winner);
    }

    config.seed = 43;
    auto c = generate(config);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.size(); ++i) any_diff |= (a[i].winner != c[i].winner);
    CHECK(any_diff);
}

TEST_CASE("record count is pairs times comparisons") {
    SynthConfig config;
    config.true_scores = {0.3, 0.2, 0.1, 0.0};
    config.comparisons_per_pair = 5;
    CHECK(generate(config).size() == 6 * 5);

    config.pair_coverage = 0.5;
    auto records = generate(config);
    CHECK(records.size() == 3 * 5);

    // sampled pairs are distinct and the record stream is grouped by pair
    std::map<std::pair<std::string, std::string>, int> per_pair;
    for (const auto& r : records) per_pair[{r.item_a, r.item_b}] += 1;
    CHECK(per_pair.size() == 3);
    for (const auto& [pair, count] : per_pair) CHECK(count == 5);
}

TEST_CASE("config validation") {
    SynthConfig config;
    config.true_scores = {1.0};
    CHECK_THROWS_AS(generate(config), InputError);
    config.true_scores = {1.0, 0.0};
    config.comparisons_per_pair = 0;
    CHECK_THROWS_AS(generate(config), InputError);
    config.comparisons_per_pair = 1;
    config.pair_coverage = 0.0;
    CHECK_THROWS_AS(generate(config), InputError);
    config.pair_coverage = 1.5;
    CHECK_THROWS_AS(generate(config), InputError);
}

TEST_CASE("coin flip ignores the scores") {
    SynthConfig config;
    config.true_scores = {100.0, -100.0};
    config.comparisons_per_pair = 2000;
    config.noise_model = NoiseModel::coin_flip;
    config.seed = 7;
    auto records = generate(config);
    int wins_first = 0;
    for (const auto& r : records) wins_first += (r.winner == "v0");
    // 2000 flips at p = 0.5: mean 1000, sd ~22
    CHECK(wins_first > 870);
    CHECK(wins_first < 1130);
}

TEST_CASE("empirical win rates sit inside binomial confidence bands") {
    const int n = 20;
    const int per_pair = 50;
    SynthConfig config;
    for (int i = 0; i < n; ++i) config.true_scores.push_back(1.5 - 3.0 * i / (n - 1.0));
    config.comparisons_per_pair = per_pair;
    config.seed = 2025;

    ComparisonGraph g = ingest_comparisons(generate(config));
    int total_pairs = 0;
    int inside = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double p = bradley_terry_probability(config.true_scores[i], config.true_scores[j]);
            double se = std::sqrt(p * (1.0 - p) / per_pair);
            int gi = g.index_of("v" + std::to_string(i));
            int gj = g.index_of("v" + std::to_string(j));
            double observed = winning_rate(g, gi, gj);
            ++total_pairs;
            if (std::abs(observed - p) <= 3.0 * se + 1e-12) ++inside;
        }
    }
    CHECK(total_pairs == n * (n - 1) / 2);
    // 3 standard errors cover ~99.7%; require at least 95% of pairs inside
    CHECK(static_cast<double>(inside) >= 0.95 * total_pairs);
}

TEST_CASE("generated records are valid pairdata input") {
    SynthConfig config;
    config.true_scores = {0.5, 0.0, -0.5};
    config.comparisons_per_pair = 4;
    config.seed = 11;
    ComparisonGraph g = ingest_comparisons(generate(config));
    CHECK(g.item_count() == 3);
    CHECK(g.total_comparisons() == 3 * 4);
}
