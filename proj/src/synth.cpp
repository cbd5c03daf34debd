#include "ugvq/synth.hpp"

#include "ugvq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace ugvq {

double bradley_terry_probability(double score_i, double score_j) {
    return 1.0 / (1.0 + std::exp(-(score_i - score_j)));
}

std::vector<std::string> synth_item_names(int n) {
    std::vector<std::string> names;
    names.reserve(n);
    for (int i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
    return names;
}

namespace {

// Uniform double in [0,1) from the top 53 bits; unlike the distribution
// classes in <random> this is pinned to the generator's bit stream, so a
// fixed seed reproduces the records byte for byte on any platform.
double next_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t next_below(std::mt19937_64& rng, std::uint64_t bound) {
    return rng() % bound; // modulo bias is irrelevant for sampling pair subsets
}

} // namespace

std::vector<ComparisonRecord> generate(const SynthConfig& config) {
    const int n = static_cast<int>(config.true_scores.size());
    if (n < 2) throw InputError("synthetic generation needs at least 2 items");
    if (config.comparisons_per_pair < 1) throw InputError("comparisons_per_pair must be >= 1");
    if (config.pair_coverage <= 0.0 || config.pair_coverage > 1.0) {
        throw InputError("pair_coverage must lie in (0,1]");
    }

    std::vector<std::string> names = synth_item_names(n);
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
    }

    std::mt19937_64 rng(config.seed);
    std::size_t keep = pairs.size();
    if (config.pair_coverage < 1.0) {
        keep = static_cast<std::size_t>(
            std::llround(config.pair_coverage * static_cast<double>(pairs.size())));
        keep = std::max<std::size_t>(1, std::min(keep, pairs.size()));
        // Fisher-Yates prefix selection, then restore pair order.
        for (std::size_t i = 0; i < keep; ++i) {
            std::size_t j = i + static_cast<std::size_t>(
                                    next_below(rng, static_cast<std::uint64_t>(pairs.size() - i)));
            std::swap(pairs[i], pairs[j]);
        }
        pairs.resize(keep);
        std::sort(pairs.begin(), pairs.end());
    }

    std::vector<ComparisonRecord> records;
    records.reserve(keep * static_cast<std::size_t>(config.comparisons_per_pair));
    for (const auto& [i, j] : pairs) {
        double p = config.noise_model == NoiseModel::bradley_terry
                       ? bradley_terry_probability(config.true_scores[i], config.true_scores[j])
                       : 0.5;
        for (int c = 0; c < config.comparisons_per_pair; ++c) {
            bool i_wins = next_uniform(rng) < p;
            records.push_back({names[i], names[j], i_wins ? names[i] : names[j]});
        }
    }
    return records;
}

} // namespace ugvq
