#pragma once

#include "ugvq/pairdata.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ugvq {

enum class NoiseModel { bradley_terry, coin_flip };

// Synthetic paired-comparison experiment. bradley_terry draws each judgment
// with p(i beats j) = 1 / (1 + exp(-(s_i - s_j))); coin_flip uses p = 0.5
// regardless of the scores, giving a maximally inconsistent baseline.
struct SynthConfig {
    std::vector<double> true_scores;
    int comparisons_per_pair = 1;
    double pair_coverage = 1.0;       // fraction of the n*(n-1)/2 pairs sampled
    NoiseModel noise_model = NoiseModel::bradley_terry;
    std::uint64_t seed = 0;
};

// Deterministic for a fixed config: same seed, bit-identical records.
std::vector<ComparisonRecord> generate(const SynthConfig& config);

// Item names used by the generator: v0, v1, ...
std::vector<std::string> synth_item_names(int n);

double bradley_terry_probability(double score_i, double score_j);

} // namespace ugvq
