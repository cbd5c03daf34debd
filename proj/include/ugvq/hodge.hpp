#pragma once

#include "ugvq/pairdata.hpp"

#include <Eigen/Dense>

#include <vector>

namespace ugvq {

// Oriented 3-clique, always i < j < k; the cycle runs i -> j -> k -> i.
struct Triangle {
    int i, j, k;
};

struct InconsistencyRatios {
    double global_fraction = 0.0;
    double curl_fraction = 0.0;
    double harmonic_fraction = 0.0;
};

// Orthogonal split of a preference flow into gradient, locally cyclic and
// harmonic parts. `ratios` uses plain Frobenius norms over the full skew
// matrices (the reporting default); `ratios_weighted` uses the w-inner
// product in which the three parts are exactly orthogonal.
struct HodgeDecomposition {
    Eigen::VectorXd scores;        // zero mean on each connected component
    EdgeFlow flow;                 // the input Y restricted to observed edges
    EdgeFlow global;               // grad(scores) on observed edges
    EdgeFlow curl;                 // triangle-cyclic part
    EdgeFlow harmonic;             // long-cycle part
    EdgeWeights weights;
    std::vector<Triangle> triangles;
    std::vector<double> triangle_potentials;
    InconsistencyRatios ratios;
    InconsistencyRatios ratios_weighted;
    double flow_frobenius_sq = 0.0; // ||Y||_F^2 of the full skew matrix
};

// Minimizer of sum_ij w_ij (s_i - s_j - Y_ij)^2, i.e. the weighted
// graph-Laplacian system L s = b, gauged to zero mean per connected
// component. Throws NoEdges on an empty edge set and SingularSystem if the
// solve misses a 1e-10 relative residual.
Eigen::VectorXd global_scores(const ComparisonGraph& g);
Eigen::VectorXd global_scores(const EdgeFlow& flow, const EdgeWeights& weights);

HodgeDecomposition hodge_decompose(const ComparisonGraph& g);
HodgeDecomposition hodge_decompose(const EdgeFlow& flow, const EdgeWeights& weights);

struct TotalInconsistency {
    double total;
    double curl_fraction;
    double harmonic_fraction;
};

// curl and harmonic Frobenius fractions of the input flow. Throws ZeroFlow
// when the flow is identically zero.
TotalInconsistency total_inconsistency(const HodgeDecomposition& d);

// Item indices sorted by descending score; ties keep item order. The first
// entry is rank 1 (best).
std::vector<int> mos_ranking(const Eigen::VectorXd& scores);

// Dense skew-symmetric matrix with zeros on unobserved pairs.
Eigen::MatrixXd dense_matrix(const EdgeFlow& flow);

// Full matrix of score differences s_i - s_j for every pair, observed or
// not. Values on unobserved pairs are extrapolation, not data.
Eigen::MatrixXd extrapolated_global_matrix(const HodgeDecomposition& d);

// Connected components of the observed edge set; component id per node.
std::vector<int> connected_components(int n, const EdgeWeights& weights);

} // namespace ugvq
