#pragma once

#include <Eigen/Dense>

#include <vector>

namespace ugvq {

// Random-walk-with-restart relevance. R = (1-delta) * (I - delta*Mtilde)^-1
// where Mtilde is the column-normalized adjacency; every column of R sums
// to 1. `total` caches B, the sum of all entries of R (equals n).
struct RelevanceMatrix {
    Eigen::MatrixXd R;
    double total;
    double delta;
    Eigen::VectorXd row_sums;
    Eigen::VectorXd col_sums;
};

// Set `printed_formula` to evaluate R = (1-delta)(I - delta*Mtilde) without
// the inverse, for side-by-side comparison; that variant is not a random
// walk relevance and its columns do not sum to 1.
RelevanceMatrix relevance_matrix(const Eigen::MatrixXd& adjacency, double delta,
                                 bool printed_formula = false);

// C(i, G') = (R_ii + sum_{j in G'} (R_ij + R_ji) - R_i* R_*i / B) / B.
double single_compactness(const RelevanceMatrix& rm, int node, const std::vector<int>& cluster);

// Directed modularity with d_in = row sums and d_out = column sums of the
// adjacency. The partition must cover all nodes disjointly.
double modularity(const Eigen::MatrixXd& adjacency, const std::vector<std::vector<int>>& clusters);

// Q gain of merging two clusters, the same increment the greedy phase uses.
double modularity_merge_gain(const Eigen::MatrixXd& adjacency, const std::vector<int>& cluster_a,
                             const std::vector<int>& cluster_b);

struct ClusterPartition {
    std::vector<int> assignment;              // node -> cluster index
    std::vector<std::vector<int>> clusters;   // ascending node lists
    double modularity;
};

// Two-phase clustering: grow local clusters by maximal single compactness
// (stop when the best candidate no longer strictly improves on the last
// accepted one), then greedily merge cluster pairs while some merge has a
// strictly positive modularity gain. Fully deterministic.
ClusterPartition cluster_graph(const Eigen::MatrixXd& adjacency, double delta);

struct SweepRow {
    double delta;
    double modularity;
    int cluster_count;
};

std::vector<SweepRow> sweep_restart(const Eigen::MatrixXd& adjacency,
                                    const std::vector<double>& grid);

// 0.01 .. 0.99 in steps of 0.01 (99 values).
std::vector<double> default_restart_grid();

} // namespace ugvq
