#include "ugvq/cluster.hpp"

#include "ugvq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ugvq {

RelevanceMatrix relevance_matrix(const Eigen::MatrixXd& adjacency, double delta,
                                 bool printed_formula) {
    if (delta <= 0.0 || delta >= 1.0) throw InputError("restart probability must lie in (0,1)");
    if ((adjacency.array() < 0.0).any()) throw InputError("adjacency entries must be nonnegative");
    const int n = static_cast<int>(adjacency.rows());
    if (adjacency.cols() != n) throw InputError("adjacency matrix must be square");

    // Column-normalize; sink columns become uniform so the walk stays stochastic.
    Eigen::MatrixXd transition(n, n);
    for (int j = 0; j < n; ++j) {
        double col_sum = adjacency.col(j).sum();
        if (col_sum > 0.0) {
            transition.col(j) = adjacency.col(j) / col_sum;
        } else {
            transition.col(j).setConstant(1.0 / static_cast<double>(n));
        }
    }

    RelevanceMatrix rm;
    rm.delta = delta;
    if (printed_formula) {
        rm.R = (1.0 - delta) *
               (Eigen::MatrixXd::Identity(n, n) - delta * transition);
    } else {
        Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - delta * transition;
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
        rm.R = (1.0 - delta) * lu.solve(Eigen::MatrixXd::Identity(n, n));
        double residual = (system * rm.R / (1.0 - delta) -
                           Eigen::MatrixXd::Identity(n, n)).norm();
        if (!std::isfinite(residual) || residual > 1e-8 * n) {
            throw SingularSystem("RWR system solve failed (delta too close to 1?)");
        }
    }
    rm.total = rm.R.sum();
    rm.row_sums = rm.R.rowwise().sum();
    rm.col_sums = rm.R.colwise().sum();
    return rm;
}

double single_compactness(const RelevanceMatrix& rm, int node, const std::vector<int>& cluster) {
    const int n = static_cast<int>(rm.R.rows());
    if (node < 0 || node >= n) throw InputError("node index out of range");
    double acc = rm.R(node, node);
    for (int j : cluster) {
        if (j == node) throw InputError("single compactness requires node outside the cluster");
        acc += rm.R(node, j) + rm.R(j, node);
    }
    acc -= rm.row_sums[node] * rm.col_sums[node] / rm.total;
    return acc / rm.total;
}

namespace {

struct DegreeSums {
    double a_total;               // sum of all adjacency entries
    Eigen::VectorXd in_degree;    // row sums
    Eigen::VectorXd out_degree;   // column sums
};

DegreeSums degree_sums(const Eigen::MatrixXd& adjacency) {
    DegreeSums d;
    d.a_total = adjacency.sum();
    d.in_degree = adjacency.rowwise().sum();
    d.out_degree = adjacency.colwise().sum();
    return d;
}

// Q = (1/A) sum_p (S_p - Din_p * Dout_p / A), with S_p the internal weight
// of cluster p. Factorized so the all-in-one-cluster case cancels exactly.
double modularity_from_sums(const Eigen::MatrixXd& adjacency, const DegreeSums& d,
                            const std::vector<std::vector<int>>& clusters) {
    double q = 0.0;
    for (const auto& members : clusters) {
        double internal = 0.0;
        double din = 0.0, dout = 0.0;
        for (int i : members) {
            for (int j : members) internal += adjacency(i, j);
            din += d.in_degree[i];
            dout += d.out_degree[i];
        }
        q += internal - din * dout / d.a_total;
    }
    return q / d.a_total;
}

} // namespace

double modularity(const Eigen::MatrixXd& adjacency, const std::vector<std::vector<int>>& clusters) {
    const int n = static_cast<int>(adjacency.rows());
    DegreeSums d = degree_sums(adjacency);
    if (d.a_total <= 0.0) throw EmptyGraph();

    std::vector<int> seen(n, 0);
    for (const auto& members : clusters) {
        for (int i : members) {
            if (i < 0 || i >= n) throw InputError("cluster member out of range");
            if (seen[i]++) throw InputError("clusters must be disjoint");
        }
    }
    for (int i = 0; i < n; ++i) {
        if (!seen[i]) throw InputError("clusters must cover every node");
    }
    return modularity_from_sums(adjacency, d, clusters);
}

ClusterPartition cluster_graph(const Eigen::MatrixXd& adjacency, double delta) {
    const int n = static_cast<int>(adjacency.rows());
    RelevanceMatrix rm = relevance_matrix(adjacency, delta);

    // Phase 1: local growth by single compactness.
    std::vector<int> assignment(n, -1);
    std::vector<std::vector<int>> clusters;
    int assigned = 0;
    while (assigned < n) {
        int seed = -1;
        for (int i = 0; i < n; ++i) {
            if (assignment[i] < 0) { seed = i; break; }
        }
        std::vector<int> members{seed};
        assignment[seed] = static_cast<int>(clusters.size());
        ++assigned;

        double last_accepted = -std::numeric_limits<double>::infinity();
        while (assigned < n) {
            int best = -1;
            double best_c = -std::numeric_limits<double>::infinity();
            for (int i = 0; i < n; ++i) {
                if (assignment[i] >= 0) continue;
                double c = single_compactness(rm, i, members);
                if (c > best_c) {
                    best_c = c;
                    best = i;
                }
            }
            if (best < 0 || !(best_c > last_accepted)) break;
            members.push_back(best);
            assignment[best] = static_cast<int>(clusters.size());
            ++assigned;
            last_accepted = best_c;
        }
        std::sort(members.begin(), members.end());
        clusters.push_back(std::move(members));
    }

    // Phase 2: greedy merges while some pair strictly increases Q. An
    // edgeless graph has no modularity to improve; report Q = 0 for it.
    DegreeSums d = degree_sums(adjacency);
    if (d.a_total > 0.0) {
        while (clusters.size() > 1) {
            int best_p = -1, best_r = -1;
            double best_gain = 0.0;
            for (int p = 0; p < static_cast<int>(clusters.size()); ++p) {
                for (int r = p + 1; r < static_cast<int>(clusters.size()); ++r) {
                    double gain = modularity_merge_gain(adjacency, clusters[p], clusters[r]);
                    if (gain > best_gain) {
                        best_gain = gain;
                        best_p = p;
                        best_r = r;
                    }
                }
            }
            if (best_p < 0) break;
            auto& lo = clusters[best_p];
            auto& hi = clusters[best_r];
            lo.insert(lo.end(), hi.begin(), hi.end());
            std::sort(lo.begin(), lo.end());
            clusters.erase(clusters.begin() + best_r);
        }
    }

    ClusterPartition result;
    result.clusters = std::move(clusters);
    result.assignment.assign(n, -1);
    for (int c = 0; c < static_cast<int>(result.clusters.size()); ++c) {
        for (int i : result.clusters[c]) result.assignment[i] = c;
    }
    result.modularity = d.a_total > 0.0 ? modularity_from_sums(adjacency, d, result.clusters) : 0.0;
    return result;
}

double modularity_merge_gain(const Eigen::MatrixXd& adjacency, const std::vector<int>& cluster_a,
                             const std::vector<int>& cluster_b) {
    DegreeSums d = degree_sums(adjacency);
    if (d.a_total <= 0.0) throw EmptyGraph();
    double cross = 0.0;
    double din_a = 0.0, dout_a = 0.0, din_b = 0.0, dout_b = 0.0;
    for (int i : cluster_a) {
        for (int j : cluster_b) cross += adjacency(i, j) + adjacency(j, i);
        din_a += d.in_degree[i];
        dout_a += d.out_degree[i];
    }
    for (int j : cluster_b) {
        din_b += d.in_degree[j];
        dout_b += d.out_degree[j];
    }
    return (cross - (din_a * dout_b + din_b * dout_a) / d.a_total) / d.a_total;
}

std::vector<SweepRow> sweep_restart(const Eigen::MatrixXd& adjacency,
                                    const std::vector<double>& grid) {
    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    for (double delta : grid) {
        ClusterPartition p = cluster_graph(adjacency, delta);
        rows.push_back({delta, p.modularity, static_cast<int>(p.clusters.size())});
    }
    return rows;
}

std::vector<double> default_restart_grid() {
    std::vector<double> grid;
    grid.reserve(99);
    for (int i = 1; i <= 99; ++i) grid.push_back(static_cast<double>(i) / 100.0);
    return grid;
}

} // namespace ugvq
