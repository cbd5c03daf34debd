#include "ugvq/hodge.hpp"

#include "ugvq/errors.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <tuple>

namespace ugvq {

namespace {

constexpr double kSolveTolerance = 1e-10;
// Above this triangle count the curl potentials are solved iteratively on
// the sparse triangle Laplacian instead of by dense factorization.
constexpr int kDenseTriangleLimit = 4000;

void validate(const EdgeFlow& flow, const EdgeWeights& weights) {
    if (weights.empty()) throw NoEdges();
    for (const auto& [edge, w] : weights) {
        if (w <= 0.0) throw InputError("edge weights must be positive");
        if (edge.first < 0 || edge.second >= flow.size() || edge.first >= edge.second) {
            throw InputError("edge endpoints out of range");
        }
    }
    for (const auto& [edge, v] : flow.entries()) {
        if (weights.find(edge) == weights.end()) {
            throw InputError("flow support is not a subset of weighted edges");
        }
    }
}

Eigen::VectorXd subtract_component_means(Eigen::VectorXd s, const std::vector<int>& component) {
    int n_components = component.empty() ? 0 : *std::max_element(component.begin(), component.end()) + 1;
    Eigen::VectorXd sums = Eigen::VectorXd::Zero(n_components);
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(n_components);
    for (int i = 0; i < s.size(); ++i) {
        sums[component[i]] += s[i];
        counts[component[i]] += 1.0;
    }
    for (int i = 0; i < s.size(); ++i) {
        s[i] -= sums[component[i]] / counts[component[i]];
    }
    return s;
}

std::vector<Triangle> find_triangles(int n, const EdgeWeights& weights) {
    std::vector<std::set<int>> adjacency(n);
    for (const auto& [edge, w] : weights) {
        adjacency[edge.first].insert(edge.second);
        adjacency[edge.second].insert(edge.first);
    }
    std::vector<Triangle> triangles;
    for (const auto& [edge, w] : weights) {
        int i = edge.first, j = edge.second;
        for (int k : adjacency[j]) {
            if (k <= j) continue;
            if (adjacency[i].count(k)) triangles.push_back({i, j, k});
        }
    }
    std::sort(triangles.begin(), triangles.end(), [](const Triangle& a, const Triangle& b) {
        return std::tie(a.i, a.j, a.k) < std::tie(b.i, b.j, b.k);
    });
    return triangles;
}

// Curl incidence: row per triangle (i,j,k), +1 on edges (i,j),(j,k) and -1
// on (i,k), matching the oriented cycle i->j->k->i over edges stored i<j.
Eigen::SparseMatrix<double> curl_matrix(const std::vector<Triangle>& triangles,
                                        const std::map<EdgeKey, int>& edge_index,
                                        int edge_count) {
    Eigen::SparseMatrix<double> b(static_cast<int>(triangles.size()), edge_count);
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(triangles.size() * 3);
    for (int t = 0; t < static_cast<int>(triangles.size()); ++t) {
        const Triangle& tri = triangles[t];
        entries.emplace_back(t, edge_index.at({tri.i, tri.j}), 1.0);
        entries.emplace_back(t, edge_index.at({tri.j, tri.k}), 1.0);
        entries.emplace_back(t, edge_index.at({tri.i, tri.k}), -1.0);
    }
    b.setFromTriplets(entries.begin(), entries.end());
    return b;
}

} // namespace

std::vector<int> connected_components(int n, const EdgeWeights& weights) {
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const auto& [edge, w] : weights) {
        int a = find(edge.first), b = find(edge.second);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::vector<int> component(n, -1);
    int next = 0;
    for (int i = 0; i < n; ++i) {
        int root = find(i);
        if (component[root] < 0) component[root] = next++;
        component[i] = component[root];
    }
    return component;
}

Eigen::VectorXd global_scores(const EdgeFlow& flow, const EdgeWeights& weights) {
    validate(flow, weights);
    const int n = flow.size();

    Eigen::MatrixXd laplacian = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    for (const auto& [edge, w] : weights) {
        int i = edge.first, j = edge.second;
        double y = flow.get(i, j);
        laplacian(i, i) += w;
        laplacian(j, j) += w;
        laplacian(i, j) -= w;
        laplacian(j, i) -= w;
        rhs[i] += w * y;
        rhs[j] -= w * y;
    }

    // Complete orthogonal decomposition gives the minimum-norm solution of
    // the singular system; that solution is orthogonal to the per-component
    // constant vectors, which is exactly the zero-mean gauge.
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(laplacian);
    Eigen::VectorXd s = cod.solve(rhs);

    double rhs_norm = rhs.norm();
    if (rhs_norm > 0.0) {
        double residual = (laplacian * s - rhs).norm() / rhs_norm;
        if (residual > kSolveTolerance) {
            throw SingularSystem("score solve residual " + std::to_string(residual) +
                                 " exceeds tolerance");
        }
    }

    return subtract_component_means(std::move(s), connected_components(n, weights));
}

Eigen::VectorXd global_scores(const ComparisonGraph& g) {
    return global_scores(preference_matrix(g), g.edge_weights());
}

HodgeDecomposition hodge_decompose(const EdgeFlow& flow, const EdgeWeights& weights) {
    validate(flow, weights);
    const int n = flow.size();

    HodgeDecomposition d;
    d.scores = global_scores(flow, weights);
    d.weights = weights;
    d.flow = EdgeFlow(n);
    d.global = EdgeFlow(n);
    d.curl = EdgeFlow(n);
    d.harmonic = EdgeFlow(n);

    std::vector<EdgeKey> edge_list;
    edge_list.reserve(weights.size());
    std::map<EdgeKey, int> edge_index;
    for (const auto& [edge, w] : weights) {
        edge_index[edge] = static_cast<int>(edge_list.size());
        edge_list.push_back(edge);
    }
    const int m = static_cast<int>(edge_list.size());

    Eigen::VectorXd w_vec(m), y_vec(m), grad_vec(m);
    for (int e = 0; e < m; ++e) {
        auto [i, j] = edge_list[e];
        w_vec[e] = weights.at(edge_list[e]);
        y_vec[e] = flow.get(i, j);
        grad_vec[e] = d.scores[i] - d.scores[j];
    }
    Eigen::VectorXd residual = y_vec - grad_vec;

    d.triangles = find_triangles(n, weights);
    const int tau = static_cast<int>(d.triangles.size());

    Eigen::VectorXd curl_vec = Eigen::VectorXd::Zero(m);
    d.triangle_potentials.assign(tau, 0.0);
    if (tau > 0) {
        Eigen::SparseMatrix<double> b_mat = curl_matrix(d.triangles, edge_index, m);
        Eigen::VectorXd phi;
        if (tau <= kDenseTriangleLimit) {
            // min over phi of || W^{1/2} residual - W^{-1/2} B^T phi ||_2
            Eigen::MatrixXd lhs = Eigen::MatrixXd(b_mat.transpose());
            for (int e = 0; e < m; ++e) lhs.row(e) /= std::sqrt(w_vec[e]);
            Eigen::VectorXd rhs = residual.cwiseProduct(w_vec.cwiseSqrt());
            phi = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(lhs).solve(rhs);
        } else {
            Eigen::SparseMatrix<double> winv_bt = b_mat.transpose();
            for (int col = 0; col < winv_bt.outerSize(); ++col) {
                for (Eigen::SparseMatrix<double>::InnerIterator it(winv_bt, col); it; ++it) {
                    it.valueRef() /= w_vec[it.row()];
                }
            }
            Eigen::SparseMatrix<double> normal = b_mat * winv_bt;
            Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
            cg.setTolerance(1e-12);
            cg.setMaxIterations(20 * tau);
            cg.compute(normal);
            phi = cg.solve(b_mat * residual);
        }

        // Normal-equation residual check: B W^-1 B^T phi = B residual. When
        // the right-hand side is zero at rounding level the flow is already
        // curl-free and the relative test is meaningless, so it is skipped.
        Eigen::VectorXd bt_phi = b_mat.transpose() * phi;
        Eigen::VectorXd normal_rhs = b_mat * residual;
        Eigen::VectorXd normal_lhs = b_mat * bt_phi.cwiseQuotient(w_vec);
        double rhs_norm = normal_rhs.norm();
        double flow_scale = residual.cwiseProduct(w_vec.cwiseSqrt()).norm();
        if (rhs_norm > 1e-12 * std::max(1.0, flow_scale) &&
            (normal_lhs - normal_rhs).norm() / rhs_norm > kSolveTolerance) {
            throw SingularSystem("curl potential solve did not reach tolerance");
        }

        curl_vec = bt_phi.cwiseQuotient(w_vec);
        for (int t = 0; t < tau; ++t) d.triangle_potentials[t] = phi[t];
    }

    Eigen::VectorXd harmonic_vec = residual - curl_vec;

    double total_sq = 0.0, total_w_sq = 0.0;
    double grad_sq = 0.0, curl_sq = 0.0, harm_sq = 0.0;
    double grad_w_sq = 0.0, curl_w_sq = 0.0, harm_w_sq = 0.0;
    for (int e = 0; e < m; ++e) {
        auto [i, j] = edge_list[e];
        d.flow.set(i, j, y_vec[e]);
        d.global.set(i, j, grad_vec[e]);
        d.curl.set(i, j, curl_vec[e]);
        d.harmonic.set(i, j, harmonic_vec[e]);
        total_sq += y_vec[e] * y_vec[e];
        grad_sq += grad_vec[e] * grad_vec[e];
        curl_sq += curl_vec[e] * curl_vec[e];
        harm_sq += harmonic_vec[e] * harmonic_vec[e];
        total_w_sq += w_vec[e] * y_vec[e] * y_vec[e];
        grad_w_sq += w_vec[e] * grad_vec[e] * grad_vec[e];
        curl_w_sq += w_vec[e] * curl_vec[e] * curl_vec[e];
        harm_w_sq += w_vec[e] * harmonic_vec[e] * harmonic_vec[e];
    }
    d.flow_frobenius_sq = 2.0 * total_sq;
    if (total_sq > 0.0) {
        d.ratios = {grad_sq / total_sq, curl_sq / total_sq, harm_sq / total_sq};
    }
    if (total_w_sq > 0.0) {
        d.ratios_weighted = {grad_w_sq / total_w_sq, curl_w_sq / total_w_sq,
                             harm_w_sq / total_w_sq};
    }
    return d;
}

HodgeDecomposition hodge_decompose(const ComparisonGraph& g) {
    return hodge_decompose(preference_matrix(g), g.edge_weights());
}

TotalInconsistency total_inconsistency(const HodgeDecomposition& d) {
    if (d.flow_frobenius_sq <= 0.0) throw ZeroFlow();
    return {d.ratios.curl_fraction + d.ratios.harmonic_fraction, d.ratios.curl_fraction,
            d.ratios.harmonic_fraction};
}

std::vector<int> mos_ranking(const Eigen::VectorXd& scores) {
    std::vector<int> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return scores[a] > scores[b]; });
    return order;
}

Eigen::MatrixXd dense_matrix(const EdgeFlow& flow) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(flow.size(), flow.size());
    for (const auto& [edge, v] : flow.entries()) {
        m(edge.first, edge.second) = v;
        m(edge.second, edge.first) = -v;
    }
    return m;
}

Eigen::MatrixXd extrapolated_global_matrix(const HodgeDecomposition& d) {
    const int n = static_cast<int>(d.scores.size());
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m(i, j) = d.scores[i] - d.scores[j];
    }
    return m;
}

} // namespace ugvq
