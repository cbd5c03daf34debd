#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ugvq/cluster.hpp"
#include "ugvq/errors.hpp"

#include <algorithm>
#include <random>
#include <vector>

using namespace ugvq;

namespace {

// Directed two-block graph: dense uniform weights inside each block, no
// cross edges.
Eigen::MatrixXd two_block(int block_a, int block_b, double weight) {
    int n = block_a + block_b;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            bool same = (i < block_a) == (j < block_a);
            if (same) m(i, j) = weight;
        }
    }
    return m;
}

// Enumerates all partitions of {0..n-1} via restricted growth strings and
// returns the best modularity found.
double exhaustive_best_modularity(const Eigen::MatrixXd& m,
                                  std::vector<std::vector<int>>* best_partition = nullptr) {
    int n = static_cast<int>(m.rows());
    std::vector<int> code(n, 0);
    double best = -1e9;
    while (true) {
        int blocks = *std::max_element(code.begin(), code.end()) + 1;
        std::vector<std::vector<int>> clusters(blocks);
        for (int i = 0; i < n; ++i) clusters[code[i]].push_back(i);
        double q = modularity(m, clusters);
        if (q > best) {
            best = q;
            if (best_partition) *best_partition = clusters;
        }
        // next restricted growth string
        int i = n - 1;
        while (i > 0) {
            int cap = *std::max_element(code.begin(), code.begin() + i) + 1;
            if (code[i] < cap) {
                ++code[i];
                std::fill(code.begin() + i + 1, code.end(), 0);
                break;
            }
            --i;
        }
        if (i == 0) break;
    }
    return best;
}

} // namespace

TEST_CASE("relevance matrix near the delta -> 0 limit is the identity") {
    Eigen::MatrixXd m(3, 3);
    m << 0, 1, 2, 3, 0, 1, 1, 1, 0;
    RelevanceMatrix rm = relevance_matrix(m, 1e-9);
    CHECK((rm.R - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-7);
}

TEST_CASE("closed form 2x2 relevance") {
    Eigen::MatrixXd m(2, 2);
    m << 0, 1, 1, 0;
    RelevanceMatrix rm = relevance_matrix(m, 0.5);
    CHECK(rm.R(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(rm.R(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(rm.R(1, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(rm.R(1, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(rm.total == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("relevance columns sum to 1 for random matrices") {
    std::mt19937 rng(42);
    for (double delta : {0.01, 0.15, 0.5, 0.81, 0.99}) {
        Eigen::MatrixXd m(5, 5);
        for (int i = 0; i < 5; ++i) {
            for (int j = 0; j < 5; ++j) m(i, j) = i == j ? 0.0 : static_cast<double>(rng() % 7);
        }
        m.col(3).setZero(); // sink column handled by uniform fallback
        RelevanceMatrix rm = relevance_matrix(m, delta);
        for (int j = 0; j < 5; ++j) {
            CHECK(rm.R.col(j).sum() == doctest::Approx(1.0).epsilon(1e-10));
        }
        CHECK((rm.R.array() >= 0.0).all());
    }
}

TEST_CASE("printed formula variant skips the inverse") {
    Eigen::MatrixXd m(2, 2);
    m << 0, 1, 1, 0;
    RelevanceMatrix rm = relevance_matrix(m, 0.5, true);
    CHECK(rm.R(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rm.R(0, 1) == doctest::Approx(-0.25).epsilon(1e-12));
    // columns do not sum to 1; that is the point of the flag
    CHECK(rm.R.col(0).sum() != doctest::Approx(1.0));
}

TEST_CASE("delta domain") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
    CHECK_THROWS_AS(relevance_matrix(m, 0.0), InputError);
    CHECK_THROWS_AS(relevance_matrix(m, 1.0), InputError);
    CHECK_THROWS_AS(relevance_matrix(m, 1.5), InputError);
}

TEST_CASE("single compactness on the 2x2 example") {
    Eigen::MatrixXd m(2, 2);
    m << 0, 1, 1, 0;
    RelevanceMatrix rm = relevance_matrix(m, 0.5);

    // empty cluster: (R_ii - R_i* R_*i / B) / B
    double expected_empty = (2.0 / 3.0 - 1.0 * 1.0 / 2.0) / 2.0;
    CHECK(single_compactness(rm, 1, {}) == doctest::Approx(expected_empty).epsilon(1e-12));

    // direct evaluation oracle: C = (2/3 + (1/3 + 1/3) - 1/2) / 2 = 5/12
    CHECK(single_compactness(rm, 1, {0}) == doctest::Approx(5.0 / 12.0).epsilon(1e-12));
}

TEST_CASE("single compactness grows when relevant members join") {
    std::mt19937 rng(9);
    Eigen::MatrixXd m(6, 6);
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) m(i, j) = i == j ? 0.0 : static_cast<double>(rng() % 5 + 1);
    }
    RelevanceMatrix rm = relevance_matrix(m, 0.4);
    std::vector<int> cluster{0};
    double prev = single_compactness(rm, 5, cluster);
    for (int extra : {1, 2, 3}) {
        cluster.push_back(extra);
        double next = single_compactness(rm, 5, cluster);
        CHECK(next > prev); // R_ij + R_ji > 0 for a positive matrix
        prev = next;
    }
}

TEST_CASE("modularity identities") {
    Eigen::MatrixXd m(4, 4);
    std::mt19937 rng(21);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) m(i, j) = i == j ? 0.0 : static_cast<double>(rng() % 6);
    }

    SUBCASE("single all-inclusive cluster gives exactly zero") {
        CHECK(modularity(m, {{0, 1, 2, 3}}) == 0.0);
    }

    SUBCASE("all singletons match the closed form") {
        double a = m.sum();
        double expected = 0.0;
        for (int i = 0; i < 4; ++i) expected -= m.row(i).sum() * m.col(i).sum() / (a * a);
        CHECK(modularity(m, {{0}, {1}, {2}, {3}}) == doctest::Approx(expected).epsilon(1e-13));
    }

    SUBCASE("partition must be a disjoint cover") {
        CHECK_THROWS_AS(modularity(m, {{0, 1}, {1, 2, 3}}), InputError);
        CHECK_THROWS_AS(modularity(m, {{0, 1}, {2}}), InputError);
        CHECK_THROWS_AS(modularity(Eigen::MatrixXd::Zero(2, 2), {{0}, {1}}), EmptyGraph);
    }
}

TEST_CASE("two disconnected cliques: modularity matches brute-force double sum") {
    Eigen::MatrixXd m = two_block(3, 3, 2.0);
    std::vector<std::vector<int>> partition{{0, 1, 2}, {3, 4, 5}};
    double q = modularity(m, partition);

    // exhaustive definition-level double sum
    double a = m.sum();
    double expected = 0.0;
    for (const auto& cluster : partition) {
        for (int i : cluster) {
            for (int j : cluster) {
                expected += m(i, j) - m.row(i).sum() * m.col(j).sum() / a;
            }
        }
    }
    expected /= a;
    CHECK(q == doctest::Approx(expected).epsilon(1e-12));
    CHECK(q == doctest::Approx(0.5).epsilon(1e-12)); // two equal blocks, no cross edges
}

TEST_CASE("modularity is invariant under relabeling") {
    std::mt19937 rng(1234);
    Eigen::MatrixXd m(6, 6);
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) m(i, j) = i == j ? 0.0 : static_cast<double>(rng() % 4);
    }
    std::vector<std::vector<int>> partition{{0, 2}, {1, 3, 5}, {4}};
    double q = modularity(m, partition);

    // permute items
    std::vector<int> perm{3, 0, 5, 1, 4, 2};
    Eigen::MatrixXd pm(6, 6);
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) pm(perm[i], perm[j]) = m(i, j);
    }
    std::vector<std::vector<int>> ppart;
    for (const auto& cluster : partition) {
        std::vector<int> c;
        for (int i : cluster) c.push_back(perm[i]);
        ppart.push_back(c);
    }
    std::reverse(ppart.begin(), ppart.end()); // relabel clusters too
    CHECK(modularity(pm, ppart) == doctest::Approx(q).epsilon(1e-13));
}

TEST_CASE("merge gain equals the full recomputation delta") {
    std::mt19937 rng(8);
    Eigen::MatrixXd m(7, 7);
    for (int i = 0; i < 7; ++i) {
        for (int j = 0; j < 7; ++j) m(i, j) = i == j ? 0.0 : static_cast<double>(rng() % 5);
    }
    std::vector<std::vector<int>> partition{{0, 1}, {2, 3}, {4, 5, 6}};
    double q_before = modularity(m, partition);
    double gain = modularity_merge_gain(m, partition[0], partition[2]);
    std::vector<std::vector<int>> merged{{0, 1, 4, 5, 6}, {2, 3}};
    double q_after = modularity(m, merged);
    CHECK(q_after - q_before == doctest::Approx(gain).epsilon(1e-12));
}

TEST_CASE("single node clusters trivially") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(1, 1);
    ClusterPartition p = cluster_graph(m, 0.5);
    CHECK(p.clusters == std::vector<std::vector<int>>{{0}});
    CHECK(p.modularity == 0.0);
}

TEST_CASE("planted two-block graphs are recovered and match exhaustive search") {
    Eigen::MatrixXd m = two_block(4, 4, 3.0);
    for (double delta : {0.15, 0.5, 0.81}) {
        ClusterPartition p = cluster_graph(m, delta);
        REQUIRE(p.clusters.size() == 2);
        CHECK(p.clusters[0] == std::vector<int>{0, 1, 2, 3});
        CHECK(p.clusters[1] == std::vector<int>{4, 5, 6, 7});

        std::vector<std::vector<int>> best_partition;
        double best = exhaustive_best_modularity(m, &best_partition);
        CHECK(p.modularity == doctest::Approx(best).epsilon(1e-12));
        CHECK(best_partition == p.clusters);
    }
}

TEST_CASE("uniform complete graph collapses under greedy merging") {
    int n = 5;
    Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n, n, 1.0);
    m.diagonal().setZero();
    ClusterPartition p = cluster_graph(m, 0.5);
    // no merge can strictly increase Q on a fully uniform graph; replaying
    // the greedy merge over the final partition must find no positive gain
    for (std::size_t a = 0; a < p.clusters.size(); ++a) {
        for (std::size_t b = a + 1; b < p.clusters.size(); ++b) {
            CHECK(modularity_merge_gain(m, p.clusters[a], p.clusters[b]) <= 1e-12);
        }
    }
    CHECK(p.modularity == doctest::Approx(modularity(m, p.clusters)).epsilon(1e-12));
}

TEST_CASE("clustering is deterministic") {
    std::mt19937 rng(55);
    Eigen::MatrixXd m(6, 6);
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) m(i, j) = i == j ? 0.0 : static_cast<double>(rng() % 3);
    }
    ClusterPartition a = cluster_graph(m, 0.3);
    ClusterPartition b = cluster_graph(m, 0.3);
    CHECK(a.clusters == b.clusters);
    CHECK(a.assignment == b.assignment);
    CHECK(a.modularity == b.modularity);
}

TEST_CASE("partition modularity matches recomputation from scratch") {
    std::mt19937 rng(1010);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::MatrixXd m(6, 6);
        for (int i = 0; i < 6; ++i) {
            for (int j = 0; j < 6; ++j) m(i, j) = i == j ? 0.0 : static_cast<double>(rng() % 4);
        }
        if (m.sum() == 0.0) continue;
        ClusterPartition p = cluster_graph(m, 0.4);
        CHECK(p.modularity == doctest::Approx(modularity(m, p.clusters)).epsilon(1e-12));
    }
}

TEST_CASE("sweep") {
    SUBCASE("single node sweep row") {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(1, 1);
        auto rows = sweep_restart(m, {0.5});
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].delta == 0.5);
        CHECK(rows[0].modularity == 0.0);
        CHECK(rows[0].cluster_count == 1);
    }

    SUBCASE("planted two-block recovery across a grid") {
        Eigen::MatrixXd m = two_block(4, 4, 2.0);
        auto rows = sweep_restart(m, {0.1, 0.3, 0.5, 0.7, 0.9});
        for (const auto& row : rows) CHECK(row.cluster_count == 2);
    }

    SUBCASE("default grid has 99 rows") {
        auto grid = default_restart_grid();
        CHECK(grid.size() == 99);
        CHECK(grid.front() == doctest::Approx(0.01));
        CHECK(grid.back() == doctest::Approx(0.99));
    }
}
