#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace ugvq {

// Unordered pair key, always stored with first < second.
using EdgeKey = std::pair<int, int>;

inline EdgeKey make_edge(int i, int j) { return i < j ? EdgeKey{i, j} : EdgeKey{j, i}; }

// Symmetric edge weights w_ij = M_ij + M_ji over observed pairs.
using EdgeWeights = std::map<EdgeKey, double>;

struct ComparisonRecord {
    std::string item_a;
    std::string item_b;
    std::string winner;
};

// Directed win counts over a set of items. Items keep first-appearance order
// and every matrix layout downstream follows it. Pairs that were never
// compared are missing edges, not zero-valued ones.
class ComparisonGraph {
public:
    // Accumulates one judgment: winner must be a or b, a != b.
    void add_result(const std::string& a, const std::string& b, const std::string& winner);
    void add_count(const std::string& winner, const std::string& loser, std::int64_t count);

    int item_count() const { return static_cast<int>(items_.size()); }
    const std::vector<std::string>& items() const { return items_; }
    int index_of(const std::string& item) const; // -1 if unknown

    std::int64_t wins(int i, int j) const;   // M_ij
    double weight(int i, int j) const;       // w_ij
    bool has_edge(int i, int j) const { return weight(i, j) > 0; }
    std::vector<EdgeKey> edges() const;      // observed pairs, ascending
    EdgeWeights edge_weights() const;
    std::int64_t total_comparisons() const;

private:
    int intern(const std::string& item);

    std::vector<std::string> items_;
    std::map<std::string, int> index_;
    std::map<std::pair<int, int>, std::int64_t> wins_; // ordered (i,j), i != j
};

// Skew-symmetric function on observed edges: get(j,i) == -get(i,j).
// Unobserved pairs are absent; get() reports them as 0 for dense rendering,
// has() distinguishes a stored zero from a missing edge.
class EdgeFlow {
public:
    EdgeFlow() = default;
    explicit EdgeFlow(int n) : n_(n) {}

    int size() const { return n_; }
    void set(int i, int j, double value_i_to_j);
    bool has(int i, int j) const;
    double get(int i, int j) const;
    const std::map<EdgeKey, double>& entries() const { return values_; }

    // Sum of squared entries over observed edges (half the full-matrix
    // Frobenius square, since each edge appears twice in the skew matrix).
    double edge_norm_sq() const;

private:
    int n_ = 0;
    std::map<EdgeKey, double> values_; // value stored for orientation first -> second
};

ComparisonGraph ingest_comparisons(const std::vector<ComparisonRecord>& records);

// Observed winning rate pi_ij = M_ij / (M_ij + M_ji). Throws NeverCompared
// when the pair has no judgments.
double winning_rate(const ComparisonGraph& g, int i, int j);
double winning_rate(const ComparisonGraph& g, const std::string& a, const std::string& b);

// Y_ij = 2 * pi_ij - 1 on exactly the observed edges.
EdgeFlow preference_matrix(const ComparisonGraph& g);

// Dense win-count matrix in item order; missing pairs are zeros.
Eigen::MatrixXd adjacency_matrix(const ComparisonGraph& g);

// Raw comparisons CSV: header item_a,item_b,winner, one judgment per row.
ComparisonGraph read_comparisons_csv(std::istream& in);
// Aggregated counts CSV: header item_i,item_j,count_i_preferred.
ComparisonGraph read_aggregated_csv(std::istream& in);
// Dispatch on header; accepts either schema.
ComparisonGraph read_comparison_file(const std::string& path);

// Writes aggregated counts with rows sorted by item-name pairs, so
// write -> ingest -> write is a byte-identical fixed point.
void write_aggregated_csv(const ComparisonGraph& g, std::ostream& out);
void write_comparisons_csv(const std::vector<ComparisonRecord>& records, std::ostream& out);

} // namespace ugvq
