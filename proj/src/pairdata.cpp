#include "ugvq/pairdata.hpp"

#include "ugvq/csv.hpp"
#include "ugvq/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

namespace ugvq {

int ComparisonGraph::intern(const std::string& item) {
    auto it = index_.find(item);
    if (it != index_.end()) return it->second;
    int id = static_cast<int>(items_.size());
    items_.push_back(item);
    index_.emplace(item, id);
    return id;
}

int ComparisonGraph::index_of(const std::string& item) const {
    auto it = index_.find(item);
    return it == index_.end() ? -1 : it->second;
}

void ComparisonGraph::add_result(const std::string& a, const std::string& b,
                                 const std::string& winner) {
    if (a == b) throw SelfComparison(a);
    if (winner != a && winner != b) throw UnknownWinner(winner, a, b);
    int ia = intern(a);
    int ib = intern(b);
    int iw = (winner == a) ? ia : ib;
    int il = (winner == a) ? ib : ia;
    wins_[{iw, il}] += 1;
}

void ComparisonGraph::add_count(const std::string& winner, const std::string& loser,
                                std::int64_t count) {
    if (winner == loser) throw SelfComparison(winner);
    if (count < 0) throw ParseError("negative comparison count for '" + winner + "' vs '" + loser + "'");
    int iw = intern(winner);
    int il = intern(loser);
    if (count > 0) wins_[{iw, il}] += count;
}

std::int64_t ComparisonGraph::wins(int i, int j) const {
    auto it = wins_.find({i, j});
    return it == wins_.end() ? 0 : it->second;
}

double ComparisonGraph::weight(int i, int j) const {
    return static_cast<double>(wins(i, j) + wins(j, i));
}

std::vector<EdgeKey> ComparisonGraph::edges() const {
    std::vector<EdgeKey> result;
    for (const auto& [key, count] : wins_) {
        if (count <= 0) continue;
        EdgeKey e = make_edge(key.first, key.second);
        if (result.empty() || result.back() != e) result.push_back(e);
    }
    std::sort(result.begin(), result.end());
    result.erase(std::unique(result.begin(), result.end()), result.end());
    return result;
}

EdgeWeights ComparisonGraph::edge_weights() const {
    EdgeWeights w;
    for (const EdgeKey& e : edges()) w[e] = weight(e.first, e.second);
    return w;
}

std::int64_t ComparisonGraph::total_comparisons() const {
    std::int64_t total = 0;
    for (const auto& [key, count] : wins_) total += count;
    return total;
}

void EdgeFlow::set(int i, int j, double value_i_to_j) {
    if (i == j) throw InputError("edge flow requires two distinct endpoints");
    if (i < j) {
        values_[{i, j}] = value_i_to_j;
    } else {
        values_[{j, i}] = -value_i_to_j;
    }
}

bool EdgeFlow::has(int i, int j) const { return values_.count(make_edge(i, j)) > 0; }

double EdgeFlow::get(int i, int j) const {
    auto it = values_.find(make_edge(i, j));
    if (it == values_.end()) return 0.0;
    return i < j ? it->second : -it->second;
}

double EdgeFlow::edge_norm_sq() const {
    double sum = 0.0;
    for (const auto& [key, v] : values_) sum += v * v;
    return sum;
}

ComparisonGraph ingest_comparisons(const std::vector<ComparisonRecord>& records) {
    ComparisonGraph g;
    for (const auto& r : records) g.add_result(r.item_a, r.item_b, r.winner);
    return g;
}

double winning_rate(const ComparisonGraph& g, int i, int j) {
    std::int64_t mij = g.wins(i, j);
    std::int64_t mji = g.wins(j, i);
    if (mij + mji == 0) {
        const auto& items = g.items();
        throw NeverCompared(i >= 0 && i < g.item_count() ? items[i] : std::to_string(i),
                            j >= 0 && j < g.item_count() ? items[j] : std::to_string(j));
    }
    return static_cast<double>(mij) / static_cast<double>(mij + mji);
}

double winning_rate(const ComparisonGraph& g, const std::string& a, const std::string& b) {
    int i = g.index_of(a);
    int j = g.index_of(b);
    if (i < 0 || j < 0) throw NeverCompared(a, b);
    return winning_rate(g, i, j);
}

EdgeFlow preference_matrix(const ComparisonGraph& g) {
    EdgeFlow flow(g.item_count());
    for (const EdgeKey& e : g.edges()) {
        flow.set(e.first, e.second, 2.0 * winning_rate(g, e.first, e.second) - 1.0);
    }
    return flow;
}

Eigen::MatrixXd adjacency_matrix(const ComparisonGraph& g) {
    int n = g.item_count();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j) m(i, j) = static_cast<double>(g.wins(i, j));
        }
    }
    return m;
}

namespace {

std::int64_t parse_count(const std::string& s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ParseError("expected an integer count, got '" + s + "'");
    }
    return v;
}

} // namespace

ComparisonGraph read_comparisons_csv(std::istream& in) {
    CsvTable table = read_csv(in);
    if (table.header != std::vector<std::string>{"item_a", "item_b", "winner"}) {
        throw ParseError("comparisons CSV requires header item_a,item_b,winner");
    }
    ComparisonGraph g;
    for (const auto& row : table.rows) g.add_result(row[0], row[1], row[2]);
    return g;
}

ComparisonGraph read_aggregated_csv(std::istream& in) {
    CsvTable table = read_csv(in);
    if (table.header != std::vector<std::string>{"item_i", "item_j", "count_i_preferred"}) {
        throw ParseError("aggregated CSV requires header item_i,item_j,count_i_preferred");
    }
    ComparisonGraph g;
    for (const auto& row : table.rows) g.add_count(row[0], row[1], parse_count(row[2]));
    return g;
}

ComparisonGraph read_comparison_file(const std::string& path) {
    {
        std::ifstream probe(path);
        if (!probe) throw ParseError("cannot open '" + path + "'");
        std::string header_line;
        std::getline(probe, header_line);
        if (!header_line.empty() && header_line.back() == '\r') header_line.pop_back();
        if (header_line == "item_i,item_j,count_i_preferred") {
            std::ifstream in(path);
            return read_aggregated_csv(in);
        }
    }
    std::ifstream in(path);
    return read_comparisons_csv(in);
}

void write_aggregated_csv(const ComparisonGraph& g, std::ostream& out) {
    std::vector<std::pair<std::pair<std::string, std::string>, std::int64_t>> rows;
    int n = g.item_count();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            std::int64_t m = g.wins(i, j);
            if (m > 0) rows.push_back({{g.items()[i], g.items()[j]}, m});
        }
    }
    std::sort(rows.begin(), rows.end());
    out << "item_i,item_j,count_i_preferred\n";
    for (const auto& [pair, count] : rows) {
        out << pair.first << ',' << pair.second << ',' << count << '\n';
    }
}

void write_comparisons_csv(const std::vector<ComparisonRecord>& records, std::ostream& out) {
    out << "item_a,item_b,winner\n";
    for (const auto& r : records) out << r.item_a << ',' << r.item_b << ',' << r.winner << '\n';
}

} // namespace ugvq
