#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qmax {

/// Raised by parse_graph; carries the 1-based line number of the offending line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct Edge {
    int i = 0;  // 0-indexed
    int j = 0;
    double weight = 0.0;
};

/// Weighted-MaxCut instance. Vertices are 0-indexed here; files use 1-indexed ids.
class WeightedGraph {
public:
    WeightedGraph() = default;
    explicit WeightedGraph(int num_vertices);

    /// Validates endpoints, rejects self loops, duplicates, negative or non-finite weights.
    void add_edge(int i, int j, double weight);

    int num_vertices() const noexcept { return num_vertices_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::size_t num_edges() const noexcept { return edges_.size(); }
    double total_weight() const noexcept;

    /// Complete graph on n vertices with unit weights.
    static WeightedGraph complete(int n);

private:
    int num_vertices_ = 0;
    std::vector<Edge> edges_;
};

/// One subset label per vertex. The text form lists x_1 x_2 ... x_|V|, so
/// character k is the label of vertex k+1, which is bit k of the basis index.
struct CutAssignment {
    std::vector<std::uint8_t> bits;

    static CutAssignment from_index(std::uint64_t index, int num_vertices);
    static CutAssignment from_string(std::string_view text);
    std::uint64_t to_index() const;
    std::string to_string() const;
    CutAssignment complement() const;
    std::size_t size() const noexcept { return bits.size(); }

    friend bool operator==(const CutAssignment&, const CutAssignment&) = default;
};

WeightedGraph parse_graph(std::istream& in);
WeightedGraph parse_graph_text(std::string_view text);
WeightedGraph load_graph_file(const std::string& path);

double cut_value(const WeightedGraph& g, const CutAssignment& x);

/// Cut weight of the basis index k (bit i of k is the label of vertex i).
double cut_value_of_index(const WeightedGraph& g, std::uint64_t k);

struct MaxCutResult {
    double max_value = 0.0;
    std::vector<CutAssignment> maximizers;  // ascending basis index
};

inline constexpr int kMaxBruteForceVertices = 24;

/// Exhaustive enumeration over all 2^|V| assignments. Ties are collected with a
/// relative tolerance of 1e-12 so equal cuts summed in different orders agree.
/// The enumeration range is split across `threads` workers; the result does not
/// depend on the split.
MaxCutResult brute_force_max_cut(const WeightedGraph& g, unsigned threads = 1);

}  // namespace qmax
