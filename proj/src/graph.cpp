#include "qmax/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>
#include <utility>

namespace qmax {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

WeightedGraph::WeightedGraph(int num_vertices) : num_vertices_(num_vertices) {
    if (num_vertices < 1) {
        throw std::invalid_argument("graph needs at least one vertex");
    }
}

void WeightedGraph::add_edge(int i, int j, double weight) {
    if (i < 0 || i >= num_vertices_ || j < 0 || j >= num_vertices_) {
        throw std::out_of_range("edge endpoint out of range");
    }
    if (i == j) {
        throw std::invalid_argument("self loops are not allowed");
    }
    if (!std::isfinite(weight)) {
        throw std::invalid_argument("edge weight must be finite");
    }
    if (weight < 0.0) {
        throw std::invalid_argument("negative edge weights are not supported");
    }
    for (const Edge& e : edges_) {
        if ((e.i == i && e.j == j) || (e.i == j && e.j == i)) {
            throw std::invalid_argument("duplicate edge");
        }
    }
    edges_.push_back({i, j, weight});
}

double WeightedGraph::total_weight() const noexcept {
    double sum = 0.0;
    for (const Edge& e : edges_) sum += e.weight;
    return sum;
}

WeightedGraph WeightedGraph::complete(int n) {
    WeightedGraph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.add_edge(i, j, 1.0);
    return g;
}

CutAssignment CutAssignment::from_index(std::uint64_t index, int num_vertices) {
    CutAssignment x;
    x.bits.resize(static_cast<std::size_t>(num_vertices));
    for (int i = 0; i < num_vertices; ++i) x.bits[i] = static_cast<std::uint8_t>((index >> i) & 1U);
    return x;
}

CutAssignment CutAssignment::from_string(std::string_view text) {
    CutAssignment x;
    for (char c : text) {
        if (c != '0' && c != '1') throw std::invalid_argument("bit string must contain only 0 and 1");
        x.bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return x;
}

std::uint64_t CutAssignment::to_index() const {
    if (bits.size() > 64) throw std::length_error("assignment too long for a basis index");
    std::uint64_t k = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) k |= static_cast<std::uint64_t>(bits[i] & 1U) << i;
    return k;
}

std::string CutAssignment::to_string() const {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
}

CutAssignment CutAssignment::complement() const {
    CutAssignment x = *this;
    for (auto& b : x.bits) b = static_cast<std::uint8_t>(b ^ 1U);
    return x;
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

WeightedGraph parse_graph(std::istream& in) {
    std::string raw;
    std::size_t line_no = 0;
    WeightedGraph g;
    bool have_header = false;
    std::set<std::pair<int, int>> seen;

    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;

        std::istringstream fields{std::string(line)};
        if (!have_header) {
            long long n = 0;
            std::string extra;
            if (!(fields >> n) || (fields >> extra)) throw ParseError(line_no, "expected vertex count");
            if (n < 1 || n > 1'000'000) throw ParseError(line_no, "vertex count out of range");
            g = WeightedGraph(static_cast<int>(n));
            have_header = true;
            continue;
        }

        long long i = 0;
        long long j = 0;
        std::string weight_text;
        std::string extra;
        if (!(fields >> i >> j >> weight_text) || (fields >> extra)) {
            throw ParseError(line_no, "expected \"i j w\"");
        }
        double w = 0.0;
        try {
            std::size_t used = 0;
            w = std::stod(weight_text, &used);
            if (used != weight_text.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw ParseError(line_no, "malformed weight '" + weight_text + "'");
        }
        const long long n = g.num_vertices();
        if (i < 1 || i > n) throw ParseError(line_no, "vertex " + std::to_string(i) + " out of range");
        if (j < 1 || j > n) throw ParseError(line_no, "vertex " + std::to_string(j) + " out of range");
        if (i == j) throw ParseError(line_no, "self loop on vertex " + std::to_string(i));
        if (!std::isfinite(w)) throw ParseError(line_no, "non-finite weight");
        if (w < 0.0) throw ParseError(line_no, "negative weight");
        const std::pair<int, int> key{static_cast<int>(std::min(i, j)), static_cast<int>(std::max(i, j))};
        if (!seen.insert(key).second) {
            throw ParseError(line_no, "duplicate edge " + std::to_string(i) + " " + std::to_string(j));
        }
        g.add_edge(static_cast<int>(i) - 1, static_cast<int>(j) - 1, w);
    }
    if (!have_header) throw ParseError(line_no, "missing vertex count");
    return g;
}

WeightedGraph parse_graph_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_graph(in);
}

WeightedGraph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file '" + path + "'");
    return parse_graph(in);
}

double cut_value(const WeightedGraph& g, const CutAssignment& x) {
    if (x.size() != static_cast<std::size_t>(g.num_vertices())) {
        throw std::invalid_argument("assignment length does not match vertex count");
    }
    double sum = 0.0;
    for (const Edge& e : g.edges()) {
        if (x.bits[e.i] != x.bits[e.j]) sum += e.weight;
    }
    return sum;
}

double cut_value_of_index(const WeightedGraph& g, std::uint64_t k) {
    double sum = 0.0;
    for (const Edge& e : g.edges()) {
        if (((k >> e.i) & 1U) != ((k >> e.j) & 1U)) sum += e.weight;
    }
    return sum;
}

MaxCutResult brute_force_max_cut(const WeightedGraph& g, unsigned threads) {
    const int n = g.num_vertices();
    if (n > kMaxBruteForceVertices) {
        throw std::invalid_argument("brute force limited to " + std::to_string(kMaxBruteForceVertices) +
                                    " vertices");
    }
    const std::uint64_t total = std::uint64_t{1} << n;
    threads = std::clamp<unsigned>(threads, 1U, 64U);
    const std::uint64_t chunks = std::min<std::uint64_t>(threads, total);

    auto run_chunks = [&](auto&& body) {
        std::vector<std::thread> workers;
        for (std::uint64_t c = 1; c < chunks; ++c) {
            workers.emplace_back(body, c, total * c / chunks, total * (c + 1) / chunks);
        }
        body(0, 0, total / chunks);
        for (auto& w : workers) w.join();
    };

    // Pass 1: exact maximum (per-index values are computed identically in every chunk).
    std::vector<double> local_max(chunks, 0.0);
    run_chunks([&](std::uint64_t c, std::uint64_t lo, std::uint64_t hi) {
        double best = 0.0;
        for (std::uint64_t k = lo; k < hi; ++k) best = std::max(best, cut_value_of_index(g, k));
        local_max[c] = best;
    });
    const double best = *std::max_element(local_max.begin(), local_max.end());
    const double floor = best - 1e-12 * std::max(1.0, std::abs(best));

    // Pass 2: every index within the tie tolerance, merged in ascending order.
    std::vector<std::vector<std::uint64_t>> local_args(chunks);
    run_chunks([&](std::uint64_t c, std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t k = lo; k < hi; ++k) {
            if (cut_value_of_index(g, k) >= floor) local_args[c].push_back(k);
        }
    });

    MaxCutResult result;
    result.max_value = best;
    for (const auto& args : local_args)
        for (auto k : args) result.maximizers.push_back(CutAssignment::from_index(k, n));
    return result;
}

}  // namespace qmax
