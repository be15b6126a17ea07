#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include <Eigen/Core>

#include "qmax/graph.hpp"
#include "qmax/params.hpp"
#include "qmax/rng.hpp"

namespace qmax::test {

/// Random simple graph on n vertices. Each pair is an edge with probability
/// `density`; weights are drawn from the quarter-integer grid {0.25, ..., 2}.
inline WeightedGraph random_graph(SplitMix64& rng, int n, double density = 0.6) {
    WeightedGraph g(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (rng.uniform() < density) g.add_edge(i, j, 0.25 * static_cast<double>(1 + rng.below(8)));
        }
    }
    return g;
}

inline QaoaParams random_params(SplitMix64& rng, int p, double hi = std::numbers::pi) {
    QaoaParams params;
    for (int k = 0; k < p; ++k) params.gamma.push_back(rng.uniform(0.0, hi));
    for (int k = 0; k < p; ++k) params.beta.push_back(rng.uniform(0.0, hi));
    return params;
}

inline WeightedGraph single_edge() {
    WeightedGraph g(2);
    g.add_edge(0, 1, 1.0);
    return g;
}

inline WeightedGraph triangle() {
    WeightedGraph g(3);
    g.add_edge(0, 1, 1.0);
    g.add_edge(1, 2, 1.0);
    g.add_edge(0, 2, 1.0);
    return g;
}

/// Cut weight computed edge by edge from explicit bit tests.
inline double oracle_cut(const WeightedGraph& g, std::uint64_t k) {
    double c = 0.0;
    for (const Edge& e : g.edges()) {
        const bool a = ((k >> e.i) & 1U) != 0;
        const bool b = ((k >> e.j) & 1U) != 0;
        if (a != b) c += e.weight;
    }
    return c;
}

inline double oracle_max_cut(const WeightedGraph& g) {
    double best = 0.0;
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << g.num_vertices()); ++k) best = std::max(best, oracle_cut(g, k));
    return best;
}

/// Closed-form p=1 expectation for one unit-weight edge in this code's
/// convention (cost unitary e^{-i gamma 2C}, mixer e^{-i beta sum X}).
inline double single_edge_fp1(double gamma, double beta) {
    return 0.5 + 0.5 * std::sin(4.0 * beta) * std::sin(2.0 * gamma);
}

/// Closed-form p=1 expectation for the unit-weight triangle.
inline double triangle_fp1(double gamma, double beta) {
    const double g2 = 2.0 * gamma;
    const double per_edge = 0.5 + 0.5 * std::sin(4.0 * beta) * std::sin(g2) * std::cos(g2) -
                            0.25 * std::sin(2.0 * beta) * std::sin(2.0 * beta) * (1.0 - std::cos(2.0 * g2));
    return 3.0 * per_edge;
}

inline double total_variation(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
    return 0.5 * (p - q).cwiseAbs().sum();
}

}  // namespace qmax::test
