#include "qmax/diagonals.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace qmax {

namespace {

void check_qubits(int n) {
    if (n < 1 || n > kMaxQubits) throw std::invalid_argument("qubit count must be 1.." + std::to_string(kMaxQubits));
}

}  // namespace

CostDiagonal build_cost_diagonal(const WeightedGraph& g, int n) {
    check_qubits(n);
    if (n < g.num_vertices()) throw std::invalid_argument("need one qubit per vertex");
    const Eigen::Index size = Eigen::Index{1} << n;
    CostDiagonal d{n, Eigen::VectorXd::Zero(size)};
    for (const Edge& e : g.edges()) {
        for (Eigen::Index k = 0; k < size; ++k) {
            const auto bit_i = (k >> e.i) & 1;
            const auto bit_j = (k >> e.j) & 1;
            if (bit_i != bit_j) d.entries[k] += 2.0 * e.weight;
        }
    }
    return d;
}

MixerExponents build_mixer_exponents(int n) {
    check_qubits(n);
    const Eigen::Index size = Eigen::Index{1} << n;
    MixerExponents m{n, Eigen::VectorXi(size)};
    for (Eigen::Index l = 0; l < size; ++l) {
        m.u[l] = 2 * std::popcount(static_cast<unsigned long long>(l)) - n;
    }
    return m;
}

}  // namespace qmax
