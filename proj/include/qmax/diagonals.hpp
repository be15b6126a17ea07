#pragma once

#include <Eigen/Core>

#include "qmax/graph.hpp"

namespace qmax {

inline constexpr int kMaxQubits = 24;

/// Hardware cost diagonal: entries[k] accumulates 2*w_ij over edges whose
/// endpoint bits differ in k, i.e. twice the cut value of basis state k.
struct CostDiagonal {
    int n = 0;
    Eigen::VectorXd entries;

    Eigen::Index size() const noexcept { return entries.size(); }
};

/// Mixer phase exponents u[l] = 2*popcount(l) - n.
struct MixerExponents {
    int n = 0;
    Eigen::VectorXi u;

    Eigen::Index size() const noexcept { return u.size(); }
};

CostDiagonal build_cost_diagonal(const WeightedGraph& g, int n);
MixerExponents build_mixer_exponents(int n);

/// Phase angles of D_C: -gamma * entries.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> cost_angles(const CostDiagonal& d, Scalar gamma) {
    return -gamma * d.entries.cast<Scalar>();
}

/// Phase angles of D_M: u * beta.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> mixer_angles(const MixerExponents& m, Scalar beta) {
    return beta * m.u.cast<Scalar>();
}

}  // namespace qmax
