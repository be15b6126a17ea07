#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "qmax/diagonals.hpp"
#include "qmax/graph.hpp"
#include "qmax/params.hpp"

/// Floating-point QAOA engines used as the verification ladder.
///
/// The dense engine builds every unitary gate by gate (R_ZZ diagonals,
/// Kronecker powers of R_X) and never touches the Hadamard/diagonal
/// decomposition. The decomposed engine follows the accelerator dataflow
/// (diagonal multiply, +-1 Walsh-Hadamard, 1/2^n per layer) in floating point.
namespace qmax::ref {

template <typename Scalar>
using CVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using CMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

using DenseUnitary = CMatrix<double>;

inline constexpr int kMaxDenseQubits = 12;

/// Scalar complex operation counts.
struct OpCounts {
    std::int64_t mults = 0;
    std::int64_t adds = 0;

    /// Real floating-point operations: 6 per complex multiply, 2 per complex add.
    std::int64_t flops() const noexcept { return 6 * mults + 2 * adds; }

    OpCounts& operator+=(const OpCounts& o) noexcept {
        mults += o.mults;
        adds += o.adds;
        return *this;
    }
};

template <typename Scalar = double>
struct EngineRun {
    CVector<Scalar> state;
    OpCounts counts;
};

template <typename Scalar = double>
CVector<Scalar> uniform_state(int n) {
    const Eigen::Index size = Eigen::Index{1} << n;
    return CVector<Scalar>::Constant(size, std::complex<Scalar>(Scalar(1) / std::sqrt(Scalar(size)), Scalar(0)));
}

/// Diagonal of R_ZZ(theta) on qubits (i, j): e^{-i theta/2} where the bits
/// agree, e^{+i theta/2} where they differ.
template <typename Scalar>
CVector<Scalar> rzz_diagonal(int n, int i, int j, Scalar theta) {
    const Eigen::Index size = Eigen::Index{1} << n;
    const std::complex<Scalar> same = std::polar(Scalar(1), -theta / 2);
    const std::complex<Scalar> diff = std::polar(Scalar(1), theta / 2);
    CVector<Scalar> d(size);
    for (Eigen::Index k = 0; k < size; ++k) d[k] = (((k >> i) ^ (k >> j)) & 1) != 0 ? diff : same;
    return d;
}

/// Product over edges of R_ZZ(-2 w_ij gamma).
template <typename Scalar>
CMatrix<Scalar> dense_cost_unitary(const WeightedGraph& g, Scalar gamma, int n) {
    if (n != g.num_vertices()) throw std::invalid_argument("dense engine needs one qubit per vertex");
    const Eigen::Index size = Eigen::Index{1} << n;
    CMatrix<Scalar> u = CMatrix<Scalar>::Identity(size, size);
    for (const Edge& e : g.edges()) {
        u = rzz_diagonal<Scalar>(n, e.i, e.j, Scalar(-2) * Scalar(e.weight) * gamma).asDiagonal() * u;
    }
    return u;
}

/// R_X(2 beta) = cos(beta) I - i sin(beta) X.
template <typename Scalar>
CMatrix<Scalar> rx_gate(Scalar beta) {
    using C = std::complex<Scalar>;
    CMatrix<Scalar> m(2, 2);
    m << C(std::cos(beta), 0), C(0, -std::sin(beta)), C(0, -std::sin(beta)), C(std::cos(beta), 0);
    return m;
}

template <typename Scalar>
CMatrix<Scalar> kron_power(const CMatrix<Scalar>& m, int n) {
    CMatrix<Scalar> out = m;
    for (int q = 1; q < n; ++q) {
        CMatrix<Scalar> next = Eigen::kroneckerProduct(out, m).eval();
        out.swap(next);
    }
    return out;
}

/// n-fold Kronecker power of R_X(2 beta).
template <typename Scalar>
CMatrix<Scalar> dense_mixer_unitary(Scalar beta, int n) {
    if (n < 1) throw std::invalid_argument("mixer needs at least one qubit");
    return kron_power<Scalar>(rx_gate<Scalar>(beta), n);
}

/// Unitary H^{(x)n} (entries +-2^{-n/2}).
template <typename Scalar>
CMatrix<Scalar> hadamard_tensor(int n) {
    using C = std::complex<Scalar>;
    const Scalar h = Scalar(1) / std::sqrt(Scalar(2));
    CMatrix<Scalar> m(2, 2);
    m << C(h, 0), C(h, 0), C(h, 0), C(-h, 0);
    return kron_power<Scalar>(m, n);
}

template <typename Scalar>
bool is_unitary(const CMatrix<Scalar>& u, Scalar tol) {
    if (u.rows() != u.cols()) return false;
    const CMatrix<Scalar> prod = u * u.adjoint();
    return (prod - CMatrix<Scalar>::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

/// Explicit matrix-vector QAOA: U_C then U_M per layer on the uniform state.
template <typename Scalar = double>
EngineRun<Scalar> dense_run_qaoa(const WeightedGraph& g, const QaoaParams& params) {
    params.validate();
    const int n = g.num_vertices();
    if (n > kMaxDenseQubits) {
        throw std::invalid_argument("dense engine limited to " + std::to_string(kMaxDenseQubits) + " qubits");
    }
    const std::int64_t size = std::int64_t{1} << n;
    EngineRun<Scalar> run{uniform_state<Scalar>(n), {}};
    for (int k = 0; k < params.layers(); ++k) {
        const CMatrix<Scalar> uc = dense_cost_unitary<Scalar>(g, Scalar(params.gamma[k]), n);
        run.state = (uc * run.state).eval();
        const CMatrix<Scalar> um = dense_mixer_unitary<Scalar>(Scalar(params.beta[k]), n);
        run.state = (um * run.state).eval();
        run.counts += OpCounts{2 * size * size, 2 * size * (size - 1)};
    }
    return run;
}

/// In-place +-1 Walsh-Hadamard butterfly (natural order, unnormalized).
template <typename Scalar>
void walsh_hadamard_butterfly(CVector<Scalar>& v) {
    const Eigen::Index size = v.size();
    for (Eigen::Index half = 1; half < size; half <<= 1) {
        for (Eigen::Index base = 0; base < size; base += 2 * half) {
            for (Eigen::Index k = base; k < base + half; ++k) {
                const std::complex<Scalar> a = v[k];
                const std::complex<Scalar> b = v[k + half];
                v[k] = a + b;
                v[k + half] = a - b;
            }
        }
    }
}

/// out_i = sum_c (-1)^popcount(i & c) in_c, accumulated in ascending c.
template <typename Scalar>
CVector<Scalar> walsh_hadamard_streamed(const CVector<Scalar>& in) {
    const Eigen::Index size = in.size();
    CVector<Scalar> out = CVector<Scalar>::Zero(size);
    for (Eigen::Index c = 0; c < size; ++c) {
        for (Eigen::Index i = 0; i < size; ++i) {
            if ((__builtin_popcountll(static_cast<unsigned long long>(i & c)) & 1) != 0) {
                out[i] -= in[c];
            } else {
                out[i] += in[c];
            }
        }
    }
    return out;
}

enum class WalshForm { streamed, butterfly };

/// Accelerator dataflow in floating point: (H1 D_M)(H1 D_C) / 2^n per layer.
template <typename Scalar = double>
EngineRun<Scalar> decomposed_run_qaoa(const WeightedGraph& g, const QaoaParams& params,
                                      WalshForm form = WalshForm::butterfly) {
    params.validate();
    const int n = g.num_vertices();
    const CostDiagonal cost = build_cost_diagonal(g, n);
    const MixerExponents mix = build_mixer_exponents(n);
    const std::int64_t size = std::int64_t{1} << n;
    const Scalar inv_size = Scalar(1) / Scalar(size);

    auto apply = [&](CVector<Scalar>& v, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& angles) {
        for (Eigen::Index l = 0; l < v.size(); ++l) v[l] *= std::polar(Scalar(1), angles[l]);
        if (form == WalshForm::butterfly) {
            walsh_hadamard_butterfly<Scalar>(v);
        } else {
            v = walsh_hadamard_streamed<Scalar>(v);
        }
    };

    EngineRun<Scalar> run{uniform_state<Scalar>(n), {}};
    for (int k = 0; k < params.layers(); ++k) {
        apply(run.state, cost_angles<Scalar>(cost, Scalar(params.gamma[k])));
        apply(run.state, mixer_angles<Scalar>(mix, Scalar(params.beta[k])));
        run.state *= inv_size;
        const std::int64_t adds = form == WalshForm::butterfly ? size * n : size * size;
        run.counts += OpCounts{2 * size, 2 * adds};
    }
    return run;
}

/// Rotates `state` by the single phase that aligns it with `reference` at the
/// reference's largest-magnitude entry (lowest index on ties).
template <typename Scalar>
CVector<Scalar> align_global_phase(const CVector<Scalar>& state, const CVector<Scalar>& reference) {
    if (state.size() != reference.size()) throw std::invalid_argument("state sizes differ");
    Eigen::Index best = 0;
    Scalar best_mag = Scalar(-1);
    for (Eigen::Index k = 0; k < reference.size(); ++k) {
        const Scalar mag = std::abs(reference[k]);
        if (mag > best_mag) {
            best_mag = mag;
            best = k;
        }
    }
    if (std::abs(state[best]) == Scalar(0) || best_mag <= Scalar(0)) return state;
    const std::complex<Scalar> phase = (reference[best] / best_mag) / (state[best] / std::abs(state[best]));
    return state * phase;
}

/// Largest per-amplitude deviation after global-phase alignment.
template <typename Scalar>
Scalar max_diff_up_to_phase(const CVector<Scalar>& state, const CVector<Scalar>& reference) {
    return (align_global_phase<Scalar>(state, reference) - reference).cwiseAbs().maxCoeff();
}

}  // namespace qmax::ref
