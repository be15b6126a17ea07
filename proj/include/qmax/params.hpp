#pragma once

#include <stdexcept>
#include <vector>

namespace qmax {

/// Per-layer variational parameters; layer k applies the cost unitary with
/// gamma[k] and then the mixer with beta[k].
struct QaoaParams {
    std::vector<double> gamma;
    std::vector<double> beta;

    int layers() const noexcept { return static_cast<int>(gamma.size()); }

    void validate() const {
        if (gamma.empty()) throw std::invalid_argument("QAOA needs at least one layer");
        if (gamma.size() != beta.size()) throw std::invalid_argument("gamma and beta must have the same length");
    }

    static QaoaParams zeros(int p) { return {std::vector<double>(p, 0.0), std::vector<double>(p, 0.0)}; }

    friend bool operator==(const QaoaParams&, const QaoaParams&) = default;
};

}  // namespace qmax
