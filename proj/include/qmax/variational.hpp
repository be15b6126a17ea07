#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "qmax/diagonals.hpp"
#include "qmax/graph.hpp"
#include "qmax/params.hpp"
#include "qmax/pipeline.hpp"
#include "qmax/reference.hpp"

namespace qmax {

enum class Engine { pipeline, decomposed_f64, dense };

std::string_view to_string(Engine e) noexcept;
/// Accepts "pipeline", "decomposed-f64" and "dense".
Engine parse_engine(std::string_view name);

/// |a_l|^2 / sum_k |a_k|^2. Throws std::domain_error for an all-zero state.
Eigen::VectorXd probabilities(const Eigen::VectorXcd& amps);
Eigen::VectorXd probabilities(const qma::StateVector& state);

struct ExpectationResult {
    double f_p = 0.0;
    Eigen::VectorXd probs;
    std::uint64_t best_index = 0;  // most probable basis state, lowest index on ties
    CutAssignment best_bitstring;
    double best_cut = 0.0;
};

/// F_p = sum_l p[l] * entries[l] / 2 (the hardware diagonal holds 2 C(x)).
ExpectationResult expectation(const Eigen::VectorXd& probs, const CostDiagonal& d);
ExpectationResult expectation(const Eigen::VectorXcd& amps, const CostDiagonal& d);
ExpectationResult expectation(const qma::StateVector& state, const CostDiagonal& d);

/// Shot-sampled estimate of F_p; deterministic for a given seed.
double sampled_expectation(const Eigen::VectorXd& probs, const CostDiagonal& d, std::int64_t shots,
                           std::uint64_t seed);

struct Evaluation {
    ExpectationResult result;
    Eigen::VectorXcd physical;
    bool overflow = false;
    std::optional<qma::CycleReport> cycles;  // pipeline engine only
    ref::OpCounts counts;                    // floating-point engines only
};

Evaluation evaluate(const WeightedGraph& g, const QaoaParams& params, Engine engine,
                    const qma::PipelineConfig& cfg = {});

struct OptimizerConfig {
    int restarts = 8;
    int max_evals = 400;  // per restart
    double tolerance = 1e-9;
    double domain = 3.14159265358979323846;  // each parameter lives in [0, domain]
    double initial_step = 0.15;              // simplex edge as a fraction of domain
    std::uint64_t seed = 0;
    unsigned threads = 1;
    qma::PipelineConfig pipeline;
};

struct TracePoint {
    int restart = 0;
    QaoaParams params;
    double f_p = 0.0;
};

struct OptimizationTrace {
    std::vector<TracePoint> iterations;  // every objective evaluation, restart-major
    QaoaParams best_params;
    double best_f_p = 0.0;
    std::vector<double> best_after_restart;
    int evaluations = 0;
    bool converged = true;
    bool overflow = false;
};

using Objective = std::function<double(const std::vector<double>&)>;

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/// Maximizes `f` with a box-clamped Nelder-Mead simplex.
NelderMeadResult nelder_mead_maximize(const Objective& f, std::vector<double> start, double step, double lower,
                                      double upper, int max_evals, double tolerance);

/// Layout: x = (gamma_1..gamma_p, beta_1..beta_p).
QaoaParams params_from_vector(const std::vector<double>& x);

OptimizationTrace optimize(const WeightedGraph& g, int p, Engine engine, const OptimizerConfig& cfg);

struct GridResult {
    double gamma = 0.0;
    double beta = 0.0;
    double f_p = 0.0;
};

/// Exhaustive p=1 search over gamma, beta in {pi*k/resolution : k < resolution}.
GridResult grid_search_p1(const WeightedGraph& g, int resolution, Engine engine = Engine::decomposed_f64,
                          const qma::PipelineConfig& cfg = {});

}  // namespace qmax
