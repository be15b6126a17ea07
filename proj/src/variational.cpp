#include "qmax/variational.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "qmax/rng.hpp"

namespace qmax {

std::string_view to_string(Engine e) noexcept {
    switch (e) {
        case Engine::pipeline: return "pipeline";
        case Engine::decomposed_f64: return "decomposed-f64";
        case Engine::dense: return "dense";
    }
    return "unknown";
}

Engine parse_engine(std::string_view name) {
    if (name == "pipeline") return Engine::pipeline;
    if (name == "decomposed-f64") return Engine::decomposed_f64;
    if (name == "dense") return Engine::dense;
    throw std::invalid_argument("unknown engine '" + std::string(name) + "'");
}

Eigen::VectorXd probabilities(const Eigen::VectorXcd& amps) {
    const Eigen::VectorXd mag2 = amps.cwiseAbs2();
    const double total = mag2.sum();
    if (!(total > 0.0)) throw std::domain_error("state vector is all zero");
    return mag2 / total;
}

Eigen::VectorXd probabilities(const qma::StateVector& state) { return probabilities(state.stored()); }

ExpectationResult expectation(const Eigen::VectorXd& probs, const CostDiagonal& d) {
    if (probs.size() != d.size()) throw std::invalid_argument("probability and diagonal lengths differ");
    ExpectationResult r;
    r.probs = probs;
    r.f_p = 0.5 * probs.dot(d.entries);
    Eigen::Index best = 0;
    probs.maxCoeff(&best);  // first maximum
    r.best_index = static_cast<std::uint64_t>(best);
    r.best_bitstring = CutAssignment::from_index(r.best_index, d.n);
    r.best_cut = 0.5 * d.entries[best];
    return r;
}

ExpectationResult expectation(const Eigen::VectorXcd& amps, const CostDiagonal& d) {
    return expectation(probabilities(amps), d);
}

ExpectationResult expectation(const qma::StateVector& state, const CostDiagonal& d) {
    return expectation(probabilities(state), d);
}

double sampled_expectation(const Eigen::VectorXd& probs, const CostDiagonal& d, std::int64_t shots,
                           std::uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("shots must be positive");
    if (probs.size() != d.size()) throw std::invalid_argument("probability and diagonal lengths differ");
    std::vector<double> cdf(static_cast<std::size_t>(probs.size()));
    std::partial_sum(probs.begin(), probs.end(), cdf.begin());
    SplitMix64 rng(seed);
    double total = 0.0;
    for (std::int64_t s = 0; s < shots; ++s) {
        const double u = rng.uniform() * cdf.back();
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end()) --it;
        total += 0.5 * d.entries[it - cdf.begin()];
    }
    return total / static_cast<double>(shots);
}

Evaluation evaluate(const WeightedGraph& g, const QaoaParams& params, Engine engine, const qma::PipelineConfig& cfg) {
    const CostDiagonal d = build_cost_diagonal(g, g.num_vertices());
    Evaluation ev;
    switch (engine) {
        case Engine::pipeline: {
            qma::QmaRun run = qma::run_qaoa(g, params, cfg);
            ev.physical = run.state.physical();
            ev.result = expectation(run.state, d);
            ev.overflow = run.report.overflow;
            ev.cycles = std::move(run.report);
            break;
        }
        case Engine::decomposed_f64: {
            auto run = ref::decomposed_run_qaoa<double>(g, params);
            ev.physical = std::move(run.state);
            ev.counts = run.counts;
            ev.result = expectation(ev.physical, d);
            break;
        }
        case Engine::dense: {
            auto run = ref::dense_run_qaoa<double>(g, params);
            ev.physical = std::move(run.state);
            ev.counts = run.counts;
            ev.result = expectation(ev.physical, d);
            break;
        }
    }
    return ev;
}

NelderMeadResult nelder_mead_maximize(const Objective& f, std::vector<double> start, double step, double lower,
                                      double upper, int max_evals, double tolerance) {
    const std::size_t dim = start.size();
    if (dim == 0) throw std::invalid_argument("Nelder-Mead needs at least one dimension");
    auto clamp = [&](std::vector<double>& x) {
        for (auto& v : x) v = std::clamp(v, lower, upper);
    };

    NelderMeadResult res;
    auto eval = [&](std::vector<double>& x) {
        clamp(x);
        ++res.evaluations;
        return -f(x);  // minimize the negation
    };

    std::vector<std::vector<double>> simplex(dim + 1, start);
    clamp(simplex[0]);
    for (std::size_t k = 0; k < dim; ++k) {
        // Step inward when the start sits on the upper face.
        simplex[k + 1][k] += simplex[k + 1][k] + step <= upper ? step : -step;
    }
    std::vector<double> fx(dim + 1);
    for (std::size_t j = 0; j <= dim; ++j) fx[j] = eval(simplex[j]);

    std::vector<std::size_t> order(dim + 1);
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
        std::vector<std::vector<double>> s2(dim + 1);
        std::vector<double> f2(dim + 1);
        for (std::size_t k = 0; k <= dim; ++k) {
            s2[k] = simplex[order[k]];
            f2[k] = fx[order[k]];
        }
        simplex.swap(s2);
        fx.swap(f2);
    };

    auto blend = [&](const std::vector<double>& a, const std::vector<double>& b, double t) {
        std::vector<double> out(dim);
        for (std::size_t i = 0; i < dim; ++i) out[i] = a[i] + t * (b[i] - a[i]);
        return out;
    };

    constexpr double kReflect = 1.0;
    constexpr double kExpand = 2.0;
    constexpr double kContract = 0.5;
    constexpr double kShrink = 0.5;

    while (true) {
        sort_simplex();
        double diameter = 0.0;
        for (std::size_t j = 1; j <= dim; ++j)
            for (std::size_t i = 0; i < dim; ++i) diameter = std::max(diameter, std::abs(simplex[j][i] - simplex[0][i]));
        if (std::abs(fx[dim] - fx[0]) <= tolerance && diameter <= 1e-6) {
            res.converged = true;
            break;
        }
        if (res.evaluations >= max_evals) break;

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t j = 0; j < dim; ++j)
            for (std::size_t i = 0; i < dim; ++i) centroid[i] += simplex[j][i] / static_cast<double>(dim);

        std::vector<double> xr = blend(centroid, simplex[dim], -kReflect);
        const double fr = eval(xr);
        if (fr < fx[0]) {
            std::vector<double> xe = blend(centroid, xr, kExpand);
            const double fe = eval(xe);
            if (fe < fr) {
                simplex[dim] = xe;
                fx[dim] = fe;
            } else {
                simplex[dim] = xr;
                fx[dim] = fr;
            }
        } else if (fr < fx[dim - 1]) {
            simplex[dim] = xr;
            fx[dim] = fr;
        } else {
            const bool outside = fr < fx[dim];
            std::vector<double> xc = blend(centroid, outside ? xr : simplex[dim], kContract);
            const double fc = eval(xc);
            if (fc < (outside ? fr : fx[dim])) {
                simplex[dim] = xc;
                fx[dim] = fc;
            } else {
                for (std::size_t j = 1; j <= dim; ++j) {
                    simplex[j] = blend(simplex[0], simplex[j], kShrink);
                    fx[j] = eval(simplex[j]);
                }
            }
        }
    }
    sort_simplex();
    res.x = simplex[0];
    res.value = -fx[0];
    return res;
}

QaoaParams params_from_vector(const std::vector<double>& x) {
    if (x.empty() || x.size() % 2 != 0) throw std::invalid_argument("parameter vector must have even length");
    const auto p = static_cast<std::ptrdiff_t>(x.size() / 2);
    return {std::vector<double>(x.begin(), x.begin() + p), std::vector<double>(x.begin() + p, x.end())};
}

namespace {

struct RestartOutcome {
    std::vector<TracePoint> points;
    bool converged = false;
    bool overflow = false;
};

}  // namespace

OptimizationTrace optimize(const WeightedGraph& g, int p, Engine engine, const OptimizerConfig& cfg) {
    if (p < 1) throw std::invalid_argument("layers must be >= 1");
    if (cfg.restarts < 1) throw std::invalid_argument("restarts must be >= 1");
    if (!(cfg.domain > 0.0)) throw std::invalid_argument("parameter domain must be positive");
    const std::size_t dim = 2 * static_cast<std::size_t>(p);

    // Start points are drawn up front so they do not depend on scheduling.
    SplitMix64 rng(cfg.seed);
    std::vector<std::vector<double>> starts(static_cast<std::size_t>(cfg.restarts), std::vector<double>(dim));
    for (auto& s : starts)
        for (auto& v : s) v = rng.uniform(0.0, cfg.domain);

    qma::PipelineConfig pipeline = cfg.pipeline;
    pipeline.trace = nullptr;

    std::vector<RestartOutcome> outcomes(starts.size());
    auto run_restart = [&](std::size_t r) {
        RestartOutcome& out = outcomes[r];
        Objective f = [&](const std::vector<double>& x) {
            const QaoaParams params = params_from_vector(x);
            const Evaluation ev = evaluate(g, params, engine, pipeline);
            out.overflow = out.overflow || ev.overflow;
            out.points.push_back({static_cast<int>(r), params, ev.result.f_p});
            return ev.result.f_p;
        };
        const NelderMeadResult nm = nelder_mead_maximize(f, starts[r], cfg.initial_step * cfg.domain, 0.0, cfg.domain,
                                                         cfg.max_evals, cfg.tolerance);
        out.converged = nm.converged;
    };

    const unsigned workers = std::clamp<unsigned>(cfg.threads, 1U, static_cast<unsigned>(starts.size()));
    if (workers == 1) {
        for (std::size_t r = 0; r < starts.size(); ++r) run_restart(r);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t r = w; r < starts.size(); r += workers) run_restart(r);
            });
        }
        for (auto& t : pool) t.join();
    }

    OptimizationTrace trace;
    bool have_best = false;
    for (auto& out : outcomes) {
        trace.converged = trace.converged && out.converged;
        trace.overflow = trace.overflow || out.overflow;
        for (auto& pt : out.points) {
            if (!have_best || pt.f_p > trace.best_f_p) {
                trace.best_f_p = pt.f_p;
                trace.best_params = pt.params;
                have_best = true;
            }
            trace.iterations.push_back(std::move(pt));
        }
        trace.best_after_restart.push_back(trace.best_f_p);
    }
    trace.evaluations = static_cast<int>(trace.iterations.size());
    return trace;
}

GridResult grid_search_p1(const WeightedGraph& g, int resolution, Engine engine, const qma::PipelineConfig& cfg) {
    if (resolution < 8) throw std::invalid_argument("grid resolution must be >= 8");
    const double pi = 3.14159265358979323846;
    GridResult best{0.0, 0.0, -1.0};
    for (int i = 0; i < resolution; ++i) {
        for (int j = 0; j < resolution; ++j) {
            const double gamma = pi * i / resolution;
            const double beta = pi * j / resolution;
            const double fp = evaluate(g, {{gamma}, {beta}}, engine, cfg).result.f_p;
            if (fp > best.f_p) best = {gamma, beta, fp};
        }
    }
    return best;
}

}  // namespace qmax
