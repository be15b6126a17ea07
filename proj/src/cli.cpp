#include "qmax/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "qmax/diagonals.hpp"
#include "qmax/graph.hpp"
#include "qmax/pipeline.hpp"
#include "qmax/report.hpp"
#include "qmax/rng.hpp"
#include "qmax/variational.hpp"

namespace qmax::cli {

namespace {

/// Input problems that map to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class LogLevel { error = 0, info = 1, debug = 2 };

LogLevel log_level_from_env() {
    const char* v = std::getenv("QMAX_LOG");
    if (v == nullptr) return LogLevel::error;
    const std::string s(v);
    if (s == "debug") return LogLevel::debug;
    if (s == "info") return LogLevel::info;
    return LogLevel::error;
}

class Logger {
public:
    explicit Logger(std::ostream& err) : err_(err), level_(log_level_from_env()) {}
    void info(const std::string& msg) const { emit(LogLevel::info, "info", msg); }
    void debug(const std::string& msg) const { emit(LogLevel::debug, "debug", msg); }
    void error(const std::string& msg) const { emit(LogLevel::error, "error", msg); }

private:
    void emit(LogLevel lvl, const char* tag, const std::string& msg) const {
        if (static_cast<int>(lvl) <= static_cast<int>(level_)) err_ << "qmax: " << tag << ": " << msg << '\n';
    }
    std::ostream& err_;
    LogLevel level_;
};

struct CommonOptions {
    std::string graph_path;
    std::string engine = "pipeline";
    std::string fixed_point = "q7.25";
    std::string dump_state;
    std::string trace_path;
    bool dump_diagonals = false;
    bool strict = false;
    bool timing = false;
    unsigned threads = 1;
};

struct EmulateOptions {
    std::string gamma;
    std::string beta;
    int layers = 0;
    std::int64_t shots = 0;
    std::uint64_t seed = 0;
};

struct SolveOptions {
    int layers = 1;
    std::string optimizer = "nelder-mead";
    int restarts = 8;
    int max_evals = 400;
    int grid_resolution = 64;
    std::uint64_t seed = 0;
};

struct BenchOptions {
    std::string qubits = "2..9";
    int layers = 8;
    std::string engines = "pipeline,dense";
    std::string format = "json";
    std::string fixed_point = "q7.25";
    std::uint64_t seed = 0;
};

struct OracleOptions {
    std::string graph_path;
    unsigned threads = 1;
    bool timing = false;
};

std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            if (used != item.size() || !std::isfinite(v)) throw std::invalid_argument("bad");
            out.push_back(v);
        } catch (const std::exception&) {
            throw UsageError(std::string("malformed ") + what + " value '" + item + "'");
        }
    }
    if (out.empty()) throw UsageError(std::string(what) + " list is empty");
    return out;
}

std::pair<int, int> parse_range(const std::string& text) {
    auto to_int = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(s, &used);
            if (used != s.size()) throw std::invalid_argument("bad");
            return v;
        } catch (const std::exception&) {
            throw UsageError("malformed qubit range '" + text + "'");
        }
    };
    const auto dots = text.find("..");
    const auto dash = text.find('-');
    if (dots != std::string::npos) return {to_int(text.substr(0, dots)), to_int(text.substr(dots + 2))};
    if (dash != std::string::npos && dash > 0) return {to_int(text.substr(0, dash)), to_int(text.substr(dash + 1))};
    const int v = to_int(text);
    return {v, v};
}

fxp::FxFormat parse_format(const std::string& text) {
    try {
        return fxp::FxFormat::parse(text);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

Engine engine_of(const std::string& text) {
    try {
        return parse_engine(text);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

WeightedGraph load_graph(const std::string& path) {
    try {
        return load_graph_file(path);
    } catch (const ParseError& e) {
        throw UsageError(path + ": " + e.what());
    } catch (const std::runtime_error& e) {
        throw UsageError(e.what());
    }
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

CycleSummary summarize(const qma::CycleReport& r) {
    return {r.cycles_total, r.setup_cycles, r.cycles_per_op, r.mults, r.adds, r.derived_time_us()};
}

Json trace_record(const qma::CycleTrace& t) {
    auto slot = [](std::int64_t c) { return c < 0 ? Json(nullptr) : Json(c); };
    Json j;
    j["cycle"] = t.cycle;
    j["op"] = t.op_index;
    j["layer"] = t.layer;
    j["order"] = t.kind == qma::OpKind::cost ? "cost" : "mixer";
    j["stages"] = {{"calculate_rad", slot(t.calculate_rad)},
                   {"normalize_rad", slot(t.normalize_rad)},
                   {"cordic_occupancy", t.cordic_occupancy},
                   {"cordic_first", slot(t.cordic_first)},
                   {"cordic_last", slot(t.cordic_last)},
                   {"one_mult", slot(t.one_mult)},
                   {"n_add", slot(t.n_add)}};
    j["neg_cos"] = t.neg_cos;
    j["neg_sin"] = t.neg_sin;
    j["overflow"] = t.overflow;
    return j;
}

void write_state(const std::string& path, const Eigen::VectorXcd& amps, int n) {
    std::ofstream os(path);
    if (!os) throw UsageError("cannot write state dump '" + path + "'");
    const Eigen::VectorXd probs = probabilities(amps);
    os << std::setprecision(17) << "index,bitstring,re,im,probability\n";
    for (Eigen::Index l = 0; l < amps.size(); ++l) {
        os << l << ',' << CutAssignment::from_index(static_cast<std::uint64_t>(l), n).to_string() << ','
           << amps[l].real() << ',' << amps[l].imag() << ',' << probs[l] << '\n';
    }
}

Json diagonals_json(const WeightedGraph& g) {
    const CostDiagonal d = build_cost_diagonal(g, g.num_vertices());
    const MixerExponents m = build_mixer_exponents(g.num_vertices());
    return {{"cost", std::vector<double>(d.entries.begin(), d.entries.end())},
            {"mixer_exponents", std::vector<int>(m.u.begin(), m.u.end())}};
}

/// Shared tail of emulate and solve: one evaluation turned into a report.
struct Evaluated {
    RunReport report;
    Evaluation eval;
};

Evaluated evaluate_into_report(const std::string& command, const WeightedGraph& g, const QaoaParams& params,
                               Engine engine, const fxp::FxFormat& fmt, const CommonOptions& common,
                               std::ofstream* trace_out) {
    qma::PipelineConfig cfg;
    cfg.fmt = fmt;
    if (trace_out != nullptr) cfg.trace = [trace_out](const qma::CycleTrace& t) { *trace_out << trace_record(t).dump() << '\n'; };

    Evaluated out;
    try {
        out.eval = evaluate(g, params, engine, cfg);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    RunReport& r = out.report;
    r.command = command;
    r.graph = GraphSummary::of(g);
    r.engine = std::string(to_string(engine));
    r.fixed_point = engine == Engine::pipeline ? fmt.to_string() : "f64";
    r.params = params;
    r.f_p = out.eval.result.f_p;
    r.best_bitstring = out.eval.result.best_bitstring.to_string();
    r.best_cut = cut_value(g, out.eval.result.best_bitstring);
    if (g.num_vertices() <= 20) {
        const double cmax = brute_force_max_cut(g, common.threads).max_value;
        r.brute_force_max = cmax;
        if (cmax > 0.0) r.approximation_ratio = out.eval.result.f_p / cmax;
    }
    if (out.eval.cycles) r.cycles = summarize(*out.eval.cycles);
    r.overflow = out.eval.overflow;
    if (common.dump_diagonals) r.details["diagonals"] = diagonals_json(g);
    if (!common.dump_state.empty()) write_state(common.dump_state, out.eval.physical, g.num_vertices());
    return out;
}

std::unique_ptr<std::ofstream> open_trace(const CommonOptions& common, Engine engine, const Logger& log) {
    if (common.trace_path.empty()) return nullptr;
    if (engine != Engine::pipeline) {
        log.error("--trace only applies to the pipeline engine; ignored");
        return nullptr;
    }
    auto os = std::make_unique<std::ofstream>(common.trace_path);
    if (!*os) throw UsageError("cannot write trace '" + common.trace_path + "'");
    return os;
}

int finish(const RunReport& r, const CommonOptions& common, std::ostream& out, const Logger& log) {
    const Json j = to_json(r);
    require_finite(j);
    out << j.dump(2) << '\n';
    if (common.strict && r.overflow) {
        log.error("fixed-point saturation occurred (--strict)");
        return kExitNumeric;
    }
    return kExitOk;
}

int cmd_emulate(const CommonOptions& common, const EmulateOptions& opts, std::ostream& out, const Logger& log) {
    const auto start = std::chrono::steady_clock::now();
    const WeightedGraph g = load_graph(common.graph_path);
    const Engine engine = engine_of(common.engine);
    const fxp::FxFormat fmt = parse_format(common.fixed_point);
    QaoaParams params{parse_list(opts.gamma, "--gamma"), parse_list(opts.beta, "--beta")};
    if (params.gamma.size() != params.beta.size()) throw UsageError("--gamma and --beta must have equal length");
    if (opts.layers > 0 && opts.layers != params.layers()) throw UsageError("--layers disagrees with --gamma/--beta");

    auto trace = open_trace(common, engine, log);
    Evaluated ev = evaluate_into_report("emulate", g, params, engine, fmt, common, trace.get());
    if (opts.shots > 0) {
        const CostDiagonal d = build_cost_diagonal(g, g.num_vertices());
        ev.report.details["shots"] = opts.shots;
        ev.report.details["sampled_f_p"] = sampled_expectation(ev.eval.result.probs, d, opts.shots, opts.seed);
        ev.report.seed = opts.seed;
    }
    if (common.timing) ev.report.wall_clock_ms = elapsed_ms(start);
    log.info("emulate: f_p = " + std::to_string(*ev.report.f_p));
    return finish(ev.report, common, out, log);
}

int cmd_solve(const CommonOptions& common, const SolveOptions& opts, std::ostream& out, const Logger& log) {
    const auto start = std::chrono::steady_clock::now();
    const WeightedGraph g = load_graph(common.graph_path);
    const Engine engine = engine_of(common.engine);
    const fxp::FxFormat fmt = parse_format(common.fixed_point);
    if (opts.layers < 1) throw UsageError("--layers must be >= 1");
    if (engine == Engine::dense && g.num_vertices() > ref::kMaxDenseQubits) {
        throw UsageError("dense engine limited to " + std::to_string(ref::kMaxDenseQubits) + " qubits");
    }

    qma::PipelineConfig pcfg;
    pcfg.fmt = fmt;
    QaoaParams best;
    Json details;
    details["optimizer"] = opts.optimizer;
    if (opts.optimizer == "nelder-mead") {
        if (opts.restarts < 1 || opts.max_evals < 1) throw UsageError("--restarts and --max-evals must be positive");
        OptimizerConfig cfg;
        cfg.restarts = opts.restarts;
        cfg.max_evals = opts.max_evals;
        cfg.seed = opts.seed;
        cfg.threads = common.threads;
        cfg.pipeline = pcfg;
        const OptimizationTrace trace = optimize(g, opts.layers, engine, cfg);
        best = trace.best_params;
        details["restarts"] = opts.restarts;
        details["evaluations"] = trace.evaluations;
        details["converged"] = trace.converged;
        details["best_after_restart"] = trace.best_after_restart;
        log.info("solve: " + std::to_string(trace.evaluations) + " evaluations");
    } else if (opts.optimizer == "grid") {
        if (opts.layers != 1) throw UsageError("grid optimizer supports --layers 1 only");
        if (opts.grid_resolution < 8) throw UsageError("--grid-resolution must be >= 8");
        const GridResult grid = grid_search_p1(g, opts.grid_resolution, engine, pcfg);
        best = {{grid.gamma}, {grid.beta}};
        details["grid_resolution"] = opts.grid_resolution;
        details["evaluations"] = opts.grid_resolution * opts.grid_resolution;
    } else {
        throw UsageError("unknown optimizer '" + opts.optimizer + "'");
    }

    auto trace = open_trace(common, engine, log);
    Evaluated ev = evaluate_into_report("solve", g, best, engine, fmt, common, trace.get());
    for (auto& [k, v] : details.items()) ev.report.details[k] = v;
    ev.report.seed = opts.seed;
    if (common.timing) ev.report.wall_clock_ms = elapsed_ms(start);
    return finish(ev.report, common, out, log);
}

int cmd_bench(const BenchOptions& opts, std::ostream& out, std::ostream& err, const Logger& log) {
    const auto [lo, hi] = parse_range(opts.qubits);
    if (lo < 1 || hi < lo || hi > kMaxQubits) throw UsageError("qubit range must satisfy 1 <= lo <= hi <= 24");
    if (opts.layers < 1) throw UsageError("--layers must be >= 1");
    if (opts.format != "json" && opts.format != "csv") throw UsageError("--format must be json or csv");
    const fxp::FxFormat fmt = parse_format(opts.fixed_point);
    std::vector<Engine> engines;
    {
        std::stringstream ss(opts.engines);
        std::string name;
        while (std::getline(ss, name, ',')) engines.push_back(engine_of(name));
        if (engines.empty()) throw UsageError("no engines selected");
    }

    SplitMix64 rng(opts.seed);
    QaoaParams params;
    for (int k = 0; k < opts.layers; ++k) params.gamma.push_back(rng.uniform(0.0, 3.14159265358979323846));
    for (int k = 0; k < opts.layers; ++k) params.beta.push_back(rng.uniform(0.0, 3.14159265358979323846));

    qma::PipelineConfig pcfg;
    pcfg.fmt = fmt;
    if (opts.format == "csv") out << bench_csv_header() << '\n';
    for (int n = lo; n <= hi; ++n) {
        const WeightedGraph g = WeightedGraph::complete(n);
        for (Engine e : engines) {
            if (e == Engine::dense && n > ref::kMaxDenseQubits) {
                err << "qmax: notice: skipping dense engine at n=" << n << " (N^2 memory guard)\n";
                continue;
            }
            const auto start = std::chrono::steady_clock::now();
            const Evaluation ev = evaluate(g, params, e, pcfg);
            BenchRow row;
            row.wall_clock_ms = elapsed_ms(start);
            row.qubits = n;
            row.layers = opts.layers;
            row.engine = std::string(to_string(e));
            row.f_p = ev.result.f_p;
            row.overflow = ev.overflow;
            if (ev.cycles) {
                row.cycles_total = ev.cycles->cycles_total;
                row.cycles_per_op = ev.cycles->cycles_per_op.front();
                row.mults = ev.cycles->mults;
                row.adds = ev.cycles->adds;
                row.derived_time_us = ev.cycles->derived_time_us();
            } else {
                row.mults = ev.counts.mults;
                row.adds = ev.counts.adds;
                row.flops = ev.counts.flops();
            }
            if (opts.format == "csv") {
                out << to_csv(row) << '\n';
            } else {
                out << to_json(row).dump() << '\n';
            }
            log.debug("bench: n=" + std::to_string(n) + " engine=" + row.engine);
        }
    }
    return kExitOk;
}

int cmd_oracle(const OracleOptions& opts, std::ostream& out, const Logger& log) {
    const auto start = std::chrono::steady_clock::now();
    const WeightedGraph g = load_graph(opts.graph_path);
    if (g.num_vertices() > kMaxBruteForceVertices) {
        throw UsageError("oracle limited to " + std::to_string(kMaxBruteForceVertices) + " vertices");
    }
    const MaxCutResult res = brute_force_max_cut(g, opts.threads);
    RunReport r;
    r.command = "oracle";
    r.graph = GraphSummary::of(g);
    r.engine = "enumeration";
    r.fixed_point = "none";
    r.brute_force_max = res.max_value;
    r.best_bitstring = res.maximizers.front().to_string();
    r.best_cut = cut_value(g, res.maximizers.front());
    Json maximizers = Json::array();
    for (const auto& x : res.maximizers) maximizers.push_back({{"bitstring", x.to_string()}, {"cut_value", cut_value(g, x)}});
    r.details["maximizers"] = std::move(maximizers);
    if (opts.timing) r.wall_clock_ms = elapsed_ms(start);
    log.info("oracle: " + std::to_string(res.maximizers.size()) + " maximizers");
    CommonOptions none;
    return finish(r, none, out, log);
}

void add_common(CLI::App* cmd, CommonOptions& c) {
    cmd->add_option("--graph", c.graph_path, "Edge-list graph file")->required();
    cmd->add_option("--engine", c.engine, "pipeline | decomposed-f64 | dense")->capture_default_str();
    cmd->add_option("--fixed-point", c.fixed_point, "Q-format qI.F of the pipeline datapath")->capture_default_str();
    cmd->add_option("--dump-state", c.dump_state, "Write final amplitudes as CSV");
    cmd->add_flag("--dump-diagonals", c.dump_diagonals, "Include cost diagonal and mixer exponents in the report");
    cmd->add_option("--trace", c.trace_path, "Per-cycle pipeline trace (JSON lines)");
    cmd->add_flag("--strict", c.strict, "Exit 3 if fixed-point saturation occurred");
    cmd->add_flag("--timing", c.timing, "Include host wall-clock time in the report");
    cmd->add_option("--threads", c.threads, "Worker threads")->capture_default_str()->check(CLI::Range(1U, 64U));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Emulator of a pipelined QAOA accelerator for weighted MaxCut", "qmax"};
    app.require_subcommand(1);

    CommonOptions emulate_common;
    EmulateOptions emulate_opts;
    CLI::App* emulate = app.add_subcommand("emulate", "Run one QAOA circuit with given parameters");
    add_common(emulate, emulate_common);
    emulate->add_option("--gamma", emulate_opts.gamma, "Comma-separated cost parameters")->required();
    emulate->add_option("--beta", emulate_opts.beta, "Comma-separated mixer parameters")->required();
    emulate->add_option("--layers", emulate_opts.layers, "Layer count (must match the parameter lists)");
    emulate->add_option("--shots", emulate_opts.shots, "Also report a shot-sampled F_p");
    emulate->add_option("--seed", emulate_opts.seed, "Seed for shot sampling")->capture_default_str();

    CommonOptions solve_common;
    SolveOptions solve_opts;
    CLI::App* solve = app.add_subcommand("solve", "Optimize the variational parameters");
    add_common(solve, solve_common);
    solve->add_option("--layers", solve_opts.layers, "QAOA depth p")->capture_default_str();
    solve->add_option("--optimizer", solve_opts.optimizer, "nelder-mead | grid")->capture_default_str();
    solve->add_option("--restarts", solve_opts.restarts, "Nelder-Mead restarts")->capture_default_str();
    solve->add_option("--max-evals", solve_opts.max_evals, "Objective evaluations per restart")->capture_default_str();
    solve->add_option("--grid-resolution", solve_opts.grid_resolution, "Lattice points per axis")->capture_default_str();
    solve->add_option("--seed", solve_opts.seed, "Seed for restart start points")->capture_default_str();

    BenchOptions bench_opts;
    CLI::App* bench = app.add_subcommand("bench", "Cycle, operation-count and timing sweep over qubit counts");
    bench->add_option("--qubits", bench_opts.qubits, "Qubit range lo..hi")->capture_default_str();
    bench->add_option("--layers", bench_opts.layers, "QAOA depth p")->capture_default_str();
    bench->add_option("--engine", bench_opts.engines, "Comma-separated engines")->capture_default_str();
    bench->add_option("--format", bench_opts.format, "json | csv")->capture_default_str();
    bench->add_option("--fixed-point", bench_opts.fixed_point, "Q-format qI.F")->capture_default_str();
    bench->add_option("--seed", bench_opts.seed, "Seed for the benchmark parameters")->capture_default_str();

    OracleOptions oracle_opts;
    CLI::App* oracle = app.add_subcommand("oracle", "Exact maximum cut by enumeration");
    oracle->add_option("--graph", oracle_opts.graph_path, "Edge-list graph file")->required();
    oracle->add_option("--threads", oracle_opts.threads, "Worker threads")->capture_default_str()->check(CLI::Range(1U, 64U));
    oracle->add_flag("--timing", oracle_opts.timing, "Include host wall-clock time in the report");

    std::vector<const char*> argv{"qmax"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    const Logger log(err);
    try {
        if (*emulate) return cmd_emulate(emulate_common, emulate_opts, out, log);
        if (*solve) return cmd_solve(solve_common, solve_opts, out, log);
        if (*bench) return cmd_bench(bench_opts, out, err, log);
        if (*oracle) return cmd_oracle(oracle_opts, out, log);
    } catch (const UsageError& e) {
        log.error(e.what());
        return kExitUsage;
    } catch (const std::domain_error& e) {
        log.error(e.what());
        return kExitNumeric;
    }
    return kExitUsage;
}

}  // namespace qmax::cli
