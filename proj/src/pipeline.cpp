#include "qmax/pipeline.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qmax::qma {

double StateVector::scale() const noexcept {
    const int whole = scale_half >= 0 ? scale_half / 2 : -((-scale_half + 1) / 2);
    const bool half = (scale_half - 2 * whole) != 0;
    return std::ldexp(half ? std::numbers::sqrt2 : 1.0, whole);
}

Eigen::VectorXcd StateVector::stored() const {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(amps.size()));
    for (std::size_t l = 0; l < amps.size(); ++l) v[static_cast<Eigen::Index>(l)] = amps[l].to_complex();
    return v;
}

Eigen::VectorXcd StateVector::physical() const { return stored() * scale(); }

StateVector init_uniform_state(int n, const FxFormat& fmt) {
    if (n < 1 || n > kMaxQubits) throw std::invalid_argument("qubit count must be 1.." + std::to_string(kMaxQubits));
    fmt.validate();
    const int exponent = (n + 1) / 2;
    if (exponent > fmt.frac_bits) throw std::invalid_argument("format has too few fractional bits for the initial state");
    StateVector s;
    s.n = n;
    s.fmt = fmt;
    s.scale_half = 2 * exponent - n;
    const Fx a{std::int64_t{1} << (fmt.frac_bits - exponent), fmt};
    s.amps.assign(std::size_t{1} << n, CFx{a, Fx{0, fmt}});
    return s;
}

namespace {

Fx to_angle_fx(double value, const FxFormat& angle_fmt) {
    FxContext ctx;
    Fx out = fxp::fx_from_real(value, angle_fmt, ctx);
    if (ctx.overflow()) throw std::invalid_argument("angle operand exceeds the rad register range");
    return out;
}

}  // namespace

AngleProgram cost_program(const CostDiagonal& d, double gamma, int layer, const PipelineConfig& cfg) {
    const FxFormat afmt = cfg.angle_format();
    AngleProgram prog{OpKind::cost, layer, {}, to_angle_fx(-gamma, afmt)};
    prog.terms.reserve(static_cast<std::size_t>(d.size()));
    for (Eigen::Index l = 0; l < d.size(); ++l) prog.terms.push_back(to_angle_fx(d.entries[l], afmt));
    return prog;
}

AngleProgram mixer_program(const MixerExponents& m, double beta, int layer, const PipelineConfig& cfg) {
    const FxFormat afmt = cfg.angle_format();
    AngleProgram prog{OpKind::mixer, layer, {}, to_angle_fx(beta, afmt)};
    prog.terms.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index l = 0; l < m.size(); ++l) prog.terms.push_back(to_angle_fx(m.u[l], afmt));
    return prog;
}

AngleProgram angle_program(std::span<const double> angles, const PipelineConfig& cfg) {
    const FxFormat afmt = cfg.angle_format();
    AngleProgram prog{OpKind::cost, 0, {}, to_angle_fx(1.0, afmt)};
    prog.terms.reserve(angles.size());
    for (double a : angles) prog.terms.push_back(to_angle_fx(a, afmt));
    return prog;
}

namespace {

struct RadReg {
    bool valid = false;
    std::int64_t c = 0;
    Fx rad;
};

struct NormReg {
    bool valid = false;
    std::int64_t c = 0;
    Fx rad_q1;
    fxp::QuadrantFlags flags;
};

struct CordicReg {
    bool valid = false;
    std::int64_t c = 0;
    fxp::CordicRegs regs;
    fxp::QuadrantFlags flags;
};

struct MultReg {
    bool valid = false;
    std::int64_t c = 0;
    CFx mult;
    fxp::QuadrantFlags flags;
};

}  // namespace

OpStats run_elemental_op(StateVector& state, const AngleProgram& program, const PipelineConfig& cfg, FxContext& ctx,
                         RunClock& clock) {
    const std::int64_t size = static_cast<std::int64_t>(state.size());
    if (static_cast<std::int64_t>(program.terms.size()) != size) {
        throw std::invalid_argument("angle program length does not match the state vector");
    }
    if (!(state.fmt == cfg.fmt)) throw std::invalid_argument("state format does not match pipeline format");
    const FxFormat afmt = cfg.angle_format();
    if (!(program.multiplier.fmt == afmt)) throw std::invalid_argument("angle program built for another format");

    const fxp::AngleConstants angle_consts(afmt);
    const fxp::AngleConstants data_consts(cfg.fmt);
    const fxp::CordicTable table(cfg.fmt);
    const std::int64_t max_raw = cfg.fmt.max_raw();
    const std::int64_t min_raw = cfg.fmt.min_raw();

    // Double-buffered: N_ADD writes `result`, the state register is read by 1_MULT.
    std::vector<std::int64_t> acc_re(static_cast<std::size_t>(size), 0);
    std::vector<std::int64_t> acc_im(static_cast<std::size_t>(size), 0);

    RadReg rad_reg;
    NormReg norm_reg;
    std::array<CordicReg, fxp::kCordicStages> cordic{};
    MultReg mult_reg;

    OpStats stats;
    std::int64_t count_1st = 0;
    std::int64_t retired = 0;

    auto accumulate = [&](std::int64_t& slot, std::int64_t delta) {
        std::int64_t v = slot + delta;  // |raw| < 2^61, cannot wrap
        if (v > max_raw) {
            v = max_raw;
            ctx.raise_overflow();
        } else if (v < min_raw) {
            v = min_raw;
            ctx.raise_overflow();
        }
        slot = v;
    };

    while (retired < size) {
        ++stats.cycles;
        ++clock.cycle;
        CycleTrace trace;

        // N_ADD: fold the product into every result slot with the H1 column sign.
        if (mult_reg.valid) {
            const std::int64_t c = mult_reg.c;
            const std::int64_t re = mult_reg.mult.re.raw;
            const std::int64_t im = mult_reg.mult.im.raw;
            for (std::int64_t i = 0; i < size; ++i) {
                if (hadamard_sign(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(c)) > 0) {
                    accumulate(acc_re[i], re);
                    accumulate(acc_im[i], im);
                } else {
                    accumulate(acc_re[i], -re);
                    accumulate(acc_im[i], -im);
                }
            }
            stats.adds += size;
            ++retired;
            trace.n_add = c;
        }

        // 1_MULT: sign-adjusted CORDIC output times state[count_4th].
        mult_reg.valid = false;
        const CordicReg& tail = cordic[fxp::kCordicStages - 1];
        if (tail.valid) {
            const auto [cos_t, sin_t] =
                fxp::apply_flags(Fx{tail.regs.x, cfg.fmt}, Fx{tail.regs.y, cfg.fmt}, tail.flags, ctx);
            mult_reg = {true, tail.c, fxp::cfx_rotate(state.amps[static_cast<std::size_t>(tail.c)], cos_t, sin_t, ctx),
                        tail.flags};
            ++stats.mults;
            trace.one_mult = tail.c;
            trace.neg_cos = tail.flags.neg_cos;
            trace.neg_sin = tail.flags.neg_sin;
        }

        // CORDIC: 16 micro-rotation stages, flags travel alongside.
        for (int s = fxp::kCordicStages - 1; s > 0; --s) {
            const CordicReg& in = cordic[s - 1];
            cordic[s] = in.valid ? CordicReg{true, in.c, fxp::cordic_step(in.regs, s, table), in.flags} : CordicReg{};
        }
        cordic[0] = norm_reg.valid ? CordicReg{true, norm_reg.c,
                                               fxp::cordic_step(fxp::cordic_load(norm_reg.rad_q1, table), 0, table),
                                               norm_reg.flags}
                                   : CordicReg{};

        // NORMALIZE_RAD: reduce modulo 2pi in the rad register, fold to Q1.
        norm_reg.valid = false;
        if (rad_reg.valid) {
            const Fx reduced = fxp::reduce_mod_2pi(rad_reg.rad, angle_consts);
            const Fx narrowed{reduced.raw, cfg.fmt};  // same fractional bits, value < 2pi
            const auto [q1, flags] = fxp::normalize_rad(narrowed, data_consts);
            norm_reg = {true, rad_reg.c, q1, flags};
            trace.normalize_rad = rad_reg.c;
        }

        // CALCULATE_RAD: rad = term[count_1st] * (gamma or beta).
        rad_reg.valid = false;
        if (count_1st < size) {
            rad_reg = {true, count_1st,
                       fxp::fx_mul(program.terms[static_cast<std::size_t>(count_1st)], program.multiplier, ctx)};
            trace.calculate_rad = count_1st;
            ++count_1st;
        }

        if (cfg.trace) {
            trace.cycle = clock.cycle;
            trace.op_index = clock.op_index;
            trace.layer = program.layer;
            trace.kind = program.kind;
            for (const auto& r : cordic) {
                if (!r.valid) continue;
                if (trace.cordic_first < 0) trace.cordic_first = r.c;
                trace.cordic_last = r.c;
                ++trace.cordic_occupancy;
            }
            trace.overflow = ctx.overflow();
            cfg.trace(trace);
        }
    }

    for (std::int64_t i = 0; i < size; ++i) {
        state.amps[static_cast<std::size_t>(i)] = CFx{Fx{acc_re[i], cfg.fmt}, Fx{acc_im[i], cfg.fmt}};
    }
    // H1 = sqrt(N) * (unitary Walsh-Hadamard).
    state.scale_half -= state.n;
    ++clock.op_index;
    return stats;
}

std::int64_t run_elemental_ansatz(StateVector& state, std::span<const double> angles, const PipelineConfig& cfg,
                                  FxContext& ctx) {
    RunClock clock;
    return run_elemental_op(state, angle_program(angles, cfg), cfg, ctx, clock).cycles;
}

void rescale(StateVector& state, int bits) {
    if (bits < 0) throw std::invalid_argument("shift must be non-negative");
    for (auto& a : state.amps) {
        a.re = fxp::fx_shift_right(a.re, bits);
        a.im = fxp::fx_shift_right(a.im, bits);
    }
    state.scale_half += 2 * bits;
}

namespace {

/// Bits shifted after the cost op; the rest follow the mixer op.
int shift_after_cost(const PipelineConfig& cfg, int n) {
    return cfg.shift_placement == ShiftPlacement::split ? (cfg.shift_for(n) + 1) / 2 : 0;
}

}  // namespace

OpStats run_layer(StateVector& state, const AngleProgram& cost, const AngleProgram& mixer, const PipelineConfig& cfg,
                  FxContext& ctx, RunClock& clock) {
    const int shift = cfg.shift_for(state.n);
    const int first = shift_after_cost(cfg, state.n);

    OpStats total = run_elemental_op(state, cost, cfg, ctx, clock);
    rescale(state, first);
    const OpStats m = run_elemental_op(state, mixer, cfg, ctx, clock);
    rescale(state, shift - first);

    total.cycles += m.cycles;
    total.mults += m.mults;
    total.adds += m.adds;
    return total;
}

std::int64_t run_layer(StateVector& state, std::span<const double> cost_angles, std::span<const double> mixer_angles,
                       const PipelineConfig& cfg, FxContext& ctx) {
    RunClock clock;
    AngleProgram cost = angle_program(cost_angles, cfg);
    AngleProgram mixer = angle_program(mixer_angles, cfg);
    mixer.kind = OpKind::mixer;
    return run_layer(state, cost, mixer, cfg, ctx, clock).cycles;
}

QmaRun run_qaoa(const WeightedGraph& g, const QaoaParams& params, const PipelineConfig& cfg) {
    params.validate();
    const int n = g.num_vertices();
    const CostDiagonal diag = build_cost_diagonal(g, n);
    const MixerExponents mix = build_mixer_exponents(n);

    QmaRun run{init_uniform_state(n, cfg.fmt), {}};
    FxContext ctx;
    RunClock clock{kSetupCycles, 0};
    run.report.cycles_total = kSetupCycles;

    for (int k = 0; k < params.layers(); ++k) {
        const AngleProgram cost = cost_program(diag, params.gamma[k], k, cfg);
        const AngleProgram mixer = mixer_program(mix, params.beta[k], k, cfg);
        const int shift = cfg.shift_for(n);
        const int first = shift_after_cost(cfg, n);

        for (const AngleProgram* prog : {&cost, &mixer}) {
            const OpStats s = run_elemental_op(run.state, *prog, cfg, ctx, clock);
            rescale(run.state, prog == &cost ? first : shift - first);
            run.report.cycles_per_op.push_back(s.cycles);
            run.report.cycles_total += s.cycles;
            run.report.mults += s.mults;
            run.report.adds += s.adds;
        }
    }
    run.report.overflow = ctx.overflow();
    return run;
}

}  // namespace qmax::qma
