#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "qmax/cordic.hpp"
#include "qmax/diagonals.hpp"
#include "qmax/fixed_point.hpp"
#include "qmax/graph.hpp"
#include "qmax/params.hpp"

/// Cycle-accurate model of the QAOA MaxCut accelerator datapath.
///
/// One elemental ansatz operation streams the N diagonal elements through
///
///   CALCULATE_RAD -> NORMALIZE_RAD -> CORDIC x16 -> 1_MULT -> N_ADD
///
/// issuing one element per clock. Element c reaches N_ADD kPipelineLatency
/// clocks after it was issued, so a full operation takes N + kPipelineLatency
/// clocks. N_ADD folds the product into all N result slots with the sign
/// (-1)^popcount(i & c) of the +-1 Hadamard matrix H1.
namespace qmax::qma {

using fxp::CFx;
using fxp::Fx;
using fxp::FxContext;
using fxp::FxFormat;

/// CALCULATE_RAD (1) + NORMALIZE_RAD (1) + CORDIC (16) + 1_MULT (1).
inline constexpr int kPipelineLatency = 1 + 1 + fxp::kCordicStages + 1;
/// One clock to load the uniform state into the state register.
inline constexpr std::int64_t kSetupCycles = 1;
inline constexpr double kClockHz = 100e6;
/// Extra integer bits of the rad register over the amplitude datapath.
inline constexpr int kAngleGuardBits = 16;

enum class OpKind { cost, mixer };

/// Where the per-layer 1/2^n right shift is applied.
enum class ShiftPlacement {
    split,         // ceil(s/2) bits after the cost op, floor(s/2) after the mixer op
    end_of_layer,  // all s bits after the mixer op
};

/// Register snapshot at the end of one clock. Element indices are -1 for bubbles.
struct CycleTrace {
    std::int64_t cycle = 0;  // global clock, counting setup
    int op_index = 0;
    int layer = 0;
    OpKind kind = OpKind::cost;
    std::int64_t calculate_rad = -1;
    std::int64_t normalize_rad = -1;
    std::int64_t cordic_first = -1;
    std::int64_t cordic_last = -1;
    int cordic_occupancy = 0;
    std::int64_t one_mult = -1;
    std::int64_t n_add = -1;
    bool neg_cos = false;
    bool neg_sin = false;
    bool overflow = false;
};

using TraceSink = std::function<void(const CycleTrace&)>;

struct PipelineConfig {
    FxFormat fmt = fxp::kDefaultFormat;
    /// Bits shifted right per layer; negative means n (the exact 1/2^n factor).
    int per_layer_shift = -1;
    ShiftPlacement shift_placement = ShiftPlacement::split;
    TraceSink trace;

    int shift_for(int n) const noexcept { return per_layer_shift < 0 ? n : per_layer_shift; }
    FxFormat angle_format() const noexcept { return fmt.widened(kAngleGuardBits); }
};

/// Quantum register: physical amplitude l = amps[l] * 2^(scale_half / 2).
struct StateVector {
    int n = 0;
    FxFormat fmt = fxp::kDefaultFormat;
    std::vector<CFx> amps;
    int scale_half = 0;

    std::size_t size() const noexcept { return amps.size(); }
    double scale() const noexcept;
    Eigen::VectorXcd stored() const;
    Eigen::VectorXcd physical() const;
};

/// Uniform superposition with exact stored amplitude 2^-ceil(n/2).
StateVector init_uniform_state(int n, const FxFormat& fmt);

/// Natural-order Walsh-Hadamard sign (-1)^popcount(row & col).
inline int hadamard_sign(std::uint64_t row, std::uint64_t col) noexcept {
    return (__builtin_popcountll(row & col) & 1) != 0 ? -1 : 1;
}

/// Operands of one elemental op: CALCULATE_RAD forms rad = terms[c] * multiplier
/// in the widened angle format.
struct AngleProgram {
    OpKind kind = OpKind::cost;
    int layer = 0;
    std::vector<Fx> terms;
    Fx multiplier;
};

AngleProgram cost_program(const CostDiagonal& d, double gamma, int layer, const PipelineConfig& cfg);
AngleProgram mixer_program(const MixerExponents& m, double beta, int layer, const PipelineConfig& cfg);
/// Precomputed angles with a unit multiplier.
AngleProgram angle_program(std::span<const double> angles, const PipelineConfig& cfg);

struct OpStats {
    std::int64_t cycles = 0;
    std::int64_t mults = 0;
    std::int64_t adds = 0;
};

/// Clock bookkeeping shared by consecutive operations of one run (for tracing).
struct RunClock {
    std::int64_t cycle = 0;
    int op_index = 0;
};

/// Streams one H1 * D product through the pipeline. Saturation raises the
/// sticky flag in `ctx`; the run continues.
OpStats run_elemental_op(StateVector& state, const AngleProgram& program, const PipelineConfig& cfg, FxContext& ctx,
                         RunClock& clock);

/// Convenience form taking phase angles in radians; returns the clock count.
std::int64_t run_elemental_ansatz(StateVector& state, std::span<const double> angles, const PipelineConfig& cfg,
                                  FxContext& ctx);

/// Cost op, mixer op and the 1/2^n rescaling (exact power-of-two scale bookkeeping).
OpStats run_layer(StateVector& state, const AngleProgram& cost, const AngleProgram& mixer, const PipelineConfig& cfg,
                  FxContext& ctx, RunClock& clock);
std::int64_t run_layer(StateVector& state, std::span<const double> cost_angles, std::span<const double> mixer_angles,
                       const PipelineConfig& cfg, FxContext& ctx);

/// Right-shift every component by `bits` and account for it in scale_half.
void rescale(StateVector& state, int bits);

struct CycleReport {
    std::int64_t cycles_total = 0;
    std::int64_t setup_cycles = kSetupCycles;
    std::vector<std::int64_t> cycles_per_op;
    std::int64_t mults = 0;
    std::int64_t adds = 0;
    bool overflow = false;

    /// cycles at the 100 MHz accelerator clock, in microseconds.
    double derived_time_us() const noexcept { return static_cast<double>(cycles_total) / kClockHz * 1e6; }
};

/// Closed-form clock count for p layers on n qubits.
inline std::int64_t expected_cycles(int n, int p) noexcept {
    return 2 * static_cast<std::int64_t>(p) * ((std::int64_t{1} << n) + kPipelineLatency) + kSetupCycles;
}

struct QmaRun {
    StateVector state;
    CycleReport report;
};

/// Uniform state, diagonals built once, p layers in order (cost then mixer).
QmaRun run_qaoa(const WeightedGraph& g, const QaoaParams& params, const PipelineConfig& cfg = {});

}  // namespace qmax::qma
