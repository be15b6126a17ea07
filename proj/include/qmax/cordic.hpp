#pragma once

#include <array>
#include <utility>

#include "qmax/fixed_point.hpp"

namespace qmax::fxp {

inline constexpr int kCordicStages = 16;

namespace detail {

constexpr double constexpr_sqrt(double x) {
    double r = x > 1.0 ? x : 1.0;
    for (int i = 0; i < 64; ++i) r = 0.5 * (r + x / r);
    return r;
}

constexpr double cordic_gain() {
    double k2 = 1.0;
    double p = 1.0;  // 2^-2i
    for (int i = 0; i < kCordicStages; ++i) {
        k2 /= 1.0 + p;
        p *= 0.25;
    }
    return constexpr_sqrt(k2);
}

}  // namespace detail

/// K = prod_{i<16} (1 + 2^-2i)^-1/2, the rotation-mode gain compensation.
inline constexpr double kCordicGain = detail::cordic_gain();

/// Sign adjustment registers produced by quadrant normalization.
struct QuadrantFlags {
    bool neg_cos = false;
    bool neg_sin = false;
    friend bool operator==(const QuadrantFlags&, const QuadrantFlags&) = default;
};

/// pi/2, pi, 3pi/2, 2pi quantized once in a given format.
struct AngleConstants {
    Fx half_pi;
    Fx pi;
    Fx three_half_pi;
    Fx two_pi;

    explicit AngleConstants(const FxFormat& fmt);
};

/// Arctangent table and gain in a given format.
struct CordicTable {
    FxFormat fmt;
    std::array<std::int64_t, kCordicStages> atan_raw{};
    std::int64_t gain_raw = 0;
    std::int64_t half_pi_raw = 0;

    explicit CordicTable(const FxFormat& fmt);
};

/// x/y/z registers of one CORDIC stage.
struct CordicRegs {
    std::int64_t x = 0;
    std::int64_t y = 0;
    std::int64_t z = 0;
};

Fx reduce_mod_2pi(const Fx& rad);
Fx reduce_mod_2pi(const Fx& rad, const AngleConstants& k);

/// Four-branch first-quadrant fold. Throws std::domain_error outside [0, 2pi).
std::pair<Fx, QuadrantFlags> normalize_rad(const Fx& rad);
std::pair<Fx, QuadrantFlags> normalize_rad(const Fx& rad, const AngleConstants& k);

/// Stage input registers for an angle in [0, pi/2].
CordicRegs cordic_load(const Fx& rad_q1, const CordicTable& table);

/// One rotation-mode micro-rotation; `stage` in [0, 16).
CordicRegs cordic_step(const CordicRegs& in, int stage, const CordicTable& table) noexcept;

/// Runs all 16 stages. Throws std::domain_error for inputs outside [0, pi/2] (+1 ulp).
std::pair<Fx, Fx> cordic_sincos(const Fx& rad_q1, const CordicTable& table);
std::pair<Fx, Fx> cordic_sincos(const Fx& rad_q1);

std::pair<Fx, Fx> apply_flags(const Fx& cos_q1, const Fx& sin_q1, QuadrantFlags flags, FxContext& ctx);

/// reduce -> normalize -> CORDIC -> flags, returning (cos, sin).
std::pair<Fx, Fx> fx_cos_sin(const Fx& rad, FxContext& ctx);

}  // namespace qmax::fxp
