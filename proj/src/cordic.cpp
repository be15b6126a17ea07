#include "qmax/cordic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qmax::fxp {

namespace {

Fx quantize(double value, const FxFormat& fmt) {
    FxContext ctx;
    Fx out = fx_from_real(value, fmt, ctx);
    if (ctx.overflow()) throw std::invalid_argument("format too narrow for angle constants: " + fmt.to_string());
    return out;
}

}  // namespace

AngleConstants::AngleConstants(const FxFormat& fmt)
    : half_pi(quantize(0.5 * std::numbers::pi, fmt)),
      pi(quantize(std::numbers::pi, fmt)),
      three_half_pi(quantize(1.5 * std::numbers::pi, fmt)),
      two_pi(quantize(2.0 * std::numbers::pi, fmt)) {}

CordicTable::CordicTable(const FxFormat& f) : fmt(f) {
    for (int i = 0; i < kCordicStages; ++i) atan_raw[i] = quantize(std::atan(std::ldexp(1.0, -i)), fmt).raw;
    gain_raw = quantize(kCordicGain, fmt).raw;
    half_pi_raw = quantize(0.5 * std::numbers::pi, fmt).raw;
}

Fx reduce_mod_2pi(const Fx& rad) { return reduce_mod_2pi(rad, AngleConstants(rad.fmt)); }

Fx reduce_mod_2pi(const Fx& rad, const AngleConstants& k) {
    if (!(rad.fmt == k.two_pi.fmt)) throw std::invalid_argument("angle constant format mismatch");
    std::int64_t r = rad.raw % k.two_pi.raw;
    if (r < 0) r += k.two_pi.raw;
    return {r, rad.fmt};
}

std::pair<Fx, QuadrantFlags> normalize_rad(const Fx& rad) { return normalize_rad(rad, AngleConstants(rad.fmt)); }

std::pair<Fx, QuadrantFlags> normalize_rad(const Fx& rad, const AngleConstants& k) {
    if (!(rad.fmt == k.two_pi.fmt)) throw std::invalid_argument("angle constant format mismatch");
    if (rad.raw < 0 || rad.raw >= k.two_pi.raw) throw std::domain_error("normalize_rad expects an angle in [0, 2pi)");
    QuadrantFlags flags;
    std::int64_t q1 = 0;
    if (rad.raw < k.half_pi.raw) {
        q1 = rad.raw;
    } else if (rad.raw < k.pi.raw) {
        q1 = k.pi.raw - rad.raw;
        flags.neg_cos = true;
    } else if (rad.raw < k.three_half_pi.raw) {
        q1 = rad.raw - k.pi.raw;
        flags.neg_sin = true;
        flags.neg_cos = true;
    } else {
        q1 = k.two_pi.raw - rad.raw;
        flags.neg_sin = true;
    }
    return {Fx{q1, rad.fmt}, flags};
}

CordicRegs cordic_load(const Fx& rad_q1, const CordicTable& table) {
    if (!(rad_q1.fmt == table.fmt)) throw std::invalid_argument("CORDIC table format mismatch");
    // 2pi - 3pi/2 can land one ulp above the quantized pi/2.
    if (rad_q1.raw < 0 || rad_q1.raw > table.half_pi_raw + 1) throw std::domain_error("CORDIC input outside [0, pi/2]");
    return {table.gain_raw, 0, rad_q1.raw};
}

CordicRegs cordic_step(const CordicRegs& in, int stage, const CordicTable& table) noexcept {
    CordicRegs out;
    if (in.z >= 0) {
        out.x = in.x - (in.y >> stage);
        out.y = in.y + (in.x >> stage);
        out.z = in.z - table.atan_raw[stage];
    } else {
        out.x = in.x + (in.y >> stage);
        out.y = in.y - (in.x >> stage);
        out.z = in.z + table.atan_raw[stage];
    }
    return out;
}

std::pair<Fx, Fx> cordic_sincos(const Fx& rad_q1, const CordicTable& table) {
    CordicRegs r = cordic_load(rad_q1, table);
    for (int i = 0; i < kCordicStages; ++i) r = cordic_step(r, i, table);
    return {Fx{r.x, rad_q1.fmt}, Fx{r.y, rad_q1.fmt}};
}

std::pair<Fx, Fx> cordic_sincos(const Fx& rad_q1) { return cordic_sincos(rad_q1, CordicTable(rad_q1.fmt)); }

std::pair<Fx, Fx> apply_flags(const Fx& cos_q1, const Fx& sin_q1, QuadrantFlags flags, FxContext& ctx) {
    return {flags.neg_cos ? fx_neg(cos_q1, ctx) : cos_q1, flags.neg_sin ? fx_neg(sin_q1, ctx) : sin_q1};
}

std::pair<Fx, Fx> fx_cos_sin(const Fx& rad, FxContext& ctx) {
    const auto [q1, flags] = normalize_rad(reduce_mod_2pi(rad));
    const auto [c, s] = cordic_sincos(q1);
    return apply_flags(c, s, flags, ctx);
}

}  // namespace qmax::fxp
