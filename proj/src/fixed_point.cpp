#include "qmax/fixed_point.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace qmax::fxp {

void FxFormat::validate() const {
    if (word_bits < 4 || word_bits > kMaxWordBits) {
        throw std::invalid_argument("fixed-point word must be 4.." + std::to_string(kMaxWordBits) + " bits");
    }
    if (frac_bits < 2 || frac_bits > word_bits - 2) {
        throw std::invalid_argument("fixed-point format needs 2 <= frac_bits <= word_bits - 2");
    }
}

FxFormat FxFormat::parse(std::string_view text) {
    if (text.size() < 4 || (text[0] != 'q' && text[0] != 'Q')) {
        throw std::invalid_argument("fixed-point format must look like qI.F");
    }
    const auto dot = text.find('.');
    if (dot == std::string_view::npos) throw std::invalid_argument("fixed-point format must look like qI.F");
    int int_bits = 0;
    int frac = 0;
    const auto ib = text.substr(1, dot - 1);
    const auto fb = text.substr(dot + 1);
    auto r1 = std::from_chars(ib.data(), ib.data() + ib.size(), int_bits);
    auto r2 = std::from_chars(fb.data(), fb.data() + fb.size(), frac);
    if (r1.ec != std::errc{} || r1.ptr != ib.data() + ib.size() || r2.ec != std::errc{} ||
        r2.ptr != fb.data() + fb.size()) {
        throw std::invalid_argument("fixed-point format must look like qI.F");
    }
    FxFormat fmt{int_bits + frac, frac};
    if (int_bits < 2) throw std::invalid_argument("fixed-point format needs at least 2 integer bits");
    fmt.validate();
    return fmt;
}

std::string FxFormat::to_string() const {
    return "q" + std::to_string(word_bits - frac_bits) + "." + std::to_string(frac_bits);
}

double FxFormat::ulp() const noexcept { return std::ldexp(1.0, -frac_bits); }

FxFormat FxFormat::widened(int extra) const noexcept {
    return {std::min(word_bits + extra, kMaxWordBits), frac_bits};
}

double Fx::to_double() const noexcept { return std::ldexp(static_cast<double>(raw), -fmt.frac_bits); }

std::int64_t saturate(int128 value, const FxFormat& fmt, FxContext& ctx) noexcept {
    const int128 hi = fmt.max_raw();
    const int128 lo = fmt.min_raw();
    if (value > hi) {
        ctx.raise_overflow();
        return fmt.max_raw();
    }
    if (value < lo) {
        ctx.raise_overflow();
        return fmt.min_raw();
    }
    return static_cast<std::int64_t>(value);
}

int128 round_shift_even(int128 value, int shift) noexcept {
    if (shift <= 0) return value << -shift;
    const int128 q = value >> shift;  // floor
    const int128 rem = value - (q << shift);
    const int128 half = int128{1} << (shift - 1);
    if (rem > half || (rem == half && (q & 1) != 0)) return q + 1;
    return q;
}

namespace {

void require_same(const FxFormat& a, const FxFormat& b) {
    if (!(a == b)) throw std::invalid_argument("fixed-point format mismatch: " + a.to_string() + " vs " + b.to_string());
}

}  // namespace

Fx fx_from_real(double x, const FxFormat& fmt, FxContext& ctx) {
    if (!std::isfinite(x)) throw std::invalid_argument("cannot convert a non-finite value to fixed point");
    const double scaled = std::ldexp(x, fmt.frac_bits);
    // Beyond 2^62 every format saturates anyway.
    if (scaled >= 0x1p62) return {saturate(int128{1} << 62, fmt, ctx), fmt};
    if (scaled <= -0x1p62) return {saturate(-(int128{1} << 62), fmt, ctx), fmt};
    // nearbyint honours the default round-to-nearest-even mode.
    return {saturate(static_cast<int128>(std::nearbyint(scaled)), fmt, ctx), fmt};
}

Fx fx_from_raw(std::int64_t raw, const FxFormat& fmt) {
    if (raw < fmt.min_raw() || raw > fmt.max_raw()) throw std::out_of_range("raw value outside format");
    return {raw, fmt};
}

Fx fx_zero(const FxFormat& fmt) noexcept { return {0, fmt}; }

Fx fx_one(const FxFormat& fmt, FxContext& ctx) { return {saturate(int128{1} << fmt.frac_bits, fmt, ctx), fmt}; }

Fx fx_convert(const Fx& a, const FxFormat& target, FxContext& ctx) {
    const int128 shifted = round_shift_even(a.raw, a.fmt.frac_bits - target.frac_bits);
    return {saturate(shifted, target, ctx), target};
}

Fx fx_add(const Fx& a, const Fx& b, FxContext& ctx) {
    require_same(a.fmt, b.fmt);
    return {saturate(static_cast<int128>(a.raw) + b.raw, a.fmt, ctx), a.fmt};
}

Fx fx_sub(const Fx& a, const Fx& b, FxContext& ctx) {
    require_same(a.fmt, b.fmt);
    return {saturate(static_cast<int128>(a.raw) - b.raw, a.fmt, ctx), a.fmt};
}

Fx fx_neg(const Fx& a, FxContext& ctx) { return {saturate(-static_cast<int128>(a.raw), a.fmt, ctx), a.fmt}; }

Fx fx_mul(const Fx& a, const Fx& b, FxContext& ctx) {
    require_same(a.fmt, b.fmt);
    const int128 product = static_cast<int128>(a.raw) * b.raw;
    return {saturate(round_shift_even(product, a.fmt.frac_bits), a.fmt, ctx), a.fmt};
}

Fx fx_shift_right(const Fx& a, int bits) {
    if (bits < 0) throw std::invalid_argument("shift must be non-negative");
    if (bits >= 63) return {a.raw < 0 ? -1 : 0, a.fmt};
    return {a.raw >> bits, a.fmt};
}

CFx cfx_from_complex(std::complex<double> z, const FxFormat& fmt, FxContext& ctx) {
    return {fx_from_real(z.real(), fmt, ctx), fx_from_real(z.imag(), fmt, ctx)};
}

CFx cfx_add(const CFx& a, const CFx& b, FxContext& ctx) { return {fx_add(a.re, b.re, ctx), fx_add(a.im, b.im, ctx)}; }

CFx cfx_sub(const CFx& a, const CFx& b, FxContext& ctx) { return {fx_sub(a.re, b.re, ctx), fx_sub(a.im, b.im, ctx)}; }

CFx cfx_rotate(const CFx& a, const Fx& cos_theta, const Fx& sin_theta, FxContext& ctx) {
    const Fx re = fx_sub(fx_mul(a.re, cos_theta, ctx), fx_mul(a.im, sin_theta, ctx), ctx);
    const Fx im = fx_add(fx_mul(a.re, sin_theta, ctx), fx_mul(a.im, cos_theta, ctx), ctx);
    return {re, im};
}

}  // namespace qmax::fxp
