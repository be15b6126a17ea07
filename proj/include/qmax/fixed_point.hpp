#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>

namespace qmax::fxp {

__extension__ typedef __int128 int128;

/// Signed two's-complement Q-format: `word_bits` total, `frac_bits` fractional.
struct FxFormat {
    int word_bits = 32;
    int frac_bits = 25;

    static constexpr int kMaxWordBits = 62;

    /// Throws std::invalid_argument unless 2 <= frac_bits <= word_bits - 2 <= 60.
    void validate() const;

    /// Parses "qI.F" (I integer bits including sign). Word size is I + F.
    static FxFormat parse(std::string_view text);
    std::string to_string() const;

    std::int64_t max_raw() const noexcept { return (std::int64_t{1} << (word_bits - 1)) - 1; }
    std::int64_t min_raw() const noexcept { return -(std::int64_t{1} << (word_bits - 1)); }
    double ulp() const noexcept;

    /// Same fractional bits, `extra` more integer bits (capped at kMaxWordBits).
    FxFormat widened(int extra) const noexcept;

    friend bool operator==(const FxFormat&, const FxFormat&) = default;
};

inline constexpr FxFormat kDefaultFormat{32, 25};

/// Carries the sticky overflow flag through a computation. Never cleared once raised.
class FxContext {
public:
    void raise_overflow() noexcept { overflow_ = true; }
    bool overflow() const noexcept { return overflow_; }
    void merge(const FxContext& other) noexcept { overflow_ = overflow_ || other.overflow_; }

private:
    bool overflow_ = false;
};

struct Fx {
    std::int64_t raw = 0;
    FxFormat fmt = kDefaultFormat;

    double to_double() const noexcept;
    friend bool operator==(const Fx&, const Fx&) = default;
};

struct CFx {
    Fx re;
    Fx im;

    std::complex<double> to_complex() const noexcept { return {re.to_double(), im.to_double()}; }
    friend bool operator==(const CFx&, const CFx&) = default;
};

/// Clamp a wide intermediate into `fmt`, raising the sticky flag on saturation.
std::int64_t saturate(int128 value, const FxFormat& fmt, FxContext& ctx) noexcept;

/// Arithmetic right shift by `shift` with round-half-to-even.
int128 round_shift_even(int128 value, int shift) noexcept;

Fx fx_from_real(double x, const FxFormat& fmt, FxContext& ctx);
Fx fx_from_raw(std::int64_t raw, const FxFormat& fmt);
Fx fx_zero(const FxFormat& fmt) noexcept;
Fx fx_one(const FxFormat& fmt, FxContext& ctx);

/// Re-express `a` in `target` (round-half-even when dropping fractional bits).
Fx fx_convert(const Fx& a, const FxFormat& target, FxContext& ctx);

Fx fx_add(const Fx& a, const Fx& b, FxContext& ctx);
Fx fx_sub(const Fx& a, const Fx& b, FxContext& ctx);
Fx fx_neg(const Fx& a, FxContext& ctx);
Fx fx_mul(const Fx& a, const Fx& b, FxContext& ctx);

/// Arithmetic (flooring) right shift, as a hardware barrel shifter does.
Fx fx_shift_right(const Fx& a, int bits);

CFx cfx_from_complex(std::complex<double> z, const FxFormat& fmt, FxContext& ctx);
CFx cfx_add(const CFx& a, const CFx& b, FxContext& ctx);
CFx cfx_sub(const CFx& a, const CFx& b, FxContext& ctx);

/// (a.re + i a.im)(cos + i sin) using four real multiplies and two adds.
CFx cfx_rotate(const CFx& a, const Fx& cos_theta, const Fx& sin_theta, FxContext& ctx);

}  // namespace qmax::fxp
