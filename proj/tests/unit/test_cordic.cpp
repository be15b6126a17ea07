#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qmax/cordic.hpp"
#include "qmax/rng.hpp"

using namespace qmax::fxp;

namespace {

constexpr FxFormat kQ = kDefaultFormat;
constexpr double kPi = std::numbers::pi;

Fx from(double x) {
    FxContext ctx;
    return fx_from_real(x, kQ, ctx);
}

}  // namespace

TEST(Cordic, GainConstant) {
    // prod_{i<16} (1 + 2^-2i)^-1/2 in double precision.
    EXPECT_NEAR(kCordicGain, 0.6072529351031393, 1e-15);
    EXPECT_EQ(CordicTable(kQ).gain_raw, 20376027);
}

TEST(Cordic, AtanTable) {
    const CordicTable t(kQ);
    for (int i = 0; i < kCordicStages; ++i) {
        EXPECT_EQ(t.atan_raw[i], std::llround(std::ldexp(std::atan(std::ldexp(1.0, -i)), 25)));
    }
}

TEST(ReduceMod2Pi, Examples) {
    const AngleConstants k(kQ);
    EXPECT_LE(std::abs(reduce_mod_2pi(from(2.5 * kPi)).raw - k.half_pi.raw), 1);
    EXPECT_LE(std::abs(reduce_mod_2pi(from(-0.5 * kPi)).raw - k.three_half_pi.raw), 1);
    EXPECT_EQ(reduce_mod_2pi(from(0.0)).raw, 0);
    EXPECT_EQ(reduce_mod_2pi(k.two_pi).raw, 0);
    qmax::SplitMix64 rng(1);
    for (int t = 0; t < 10000; ++t) {
        const Fx r = reduce_mod_2pi(from(rng.uniform(-60, 60)));
        EXPECT_GE(r.raw, 0);
        EXPECT_LT(r.raw, k.two_pi.raw);
    }
}

TEST(NormalizeRad, BranchTable) {
    const AngleConstants k(kQ);
    auto [a, fa] = normalize_rad(from(kPi / 3));
    EXPECT_EQ(a.raw, from(kPi / 3).raw);
    EXPECT_EQ(fa, (QuadrantFlags{false, false}));

    auto [b, fb] = normalize_rad(k.pi);
    EXPECT_EQ(b.raw, 0);
    EXPECT_EQ(fb, (QuadrantFlags{true, true}));

    auto [c, fc] = normalize_rad(k.three_half_pi);
    EXPECT_EQ(c.raw, k.two_pi.raw - k.three_half_pi.raw);
    EXPECT_LE(std::abs(c.raw - k.half_pi.raw), 1);
    EXPECT_EQ(fc, (QuadrantFlags{false, true}));

    auto [d, fd] = normalize_rad(from(2.0));
    EXPECT_EQ(d.raw, k.pi.raw - from(2.0).raw);
    EXPECT_EQ(fd, (QuadrantFlags{true, false}));

    EXPECT_THROW(normalize_rad(from(-0.1)), std::domain_error);
    EXPECT_THROW(normalize_rad(k.two_pi), std::domain_error);
}

TEST(CordicSinCos, Examples) {
    const double tol = std::ldexp(1.0, -14);
    auto check = [&](double th, double c, double s) {
        const auto [cq, sq] = cordic_sincos(from(th));
        EXPECT_NEAR(cq.to_double(), c, tol) << th;
        EXPECT_NEAR(sq.to_double(), s, tol) << th;
    };
    check(0.0, 1.0, 0.0);
    check(kPi / 4, 0.70710678118654752, 0.70710678118654752);
    check(kPi / 3, 0.5, 0.86602540378443865);
    check(kPi / 2, 0.0, 1.0);
    EXPECT_THROW(cordic_sincos(from(1.6)), std::domain_error);
    EXPECT_THROW(cordic_sincos(from(-0.01)), std::domain_error);
}

TEST(CordicSinCos, FirstQuadrantBoundAndNorm) {
    qmax::SplitMix64 rng(77);
    const CordicTable table(kQ);
    double worst = 0.0;
    double worst_norm = 0.0;
    for (int t = 0; t < 100000; ++t) {
        const Fx th = from(rng.uniform(0.0, kPi / 2));
        const auto [c, s] = cordic_sincos(th, table);
        const double x = th.to_double();
        worst = std::max({worst, std::abs(c.to_double() - std::cos(x)), std::abs(s.to_double() - std::sin(x))});
        worst_norm = std::max(worst_norm, std::abs(c.to_double() * c.to_double() + s.to_double() * s.to_double() - 1));
    }
    EXPECT_LE(worst, std::ldexp(1.0, -14));
    EXPECT_LE(worst_norm, std::ldexp(1.0, -11));
}

TEST(ApplyFlags, Examples) {
    FxContext ctx;
    const auto [c1, s1] = apply_flags(from(1.0), from(0.0), {true, true}, ctx);
    EXPECT_EQ(c1.to_double(), -1.0);
    EXPECT_EQ(s1.to_double(), 0.0);
    const auto [c2, s2] = apply_flags(from(0.5), from(0.866), {false, false}, ctx);
    EXPECT_EQ(c2, from(0.5));
    EXPECT_EQ(s2, from(0.866));
    const auto [c3, s3] = fx_cos_sin(from(4.0), ctx);
    EXPECT_NEAR(c3.to_double(), std::cos(4.0), std::ldexp(1.0, -14));
    EXPECT_NEAR(s3.to_double(), std::sin(4.0), std::ldexp(1.0, -14));
    EXPECT_FALSE(ctx.overflow());
}

TEST(FxCosSin, WideRangeBound) {
    qmax::SplitMix64 rng(123);
    FxContext ctx;
    double worst = 0.0;
    for (int t = 0; t < 100000; ++t) {
        const double x = rng.uniform(-8 * kPi, 8 * kPi);
        const auto [c, s] = fx_cos_sin(from(x), ctx);
        worst = std::max({worst, std::abs(c.to_double() - std::cos(x)), std::abs(s.to_double() - std::sin(x))});
    }
    EXPECT_LE(worst, std::ldexp(1.0, -12));
    EXPECT_FALSE(ctx.overflow());
}
