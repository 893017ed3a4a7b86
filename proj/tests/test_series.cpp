#include <gtest/gtest.h>

#include <random>

#include <qdissect/series.hpp>

#include "oracles.hpp"

using namespace qdissect;

namespace
{

TruncatedSeries random_series(std::mt19937_64& rng, int order, long bound = 50, double density = 1.0)
{
    return TruncatedSeries(oracle::random_vec(rng, order, bound, density), order);
}

// Random series with a unit constant term.
TruncatedSeries random_unit_series(std::mt19937_64& rng, int order)
{
    auto v = oracle::random_vec(rng, order, 20);
    v[0] = (rng() % 2) ? 1 : -1;
    return TruncatedSeries(std::move(v), order);
}

} // namespace

TEST(Series, ConstructionPadsToOrder)
{
    const auto s = make_series({1, 2}, 5);
    EXPECT_EQ(s.order(), 5);
    EXPECT_EQ(s[1], 2);
    EXPECT_EQ(s[4], 0);
}

TEST(Series, RejectsBadOrder)
{
    EXPECT_THROW(TruncatedSeries::zero(0), invalid_order_error);
    EXPECT_THROW(make_series({1, 2, 3}, 2), invalid_order_error);
}

TEST(Series, CoefficientOutsideOrderThrows)
{
    const auto s = make_series({1}, 3);
    EXPECT_THROW(s[3], out_of_order_error);
    EXPECT_THROW(s[-1], out_of_order_error);
    EXPECT_THROW(coeff(s, 7), out_of_order_error);
}

TEST(Series, BinaryOpsTakeMinimumOrder)
{
    const auto a = make_series({1, 1, 1, 1, 1}, 5);
    const auto b = make_series({1, -1}, 3);
    EXPECT_EQ((a + b).order(), 3);
    EXPECT_EQ((a * b).order(), 3);
    EXPECT_EQ(a * b, make_series({1, 0, 0}, 3));
}

TEST(Series, TimesQPowerRaisesOrder)
{
    const auto s = make_series({1, 2, 3}, 3).times_q_power(2);
    EXPECT_EQ(s.order(), 5);
    EXPECT_EQ(s, make_series({0, 0, 1, 2, 3}, 5));
    EXPECT_THROW(s.truncated(6), out_of_order_error);
}

TEST(Series, MonomialPastOrderIsDropped)
{
    EXPECT_TRUE(TruncatedSeries::monomial(4, Coefficient(7), 4).is_zero());
    EXPECT_THROW(TruncatedSeries::monomial(-1, Coefficient(7), 4), domain_error);
}

TEST(Series, DivisionByNonUnitThrows)
{
    const auto one = TruncatedSeries::one(4);
    EXPECT_THROW(divide(one, make_series({2, 1}, 4)), not_invertible_error);
    EXPECT_THROW(invert(make_series({0, 1}, 4)), not_invertible_error);
    EXPECT_NO_THROW(invert(make_series({-1, 1}, 4)));
}

TEST(Series, GeometricSeriesInverse)
{
    const auto inv = invert(make_series({1, -1}, 6));
    EXPECT_EQ(inv, make_series({1, 1, 1, 1, 1, 1}, 6));
}

TEST(Series, PowersMatchRepeatedProduct)
{
    const auto a = make_series({1, -1, -1, 0, 0, 1, 0, 1}, 8);
    EXPECT_EQ(pow(a, 3), a * a * a);
    EXPECT_EQ(pow(a, 0), TruncatedSeries::one(8));
    EXPECT_EQ(pow(a, -2), invert(a * a));
}

TEST(Series, ComparisonReportsFirstMismatch)
{
    const auto a = make_series({1, 2, 3, 4}, 4);
    const auto b = make_series({1, 2, 5, 4}, 4);
    const Comparison c = equal_to_order(a, b, 4);
    ASSERT_FALSE(c);
    EXPECT_EQ(c.mismatch->exponent, 2);
    EXPECT_EQ(c.mismatch->lhs, 3);
    EXPECT_EQ(c.mismatch->rhs, 5);
    EXPECT_TRUE(equal_to_order(a, b, 2));
    EXPECT_THROW(equal_to_order(a, b, 5), out_of_order_error);
}

TEST(Series, ReduceModUsesNonNegativeResidues)
{
    const auto m = reduce_mod(make_series({-1, -25, 26, 7}, 4), Coefficient(25));
    EXPECT_EQ(m[0], 24);
    EXPECT_EQ(m[1], 0);
    EXPECT_EQ(m[2], 1);
    EXPECT_EQ(m[3], 7);
    EXPECT_THROW(reduce_mod(make_series({1}, 1), Coefficient(1)), invalid_modulus_error);
}

TEST(Series, MixedModuliRejected)
{
    const auto s = make_series({1, 2}, 2);
    EXPECT_THROW(add(reduce_mod(s, Coefficient(5)), reduce_mod(s, Coefficient(25))), invalid_modulus_error);
    EXPECT_THROW(mul(reduce_mod(s, Coefficient(5)), reduce_mod(s, Coefficient(7))), invalid_modulus_error);
}

TEST(Series, CongruenceToOrder)
{
    const auto a = make_series({1, 30, 7}, 3);
    const auto b = make_series({26, 5, 2}, 3);
    EXPECT_TRUE(congruent_to_order(a, b, Coefficient(5), 3));
    EXPECT_FALSE(congruent_to_order(a, b, Coefficient(25), 3));
}

TEST(Series, BigCoefficientsStayExact)
{
    // (1 - q)^-200 has C(n+199, 199) at q^n; q^100 is far beyond 64 bits.
    const auto s = pow(make_series({1, -1}, 101), -200);
    mpz_class expected;
    mpz_bin_uiui(expected.get_mpz_t(), 299, 199);
    EXPECT_EQ(s[100], expected);
}

// ---------------------------------------------------------------------------
// Properties

TEST(SeriesProperty, RingLaws)
{
    std::mt19937_64 rng(1);
    for (int i = 0; i < 120; ++i) {
        const int n = 1 + static_cast<int>(rng() % 60);
        const auto a = random_series(rng, n), b = random_series(rng, n), c = random_series(rng, n);
        ASSERT_EQ(a + b, b + a);
        ASSERT_EQ(a * b, b * a);
        ASSERT_EQ((a + b) + c, a + (b + c));
        ASSERT_EQ((a * b) * c, a * (b * c));
        ASSERT_EQ(a * (b + c), a * b + a * c);
        ASSERT_EQ(a * TruncatedSeries::one(n), a);
        ASSERT_TRUE((a - a).is_zero());
        ASSERT_EQ(-(-a), a);
    }
}

TEST(SeriesProperty, InversionRoundTrip)
{
    std::mt19937_64 rng(2);
    for (int i = 0; i < 150; ++i) {
        const int n = 1 + static_cast<int>(rng() % 80);
        const auto a = random_unit_series(rng, n);
        const auto b = random_series(rng, n);
        ASSERT_EQ(a * invert(a), TruncatedSeries::one(n));
        ASSERT_EQ(divide(b, a) * a, b);
    }
}

TEST(SeriesProperty, PowerAdditivity)
{
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        const int n = 1 + static_cast<int>(rng() % 30);
        const auto a = random_unit_series(rng, n);
        const int j = static_cast<int>(rng() % 9) - 4, k = static_cast<int>(rng() % 9) - 4;
        ASSERT_EQ(pow(a, j) * pow(a, k), pow(a, j + k));
    }
}

TEST(SeriesProperty, ReductionIsRingMorphism)
{
    std::mt19937_64 rng(4);
    for (int i = 0; i < 120; ++i) {
        const int n = 1 + static_cast<int>(rng() % 50);
        const Coefficient m(2 + static_cast<long>(rng() % 100));
        const auto a = random_series(rng, n, 1000), b = random_series(rng, n, 1000);
        ASSERT_EQ(reduce_mod(a + b, m), add(reduce_mod(a, m), reduce_mod(b, m)));
        ASSERT_EQ(reduce_mod(a * b, m), mul(reduce_mod(a, m), reduce_mod(b, m)));
    }
}

TEST(SeriesProperty, KernelsAgreeWithOracle)
{
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        const int n = 1 + static_cast<int>(rng() % 200);
        const double density = (i % 3 == 0) ? 0.05 : 1.0;
        const auto a = random_series(rng, n, 1'000'000, density), b = random_series(rng, n, 1'000'000);
        const TruncatedSeries expected(oracle::convolve({a.coeffs().begin(), a.coeffs().end()},
                                                        {b.coeffs().begin(), b.coeffs().end()}, n),
                                       n);
        MulOptions school{MulStrategy::schoolbook}, kara{MulStrategy::karatsuba, 8};
        ASSERT_EQ(mul(a, b, school), expected);
        ASSERT_EQ(mul(a, b, kara), expected);
        ASSERT_EQ(mul(a, b), expected);
    }
}

TEST(SeriesProperty, KernelsAgreeAtOrder2000)
{
    std::mt19937_64 rng(6);
    for (int i = 0; i < 3; ++i) {
        const auto a = random_series(rng, 2000, 1L << 40), b = random_series(rng, 2000, 1L << 40);
        const auto s = mul(a, b, {MulStrategy::schoolbook});
        ASSERT_EQ(mul(a, b, {MulStrategy::karatsuba, 32}), s);
        ASSERT_EQ(mul(a, b, {MulStrategy::karatsuba, 2}).coeffs().back(), s.coeffs().back());
    }
}
