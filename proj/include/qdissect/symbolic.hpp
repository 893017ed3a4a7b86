#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "dissection.hpp"
#include "eta.hpp"
#include "laurent.hpp"

namespace qdissect
{

// ---------------------------------------------------------------------------
// P(alpha, beta) in the x, y basis

/// x^{alpha+2beta} y^{2alpha-beta} + (-1)^{alpha+beta} q^{2alpha} x^{-(alpha+2beta)} y^{-(2alpha-beta)}.
inline XYLaurentPoly P_xy(int alpha, int beta)
{
    if (alpha < 0) {
        throw domain_error("P(alpha, beta) needs alpha >= 0, got " + std::to_string(alpha));
    }
    const int a = alpha + 2 * beta;
    const int b = 2 * alpha - beta;
    const long sign = ((alpha + beta) % 2 == 0) ? 1 : -1;
    return xy_monomial(a, b) + xy_monomial(-a, -b, q_power(2 * alpha, sign));
}

struct RecCheck {
    enum class Kind { beta_step, alpha_step_zero, alpha_step_minus_one };

    Kind kind;
    int alpha;
    int beta;
    bool holds;
};

struct RecIdentityReport {
    std::vector<RecCheck> checks;

    bool all_hold() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const RecCheck& c) { return c.holds; });
    }
};

/// Checks, as exact identities in Z[q][x^{+-1}, y^{+-1}],
///   P(a,b) P(0,1)   = P(a,b+1) - P(a,b-1)
///   P(a+1,0) P(1,0) = P(a+2,0) - q^2 P(a,0)
///   P(a+1,0) P(1,-1) = P(a+2,-1) + q^2 P(a,1)
/// for 0 <= a <= alpha_max and |b| <= beta_range.
inline RecIdentityReport verify_rec_identities(int alpha_max, int beta_range)
{
    if (alpha_max < 2) {
        throw domain_error("alpha_max must be >= 2");
    }
    if (beta_range < 0) {
        throw domain_error("beta_range must be >= 0");
    }
    RecIdentityReport report;
    const XYLaurentPoly p01 = P_xy(0, 1);
    const XYLaurentPoly p10 = P_xy(1, 0);
    const XYLaurentPoly p1m1 = P_xy(1, -1);
    const QPolynomial q2 = q_power(2);
    for (int a = 0; a <= alpha_max; ++a) {
        for (int b = -beta_range; b <= beta_range; ++b) {
            const bool ok = P_xy(a, b) * p01 == P_xy(a, b + 1) - P_xy(a, b - 1);
            report.checks.push_back({RecCheck::Kind::beta_step, a, b, ok});
        }
        const bool ok0 = P_xy(a + 1, 0) * p10 == P_xy(a + 2, 0) - q2 * P_xy(a, 0);
        report.checks.push_back({RecCheck::Kind::alpha_step_zero, a, 0, ok0});
        const bool ok1 = P_xy(a + 1, 0) * p1m1 == P_xy(a + 2, -1) + q2 * P_xy(a, 1);
        report.checks.push_back({RecCheck::Kind::alpha_step_minus_one, a, -1, ok1});
    }
    return report;
}

// ---------------------------------------------------------------------------
// P(alpha, beta) reduced to K and q

/// Memoized reduction of P(alpha, beta) to Z[q][K, K^{-1}].
///
/// Seeds: P(0,0) = 2, P(0,1) = 4q/K, P(1,0) = K, P(1,-1) = K - 2q + 4q^2/K.
/// For alpha >= 2:
///   P(alpha,0)  = K P(alpha-1,0) + q^2 P(alpha-2,0)
///   P(alpha,-1) = (K - 2q + 4q^2/K) P(alpha-1,0) - q^2 P(alpha-2,1)
/// Every other beta follows from the consecutive seed pair by
///   P(alpha,beta+1) = (4q/K) P(alpha,beta) + P(alpha,beta-1)
/// run upward, or rearranged to run downward.
class PKTable
{
public:
    KLaurentPoly get(int alpha, int beta)
    {
        if (alpha < 0) {
            throw domain_error("P(alpha, beta) needs alpha >= 0, got " + std::to_string(alpha));
        }
        {
            std::shared_lock lock(mutex_);
            auto it = memo_.find({alpha, beta});
            if (it != memo_.end()) {
                return it->second;
            }
        }
        KLaurentPoly value = compute(alpha, beta);
        std::unique_lock lock(mutex_);
        memo_.try_emplace({alpha, beta}, value);
        return value;
    }

    static PKTable& shared()
    {
        static PKTable table;
        return table;
    }

    static KLaurentPoly four_q_over_K() { return K_power(-1, q_power(1, 4)); }
    static KLaurentPoly p1m1_seed() { return K_power(1) + K_power(0, q_power(1, -2)) + K_power(-1, q_power(2, 4)); }

private:
    // The two consecutive beta values from which row alpha is generated.
    static std::pair<int, int> seed_betas(int alpha) { return alpha == 0 ? std::pair{0, 1} : std::pair{-1, 0}; }

    KLaurentPoly seed(int alpha, int beta)
    {
        const QPolynomial q2 = q_power(2);
        if (alpha == 0) {
            return beta == 0 ? KLaurentPoly(2) : four_q_over_K();
        }
        if (alpha == 1) {
            return beta == 0 ? K_power(1) : p1m1_seed();
        }
        if (beta == 0) {
            return K_power(1) * get(alpha - 1, 0) + q2 * get(alpha - 2, 0);
        }
        return p1m1_seed() * get(alpha - 1, 0) - q2 * get(alpha - 2, 1);
    }

    KLaurentPoly compute(int alpha, int beta)
    {
        const auto [lo, hi] = seed_betas(alpha);
        if (beta == lo || beta == hi) {
            return seed(alpha, beta);
        }
        const KLaurentPoly step = four_q_over_K();
        if (beta > hi) {
            return step * get(alpha, beta - 1) + get(alpha, beta - 2);
        }
        return get(alpha, beta + 2) - step * get(alpha, beta + 1);
    }

    std::shared_mutex mutex_;
    std::map<std::pair<int, int>, KLaurentPoly> memo_;
};

inline KLaurentPoly P_K(int alpha, int beta) { return PKTable::shared().get(alpha, beta); }

// ---------------------------------------------------------------------------
// Evaluation as q-series

namespace detail
{

// Integer powers of a unit series, built incrementally from the series and
// its inverse.
class PowerLadder
{
public:
    PowerLadder(TruncatedSeries base, TruncatedSeries inverse)
    {
        up_.push_back(TruncatedSeries::one(base.order()));
        up_.push_back(std::move(base));
        down_.push_back(TruncatedSeries::one(inverse.order()));
        down_.push_back(std::move(inverse));
    }

    const TruncatedSeries& operator()(int e)
    {
        auto& ladder = e >= 0 ? up_ : down_;
        const auto k = static_cast<std::size_t>(e >= 0 ? e : -e);
        while (ladder.size() <= k) {
            ladder.push_back(mul(ladder.back(), ladder[1]));
        }
        return ladder[k];
    }

private:
    std::vector<TruncatedSeries> up_;
    std::vector<TruncatedSeries> down_;
};

} // namespace detail

/// Substitutes x = 1/R(q), y = 1/R(q^2).
inline TruncatedSeries evaluate_xy(const XYLaurentPoly& p, int order)
{
    detail::PowerLadder xs(x_series(order), rogers_ramanujan_R(order));
    detail::PowerLadder ys(y_series(order), substitute_power(rogers_ramanujan_R((order + 1) / 2), 2, order));
    TruncatedSeries out = TruncatedSeries::zero(order);
    for (const auto& [e, c] : p.terms()) {
        out = add(out, mul(c.to_series(order), mul(xs(e[0]), ys(e[1]))));
    }
    return out;
}

/// Substitutes K = E2 E5^5 / (E1 E10^5).
inline TruncatedSeries evaluate_K(const KLaurentPoly& p, int order)
{
    const TruncatedSeries k = K_series(order);
    detail::PowerLadder ks(k, invert(k));
    TruncatedSeries out = TruncatedSeries::zero(order);
    for (const auto& [e, c] : p.terms()) {
        out = add(out, mul(c.to_series(order), ks(e[0])));
    }
    return out;
}

// ---------------------------------------------------------------------------
// The 5-dissection of 1/E1

struct HirschhornTerm {
    long coefficient;
    int q_power;
    // Power of R(q^5) multiplying q^{q_power}.
    int r_exponent;

    friend bool operator==(const HirschhornTerm&, const HirschhornTerm&) = default;
};

/// 1/E1 = (E25^5/E5^6) * sum_i c_i q^i R(q^5)^{r_i}.
inline std::array<HirschhornTerm, 9> hirschhorn_vector()
{
    return {{{1, 0, -4}, {1, 1, -3}, {2, 2, -2}, {3, 3, -1}, {5, 4, 0}, {-3, 5, 1}, {2, 6, 2}, {-1, 7, 3}, {1, 8, 4}}};
}

/// Right-hand side of the 5-dissection of 1/E1 for an arbitrary term table.
inline TruncatedSeries hirschhorn_dissection_series(std::span<const HirschhornTerm> terms, int order)
{
    const int inner = (order + 4) / 5;
    const TruncatedSeries r5 = substitute_power(rogers_ramanujan_R(inner), 5, order);
    const TruncatedSeries x5 = substitute_power(x_series(inner), 5, order);
    detail::PowerLadder rs(r5, x5);
    TruncatedSeries sum = TruncatedSeries::zero(order);
    for (const auto& t : terms) {
        if (t.q_power >= order) {
            continue;
        }
        const TruncatedSeries piece = scale(rs(t.r_exponent), Coefficient(t.coefficient)).times_q_power(t.q_power);
        sum = add(sum, piece.truncated(order));
    }
    return mul(eta_quotient(EtaQuotientSpec({{25, 5}, {5, -6}}), order), sum);
}

// ---------------------------------------------------------------------------
// Symbolic derivation of sum b(5n+4) q^n

struct PBasisTerm {
    Coefficient coefficient;
    int q_power;
    int alpha;
    int beta;

    friend bool operator==(const PBasisTerm&, const PBasisTerm&) = default;
};

/// sum_i c_i q^{k_i} P(alpha_i, beta_i) + constant.
struct PBasisCombination {
    std::vector<PBasisTerm> terms;
    QPolynomial constant;

    void sort()
    {
        std::sort(terms.begin(), terms.end(), [](const PBasisTerm& a, const PBasisTerm& b) {
            return std::tie(a.q_power, b.alpha, b.beta) < std::tie(b.q_power, a.alpha, a.beta);
        });
    }

    Coefficient coefficient_of(int alpha, int beta, int q_power) const
    {
        Coefficient c = 0;
        for (const auto& t : terms) {
            if (t.alpha == alpha && t.beta == beta && t.q_power == q_power) {
                c += t.coefficient;
            }
        }
        return c;
    }

    XYLaurentPoly to_xy() const
    {
        XYLaurentPoly out(constant);
        for (const auto& t : terms) {
            out += QPolynomial::monomial(t.coefficient, t.q_power) * P_xy(t.alpha, t.beta);
        }
        return out;
    }

    KLaurentPoly to_K() const
    {
        KLaurentPoly out(constant);
        for (const auto& t : terms) {
            out += QPolynomial::monomial(t.coefficient, t.q_power) * P_K(t.alpha, t.beta);
        }
        return out;
    }

    friend bool operator==(const PBasisCombination& a, const PBasisCombination& b)
    {
        PBasisCombination x = a, y = b;
        x.sort();
        y.sort();
        return x.terms == y.terms && x.constant == y.constant;
    }
};

/// The q^{5n+4} part of (1/E1^2)(1/E2^2) after dividing by the eta
/// prefactor, in the x, y basis: square the 1/E1 dissection (variable
/// X = 1/R(q^5)), square the 1/E2 dissection (variable Y = 1/R(q^10) with
/// doubled q-powers), multiply, keep exponents 5n+4, then q^5 -> q,
/// X -> x, Y -> y.
inline XYLaurentPoly derive_b5n4_xy()
{
    XYLaurentPoly h1, h2;
    for (const auto& t : hirschhorn_vector()) {
        h1 += xy_monomial(-t.r_exponent, 0, q_power(t.q_power, t.coefficient));
        h2 += xy_monomial(0, -t.r_exponent, q_power(2 * t.q_power, t.coefficient));
    }
    const XYLaurentPoly full = h1 * h1 * h2 * h2;
    XYLaurentPoly part;
    for (const auto& [e, c] : full.terms()) {
        std::vector<Coefficient> kept;
        for (int k = 4; k <= c.degree(); k += 5) {
            kept.resize(static_cast<std::size_t>((k - 4) / 5) + 1);
            kept.back() = c[k];
        }
        part.add_term(e, QPolynomial(std::move(kept)));
    }
    return part;
}

/// Regroups an xy-Laurent polynomial into P(alpha, beta) pairs.
/// Throws derivation_error if some monomial has no admissible partner.
inline PBasisCombination regroup_into_P(const XYLaurentPoly& p)
{
    PBasisCombination out;
    for (const auto& [e, c] : p.terms()) {
        const int a = e[0], b = e[1];
        if (a == 0 && b == 0) {
            out.constant += c;
            continue;
        }
        if ((a + 2 * b) % 5 != 0 || (2 * a - b) % 5 != 0) {
            throw derivation_error("monomial x^" + std::to_string(a) + " y^" + std::to_string(b)
                                   + " is not of the form x^{alpha+2beta} y^{2alpha-beta}");
        }
        const int alpha = (a + 2 * b) / 5;
        const int beta = (2 * a - b) / 5;
        if (alpha < 0 || (alpha == 0 && beta < 0)) {
            continue; // conjugate half of a pair
        }
        for (int k = 0; k <= c.degree(); ++k) {
            if (sgn(c[k]) != 0) {
                out.terms.push_back({c[k], k, alpha, beta});
            }
        }
    }
    out.sort();
    if (out.to_xy() != p) {
        throw derivation_error("conjugate monomials do not carry the P(alpha, beta) sign and q-power pattern");
    }
    return out;
}

inline PBasisCombination derive_b5n4_combination() { return regroup_into_P(derive_b5n4_xy()); }

/// The regrouped P-form of sum b(5n+4) q^n as printed.
inline PBasisCombination printed_b5n4_combination()
{
    PBasisCombination c;
    auto add = [&c](long coeff, int k, int alpha, int beta) { c.terms.push_back({Coefficient(coeff), k, alpha, beta}); };
    add(5, 0, 4, 2), add(10, 0, 4, 1), add(20, 0, 4, 0);
    add(40, 1, 3, 2), add(100, 1, 3, 1), add(80, 1, 3, 0), add(40, 1, 3, -1), add(-20, 1, 3, -2);
    add(20, 2, 2, 3), add(135, 2, 2, 2), add(320, 2, 2, 1), add(540, 2, 2, 0), add(150, 2, 2, -1),
        add(135, 2, 2, -2), add(40, 2, 2, -3), add(5, 2, 2, -4);
    add(-40, 3, 1, 3), add(150, 3, 1, 2), add(320, 3, 1, 1), add(540, 3, 1, 0), add(-320, 3, 1, -1),
        add(-320, 3, 1, -2), add(-100, 3, 1, -3), add(-10, 3, 1, -4);
    add(20, 4, 0, 4), add(-80, 4, 0, 3), add(540, 4, 0, 2), add(-540, 4, 0, 1);
    c.constant = q_power(4, 225);
    c.sort();
    return c;
}

struct PrintedPair {
    long coefficient;
    int q_power;
    // (x-exp, y-exp, sign, extra q-power) for the two bracketed monomials.
    std::array<std::tuple<int, int, int, int>, 2> monomials;
};

/// The 29-term expanded xy display exactly as printed, including its
/// misprints: a y^{-1} that should be y^{-2}, 801 where 80 belongs, and a
/// minus sign inside the 100q (x^5 y^5 ...) pair.
inline std::vector<PrintedPair> printed_b5n4_display()
{
    return {
        {5, 0, {{{8, 6, 1, 0}, {-8, -6, 1, 8}}}},
        {10, 0, {{{6, 7, 1, 0}, {-6, -7, -1, 8}}}},
        {20, 0, {{{4, 8, 1, 0}, {-4, -8, 1, 8}}}},
        {40, 1, {{{7, 4, 1, 0}, {-7, -4, -1, 6}}}},
        {100, 1, {{{5, 5, 1, 0}, {-5, -5, -1, 6}}}},
        {80, 1, {{{3, 6, 1, 0}, {-3, -6, -1, 6}}}},
        {40, 1, {{{1, 7, 1, 0}, {-1, -7, 1, 6}}}},
        {20, 1, {{{-1, 8, -1, 0}, {1, -8, 1, 6}}}},
        {20, 2, {{{8, 1, 1, 0}, {-8, -1, -1, 4}}}},
        {135, 2, {{{6, 2, 1, 0}, {-6, -1, 1, 4}}}},
        {320, 2, {{{4, 3, 1, 0}, {-4, -3, -1, 4}}}},
        {540, 2, {{{2, 4, 1, 0}, {-2, -4, 1, 4}}}},
        {150, 2, {{{0, 5, 1, 0}, {0, -5, -1, 4}}}},
        {135, 2, {{{-2, 6, 1, 0}, {2, -6, 1, 4}}}},
        {40, 2, {{{-4, 7, 1, 0}, {4, -7, -1, 4}}}},
        {5, 2, {{{-6, 8, 1, 0}, {6, -8, 1, 4}}}},
        {-40, 3, {{{7, -1, 1, 0}, {-7, 1, 1, 2}}}},
        {150, 3, {{{5, 0, 1, 0}, {-5, 0, -1, 2}}}},
        {320, 3, {{{3, 1, 1, 0}, {-3, -1, 1, 2}}}},
        {540, 3, {{{1, 2, 1, 0}, {-1, -2, -1, 2}}}},
        {-320, 3, {{{-1, 3, 1, 0}, {1, -3, 1, 2}}}},
        {320, 3, {{{-3, 4, -1, 0}, {3, -4, 1, 2}}}},
        {-100, 3, {{{-5, 5, 1, 0}, {5, -5, 1, 2}}}},
        {10, 3, {{{-7, 6, -1, 0}, {7, -6, 1, 2}}}},
        {20, 4, {{{-8, 4, 1, 0}, {8, -4, 1, 0}}}},
        {801, 4, {{{6, -3, -1, 0}, {-6, 3, 1, 0}}}},
        {540, 4, {{{-4, 2, 1, 0}, {4, -2, 1, 0}}}},
        {540, 4, {{{2, -1, -1, 0}, {-2, 1, 1, 0}}}},
        {225, 4, {{{0, 0, 1, 0}, {0, 0, 0, 0}}}},
    };
}

inline XYLaurentPoly printed_display_xy()
{
    XYLaurentPoly out;
    for (const auto& pair : printed_b5n4_display()) {
        for (const auto& [a, b, sign, extra] : pair.monomials) {
            if (sign != 0) {
                out += xy_monomial(a, b, q_power(pair.q_power + extra, pair.coefficient * sign));
            }
        }
    }
    return out;
}

struct DisplayDiscrepancy {
    std::array<int, 2> exponent;
    QPolynomial printed;
    QPolynomial derived;
};

/// Monomials where the printed expansion disagrees with the derivation.
inline std::vector<DisplayDiscrepancy> audit_printed_display(const XYLaurentPoly& derived)
{
    const XYLaurentPoly printed = printed_display_xy();
    std::vector<DisplayDiscrepancy> out;
    std::map<std::array<int, 2>, int> keys;
    for (const auto& [e, c] : printed.terms()) {
        keys[e] = 0;
    }
    for (const auto& [e, c] : derived.terms()) {
        keys[e] = 0;
    }
    for (const auto& [e, unused] : keys) {
        QPolynomial p = printed.coefficient(e), d = derived.coefficient(e);
        if (p != d) {
            out.push_back({e, p, d});
        }
    }
    return out;
}

/// sum_i c_i q^i K^{4-i} for i = 0..8.
inline KLaurentPoly nine_term_K_form(std::span<const long, 9> coefficients)
{
    KLaurentPoly out;
    for (int i = 0; i < 9; ++i) {
        out += K_power(4 - i, q_power(i, coefficients[static_cast<std::size_t>(i)]));
    }
    return out;
}

inline constexpr std::array<long, 9> printed_b5n4_K_coefficients{35,    280,    1905,   1760, 13825,
                                                                  -7040, 30480, -17920, 8960};

inline constexpr std::array<long, 5> b5n4_u_coefficients{35, 700, 6875, 31250, 78125};

/// u = K - 3q - 4q^2/K, which equals E1^2 E2^2 / (E5^2 E10^2).
inline KLaurentPoly u_poly() { return K_power(1) + K_power(0, q_power(1, -3)) + K_power(-1, q_power(2, -4)); }

/// sum_i c_i q^i u^{4-i}.
inline KLaurentPoly u_form(std::span<const long, 5> coefficients)
{
    KLaurentPoly out;
    const KLaurentPoly u = u_poly();
    for (int i = 0; i < 5; ++i) {
        out += q_power(i, coefficients[static_cast<std::size_t>(i)]) * u.pow(static_cast<unsigned>(4 - i));
    }
    return out;
}

/// The combination pushed through the P -> K reduction.
inline KLaurentPoly b5n4_K_form() { return derive_b5n4_combination().to_K(); }

/// Prefactor E5^10 E10^10 / (E1^12 E2^12) multiplying the P-combination.
inline EtaQuotientSpec b5n4_prefactor() { return EtaQuotientSpec({{5, 10}, {10, 10}, {1, -12}, {2, -12}}); }

} // namespace qdissect
