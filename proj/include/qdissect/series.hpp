#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "error.hpp"

namespace qdissect
{

using Coefficient = mpz_class;

/// A q-expansion known exactly through q^(order-1).
///
/// Coefficients at exponents >= order are unknown rather than zero, so every
/// binary operation yields a result of order min(lhs.order(), rhs.order()).
/// Values are immutable once built.
class TruncatedSeries
{
public:
    TruncatedSeries(std::vector<Coefficient> coeffs, int order) : coeffs_(std::move(coeffs)), order_(order)
    {
        if (order < 1) {
            throw invalid_order_error("truncation order must be >= 1, got " + std::to_string(order));
        }
        if (coeffs_.size() > static_cast<std::size_t>(order)) {
            throw invalid_order_error("more coefficients (" + std::to_string(coeffs_.size()) + ") than order "
                                      + std::to_string(order));
        }
        coeffs_.resize(static_cast<std::size_t>(order));
    }

    static TruncatedSeries zero(int order) { return TruncatedSeries({}, order); }
    static TruncatedSeries one(int order) { return TruncatedSeries({Coefficient(1)}, order); }

    // c * q^exponent; exponents at or past the order are dropped.
    static TruncatedSeries monomial(int exponent, const Coefficient& c, int order)
    {
        TruncatedSeries s = zero(order);
        if (exponent < 0) {
            throw domain_error("negative exponent in monomial");
        }
        if (exponent < order) {
            s.coeffs_[static_cast<std::size_t>(exponent)] = c;
        }
        return s;
    }

    int order() const noexcept { return order_; }
    std::span<const Coefficient> coeffs() const noexcept { return coeffs_; }

    const Coefficient& operator[](int n) const
    {
        if (n < 0 || n >= order_) {
            throw out_of_order_error("coefficient of q^" + std::to_string(n) + " requested from a series of order "
                                     + std::to_string(order_));
        }
        return coeffs_[static_cast<std::size_t>(n)];
    }

    bool is_zero() const
    {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Coefficient& c) { return sgn(c) == 0; });
    }

    TruncatedSeries truncated(int new_order) const
    {
        if (new_order > order_) {
            throw out_of_order_error("cannot extend order " + std::to_string(order_) + " to "
                                     + std::to_string(new_order));
        }
        return TruncatedSeries({coeffs_.begin(), coeffs_.begin() + std::max(new_order, 0)}, new_order);
    }

    // q^t * s. The product is known through exponent order + t - 1.
    TruncatedSeries times_q_power(int t) const
    {
        if (t < 0) {
            throw domain_error("negative q-shift");
        }
        std::vector<Coefficient> out(static_cast<std::size_t>(order_ + t));
        std::copy(coeffs_.begin(), coeffs_.end(), out.begin() + t);
        return TruncatedSeries(std::move(out), order_ + t);
    }

    friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) = default;

private:
    std::vector<Coefficient> coeffs_;
    int order_ = 1;
};

inline TruncatedSeries make_series(std::vector<Coefficient> coeffs, int order)
{
    return TruncatedSeries(std::move(coeffs), order);
}

inline TruncatedSeries make_series(std::initializer_list<long> coeffs, int order)
{
    std::vector<Coefficient> v;
    v.reserve(coeffs.size());
    for (long c : coeffs) {
        v.emplace_back(c);
    }
    return TruncatedSeries(std::move(v), order);
}

inline const Coefficient& coeff(const TruncatedSeries& s, int n) { return s[n]; }

inline std::ostream& operator<<(std::ostream& os, const TruncatedSeries& s)
{
    bool first = true;
    for (int n = 0; n < s.order(); ++n) {
        const Coefficient& c = s[n];
        if (sgn(c) == 0) {
            continue;
        }
        os << (first ? "" : " + ") << c;
        if (n > 0) {
            os << "*q^" << n;
        }
        first = false;
    }
    if (first) {
        os << '0';
    }
    return os << " + O(q^" << s.order() << ')';
}

// ---------------------------------------------------------------------------
// Additive structure

namespace detail
{

template <typename Op>
TruncatedSeries zip(const TruncatedSeries& a, const TruncatedSeries& b, Op op)
{
    const int n = std::min(a.order(), b.order());
    std::vector<Coefficient> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = op(a[i], b[i]);
    }
    return TruncatedSeries(std::move(out), n);
}

inline std::vector<std::size_t> nonzero_indices(std::span<const Coefficient> v)
{
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (sgn(v[i]) != 0) {
            idx.push_back(i);
        }
    }
    return idx;
}

} // namespace detail

inline TruncatedSeries add(const TruncatedSeries& a, const TruncatedSeries& b)
{
    return detail::zip(a, b, [](const Coefficient& x, const Coefficient& y) { return Coefficient(x + y); });
}

inline TruncatedSeries sub(const TruncatedSeries& a, const TruncatedSeries& b)
{
    return detail::zip(a, b, [](const Coefficient& x, const Coefficient& y) { return Coefficient(x - y); });
}

inline TruncatedSeries negate(const TruncatedSeries& a)
{
    std::vector<Coefficient> out(a.coeffs().begin(), a.coeffs().end());
    for (auto& c : out) {
        c = -c;
    }
    return TruncatedSeries(std::move(out), a.order());
}

inline TruncatedSeries scale(const TruncatedSeries& a, const Coefficient& k)
{
    std::vector<Coefficient> out(a.coeffs().begin(), a.coeffs().end());
    for (auto& c : out) {
        c *= k;
    }
    return TruncatedSeries(std::move(out), a.order());
}

// ---------------------------------------------------------------------------
// Multiplication kernels

enum class MulStrategy { automatic, schoolbook, karatsuba };

struct MulOptions {
    MulStrategy strategy = MulStrategy::automatic;
    // Operand length below which karatsuba falls back to schoolbook.
    std::size_t karatsuba_threshold = 32;
    // automatic picks schoolbook when either operand has at most this
    // fraction of nonzero coefficients (eta products are very sparse).
    double sparse_fraction = 0.25;
};

namespace kernels
{

// out[0..n) += (a * b)[0..n), skipping zero coefficients.
inline void schoolbook_accumulate(std::span<const Coefficient> a, std::span<const Coefficient> b,
                                  std::span<Coefficient> out)
{
    const std::size_t n = out.size();
    const auto bnz = detail::nonzero_indices(b);
    for (std::size_t i = 0; i < a.size() && i < n; ++i) {
        if (sgn(a[i]) == 0) {
            continue;
        }
        for (std::size_t j : bnz) {
            if (i + j >= n) {
                break;
            }
            mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
        }
    }
}

inline std::vector<Coefficient> schoolbook(std::span<const Coefficient> a, std::span<const Coefficient> b,
                                           std::size_t n)
{
    std::vector<Coefficient> out(n);
    schoolbook_accumulate(a, b, out);
    return out;
}

namespace detail
{

// out[0 .. 2len-1) += a * b for equal-length operands.
inline void karatsuba_rec(std::span<const Coefficient> a, std::span<const Coefficient> b, std::span<Coefficient> out,
                          std::size_t threshold)
{
    const std::size_t len = a.size();
    if (len <= threshold || len < 2) {
        schoolbook_accumulate(a, b, out.first(2 * len - 1));
        return;
    }
    const std::size_t lo = len / 2;
    const std::size_t hi = len - lo;
    auto a0 = a.first(lo), a1 = a.subspan(lo);
    auto b0 = b.first(lo), b1 = b.subspan(lo);

    std::vector<Coefficient> z0(2 * lo - 1), z2(2 * hi - 1), z1(2 * hi - 1);
    karatsuba_rec(a0, b0, z0, threshold);
    karatsuba_rec(a1, b1, z2, threshold);

    std::vector<Coefficient> as(a1.begin(), a1.end()), bs(b1.begin(), b1.end());
    for (std::size_t i = 0; i < lo; ++i) {
        as[i] += a0[i];
        bs[i] += b0[i];
    }
    karatsuba_rec(as, bs, z1, threshold);
    for (std::size_t i = 0; i < z0.size(); ++i) {
        z1[i] -= z0[i];
    }
    for (std::size_t i = 0; i < z2.size(); ++i) {
        z1[i] -= z2[i];
    }

    for (std::size_t i = 0; i < z0.size(); ++i) {
        out[i] += z0[i];
    }
    for (std::size_t i = 0; i < z1.size(); ++i) {
        out[lo + i] += z1[i];
    }
    for (std::size_t i = 0; i < z2.size(); ++i) {
        out[2 * lo + i] += z2[i];
    }
}

} // namespace detail

// Truncated product via divide-and-conquer; bit-identical to schoolbook.
inline std::vector<Coefficient> karatsuba(std::span<const Coefficient> a, std::span<const Coefficient> b,
                                          std::size_t n, std::size_t threshold)
{
    const std::size_t len = std::min({a.size(), b.size(), n});
    std::vector<Coefficient> out(n);
    if (len == 0) {
        return out;
    }
    std::vector<Coefficient> full(2 * len - 1);
    detail::karatsuba_rec(a.first(len), b.first(len), full, std::max<std::size_t>(threshold, 1));
    // Terms a[i]*b[j] with i or j >= len never land below n when len == n,
    // but len < n happens only when an operand is shorter; pick those up.
    for (std::size_t i = 0; i < n && i < full.size(); ++i) {
        out[i] = std::move(full[i]);
    }
    if (a.size() > len && len < n) {
        schoolbook_accumulate(a.subspan(len), b, std::span<Coefficient>(out).subspan(len));
    }
    if (b.size() > len && len < n) {
        schoolbook_accumulate(b.subspan(len), a.first(len), std::span<Coefficient>(out).subspan(len));
    }
    return out;
}

} // namespace kernels

inline TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b, const MulOptions& options = {})
{
    const int n = std::min(a.order(), b.order());
    const auto ac = a.coeffs().first(static_cast<std::size_t>(n));
    const auto bc = b.coeffs().first(static_cast<std::size_t>(n));
    const auto sz = static_cast<std::size_t>(n);

    MulStrategy strategy = options.strategy;
    if (strategy == MulStrategy::automatic) {
        const auto limit = static_cast<std::size_t>(options.sparse_fraction * static_cast<double>(n));
        const bool sparse = detail::nonzero_indices(ac).size() <= limit || detail::nonzero_indices(bc).size() <= limit;
        strategy = (sparse || sz < options.karatsuba_threshold) ? MulStrategy::schoolbook : MulStrategy::karatsuba;
    }
    if (strategy == MulStrategy::karatsuba) {
        return TruncatedSeries(kernels::karatsuba(ac, bc, sz, options.karatsuba_threshold), n);
    }
    // Put the sparser operand on the inner loop.
    if (detail::nonzero_indices(ac).size() < detail::nonzero_indices(bc).size()) {
        return TruncatedSeries(kernels::schoolbook(bc, ac, sz), n);
    }
    return TruncatedSeries(kernels::schoolbook(ac, bc, sz), n);
}

inline TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) { return add(a, b); }
inline TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) { return sub(a, b); }
inline TruncatedSeries operator-(const TruncatedSeries& a) { return negate(a); }
inline TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) { return mul(a, b); }
inline TruncatedSeries operator*(const Coefficient& k, const TruncatedSeries& a) { return scale(a, k); }

// ---------------------------------------------------------------------------
// Division and powers

/// Exact quotient a / b to order min(a.order(), b.order()).
///
/// Requires b[0] = +-1. Runs the triangular recurrence over the nonzero
/// coefficients of b only, so dividing by a sparse product is cheap.
inline TruncatedSeries divide(const TruncatedSeries& a, const TruncatedSeries& b)
{
    const Coefficient& lead = b[0];
    if (lead != 1 && lead != -1) {
        throw not_invertible_error("constant term " + lead.get_str() + " is not a unit");
    }
    const int n = std::min(a.order(), b.order());
    const auto bnz = detail::nonzero_indices(b.coeffs().first(static_cast<std::size_t>(n)));
    std::vector<Coefficient> r(static_cast<std::size_t>(n));
    Coefficient acc;
    for (std::size_t m = 0; m < r.size(); ++m) {
        acc = a[static_cast<int>(m)];
        for (std::size_t k : bnz) {
            if (k == 0) {
                continue;
            }
            if (k > m) {
                break;
            }
            mpz_submul(acc.get_mpz_t(), b.coeffs()[k].get_mpz_t(), r[m - k].get_mpz_t());
        }
        r[m] = (lead == 1) ? acc : Coefficient(-acc);
    }
    return TruncatedSeries(std::move(r), n);
}

inline TruncatedSeries invert(const TruncatedSeries& a) { return divide(TruncatedSeries::one(a.order()), a); }

inline TruncatedSeries pow(const TruncatedSeries& a, int k, const MulOptions& options = {})
{
    if (k < 0) {
        return invert(pow(a, -k, options));
    }
    TruncatedSeries result = TruncatedSeries::one(a.order());
    TruncatedSeries base = a;
    for (unsigned e = static_cast<unsigned>(k); e != 0; e >>= 1) {
        if (e & 1u) {
            result = mul(result, base, options);
        }
        if (e > 1) {
            base = mul(base, base, options);
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Comparison

struct Mismatch {
    int exponent = 0;
    Coefficient lhs;
    Coefficient rhs;

    friend bool operator==(const Mismatch&, const Mismatch&) = default;
};

struct Comparison {
    bool equal = true;
    std::optional<Mismatch> mismatch;

    explicit operator bool() const noexcept { return equal; }
};

inline Comparison equal_to_order(const TruncatedSeries& a, const TruncatedSeries& b, int n)
{
    if (n > std::min(a.order(), b.order())) {
        throw out_of_order_error("comparison to order " + std::to_string(n) + " exceeds available order "
                                 + std::to_string(std::min(a.order(), b.order())));
    }
    for (int i = 0; i < n; ++i) {
        if (a[i] != b[i]) {
            return {false, Mismatch{i, a[i], b[i]}};
        }
    }
    return {};
}

inline Comparison equal_to_order(const TruncatedSeries& a, const TruncatedSeries& b)
{
    return equal_to_order(a, b, std::min(a.order(), b.order()));
}

// ---------------------------------------------------------------------------
// Residues

/// A series with every coefficient reduced into [0, modulus).
class ModularSeries
{
public:
    ModularSeries(std::vector<Coefficient> residues, Coefficient modulus, int order)
        : residues_(std::move(residues)), modulus_(std::move(modulus)), order_(order)
    {
        if (modulus_ < 2) {
            throw invalid_modulus_error("modulus must be >= 2, got " + modulus_.get_str());
        }
        if (order < 1) {
            throw invalid_order_error("truncation order must be >= 1");
        }
        residues_.resize(static_cast<std::size_t>(order));
        for (auto& r : residues_) {
            mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), modulus_.get_mpz_t());
        }
    }

    int order() const noexcept { return order_; }
    const Coefficient& modulus() const noexcept { return modulus_; }
    std::span<const Coefficient> residues() const noexcept { return residues_; }

    const Coefficient& operator[](int n) const
    {
        if (n < 0 || n >= order_) {
            throw out_of_order_error("residue of q^" + std::to_string(n) + " requested from order "
                                     + std::to_string(order_));
        }
        return residues_[static_cast<std::size_t>(n)];
    }

    bool is_zero() const
    {
        return std::all_of(residues_.begin(), residues_.end(), [](const Coefficient& c) { return sgn(c) == 0; });
    }

    friend bool operator==(const ModularSeries&, const ModularSeries&) = default;

private:
    std::vector<Coefficient> residues_;
    Coefficient modulus_;
    int order_;
};

inline ModularSeries reduce_mod(const TruncatedSeries& a, const Coefficient& m)
{
    if (m < 2) {
        throw invalid_modulus_error("modulus must be >= 2, got " + m.get_str());
    }
    return ModularSeries({a.coeffs().begin(), a.coeffs().end()}, m, a.order());
}

namespace detail
{

inline void require_same_modulus(const ModularSeries& a, const ModularSeries& b)
{
    if (a.modulus() != b.modulus()) {
        throw invalid_modulus_error("mixed moduli " + a.modulus().get_str() + " and " + b.modulus().get_str());
    }
}

} // namespace detail

inline ModularSeries add(const ModularSeries& a, const ModularSeries& b)
{
    detail::require_same_modulus(a, b);
    const int n = std::min(a.order(), b.order());
    std::vector<Coefficient> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = a[i] + b[i];
    }
    return ModularSeries(std::move(out), a.modulus(), n);
}

inline ModularSeries mul(const ModularSeries& a, const ModularSeries& b)
{
    detail::require_same_modulus(a, b);
    const auto n = static_cast<std::size_t>(std::min(a.order(), b.order()));
    return ModularSeries(kernels::schoolbook(a.residues().first(n), b.residues().first(n), n), a.modulus(),
                         static_cast<int>(n));
}

inline Comparison equal_to_order(const ModularSeries& a, const ModularSeries& b, int n)
{
    detail::require_same_modulus(a, b);
    if (n > std::min(a.order(), b.order())) {
        throw out_of_order_error("comparison to order " + std::to_string(n) + " exceeds available order");
    }
    for (int i = 0; i < n; ++i) {
        if (a[i] != b[i]) {
            return {false, Mismatch{i, a[i], b[i]}};
        }
    }
    return {};
}

// True iff a - b vanishes mod m through order n.
inline Comparison congruent_to_order(const TruncatedSeries& a, const TruncatedSeries& b, const Coefficient& m, int n)
{
    return equal_to_order(reduce_mod(a, m), reduce_mod(b, m), n);
}

} // namespace qdissect
