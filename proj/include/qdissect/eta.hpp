#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "dissection.hpp"
#include "series.hpp"

namespace qdissect
{

// ---------------------------------------------------------------------------
// Euler products E_j = (q^j; q^j)_inf

/// E_j as the direct product of the floor((order-1)/j) binomials (1 - q^{jn}).
inline TruncatedSeries euler_product_naive(int j, int order)
{
    if (j < 1) {
        throw domain_error("Euler product subscript must be >= 1");
    }
    std::vector<Coefficient> c(static_cast<std::size_t>(std::max(order, 1)));
    c[0] = 1;
    for (int step = j; step < order; step += j) {
        for (int i = order - 1; i >= step; --i) {
            c[static_cast<std::size_t>(i)] -= c[static_cast<std::size_t>(i - step)];
        }
    }
    return TruncatedSeries(std::move(c), order);
}

/// E_j from the pentagonal number theorem,
/// sum_k (-1)^k q^{j k(3k-1)/2} over all integers k.
inline TruncatedSeries euler_product_pentagonal(int j, int order)
{
    if (j < 1) {
        throw domain_error("Euler product subscript must be >= 1");
    }
    std::vector<Coefficient> c(static_cast<std::size_t>(std::max(order, 1)));
    c[0] = 1;
    for (long k = 1;; ++k) {
        const long lo = static_cast<long>(j) * k * (3 * k - 1) / 2;
        const long hi = static_cast<long>(j) * k * (3 * k + 1) / 2;
        if (lo >= order) {
            break;
        }
        const int sign = (k % 2 == 0) ? 1 : -1;
        c[static_cast<std::size_t>(lo)] = sign;
        if (hi < order) {
            c[static_cast<std::size_t>(hi)] = sign;
        }
    }
    return TruncatedSeries(std::move(c), order);
}

inline TruncatedSeries euler_product(int j, int order) { return euler_product_pentagonal(j, order); }

// ---------------------------------------------------------------------------
// Pochhammer products (q^a; q^b)_inf

struct PochhammerSpec {
    int a;
    int b;

    PochhammerSpec(int a_, int b_) : a(a_), b(b_)
    {
        if (a < 1 || b < 1 || a > b) {
            throw domain_error("Pochhammer spec needs 1 <= a <= b");
        }
    }
};

inline TruncatedSeries pochhammer(const PochhammerSpec& spec, int order)
{
    std::vector<Coefficient> c(static_cast<std::size_t>(std::max(order, 1)));
    c[0] = 1;
    for (int step = spec.a; step < order; step += spec.b) {
        for (int i = order - 1; i >= step; --i) {
            c[static_cast<std::size_t>(i)] -= c[static_cast<std::size_t>(i - step)];
        }
    }
    return TruncatedSeries(std::move(c), order);
}

// ---------------------------------------------------------------------------
// Eta quotients q^t * prod E_j^{e_j}

struct EtaFactor {
    int subscript;
    int exponent;

    friend bool operator==(const EtaFactor&, const EtaFactor&) = default;
};

/// A formal eta quotient. Factors are kept sorted by subscript with
/// duplicates merged and zero exponents dropped.
class EtaQuotientSpec
{
public:
    EtaQuotientSpec() = default;

    explicit EtaQuotientSpec(const std::vector<EtaFactor>& factors, int q_shift = 0) : q_shift_(q_shift)
    {
        if (q_shift < 0) {
            throw domain_error("negative q-shift in eta quotient");
        }
        std::map<int, long> merged;
        for (const auto& f : factors) {
            if (f.subscript < 1) {
                throw domain_error("eta subscript must be >= 1, got " + std::to_string(f.subscript));
            }
            merged[f.subscript] += f.exponent;
        }
        for (const auto& [j, e] : merged) {
            if (e != 0) {
                factors_.push_back({j, static_cast<int>(e)});
            }
        }
    }

    const std::vector<EtaFactor>& factors() const noexcept { return factors_; }
    int q_shift() const noexcept { return q_shift_; }
    bool is_identity() const noexcept { return factors_.empty() && q_shift_ == 0; }

    int exponent_of(int subscript) const noexcept
    {
        for (const auto& f : factors_) {
            if (f.subscript == subscript) {
                return f.exponent;
            }
        }
        return 0;
    }

    friend EtaQuotientSpec operator*(const EtaQuotientSpec& a, const EtaQuotientSpec& b)
    {
        std::vector<EtaFactor> all = a.factors_;
        all.insert(all.end(), b.factors_.begin(), b.factors_.end());
        return EtaQuotientSpec(all, a.q_shift_ + b.q_shift_);
    }

    friend EtaQuotientSpec operator/(const EtaQuotientSpec& a, const EtaQuotientSpec& b)
    {
        std::vector<EtaFactor> all = a.factors_;
        for (const auto& f : b.factors_) {
            all.push_back({f.subscript, -f.exponent});
        }
        return EtaQuotientSpec(all, a.q_shift_ - b.q_shift_);
    }

    // Renders in the expression grammar accepted by parse_eta_expression.
    std::string to_string() const
    {
        std::string num, den;
        int den_count = 0;
        auto append = [](std::string& s, const std::string& piece) {
            if (!s.empty()) {
                s += '*';
            }
            s += piece;
        };
        if (q_shift_ > 0) {
            append(num, q_shift_ == 1 ? "q" : "q^" + std::to_string(q_shift_));
        }
        for (const auto& f : factors_) {
            const int e = f.exponent > 0 ? f.exponent : -f.exponent;
            const std::string piece = "E" + std::to_string(f.subscript) + (e == 1 ? "" : "^" + std::to_string(e));
            if (f.exponent > 0) {
                append(num, piece);
            } else {
                append(den, piece);
                ++den_count;
            }
        }
        if (num.empty()) {
            num = "E1^0";
        }
        if (den.empty()) {
            return num;
        }
        return num + "/" + (den_count > 1 ? "(" + den + ")" : den);
    }

    friend bool operator==(const EtaQuotientSpec&, const EtaQuotientSpec&) = default;

private:
    std::vector<EtaFactor> factors_;
    int q_shift_ = 0;
};

inline TruncatedSeries eta_quotient(const EtaQuotientSpec& spec, int order)
{
    if (order < 1) {
        throw invalid_order_error("truncation order must be >= 1");
    }
    const int t = spec.q_shift();
    if (t >= order) {
        return TruncatedSeries::zero(order);
    }
    const int inner = order - t;
    TruncatedSeries acc = TruncatedSeries::one(inner);
    for (const auto& f : spec.factors()) {
        const TruncatedSeries e = euler_product(f.subscript, inner);
        if (f.exponent > 0) {
            for (int i = 0; i < f.exponent; ++i) {
                acc = mul(acc, e);
            }
        }
    }
    for (const auto& f : spec.factors()) {
        if (f.exponent < 0) {
            const TruncatedSeries e = euler_product(f.subscript, inner);
            for (int i = 0; i < -f.exponent; ++i) {
                acc = divide(acc, e);
            }
        }
    }
    return acc.times_q_power(t);
}

// ---------------------------------------------------------------------------
// Memoized building blocks

namespace detail
{

// Keeps the deepest expansion computed so far for each key; shorter requests
// are served by truncation. Concurrent readers, serialized writers.
class SeriesMemo
{
public:
    TruncatedSeries get(const std::string& key, int order, const std::function<TruncatedSeries(int)>& compute)
    {
        {
            std::shared_lock lock(mutex_);
            auto it = table_.find(key);
            if (it != table_.end() && it->second.order() >= order) {
                return it->second.truncated(order);
            }
        }
        TruncatedSeries fresh = compute(order);
        std::unique_lock lock(mutex_);
        auto it = table_.find(key);
        if (it == table_.end()) {
            table_.emplace(key, fresh);
        } else if (it->second.order() < fresh.order()) {
            it->second = fresh;
        }
        return fresh;
    }

    static SeriesMemo& instance()
    {
        static SeriesMemo memo;
        return memo;
    }

private:
    std::shared_mutex mutex_;
    std::map<std::string, TruncatedSeries> table_;
};

} // namespace detail

/// R(q) = (q;q^5)(q^4;q^5) / ((q^2;q^5)(q^3;q^5)).
inline TruncatedSeries rogers_ramanujan_R(int order)
{
    return detail::SeriesMemo::instance().get("R", order, [](int n) {
        TruncatedSeries num = mul(pochhammer({1, 5}, n), pochhammer({4, 5}, n));
        return divide(divide(num, pochhammer({2, 5}, n)), pochhammer({3, 5}, n));
    });
}

/// x = 1/R(q).
inline TruncatedSeries x_series(int order)
{
    return detail::SeriesMemo::instance().get("x", order, [](int n) {
        TruncatedSeries den = mul(pochhammer({1, 5}, n), pochhammer({4, 5}, n));
        return divide(mul(pochhammer({2, 5}, n), pochhammer({3, 5}, n)), den);
    });
}

/// y = 1/R(q^2).
inline TruncatedSeries y_series(int order)
{
    return detail::SeriesMemo::instance().get(
        "y", order, [](int n) { return substitute_power(x_series((n + 1) / 2), 2, n); });
}

inline EtaQuotientSpec K_spec() { return EtaQuotientSpec({{2, 1}, {5, 5}, {1, -1}, {10, -5}}); }

/// K = E2 E5^5 / (E1 E10^5).
inline TruncatedSeries K_series(int order)
{
    return detail::SeriesMemo::instance().get("K", order, [](int n) { return eta_quotient(K_spec(), n); });
}

// ---------------------------------------------------------------------------
// Theta functions and named generating functions

/// psi(q) = sum_{n>=0} q^{n(n+1)/2}, built from the triangular numbers.
inline TruncatedSeries psi_series(int order)
{
    std::vector<Coefficient> c(static_cast<std::size_t>(std::max(order, 1)));
    for (long n = 0; n * (n + 1) / 2 < order; ++n) {
        c[static_cast<std::size_t>(n * (n + 1) / 2)] = 1;
    }
    return TruncatedSeries(std::move(c), order);
}

/// psi(q) as the eta quotient E2^2 / E1.
inline TruncatedSeries psi_quotient(int order) { return eta_quotient(EtaQuotientSpec({{2, 2}, {1, -1}}), order); }

/// E2 E_{2k+1} / (E1^3 E_{2(2k+1)}), the broken k-diamond generating function.
inline EtaQuotientSpec broken_diamond_spec(int k)
{
    if (k < 1) {
        throw domain_error("broken diamond parameter k must be >= 1");
    }
    const int m = 2 * k + 1;
    return EtaQuotientSpec({{2, 1}, {m, 1}, {1, -3}, {2 * m, -1}});
}

inline TruncatedSeries broken_diamond_gf(int k, int order) { return eta_quotient(broken_diamond_spec(k), order); }

} // namespace qdissect
