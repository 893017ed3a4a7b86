#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "series.hpp"

namespace qdissect
{

/// The arithmetic progression m*n + r, 0 <= r < m.
class ProgressionSpec
{
public:
    ProgressionSpec(int modulus, int residue) : modulus_(modulus), residue_(residue)
    {
        if (modulus < 2) {
            throw domain_error("progression modulus must be >= 2, got " + std::to_string(modulus));
        }
        if (residue < 0 || residue >= modulus) {
            throw domain_error("progression residue must lie in [0, " + std::to_string(modulus) + "), got "
                               + std::to_string(residue));
        }
    }

    int modulus() const noexcept { return modulus_; }
    int residue() const noexcept { return residue_; }

    // Number of progression terms among exponents 0 .. order-1.
    int terms_below(int order) const noexcept
    {
        return order <= residue_ ? 0 : (order - residue_ + modulus_ - 1) / modulus_;
    }

    std::string to_string() const { return std::to_string(modulus_) + "n+" + std::to_string(residue_); }

    friend bool operator==(const ProgressionSpec&, const ProgressionSpec&) = default;

private:
    int modulus_;
    int residue_;
};

/// sum_n s[m*n + r] q^n, of order ceil((s.order() - r) / m).
inline TruncatedSeries extract_progression(const TruncatedSeries& s, const ProgressionSpec& p)
{
    const int order = p.terms_below(s.order());
    if (order < 1) {
        throw out_of_order_error("series of order " + std::to_string(s.order()) + " has no coefficient in "
                                 + p.to_string());
    }
    std::vector<Coefficient> out(static_cast<std::size_t>(order));
    for (int n = 0; n < order; ++n) {
        out[static_cast<std::size_t>(n)] = s[p.modulus() * n + p.residue()];
    }
    return TruncatedSeries(std::move(out), order);
}

/// s(q^m). The result is known to order m * s.order(), optionally capped.
inline TruncatedSeries substitute_power(const TruncatedSeries& s, int m, std::optional<int> cap = std::nullopt)
{
    if (m < 1) {
        throw domain_error("substitution power must be >= 1");
    }
    int order = s.order() * m;
    if (cap) {
        if (*cap < 1) {
            throw invalid_order_error("substitution cap must be >= 1");
        }
        order = std::min(order, *cap);
    }
    std::vector<Coefficient> out(static_cast<std::size_t>(order));
    for (int n = 0; n < s.order() && m * n < order; ++n) {
        out[static_cast<std::size_t>(m * n)] = s[n];
    }
    return TruncatedSeries(std::move(out), order);
}

/// Residues r mod m carrying at least one nonzero coefficient, optionally
/// after reducing every coefficient modulo `modulus`.
inline std::set<int> supported_residues(const TruncatedSeries& s, int m,
                                        const std::optional<Coefficient>& modulus = std::nullopt)
{
    if (m < 2) {
        throw domain_error("dissection modulus must be >= 2");
    }
    if (modulus && *modulus < 2) {
        throw invalid_modulus_error("modulus must be >= 2");
    }
    std::set<int> out;
    Coefficient r;
    for (int n = 0; n < s.order(); ++n) {
        if (modulus) {
            mpz_fdiv_r(r.get_mpz_t(), s[n].get_mpz_t(), modulus->get_mpz_t());
        } else {
            r = s[n];
        }
        if (sgn(r) != 0) {
            out.insert(n % m);
        }
    }
    return out;
}

/// The m progression parts U_{m,r} s for r = 0 .. m-1.
inline std::vector<TruncatedSeries> full_dissection(const TruncatedSeries& s, int m)
{
    if (m < 2) {
        throw domain_error("dissection modulus must be >= 2");
    }
    if (s.order() < m) {
        throw out_of_order_error("order " + std::to_string(s.order()) + " leaves some of the " + std::to_string(m)
                                 + " parts empty");
    }
    std::vector<TruncatedSeries> parts;
    parts.reserve(static_cast<std::size_t>(m));
    for (int r = 0; r < m; ++r) {
        parts.push_back(extract_progression(s, ProgressionSpec(m, r)));
    }
    return parts;
}

/// sum_r q^r parts[r](q^m), truncated to `order`.
inline TruncatedSeries reassemble(const std::vector<TruncatedSeries>& parts, int order)
{
    const int m = static_cast<int>(parts.size());
    if (m < 2) {
        throw domain_error("need at least two parts");
    }
    TruncatedSeries out = TruncatedSeries::zero(order);
    for (int r = 0; r < m; ++r) {
        TruncatedSeries piece = substitute_power(parts[static_cast<std::size_t>(r)], m).times_q_power(r);
        if (piece.order() < order) {
            throw out_of_order_error("part " + std::to_string(r) + " too short to reassemble order "
                                     + std::to_string(order));
        }
        out = add(out, piece.truncated(order));
    }
    return out;
}

} // namespace qdissect
