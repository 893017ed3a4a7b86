#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "series.hpp"

namespace qdissect
{

/// Dense polynomial in q over the integers; trailing zeros are trimmed.
class QPolynomial
{
public:
    QPolynomial() = default;
    QPolynomial(long c) : QPolynomial(Coefficient(c)) {}
    QPolynomial(const Coefficient& c) : coeffs_{c} { normalize(); }
    explicit QPolynomial(std::vector<Coefficient> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

    static QPolynomial monomial(const Coefficient& c, int degree)
    {
        std::vector<Coefficient> v(static_cast<std::size_t>(degree) + 1);
        v.back() = c;
        return QPolynomial(std::move(v));
    }

    bool is_zero() const noexcept { return coeffs_.empty(); }
    // -1 for the zero polynomial.
    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<Coefficient>& coeffs() const noexcept { return coeffs_; }

    Coefficient operator[](int k) const
    {
        return (k >= 0 && k < static_cast<int>(coeffs_.size())) ? coeffs_[static_cast<std::size_t>(k)]
                                                                 : Coefficient(0);
    }

    QPolynomial& operator+=(const QPolynomial& o)
    {
        if (o.coeffs_.size() > coeffs_.size()) {
            coeffs_.resize(o.coeffs_.size());
        }
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) {
            coeffs_[i] += o.coeffs_[i];
        }
        normalize();
        return *this;
    }

    QPolynomial& operator-=(const QPolynomial& o)
    {
        if (o.coeffs_.size() > coeffs_.size()) {
            coeffs_.resize(o.coeffs_.size());
        }
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) {
            coeffs_[i] -= o.coeffs_[i];
        }
        normalize();
        return *this;
    }

    friend QPolynomial operator+(QPolynomial a, const QPolynomial& b) { return a += b; }
    friend QPolynomial operator-(QPolynomial a, const QPolynomial& b) { return a -= b; }
    friend QPolynomial operator-(QPolynomial a)
    {
        for (auto& c : a.coeffs_) {
            c = -c;
        }
        return a;
    }

    friend QPolynomial operator*(const QPolynomial& a, const QPolynomial& b)
    {
        if (a.is_zero() || b.is_zero()) {
            return {};
        }
        const std::size_t n = a.coeffs_.size() + b.coeffs_.size() - 1;
        return QPolynomial(kernels::schoolbook(a.coeffs_, b.coeffs_, n));
    }

    // p(q) -> p(q^m)
    QPolynomial substitute_power(int m) const
    {
        if (is_zero()) {
            return {};
        }
        std::vector<Coefficient> v(static_cast<std::size_t>(degree() * m) + 1);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            v[i * static_cast<std::size_t>(m)] = coeffs_[i];
        }
        return QPolynomial(std::move(v));
    }

    TruncatedSeries to_series(int order) const
    {
        std::vector<Coefficient> v(coeffs_.begin(),
                                   coeffs_.begin() + std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(coeffs_.size()), order));
        return TruncatedSeries(std::move(v), order);
    }

    std::string to_string() const
    {
        if (is_zero()) {
            return "0";
        }
        std::ostringstream os;
        bool first = true;
        for (int k = degree(); k >= 0; --k) {
            const Coefficient& c = coeffs_[static_cast<std::size_t>(k)];
            if (sgn(c) == 0) {
                continue;
            }
            Coefficient mag = abs(c);
            os << (sgn(c) < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
            if (mag != 1 || k == 0) {
                os << mag;
                if (k > 0) {
                    os << '*';
                }
            }
            if (k == 1) {
                os << 'q';
            } else if (k > 1) {
                os << "q^" << k;
            }
            first = false;
        }
        return os.str();
    }

    friend bool operator==(const QPolynomial&, const QPolynomial&) = default;

private:
    void normalize()
    {
        while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) {
            coeffs_.pop_back();
        }
    }

    std::vector<Coefficient> coeffs_;
};

/// Sparse Laurent polynomial in `Vars` variables with coefficients in Z[q].
/// Exponent tuples are kept in lexicographic order; zero coefficients are
/// never stored.
template <std::size_t Vars>
class LaurentPoly
{
public:
    using Exponent = std::array<int, Vars>;

    LaurentPoly() = default;
    LaurentPoly(const QPolynomial& constant) { add_term(Exponent{}, constant); }
    LaurentPoly(long constant) : LaurentPoly(QPolynomial(constant)) {}

    static LaurentPoly monomial(const Exponent& e, const QPolynomial& c = QPolynomial(1))
    {
        LaurentPoly p;
        p.add_term(e, c);
        return p;
    }

    void add_term(const Exponent& e, const QPolynomial& c)
    {
        if (c.is_zero()) {
            return;
        }
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) {
                terms_.erase(it);
            }
        }
    }

    const std::map<Exponent, QPolynomial>& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }

    QPolynomial coefficient(const Exponent& e) const
    {
        auto it = terms_.find(e);
        return it == terms_.end() ? QPolynomial() : it->second;
    }

    LaurentPoly& operator+=(const LaurentPoly& o)
    {
        for (const auto& [e, c] : o.terms_) {
            add_term(e, c);
        }
        return *this;
    }

    LaurentPoly& operator-=(const LaurentPoly& o)
    {
        for (const auto& [e, c] : o.terms_) {
            add_term(e, -c);
        }
        return *this;
    }

    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator-(const LaurentPoly& a) { return LaurentPoly() - a; }

    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b)
    {
        LaurentPoly out;
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                Exponent e;
                for (std::size_t i = 0; i < Vars; ++i) {
                    e[i] = ea[i] + eb[i];
                }
                out.add_term(e, ca * cb);
            }
        }
        return out;
    }

    friend LaurentPoly operator*(const QPolynomial& k, const LaurentPoly& a)
    {
        LaurentPoly out;
        for (const auto& [e, c] : a.terms_) {
            out.add_term(e, k * c);
        }
        return out;
    }

    LaurentPoly pow(unsigned k) const
    {
        LaurentPoly result(1);
        for (unsigned i = 0; i < k; ++i) {
            result = result * *this;
        }
        return result;
    }

    std::string to_string(const std::array<const char*, Vars>& names) const
    {
        if (is_zero()) {
            return "0";
        }
        std::ostringstream os;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            os << (first ? "" : " + ") << '(' << it->second.to_string() << ')';
            for (std::size_t i = 0; i < Vars; ++i) {
                if (it->first[i] != 0) {
                    os << '*' << names[i] << '^' << it->first[i];
                }
            }
            first = false;
        }
        return os.str();
    }

    friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

private:
    std::map<Exponent, QPolynomial> terms_;
};

/// Laurent polynomial in K over Z[q].
using KLaurentPoly = LaurentPoly<1>;
/// Laurent polynomial in x, y over Z[q].
using XYLaurentPoly = LaurentPoly<2>;

inline QPolynomial q_power(int k, long c = 1) { return QPolynomial::monomial(Coefficient(c), k); }

inline KLaurentPoly K_power(int e, const QPolynomial& c = QPolynomial(1)) { return KLaurentPoly::monomial({e}, c); }

inline XYLaurentPoly xy_monomial(int a, int b, const QPolynomial& c = QPolynomial(1))
{
    return XYLaurentPoly::monomial({a, b}, c);
}

} // namespace qdissect
