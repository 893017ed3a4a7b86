#pragma once

#include <cctype>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>

#include "error.hpp"
#include "eta.hpp"

namespace qdissect
{

namespace detail
{

// Recursive-descent parser for
//
//   expr   := term { ("*" | "/") term } ;
//   term   := factor [ "^" int ] ;
//   factor := "E" uint | "q" | "(" expr ")" ;
//   int    := ["-"] uint ;
//
// Whitespace is ignored between tokens.
class EtaExpressionParser
{
public:
    explicit EtaExpressionParser(std::string_view text) : text_(text) {}

    EtaQuotientSpec parse()
    {
        Value v = expr();
        skip_space();
        if (pos_ != text_.size()) {
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        }
        if (v.shift < 0) {
            throw parse_error(last_q_, "net power of q is negative");
        }
        std::vector<EtaFactor> factors;
        for (const auto& [j, e] : v.factors) {
            if (e > max_exponent || e < -max_exponent) {
                throw parse_error(text_.size(), "exponent of E" + std::to_string(j) + " out of range");
            }
            factors.push_back({j, static_cast<int>(e)});
        }
        return EtaQuotientSpec(factors, static_cast<int>(v.shift));
    }

private:
    static constexpr long max_exponent = 1'000'000;

    struct Value {
        std::map<int, long> factors;
        long shift = 0;

        void combine(const Value& other, long sign)
        {
            for (const auto& [j, e] : other.factors) {
                factors[j] += sign * e;
            }
            shift += sign * other.shift;
        }

        void raise(long k)
        {
            for (auto& [j, e] : factors) {
                e *= k;
            }
            shift *= k;
        }
    };

    [[noreturn]] void fail(const std::string& message) const { throw parse_error(pos_, message); }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool peek(char c)
    {
        skip_space();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    long uint_literal(const char* what)
    {
        skip_space();
        const std::size_t start = pos_;
        long value = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            value = value * 10 + (text_[pos_] - '0');
            if (value > max_exponent) {
                throw parse_error(start, std::string(what) + " too large");
            }
            ++pos_;
        }
        if (pos_ == start) {
            fail(std::string("expected ") + what);
        }
        return value;
    }

    Value expr()
    {
        Value v = term();
        for (;;) {
            if (peek('*')) {
                ++pos_;
                v.combine(term(), 1);
            } else if (peek('/')) {
                ++pos_;
                v.combine(term(), -1);
            } else {
                return v;
            }
        }
    }

    Value term()
    {
        const bool is_q = peek('q');
        Value v = factor();
        if (peek('^')) {
            ++pos_;
            skip_space();
            const std::size_t exp_pos = pos_;
            long sign = 1;
            if (peek('-')) {
                ++pos_;
                sign = -1;
            }
            const long k = sign * uint_literal("integer exponent");
            if (pos_ < text_.size() && text_[pos_] == '.') {
                fail("non-integer exponent");
            }
            if (is_q && k < 0) {
                throw parse_error(exp_pos, "q-power must be non-negative");
            }
            v.raise(k);
            for (const auto& [j, e] : v.factors) {
                if (e > max_exponent || e < -max_exponent) {
                    throw parse_error(exp_pos, "exponent of E" + std::to_string(j) + " out of range");
                }
            }
            if (v.shift > max_exponent || v.shift < -max_exponent) {
                throw parse_error(exp_pos, "q-power out of range");
            }
        }
        return v;
    }

    Value factor()
    {
        skip_space();
        if (pos_ >= text_.size()) {
            fail("unexpected end of input");
        }
        Value v;
        const char c = text_[pos_];
        if (c == 'E') {
            ++pos_;
            const std::size_t sub_pos = pos_;
            const long j = uint_literal("subscript after 'E'");
            if (j == 0) {
                throw parse_error(sub_pos, "subscript must be positive");
            }
            v.factors[static_cast<int>(j)] = 1;
            return v;
        }
        if (c == 'q') {
            last_q_ = pos_;
            ++pos_;
            v.shift = 1;
            return v;
        }
        if (c == '(') {
            ++pos_;
            v = expr();
            if (!peek(')')) {
                fail("expected ')'");
            }
            ++pos_;
            return v;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t last_q_ = 0;
};

} // namespace detail

/// Parses an eta-quotient expression such as "q^4 * E2^2*E10^15/E1^14/E5^5".
/// Throws parse_error carrying the byte offset of the problem.
inline EtaQuotientSpec parse_eta_expression(std::string_view text) { return detail::EtaExpressionParser(text).parse(); }

} // namespace qdissect
