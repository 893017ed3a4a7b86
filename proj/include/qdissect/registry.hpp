#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "dissection.hpp"
#include "eta.hpp"
#include "symbolic.hpp"

namespace qdissect
{

// ---------------------------------------------------------------------------
// Reports

struct Discrepancy {
    long exponent = 0;
    std::string lhs;
    std::string rhs;

    friend bool operator==(const Discrepancy&, const Discrepancy&) = default;
};

/// Outcome of one verification job. holds == !first_discrepancy.
struct IdentityReport {
    std::string name;
    int order = 0;
    bool holds = true;
    std::optional<Discrepancy> first_discrepancy;
    std::optional<long> modulus;
    long instances_checked = 0;
    double elapsed_ms = 0.0;
    std::string anchor;
    std::string notes;

    void fail(long exponent, std::string lhs, std::string rhs)
    {
        if (!first_discrepancy) {
            holds = false;
            first_discrepancy = Discrepancy{exponent, std::move(lhs), std::move(rhs)};
        }
    }

    void fail(const Mismatch& m) { fail(m.exponent, m.lhs.get_str(), m.rhs.get_str()); }

    void note(const std::string& text)
    {
        if (!notes.empty()) {
            notes += "; ";
        }
        notes += text;
    }

    friend bool operator==(const IdentityReport&, const IdentityReport&) = default;
};

namespace detail
{

inline void absorb(IdentityReport& report, const Comparison& cmp)
{
    if (!cmp.equal && cmp.mismatch) {
        report.fail(*cmp.mismatch);
    }
}

inline std::string finite_prefix_note(int order)
{
    return "certified for exponents below " + std::to_string(order) + " only";
}

} // namespace detail

// ---------------------------------------------------------------------------
// Named series

enum class SeriesKind { p, c, c_tilde, b, a, delta };

struct SeriesId {
    SeriesKind kind;
    int k = 0; // only for delta

    std::string to_string() const
    {
        switch (kind) {
        case SeriesKind::p: return "p";
        case SeriesKind::c: return "c";
        case SeriesKind::c_tilde: return "c_tilde";
        case SeriesKind::b: return "b";
        case SeriesKind::a: return "a";
        case SeriesKind::delta: return "delta(" + std::to_string(k) + ")";
        }
        return "?";
    }

    /// Accepts p, c, c_tilde, b, a and delta(k).
    static SeriesId parse(const std::string& text)
    {
        if (text == "p") return {SeriesKind::p};
        if (text == "c") return {SeriesKind::c};
        if (text == "c_tilde") return {SeriesKind::c_tilde};
        if (text == "b") return {SeriesKind::b};
        if (text == "a") return {SeriesKind::a};
        if (text.size() > 7 && text.rfind("delta(", 0) == 0 && text.back() == ')') {
            const std::string digits = text.substr(6, text.size() - 7);
            if (!digits.empty() && digits.size() < 7
                && std::all_of(digits.begin(), digits.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
                const int k = std::stoi(digits);
                if (k >= 1) {
                    return {SeriesKind::delta, k};
                }
            }
        }
        throw unknown_name_error("unknown series name '" + text + "'");
    }

    friend bool operator==(const SeriesId&, const SeriesId&) = default;
};

inline EtaQuotientSpec series_spec(const SeriesId& id)
{
    switch (id.kind) {
    case SeriesKind::p: return EtaQuotientSpec({{1, -1}});
    case SeriesKind::c: return EtaQuotientSpec({{2, 1}, {1, -3}});
    case SeriesKind::c_tilde: return EtaQuotientSpec({{10, 3}, {1, -2}, {2, -2}, {5, -1}});
    case SeriesKind::b: return EtaQuotientSpec({{1, -2}, {2, -2}});
    case SeriesKind::a: return EtaQuotientSpec({{1, -1}, {2, -1}});
    case SeriesKind::delta: return broken_diamond_spec(id.k);
    }
    throw unknown_name_error("unknown series kind");
}

inline TruncatedSeries named_series(const SeriesId& id, int order) { return eta_quotient(series_spec(id), order); }

// ---------------------------------------------------------------------------
// Linear combinations of eta quotients

struct EtaTerm {
    Coefficient coefficient;
    EtaQuotientSpec quotient;
};

/// U_{m,r}(lhs) = sum_i c_i * quotient_i, optionally only modulo `modulus`.
struct LinearEtaIdentity {
    std::string name;
    std::string anchor;
    EtaQuotientSpec lhs;
    std::optional<ProgressionSpec> progression;
    std::vector<EtaTerm> rhs;
    std::optional<long> modulus;
};

inline TruncatedSeries evaluate_terms(std::span<const EtaTerm> terms, int order)
{
    TruncatedSeries sum = TruncatedSeries::zero(order);
    for (const auto& t : terms) {
        sum = add(sum, scale(eta_quotient(t.quotient, order), t.coefficient));
    }
    return sum;
}

/// The left side extracted to `order` terms.
inline TruncatedSeries evaluate_lhs(const EtaQuotientSpec& lhs, const std::optional<ProgressionSpec>& p, int order)
{
    if (!p) {
        return eta_quotient(lhs, order);
    }
    return extract_progression(eta_quotient(lhs, p->modulus() * order + p->residue()), *p);
}

inline IdentityReport verify_linear_identity(const LinearEtaIdentity& id, int order)
{
    IdentityReport report;
    report.name = id.name;
    report.anchor = id.anchor;
    report.order = order;
    report.modulus = id.modulus;
    report.instances_checked = order;
    const TruncatedSeries lhs = evaluate_lhs(id.lhs, id.progression, order);
    const TruncatedSeries rhs = evaluate_terms(id.rhs, order);
    if (id.modulus) {
        detail::absorb(report, congruent_to_order(lhs, rhs, Coefficient(*id.modulus), order));
    } else {
        detail::absorb(report, equal_to_order(lhs, rhs, order));
    }
    report.note(detail::finite_prefix_note(order));
    return report;
}

namespace detail
{

inline EtaTerm term(long c, int shift, std::vector<EtaFactor> factors)
{
    return {Coefficient(c), EtaQuotientSpec(factors, shift)};
}

} // namespace detail

/// The linear eta-quotient identities, as mutable data.
inline std::vector<LinearEtaIdentity> linear_identities()
{
    using detail::term;
    std::vector<LinearEtaIdentity> out;
    out.push_back({"bb_c5n4",
                   "sum c(5n+4) q^n = 41 E10^3/(E1^2 E2^2 E5) + 860q E10^6/(E1^5 E2 E5^2) + 6800q^2 E10^9/(E1^8 E5^3)"
                   " + 24000q^3 E2 E10^12/(E1^11 E5^4) + 32000q^4 E2^2 E10^15/(E1^14 E5^5)",
                   series_spec({SeriesKind::c}),
                   ProgressionSpec(5, 4),
                   {term(41, 0, {{10, 3}, {1, -2}, {2, -2}, {5, -1}}), term(860, 1, {{10, 6}, {1, -5}, {2, -1}, {5, -2}}),
                    term(6800, 2, {{10, 9}, {1, -8}, {5, -3}}), term(24000, 3, {{2, 1}, {10, 12}, {1, -11}, {5, -4}}),
                    term(32000, 4, {{2, 2}, {10, 15}, {1, -14}, {5, -5}})},
                   std::nullopt});
    out.push_back({"cpp_b5n4",
                   "sum b(5n+4) q^n = 35 E5^2 E10^2/(E1^4 E2^4) + 700q (...)^4/(...)^6 + 6875q^2 (...) + 31250q^3 (...)"
                   " + 78125q^4 E5^10 E10^10/(E1^12 E2^12)",
                   series_spec({SeriesKind::b}),
                   ProgressionSpec(5, 4),
                   {term(35, 0, {{5, 2}, {10, 2}, {1, -4}, {2, -4}}), term(700, 1, {{5, 4}, {10, 4}, {1, -6}, {2, -6}}),
                    term(6875, 2, {{5, 6}, {10, 6}, {1, -8}, {2, -8}}),
                    term(31250, 3, {{5, 8}, {10, 8}, {1, -10}, {2, -10}}),
                    term(78125, 4, {{5, 10}, {10, 10}, {1, -12}, {2, -12}})},
                   std::nullopt});
    out.push_back({"ctilde_5n4",
                   "sum c~(5n+4) q^n = 35 E5^2 E10^2/(E1^5 E2) + 700q E5^4 E10^4/(E1^7 E2^3) + ..."
                   " + 78125q^4 E5^10 E10^10/(E1^13 E2^9)",
                   series_spec({SeriesKind::c_tilde}),
                   ProgressionSpec(5, 4),
                   {term(35, 0, {{5, 2}, {10, 2}, {1, -5}, {2, -1}}), term(700, 1, {{5, 4}, {10, 4}, {1, -7}, {2, -3}}),
                    term(6875, 2, {{5, 6}, {10, 6}, {1, -9}, {2, -5}}),
                    term(31250, 3, {{5, 8}, {10, 8}, {1, -11}, {2, -7}}),
                    term(78125, 4, {{5, 10}, {10, 10}, {1, -13}, {2, -9}})},
                   std::nullopt});
    out.push_back({"cubic_a5n2",
                   "sum a(5n+2) q^n = 3 E5 E10/(E1^2 E2^2) + 25q E5^3 E10^3/(E1^4 E2^4) + 125q^2 E5^5 E10^5/(E1^6 E2^6)",
                   series_spec({SeriesKind::a}),
                   ProgressionSpec(5, 2),
                   {term(3, 0, {{5, 1}, {10, 1}, {1, -2}, {2, -2}}), term(25, 1, {{5, 3}, {10, 3}, {1, -4}, {2, -4}}),
                    term(125, 2, {{5, 5}, {10, 5}, {1, -6}, {2, -6}})},
                   std::nullopt});
    out.push_back({"delta2_5n4",
                   "sum Delta_2(5n+4) q^n = 41 E10^3/(E1 E2^3 E5) + 860q E10^6/(E1^4 E2^2 E5^2) + 6800q^2 E10^9/(E1^7 E2 E5^3)"
                   " + 24000q^3 E10^12/(E1^10 E5^4) + 32000q^4 E2 E10^15/(E1^13 E5^5)",
                   series_spec({SeriesKind::delta, 2}),
                   ProgressionSpec(5, 4),
                   {term(41, 0, {{10, 3}, {1, -1}, {2, -3}, {5, -1}}), term(860, 1, {{10, 6}, {1, -4}, {2, -2}, {5, -2}}),
                    term(6800, 2, {{10, 9}, {1, -7}, {2, -1}, {5, -3}}), term(24000, 3, {{10, 12}, {1, -10}, {5, -4}}),
                    term(32000, 4, {{2, 1}, {10, 15}, {1, -13}, {5, -5}})},
                   std::nullopt});
    return out;
}

/// The Delta_2(5n+4) identity with the printed denominators E1^12, E1^15.
/// It does not hold; see delta2_5n4.
inline LinearEtaIdentity delta2_5n4_as_printed()
{
    LinearEtaIdentity id = linear_identities()[4];
    id.name = "delta2_5n4_as_printed";
    id.rhs[3] = detail::term(24000, 3, {{10, 12}, {1, -12}, {5, -4}});
    id.rhs[4] = detail::term(32000, 4, {{2, 1}, {10, 15}, {1, -15}, {5, -5}});
    return id;
}

inline LinearEtaIdentity linear_identity(const std::string& name)
{
    for (auto& id : linear_identities()) {
        if (id.name == name) {
            return id;
        }
    }
    throw unknown_name_error("no linear identity named '" + name + "'");
}

// ---------------------------------------------------------------------------
// Congruence families

/// series(A n + B) = 0 (mod M) for every representable n.
struct CongruenceFamily {
    std::string name;
    std::string anchor;
    SeriesId series;
    ProgressionSpec progression;
    long modulus;
    std::string parameter;
    // Leading instances not covered, for offsets B >= A written as A(n+1) + (B-A).
    int skip = 0;
};

inline IdentityReport verify_congruence(const CongruenceFamily& family, int order)
{
    if (family.modulus < 2) {
        throw invalid_modulus_error("congruence modulus must be >= 2");
    }
    const int instances = family.progression.terms_below(order) - family.skip;
    if (instances < 3) {
        throw insufficient_order_error(family.name + ": order " + std::to_string(order) + " holds only "
                                       + std::to_string(instances) + " instance(s) of "
                                       + family.progression.to_string() + ", need 3");
    }
    IdentityReport report;
    report.name = family.name;
    report.anchor = family.anchor;
    report.order = order;
    report.modulus = family.modulus;
    report.instances_checked = instances;
    const TruncatedSeries s = named_series(family.series, order);
    const ModularSeries part = reduce_mod(extract_progression(s, family.progression), Coefficient(family.modulus));
    for (int n = family.skip; n < part.order(); ++n) {
        if (sgn(part[n]) != 0) {
            report.fail(family.progression.modulus() * n + family.progression.residue(), part[n].get_str(), "0");
            break;
        }
    }
    report.note(family.series.to_string() + "(" + family.progression.to_string() + ") mod "
                + std::to_string(family.modulus) + " for n = " + std::to_string(family.skip) + ".."
                + std::to_string(family.skip + instances - 1));
    if (!family.parameter.empty()) {
        report.note(family.parameter);
    }
    return report;
}

/// Delta_2(5^{alpha+1} n + (s 5^alpha + 1)/4) = 0 (mod 5) for s in {11, 19}.
inline CongruenceFamily chan_family(int which, int alpha)
{
    const int s = which == 1 ? 11 : 19;
    int p = 1;
    for (int i = 0; i < alpha; ++i) {
        p *= 5;
    }
    const int offset = (s * p + 1) / 4;
    const int skip = offset / (5 * p);
    return {"chan_family_" + std::to_string(which) + "_a" + std::to_string(alpha),
            "Delta_2(5^(a+1) n + (" + std::to_string(s) + "*5^a + 1)/4) = 0 mod 5",
            {SeriesKind::delta, 2},
            ProgressionSpec(5 * p, offset % (5 * p)),
            5,
            "alpha = " + std::to_string(alpha),
            skip};
}

inline std::vector<CongruenceFamily> congruence_families()
{
    return {
        {"thm_mod25", "c(125n+99) = 0 mod 25", {SeriesKind::c}, ProgressionSpec(125, 99), 25, ""},
        {"delta62_mod25", "Delta_k(125n+99) = 0 mod 25 for k = 62 mod 125", {SeriesKind::delta, 62},
         ProgressionSpec(125, 99), 25, "k = 62"},
        {"delta187_mod25", "Delta_k(125n+99) = 0 mod 25 for k = 62 mod 125", {SeriesKind::delta, 187},
         ProgressionSpec(125, 99), 25, "k = 187"},
        {"ctilde_mod25", "c~(25n+19) = 0 mod 25", {SeriesKind::c_tilde}, ProgressionSpec(25, 19), 25, ""},
        {"cpp_mod5", "b(5n+4) = 0 mod 5", {SeriesKind::b}, ProgressionSpec(5, 4), 5, ""},
        {"ramanujan_p5n4", "p(5n+4) = 0 mod 5", {SeriesKind::p}, ProgressionSpec(5, 4), 5, ""},
        {"delta2_25n14", "Delta_2(25n+14) = 0 mod 5", {SeriesKind::delta, 2}, ProgressionSpec(25, 14), 5, ""},
        {"delta2_25n24", "Delta_2(25n+24) = 0 mod 5", {SeriesKind::delta, 2}, ProgressionSpec(25, 24), 5, ""},
        {"c_25n24_mod5", "c(25n+24) = 0 mod 5", {SeriesKind::c}, ProgressionSpec(25, 24), 5, ""},
        {"delta12_25n24_mod5", "Delta_k(25n+24) = 0 mod 5 for k = 12 mod 25", {SeriesKind::delta, 12},
         ProgressionSpec(25, 24), 5, "k = 12"},
        chan_family(1, 0), chan_family(1, 1), chan_family(1, 2),
        chan_family(2, 0), chan_family(2, 1), chan_family(2, 2),
    };
}

inline CongruenceFamily congruence_family(const std::string& name)
{
    for (auto& f : congruence_families()) {
        if (f.name == name) {
            return f;
        }
    }
    throw unknown_name_error("no congruence family named '" + name + "'");
}

namespace detail
{

// Folds several sub-reports into one; instance counts add up.
inline IdentityReport merge_reports(std::string name, int order, const std::vector<IdentityReport>& parts)
{
    IdentityReport out;
    out.name = std::move(name);
    out.order = order;
    for (const auto& r : parts) {
        out.instances_checked += r.instances_checked;
        if (!out.modulus) {
            out.modulus = r.modulus;
        }
        if (r.first_discrepancy && out.holds) {
            out.fail(r.first_discrepancy->exponent, r.first_discrepancy->lhs, r.first_discrepancy->rhs);
        }
        out.note(r.name + (r.holds ? " holds" : " FAILS"));
    }
    return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Single-purpose verifications

inline IdentityReport verify_hirschhorn(std::span<const HirschhornTerm> terms, int order)
{
    IdentityReport report;
    report.name = "hirschhorn_E1";
    report.order = order;
    report.instances_checked = order;
    detail::absorb(report, equal_to_order(invert(euler_product(1, order)), hirschhorn_dissection_series(terms, order), order));
    report.note(detail::finite_prefix_note(order));
    return report;
}

/// The five progression parts of 1/E1 against the grouping of the
/// 5-dissection by q-residue: part r = (E5^5/E1^6) sum_{i = r mod 5} c_i q^{(i-r)/5} R(q)^{r_i}.
inline IdentityReport verify_hirschhorn_parts(int order)
{
    IdentityReport report;
    report.name = "hirschhorn_parts";
    report.order = order;
    const auto parts = full_dissection(invert(euler_product(1, 5 * order)), 5);
    const TruncatedSeries prefactor = eta_quotient(EtaQuotientSpec({{5, 5}, {1, -6}}), order);
    detail::PowerLadder rs(rogers_ramanujan_R(order), x_series(order));
    for (int r = 0; r < 5; ++r) {
        TruncatedSeries sum = TruncatedSeries::zero(order);
        for (const auto& t : hirschhorn_vector()) {
            if (t.q_power % 5 == r) {
                sum = add(sum, scale(rs(t.r_exponent), Coefficient(t.coefficient)).times_q_power(t.q_power / 5).truncated(order));
            }
        }
        const Comparison cmp = equal_to_order(parts[static_cast<std::size_t>(r)], mul(prefactor, sum), order);
        if (!cmp.equal) {
            report.fail(5 * cmp.mismatch->exponent + r, cmp.mismatch->lhs.get_str(), cmp.mismatch->rhs.get_str());
        }
        report.instances_checked += order;
    }
    report.note("all five parts of 1/E1 to " + std::to_string(order) + " terms each");
    return report;
}

inline IdentityReport verify_series_pair(std::string name, const TruncatedSeries& lhs, const TruncatedSeries& rhs, int order)
{
    IdentityReport report;
    report.name = std::move(name);
    report.order = order;
    report.instances_checked = order;
    detail::absorb(report, equal_to_order(lhs, rhs, order));
    return report;
}

inline IdentityReport verify_simp_iden(int order)
{
    return verify_series_pair("simp_iden", evaluate_K(u_poly(), order),
                              eta_quotient(EtaQuotientSpec({{1, 2}, {2, 2}, {5, -2}, {10, -2}}), order), order);
}

inline IdentityReport verify_iden1(int order)
{
    return verify_series_pair("iden1", evaluate_xy(P_xy(1, 0), order), K_series(order), order);
}

inline IdentityReport verify_iden2(int order)
{
    return verify_series_pair("iden2", evaluate_xy(P_xy(0, 1), order), evaluate_K(PKTable::four_q_over_K(), order),
                              order);
}

inline IdentityReport verify_iden3(int order)
{
    return verify_series_pair("iden3", evaluate_xy(P_xy(1, -1), order), evaluate_K(PKTable::p1m1_seed(), order), order);
}

inline IdentityReport verify_psi_dual(int order)
{
    return verify_series_pair("psi_dual", psi_series(order), psi_quotient(order), order);
}

inline IdentityReport verify_euler_dual(int order)
{
    IdentityReport report;
    report.name = "euler_dual";
    report.order = order;
    for (int j = 1; j <= 20 && report.holds; ++j) {
        detail::absorb(report, equal_to_order(euler_product_naive(j, order), euler_product_pentagonal(j, order), order));
        report.instances_checked += order;
    }
    report.note("E_j for j = 1..20, naive product vs pentagonal form");
    return report;
}

inline IdentityReport verify_residue_factorization(int order)
{
    IdentityReport report;
    report.name = "residue_factorization";
    report.order = order;
    const TruncatedSeries e1 = euler_product(1, order);
    for (int b : {2, 5, 10}) {
        TruncatedSeries prod = TruncatedSeries::one(order);
        for (int a = 1; a <= b; ++a) {
            prod = mul(prod, pochhammer({a, b}, order));
        }
        detail::absorb(report, equal_to_order(prod, e1, order));
        report.instances_checked += order;
    }
    report.note("prod_{a=1..b} (q^a;q^b) = E1 for b in {2, 5, 10}");
    return report;
}

inline IdentityReport verify_frobenius_mod5(int order)
{
    IdentityReport report;
    report.name = "frobenius_mod5";
    report.order = order;
    report.modulus = 5;
    for (int j : {1, 2}) {
        detail::absorb(report, congruent_to_order(pow(euler_product(j, order), 5), euler_product(5 * j, order),
                                                  Coefficient(5), order));
        report.instances_checked += order;
    }
    report.note("E_j^5 = E_5j mod 5 for j in {1, 2}");
    return report;
}

inline IdentityReport verify_rec_report(int alpha_max, int beta_range)
{
    IdentityReport report;
    report.name = "p_rec_identities";
    const RecIdentityReport rec = verify_rec_identities(alpha_max, beta_range);
    report.instances_checked = static_cast<long>(rec.checks.size());
    for (const auto& c : rec.checks) {
        if (!c.holds) {
            report.fail(c.alpha, "alpha=" + std::to_string(c.alpha) + ",beta=" + std::to_string(c.beta), "identity");
        }
    }
    report.note("exact in Z[q][x,y,1/x,1/y] for alpha <= " + std::to_string(alpha_max)
                + ", |beta| <= " + std::to_string(beta_range));
    return report;
}

inline IdentityReport verify_pk_agreement(int order)
{
    IdentityReport report;
    report.name = "p_k_agreement";
    report.order = order;
    for (int alpha = 0; alpha <= 4; ++alpha) {
        for (int beta = -4; beta <= 4; ++beta) {
            const Comparison cmp = equal_to_order(evaluate_K(P_K(alpha, beta), order), evaluate_xy(P_xy(alpha, beta), order), order);
            if (!cmp.equal && report.holds) {
                report.fail(*cmp.mismatch);
                report.note("first failure at P(" + std::to_string(alpha) + "," + std::to_string(beta) + ")");
            }
            ++report.instances_checked;
        }
    }
    report.note("P(alpha,beta) via K-recurrences vs x,y definition, alpha <= 4, |beta| <= 4");
    return report;
}

namespace detail
{

inline std::string describe(const DisplayDiscrepancy& d)
{
    return "x^" + std::to_string(d.exponent[0]) + " y^" + std::to_string(d.exponent[1]) + ": printed "
           + d.printed.to_string() + ", derived " + d.derived.to_string();
}

} // namespace detail

/// Independent derivation of the P-basis form of sum b(5n+4) q^n, audited
/// against the printed expansion and its printed regrouping.
inline IdentityReport verify_b5n4_combination()
{
    IdentityReport report;
    report.name = "b5n4_combination";
    const XYLaurentPoly derived = derive_b5n4_xy();
    const PBasisCombination combo = regroup_into_P(derived);
    const PBasisCombination printed = printed_b5n4_combination();
    report.instances_checked = static_cast<long>(combo.terms.size()) + 1;
    if (!(combo == printed)) {
        for (const auto& t : printed.terms) {
            const Coefficient d = combo.coefficient_of(t.alpha, t.beta, t.q_power);
            if (d != t.coefficient) {
                report.fail(t.q_power, d.get_str(), t.coefficient.get_str());
                report.note("P(" + std::to_string(t.alpha) + "," + std::to_string(t.beta) + ") at q^"
                            + std::to_string(t.q_power) + " differs");
                break;
            }
        }
        if (report.holds) {
            report.fail(0, "derived combination", "printed combination");
        }
    }
    report.note("derived " + std::to_string(combo.terms.size()) + " P-terms plus constant " + combo.constant.to_string());
    for (const auto& d : audit_printed_display(derived)) {
        report.note("printed expansion misprint at " + detail::describe(d));
    }
    return report;
}

/// The P -> K reduction of the derived combination against the printed
/// nine-term Laurent polynomial and against the u-substituted form.
inline IdentityReport verify_b5n4_K_form(std::span<const long, 9> k_coefficients,
                                         std::span<const long, 5> u_coefficients)
{
    IdentityReport report;
    report.name = "b5n4_symbolic";
    const KLaurentPoly derived = b5n4_K_form();
    const KLaurentPoly printed = nine_term_K_form(k_coefficients);
    const KLaurentPoly u = u_form(u_coefficients);
    report.instances_checked = 2;
    for (int e = 8; e >= -8; --e) {
        const QPolynomial d = derived.coefficient({e}), p = printed.coefficient({e});
        if (d != p) {
            report.fail(e, d.to_string(), p.to_string());
            report.note("K-form mismatch at K^" + std::to_string(e));
            break;
        }
    }
    if (report.holds && derived != printed) {
        report.fail(0, "derived K-form", "printed K-form");
    }
    for (int e = 8; e >= -8 && report.holds; --e) {
        const QPolynomial d = derived.coefficient({e}), p = u.coefficient({e});
        if (d != p) {
            report.fail(e, d.to_string(), p.to_string());
            report.note("u-form mismatch at K^" + std::to_string(e));
        }
    }
    report.note("exact equality in Z[q][K,1/K]");
    return report;
}

/// Numeric end-to-end check of the derived combination:
/// evaluate_xy(combination) * E5^10 E10^10/(E1^12 E2^12) = sum b(5n+4) q^n.
inline IdentityReport verify_b5n4_chain(int order)
{
    const TruncatedSeries lhs = evaluate_lhs(series_spec({SeriesKind::b}), ProgressionSpec(5, 4), order);
    const TruncatedSeries rhs = mul(evaluate_xy(derive_b5n4_combination().to_xy(), order), eta_quotient(b5n4_prefactor(), order));
    return verify_series_pair("b5n4_chain", lhs, rhs, order);
}

inline IdentityReport verify_gf5n4_mod5_chain(int order)
{
    IdentityReport report;
    report.name = "gf5n4_mod5_chain";
    report.order = order;
    report.modulus = 5;
    report.instances_checked = order;
    const Coefficient m5(5);
    const TruncatedSeries lhs = evaluate_lhs(series_spec({SeriesKind::c}), ProgressionSpec(5, 4), order);
    const TruncatedSeries mid = eta_quotient(series_spec({SeriesKind::c_tilde}), order);
    detail::absorb(report, congruent_to_order(lhs, mid, m5, order));
    const TruncatedSeries printed = eta_quotient(EtaQuotientSpec({{1, 3}, {2, 3}, {10, 2}, {5, -1}}), order);
    const TruncatedSeries corrected = eta_quotient(EtaQuotientSpec({{1, 3}, {2, 3}, {10, 2}, {5, -2}}), order);
    const Comparison p = congruent_to_order(mid, printed, m5, order);
    const Comparison c = congruent_to_order(mid, corrected, m5, order);
    report.note(std::string("E1^3 E2^3 E10^2/E5 ") + (p.equal ? "matches" : "does not match (first residue mismatch at q^"
                                                                             + std::to_string(p.mismatch->exponent) + ")"));
    report.note(std::string("E1^3 E2^3 E10^2/E5^2 ") + (c.equal ? "matches" : "does not match"));
    if (p.equal) {
        report.note("verified form: denominator E5");
    } else if (c.equal) {
        report.note("verified form: denominator E5^2");
    } else {
        report.fail(*c.mismatch);
    }
    return report;
}

inline IdentityReport verify_delta2_psi_mod5(int order)
{
    IdentityReport report;
    report.name = "delta2_psi_mod5";
    report.order = order;
    report.modulus = 5;
    report.instances_checked = order;
    const TruncatedSeries lhs = evaluate_lhs(series_spec({SeriesKind::delta, 2}), ProgressionSpec(5, 4), order);
    const TruncatedSeries rhs = mul(psi_series(order), substitute_power(psi_series((order + 4) / 5), 5, order));
    detail::absorb(report, congruent_to_order(lhs, rhs, Coefficient(5), order));
    return report;
}

// ---------------------------------------------------------------------------
// The mod-25 reduction chain

struct ReductionChainResult {
    std::array<bool, 5> steps{};
    std::array<std::optional<Mismatch>, 5> failures;
    // Least exponent in the claimed-empty progression whose integer
    // coefficient is nonzero, before reduction mod 25.
    std::optional<std::pair<int, Coefficient>> literal_5n4;
    std::optional<std::pair<int, Coefficient>> literal_5n3;

    bool all_hold() const { return std::all_of(steps.begin(), steps.end(), [](bool b) { return b; }); }
};

namespace detail
{

inline std::optional<std::pair<int, Coefficient>> first_nonzero_in(const TruncatedSeries& s, const ProgressionSpec& p)
{
    for (int n = p.residue(); n < s.order(); n += p.modulus()) {
        if (sgn(s[n]) != 0) {
            return std::pair{n, s[n]};
        }
    }
    return std::nullopt;
}

inline std::optional<Mismatch> first_nonzero_residue(const TruncatedSeries& s, const ProgressionSpec& p, const Coefficient& m)
{
    const ModularSeries r = reduce_mod(s, m);
    for (int n = p.residue(); n < s.order(); n += p.modulus()) {
        if (sgn(r[n]) != 0) {
            return Mismatch{n, r[n], Coefficient(0)};
        }
    }
    return std::nullopt;
}

} // namespace detail

inline constexpr int reduction_chain_min_order = 600;

inline ReductionChainResult reduction_chain_details(int order)
{
    if (order < reduction_chain_min_order) {
        throw insufficient_order_error("reduction chain needs order >= " + std::to_string(reduction_chain_min_order));
    }
    ReductionChainResult out;
    const Coefficient m25(25);
    const LinearEtaIdentity bb = linear_identity("bb_c5n4");

    // (i) the last three coefficients vanish mod 25, leaving two terms
    const TruncatedSeries c5n4 = evaluate_lhs(bb.lhs, bb.progression, order);
    bool tail_vanishes = true;
    for (std::size_t i = 2; i < bb.rhs.size(); ++i) {
        tail_vanishes = tail_vanishes && mpz_divisible_ui_p(bb.rhs[i].coefficient.get_mpz_t(), 25) != 0;
    }
    const TruncatedSeries head = evaluate_terms(std::span(bb.rhs).first(2), order);
    const Comparison step1 = congruent_to_order(c5n4, head, m25, order);
    out.steps[0] = tail_vanishes && step1.equal;
    out.failures[0] = step1.mismatch;

    // (ii) 860 q T2 = 10 q E10^6/(E2 E5^3) mod 25
    const TruncatedSeries t2 = scale(eta_quotient(bb.rhs[1].quotient, order), bb.rhs[1].coefficient);
    const TruncatedSeries reduced = scale(eta_quotient(EtaQuotientSpec({{10, 6}, {2, -1}, {5, -3}}, 1), order), Coefficient(10));
    const Comparison step2 = congruent_to_order(t2, reduced, m25, order);
    out.steps[1] = step2.equal;
    out.failures[1] = step2.mismatch;

    // (iii) no q^{5n+4} terms mod 25
    const ProgressionSpec p54(5, 4);
    out.failures[2] = detail::first_nonzero_residue(reduced, p54, m25);
    out.steps[2] = !out.failures[2] && supported_residues(extract_progression(reduced, p54), 2, m25).empty();
    out.literal_5n4 = detail::first_nonzero_in(reduced, p54);

    // (iv) sum c~(5n+4) q^n = 10 E5 E10^2 / E2 mod 25
    const TruncatedSeries ct5n4 = evaluate_lhs(series_spec({SeriesKind::c_tilde}), p54, order);
    const TruncatedSeries punch = scale(eta_quotient(EtaQuotientSpec({{5, 1}, {10, 2}, {2, -1}}), order), Coefficient(10));
    const Comparison step4 = congruent_to_order(ct5n4, punch, m25, order);
    out.steps[3] = step4.equal;
    out.failures[3] = step4.mismatch;

    // (v) no q^{5n+3} terms mod 25
    const ProgressionSpec p53(5, 3);
    out.failures[4] = detail::first_nonzero_residue(punch, p53, m25);
    out.steps[4] = !out.failures[4];
    out.literal_5n3 = detail::first_nonzero_in(punch, p53);
    return out;
}

inline IdentityReport reduction_chain_mod25(int order)
{
    IdentityReport report;
    report.name = "reduction_chain_mod25";
    report.order = order;
    report.modulus = 25;
    const ReductionChainResult r = reduction_chain_details(order);
    static constexpr const char* labels[5] = {
        "(i) c(5n+4) = 41 T1 + 860q T2 mod 25", "(ii) 860q T2 = 10q E10^6/(E2 E5^3) mod 25",
        "(iii) q^{5n+4} part of 10q E10^6/(E2 E5^3) vanishes mod 25", "(iv) c~(5n+4) = 10 E5 E10^2/E2 mod 25",
        "(v) q^{5n+3} part of 10 E5 E10^2/E2 vanishes mod 25"};
    for (std::size_t i = 0; i < 5; ++i) {
        report.note(std::string(labels[i]) + (r.steps[i] ? ": holds" : ": FAILS"));
        if (!r.steps[i]) {
            if (r.failures[i]) {
                report.fail(*r.failures[i]);
            } else {
                report.fail(0, labels[i], "holds");
            }
        }
    }
    report.instances_checked = 5;
    auto literal = [&](const char* what, const std::optional<std::pair<int, Coefficient>>& hit) {
        if (hit) {
            report.note(std::string("integer-level reading of ") + what + " fails: coefficient " + hit->second.get_str()
                        + " at q^" + std::to_string(hit->first));
        } else {
            report.note(std::string("integer-level reading of ") + what + " also holds");
        }
    };
    literal("'no q^{5n+4} terms'", r.literal_5n4);
    literal("'no q^{5n+3} terms'", r.literal_5n3);
    return report;
}

// ---------------------------------------------------------------------------
// The registry

enum class EntryKind { identity, congruence, symbolic, composite };

inline const char* to_string(EntryKind k)
{
    switch (k) {
    case EntryKind::identity: return "identity";
    case EntryKind::congruence: return "congruence";
    case EntryKind::symbolic: return "symbolic";
    case EntryKind::composite: return "composite";
    }
    return "?";
}

struct RegistryEntry {
    std::string name;
    std::string anchor;
    EntryKind kind;
    int default_order;
    std::function<IdentityReport(int)> run;
};

namespace detail
{

inline IdentityReport run_congruence_group(const std::string& name, const std::vector<CongruenceFamily>& asserted,
                                           const std::vector<CongruenceFamily>& recorded, int order)
{
    std::vector<IdentityReport> parts;
    for (const auto& f : asserted) {
        parts.push_back(verify_congruence(f, order));
    }
    IdentityReport out = merge_reports(name, order, parts);
    for (const auto& f : recorded) {
        const IdentityReport r = verify_congruence(f, order);
        std::string outcome = r.holds ? "holds" : "fails";
        if (r.first_discrepancy) {
            outcome += " (first at exponent " + std::to_string(r.first_discrepancy->exponent) + ")";
        }
        out.note(f.parameter + " recorded, not asserted: " + outcome);
    }
    return out;
}

inline std::vector<RegistryEntry> build_registry()
{
    std::vector<RegistryEntry> r;
    auto identity = [&r](std::string name, std::string anchor, int order, std::function<IdentityReport(int)> run) {
        r.push_back({std::move(name), std::move(anchor), EntryKind::identity, order, std::move(run)});
    };

    identity("hirschhorn_E1", "1/E1 = (E25^5/E5^6)(R(q^5)^-4 + q R^-3 + 2q^2 R^-2 + 3q^3 R^-1 + 5q^4 - 3q^5 R + ...)",
             300, [](int n) { const auto v = hirschhorn_vector(); return verify_hirschhorn(v, n); });
    identity("hirschhorn_parts", "5-dissection of 1/E1 read off part by part; p(5n+4) part is 5 E5^5/E1^6", 300,
             verify_hirschhorn_parts);
    for (const auto& id : linear_identities()) {
        identity(id.name, id.anchor, 250, [id](int n) { return verify_linear_identity(id, n); });
    }
    identity("simp_iden", "K - 3q - 4q^2/K = E1^2 E2^2/(E5^2 E10^2)", 300, verify_simp_iden);
    identity("iden1", "x y^2 - q^2/(x y^2) = K", 400, verify_iden1);
    identity("iden2", "x^2/y - y/x^2 = 4q/K", 400, verify_iden2);
    identity("iden3", "y^3/x + q^2 x/y^3 = K - 2q + 4q^2/K", 400, verify_iden3);
    identity("psi_dual", "psi(q) = sum q^{n(n+1)/2} = E2^2/E1", 1000, verify_psi_dual);
    identity("frobenius_mod5", "E_j^5 = E_5j mod 5", 500, verify_frobenius_mod5);
    identity("euler_dual", "E_j = prod (1 - q^{jn}) = sum (-1)^k q^{j k(3k-1)/2}", 1000, verify_euler_dual);
    identity("residue_factorization", "prod_{a=1..b} (q^a;q^b) = E1; building block of R(q)", 300,
             verify_residue_factorization);
    identity("p_k_agreement", "P(alpha,beta) reduced to K and q agrees with its x,y definition", 200,
             verify_pk_agreement);
    identity("b5n4_chain", "sum b(5n+4) q^n = (E5^10 E10^10/(E1^12 E2^12)) * (P-basis combination)", 150,
             verify_b5n4_chain);
    identity("gf5n4_mod5_chain", "sum c(5n+4) q^n = E10^3/(E1^2 E2^2 E5) = E1^3 E2^3 E10^2/E5^? mod 5", 250,
             verify_gf5n4_mod5_chain);
    identity("delta2_psi_mod5", "sum Delta_2(5n+4) q^n = psi(q) psi(q^5) mod 5", 250, verify_delta2_psi_mod5);

    r.push_back({"p_rec_identities", "P(a,b)P(0,1) = P(a,b+1) - P(a,b-1) and the two alpha-step product identities",
                 EntryKind::symbolic, 0, [](int) { return verify_rec_report(4, 4); }});
    r.push_back({"b5n4_combination", "5P(4,2) + 10P(4,1) + 20P(4,0) + q(40P(3,2) + ...) + q^4(... - 540P(0,1) + 225)",
                 EntryKind::symbolic, 0, [](int) { return verify_b5n4_combination(); }});
    r.push_back({"b5n4_symbolic", "35K^4 + 280K^3 q + 1905K^2 q^2 + ... + 8960q^8/K^4 = 35u^4 + 700q u^3 + ... + 78125q^4",
                 EntryKind::symbolic, 0, [](int) {
                     return verify_b5n4_K_form(printed_b5n4_K_coefficients, b5n4_u_coefficients);
                 }});

    const std::vector<std::string> single = {"thm_mod25", "delta62_mod25", "delta187_mod25", "ctilde_mod25",
                                             "cpp_mod5", "ramanujan_p5n4", "delta2_25n14", "delta2_25n24"};
    const std::vector<int> orders = {1500, 700, 700, 600, 400, 400, 600, 600};
    for (std::size_t i = 0; i < single.size(); ++i) {
        const CongruenceFamily f = congruence_family(single[i]);
        r.push_back({f.name, f.anchor, EntryKind::congruence, orders[i],
                     [f](int n) { return verify_congruence(f, n); }});
    }
    r.push_back({"tang_mod5", "c(25n+24) = 0 mod 5 and Delta_k(25n+24) = 0 mod 5 for k = 12 mod 25",
                 EntryKind::congruence, 600, [](int n) {
                     return run_congruence_group("tang_mod5",
                                                 {congruence_family("c_25n24_mod5"), congruence_family("delta12_25n24_mod5")},
                                                 {}, n);
                 }});
    for (int which : {1, 2}) {
        const std::string name = "chan_family_" + std::to_string(which);
        r.push_back({name, chan_family(which, 1).anchor, EntryKind::congruence, 700, [which, name](int n) {
                         return run_congruence_group(name, {chan_family(which, 1), chan_family(which, 2)},
                                                     {chan_family(which, 0)}, n);
                     }});
    }
    r.push_back({"reduction_chain_mod25", "c(5n+4) -> 10q E10^6/(E2 E5^3) and c~(5n+4) -> 10 E5 E10^2/E2 mod 25",
                 EntryKind::composite, reduction_chain_min_order, reduction_chain_mod25});
    return r;
}

} // namespace detail

inline const std::vector<RegistryEntry>& registry()
{
    static const std::vector<RegistryEntry> entries = detail::build_registry();
    return entries;
}

inline const RegistryEntry& find_entry(const std::string& name)
{
    for (const auto& e : registry()) {
        if (e.name == name) {
            return e;
        }
    }
    throw unknown_name_error("unknown identity '" + name + "'");
}

struct RegistryInfo {
    std::string name;
    std::string anchor;
    EntryKind kind;
    int default_order;
};

inline std::vector<RegistryInfo> list_identities()
{
    std::vector<RegistryInfo> out;
    for (const auto& e : registry()) {
        out.push_back({e.name, e.anchor, e.kind, e.default_order});
    }
    return out;
}

/// Runs one registry entry; timing, name and anchor are filled in here.
inline IdentityReport verify_identity(const std::string& name, int order)
{
    const RegistryEntry& entry = find_entry(name);
    if (order < 1 && entry.kind != EntryKind::symbolic) {
        throw invalid_order_error("order must be >= 1");
    }
    const auto start = std::chrono::steady_clock::now();
    IdentityReport report = entry.run(order);
    const auto stop = std::chrono::steady_clock::now();
    report.name = entry.name;
    report.anchor = entry.anchor;
    report.order = entry.kind == EntryKind::symbolic ? 0 : order;
    report.elapsed_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    return report;
}

/// Order used for an entry when a run requests `requested`: identities use
/// it as given, congruence and composite jobs never drop below their listed
/// order (which guarantees at least three progression instances).
inline int effective_order(const RegistryEntry& entry, std::optional<int> requested)
{
    if (!requested) {
        return entry.default_order;
    }
    if (entry.kind == EntryKind::congruence || entry.kind == EntryKind::composite) {
        return std::max(*requested, entry.default_order);
    }
    return *requested;
}

/// Runs the named entries on up to `jobs` threads. Reports come back sorted
/// by name whatever the completion order.
inline std::vector<IdentityReport> run_registry(const std::vector<std::string>& names, std::optional<int> order,
                                                unsigned jobs = 1)
{
    std::vector<const RegistryEntry*> selected;
    for (const auto& n : names) {
        selected.push_back(&find_entry(n));
    }
    std::vector<IdentityReport> reports(selected.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < selected.size(); i = next++) {
            reports[i] = verify_identity(selected[i]->name, effective_order(*selected[i], order));
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(selected.size())));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    std::sort(reports.begin(), reports.end(), [](const IdentityReport& a, const IdentityReport& b) { return a.name < b.name; });
    return reports;
}

inline std::vector<std::string> all_entry_names()
{
    std::vector<std::string> out;
    for (const auto& e : registry()) {
        out.push_back(e.name);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Display manifest

struct DisplayRecord {
    std::string display;
    std::string entry;
};

/// Each displayed relation, mapped to the registry entry that certifies it.
inline std::vector<DisplayRecord> display_manifest()
{
    return {
        {"generating function of Delta_k(n)", "delta62_mod25"},
        {"Delta_2(25n+14) = 0 mod 5", "delta2_25n14"},
        {"Delta_2(25n+24) = 0 mod 5", "delta2_25n24"},
        {"Delta_2 family with (11*5^a+1)/4", "chan_family_1"},
        {"Delta_2 family with (19*5^a+1)/4", "chan_family_2"},
        {"Delta_k(125n+99) = 0 mod 25, k = 62 mod 125", "delta62_mod25"},
        {"E_j = (q^j;q^j)_inf", "euler_dual"},
        {"R(q) product definition", "residue_factorization"},
        {"5-dissection of 1/E1", "hirschhorn_E1"},
        {"x^2/y - y/x^2 = 4q/K", "iden2"},
        {"x y^2 - q^2/(x y^2) = K", "iden1"},
        {"y^3/x + q^2 x/y^3 = K - 2q + 4q^2/K", "iden3"},
        {"P(alpha,beta) definition", "p_rec_identities"},
        {"P(0,0) = 2", "p_k_agreement"},
        {"P(0,1) = 4q/K", "iden2"},
        {"P(1,0) = K", "iden1"},
        {"P(1,-1) = K - 2q + 4q^2/K", "iden3"},
        {"beta recurrence for P", "p_rec_identities"},
        {"alpha recurrence for P(alpha,0)", "p_rec_identities"},
        {"alpha recurrence for P(alpha,-1)", "p_rec_identities"},
        {"K - 3q - 4q^2/K = E1^2 E2^2/(E5^2 E10^2)", "simp_iden"},
        {"sum c(n) q^n = E2/E1^3", "thm_mod25"},
        {"c(125n+99) = 0 mod 25", "thm_mod25"},
        {"sum c(5n+4) q^n five-term identity", "bb_c5n4"},
        {"860q term = 10q E10^6/(E2 E5^3) mod 25", "reduction_chain_mod25"},
        {"sum c~(n) q^n = E10^3/(E1^2 E2^2 E5)", "ctilde_5n4"},
        {"c~(25n+19) = 0 mod 25", "ctilde_mod25"},
        {"sum b(n) q^n = 1/(E1^2 E2^2)", "cpp_b5n4"},
        {"b(5n+4) = 0 mod 5", "cpp_mod5"},
        {"sum b(5n+4) q^n five-term identity", "cpp_b5n4"},
        {"1/(E1^2 E2^2) as squared 5-dissections", "b5n4_chain"},
        {"expanded x,y form of sum b(5n+4) q^n", "b5n4_combination"},
        {"P-basis form of sum b(5n+4) q^n", "b5n4_combination"},
        {"nine-term K form", "b5n4_symbolic"},
        {"u-substituted form", "b5n4_symbolic"},
        {"sum a(n) q^n = 1/(E1 E2)", "cubic_a5n2"},
        {"sum a(5n+2) q^n three-term identity", "cubic_a5n2"},
        {"sum c~(5n+4) q^n five-term identity", "ctilde_5n4"},
        {"c~(5n+4) = 10 E5 E10^2/E2 mod 25", "reduction_chain_mod25"},
        {"c(5n+4) mod 5 chain", "gf5n4_mod5_chain"},
        {"c(25n+24) = 0 mod 5", "tang_mod5"},
        {"Delta_k(25n+24) = 0 mod 5, k = 12 mod 25", "tang_mod5"},
        {"sum Delta_2(5n+4) q^n five-term identity", "delta2_5n4"},
        {"sum Delta_2(5n+4) q^n = psi(q) psi(q^5) mod 5", "delta2_psi_mod5"},
        {"psi(q) = sum q^{n(n+1)/2}", "psi_dual"},
    };
}

} // namespace qdissect
