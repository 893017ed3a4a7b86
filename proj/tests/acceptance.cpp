// Acceptance gate: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <qdissect/cli.hpp>
#include <qdissect/qdissect.hpp>

#include "oracles.hpp"

using namespace qdissect;

namespace
{

constexpr double ac1_limit_s = 30.0;
constexpr double ac5_limit_s = 300.0;
constexpr double ac9_limit_s = 600.0;
constexpr int min_property_cases = 100;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string describe(const IdentityReport& r)
{
    if (r.holds) {
        return r.name + " holds";
    }
    return r.name + " fails at q^" + std::to_string(r.first_discrepancy->exponent);
}

bool has_coefficients(const LinearEtaIdentity& id, std::initializer_list<long> expected)
{
    if (id.rhs.size() != expected.size()) {
        return false;
    }
    std::size_t i = 0;
    for (long c : expected) {
        if (id.rhs[i++].coefficient != c) {
            return false;
        }
    }
    return true;
}

Outcome ac1()
{
    Outcome o;
    const auto t = Clock::now();
    const auto r = verify_identity("hirschhorn_E1", 300);
    const double s = seconds_since(t);
    o.require(r.holds, describe(r));
    o.require(s < ac1_limit_s, "took " + std::to_string(s) + " s");
    o.detail = o.detail.empty() ? "order 300, " + std::to_string(r.instances_checked) + " coefficients" : o.detail;
    return o;
}

Outcome ac2()
{
    Outcome o;
    for (const char* name : {"bb_c5n4", "delta2_5n4"}) {
        const auto r = verify_identity(name, 250);
        o.require(r.holds, describe(r));
        o.require(has_coefficients(linear_identity(name), {41, 860, 6800, 24000, 32000}),
                  std::string(name) + " coefficients differ from (41, 860, 6800, 24000, 32000)");
    }
    if (o.pass) {
        o.detail = "both hold to order 250 with (41, 860, 6800, 24000, 32000)";
    }
    return o;
}

Outcome ac3()
{
    Outcome o;
    const auto b = verify_identity("cpp_b5n4", 250);
    const auto a = verify_identity("cubic_a5n2", 250);
    o.require(b.holds, describe(b));
    o.require(a.holds, describe(a));
    o.require(has_coefficients(linear_identity("cpp_b5n4"), {35, 700, 6875, 31250, 78125}), "cpp_b5n4 coefficients");
    o.require(has_coefficients(linear_identity("cubic_a5n2"), {3, 25, 125}), "cubic_a5n2 coefficients");
    if (o.pass) {
        o.detail = "(35, 700, 6875, 31250, 78125) and (3, 25, 125) to order 250";
    }
    return o;
}

Outcome ac4()
{
    Outcome o;
    o.require(verify_rec_identities(4, 4).all_hold(), "recurrence identities");
    const KLaurentPoly k = b5n4_K_form();
    o.require(k == nine_term_K_form(printed_b5n4_K_coefficients), "K-form differs from the nine-term polynomial");
    o.require(k == u_form(b5n4_u_coefficients), "K-form differs from the u-form");
    const auto combo = verify_identity("b5n4_combination", 0);
    o.require(combo.holds, describe(combo));
    o.require(combo.notes.find("x^6 y^-3: printed -801*q^4, derived -80*q^4") != std::string::npos,
              "801 -> 80 not documented");
    o.require(combo.notes.find("x^-6 y^-1: printed 135*q^6, derived 0") != std::string::npos
                  && combo.notes.find("x^-6 y^-2: printed 0, derived 135*q^6") != std::string::npos,
              "y^-1 -> y^-2 not documented");
    if (o.pass) {
        o.detail = "exact Laurent equalities; audit documents 801 -> 80 and y^-1 -> y^-2";
    }
    return o;
}

Outcome ac5()
{
    Outcome o;
    const auto t = Clock::now();
    const auto thm = verify_congruence(congruence_family("thm_mod25"), 1500);
    const auto d62 = verify_congruence(congruence_family("delta62_mod25"), 700);
    const double s = seconds_since(t);
    o.require(thm.holds, describe(thm));
    o.require(thm.instances_checked == 12, "thm_mod25 checked " + std::to_string(thm.instances_checked) + " instances");
    o.require(d62.holds, describe(d62));
    o.require(d62.instances_checked >= 5, "delta62_mod25 checked " + std::to_string(d62.instances_checked));
    o.require(s < ac5_limit_s, "took " + std::to_string(s) + " s");
    if (o.pass) {
        o.detail = "12 and " + std::to_string(d62.instances_checked) + " instances";
    }
    return o;
}

Outcome ac6()
{
    Outcome o;
    const auto d = reduction_chain_details(600);
    for (std::size_t i = 0; i < 5; ++i) {
        o.require(d.steps[i], "step " + std::to_string(i + 1) + " fails");
    }
    o.require(d.literal_5n4 && d.literal_5n4->first == 9 && sgn(d.literal_5n4->second) != 0,
              "integer-level 'no terms' counterexample at q^9 not found");
    const auto r = reduction_chain_mod25(600);
    o.require(r.holds && r.notes.find("integer-level reading of 'no q^{5n+4} terms' fails") != std::string::npos,
              "report does not record the integer-level failure");
    if (o.pass) {
        o.detail = "five steps hold mod 25; integer coefficient " + d.literal_5n4->second.get_str() + " at q^9";
    }
    return o;
}

Outcome ac7()
{
    Outcome o;
    const std::pair<const char*, int> jobs[] = {{"cpp_mod5", 400},     {"ctilde_mod25", 600}, {"delta2_25n14", 600},
                                                {"delta2_25n24", 600}, {"c_25n24_mod5", 600},  {"delta12_25n24_mod5", 600}};
    int count = 0;
    for (const auto& [name, order] : jobs) {
        const auto r = verify_congruence(congruence_family(name), order);
        o.require(r.holds, describe(r));
        o.require(r.instances_checked >= 3, std::string(name) + " has fewer than 3 instances");
        ++count;
    }
    for (int which : {1, 2}) {
        for (int alpha : {1, 2}) {
            const auto r = verify_congruence(chan_family(which, alpha), 700);
            o.require(r.holds, describe(r));
            o.require(r.instances_checked >= 3, r.name + " has fewer than 3 instances");
            ++count;
        }
    }
    if (o.pass) {
        o.detail = std::to_string(count) + " families hold";
    }
    return o;
}

// Compact re-runs of the property suites with fixed seeds.
Outcome ac8()
{
    Outcome o;
    std::mt19937_64 rng(8);
    auto rand_series = [&](int n, long bound) { return TruncatedSeries(oracle::random_vec(rng, n, bound), n); };
    auto rand_unit = [&](int n) {
        auto v = oracle::random_vec(rng, n, 20);
        v[0] = 1;
        return TruncatedSeries(std::move(v), n);
    };
    const int cases = min_property_cases;

    bool ring = true, inv = true, reasm = true, shift = true, frob = true, psi = true, dual = true;
    for (int i = 0; i < cases; ++i) {
        const int n = 1 + static_cast<int>(rng() % 60);
        const auto a = rand_series(n, 50), b = rand_series(n, 50), c = rand_series(n, 50);
        ring = ring && a * b == b * a && (a * b) * c == a * (b * c) && a * (b + c) == a * b + a * c;
        const auto u = rand_unit(n);
        inv = inv && u * invert(u) == TruncatedSeries::one(n);

        const int moduli[] = {2, 3, 5, 125};
        const int m = moduli[i % 4];
        const auto s = rand_series(m + static_cast<int>(rng() % 300), 100);
        reasm = reasm && reassemble(full_dissection(s, m), s.order()) == s;

        const int mm = 2 + static_cast<int>(rng() % 5), r = static_cast<int>(rng() % static_cast<unsigned>(mm));
        const int len = 2 * mm + static_cast<int>(rng() % 100);
        const auto f = rand_series((len + mm - 1) / mm, 20), g = rand_series(len, 20);
        const auto lhs = extract_progression(mul(substitute_power(f, mm, len), g), ProgressionSpec(mm, r));
        const auto rhs = mul(f, extract_progression(g, ProgressionSpec(mm, r)));
        shift = shift && equal_to_order(lhs, rhs, std::min(lhs.order(), rhs.order())).equal;

        const int j = 1 + static_cast<int>(rng() % 12), k = 1 + static_cast<int>(rng() % 200);
        frob = frob && congruent_to_order(pow(euler_product(j, k), 5), euler_product(5 * j, k), Coefficient(5), k).equal;
        psi = psi && psi_series(k) == psi_quotient(k);
        dual = dual && euler_product_naive(1 + i % 20, k) == euler_product_pentagonal(1 + i % 20, k);
    }
    o.require(ring, "ring laws");
    o.require(inv, "inversion round trip");
    o.require(reasm, "dissection reassembly");
    o.require(shift, "multiplicative shift rule");
    o.require(frob, "Frobenius mod 5");
    o.require(psi, "psi dual representation");
    o.require(dual, "E_j dual constructions");

    // Mutation of each registry constant.
    int mutations = 0;
    for (const auto& id : linear_identities()) {
        for (std::size_t i = 0; i < id.rhs.size(); ++i) {
            LinearEtaIdentity m = id;
            m.rhs[i].coefficient += 1;
            const auto r = verify_linear_identity(m, 40);
            o.require(!r.holds && r.first_discrepancy->exponent == id.rhs[i].quotient.q_shift(),
                      id.name + " term " + std::to_string(i) + " mutation");
            ++mutations;
        }
    }
    for (std::size_t i = 0; i < 9; ++i) {
        auto v = hirschhorn_vector();
        v[i].coefficient += 1;
        const auto r = verify_hirschhorn(v, 60);
        o.require(!r.holds && r.first_discrepancy->exponent == v[i].q_power, "hirschhorn term mutation");
        auto kc = printed_b5n4_K_coefficients;
        kc[i] += 1;
        const auto kr = verify_b5n4_K_form(kc, b5n4_u_coefficients);
        o.require(!kr.holds && kr.first_discrepancy->exponent == 4 - static_cast<long>(i), "K-form mutation");
        mutations += 2;
    }
    for (const auto& f : congruence_families()) {
        CongruenceFamily m = f;
        m.modulus = f.modulus == 5 ? 7 : 125;
        const int order = std::max(1500, m.progression.modulus() * (m.skip + 4) + m.progression.residue());
        if (f.parameter.rfind("alpha = 0", 0) == 0) {
            continue;
        }
        const auto r = verify_congruence(m, order);
        o.require(!r.holds && r.first_discrepancy->exponent % m.progression.modulus() == m.progression.residue(),
                  f.name + " modulus mutation");
        ++mutations;
    }
    if (o.pass) {
        o.detail = "7 property suites x " + std::to_string(cases) + " cases; " + std::to_string(mutations)
                   + " mutations all flip";
    }
    return o;
}

Outcome ac9()
{
    Outcome o;
    const auto t = Clock::now();
    const char* argv[] = {"qdissect", "verify", "--all", "--order", "300", "--format", "json"};
    std::ostringstream out, err;
    const int code = cli::run(7, argv, out, err);
    const double s = seconds_since(t);
    o.require(code == 0, "exit code " + std::to_string(code) + " " + err.str());
    o.require(s < ac9_limit_s, "took " + std::to_string(s) + " s");
    const auto reports = reports_from_json(out.str());
    o.require(reports.size() >= 20, "only " + std::to_string(reports.size()) + " reports");
    if (o.pass) {
        std::ostringstream d;
        d << reports.size() << " entries, exit 0, " << std::fixed << std::setprecision(2) << s << " s";
        o.detail = d.str();
    }
    return o;
}

} // namespace

int main()
{
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"hirschhorn_E1 at order 300 within 30 s", ac1},
        {"bb_c5n4 and delta2_5n4 at order 250", ac2},
        {"cpp_b5n4 and cubic_a5n2 at order 250", ac3},
        {"symbolic suite and display audit", ac4},
        {"thm_mod25 at 1500 and delta62_mod25 at 700 within 5 min", ac5},
        {"reduction_chain_mod25 at order 600", ac6},
        {"congruence families", ac7},
        {"property and mutation suites", ac8},
        {"verify --all --order 300 within 10 min", ac9},
    };
    int failed = 0;
    int index = 1;
    for (const auto& [title, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        std::cout << "AC" << index++ << ' ' << (o.pass ? "PASS" : "FAIL") << "  " << title << "  [" << o.detail << "]\n"
                  << std::flush;
        failed += o.pass ? 0 : 1;
    }
    std::cout << (failed == 0 ? "all criteria pass\n" : std::to_string(failed) + " criteria fail\n");
    return failed == 0 ? 0 : 1;
}
