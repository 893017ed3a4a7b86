#include <gtest/gtest.h>

#include <set>

#include <qdissect/registry.hpp>

#include "oracles.hpp"

using namespace qdissect;

TEST(SeriesId, ParseAndPrint)
{
    EXPECT_EQ(SeriesId::parse("delta(62)"), (SeriesId{SeriesKind::delta, 62}));
    EXPECT_EQ(SeriesId::parse("c_tilde").to_string(), "c_tilde");
    EXPECT_THROW(SeriesId::parse("delta(0)"), unknown_name_error);
    EXPECT_THROW(SeriesId::parse("delta()"), unknown_name_error);
    EXPECT_THROW(SeriesId::parse("e"), unknown_name_error);
}

TEST(SeriesId, NamedSeriesMatchOracles)
{
    const int n = 200;
    EXPECT_EQ(named_series({SeriesKind::p}, n), TruncatedSeries(oracle::partitions(n), n));
    EXPECT_EQ(named_series({SeriesKind::a}, n), TruncatedSeries(oracle::cubic(n), n));
    EXPECT_EQ(named_series({SeriesKind::b}, n), TruncatedSeries(oracle::cubic_pairs(n), n));
    EXPECT_EQ(named_series({SeriesKind::delta, 62}, n),
              TruncatedSeries(oracle::eta({{2, 1}, {125, 1}, {1, -3}, {250, -1}}, n), n));
}

TEST(Registry, InventoryAndManifest)
{
    const auto list = list_identities();
    EXPECT_GE(list.size(), 20u);
    std::set<std::string> names;
    for (const auto& i : list) {
        EXPECT_FALSE(i.anchor.empty()) << i.name;
        EXPECT_TRUE(names.insert(i.name).second) << "duplicate " << i.name;
    }
    for (const auto& d : display_manifest()) {
        EXPECT_TRUE(names.count(d.entry)) << d.display << " -> " << d.entry;
    }
    EXPECT_THROW(verify_identity("bogus", 10), unknown_name_error);
}

TEST(Registry, EveryEntryHoldsAtItsListedOrder)
{
    for (const auto& r : run_registry(all_entry_names(), std::nullopt, 4)) {
        EXPECT_TRUE(r.holds) << r.name << " first discrepancy at " << r.first_discrepancy->exponent;
        EXPECT_EQ(r.holds, !r.first_discrepancy.has_value());
        EXPECT_GT(r.instances_checked, 0) << r.name;
    }
}

TEST(Registry, ConcurrentRunsAreSortedAndMatchSerial)
{
    const auto names = all_entry_names();
    auto a = run_registry(names, 120, 1);
    auto b = run_registry(names, 120, 8);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i].elapsed_ms = b[i].elapsed_ms = 0;
        EXPECT_EQ(a[i], b[i]);
        if (i > 0) {
            EXPECT_LT(a[i - 1].name, a[i].name);
        }
    }
}

TEST(Registry, EffectiveOrderPolicy)
{
    EXPECT_EQ(effective_order(find_entry("thm_mod25"), 300), 1500);
    EXPECT_EQ(effective_order(find_entry("thm_mod25"), 2000), 2000);
    EXPECT_EQ(effective_order(find_entry("bb_c5n4"), 300), 300);
    EXPECT_EQ(effective_order(find_entry("bb_c5n4"), std::nullopt), 250);
}

TEST(Congruence, InstanceCounts)
{
    EXPECT_EQ(verify_congruence(congruence_family("thm_mod25"), 1500).instances_checked, 12);
    EXPECT_GE(verify_congruence(congruence_family("delta62_mod25"), 700).instances_checked, 5);
    EXPECT_THROW(verify_congruence(congruence_family("thm_mod25"), 300), insufficient_order_error);
}

TEST(Congruence, ChanFamilies)
{
    for (int which : {1, 2}) {
        for (int alpha : {1, 2}) {
            const auto r = verify_congruence(chan_family(which, alpha), 700);
            EXPECT_TRUE(r.holds) << r.name;
            EXPECT_GE(r.instances_checked, 3);
        }
    }
    const auto f = chan_family(2, 0);
    EXPECT_EQ(f.progression, ProgressionSpec(5, 0));
    EXPECT_EQ(f.skip, 1);
    EXPECT_FALSE(verify_congruence(chan_family(1, 0), 100).holds);
}

TEST(Congruence, RejectsTinyModulus)
{
    auto f = congruence_family("cpp_mod5");
    f.modulus = 1;
    EXPECT_THROW(verify_congruence(f, 400), invalid_modulus_error);
}

TEST(ReductionChain, DetailsAndLiteralReading)
{
    EXPECT_THROW(reduction_chain_details(599), insufficient_order_error);
    const auto d = reduction_chain_details(600);
    EXPECT_TRUE(d.all_hold());
    ASSERT_TRUE(d.literal_5n4.has_value());
    EXPECT_EQ(d.literal_5n4->first, 9);
    EXPECT_EQ(d.literal_5n4->second, 50);
    const auto r = reduction_chain_mod25(600);
    EXPECT_TRUE(r.holds);
    EXPECT_NE(r.notes.find("fails: coefficient 50 at q^9"), std::string::npos);
}

TEST(Symbolic, ReportsHold)
{
    EXPECT_TRUE(verify_identity("p_rec_identities", 0).holds);
    const auto combo = verify_identity("b5n4_combination", 0);
    EXPECT_TRUE(combo.holds);
    EXPECT_NE(combo.notes.find("printed 801*q^4, derived 80*q^4"), std::string::npos);
    EXPECT_TRUE(verify_identity("b5n4_symbolic", 0).holds);
}

TEST(Delta2, PrintedExponentsFail)
{
    const auto r = verify_linear_identity(delta2_5n4_as_printed(), 100);
    ASSERT_FALSE(r.holds);
    EXPECT_EQ(r.first_discrepancy->exponent, 4);
}

TEST(Gf5n4, VerifiedDenominator)
{
    const auto r = verify_identity("gf5n4_mod5_chain", 250);
    EXPECT_TRUE(r.holds);
    EXPECT_NE(r.notes.find("verified form: denominator E5^2"), std::string::npos);
}

// ---------------------------------------------------------------------------
// Mutation: perturbing any single constant must flip the report, and the
// first discrepancy must sit where the perturbed term starts.

TEST(Mutation, LinearIdentityCoefficients)
{
    for (const auto& id : linear_identities()) {
        for (std::size_t i = 0; i < id.rhs.size(); ++i) {
            LinearEtaIdentity m = id;
            m.rhs[i].coefficient += 1;
            const auto r = verify_linear_identity(m, 60);
            ASSERT_FALSE(r.holds) << id.name << " term " << i;
            EXPECT_EQ(r.first_discrepancy->exponent, id.rhs[i].quotient.q_shift()) << id.name << " term " << i;
        }
    }
}

TEST(Mutation, LinearIdentityShift)
{
    LinearEtaIdentity m = linear_identity("cubic_a5n2");
    m.rhs[1].quotient = EtaQuotientSpec(m.rhs[1].quotient.factors(), 2);
    const auto r = verify_linear_identity(m, 60);
    ASSERT_FALSE(r.holds);
    EXPECT_EQ(r.first_discrepancy->exponent, 1);
}

TEST(Mutation, HirschhornTerms)
{
    for (std::size_t i = 0; i < 9; ++i) {
        auto v = hirschhorn_vector();
        v[i].coefficient -= 2;
        const auto r = verify_hirschhorn(v, 120);
        ASSERT_FALSE(r.holds) << i;
        EXPECT_EQ(r.first_discrepancy->exponent, v[i].q_power);
    }
}

TEST(Mutation, KFormCoefficients)
{
    for (std::size_t i = 0; i < 9; ++i) {
        auto k = printed_b5n4_K_coefficients;
        k[i] += 5;
        const auto r = verify_b5n4_K_form(k, b5n4_u_coefficients);
        ASSERT_FALSE(r.holds) << i;
        EXPECT_EQ(r.first_discrepancy->exponent, 4 - static_cast<long>(i));
    }
    for (std::size_t i = 0; i < 5; ++i) {
        auto u = b5n4_u_coefficients;
        u[i] -= 1;
        EXPECT_FALSE(verify_b5n4_K_form(printed_b5n4_K_coefficients, u).holds) << i;
    }
}

TEST(Mutation, CongruenceModulus)
{
    auto f = congruence_family("cpp_mod5");
    f.modulus = 7;
    const auto r = verify_congruence(f, 400);
    ASSERT_FALSE(r.holds);
    const auto b = oracle::cubic_pairs(400);
    long first = -1;
    for (int n = 4; n < 400; n += 5) {
        if (b[static_cast<std::size_t>(n)] % 7 != 0) {
            first = n;
            break;
        }
    }
    EXPECT_EQ(r.first_discrepancy->exponent, first);

    auto g = congruence_family("thm_mod25");
    g.modulus = 125;
    EXPECT_FALSE(verify_congruence(g, 1500).holds);
}

TEST(Mutation, CongruenceProgression)
{
    auto f = congruence_family("ramanujan_p5n4");
    f.progression = ProgressionSpec(5, 3);
    const auto r = verify_congruence(f, 400);
    ASSERT_FALSE(r.holds);
    EXPECT_EQ(r.first_discrepancy->exponent, 3);
}
