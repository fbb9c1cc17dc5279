#include <catch2/catch.hpp>

#include "poolres/oracle.hpp"
#include "poolres/pebbling.hpp"
#include "poolres/proof.hpp"

using namespace poolres;

TEST_CASE("pebbling formula of small pyramids") {
    CnfFormula f = gen_peb(pyramid(1));
    REQUIRE(f.clauses.size() == 4);  // 2 source units, 1 implication, 1 sink unit
    CHECK(f.clauses[0].size() == 1);
    CHECK(f.clauses[1].size() == 1);
    CHECK(f.clauses[2].size() == 3);
    CHECK(f.clauses[3] == Clause::from_lits({-(Lit)(pyramid(1).sink() + 1)}));

    // single-vertex graph: x_t and its negation
    CnfFormula g = gen_peb(pyramid(0));
    REQUIRE(g.clauses.size() == 2);
    CHECK(g.clauses[0] == Clause::from_lits({1}));
    CHECK(g.clauses[1] == Clause::from_lits({-1}));

    CHECK_FALSE(brute_force_unsat(gen_peb(pyramid(2))).sat);
}

TEST_CASE("xor block translations have the right cardinalities and parities") {
    for (int k = 1; k <= 5; ++k) {
        XorVars xv(3, k);
        auto pos = xorify_pos(xv, 1);
        auto negs = xorify_neg(xv, 1);
        CHECK(pos.size() == (size_t)(1 << (k - 1)));
        CHECK(negs.size() == (size_t)(1 << (k - 1)));
        for (auto& c : pos) {
            int negcount = 0;
            for (Lit l : c.lits())
                if (!positive(l)) ++negcount;
            CHECK(negcount % 2 == 0);
        }
        for (auto& c : negs) {
            int negcount = 0;
            for (Lit l : c.lits())
                if (!positive(l)) ++negcount;
            CHECK(negcount % 2 == 1);
        }
    }
    XorVars xv1(2, 1);
    CHECK(xorify_pos(xv1, 0) == std::vector<Clause>{Clause::from_lits({1})});
    CHECK(xorify_neg(xv1, 0) == std::vector<Clause>{Clause::from_lits({-1})});

    XorVars xv2(2, 2);
    CHECK(xorify_pos(xv2, 0) ==
          std::vector<Clause>{Clause::from_lits({1, 2}), Clause::from_lits({-1, -2})});
    CHECK(xorify_neg(xv2, 0) ==
          std::vector<Clause>{Clause::from_lits({-1, 2}), Clause::from_lits({1, -2})});
}

TEST_CASE("clause lifting multiplies by two to the (k-1) per literal") {
    XorVars xv(3, 2);
    auto lifted = xorify_clause(xv, {-1, -2, 3});  // ternary
    CHECK(lifted.size() == 8);
    for (auto& c : lifted) CHECK(c.size() == 6);

    // k = 1 is renaming
    XorVars xv1(3, 1);
    auto same = xorify_clause(xv1, {-1, 3});
    REQUIRE(same.size() == 1);
    CHECK(same[0] == Clause::from_lits({-1, 3}));
}

TEST_CASE("lifting is semantically the parity substitution") {
    // assignment satisfies all of c^{k xor} iff the induced parities satisfy c
    XorVars xv(3, 2);  // 6 xor variables
    std::vector<Lit> c = {-1, 2, -3};
    auto lifted = xorify_clause(xv, c);
    for (uint32_t a = 0; a < (1u << 6); ++a) {
        bool all_sat = true;
        for (auto& lc : lifted) {
            bool sat = false;
            for (Lit l : lc.lits())
                if (((a >> (var_of(l) - 1)) & 1) == (positive(l) ? 1u : 0u)) sat = true;
            if (!sat) all_sat = false;
        }
        bool parity_sat = false;
        for (Lit l : c) {
            int u = (int)var_of(l) - 1;
            int par = ((a >> (2 * u)) & 1) ^ ((a >> (2 * u + 1)) & 1);
            if ((par == 1) == positive(l)) parity_sat = true;
        }
        CHECK(all_sat == parity_sat);
    }
}

TEST_CASE("lifted pebbling formulas have the computed clause counts") {
    PointedDag g = pyramid(1);
    CnfFormula f = gen_peb_xor(g, 2);
    CHECK(f.clauses.size() == 14);  // 2+2 sources, 8 implication, 2 sink
    CHECK(f.num_vars == 6);

    GuardMap rho = make_guard_map(g, 2, 7);
    CnfFormula gg = gen_gpeb(g, 2, rho);
    // the eight full-width implication lifts admit no guard on a
    // three-vertex graph and appear unguarded
    CHECK(gg.clauses.size() == 2 * 6 + 8);
    CHECK_FALSE(brute_force_unsat(gg).sat);

    // guarded pairs resolve back to the lifted clause
    for (size_t i = 0; i < f.clauses.size(); ++i) {
        auto [pos, negc] = gpeb_clause_indices(rho, i);
        if (rho.guard[i] == 0) {
            CHECK(gg.clauses[pos] == f.clauses[i]);
            continue;
        }
        Lit guard = (Lit)rho.guard[i];
        CHECK(gg.clauses[pos].contains(guard));
        CHECK(gg.clauses[negc].contains(-guard));
        CHECK(resolve_any(gg.clauses[pos], gg.clauses[negc], var_of(guard)) == f.clauses[i]);
    }

    // on a larger graph every clause is guarded
    PointedDag g2 = pyramid(2);
    GuardMap rho2 = make_guard_map(g2, 2, 7);
    CnfFormula f2 = gen_peb_xor(g2, 2);
    CnfFormula gg2 = gen_gpeb(g2, 2, rho2);
    CHECK(gg2.clauses.size() == 2 * f2.clauses.size());
}

TEST_CASE("guard maps avoid the guarded clause and are deterministic") {
    for (int h : {1, 2, 3, 4})
        for (int k : {1, 2, 3}) {
            if (h >= 3 && k >= 3) continue;
            PointedDag g = pyramid(h);
            CnfFormula f = gen_peb_xor(g, k);
            GuardMap rho = make_guard_map(g, k, 13);
            REQUIRE(rho.guard.size() == f.clauses.size());
            for (size_t i = 0; i < f.clauses.size(); ++i)
                if (rho.guard[i] != 0)
                    CHECK_FALSE(f.clauses[i].contains_var(rho.guard[i]));
                else
                    CHECK(f.clauses[i].size() == f.num_vars);  // no guard possible
            GuardMap again = make_guard_map(g, k, 13);
            CHECK(rho.guard == again.guard);
        }
    // a single-vertex k=1 instance has no guard candidates
    CHECK_THROWS_AS(make_guard_map(pyramid(0), 1, 1), domain_error);
}

TEST_CASE("lifting with k=1 and guarding produces the guarded pebbling formula") {
    PointedDag g = pyramid(2);
    GuardMap rho = make_guard_map(g, 1, 5);
    CnfFormula guarded = gen_gpeb(g, 1, rho);
    CnfFormula plain = gen_peb(g);
    REQUIRE(guarded.clauses.size() == 2 * plain.clauses.size());
    for (size_t i = 0; i < plain.clauses.size(); ++i)
        CHECK(resolve_any(guarded.clauses[2 * i], guarded.clauses[2 * i + 1],
                          rho.guard[i]) == plain.clauses[i]);
}
