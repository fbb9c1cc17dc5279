#include <catch2/catch.hpp>

#include "poolres/families.hpp"
#include "poolres/oracle.hpp"
#include "poolres/proof.hpp"

using namespace poolres;

static int64_t choose3(int n) { return (int64_t)n * (n - 1) * (n - 2) / 6; }

TEST_CASE("GT_2 is the pair of unit clauses") {
    CnfFormula f = gen_gt(2);
    CHECK(f.num_vars == 1);
    REQUIRE(f.clauses.size() == 2);
    CHECK(f.clauses[0] == Clause::from_lits({-1}));
    CHECK(f.clauses[1] == Clause::from_lits({1}));
}

TEST_CASE("GT_n clause counts") {
    CHECK(gen_gt(3).num_vars == 3);
    CHECK(gen_gt(3).clauses.size() == 5);
    CHECK(gen_gt(4).num_vars == 6);
    CHECK(gen_gt(4).clauses.size() == 12);
    for (int n = 4; n <= 12; ++n)
        CHECK(gen_gt(n).clauses.size() == (size_t)(n + 2 * choose3(n)));
    CHECK_THROWS_AS(gen_gt(1), domain_error);
}

TEST_CASE("guard functions are rotation-invariant and valid across seeds") {
    for (int n : {4, 6, 9, 12}) {
        for (uint64_t seed = 0; seed < 100; ++seed) {
            GuardFunctions g = make_guards(n, seed);
            for (int a = 0; a < n && a < 5; ++a)
                for (int b = 0; b < n; ++b)
                    for (int c = 0; c < n; ++c) {
                        if (a == b || b == c || a == c) continue;
                        auto rs = g.rs(a, b, c);
                        CHECK(rs == g.rs(b, c, a));
                        CHECK(rs == g.rs(c, a, b));
                        CHECK(rs.first != rs.second);
                        bool r_in = rs.first == a || rs.first == b || rs.first == c;
                        bool s_in = rs.second == a || rs.second == b || rs.second == c;
                        CHECK_FALSE((r_in && s_in));
                    }
        }
    }
}

TEST_CASE("guard construction is deterministic in (n, seed)") {
    GuardFunctions a = make_guards(8, 17), b = make_guards(8, 17);
    CHECK(a.orbits() == b.orbits());
    GuardFunctions c = make_guards(8, 18);
    CHECK(a.orbits() != c.orbits());
}

TEST_CASE("GGT_n has n + 4*C(n,3) clauses") {
    GuardFunctions g = make_guards(4, 1);
    CnfFormula f = gen_ggt(4, g);
    CHECK(f.clauses.size() == 20);
    for (int n = 4; n <= 12; ++n)
        CHECK(gen_ggt(n, make_guards(n, 3)).clauses.size() == (size_t)(n + 4 * choose3(n)));
    CHECK_THROWS_AS(gen_ggt(3, g), domain_error);
}

TEST_CASE("each guarded pair resolves on its guard to the transitivity clause") {
    int n = 5;
    OrderVars ov(n);
    GuardFunctions g = make_guards(n, 7);
    CnfFormula f = gen_ggt(n, g);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c)
                for (auto [i, j, k] : {std::array<int, 3>{a, b, c}, std::array<int, 3>{a, c, b}}) {
                    auto [pos, negc] = ggt_pair_indices(n, i, j, k);
                    Lit gl = g.guard_lit(ov, i, j, k);
                    CHECK(f.clauses[pos].contains(gl));
                    CHECK(f.clauses[negc].contains(-gl));
                    Clause t = resolve_any(f.clauses[pos], f.clauses[negc], var_of(gl));
                    CHECK(t == transitivity_clause(ov, i, j, k));
                }
}

TEST_CASE("collapsing every guarded pair recovers GT_n exactly") {
    int n = 6;
    OrderVars ov(n);
    GuardFunctions g = make_guards(n, 23);
    CnfFormula ggt = gen_ggt(n, g);
    CnfFormula gt = gen_gt(n);
    std::vector<Clause> collapsed;
    for (int i = 0; i < n; ++i) collapsed.push_back(ggt.clauses[i]);
    for (size_t idx = n; idx < ggt.clauses.size(); idx += 2) {
        Lit guard = 0;
        for (Lit l : ggt.clauses[idx].lits())
            if (ggt.clauses[idx + 1].contains(-l)) guard = l;
        REQUIRE(guard != 0);
        collapsed.push_back(resolve_any(ggt.clauses[idx], ggt.clauses[idx + 1], var_of(guard)));
    }
    CHECK(collapsed == gt.clauses);
}

TEST_CASE("oracle: tiny families are unsatisfiable") {
    CnfFormula f;
    f.num_vars = 1;
    f.add_clause(Clause::from_lits({1}));
    f.add_clause(Clause::from_lits({-1}));
    CHECK_FALSE(brute_force_unsat(f).sat);

    for (int n : {2, 3, 4, 5}) CHECK_FALSE(brute_force_unsat(gen_gt(n)).sat);
    for (uint64_t seed = 0; seed < 20; ++seed)
        CHECK_FALSE(brute_force_unsat(gen_ggt(4, make_guards(4, seed))).sat);
    CHECK_FALSE(brute_force_unsat(gen_ggt(5, make_guards(5, 3))).sat);
}

TEST_CASE("oracle refuses oversized formulas explicitly") {
    CnfFormula f;
    f.num_vars = 27;
    CHECK_THROWS_AS(brute_force_unsat(f), domain_error);
}

TEST_CASE("oracle finds witnesses for satisfiable formulas") {
    CnfFormula f;
    f.num_vars = 3;
    f.add_clause(Clause::from_lits({1, 2}));
    f.add_clause(Clause::from_lits({-1, 3}));
    auto r = brute_force_unsat(f);
    REQUIRE(r.sat);
    bool v1 = r.witness & 1, v2 = r.witness & 2, v3 = r.witness & 4;
    CHECK((v1 || v2));
    CHECK((!v1 || v3));
}
