#include <catch2/catch.hpp>

#include "poolres/gpeb_prover.hpp"
#include "poolres/oracle.hpp"

using namespace poolres;

TEST_CASE("divergence vertex on an explicit gadget") {
    // w(6) has preds f(4) and c(5); f has preds d(2) and e(3); d,e sources;
    // c has preds 0,1. Backward paths from w to {d, e, 0} force the pair
    // {d, e} through f.
    PointedDag g = PointedDag::from_edges(
        7, {{2, 4}, {3, 4}, {0, 5}, {1, 5}, {4, 6}, {5, 6}}, 6);
    DivergenceResult r = divergence_vertex(g, 6, {2, 3, 0});
    CHECK(r.f == 4);
    CHECK(((r.matched[0] == 2 && r.matched[1] == 3) ||
           (r.matched[0] == 3 && r.matched[1] == 2)));
    // post-hoc predicate: the matched targets are independent ancestors of f,
    // and f with the third target are independent ancestors of w
    CHECK(independent_ancestors(g, r.matched[0], r.matched[1], r.f));
    CHECK(independent_ancestors(g, r.f, 0, 6));
}

TEST_CASE("divergence vertex on a pyramid is deterministic") {
    PointedDag g = pyramid(3);
    DivergenceResult r1 = divergence_vertex(g, g.sink(), {0, 3, 1});
    DivergenceResult r2 = divergence_vertex(g, g.sink(), {0, 3, 1});
    CHECK(r1.f == r2.f);
    CHECK(r1.matched == r2.matched);
}

static void check_gpeb_instance(const PointedDag& g, int k, uint64_t seed,
                                bool oracle_check) {
    GuardMap rho = make_guard_map(g, k, seed);
    GpebRunLog log;
    Proof p = refute_gpeb(g, k, rho, &log);
    CnfFormula f = gen_gpeb(g, k, rho);
    INFO("n=" << g.n() << " k=" << k << " seed=" << seed);
    CHECK(check_soundness(p, f).ok);
    CHECK(check_regular(p, f).ok);
    CHECK(check_regrtl(p, f).ok);
    CHECK(check_regrti(p, f).ok);
    CHECK(clause_of_root(p, f).empty());
    CHECK(log.max_new_leaves_per_expansion < ((size_t)1 << (4 * k)));
    if (oracle_check && f.num_vars <= kOracleVarCap) {
        CHECK_FALSE(brute_force_unsat(f).sat);
        for_each_clause(p, f, [&](uint32_t, const Clause& c) { REQUIRE(entails(f, c)); });
    }
}

TEST_CASE("guarded lifted pebbling refutations: single-edge pyramid") {
    for (uint64_t seed = 0; seed < 5; ++seed) check_gpeb_instance(pyramid(1), 1, seed, true);
    for (uint64_t seed = 0; seed < 3; ++seed) check_gpeb_instance(pyramid(1), 2, seed, true);
}

TEST_CASE("guarded lifted pebbling refutations: medium pyramids") {
    for (uint64_t seed = 0; seed < 3; ++seed) check_gpeb_instance(pyramid(2), 1, seed, true);
    check_gpeb_instance(pyramid(2), 2, 1, false);
    check_gpeb_instance(pyramid(3), 1, 1, true);
}

TEST_CASE("guarded lifted pebbling refutation on a non-pyramid dag") {
    PointedDag g = PointedDag::from_edges(
        7, {{2, 4}, {3, 4}, {0, 5}, {1, 5}, {4, 6}, {5, 6}}, 6);
    for (uint64_t seed = 0; seed < 3; ++seed) check_gpeb_instance(g, 1, seed, true);
}
