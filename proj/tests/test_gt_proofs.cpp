#include <catch2/catch.hpp>

#include <random>

#include "poolres/checkers.hpp"
#include "poolres/gt_proofs.hpp"
#include "poolres/oracle.hpp"

using namespace poolres;

TEST_CASE("GT_2 refutation is the single resolution") {
    GtDerivation d = build_gt_refutation(2);
    CHECK(d.dag.nodes[d.dag.root].clause.empty());
    size_t steps = 0;
    for (auto& n : d.dag.nodes)
        if (n.kind == DagNode::Kind::Step) ++steps;
    CHECK(steps == 1);
}

TEST_CASE("GT refutations are regular, empty-clause, and entailed") {
    for (int n = 2; n <= 6; ++n) {
        GtDerivation d = build_gt_refutation(n);
        OrderVars ov(n);
        CHECK(d.dag.nodes[d.dag.root].clause.empty());
        CHECK(dag_is_regular(d.dag, ov.count()));
        if (n <= 5) {
            CnfFormula gt = gen_gt(n);
            for (auto& node : d.dag.nodes) CHECK(entails(gt, node.clause));
        }
    }
}

TEST_CASE("GT refutation uses every transitivity orbit exactly once") {
    for (int n : {4, 5, 6}) {
        GtDerivation d = build_gt_refutation(n);
        std::set<std::array<int, 3>> used;
        for (auto& t : d.trans_axioms) used.insert(orbit_rep(t.i, t.j, t.k));
        CHECK(used.size() == d.trans_axioms.size());
        CHECK(used.size() == (size_t)(n * (n - 1) * (n - 2) / 3));  // 2*C(n,3)
    }
}

TEST_CASE("GT refutation size grows cubically, width linearly") {
    std::vector<size_t> sizes;
    for (int n : {10, 20, 40}) {
        GtDerivation d = build_gt_refutation(n);
        sizes.push_back(d.dag.size());
        size_t width = 0;
        for (auto& node : d.dag.nodes) width = std::max(width, node.clause.size());
        CHECK(width <= (size_t)n);
    }
    // doubling n multiplies the size by at most ~8
    CHECK(sizes[1] <= 9 * sizes[0]);
    CHECK(sizes[2] <= 9 * sizes[1]);
}

static BipartitePartialOrder random_bpo(int n, std::mt19937_64& rng) {
    int m = 1 + (int)(rng() % (n - 1));
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    PairSet pairs;
    for (int a = 0; a < m; ++a)
        for (int b = m; b < n; ++b)
            if (rng() % 3 == 0) pairs.emplace(perm[a], perm[b]);
    return BipartitePartialOrder::from_pairs(n, std::move(pairs));
}

TEST_CASE("P_pi with empty pi equals the GT_n refutation") {
    for (int n : {3, 5}) {
        GtDerivation a = build_gt_refutation(n);
        GtDerivation b = build_p_pi(BipartitePartialOrder::from_pairs(n, {}), n);
        REQUIRE(a.dag.size() == b.dag.size());
        for (size_t i = 0; i < a.dag.size(); ++i)
            CHECK(a.dag.nodes[i].clause == b.dag.nodes[i].clause);
    }
}

TEST_CASE("P_pi concludes exactly neg(pi) with pivots in the allowed set") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 3 + (int)(rng() % 10);
        BipartitePartialOrder pi = random_bpo(n, rng);
        OrderVars ov(n);
        for (JkChoice jk : {JkChoice::Smallest, JkChoice::Largest}) {
            GtDerivation d = build_p_pi(pi, n, jk);
            CHECK(d.dag.nodes[d.dag.root].clause == neg_pi_clause(pi, ov));
            CHECK(dag_is_regular(d.dag, ov.count()));
            for (auto& node : d.dag.nodes)
                if (node.kind == DagNode::Kind::Step) {
                    CHECK(p_pi_pivot_allowed(pi, ov, node.pivot));
                    auto [a, b] = ov.decode(node.pivot);
                    CHECK_FALSE(pi.less(a, b));
                    CHECK_FALSE(pi.less(b, a));
                }
        }
    }
}

TEST_CASE("P_pi clauses are entailed by GT_{pi,n}") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 4;
        BipartitePartialOrder pi = random_bpo(n, rng);
        CnfFormula f = gt_pi_clauses(pi, n);
        GtDerivation d = build_p_pi(pi, n);
        for (auto& node : d.dag.nodes) CHECK(entails(f, node.clause));
    }
}

TEST_CASE("restricting GT_{pi,n} by the pi assignment makes it unsatisfiable") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 4 + (int)(rng() % 2);
        BipartitePartialOrder pi = random_bpo(n, rng);
        OrderVars ov(n);
        CnfFormula f = gt_pi_clauses(pi, n);
        for (auto [a, b] : pi.pairs) f.add_clause(Clause::from_lits({ov.lit(a, b)}));
        CHECK_FALSE(brute_force_unsat(f).sat);
    }
}

TEST_CASE("P_pi axioms are clauses of GT_{pi,n}") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 4 + (int)(rng() % 6);
        BipartitePartialOrder pi = random_bpo(n, rng);
        CnfFormula f = gt_pi_clauses(pi, n);
        GtDerivation d = build_p_pi(pi, n);
        for (auto& node : d.dag.nodes)
            if (node.kind == DagNode::Kind::Axiom) {
                REQUIRE(node.axiom_index < f.clauses.size());
                CHECK(f.clauses[node.axiom_index] == node.clause);
            }
    }
}

TEST_CASE("dag to tree conversions: pool and input-lemma forms") {
    for (int n : {4, 5}) {
        GtDerivation d = build_gt_refutation(n);
        CnfFormula gt = gen_gt(n);

        Proof pool = dag_to_proof_pool(d.dag);
        CHECK(check_soundness(pool, gt).ok);
        CHECK(check_regrtl(pool, gt).ok);
        CHECK(clause_of_root(pool, gt).empty());

        Proof rti = dag_to_proof_input_lemmas(d.dag, gt.num_vars);
        CHECK(check_soundness(rti, gt).ok);
        CHECK(check_regrti(rti, gt).ok);
        CHECK(clause_of_root(rti, gt).empty());
        CHECK(rti.size() <= 2 * d.dag.size() * std::max<size_t>(d.dag.height(), 1));
    }
}

TEST_CASE("a tree-shaped dag converts to an isomorphic tree") {
    CnfFormula f;
    f.num_vars = 1;
    f.add_clause(Clause::from_lits({1}));
    f.add_clause(Clause::from_lits({-1}));
    Dag d;
    uint32_t a = d.add_axiom(f.clauses[0], 0);
    uint32_t b = d.add_axiom(f.clauses[1], 1);
    d.root = d.add_step(a, b, 1);
    Proof p = dag_to_proof_input_lemmas(d, 1);
    CHECK(p.size() == 3);
    CHECK(stats(p, f).lemma_count == 0);
}

TEST_CASE("a diamond-shaped dag converts with a single input lemma") {
    CnfFormula f;
    f.num_vars = 3;
    f.add_clause(Clause::from_lits({1, 3}));    // 0
    f.add_clause(Clause::from_lits({-1, 3}));   // 1
    f.add_clause(Clause::from_lits({2, -3}));   // 2
    f.add_clause(Clause::from_lits({-2, -3}));  // 3
    // derive {2} and {-2} from the shared {3}
    Dag d2;
    uint32_t a = d2.add_axiom(f.clauses[0], 0);
    uint32_t b = d2.add_axiom(f.clauses[1], 1);
    uint32_t x3 = d2.add_step(a, b, 1);
    uint32_t c2 = d2.add_axiom(f.clauses[2], 2);
    uint32_t c3 = d2.add_axiom(f.clauses[3], 3);
    uint32_t two = d2.add_step(x3, c2, 3);      // {2}
    uint32_t ntwo = d2.add_step(x3, c3, 3);     // {-2}
    d2.root = d2.add_step(two, ntwo, 2);        // []
    Proof p = dag_to_proof_input_lemmas(d2, 3);
    CHECK(check_soundness(p, f).ok);
    CHECK(check_regrti(p, f).ok);
    CHECK(stats(p, f).lemma_count == 1);
    CHECK(clause_of_root(p, f).empty());
}
