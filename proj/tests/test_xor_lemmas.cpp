#include <catch2/catch.hpp>

#include <functional>
#include <set>

#include "poolres/checkers.hpp"
#include "poolres/oracle.hpp"
#include "poolres/xor_lemmas.hpp"

using namespace poolres;

TEST_CASE("block refutation: counts, height, pivots, regularity") {
    for (int k = 1; k <= 5; ++k) {
        XorVars xv(2, k);
        Dag d = xor_contra(xv, 1);
        size_t steps = 0;
        std::set<Var> pivots;
        for (auto& n : d.nodes)
            if (n.kind == DagNode::Kind::Step) {
                ++steps;
                pivots.insert(n.pivot);
            }
        CHECK(steps == (size_t)(1 << k) - 1);
        CHECK(d.height() == (size_t)k);
        CHECK(d.nodes[d.root].clause.empty());
        std::set<Var> expect;
        for (int i = 1; i <= k; ++i) expect.insert(xv.index(1, i));
        CHECK(pivots == expect);
        CHECK(dag_is_regular(d, xv.count()));
        if (k <= 4) {
            CnfFormula f = xor_contra_formula(xv, 1);
            Proof p = dag_to_proof_pool(d);
            CHECK(check_soundness(p, f).ok);
            CHECK(check_regular(p, f).ok);
        }
    }
}

TEST_CASE("single-variable block refutation is one resolution") {
    XorVars xv(1, 1);
    Dag d = xor_contra(xv, 0);
    CHECK(d.size() == 3);
}

TEST_CASE("side-clause translation derives every target, soundly and regularly") {
    // c ternary over vertices 1,2,3 (as vertex literals), d empty; u = 0
    int k = 2;
    XorVars xv(4, k);
    std::vector<Lit> c = {-2, 3, -4};  // vertex literals over vertices 1,2,3
    std::vector<Lit> d = {};
    // premise formula: (c v x_u)^{k xor} and (d v ~x_u)^{k xor}
    CnfFormula f;
    f.num_vars = xv.count();
    std::vector<Lit> cu = c;
    cu.push_back(1);
    for (Clause& cl : xorify_clause(xv, cu)) f.add_clause(std::move(cl));
    for (Clause& cl : xorify_clause(xv, {-1})) f.add_clause(std::move(cl));
    // every target in (c v d)^{k xor}
    auto targets = xorify_clause(xv, c);
    CHECK(targets.size() == 8);
    for (const Clause& target : targets) {
        Dag dag = xor_step(f, xv, c, d, 0, target);
        CHECK(dag.nodes[dag.root].clause == target);
        size_t steps = 0, leaves = 0;
        for (auto& n : dag.nodes)
            if (n.kind == DagNode::Kind::Step)
                ++steps;
            else
                ++leaves;
        CHECK(steps == (size_t)(1 << k) - 1);
        CHECK(leaves == (size_t)(1 << k));
        CHECK(dag_is_regular(dag, xv.count()));
        Proof p = dag_to_proof_pool(dag);
        CHECK(check_soundness(p, f).ok);
    }
    // c = d = empty reduces to the block refutation
    CnfFormula f2 = xor_contra_formula(XorVars(1, 2), 0);
    XorVars xv1(1, 2);
    Dag contra = xor_step(f2, xv1, {}, {}, 0, Clause());
    CHECK(contra.nodes[contra.root].clause.empty());
}

TEST_CASE("k=1 side-clause translation is a single resolution") {
    XorVars xv(2, 1);
    CnfFormula f;
    f.num_vars = 2;
    f.add_clause(Clause::from_lits({2, 1}));   // (x_1 v x_0) lifted
    f.add_clause(Clause::from_lits({-1}));     // (~x_0) lifted
    Dag d = xor_step(f, xv, {2}, {}, 0, Clause::from_lits({2}));
    CHECK(d.size() == 3);
    CHECK(d.nodes[d.root].clause == Clause::from_lits({2}));
}

TEST_CASE("implication translation: bounds and per-path pivot discipline") {
    for (int k : {1, 2, 3}) {
        PointedDag g = pyramid(1);
        int u = 0, v = 1, w = g.sink();
        XorVars xv(g.n(), k);
        CnfFormula f;
        f.num_vars = xv.count();
        for (Clause& cl : xorify_clause(xv, {(Lit)(u + 1)})) f.add_clause(std::move(cl));
        for (Clause& cl : xorify_clause(xv, {(Lit)(v + 1)})) f.add_clause(std::move(cl));
        for (Clause& cl :
             xorify_clause(xv, {-(Lit)(u + 1), -(Lit)(v + 1), (Lit)(w + 1)}))
            f.add_clause(std::move(cl));
        for (const Clause& target : xorify_pos(xv, w)) {
            Dag d = xor_uv_implies_w(f, xv, u, v, w, target);
            CHECK(d.nodes[d.root].clause == target);
            size_t steps = 0;
            for (auto& n : d.nodes)
                if (n.kind == DagNode::Kind::Step) ++steps;
            CHECK(steps < (size_t)(1 << (2 * k)));
            CHECK(dag_is_regular(d, xv.count()));
            Proof p = dag_to_proof_pool(d);
            CHECK(check_soundness(p, f).ok);
            // every path ending in an x_v leaf resolves on v's block only
            std::function<void(uint32_t, std::vector<Var>)> walk =
                [&](uint32_t id, std::vector<Var> pivots) {
                    const DagNode& n = d.nodes[id];
                    if (n.kind == DagNode::Kind::Step) {
                        pivots.push_back(n.pivot);
                        walk(n.left, pivots);
                        walk(n.right, pivots);
                        return;
                    }
                    bool v_leaf = true;
                    for (Lit l : n.clause.lits())
                        if (xv.vertex_of(var_of(l)) != v) v_leaf = false;
                    if (v_leaf && !n.clause.empty())
                        for (Var pv : pivots) CHECK(xv.vertex_of(pv) == v);
                };
            walk(d.root, {});
        }
    }
}

TEST_CASE("subgraph derivations: form I on a small pyramid, k=1") {
    PointedDag g = pyramid(1);
    SubDag h = restrict_to(g, g.sink());
    XorPebGoal goal{g.sink(), 0, {}};
    XorPebDerivation d = reg_xor_peb_derivation(g, 1, h, goal);
    // three axioms: two source units and the implication, deriving {x_t}
    CHECK(d.axiom_nodes.size() == 3);
    CHECK(d.dag.nodes[d.dag.root].clause ==
          Clause::from_lits({(Lit)(g.sink() + 1)}));
    CnfFormula f = gen_peb_xor(g, 1);
    Proof p = dag_to_proof_pool(d.dag);
    CHECK(check_soundness(p, f).ok);
}

TEST_CASE("subgraph derivations obey the pivot exclusions and size bounds") {
    for (int hgt = 2; hgt <= 5; ++hgt) {
        for (int k = 1; k <= 3; ++k) {
            if (hgt >= 4 && k >= 3) continue;  // larger combinations in acceptance
            PointedDag g = pyramid(hgt);
            XorVars xv(g.n(), k);
            int w = g.sink();
            int u = g.preds(w)[0], v = g.preds(w)[1];

            // form I over the whole graph
            SubDag hw = restrict_to(g, w);
            XorPebDerivation d1 =
                reg_xor_peb_derivation(g, k, hw, XorPebGoal{w, 0, {}});
            CHECK(dag_is_regular(d1.dag, xv.count()));
            for (auto& n : d1.dag.nodes)
                if (n.kind == DagNode::Kind::Step)
                    CHECK(xv.vertex_of(n.pivot) != w);
            CHECK(d1.dag.size() <= (size_t)(8u << (3 * (k - 1))) * hw.size() * 8);
            CHECK(d1.dag.height() <= (size_t)(4 * k * (int)hw.size() + 8));

            // form II: cut u
            SubDag hu = cut_vertices(hw, {u});
            uint32_t odd = 1;  // one negation
            XorPebDerivation d2 =
                reg_xor_peb_derivation(g, k, hu, XorPebGoal{w, 0, {{u, odd}}});
            CHECK(dag_is_regular(d2.dag, xv.count()));
            for (auto& n : d2.dag.nodes)
                if (n.kind == DagNode::Kind::Step) {
                    CHECK(xv.vertex_of(n.pivot) != w);
                    CHECK(xv.vertex_of(n.pivot) != u);
                }

            // form III: cut both predecessors of the sink
            SubDag huv = cut_vertices(hw, {u, v});
            XorPebDerivation d3 = reg_xor_peb_derivation(
                g, k, huv, XorPebGoal{w, 0, {{u, odd}, {v, odd}}});
            CHECK(dag_is_regular(d3.dag, xv.count()));
            for (auto& n : d3.dag.nodes)
                if (n.kind == DagNode::Kind::Step) {
                    CHECK(xv.vertex_of(n.pivot) != w);
                    CHECK(xv.vertex_of(n.pivot) != u);
                    CHECK(xv.vertex_of(n.pivot) != v);
                }
            CnfFormula f = gen_peb_xor(g, k);
            Proof p = dag_to_proof_pool(d3.dag);
            CHECK(check_soundness(p, f).ok);
            if ((int)f.num_vars <= 12) {
                for (auto& n : d3.dag.nodes) CHECK(entails(f, n.clause));
            }
        }
    }
}
