#pragma once

// Core CNF types: literals, clauses, formulas, and the ordering-variable
// encoding used by the graph tautology families.

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace poolres {

using Var = uint32_t;  // 1-based
using Lit = int32_t;   // +v / -v, never 0

inline Var var_of(Lit l) { return static_cast<Var>(std::abs(l)); }
inline bool positive(Lit l) { return l > 0; }
inline Lit neg(Lit l) { return -l; }

struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// A clause is a sorted, duplicate-free set of literals. Construction rejects
// tautological literal sets: the families generated here never contain them,
// so one showing up means a generator bug.
class Clause {
  public:
    Clause() = default;

    static Clause from_lits(std::vector<Lit> lits) {
        std::sort(lits.begin(), lits.end(), lit_less);
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        for (size_t i = 0; i + 1 < lits.size(); ++i) {
            if (lits[i] == -lits[i + 1])
                throw domain_error("tautological clause on variable " +
                                   std::to_string(var_of(lits[i])));
        }
        Clause c;
        c.lits_ = std::move(lits);
        return c;
    }

    // Total order used for the degenerate-resolution tiebreak:
    // first by length, then lexicographic on the sorted literal list.
    static bool size_lex_less(const Clause& a, const Clause& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return std::lexicographical_compare(a.lits_.begin(), a.lits_.end(),
                                            b.lits_.begin(), b.lits_.end(), lit_less);
    }

    static bool lit_less(Lit a, Lit b) {
        if (var_of(a) != var_of(b)) return var_of(a) < var_of(b);
        return a > b;  // positive before negative
    }

    bool contains(Lit l) const {
        return std::binary_search(lits_.begin(), lits_.end(), l, lit_less);
    }
    bool contains_var(Var v) const {
        return contains(static_cast<Lit>(v)) || contains(-static_cast<Lit>(v));
    }
    bool empty() const { return lits_.empty(); }
    size_t size() const { return lits_.size(); }
    const std::vector<Lit>& lits() const { return lits_; }

    bool subset_of(const Clause& other) const {
        return std::includes(other.lits_.begin(), other.lits_.end(),
                             lits_.begin(), lits_.end(), lit_less);
    }

    friend bool operator==(const Clause& a, const Clause& b) { return a.lits_ == b.lits_; }
    friend bool operator<(const Clause& a, const Clause& b) { return a.lits_ < b.lits_; }

  private:
    std::vector<Lit> lits_;
};

struct CnfFormula {
    Var num_vars = 0;
    std::vector<Clause> clauses;
    std::vector<std::string> var_names;  // 1-based; empty entries allowed

    void set_name(Var v, std::string name) {
        if (var_names.size() <= v) var_names.resize(v + 1);
        var_names[v] = std::move(name);
    }
    std::string name_of(Var v) const {
        if (v < var_names.size() && !var_names[v].empty()) return var_names[v];
        return "x" + std::to_string(v);
    }

    void add_clause(Clause c) {
        for (Lit l : c.lits())
            if (var_of(l) > num_vars)
                throw domain_error("literal " + std::to_string(l) + " exceeds num_vars");
        clauses.push_back(std::move(c));
    }

    // Index of an exactly-equal clause, or -1.
    int find_clause(const Clause& c) const {
        build_index();
        auto it = index_.find(c);
        return it == index_.end() ? -1 : it->second;
    }

  private:
    mutable std::map<Clause, int> index_;
    void build_index() const {
        if (index_.size() == clauses.size()) return;
        index_.clear();
        for (size_t i = 0; i < clauses.size(); ++i) index_.emplace(clauses[i], (int)i);
    }
};

// Ordering variables x_{i,j} over [n], for i < j only; x_{j,i} with j > i is
// notation for the complement. Canonical index = 1-based rank of (i,j) in
// lexicographic order over pairs i < j.
class OrderVars {
  public:
    explicit OrderVars(int n) : n_(n) {
        if (n < 1) throw domain_error("ordering domain must have n >= 1");
    }

    int n() const { return n_; }
    Var count() const { return static_cast<Var>((int64_t)n_ * (n_ - 1) / 2); }

    Var index(int i, int j) const {
        check_pair(i, j);
        if (i > j) std::swap(i, j);
        return static_cast<Var>((int64_t)i * (2 * n_ - i - 1) / 2 + (j - i));
    }

    // The literal asserting "i precedes j".
    Lit lit(int i, int j) const {
        check_pair(i, j);
        Var v = index(i, j);
        return i < j ? (Lit)v : -(Lit)v;
    }

    std::pair<int, int> decode(Var v) const {
        assert(v >= 1 && v <= count());
        int i = 0;
        Var base = 0;
        while (base + (Var)(n_ - i - 1) < v) {
            base += n_ - i - 1;
            ++i;
        }
        int j = i + (int)(v - base);
        return {i, j};
    }

    std::string name(Var v) const {
        auto [i, j] = decode(v);
        return "x_{" + std::to_string(i) + "," + std::to_string(j) + "}";
    }

    void apply_names(CnfFormula& f) const {
        for (Var v = 1; v <= count(); ++v) f.set_name(v, name(v));
    }

  private:
    int n_;
    void check_pair(int i, int j) const {
        if (i == j || i < 0 || j < 0 || i >= n_ || j >= n_)
            throw domain_error("invalid vertex pair (" + std::to_string(i) + "," +
                               std::to_string(j) + ") over [" + std::to_string(n_) + "]");
    }
};

}  // namespace poolres
