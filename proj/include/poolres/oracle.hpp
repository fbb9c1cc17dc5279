#pragma once

// Exhaustive-enumeration oracle for tiny formulas. Independent of every
// construction in this library; used to cross-check generators, provers and
// checkers on instances small enough to enumerate.

#include <optional>

#include "poolres/core.hpp"

namespace poolres {

constexpr Var kOracleVarCap = 26;

struct OracleResult {
    bool sat = false;
    uint32_t witness = 0;  // bit v-1 = value of variable v
};

namespace detail {
struct ClauseMasks {
    uint32_t pos = 0, neg = 0;
};
inline std::vector<ClauseMasks> clause_masks(const std::vector<Clause>& clauses) {
    std::vector<ClauseMasks> ms;
    ms.reserve(clauses.size());
    for (const Clause& c : clauses) {
        ClauseMasks m;
        for (Lit l : c.lits()) {
            uint32_t bit = 1u << (var_of(l) - 1);
            if (positive(l))
                m.pos |= bit;
            else
                m.neg |= bit;
        }
        ms.push_back(m);
    }
    return ms;
}
}  // namespace detail

inline OracleResult brute_force_unsat(const CnfFormula& f) {
    if (f.num_vars > kOracleVarCap)
        throw domain_error("oracle refuses " + std::to_string(f.num_vars) +
                           " variables (cap " + std::to_string(kOracleVarCap) + ")");
    auto ms = detail::clause_masks(f.clauses);
    uint64_t total = 1ull << f.num_vars;
    for (uint64_t a = 0; a < total; ++a) {
        bool ok = true;
        for (const auto& m : ms)
            if (!((a & m.pos) || (~a & m.neg))) {
                ok = false;
                break;
            }
        if (ok) return {true, (uint32_t)a};
    }
    return {false, 0};
}

// Does every assignment satisfying f also satisfy c?
inline bool entails(const CnfFormula& f, const Clause& c) {
    if (f.num_vars > kOracleVarCap)
        throw domain_error("oracle refuses " + std::to_string(f.num_vars) + " variables");
    auto ms = detail::clause_masks(f.clauses);
    detail::ClauseMasks target;
    for (Lit l : c.lits()) {
        uint32_t bit = 1u << (var_of(l) - 1);
        if (positive(l))
            target.pos |= bit;
        else
            target.neg |= bit;
    }
    uint64_t total = 1ull << f.num_vars;
    for (uint64_t a = 0; a < total; ++a) {
        if ((a & target.pos) || (~a & target.neg)) continue;  // c satisfied
        bool sat_f = true;
        for (const auto& m : ms)
            if (!((a & m.pos) || (~a & m.neg))) {
                sat_f = false;
                break;
            }
        if (sat_f) return false;
    }
    return true;
}

}  // namespace poolres
