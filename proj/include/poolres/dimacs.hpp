#pragma once

// DIMACS CNF reading and writing. Comment lines carry the variable-name map
// ("c var 4 = x_{1,2}") so generated files stay human-auditable.

#include <istream>
#include <ostream>
#include <sstream>

#include "poolres/core.hpp"

namespace poolres {

struct parse_error : std::runtime_error {
    int line;
    parse_error(int line_, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_) + ": " + what), line(line_) {}
};

inline void emit_dimacs(const CnfFormula& f, std::ostream& out) {
    for (Var v = 1; v < f.var_names.size(); ++v)
        if (!f.var_names[v].empty())
            out << "c var " << v << " = " << f.var_names[v] << "\n";
    out << "p cnf " << f.num_vars << " " << f.clauses.size() << "\n";
    for (const Clause& c : f.clauses) {
        for (Lit l : c.lits()) out << l << " ";
        out << "0\n";
    }
}

inline std::string emit_dimacs(const CnfFormula& f) {
    std::ostringstream os;
    emit_dimacs(f, os);
    return os.str();
}

inline CnfFormula parse_dimacs(std::istream& in) {
    CnfFormula f;
    bool have_header = false;
    size_t expected_clauses = 0;
    std::vector<Lit> current;
    bool open_clause = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == 'c') {
            std::istringstream cs(line);
            std::string c, var, eq, name;
            uint64_t v;
            if (cs >> c >> var >> v >> eq >> name && var == "var" && eq == "=")
                f.set_name((Var)v, name);
            continue;
        }
        if (line[0] == 'p') {
            std::istringstream hs(line);
            std::string p, cnf;
            int64_t nv = -1, nc = -1;
            hs >> p >> cnf >> nv >> nc;
            if (cnf != "cnf" || nv < 0 || nc < 0) throw parse_error(lineno, "malformed header");
            f.num_vars = (Var)nv;
            expected_clauses = (size_t)nc;
            have_header = true;
            continue;
        }
        if (!have_header) throw parse_error(lineno, "clause before header");
        std::istringstream ls(line);
        int64_t tok;
        while (ls >> tok) {
            if (tok == 0) {
                f.add_clause(Clause::from_lits(current));
                current.clear();
                open_clause = false;
            } else {
                if (std::abs(tok) > (int64_t)f.num_vars)
                    throw parse_error(lineno, "literal " + std::to_string(tok) +
                                                  " exceeds declared variable count");
                current.push_back((Lit)tok);
                open_clause = true;
            }
        }
        if (!ls.eof()) throw parse_error(lineno, "unexpected token");
    }
    if (open_clause) throw parse_error(lineno, "unterminated clause");
    if (f.clauses.size() != expected_clauses)
        throw parse_error(lineno, "clause count mismatch: header says " +
                                      std::to_string(expected_clauses) + ", found " +
                                      std::to_string(f.clauses.size()));
    return f;
}

inline CnfFormula parse_dimacs(const std::string& text) {
    std::istringstream is(text);
    return parse_dimacs(is);
}

}  // namespace poolres
