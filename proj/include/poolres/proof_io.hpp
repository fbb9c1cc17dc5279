#pragma once

// Line-oriented proof text format, 1-based ids in postorder:
//   rproof <num_nodes> over <dimacs-file-name>
//   <id> A <clause-index>                          (1-based formula index)
//   <id> L <target-id>
//   <id> R|D|W <left-id> <right-id> <pivot-var> : <lit...> 0
// Step lines list the derived clause explicitly; checkers re-derive each
// step and compare bit-exactly.

#include <istream>
#include <ostream>
#include <sstream>

#include "poolres/checkers.hpp"
#include "poolres/dimacs.hpp"

namespace poolres {

inline void write_proof(const Proof& p, const CnfFormula& f, const std::string& dimacs_name,
                        std::ostream& out) {
    out << "rproof " << p.size() << " over " << dimacs_name << "\n";
    for_each_clause(p, f, [&](uint32_t id, const Clause& c) {
        const ProofNode& n = p.nodes[id];
        switch (n.kind) {
            case NodeKind::Axiom: out << (id + 1) << " A " << (n.a + 1) << "\n"; break;
            case NodeKind::Lemma: out << (id + 1) << " L " << (n.a + 1) << "\n"; break;
            case NodeKind::Step: {
                char tag = n.rule == Rule::Resolution ? 'R'
                           : n.rule == Rule::Degenerate ? 'D'
                                                        : 'W';
                out << (id + 1) << " " << tag << " " << (n.a + 1) << " " << (n.b + 1) << " "
                    << n.pivot << " :";
                for (Lit l : c.lits()) out << " " << l;
                out << " 0\n";
                break;
            }
        }
    });
}

struct ProofFile {
    Proof proof;
    std::vector<std::optional<Clause>> listed;  // step clauses as written
    std::string dimacs_name;
};

inline ProofFile read_proof(std::istream& in) {
    ProofFile pf;
    std::string line;
    int lineno = 0;
    size_t declared = 0;
    if (!std::getline(in, line)) throw parse_error(1, "empty proof file");
    ++lineno;
    {
        std::istringstream hs(line);
        std::string tag, over;
        if (!(hs >> tag >> declared >> over >> pf.dimacs_name) || tag != "rproof" ||
            over != "over")
            throw parse_error(lineno, "malformed proof header");
    }
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == 'c') continue;
        std::istringstream ls(line);
        uint64_t id;
        std::string kind;
        if (!(ls >> id >> kind)) throw parse_error(lineno, "malformed proof line");
        if (id != pf.proof.size() + 1)
            throw parse_error(lineno, "ids must be consecutive from 1");
        if (kind == "A") {
            uint64_t cidx;
            if (!(ls >> cidx) || cidx == 0) throw parse_error(lineno, "bad axiom index");
            pf.proof.add_axiom((uint32_t)(cidx - 1));
            pf.listed.emplace_back(std::nullopt);
        } else if (kind == "L") {
            uint64_t t;
            if (!(ls >> t) || t == 0 || t >= id) throw parse_error(lineno, "bad lemma target");
            pf.proof.add_lemma((uint32_t)(t - 1));
            pf.listed.emplace_back(std::nullopt);
        } else if (kind == "R" || kind == "D" || kind == "W") {
            uint64_t a, b;
            int64_t pivot;
            std::string colon;
            if (!(ls >> a >> b >> pivot >> colon) || colon != ":" || a == 0 || b == 0 ||
                a >= id || b >= id || pivot <= 0)
                throw parse_error(lineno, "bad step line");
            Rule r = kind == "R" ? Rule::Resolution
                     : kind == "D" ? Rule::Degenerate
                                   : Rule::WResolution;
            pf.proof.add_step((uint32_t)(a - 1), (uint32_t)(b - 1), (Var)pivot, r);
            std::vector<Lit> lits;
            int64_t tok;
            bool terminated = false;
            while (ls >> tok) {
                if (tok == 0) {
                    terminated = true;
                    break;
                }
                lits.push_back((Lit)tok);
            }
            if (!terminated) throw parse_error(lineno, "unterminated step clause");
            pf.listed.emplace_back(Clause::from_lits(std::move(lits)));
        } else {
            throw parse_error(lineno, "unknown line kind '" + kind + "'");
        }
    }
    if (pf.proof.size() != declared)
        throw parse_error(lineno, "node count mismatch with header");
    return pf;
}

inline ProofFile read_proof(const std::string& text) {
    std::istringstream is(text);
    return read_proof(is);
}

}  // namespace poolres
