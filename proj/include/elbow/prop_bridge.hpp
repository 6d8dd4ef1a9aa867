#pragma once

// Reduction between propositional clause entailment and subsumption:
// a clause with at least one negative literal maps to a concept inclusion
// whose RHS is a (nested) betweenness; positive-only clauses are first
// guarded with a fresh atom. A truth-table oracle provides ground truth.

#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "syntax.hpp"

namespace elbow {

struct Clause {
    std::set<std::string> positives, negatives;
};

inline std::string clause_to_string(const Clause& c) {
    std::string out;
    for (const auto& a : c.positives) out += (out.empty() ? "" : " | ") + a;
    for (const auto& a : c.negatives) out += (out.empty() ? "!" : " | !") + a;
    return out.empty() ? "<empty>" : out;
}

struct GuardedSystem {
    std::vector<Clause> premises;
    Clause conclusion;
    std::string fresh_atom;
};

// Adds a fresh negative guard literal to every clause; entailment is
// preserved and reflected.
inline GuardedSystem guard_with_fresh_atom(const std::vector<Clause>& premises,
                                           const Clause& conclusion) {
    std::set<std::string> used;
    for (const auto& c : premises) {
        used.insert(c.positives.begin(), c.positives.end());
        used.insert(c.negatives.begin(), c.negatives.end());
    }
    used.insert(conclusion.positives.begin(), conclusion.positives.end());
    used.insert(conclusion.negatives.begin(), conclusion.negatives.end());
    std::string x = "x";
    int k = 0;
    while (used.count(x)) x = "x" + std::to_string(++k);
    GuardedSystem g;
    g.fresh_atom = x;
    g.premises = premises;
    for (auto& c : g.premises) c.negatives.insert(x);
    g.conclusion = conclusion;
    g.conclusion.negatives.insert(x);
    return g;
}

inline std::string atom_concept_name(const std::string& atom) { return "P_" + atom; }

// tau: x1 | ... | xn | !y1 | ... | !ym  ->  X1 & ... & Xn <= Y1 btw ... btw Ym
// (top on the left when n = 0, a plain name on the right when m = 1).
inline ConceptInclusion tau(const Clause& c) {
    if (c.negatives.empty())
        throw std::invalid_argument("tau requires at least one negative literal: " +
                                    clause_to_string(c));
    for (const auto& a : c.positives)
        if (c.negatives.count(a))
            throw std::invalid_argument("clause mentions " + a + " with both polarities");
    ConceptPtr lhs;
    for (const auto& a : c.positives) {
        ConceptPtr n = make_name(atom_concept_name(a));
        lhs = lhs ? make_conj(lhs, n) : n;
    }
    if (!lhs) lhs = make_top();
    std::vector<std::string> negs(c.negatives.begin(), c.negatives.end());
    ConceptPtr rhs;  // right-nested
    for (auto it = negs.rbegin(); it != negs.rend(); ++it) {
        ConceptPtr n = make_name(atom_concept_name(*it));
        rhs = rhs ? make_between(n, rhs) : n;
    }
    return {lhs, rhs};
}

struct PropReduction {
    TBox tbox;
    ConceptPtr query_lhs, query_rhs;
};

inline PropReduction reduce_entailment(std::vector<Clause> premises, Clause conclusion) {
    bool need_guard = conclusion.negatives.empty();
    for (const auto& c : premises)
        if (c.negatives.empty()) need_guard = true;
    if (need_guard) {
        GuardedSystem g = guard_with_fresh_atom(premises, conclusion);
        premises = std::move(g.premises);
        conclusion = std::move(g.conclusion);
    }
    PropReduction out;
    std::set<std::string> atoms;
    for (const auto& c : premises) {
        atoms.insert(c.positives.begin(), c.positives.end());
        atoms.insert(c.negatives.begin(), c.negatives.end());
    }
    atoms.insert(conclusion.positives.begin(), conclusion.positives.end());
    atoms.insert(conclusion.negatives.begin(), conclusion.negatives.end());
    for (const auto& a : atoms) out.tbox.natural_names.insert(atom_concept_name(a));
    for (const auto& c : premises) {
        ConceptInclusion ci = tau(c);
        out.tbox.add_ci(ci.lhs, ci.rhs);
    }
    ConceptInclusion q = tau(conclusion);
    out.query_lhs = q.lhs;
    out.query_rhs = q.rhs;
    return out;
}

inline bool truth_table_entails(const std::vector<Clause>& premises, const Clause& conclusion) {
    std::vector<std::string> atoms;
    {
        std::set<std::string> s;
        for (const auto& c : premises) {
            s.insert(c.positives.begin(), c.positives.end());
            s.insert(c.negatives.begin(), c.negatives.end());
        }
        s.insert(conclusion.positives.begin(), conclusion.positives.end());
        s.insert(conclusion.negatives.begin(), conclusion.negatives.end());
        atoms.assign(s.begin(), s.end());
    }
    if (atoms.size() > 20) throw std::invalid_argument("truth table limited to 20 atoms");
    auto holds = [&](const Clause& c, uint32_t v) {
        int i = 0;
        for (const auto& a : atoms) {
            bool val = (v >> i) & 1;
            if (val && c.positives.count(a)) return true;
            if (!val && c.negatives.count(a)) return true;
            ++i;
        }
        return false;
    };
    for (uint32_t v = 0; v < (uint32_t(1) << atoms.size()); ++v) {
        bool all = true;
        for (const auto& c : premises)
            if (!holds(c, v)) {
                all = false;
                break;
            }
        if (all && !holds(conclusion, v)) return false;
    }
    return true;
}

// DIMACS CNF I/O; variable i maps to atom "a<i>".
inline std::vector<Clause> clauses_from_dimacs(const std::string& text) {
    std::istringstream is(text);
    std::vector<Clause> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == 'c' || line[0] == 'p') continue;
        std::istringstream ls(line);
        Clause c;
        long long lit;
        bool any = false;
        while (ls >> lit) {
            if (lit == 0) break;
            any = true;
            std::string a = "a" + std::to_string(lit < 0 ? -lit : lit);
            (lit > 0 ? c.positives : c.negatives).insert(a);
        }
        if (any) out.push_back(std::move(c));
    }
    return out;
}

inline std::string clauses_to_dimacs(const std::vector<Clause>& clauses) {
    std::set<std::string> atoms;
    for (const auto& c : clauses) {
        atoms.insert(c.positives.begin(), c.positives.end());
        atoms.insert(c.negatives.begin(), c.negatives.end());
    }
    std::map<std::string, int> num;
    int i = 0;
    for (const auto& a : atoms) num[a] = ++i;
    std::ostringstream os;
    os << "p cnf " << atoms.size() << " " << clauses.size() << "\n";
    for (const auto& c : clauses) {
        for (const auto& a : c.positives) os << num[a] << " ";
        for (const auto& a : c.negatives) os << -num[a] << " ";
        os << "0\n";
    }
    return os.str();
}

}  // namespace elbow
