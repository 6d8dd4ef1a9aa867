#pragma once

// Subsumption under the feature-enriched semantics.
//
// The decision procedure searches for a feature assignment theta such that
// after adding the inclusions forced by theta (step 2) and saturating under
// R1-R6 (step 3), theta is proper for the completed TBox and the target CI is
// underivable; the query is entailed iff no such theta exists.
//
// Two engines implement the search:
//  - a monolithic SAT encoding over s/e/w/x variables (encode_sat), complete
//    for all normal TBoxes;
//  - a direct mode for existential-free TBoxes whose conjunction CIs have
//    natural name conjuncts. For such TBoxes properness of the completion
//    follows from per-feature admissibility against the base CIs alone
//    (R3/R4 conclusions inherit condition 2 from their premises), so the
//    set of forced step-2 pairs is independent of theta and the procedure
//    degenerates to one small SAT call per candidate pair plus one EL
//    completion.
//
// On NotEntailed the witnessing theta is shrunk column-wise and turned into
// the canonical countermodel, which is validated by the caller.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "feature_model.hpp"
#include "normalizer.hpp"
#include "sat.hpp"
#include "syntax.hpp"

namespace elbow {

// ---------------------------------------------------------------------------
// Atoms: the "concept names" of the completion.

struct Atom {
    enum Kind { Top, Name, Between } kind;
    std::string name;    // Name only
    int b1 = -1, b2 = -1;  // Between: operand atom ids, b1 <= b2
    bool natural = false;
};

class AtomTable {
public:
    AtomTable() { atoms_.push_back({Atom::Top, "", -1, -1, false}); }

    int top_id() const { return 0; }

    int intern_name(const std::string& n, bool natural) {
        auto it = by_name_.find(n);
        if (it != by_name_.end()) return it->second;
        int id = static_cast<int>(atoms_.size());
        atoms_.push_back({Atom::Name, n, -1, -1, natural});
        by_name_.emplace(n, id);
        return id;
    }

    int find_name(const std::string& n) const {
        auto it = by_name_.find(n);
        return it == by_name_.end() ? -1 : it->second;
    }

    int intern_between(int a, int b) {
        if (a > b) std::swap(a, b);  // betweenness is symmetric
        auto it = by_between_.find({a, b});
        if (it != by_between_.end()) return it->second;
        int id = static_cast<int>(atoms_.size());
        bool nat = atoms_[a].natural && atoms_[b].natural;
        atoms_.push_back({Atom::Between, "", a, b, nat});
        by_between_.emplace(std::make_pair(a, b), id);
        return id;
    }

    const Atom& at(int id) const { return atoms_[id]; }
    int size() const { return static_cast<int>(atoms_.size()); }

    ConceptPtr concept_of(int id) const {
        const Atom& a = atoms_[id];
        switch (a.kind) {
            case Atom::Top:
                return make_top();
            case Atom::Name:
                return make_name(a.name);
            default:
                return make_between(concept_of(a.b1), concept_of(a.b2));
        }
    }

    std::string render(int id) const { return to_string(concept_of(id)); }

private:
    std::vector<Atom> atoms_;
    std::map<std::string, int> by_name_;
    std::map<std::pair<int, int>, int> by_between_;
};

// Indexed view of a normal TBox's CIs by shape.
struct NormalIndex {
    AtomTable atoms;
    std::vector<std::pair<int, int>> plain;            // a <= c
    std::vector<std::array<int, 3>> conj;              // a1 & a2 <= b
    std::vector<std::string> roles;
    std::vector<std::array<int, 3>> ex_rhs;            // a <= some roles[r].b
    std::vector<std::array<int, 3>> ex_lhs;            // some roles[r].a <= b
    std::vector<int> name_ids;
    std::vector<int> natural_name_ids;
    std::vector<int> between_ids;
    bool existential_free = true;
    bool conjuncts_natural = true;  // every conj CI has natural name conjuncts

    int role_id(const std::string& r) {
        for (size_t i = 0; i < roles.size(); ++i)
            if (roles[i] == r) return static_cast<int>(i);
        roles.push_back(r);
        return static_cast<int>(roles.size()) - 1;
    }
};

inline NormalIndex index_tbox(const NormalTBox& nt) {
    NormalIndex ix;
    const auto& natural = nt.tbox.natural_names;
    for (const auto& n : nt.tbox.concept_names())
        ix.atoms.intern_name(n, natural.count(n) > 0);
    auto atom_of = [&](const ConceptPtr& c) -> int {
        switch (c->kind) {
            case ConceptKind::Top:
                return ix.atoms.top_id();
            case ConceptKind::Name:
                return ix.atoms.intern_name(c->label, natural.count(c->label) > 0);
            case ConceptKind::Between:
                return ix.atoms.intern_between(
                    ix.atoms.intern_name(c->lhs->label, true),
                    ix.atoms.intern_name(c->rhs->label, true));
            default:
                throw EvalError("not an atom: " + to_string(c));
        }
    };
    for (const auto& s : nt.tbox.statements) {
        if (!s.is_ci()) continue;
        const ConceptPtr& l = s.ci().lhs;
        const ConceptPtr& r = s.ci().rhs;
        if (l->kind == ConceptKind::Conj) {
            int a1 = atom_of(l->lhs), a2 = atom_of(l->rhs);
            ix.conj.push_back({a1, a2, atom_of(r)});
            for (int a : {a1, a2}) {
                const Atom& at = ix.atoms.at(a);
                if (at.kind != Atom::Name || !at.natural) ix.conjuncts_natural = false;
            }
        } else if (l->kind == ConceptKind::Exists) {
            ix.ex_lhs.push_back({ix.role_id(l->label), atom_of(l->rhs), atom_of(r)});
            ix.existential_free = false;
        } else if (r->kind == ConceptKind::Exists) {
            ix.ex_rhs.push_back({atom_of(l), ix.role_id(r->label), atom_of(r->rhs)});
            ix.existential_free = false;
        } else {
            ix.plain.push_back({atom_of(l), atom_of(r)});
        }
    }
    for (int id = 0; id < ix.atoms.size(); ++id) {
        const Atom& a = ix.atoms.at(id);
        if (a.kind == Atom::Name) {
            ix.name_ids.push_back(id);
            if (a.natural) ix.natural_name_ids.push_back(id);
        } else if (a.kind == Atom::Between) {
            ix.between_ids.push_back(id);
        }
    }
    return ix;
}

// ---------------------------------------------------------------------------
// EL completion (rules R1-R6, between atoms treated as names).

struct CompletionState {
    NormalIndex src;
    std::vector<std::vector<uint8_t>> sub;               // sub[a][c]: a <= c derived
    std::vector<std::set<std::pair<int, int>>> ex;       // per atom: (role, filler)

    bool has(int a, int c) const { return sub[a][c] != 0; }

    std::vector<ConceptInclusion> derived_cis() const {
        std::vector<ConceptInclusion> out;
        for (int a = 0; a < src.atoms.size(); ++a)
            for (int c = 0; c < src.atoms.size(); ++c)
                if (sub[a][c])
                    out.push_back({src.atoms.concept_of(a), src.atoms.concept_of(c)});
        return out;
    }
};

inline CompletionState complete_index(NormalIndex ix,
                                      const std::vector<std::pair<int, int>>& extra_plain = {}) {
    CompletionState st;
    int n = ix.atoms.size();
    st.sub.assign(n, std::vector<uint8_t>(n, 0));
    st.ex.assign(n, {});
    for (int a = 0; a < n; ++a) {
        st.sub[a][a] = 1;                 // R1
        st.sub[a][ix.atoms.top_id()] = 1; // R2
    }
    for (auto [a, c] : ix.plain) st.sub[a][c] = 1;
    for (auto [a, c] : extra_plain) st.sub[a][c] = 1;
    for (auto [a, r, b] : ix.ex_rhs) st.ex[a].insert({r, b});
    bool changed = true;
    while (changed) {
        changed = false;
        // R3
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                if (!st.sub[a][b]) continue;
                for (int c = 0; c < n; ++c)
                    if (st.sub[b][c] && !st.sub[a][c]) {
                        st.sub[a][c] = 1;
                        changed = true;
                    }
            }
        // R4
        for (const auto& [a1, a2, b] : ix.conj)
            for (int a = 0; a < n; ++a)
                if (st.sub[a][a1] && st.sub[a][a2] && !st.sub[a][b]) {
                    st.sub[a][b] = 1;
                    changed = true;
                }
        // R5
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                if (!st.sub[a][b] || a == b) continue;
                for (const auto& rb : st.ex[b])
                    if (st.ex[a].insert(rb).second) changed = true;
            }
        // R6
        for (const auto& [r, bp, c] : ix.ex_lhs)
            for (int a = 0; a < n; ++a)
                for (const auto& [r2, b1] : st.ex[a])
                    if (r2 == r && st.sub[b1][bp] && !st.sub[a][c]) {
                        st.sub[a][c] = 1;
                        changed = true;
                    }
    }
    st.src = std::move(ix);
    return st;
}

inline CompletionState el_complete(const NormalTBox& nt) {
    return complete_index(index_tbox(nt));
}

// ---------------------------------------------------------------------------
// Feature assignments.

struct FeatureAssignment {
    std::vector<std::string> features;                       // the universe F
    std::map<std::string, std::set<std::string>> theta;      // per concept name
};

// theta_hat over normal RHS shapes: names map through theta, top and
// existentials have no features, betweenness intersects.
inline std::set<std::string> theta_hat(const FeatureAssignment& fa, const ConceptPtr& c) {
    switch (c->kind) {
        case ConceptKind::Top:
        case ConceptKind::Exists:
            return {};
        case ConceptKind::Name: {
            auto it = fa.theta.find(c->label);
            if (it == fa.theta.end()) throw EvalError("theta undefined on '" + c->label + "'");
            return it->second;
        }
        case ConceptKind::Between: {
            std::set<std::string> a = theta_hat(fa, c->lhs), b = theta_hat(fa, c->rhs);
            std::set<std::string> out;
            for (const auto& f : a)
                if (b.count(f)) out.insert(f);
            return out;
        }
        default:
            throw EvalError("theta_hat undefined on " + to_string(c));
    }
}

// Properness of theta against a list of CIs: condition 1 for conjunction CIs
// with natural name conjuncts, condition 2 for CIs whose LHS is a name, top
// or betweenness (via theta_hat). Existential-LHS CIs impose nothing.
inline ValidationReport is_proper(const FeatureAssignment& fa,
                                  const std::vector<ConceptInclusion>& cis,
                                  const std::set<std::string>& natural) {
    ValidationReport rep;
    auto subset = [](const std::set<std::string>& a, const std::set<std::string>& b) {
        return std::includes(b.begin(), b.end(), a.begin(), a.end());
    };
    for (const auto& ci : cis) {
        const ConceptPtr& l = ci.lhs;
        const ConceptPtr& r = ci.rhs;
        if (l->kind == ConceptKind::Conj) {
            bool nat_names = l->lhs->kind == ConceptKind::Name && natural.count(l->lhs->label) &&
                             l->rhs->kind == ConceptKind::Name && natural.count(l->rhs->label);
            if (!nat_names) continue;
            std::set<std::string> rhs = theta_hat(fa, r);
            std::set<std::string> uni = theta_hat(fa, l->lhs);
            for (const auto& f : theta_hat(fa, l->rhs)) uni.insert(f);
            if (!subset(rhs, uni))
                rep.violations.push_back({"cond-1", to_string(l) + " <= " + to_string(r)});
            continue;
        }
        if (l->kind == ConceptKind::Exists) continue;
        if (!subset(theta_hat(fa, r), theta_hat(fa, l)))
            rep.violations.push_back({"cond-2", to_string(l) + " <= " + to_string(r)});
    }
    return rep;
}

inline ValidationReport is_proper(const FeatureAssignment& fa, const NormalTBox& nt) {
    std::vector<ConceptInclusion> cis;
    for (const auto& s : nt.tbox.statements)
        if (s.is_ci()) cis.push_back(s.ci());
    return is_proper(fa, cis, nt.tbox.natural_names);
}

inline ValidationReport is_proper(const FeatureAssignment& fa, const CompletionState& st) {
    std::vector<ConceptInclusion> cis = st.derived_cis();
    std::set<std::string> natural;
    for (int id : st.src.natural_name_ids) natural.insert(st.src.atoms.at(id).name);
    // conjunction CIs live in the source TBox, not the derived atom relation
    for (const auto& [a1, a2, b] : st.src.conj)
        cis.push_back({make_conj(st.src.atoms.concept_of(a1), st.src.atoms.concept_of(a2)),
                       st.src.atoms.concept_of(b)});
    return is_proper(fa, cis, natural);
}

// Step 2: add A <= C for every concept name A and every natural name or
// occurring betweenness C with theta_hat(C) included in theta(A).
inline NormalTBox step2_augment(const NormalTBox& nt, const FeatureAssignment& fa) {
    NormalTBox out = nt;
    NormalIndex ix = index_tbox(nt);
    auto subset = [](const std::set<std::string>& a, const std::set<std::string>& b) {
        return std::includes(b.begin(), b.end(), a.begin(), a.end());
    };
    std::vector<int> candidates = ix.natural_name_ids;
    for (int b : ix.between_ids) candidates.push_back(b);
    for (int a : ix.name_ids) {
        const auto& name = ix.atoms.at(a).name;
        auto it = fa.theta.find(name);
        if (it == fa.theta.end()) continue;
        for (int c : candidates) {
            if (c == a) continue;
            ConceptPtr cc = ix.atoms.concept_of(c);
            if (subset(theta_hat(fa, cc), it->second))
                out.tbox.add_ci(make_name(name), cc);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Monolithic SAT encoding of the theta search (steps 1-4 as constraints).

struct SatEncoding {
    SatProblem problem;
    NormalIndex ix;
    std::vector<std::string> features;                  // the Lemma-6 universe
    std::vector<std::vector<int>> s_var;                // [a][c], 0 = absent
    std::map<std::pair<int, int>, int> x_var;           // (name atom, feature) -> var
    int target_a = -1, target_c = -1;
};

namespace detail {

// Feature universe per Lemma 6: two features per subconcept other than top
// and the bottom token.
inline std::vector<std::string> lemma6_features(const TBox& t) {
    ConceptSet sub = subconcepts(t);
    std::vector<std::string> out;
    int i = 0;
    for (const auto& c : sub) {
        if (c->kind == ConceptKind::Top || c->kind == ConceptKind::BottomToken) continue;
        ++i;
        out.push_back("g" + std::to_string(i) + "a");
        out.push_back("g" + std::to_string(i) + "b");
    }
    if (out.empty()) out.push_back("g0");
    return out;
}

}  // namespace detail

inline SatEncoding encode_sat(const NormalTBox& nt, const ConceptPtr& target_lhs,
                              const ConceptPtr& target_rhs) {
    SatEncoding enc;
    enc.ix = index_tbox(nt);
    enc.features = detail::lemma6_features(nt.tbox);
    NormalIndex& ix = enc.ix;
    SatProblem& p = enc.problem;
    int n = ix.atoms.size();
    int nf = static_cast<int>(enc.features.size());

    // s variables first (branching order: derivations before features)
    enc.s_var.assign(n, std::vector<int>(n, 0));
    for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c)
            enc.s_var[a][c] =
                p.new_var("s(" + ix.atoms.render(a) + "," + ix.atoms.render(c) + ")");
    // e variables per atom and distinct existential target of the TBox
    std::vector<std::pair<int, int>> ex_targets;  // (role, filler)
    for (const auto& [a, r, b] : ix.ex_rhs) {
        (void)a;
        if (std::find(ex_targets.begin(), ex_targets.end(), std::make_pair(r, b)) ==
            ex_targets.end())
            ex_targets.emplace_back(r, b);
    }
    int nk = static_cast<int>(ex_targets.size());
    std::vector<std::vector<int>> e_var(n, std::vector<int>(nk, 0));
    for (int a = 0; a < n; ++a)
        for (int k = 0; k < nk; ++k)
            e_var[a][k] = p.new_var("e(" + ix.atoms.render(a) + "," + ix.roles[ex_targets[k].first] +
                                    "," + ix.atoms.render(ex_targets[k].second) + ")");
    // y variables: feature membership of a between atom's intersection
    std::map<std::pair<int, int>, int> y_var;  // (between atom, feature)
    for (int bt : ix.between_ids)
        for (int f = 0; f < nf; ++f)
            y_var[{bt, f}] = p.new_var("y(" + ix.atoms.render(bt) + "," + enc.features[f] + ")");
    // w variables: step-2 non-inclusion witnesses
    std::vector<int> candidates = ix.natural_name_ids;
    for (int b : ix.between_ids) candidates.push_back(b);
    std::map<std::tuple<int, int, int>, int> w_var;
    for (int a : ix.name_ids)
        for (int c : candidates)
            if (a != c)
                for (int f = 0; f < nf; ++f)
                    w_var[{a, c, f}] = p.new_var("");
    // x variables last
    for (int a : ix.name_ids)
        for (int f = 0; f < nf; ++f)
            enc.x_var[{a, f}] =
                p.new_var("x(" + ix.atoms.render(a) + "," + enc.features[f] + ")");

    // literal for "feature f belongs to theta_hat(atom)"; 0 when constant false
    auto feat_lit = [&](int atom, int f) -> int {
        const Atom& at = ix.atoms.at(atom);
        if (at.kind == Atom::Top) return 0;
        if (at.kind == Atom::Name) return enc.x_var[{atom, f}];
        return y_var[{atom, f}];
    };

    // R1, R2 and base CIs as units
    for (int a = 0; a < n; ++a) {
        p.add_clause({enc.s_var[a][a]});
        p.add_clause({enc.s_var[a][ix.atoms.top_id()]});
    }
    for (auto [a, c] : ix.plain) p.add_clause({enc.s_var[a][c]});
    for (const auto& [a, r, b] : ix.ex_rhs) {
        int k = static_cast<int>(std::find(ex_targets.begin(), ex_targets.end(),
                                           std::make_pair(r, b)) -
                                 ex_targets.begin());
        p.add_clause({e_var[a][k]});
    }
    // R3
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            for (int c = 0; c < n; ++c) {
                if (c == b || c == a) continue;
                p.add_clause({-enc.s_var[a][b], -enc.s_var[b][c], enc.s_var[a][c]});
            }
        }
    // R4
    for (const auto& [a1, a2, b] : ix.conj)
        for (int a = 0; a < n; ++a)
            p.add_clause({-enc.s_var[a][a1], -enc.s_var[a][a2], enc.s_var[a][b]});
    // R5
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            for (int k = 0; k < nk; ++k)
                p.add_clause({-enc.s_var[a][b], -e_var[b][k], e_var[a][k]});
        }
    // R6
    for (const auto& [r, bp, c] : ix.ex_lhs)
        for (int k = 0; k < nk; ++k) {
            if (ex_targets[k].first != r) continue;
            int b1 = ex_targets[k].second;
            for (int a = 0; a < n; ++a)
                p.add_clause({-e_var[a][k], -enc.s_var[b1][bp], enc.s_var[a][c]});
        }
    // y definitions (both directions; y occurs in mixed polarity)
    for (int bt : ix.between_ids) {
        const Atom& at = ix.atoms.at(bt);
        for (int f = 0; f < nf; ++f) {
            int y = y_var[{bt, f}];
            int x1 = enc.x_var[{at.b1, f}], x2 = enc.x_var[{at.b2, f}];
            p.add_clause({-y, x1});
            p.add_clause({-y, x2});
            p.add_clause({y, -x1, -x2});
        }
    }
    // Step 2: if theta_hat(c) is included in theta(a), force s(a,c)
    for (int a : ix.name_ids)
        for (int c : candidates) {
            if (a == c) continue;
            std::vector<int> clause{enc.s_var[a][c]};
            for (int f = 0; f < nf; ++f) {
                int w = w_var[{a, c, f}];
                int cf = feat_lit(c, f);
                if (cf == 0) {
                    // feature can never witness non-inclusion
                    p.add_clause({-w});
                    continue;
                }
                p.add_clause({-w, cf});
                p.add_clause({-w, -enc.x_var[{a, f}]});
                clause.push_back(w);
            }
            p.add_clause(std::move(clause));
        }
    // Properness condition 2, conditioned on s(a,c)
    for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) {
            if (a == c) continue;
            for (int f = 0; f < nf; ++f) {
                int cf = feat_lit(c, f);
                if (cf == 0) continue;
                int af = feat_lit(a, f);
                if (af == 0)
                    p.add_clause({-enc.s_var[a][c], -cf});
                else
                    p.add_clause({-enc.s_var[a][c], -cf, af});
            }
        }
    // Properness condition 1 for conjunction CIs with natural name conjuncts
    for (const auto& [a1, a2, b] : ix.conj) {
        const Atom& c1 = ix.atoms.at(a1);
        const Atom& c2 = ix.atoms.at(a2);
        if (c1.kind != Atom::Name || !c1.natural || c2.kind != Atom::Name || !c2.natural)
            continue;
        for (int f = 0; f < nf; ++f) {
            int bf = feat_lit(b, f);
            if (bf == 0) continue;
            p.add_clause({-bf, enc.x_var[{a1, f}], enc.x_var[{a2, f}]});
        }
    }
    // Strictness: every name misses at least one feature
    for (int a : ix.name_ids) {
        std::vector<int> clause;
        for (int f = 0; f < nf; ++f) clause.push_back(-enc.x_var[{a, f}]);
        p.add_clause(std::move(clause));
    }
    // Target must stay underivable
    auto atom_of = [&](const ConceptPtr& c) -> int {
        if (c->kind == ConceptKind::Top) return ix.atoms.top_id();
        if (c->kind == ConceptKind::Name) return ix.atoms.find_name(c->label);
        return -1;
    };
    enc.target_a = atom_of(target_lhs);
    enc.target_c = atom_of(target_rhs);
    if (enc.target_a < 0 || enc.target_c < 0) throw EvalError("target CI must relate names");
    p.add_clause({-enc.s_var[enc.target_a][enc.target_c]});
    return enc;
}

// Convenience overload matching the operation signature.
inline SatProblem encode_sat(const NormalTBox& nt, const ConceptInclusion& target) {
    return encode_sat(nt, target.lhs, target.rhs).problem;
}

// ---------------------------------------------------------------------------
// Canonical countermodel (one element per name, one per proper feature
// subset), followed by a repair pass that grows non-natural extensions and
// role relations until every CI of the source TBox holds.

class CanonicalModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline FeatureInterpretation build_canonical_model(const CompletionState& st,
                                                   const FeatureAssignment& fa) {
    const NormalIndex& ix = st.src;
    int nf = static_cast<int>(fa.features.size());
    if (nf < 1) throw CanonicalModelError("empty feature universe");
    if (nf > 20) throw BoundExceeded("feature universe too large for explicit model");
    std::map<std::string, int> feat_index;
    for (int f = 0; f < nf; ++f) feat_index.emplace(fa.features[f], f);
    auto mask_of = [&](const std::set<std::string>& fs) {
        uint32_t m = 0;
        for (const auto& f : fs) {
            auto it = feat_index.find(f);
            if (it == feat_index.end()) throw CanonicalModelError("unknown feature " + f);
            m |= uint32_t(1) << it->second;
        }
        return m;
    };
    uint32_t full = (uint32_t(1) << nf) - 1;

    std::vector<int> names = ix.name_ids;
    std::map<int, uint32_t> theta_mask;
    for (int a : names) {
        auto it = fa.theta.find(ix.atoms.at(a).name);
        if (it == fa.theta.end())
            throw CanonicalModelError("theta undefined on " + ix.atoms.at(a).name);
        uint32_t m = mask_of(it->second);
        if (m == full) throw CanonicalModelError("strictness violated for " + ix.atoms.at(a).name);
        theta_mask[a] = m;
    }
    auto hat_mask = [&](int atom) -> uint32_t {
        const Atom& at = ix.atoms.at(atom);
        if (at.kind == Atom::Top) return 0;
        if (at.kind == Atom::Name) return theta_mask.at(atom);
        return theta_mask.at(at.b1) & theta_mask.at(at.b2);
    };

    // Element universe: one element per name, one per proper subset of F.
    int n_names = static_cast<int>(names.size());
    int n_sets = static_cast<int>(full);  // masks 0 .. full-1
    int total = n_names + n_sets;
    std::vector<uint32_t> pi(total);
    for (int i = 0; i < n_names; ++i) pi[i] = theta_mask.at(names[i]);
    for (int m = 0; m < n_sets; ++m) pi[n_names + m] = static_cast<uint32_t>(m);
    std::map<int, int> name_pos;
    for (int i = 0; i < n_names; ++i) name_pos[names[i]] = i;

    // Extensions per the canonical construction.
    std::map<int, std::vector<bool>> ext;  // name atom -> membership
    for (int a : names) {
        std::vector<bool> e(total, false);
        for (int ap : names)
            if (st.has(ap, a)) e[name_pos[ap]] = true;
        for (int ap : names) {
            if (!ix.atoms.at(ap).natural || !st.has(ap, a)) continue;
            uint32_t tm = theta_mask.at(ap);
            for (int m = 0; m < n_sets; ++m)
                if ((tm & ~uint32_t(m)) == 0) e[n_names + m] = true;
        }
        ext[a] = std::move(e);
    }
    // Roles.
    std::map<int, std::set<std::pair<int, int>>> role_pairs;  // role -> element index pairs
    for (int a : names)
        for (const auto& [r, b] : st.ex[a]) {
            if (name_pos.count(b) == 0) continue;
            role_pairs[r].insert({name_pos[a], name_pos[b]});
            if (ix.atoms.at(a).natural) {
                uint32_t tm = theta_mask.at(a);
                for (int m = 0; m < n_sets; ++m)
                    if ((tm & ~uint32_t(m)) == 0)
                        role_pairs[r].insert({n_names + m, name_pos[b]});
            }
        }

    // Repair: close under the source CIs, growing only non-natural name
    // extensions and role relations. A forced change to a natural name's
    // cone or to the element universe is a hard error.
    auto eval_atom = [&](int atom) -> std::vector<bool> {
        const Atom& at = ix.atoms.at(atom);
        if (at.kind == Atom::Top) return std::vector<bool>(total, true);
        if (at.kind == Atom::Name) return ext.at(atom);
        uint32_t common = hat_mask(atom);
        // a betweenness denotes the cone of the shared features of its
        // operands; with natural cone extensions phi(Bi) equals theta(Bi)
        std::vector<bool> e(total, false);
        for (int i = 0; i < total; ++i) e[i] = (common & ~pi[i]) == 0;
        return e;
    };
    auto force_member = [&](int atom, int elem, bool& changed) {
        const Atom& at = ix.atoms.at(atom);
        if (at.kind == Atom::Top) return;
        if (at.kind == Atom::Name) {
            if (ext.at(atom)[elem]) return;
            if (at.natural)
                throw CanonicalModelError("repair would break natural cone of " + at.name);
            ext.at(atom)[elem] = true;
            changed = true;
            return;
        }
        // betweenness membership is determined by pi alone
        if ((hat_mask(atom) & ~pi[elem]) != 0)
            throw CanonicalModelError("repair demands impossible betweenness membership");
    };
    bool changed = true;
    int guard = 0;
    while (changed) {
        if (++guard > 10000) throw CanonicalModelError("repair did not converge");
        changed = false;
        for (auto [a, c] : ix.plain) {
            std::vector<bool> ea = eval_atom(a);
            for (int i = 0; i < total; ++i)
                if (ea[i]) force_member(c, i, changed);
        }
        for (const auto& [a1, a2, b] : ix.conj) {
            std::vector<bool> e1 = eval_atom(a1), e2 = eval_atom(a2);
            for (int i = 0; i < total; ++i)
                if (e1[i] && e2[i]) force_member(b, i, changed);
        }
        for (const auto& [a, r, b] : ix.ex_rhs) {
            std::vector<bool> ea = eval_atom(a), eb = eval_atom(b);
            for (int i = 0; i < total; ++i) {
                if (!ea[i]) continue;
                bool ok = false;
                for (const auto& [d, e] : role_pairs[r])
                    if (d == i && eb[e]) {
                        ok = true;
                        break;
                    }
                if (!ok) {
                    // attach a successor; the canonical target d_B exists iff
                    // b is a name, otherwise any element of b's extension
                    int tgt = -1;
                    if (name_pos.count(b))
                        tgt = name_pos[b];
                    else
                        for (int j = 0; j < total; ++j)
                            if (eb[j]) {
                                tgt = j;
                                break;
                            }
                    if (tgt < 0) throw CanonicalModelError("no witness for existential filler");
                    role_pairs[r].insert({i, tgt});
                    changed = true;
                }
            }
        }
        for (const auto& [r, a, b] : ix.ex_lhs) {
            std::vector<bool> ea = eval_atom(a);
            for (const auto& [d, e] : role_pairs[r])
                if (ea[e]) force_member(b, d, changed);
        }
    }

    // Materialize.
    FeatureInterpretation out;
    out.features = fa.features;
    auto elem_id = [&](int i) {
        if (i < n_names) return "e_" + ix.atoms.at(names[i]).name;
        return "s" + std::to_string(i - n_names);
    };
    auto feats_of = [&](uint32_t m) {
        std::set<std::string> fs;
        for (int f = 0; f < nf; ++f)
            if (m & (uint32_t(1) << f)) fs.insert(fa.features[f]);
        return fs;
    };
    for (int i = 0; i < total; ++i) out.pi[elem_id(i)] = feats_of(pi[i]);
    for (int a : names) {
        std::set<std::string> e;
        for (int i = 0; i < total; ++i)
            if (ext.at(a)[i]) e.insert(elem_id(i));
        out.name_ext[ix.atoms.at(a).name] = std::move(e);
    }
    for (const auto& [r, pairs] : role_pairs) {
        auto& v = out.role_ext[ix.roles[r]];
        for (const auto& [d, e] : pairs) v.emplace_back(elem_id(d), elem_id(e));
    }
    for (int a : ix.natural_name_ids) out.natural.insert(ix.atoms.at(a).name);
    return out;
}

}  // namespace elbow

#include "feature_reasoner_decide.hpp"
