#pragma once

// Sound (deliberately incomplete) forward-chaining inference for TBoxes with
// non-interference assertions under the geometric semantics.
//
// The fact universe consists of "conjunct-set" atoms: canonical sets of
// concept names and betweenness terms (top is the empty set). Beyond the EL
// completion rules, the engine applies:
//   struct-btw   B_i <= B1 btw B2
//   lemma4       C <= B, D <= B, B natural  =>  btw(C,D) <= B
//   prop4        A ni (C,D), A & C <= B, D <= B, A,B natural => A & btw(C,D) <= B
//   prop4-mirror the (D,C)-guarded symmetric variant
//   prop5        A ni (C,D), A ni (D,C), A&C <= B, A&D <= B => A & btw(C,D) <= B
//   prop6        A ni (C,D), B ni (C,D)  =>  (A & B) ni (C,D)
// Conjunction atoms A&C, A&D, A&btw(C,D) are created lazily per NI triple.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "syntax.hpp"

namespace elbow {

struct GeoReasonerError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace geo_detail {

// Canonical form for natural concepts: conjunctions flattened, conjuncts
// sorted and deduplicated, betweenness operands ordered.
inline ConceptPtr canon(const ConceptPtr& c);

inline void flatten_conj(const ConceptPtr& c, std::vector<ConceptPtr>& out) {
    if (c->kind == ConceptKind::Conj) {
        flatten_conj(c->lhs, out);
        flatten_conj(c->rhs, out);
    } else if (c->kind != ConceptKind::Top) {
        out.push_back(canon(c));
    }
}

inline ConceptPtr canon(const ConceptPtr& c) {
    switch (c->kind) {
        case ConceptKind::Top:
        case ConceptKind::Name:
            return c;
        case ConceptKind::Between: {
            ConceptPtr a = canon(c->lhs), b = canon(c->rhs);
            if (compare(b, a) < 0) std::swap(a, b);
            return make_between(a, b);
        }
        case ConceptKind::Conj: {
            std::vector<ConceptPtr> parts;
            flatten_conj(c, parts);
            std::sort(parts.begin(), parts.end(), ConceptLess{});
            parts.erase(std::unique(parts.begin(), parts.end(),
                                    [](const ConceptPtr& x, const ConceptPtr& y) {
                                        return equal(x, y);
                                    }),
                        parts.end());
            if (parts.empty()) return make_top();
            ConceptPtr out = parts[0];
            for (size_t i = 1; i < parts.size(); ++i) out = make_conj(out, parts[i]);
            return out;
        }
        default:
            throw GeoReasonerError("concept not supported in geometric fact universe: " +
                                   to_string(c));
    }
}

}  // namespace geo_detail

// An atom of the geometric fact universe: a conjunction of names and
// betweenness terms (empty = top). Betweens are stored canonicalized.
struct GeoAtom {
    std::set<std::string> names;
    ConceptSet betweens;

    bool operator<(const GeoAtom& o) const {
        if (names != o.names) return names < o.names;
        return std::lexicographical_compare(betweens.begin(), betweens.end(), o.betweens.begin(),
                                            o.betweens.end(), ConceptLess{});
    }
    bool operator==(const GeoAtom& o) const { return !(*this < o) && !(o < *this); }

    bool subset_of(const GeoAtom& o) const {
        if (!std::includes(o.names.begin(), o.names.end(), names.begin(), names.end()))
            return false;
        for (const auto& b : betweens)
            if (!o.betweens.count(b)) return false;
        return true;
    }
    size_t size() const { return names.size() + betweens.size(); }
};

inline GeoAtom atom_of(const ConceptPtr& c) {
    GeoAtom a;
    std::vector<ConceptPtr> parts;
    geo_detail::flatten_conj(geo_detail::canon(c), parts);
    for (const auto& p : parts) {
        if (p->kind == ConceptKind::Name)
            a.names.insert(p->label);
        else if (p->kind == ConceptKind::Between)
            a.betweens.insert(p);
        else
            throw GeoReasonerError("concept not supported in geometric fact universe: " +
                                   to_string(c));
    }
    return a;
}

inline std::string atom_to_string(const GeoAtom& a) {
    if (a.size() == 0) return "top";
    std::string out;
    for (const auto& n : a.names) out += (out.empty() ? "" : " & ") + n;
    for (const auto& b : a.betweens) out += (out.empty() ? "" : " & ") + to_string(b);
    return out;
}

struct GeoTrace {
    std::string rule;
    std::vector<std::string> premises;
};

struct GeoNiFact {
    int guard;               // atom id
    ConceptPtr first, second;  // canonical natural concepts
};

class GeoFactBase {
public:
    std::vector<GeoAtom> atoms;
    std::map<GeoAtom, int> atom_ids;
    // subsumptions[a] = set of b with (a <= b) derived
    std::vector<std::set<int>> sub;
    std::map<std::pair<int, int>, GeoTrace> traces;
    std::vector<GeoNiFact> ni_facts;
    std::map<std::pair<int, int>, GeoTrace> ni_traces;  // key: (guard, index into ni key list)
    std::set<std::string> natural_names;

    int intern(const GeoAtom& a) {
        auto it = atom_ids.find(a);
        if (it != atom_ids.end()) return it->second;
        int id = static_cast<int>(atoms.size());
        atoms.push_back(a);
        atom_ids.emplace(a, id);
        sub.emplace_back();
        return id;
    }

    bool holds(int a, int b) const { return sub[a].count(b) > 0; }

    std::string fact_string(int a, int b) const {
        return atom_to_string(atoms[a]) + " <= " + atom_to_string(atoms[b]);
    }

    nlohmann::json trace_json(int a, int b) const {
        nlohmann::json out = nlohmann::json::array();
        std::set<std::pair<int, int>> done;
        collect_trace(a, b, out, done);
        return out;
    }

private:
    void collect_trace(int a, int b, nlohmann::json& out,
                       std::set<std::pair<int, int>>& done) const {
        if (!done.insert({a, b}).second) return;
        auto it = traces.find({a, b});
        if (it == traces.end()) return;
        for (const auto& p : it->second.premises) {
            // premises reference fact strings; expand recursively when they
            // name a derived pair fact
            auto fit = fact_index_.find(p);
            if (fit != fact_index_.end()) collect_trace(fit->second.first, fit->second.second, out, done);
        }
        out.push_back({{"rule", it->second.rule},
                       {"premises", it->second.premises},
                       {"conclusion", fact_string(a, b)}});
    }

public:
    std::map<std::string, std::pair<int, int>> fact_index_;  // fact string -> pair

    friend GeoFactBase saturate_geo(const TBox& t, const std::vector<ConceptPtr>& seeds);
};

namespace geo_detail {

struct Saturator {
    const TBox& t;
    GeoFactBase fb;
    std::vector<std::pair<int, int>> worklist;  // newly added pair facts
    // existential facts: a <= some r. b, plus lhs rules some r. v <= w
    struct ExFact {
        int a;
        std::string role;
        int filler;
    };
    std::vector<ExFact> ex_facts;
    std::set<std::tuple<int, std::string, int>> ex_seen;
    struct ExLhs {
        std::string role;
        int filler, rhs;
    };
    std::vector<ExLhs> ex_lhs;
    std::set<std::tuple<int, ConceptPtr, ConceptPtr>> ni_seen;

    explicit Saturator(const TBox& tb) : t(tb) { fb.natural_names = tb.natural_names; }

    bool add_fact(int a, int b, const std::string& rule, std::vector<std::string> premises) {
        if (fb.sub[a].count(b)) return false;
        fb.sub[a].insert(b);
        fb.traces[{a, b}] = GeoTrace{rule, std::move(premises)};
        fb.fact_index_[fb.fact_string(a, b)] = {a, b};
        worklist.push_back({a, b});
        return true;
    }

    // Interns an atom plus all singleton conjuncts and betweenness operand
    // atoms, so projection and structural rules can reach them.
    int add_atom_closure(const GeoAtom& a) {
        int id = fb.intern(a);
        for (const auto& n : a.names) {
            GeoAtom s;
            s.names.insert(n);
            fb.intern(s);
        }
        for (const auto& b : a.betweens) {
            GeoAtom s;
            s.betweens.insert(b);
            fb.intern(s);
            add_atom_closure(atom_of(b->lhs));
            add_atom_closure(atom_of(b->rhs));
        }
        return id;
    }

    int add_concept(const ConceptPtr& c) { return add_atom_closure(atom_of(c)); }

    void seed_tbox() {
        for (const auto& s : t.statements) {
            if (s.is_ci()) {
                const auto& ci = s.ci();
                bool lhs_ex = ci.lhs->kind == ConceptKind::Exists;
                bool rhs_ex = ci.rhs->kind == ConceptKind::Exists;
                if (lhs_ex && rhs_ex)
                    throw GeoReasonerError(
                        "existential on both sides unsupported in geometric saturation");
                if (rhs_ex) {
                    int a = add_concept(ci.lhs);
                    int f = add_concept(ci.rhs->rhs);
                    if (ex_seen.insert({a, ci.rhs->label, f}).second)
                        ex_facts.push_back({a, ci.rhs->label, f});
                } else if (lhs_ex) {
                    int f = add_concept(ci.lhs->rhs);
                    int b = add_concept(ci.rhs);
                    ex_lhs.push_back({ci.lhs->label, f, b});
                } else {
                    int a = add_concept(ci.lhs);
                    int b = add_concept(ci.rhs);
                    add_fact(a, b, "axiom", {});
                }
            } else {
                const auto& ni = s.ni();
                int g = add_concept(ni.guard);
                ConceptPtr c = canon(make_name(ni.first));
                ConceptPtr d = canon(make_name(ni.second));
                if (ni_seen.insert({g, c, d}).second) {
                    fb.ni_facts.push_back({g, c, d});
                    fb.ni_traces[{g, static_cast<int>(fb.ni_facts.size()) - 1}] =
                        GeoTrace{"ni-axiom", {}};
                }
            }
        }
        fb.intern(GeoAtom{});  // top
    }

    // Base subset facts: S <= T whenever T's conjuncts are among S's.
    // Covers R1 (reflexivity), R2 (<= top) and projection.
    void subset_facts_from(size_t first_new_atom) {
        size_t n = fb.atoms.size();
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = (i >= first_new_atom ? 0 : first_new_atom); j < n; ++j) {
                if (fb.atoms[j].subset_of(fb.atoms[i]))
                    add_fact(static_cast<int>(i), static_cast<int>(j),
                             i == j ? "R1" : (fb.atoms[j].size() == 0 ? "R2" : "proj"), {});
            }
        }
    }

    // Demand the lazily created conjunction atoms for one NI triple.
    void demand_ni_atoms(const GeoNiFact& ni) {
        const GeoAtom g = fb.atoms[ni.guard];  // copy: interning may reallocate fb.atoms
        GeoAtom bt;
        ConceptPtr b = canon(make_between(ni.first, ni.second));
        bt.betweens.insert(b);
        add_atom_closure(bt);
        auto with = [&](const GeoAtom& extra) {
            GeoAtom u = g;
            u.names.insert(extra.names.begin(), extra.names.end());
            for (const auto& x : extra.betweens) u.betweens.insert(x);
            add_atom_closure(u);
        };
        with(atom_of(ni.first));
        with(atom_of(ni.second));
        with(bt);
    }

    void structural_between() {
        for (size_t i = 0; i < fb.atoms.size(); ++i) {
            const GeoAtom& a = fb.atoms[i];
            if (a.names.size() != 0 || a.betweens.size() != 1) continue;
            ConceptPtr b = *a.betweens.begin();
            for (const auto& op : {b->lhs, b->rhs}) {
                auto it = fb.atom_ids.find(atom_of(op));
                if (it == fb.atom_ids.end()) continue;
                add_fact(it->second, static_cast<int>(i), "struct-btw",
                         {to_string(op) + " is an operand of " + to_string(b)});
            }
        }
    }

    std::optional<int> find_atom(const GeoAtom& a) const {
        auto it = fb.atom_ids.find(a);
        if (it == fb.atom_ids.end()) return std::nullopt;
        return it->second;
    }

    std::optional<int> singleton_name(const std::string& n) const {
        GeoAtom a;
        a.names.insert(n);
        return find_atom(a);
    }

    void lemma4() {
        for (size_t i = 0; i < fb.atoms.size(); ++i) {
            const GeoAtom& a = fb.atoms[i];
            if (a.names.size() != 0 || a.betweens.size() != 1) continue;
            ConceptPtr b = *a.betweens.begin();
            auto ca = find_atom(atom_of(b->lhs));
            auto da = find_atom(atom_of(b->rhs));
            if (!ca || !da) continue;
            for (const auto& bn : fb.natural_names) {
                auto bid = singleton_name(bn);
                if (!bid) continue;
                if (fb.holds(*ca, *bid) && fb.holds(*da, *bid))
                    add_fact(static_cast<int>(i), *bid, "lemma4",
                             {fb.fact_string(*ca, *bid), fb.fact_string(*da, *bid)});
            }
        }
    }

    // R4 analogue: S <= every conjunct of T implies S <= T.
    void conj_intro() {
        size_t n = fb.atoms.size();
        for (size_t ti = 0; ti < n; ++ti) {
            const GeoAtom& tgt = fb.atoms[ti];
            if (tgt.size() < 2) continue;
            std::vector<int> parts;
            bool all = true;
            for (const auto& nm : tgt.names) {
                auto id = singleton_name(nm);
                if (!id) {
                    all = false;
                    break;
                }
                parts.push_back(*id);
            }
            if (all)
                for (const auto& b : tgt.betweens) {
                    GeoAtom s;
                    s.betweens.insert(b);
                    auto id = find_atom(s);
                    if (!id) {
                        all = false;
                        break;
                    }
                    parts.push_back(*id);
                }
            if (!all) continue;
            for (size_t si = 0; si < n; ++si) {
                if (si == ti || fb.holds(static_cast<int>(si), static_cast<int>(ti))) continue;
                bool ok = true;
                for (int p : parts)
                    if (!fb.holds(static_cast<int>(si), p)) {
                        ok = false;
                        break;
                    }
                if (!ok) continue;
                std::vector<std::string> prem;
                for (int p : parts) prem.push_back(fb.fact_string(static_cast<int>(si), p));
                add_fact(static_cast<int>(si), static_cast<int>(ti), "R4", std::move(prem));
            }
        }
    }

    void transitivity() {
        // Semi-naive: closes R3 over the current worklist.
        size_t head = 0;
        std::vector<std::pair<int, int>> local = std::move(worklist);
        worklist.clear();
        // in-edges index
        while (head < local.size()) {
            auto [a, b] = local[head++];
            for (int c : std::vector<int>(fb.sub[b].begin(), fb.sub[b].end())) {
                if (c == b || fb.holds(a, c) || a == c) continue;
                if (add_fact(a, c, "R3", {fb.fact_string(a, b), fb.fact_string(b, c)})) {
                    local.push_back({a, c});
                    worklist.pop_back();  // keep local as the only frontier
                }
            }
            for (size_t x = 0; x < fb.atoms.size(); ++x) {
                int xi = static_cast<int>(x);
                if (xi == a || !fb.holds(xi, a) || fb.holds(xi, b) || xi == b) continue;
                if (add_fact(xi, b, "R3", {fb.fact_string(xi, a), fb.fact_string(a, b)})) {
                    local.push_back({xi, b});
                    worklist.pop_back();
                }
            }
        }
    }

    void existentials() {
        // R5: S <= T, T <= some r.U  =>  S <= some r.U
        bool changed = true;
        while (changed) {
            changed = false;
            size_t n = ex_facts.size();
            for (size_t k = 0; k < n; ++k) {
                ExFact f = ex_facts[k];
                for (size_t s = 0; s < fb.atoms.size(); ++s) {
                    int si = static_cast<int>(s);
                    if (si != f.a && fb.holds(si, f.a) &&
                        ex_seen.insert({si, f.role, f.filler}).second) {
                        ex_facts.push_back({si, f.role, f.filler});
                        changed = true;
                    }
                }
            }
            // R6: S <= some r.U, U <= V, some r.V <= W  =>  S <= W
            for (const auto& f : ex_facts) {
                for (const auto& e : ex_lhs) {
                    if (e.role != f.role) continue;
                    if (f.filler == e.filler || fb.holds(f.filler, e.filler)) {
                        if (add_fact(f.a, e.rhs, "R6",
                                     {atom_to_string(fb.atoms[f.a]) + " <= some " + f.role + "." +
                                          atom_to_string(fb.atoms[f.filler]),
                                      fb.fact_string(f.filler, e.filler)}))
                            changed = true;
                    }
                }
            }
            if (changed) transitivity();
        }
    }

    void ni_rules() {
        // prop6: union guards
        size_t n = fb.ni_facts.size();
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = i + 1; j < n; ++j) {
                const GeoNiFact x = fb.ni_facts[i];  // copies: push_back below reallocates
                const GeoNiFact y = fb.ni_facts[j];
                if (!equal(x.first, y.first) || !equal(x.second, y.second)) continue;
                GeoAtom u = fb.atoms[x.guard];
                const GeoAtom& g2 = fb.atoms[y.guard];
                u.names.insert(g2.names.begin(), g2.names.end());
                for (const auto& b : g2.betweens) u.betweens.insert(b);
                int gid = add_atom_closure(u);
                if (ni_seen.insert({gid, x.first, x.second}).second) {
                    fb.ni_facts.push_back({gid, x.first, x.second});
                    fb.ni_traces[{gid, static_cast<int>(fb.ni_facts.size()) - 1}] = GeoTrace{
                        "prop6",
                        {atom_to_string(fb.atoms[x.guard]) + " ni (" + to_string(x.first) + ", " +
                             to_string(x.second) + ")",
                         atom_to_string(fb.atoms[y.guard]) + " ni (" + to_string(x.first) + ", " +
                             to_string(x.second) + ")"}};
                }
            }
        }
        // prop4 / mirror / prop5
        for (size_t ni_idx = 0; ni_idx < fb.ni_facts.size(); ++ni_idx) {
            const GeoNiFact ni = fb.ni_facts[ni_idx];
            demand_ni_atoms(ni);
            const GeoAtom g = fb.atoms[ni.guard];  // copy: interning may reallocate fb.atoms
            bool guard_natural = true;
            for (const auto& nm : g.names)
                if (!fb.natural_names.count(nm)) guard_natural = false;
            auto join = [&](const ConceptPtr& c) {
                GeoAtom u = g;
                GeoAtom ca = atom_of(c);
                u.names.insert(ca.names.begin(), ca.names.end());
                for (const auto& b : ca.betweens) u.betweens.insert(b);
                return find_atom(u);
            };
            ConceptPtr btc = geo_detail::canon(make_between(ni.first, ni.second));
            GeoAtom btu = g;
            btu.betweens.insert(btc);
            auto concl = find_atom(btu);
            auto gc = join(ni.first);
            auto gd = join(ni.second);
            auto cid = find_atom(atom_of(ni.first));
            auto did = find_atom(atom_of(ni.second));
            if (!concl || !gc || !gd || !cid || !did) continue;
            std::string ni_str = atom_to_string(g) + " ni (" + to_string(ni.first) + ", " +
                                 to_string(ni.second) + ")";
            bool mirror = false;
            for (const auto& o : fb.ni_facts)
                if (o.guard == ni.guard && equal(o.first, ni.second) && equal(o.second, ni.first))
                    mirror = true;
            for (size_t bi = 0; bi < fb.atoms.size(); ++bi) {
                const GeoAtom& btm = fb.atoms[bi];
                if (btm.names.size() != 1 || btm.betweens.size() != 0) continue;
                const std::string& bname = *btm.names.begin();
                int bid = static_cast<int>(bi);
                bool b_natural = fb.natural_names.count(bname) > 0;
                // prop4: guard ni (C,D), guard&C <= B, D <= B, guard,B natural
                if (guard_natural && b_natural && fb.holds(*gc, bid) && fb.holds(*did, bid))
                    add_fact(*concl, bid, "prop4",
                             {ni_str, fb.fact_string(*gc, bid), fb.fact_string(*did, bid)});
                // prop4-mirror: guard ni (D,C) premise via the flipped fact
                if (guard_natural && b_natural && mirror && fb.holds(*gd, bid) &&
                    fb.holds(*cid, bid))
                    add_fact(*concl, bid, "prop4-mirror",
                             {ni_str, fb.fact_string(*gd, bid), fb.fact_string(*cid, bid)});
                // prop5: both guard orders, guard&C <= B, guard&D <= B
                if (mirror && fb.holds(*gc, bid) && fb.holds(*gd, bid))
                    add_fact(*concl, bid, "prop5",
                             {ni_str, fb.fact_string(*gc, bid), fb.fact_string(*gd, bid)});
            }
        }
    }

    void run(const std::vector<ConceptPtr>& seeds) {
        seed_tbox();
        for (const auto& c : seeds) add_concept(c);
        for (size_t i = 0; i < fb.ni_facts.size(); ++i) demand_ni_atoms(fb.ni_facts[i]);
        size_t known_atoms = 0;
        size_t guard_rounds = 0;
        for (;;) {
            if (fb.atoms.size() > known_atoms) {
                subset_facts_from(known_atoms == 0 ? 0 : known_atoms);
                known_atoms = fb.atoms.size();
                structural_between();
            }
            size_t facts_before = fb.traces.size();
            size_t ni_before = fb.ni_facts.size();
            transitivity();
            conj_intro();
            transitivity();
            lemma4();
            transitivity();
            existentials();
            ni_rules();
            transitivity();
            if (fb.traces.size() == facts_before && fb.ni_facts.size() == ni_before &&
                fb.atoms.size() == known_atoms)
                break;
            if (++guard_rounds > 10000)
                throw GeoReasonerError("geometric saturation failed to converge");
        }
    }
};

}  // namespace geo_detail

inline GeoFactBase saturate_geo(const TBox& t, const std::vector<ConceptPtr>& seeds = {}) {
    geo_detail::Saturator s(t);
    s.run(seeds);
    return std::move(s.fb);
}

struct GeoEntailment {
    bool derivable = false;
    nlohmann::json trace;  // empty when Unknown
};

inline GeoEntailment entails_geo_sound(const TBox& t, const ConceptInclusion& ci) {
    GeoFactBase fb = saturate_geo(t, {ci.lhs, ci.rhs});
    GeoEntailment out;
    auto li = fb.atom_ids.find(atom_of(ci.lhs));
    auto ri = fb.atom_ids.find(atom_of(ci.rhs));
    if (li == fb.atom_ids.end() || ri == fb.atom_ids.end()) return out;
    if (fb.holds(li->second, ri->second)) {
        out.derivable = true;
        out.trace = fb.trace_json(li->second, ri->second);
    }
    return out;
}

}  // namespace elbow
