#pragma once

// Generalized CP-nets: improving-flip semantics, dominance and consistency
// at desk scale, the reduction to a TBox with non-interference assertions,
// and the explicit geometric hardness model with per-CI certificates.
//
// Text format:
//   atoms a b c;
//   a & !b : c;        # condition a and not-b, prefer c over not-c
//   top : a;           # unconditional rule

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "syntax.hpp"

namespace elbow {

struct GcpError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GcpLiteral {
    int atom = 0;
    bool positive = true;
};

struct GcpRule {
    std::vector<GcpLiteral> condition;  // distinct atoms
    GcpLiteral flipped;                 // its atom must not occur in the condition
};

struct GcpNet {
    std::vector<std::string> atoms;
    std::vector<GcpRule> rules;

    int atom_index(const std::string& name) const {
        for (size_t i = 0; i < atoms.size(); ++i)
            if (atoms[i] == name) return static_cast<int>(i);
        throw GcpError("unknown atom: " + name);
    }
};

// An outcome is a total assignment; bit i set = atom i true. Outcome index
// doubles as the coordinate index of the hardness model (binary-counter
// order over atoms a1..am).
using Outcome = uint32_t;

inline bool outcome_satisfies(Outcome w, const GcpLiteral& l) {
    return ((w >> l.atom) & 1) == (l.positive ? 1u : 0u);
}

inline bool outcome_satisfies(Outcome w, const std::vector<GcpLiteral>& lits) {
    for (const auto& l : lits)
        if (!outcome_satisfies(w, l)) return false;
    return true;
}

inline std::string outcome_to_string(const GcpNet& net, Outcome w) {
    std::string out;
    for (size_t i = 0; i < net.atoms.size(); ++i) {
        if (!out.empty()) out += " & ";
        if (!((w >> i) & 1)) out += "!";
        out += net.atoms[i];
    }
    return out.empty() ? "top" : out;
}

// Parses "a & !b & c"; every atom of the net must be assigned exactly once.
inline Outcome parse_outcome(const GcpNet& net, const std::string& text) {
    Outcome w = 0;
    std::set<int> seen;
    std::istringstream is(text);
    std::string tok;
    bool expect_lit = true;
    while (is >> tok) {
        if (tok == "&") {
            if (expect_lit) throw GcpError("misplaced '&' in outcome: " + text);
            expect_lit = true;
            continue;
        }
        if (!expect_lit) throw GcpError("missing '&' in outcome: " + text);
        expect_lit = false;
        bool pos = true;
        if (!tok.empty() && tok[0] == '!') {
            pos = false;
            tok = tok.substr(1);
        }
        int a = net.atom_index(tok);
        if (!seen.insert(a).second) throw GcpError("atom assigned twice in outcome: " + tok);
        if (pos) w |= Outcome(1) << a;
    }
    if (seen.size() != net.atoms.size())
        throw GcpError("outcome must assign every atom of the net: " + text);
    return w;
}

inline GcpNet parse_gcpnet(const std::string& text) {
    GcpNet net;
    // strip comments
    std::string clean;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        auto h = line.find('#');
        clean += (h == std::string::npos ? line : line.substr(0, h)) + "\n";
    }
    std::vector<std::string> stmts;
    std::string cur;
    for (char c : clean) {
        if (c == ';') {
            stmts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    {
        std::istringstream rest(cur);
        std::string leftover;
        if (rest >> leftover) throw GcpError("trailing text after last ';': " + leftover);
    }
    bool have_atoms = false;
    for (const auto& stmt : stmts) {
        std::istringstream is(stmt);
        std::string first;
        if (!(is >> first)) continue;
        if (first == "atoms") {
            if (have_atoms) throw GcpError("duplicate atoms declaration");
            have_atoms = true;
            std::string a;
            std::set<std::string> seen;
            while (is >> a) {
                if (!seen.insert(a).second) throw GcpError("duplicate atom: " + a);
                net.atoms.push_back(a);
            }
            if (net.atoms.empty()) throw GcpError("empty atoms declaration");
            continue;
        }
        if (!have_atoms) throw GcpError("rule before atoms declaration");
        auto colon = stmt.find(':');
        if (colon == std::string::npos) throw GcpError("rule missing ':': " + stmt);
        std::string cond_text = stmt.substr(0, colon);
        std::string flip_text = stmt.substr(colon + 1);
        GcpRule rule;
        auto parse_lit = [&](const std::string& tok) {
            GcpLiteral l;
            std::string t = tok;
            if (!t.empty() && t[0] == '!') {
                l.positive = false;
                t = t.substr(1);
            }
            l.atom = net.atom_index(t);
            return l;
        };
        {
            std::istringstream cs(cond_text);
            std::string tok;
            bool expect_lit = true;
            std::set<int> seen;
            while (cs >> tok) {
                if (tok == "&") {
                    if (expect_lit) throw GcpError("misplaced '&' in rule: " + stmt);
                    expect_lit = true;
                    continue;
                }
                if (!expect_lit) throw GcpError("missing '&' in rule: " + stmt);
                expect_lit = false;
                if (tok == "top") continue;
                GcpLiteral l = parse_lit(tok);
                if (!seen.insert(l.atom).second)
                    throw GcpError("condition mentions an atom twice: " + stmt);
                rule.condition.push_back(l);
            }
            if (expect_lit && !rule.condition.empty())
                throw GcpError("dangling '&' in rule: " + stmt);
        }
        {
            std::istringstream fs(flip_text);
            std::string tok;
            if (!(fs >> tok)) throw GcpError("rule missing flipped literal: " + stmt);
            rule.flipped = parse_lit(tok);
            std::string extra;
            if (fs >> extra) throw GcpError("rule flips more than one literal: " + stmt);
        }
        for (const auto& l : rule.condition)
            if (l.atom == rule.flipped.atom)
                throw GcpError("flipped atom may not occur in the condition: " + stmt);
        net.rules.push_back(rule);
    }
    if (!have_atoms) throw GcpError("missing atoms declaration");
    return net;
}

inline std::string render_gcpnet(const GcpNet& net) {
    std::ostringstream os;
    os << "atoms";
    for (const auto& a : net.atoms) os << " " << a;
    os << ";\n";
    for (const auto& r : net.rules) {
        if (r.condition.empty()) {
            os << "top";
        } else {
            for (size_t i = 0; i < r.condition.size(); ++i) {
                if (i) os << " & ";
                if (!r.condition[i].positive) os << "!";
                os << net.atoms[r.condition[i].atom];
            }
        }
        os << " : " << (r.flipped.positive ? "" : "!") << net.atoms[r.flipped.atom] << ";\n";
    }
    return os.str();
}

// All one-step improving flips: rule i applies when w satisfies the condition
// and the negation of the flipped literal; the flip makes the literal true.
inline std::vector<std::pair<int, Outcome>> improving_flips(const GcpNet& net, Outcome w) {
    std::vector<std::pair<int, Outcome>> out;
    for (size_t i = 0; i < net.rules.size(); ++i) {
        const auto& r = net.rules[i];
        if (!outcome_satisfies(w, r.condition)) continue;
        if (outcome_satisfies(w, r.flipped)) continue;
        out.push_back({static_cast<int>(i), w ^ (Outcome(1) << r.flipped.atom)});
    }
    return out;
}

inline void check_desk_scale(const GcpNet& net, size_t max_atoms) {
    if (net.atoms.size() > max_atoms)
        throw GcpError("net exceeds the supported bound of " + std::to_string(max_atoms) +
                       " atoms");
}

struct DominanceResult {
    bool dominates = false;
    std::vector<std::pair<int, Outcome>> flips;  // (rule index, resulting outcome)
};

inline DominanceResult dominates(const GcpNet& net, Outcome from, Outcome to) {
    check_desk_scale(net, 14);
    DominanceResult res;
    if (from == to) {
        res.dominates = true;
        return res;
    }
    size_t n = size_t(1) << net.atoms.size();
    std::vector<int> prev_outcome(n, -1), prev_rule(n, -1);
    std::vector<char> seen(n, 0);
    std::queue<Outcome> q;
    q.push(from);
    seen[from] = 1;
    while (!q.empty()) {
        Outcome w = q.front();
        q.pop();
        for (auto [ri, w2] : improving_flips(net, w)) {
            if (seen[w2]) continue;
            seen[w2] = 1;
            prev_outcome[w2] = static_cast<int>(w);
            prev_rule[w2] = ri;
            if (w2 == to) {
                res.dominates = true;
                for (Outcome c = to; c != from; c = Outcome(prev_outcome[c]))
                    res.flips.push_back({prev_rule[c], c});
                std::reverse(res.flips.begin(), res.flips.end());
                return res;
            }
            q.push(w2);
        }
    }
    return res;
}

inline bool is_consistent(const GcpNet& net) {
    check_desk_scale(net, 14);
    size_t n = size_t(1) << net.atoms.size();
    // colors: 0 unvisited, 1 on stack, 2 done
    std::vector<char> color(n, 0);
    for (Outcome start = 0; start < n; ++start) {
        if (color[start]) continue;
        std::vector<std::pair<Outcome, size_t>> stack{{start, 0}};
        color[start] = 1;
        while (!stack.empty()) {
            auto& [w, next] = stack.back();
            auto flips = improving_flips(net, w);
            if (next >= flips.size()) {
                color[w] = 2;
                stack.pop_back();
                continue;
            }
            Outcome w2 = flips[next++].second;
            if (color[w2] == 1) return false;
            if (color[w2] == 0) {
                color[w2] = 1;
                stack.push_back({w2, 0});
            }
        }
    }
    return true;
}

// ---- Reduction to a TBox with non-interference assertions ----

inline std::string literal_concept_name(const GcpNet& net, const GcpLiteral& l) {
    return (l.positive ? "A_" : "Abar_") + net.atoms[l.atom];
}

inline ConceptPtr tau_literals(const GcpNet& net, std::vector<GcpLiteral> lits) {
    std::sort(lits.begin(), lits.end(),
              [](const GcpLiteral& a, const GcpLiteral& b) { return a.atom < b.atom; });
    ConceptPtr out;
    for (const auto& l : lits) {
        ConceptPtr n = make_name(literal_concept_name(net, l));
        out = out ? make_conj(out, n) : n;
    }
    return out ? out : make_top();
}

inline ConceptPtr tau_outcome(const GcpNet& net, Outcome w) {
    std::vector<GcpLiteral> lits;
    for (size_t i = 0; i < net.atoms.size(); ++i)
        lits.push_back({static_cast<int>(i), ((w >> i) & 1) != 0});
    return tau_literals(net, lits);
}

inline TBox reduce_to_tbox(const GcpNet& net, Outcome initial) {
    if (!is_consistent(net)) throw GcpError("reduction requires a consistent net");
    TBox t;
    for (size_t i = 0; i < net.atoms.size(); ++i) {
        t.natural_names.insert("A_" + net.atoms[i]);
        t.natural_names.insert("Abar_" + net.atoms[i]);
    }
    t.natural_names.insert("Z");
    ConceptPtr z = make_name("Z");
    t.add_ci(tau_outcome(net, initial), z);  // (6)
    for (size_t i = 0; i < net.rules.size(); ++i) {
        const auto& r = net.rules[i];
        std::string wi = "W" + std::to_string(i + 1);
        std::string xi = "X" + std::to_string(i + 1);
        t.natural_names.insert(wi);
        t.natural_names.insert(xi);
        std::vector<GcpLiteral> with_q = r.condition, with_notq = r.condition;
        with_q.push_back(r.flipped);
        with_notq.push_back({r.flipped.atom, !r.flipped.positive});
        t.add_ci(make_name(xi), z);                                               // (7)
        t.add_ci(tau_literals(net, with_q), make_between(make_name(wi), make_name(xi)));  // (8)
        t.add_ci(make_name(wi), tau_literals(net, with_notq));                    // (9)
        t.add_ci(tau_literals(net, with_notq), make_name(wi));                    // (10)
        std::set<int> mentioned;
        for (const auto& l : r.condition) mentioned.insert(l.atom);
        mentioned.insert(r.flipped.atom);
        for (size_t j = 0; j < net.atoms.size(); ++j) {
            if (mentioned.count(static_cast<int>(j))) continue;
            t.add_ni(make_name("A_" + net.atoms[j]), wi, xi);
            t.add_ni(make_name("Abar_" + net.atoms[j]), wi, xi);
        }
    }
    return t;
}

inline ConceptInclusion target_ci(const GcpNet& net, Outcome target) {
    return {tau_outcome(net, target), make_name("Z")};
}

// ---- Explicit geometric hardness model ----

struct HardnessModel {
    GeometricModel model;
    std::vector<CICertificate> certificates;
};

inline HardnessModel build_hardness_model(const GcpNet& net, Outcome initial) {
    check_desk_scale(net, 4);
    if (!is_consistent(net)) throw GcpError("hardness model requires a consistent net");
    HardnessModel out;
    const int m = static_cast<int>(net.atoms.size());
    const int n = 1 << m;  // one coordinate per outcome
    out.model.dimension = n;
    auto point = [&](Outcome w) { return unit_vector(n, static_cast<int>(w)); };
    // literal regions: faces of the standard simplex
    for (int i = 0; i < m; ++i) {
        for (bool pos : {true, false}) {
            VRegion r;
            r.kind = RegionKind::SimplexFace;
            for (Outcome w = 0; w < Outcome(n); ++w)
                if (outcome_satisfies(w, {i, pos})) r.vertices.push_back(point(w));
            std::string name = literal_concept_name(net, {i, pos});
            out.model.concept_regions[name] = std::move(r);
            out.model.natural_names.insert(name);
        }
    }
    VRegion z;
    z.kind = RegionKind::General;
    z.vertices.push_back(point(initial));
    for (size_t i = 0; i < net.rules.size(); ++i) {
        const auto& r = net.rules[i];
        std::string wi = "W" + std::to_string(i + 1);
        std::string xi = "X" + std::to_string(i + 1);
        VRegion w_region;
        w_region.kind = RegionKind::SimplexFace;
        VRegion x_region;
        x_region.kind = RegionKind::General;
        for (Outcome w = 0; w < Outcome(n); ++w) {
            if (!outcome_satisfies(w, r.condition)) continue;
            if (outcome_satisfies(w, r.flipped)) continue;
            Outcome w2 = w ^ (Outcome(1) << r.flipped.atom);
            w_region.vertices.push_back(point(w));
            // flip point: -1 at the source outcome, 2 at the target outcome
            RationalVector p(n, Rational(0));
            p[w] = -1;
            p[w2] = 2;
            x_region.vertices.push_back(std::move(p));
        }
        for (const auto& v : x_region.vertices) z.vertices.push_back(v);
        out.model.concept_regions[wi] = std::move(w_region);
        out.model.concept_regions[xi] = std::move(x_region);
        out.model.natural_names.insert(wi);
        out.model.natural_names.insert(xi);
    }
    out.model.concept_regions["Z"] = std::move(z);
    out.model.natural_names.insert("Z");
    // Certificates mirror the reduction CIs (6)-(10).
    out.certificates.push_back({{tau_outcome(net, initial), make_name("Z")}, {point(initial)}});
    for (size_t i = 0; i < net.rules.size(); ++i) {
        const auto& r = net.rules[i];
        std::string wi = "W" + std::to_string(i + 1);
        std::string xi = "X" + std::to_string(i + 1);
        std::vector<GcpLiteral> with_q = r.condition, with_notq = r.condition;
        with_q.push_back(r.flipped);
        with_notq.push_back({r.flipped.atom, !r.flipped.positive});
        out.certificates.push_back(
            {{make_name(xi), make_name("Z")}, out.model.concept_regions[xi].vertices});
        std::vector<RationalVector> flipped_points;
        for (Outcome w = 0; w < Outcome(n); ++w)
            if (outcome_satisfies(w, with_q)) flipped_points.push_back(point(w));
        out.certificates.push_back(
            {{tau_literals(net, with_q), make_between(make_name(wi), make_name(xi))},
             std::move(flipped_points)});
        out.certificates.push_back(
            {{make_name(wi), tau_literals(net, with_notq)}, out.model.concept_regions[wi].vertices});
        out.certificates.push_back(
            {{tau_literals(net, with_notq), make_name(wi)}, out.model.concept_regions[wi].vertices});
    }
    return out;
}

struct ReductionReport {
    bool dominates = false;
    std::vector<std::pair<int, Outcome>> flips;
    bool membership = false;
    bool agree = false;  // dominance == membership (trivially true for target == initial)
};

inline ReductionReport verify_reduction(const GcpNet& net, Outcome initial, Outcome target) {
    check_desk_scale(net, 4);
    ReductionReport rep;
    DominanceResult dom = dominates(net, initial, target);
    rep.dominates = dom.dominates;
    rep.flips = std::move(dom.flips);
    HardnessModel hm = build_hardness_model(net, initial);
    rep.membership = hull_membership(unit_vector(hm.model.dimension, static_cast<int>(target)),
                                     hm.model.concept_regions.at("Z"));
    rep.agree = (target == initial) ? true : (rep.dominates == rep.membership);
    return rep;
}

}  // namespace elbow
