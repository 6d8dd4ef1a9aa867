#pragma once

// Shared test utilities: deterministic RNG, random-instance generators, and
// brute-force oracles used to cross-check the library implementations.

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "elbow/feature_model.hpp"
#include "elbow/gcpnet.hpp"
#include "elbow/prop_bridge.hpp"
#include "elbow/syntax.hpp"

namespace testutil {

// splitmix64: reproducible across platforms, unlike std::mt19937 distributions.
struct Rng {
    uint64_t state;
    explicit Rng(uint64_t seed) : state(seed) {}
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // uniform in [lo, hi] inclusive
    int range(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<uint64_t>(hi - lo + 1)); }
    bool coin() { return (next() & 1) != 0; }
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// ---------------------------------------------------------------------------
// Random valid feature interpretations (|F| <= 4). Elements cover every
// proper subset of F exactly once plus a few random duplicates, so Def.-1
// conditions 3 and 4 hold by construction. Names N1..N3 are natural by
// construction (extension = cone of a chosen feature set); C1, C2 get
// arbitrary extensions.
inline elbow::FeatureInterpretation random_interpretation(Rng& rng) {
    elbow::FeatureInterpretation i;
    int k = rng.range(1, 4);
    for (int f = 0; f < k; ++f) i.features.push_back("f" + std::to_string(f + 1));
    int full = (1 << k) - 1;
    std::vector<std::string> elems;
    auto feature_set = [&](int mask) {
        std::set<std::string> fs;
        for (int f = 0; f < k; ++f)
            if (mask & (1 << f)) fs.insert(i.features[f]);
        return fs;
    };
    for (int mask = 0; mask < full; ++mask) {
        std::string d = "d" + std::to_string(mask);
        i.pi[d] = feature_set(mask);
        elems.push_back(d);
    }
    int dupes = rng.range(0, 3);
    for (int j = 0; j < dupes; ++j) {
        std::string d = "x" + std::to_string(j);
        i.pi[d] = feature_set(rng.range(0, full - 1));
        elems.push_back(d);
    }
    for (int n = 1; n <= 3; ++n) {
        std::string name = "N" + std::to_string(n);
        int intent = rng.range(0, full);  // full set => empty extension
        std::set<std::string> want = feature_set(intent);
        std::set<std::string> ext;
        for (const auto& d : elems) {
            bool all = true;
            for (const auto& f : want)
                if (!i.pi[d].count(f)) all = false;
            if (all && intent != full) ext.insert(d);
        }
        i.name_ext[name] = ext;
        i.natural.insert(name);
    }
    for (int n = 1; n <= 2; ++n) {
        std::set<std::string> ext;
        for (const auto& d : elems)
            if (rng.coin()) ext.insert(d);
        i.name_ext["C" + std::to_string(n)] = ext;
    }
    std::vector<std::pair<std::string, std::string>> pairs;
    int np = rng.range(0, 4);
    for (int j = 0; j < np; ++j)
        pairs.push_back({elems[rng.range(0, (int)elems.size() - 1)],
                         elems[rng.range(0, (int)elems.size() - 1)]});
    i.role_ext["r"] = pairs;
    return i;
}

// ---------------------------------------------------------------------------
// Random small TBoxes (<= 6 names, <= 8 CIs, <= 2 between-RHS CIs). All
// names are declared natural so every generated shape is well-formed.
inline elbow::TBox random_tbox(Rng& rng, bool allow_exists = true) {
    using namespace elbow;
    TBox t;
    int n = rng.range(2, 6);
    std::vector<std::string> names;
    for (int j = 0; j < n; ++j) {
        names.push_back(std::string(1, static_cast<char>('A' + j)));
        t.natural_names.insert(names.back());
    }
    auto nm = [&] { return make_name(names[rng.range(0, n - 1)]); };
    int ncis = rng.range(1, 8), betweens = 0;
    for (int j = 0; j < ncis; ++j) {
        int shape = rng.range(0, allow_exists ? 4 : 2);
        switch (shape) {
            case 0: t.add_ci(nm(), nm()); break;
            case 1: t.add_ci(make_conj(nm(), nm()), nm()); break;
            case 2:
                if (betweens < 2) {
                    t.add_ci(nm(), make_between(nm(), nm()));
                    ++betweens;
                } else {
                    t.add_ci(nm(), nm());
                }
                break;
            case 3: t.add_ci(nm(), make_exists("r", nm())); break;
            default: t.add_ci(make_exists("r", nm()), nm()); break;
        }
    }
    return t;
}

// ---------------------------------------------------------------------------
// Random clause sets over <= max_atoms atoms; every clause gets at least one
// negative literal unless require_negative is false.
inline elbow::Clause random_clause(Rng& rng, int num_atoms, bool require_negative) {
    elbow::Clause c;
    int len = rng.range(1, 3);
    for (int j = 0; j < len; ++j) {
        std::string a = "a" + std::to_string(rng.range(1, num_atoms));
        if (c.positives.count(a) || c.negatives.count(a)) continue;
        (rng.coin() ? c.positives : c.negatives).insert(a);
    }
    if (c.positives.empty() && c.negatives.empty()) c.negatives.insert("a1");
    if (require_negative && c.negatives.empty()) {
        std::string a = *c.positives.begin();
        c.positives.erase(a);
        c.negatives.insert(a);
        if (c.positives.empty() && c.negatives.empty()) c.negatives.insert("a1");
    }
    return c;
}

inline std::vector<elbow::Clause> random_clause_set(Rng& rng, int num_atoms, int max_clauses,
                                                    bool require_negative) {
    std::vector<elbow::Clause> out;
    int k = rng.range(1, max_clauses);
    for (int j = 0; j < k; ++j) out.push_back(random_clause(rng, num_atoms, require_negative));
    return out;
}

// ---------------------------------------------------------------------------
// Random consistent GCP-nets with m <= max_atoms atoms and <= 6 rules. The
// flipped literal's atom never occurs in the rule condition. Retries until
// the flip graph is acyclic.
inline elbow::GcpNet random_consistent_net(Rng& rng, int max_atoms = 4) {
    using namespace elbow;
    for (;;) {
        GcpNet net;
        int m = rng.range(1, max_atoms);
        for (int j = 0; j < m; ++j) net.atoms.push_back(std::string(1, static_cast<char>('a' + j)));
        int nrules = rng.range(1, 6);
        for (int j = 0; j < nrules; ++j) {
            GcpRule rule;
            rule.flipped.atom = rng.range(0, m - 1);
            rule.flipped.positive = rng.coin();
            for (int a = 0; a < m; ++a) {
                if (a == rule.flipped.atom) continue;
                if (rng.range(0, 2) == 0) rule.condition.push_back({a, rng.coin()});
            }
            net.rules.push_back(rule);
        }
        if (is_consistent(net)) return net;
    }
}

}  // namespace testutil
