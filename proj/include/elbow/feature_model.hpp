#pragma once

// Explicit feature-enriched interpretations: validation of the four
// structural conditions, concept evaluation (extension and intent phi),
// modelhood checking, and a bounded brute-force countermodel enumerator.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "normalizer.hpp"
#include "syntax.hpp"

namespace elbow {

class BoundExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FeatureInterpretation {
    std::vector<std::string> features;                          // F, fixed order
    std::map<std::string, std::set<std::string>> pi;            // element -> feature set
    std::map<std::string, std::set<std::string>> name_ext;      // concept name -> elements
    std::map<std::string, std::vector<std::pair<std::string, std::string>>> role_ext;
    std::set<std::string> natural;  // informational; modelhood uses the TBox's set
};

struct Violation {
    std::string condition;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

namespace detail {

// Indexed view with feature sets as bitmasks; |F| <= 64.
struct CompiledInterp {
    const FeatureInterpretation* src;
    std::vector<std::string> elems;            // index -> id
    std::map<std::string, int> elem_index;
    std::map<std::string, int> feat_index;
    std::vector<uint64_t> pi;                  // per element
    uint64_t full = 0;

    explicit CompiledInterp(const FeatureInterpretation& i) : src(&i) {
        if (i.features.size() > 64) throw BoundExceeded("more than 64 features");
        int fi = 0;
        for (const auto& f : i.features) feat_index.emplace(f, fi++);
        full = i.features.empty() ? 0 : (i.features.size() == 64
                                             ? ~uint64_t(0)
                                             : ((uint64_t(1) << i.features.size()) - 1));
        for (const auto& [d, fs] : i.pi) {
            elem_index.emplace(d, static_cast<int>(elems.size()));
            elems.push_back(d);
        }
        pi.resize(elems.size(), 0);
        for (const auto& [d, fs] : i.pi) {
            uint64_t m = 0;
            for (const auto& f : fs) {
                auto it = feat_index.find(f);
                if (it != feat_index.end()) m |= uint64_t(1) << it->second;
            }
            pi[elem_index[d]] = m;
        }
    }

    std::set<std::string> feature_set(uint64_t mask) const {
        std::set<std::string> out;
        for (size_t i = 0; i < src->features.size(); ++i)
            if (mask & (uint64_t(1) << i)) out.insert(src->features[i]);
        return out;
    }

    // Extension as a bool vector over element indices.
    std::vector<bool> extension(const ConceptPtr& c) const {
        size_t n = elems.size();
        switch (c->kind) {
            case ConceptKind::Top:
                return std::vector<bool>(n, true);
            case ConceptKind::Name: {
                auto it = src->name_ext.find(c->label);
                if (it == src->name_ext.end())
                    throw EvalError("unknown concept name '" + c->label + "'");
                std::vector<bool> out(n, false);
                for (const auto& d : it->second) {
                    auto ei = elem_index.find(d);
                    if (ei == elem_index.end())
                        throw EvalError("extension of '" + c->label +
                                        "' mentions unknown element '" + d + "'");
                    out[ei->second] = true;
                }
                return out;
            }
            case ConceptKind::Conj: {
                std::vector<bool> a = extension(c->lhs), b = extension(c->rhs);
                for (size_t i = 0; i < n; ++i) a[i] = a[i] && b[i];
                return a;
            }
            case ConceptKind::Exists: {
                auto it = src->role_ext.find(c->label);
                std::vector<bool> out(n, false);
                if (it == src->role_ext.end()) return out;
                std::vector<bool> filler = extension(c->rhs);
                for (const auto& [d, e] : it->second) {
                    auto di = elem_index.find(d);
                    auto ei = elem_index.find(e);
                    if (di == elem_index.end() || ei == elem_index.end())
                        throw EvalError("role '" + c->label + "' mentions unknown element");
                    if (filler[ei->second]) out[di->second] = true;
                }
                return out;
            }
            case ConceptKind::Between: {
                uint64_t common = phi(c->lhs) & phi(c->rhs);
                std::vector<bool> out(n, false);
                for (size_t i = 0; i < n; ++i) out[i] = (common & ~pi[i]) == 0;
                return out;
            }
            default:
                throw EvalError("cannot evaluate bottom token");
        }
    }

    uint64_t phi(const ConceptPtr& c) const {
        std::vector<bool> ext = extension(c);
        uint64_t out = full;
        bool empty = true;
        for (size_t i = 0; i < ext.size(); ++i) {
            if (ext[i]) {
                out &= pi[i];
                empty = false;
            }
        }
        return empty ? full : out;
    }

    uint64_t phi_of_ext(const std::vector<bool>& ext) const {
        uint64_t out = full;
        bool empty = true;
        for (size_t i = 0; i < ext.size(); ++i) {
            if (ext[i]) {
                out &= pi[i];
                empty = false;
            }
        }
        return empty ? full : out;
    }
};

inline std::string join(const std::set<std::string>& s) {
    std::string out;
    for (const auto& x : s) {
        if (!out.empty()) out += ",";
        out += x;
    }
    return out.empty() ? "{}" : "{" + out + "}";
}

}  // namespace detail

// Checks the four conditions on feature-enriched interpretations: known
// features, strictly proper pi(d), and a witness for every proper subset.
inline ValidationReport validate_interpretation(const FeatureInterpretation& i) {
    ValidationReport rep;
    if (i.features.empty())
        rep.violations.push_back({"features", "feature set is empty"});
    std::set<std::string> fset(i.features.begin(), i.features.end());
    if (fset.size() != i.features.size())
        rep.violations.push_back({"features", "duplicate feature ids"});
    for (const auto& [d, fs] : i.pi) {
        for (const auto& f : fs)
            if (!fset.count(f))
                rep.violations.push_back({"cond-1", "element " + d + " has unknown feature " + f});
        if (fs.size() >= fset.size() && !fset.empty())
            rep.violations.push_back(
                {"cond-3", "pi(" + d + ") is not a proper subset of the feature set"});
    }
    if (i.features.size() <= 22 && !i.features.empty()) {
        detail::CompiledInterp ci(i);
        std::set<uint64_t> seen(ci.pi.begin(), ci.pi.end());
        uint64_t total = uint64_t(1) << i.features.size();
        for (uint64_t m = 0; m < total - 1; ++m) {
            if (!seen.count(m)) {
                rep.violations.push_back(
                    {"cond-4", "no element with feature set " + detail::join(ci.feature_set(m))});
                break;  // one witness suffices
            }
        }
    } else if (i.pi.size() + 1 < (uint64_t(1) << std::min<size_t>(i.features.size(), 63))) {
        rep.violations.push_back({"cond-4", "domain too small to witness all proper subsets"});
    }
    for (const auto& [n, ext] : i.name_ext)
        for (const auto& d : ext)
            if (!i.pi.count(d))
                rep.violations.push_back({"name_ext", n + " mentions unknown element " + d});
    for (const auto& [r, pairs] : i.role_ext)
        for (const auto& [d, e] : pairs)
            if (!i.pi.count(d) || !i.pi.count(e))
                rep.violations.push_back({"role_ext", r + " mentions unknown element"});
    return rep;
}

inline std::set<std::string> extension(const FeatureInterpretation& i, const ConceptPtr& c) {
    detail::CompiledInterp ci(i);
    std::vector<bool> ext = ci.extension(c);
    std::set<std::string> out;
    for (size_t k = 0; k < ext.size(); ++k)
        if (ext[k]) out.insert(ci.elems[k]);
    return out;
}

inline std::set<std::string> phi(const FeatureInterpretation& i, const ConceptPtr& c) {
    detail::CompiledInterp ci(i);
    return ci.feature_set(ci.phi(c));
}

inline bool element_between(const FeatureInterpretation& i, const std::string& d1,
                            const std::string& d, const std::string& d2) {
    auto need = [&](const std::string& e) -> const std::set<std::string>& {
        auto it = i.pi.find(e);
        if (it == i.pi.end()) throw EvalError("unknown element '" + e + "'");
        return it->second;
    };
    const auto& p1 = need(d1);
    const auto& p2 = need(d2);
    const auto& p = need(d);
    for (const auto& f : p1)
        if (p2.count(f) && !p.count(f)) return false;
    return true;
}

// Modelhood per Definition 2: every CI holds, and every natural name's
// extension is exactly the set of elements carrying all of its phi features.
inline ValidationReport is_model(const FeatureInterpretation& i, const TBox& t) {
    ValidationReport rep;
    detail::CompiledInterp ci(i);
    for (const auto& s : t.statements) {
        if (!s.is_ci()) {
            rep.violations.push_back({"ni", "feature semantics has no NI assertions"});
            continue;
        }
        std::vector<bool> l = ci.extension(s.ci().lhs), r = ci.extension(s.ci().rhs);
        for (size_t k = 0; k < l.size(); ++k) {
            if (l[k] && !r[k]) {
                rep.violations.push_back({"ci", to_string(s.ci().lhs) + " <= " +
                                                    to_string(s.ci().rhs) + " violated at " +
                                                    ci.elems[k]});
                break;
            }
        }
    }
    for (const auto& a : t.natural_names) {
        if (!i.name_ext.count(a)) continue;  // declared but uninterpreted name
        ConceptPtr an = make_name(a);
        std::vector<bool> ext = ci.extension(an);
        uint64_t p = ci.phi_of_ext(ext);
        for (size_t k = 0; k < ext.size(); ++k) {
            bool cone = (p & ~ci.pi[k]) == 0;
            if (ext[k] != cone) {
                rep.violations.push_back(
                    {"natural", a + " is not feature-determined at " + ci.elems[k]});
                break;
            }
        }
    }
    return rep;
}

// JSON serialization, schema:
// {"features":[...], "elements":{"d":["f",...]}, "concepts":{"A":["d",...]},
//  "roles":{"r":[["d","e"],...]}, "natural":[...]}
inline nlohmann::json interp_to_json(const FeatureInterpretation& i) {
    nlohmann::json j;
    j["features"] = i.features;
    j["elements"] = nlohmann::json::object();
    for (const auto& [d, fs] : i.pi) j["elements"][d] = fs;
    j["concepts"] = nlohmann::json::object();
    for (const auto& [n, ext] : i.name_ext) j["concepts"][n] = ext;
    j["roles"] = nlohmann::json::object();
    for (const auto& [r, pairs] : i.role_ext) {
        auto arr = nlohmann::json::array();
        for (const auto& [d, e] : pairs) arr.push_back({d, e});
        j["roles"][r] = arr;
    }
    j["natural"] = i.natural;
    return j;
}

inline FeatureInterpretation interp_from_json(const nlohmann::json& j) {
    FeatureInterpretation i;
    i.features = j.at("features").get<std::vector<std::string>>();
    for (const auto& [d, fs] : j.at("elements").items())
        i.pi[d] = fs.get<std::set<std::string>>();
    if (j.contains("concepts"))
        for (const auto& [n, ext] : j.at("concepts").items())
            i.name_ext[n] = ext.get<std::set<std::string>>();
    if (j.contains("roles"))
        for (const auto& [r, pairs] : j.at("roles").items())
            for (const auto& p : pairs)
                i.role_ext[r].emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
    if (j.contains("natural")) i.natural = j.at("natural").get<std::set<std::string>>();
    return i;
}

namespace detail {

// Brute-force countermodel search. Domain fixed to the proper subsets of a
// k-feature universe; natural names range over cones, non-natural names over
// arbitrary element sets (only feasible for k <= 3), roles over the empty and
// the full relation.
class CountermodelSearch {
public:
    CountermodelSearch(const NormalTBox& nt, std::string lhs, std::string rhs, int k)
        : nt_(nt), lhs_(std::move(lhs)), rhs_(std::move(rhs)), k_(k) {
        nelem_ = (1u << k_) - 1;
        for (const auto& n : nt.tbox.concept_names()) names_.push_back(n);
        for (const auto& n : {lhs_, rhs_})
            if (std::find(names_.begin(), names_.end(), n) == names_.end()) names_.push_back(n);
        std::sort(names_.begin(), names_.end());
        for (const auto& r : nt.tbox.role_names()) roles_.push_back(r);
    }

    std::optional<FeatureInterpretation> run() {
        if (try_assign(0)) return found_;
        return std::nullopt;
    }

private:
    bool try_assign(size_t idx) {
        if (budget_-- <= 0) return false;
        if (idx == names_.size()) return try_roles(0);
        const std::string& n = names_[idx];
        if (nt_.tbox.natural_names.count(n)) {
            // cone extensions only: pick phi(n) as any subset of F; choosing
            // the full set yields the empty extension (no proper superset).
            for (uint32_t m = 0; m < (1u << k_); ++m) {
                ext_[n] = cone(m);
                if (try_assign(idx + 1)) return true;
            }
            ext_.erase(n);
            return false;
        }
        // non-natural: all element subsets
        for (uint32_t e = 0; e < (1u << nelem_); ++e) {
            ext_[n] = e;
            if (try_assign(idx + 1)) return true;
        }
        ext_.erase(n);
        return false;
    }

    bool try_roles(size_t ri) {
        if (ri == roles_.size()) return check();
        for (int full : {0, 1}) {
            role_full_[roles_[ri]] = full != 0;
            if (try_roles(ri + 1)) return true;
        }
        return false;
    }

    // cone(mask): elements whose pi contains mask.
    uint32_t cone(uint32_t mask) const {
        uint32_t out = 0;
        for (uint32_t d = 0; d < nelem_; ++d)
            if ((mask & ~d) == 0) out |= 1u << d;
        return out;
    }

    uint32_t eval(const ConceptPtr& c) const {
        switch (c->kind) {
            case ConceptKind::Top:
                return (1u << nelem_) - 1;
            case ConceptKind::Name: {
                auto it = ext_.find(c->label);
                return it == ext_.end() ? 0 : it->second;
            }
            case ConceptKind::Conj:
                return eval(c->lhs) & eval(c->rhs);
            case ConceptKind::Exists: {
                auto it = role_full_.find(c->label);
                bool full = it != role_full_.end() && it->second;
                return (full && eval(c->rhs) != 0) ? (1u << nelem_) - 1 : 0;
            }
            case ConceptKind::Between: {
                uint32_t common = phi_mask(eval(c->lhs)) & phi_mask(eval(c->rhs));
                uint32_t out = 0;
                for (uint32_t d = 0; d < nelem_; ++d)
                    if ((common & ~d) == 0) out |= 1u << d;
                return out;
            }
            default:
                return 0;
        }
    }

    uint32_t phi_mask(uint32_t ext) const {
        if (ext == 0) return (1u << k_) - 1;
        uint32_t out = (1u << k_) - 1;
        for (uint32_t d = 0; d < nelem_; ++d)
            if (ext & (1u << d)) out &= d;  // element index doubles as pi mask
        return out;
    }

    bool check() {
        for (const auto& s : nt_.tbox.statements) {
            if (!s.is_ci()) continue;
            uint32_t l = eval(s.ci().lhs), r = eval(s.ci().rhs);
            if (l & ~r) return false;
        }
        uint32_t l = ext_.count(lhs_) ? ext_.at(lhs_) : 0;
        uint32_t r = ext_.count(rhs_) ? ext_.at(rhs_) : 0;
        if (!(l & ~r)) return false;
        found_ = materialize();
        return true;
    }

    FeatureInterpretation materialize() const {
        FeatureInterpretation i;
        for (int f = 0; f < k_; ++f) i.features.push_back("f" + std::to_string(f + 1));
        for (uint32_t d = 0; d < nelem_; ++d) {
            std::set<std::string> fs;
            for (int f = 0; f < k_; ++f)
                if (d & (1u << f)) fs.insert(i.features[f]);
            i.pi["d" + std::to_string(d)] = fs;
        }
        for (const auto& [n, ext] : ext_) {
            std::set<std::string> es;
            for (uint32_t d = 0; d < nelem_; ++d)
                if (ext & (1u << d)) es.insert("d" + std::to_string(d));
            i.name_ext[n] = es;
        }
        for (const auto& [r, full] : role_full_) {
            auto& pairs = i.role_ext[r];
            if (full)
                for (uint32_t d = 0; d < nelem_; ++d)
                    for (uint32_t e = 0; e < nelem_; ++e)
                        pairs.emplace_back("d" + std::to_string(d), "d" + std::to_string(e));
            else
                i.role_ext[r];  // empty relation, key kept
        }
        i.natural = nt_.tbox.natural_names;
        return i;
    }

    const NormalTBox& nt_;
    std::string lhs_, rhs_;
    int k_;
    uint32_t nelem_;
    std::vector<std::string> names_;
    std::vector<std::string> roles_;
    std::map<std::string, uint32_t> ext_;
    std::map<std::string, bool> role_full_;
    std::optional<FeatureInterpretation> found_;
    long long budget_ = 20'000'000;
};

}  // namespace detail

// Bounded falsification oracle. A returned interpretation proves
// non-entailment (it is re-validated by the caller's tests); none found is
// evidence only, since extensions and roles range over restricted candidates.
inline std::optional<FeatureInterpretation> enumerate_countermodel(const NormalTBox& nt,
                                                                   const std::string& lhs,
                                                                   const std::string& rhs,
                                                                   int max_features) {
    if (max_features < 1 || max_features > 3)
        throw BoundExceeded("max_features must be between 1 and 3");
    for (int k = 1; k <= max_features; ++k) {
        detail::CountermodelSearch search(nt, lhs, rhs, k);
        if (auto m = search.run()) return m;
    }
    return std::nullopt;
}

}  // namespace elbow
