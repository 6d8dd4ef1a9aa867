#pragma once

// TBox normalization. Every output CI has one of the six shapes
//   A <= B, A1 & A2 <= B, A <= some r.B, some r.A <= B,
//   A <= B1 btw B2, B1 btw B2 <= A
// where A, A1, A2, B are names or top and B1, B2 are natural names.
// Complex subterms are replaced by fresh names _Nk with two-way definitions;
// a fresh name is declared natural exactly when the concept it stands for is.

#include <map>
#include <string>
#include <vector>

#include "syntax.hpp"

namespace elbow {

struct NormalTBox {
    TBox tbox;  // normal-form CIs plus passed-through NI assertions
    std::map<std::string, ConceptPtr> fresh_map;
};

inline bool is_name_or_top(const ConceptPtr& c) {
    return c->kind == ConceptKind::Top || c->kind == ConceptKind::Name;
}

inline bool is_normal_ci(const ConceptInclusion& ci, const std::set<std::string>& natural) {
    const ConceptPtr& l = ci.lhs;
    const ConceptPtr& r = ci.rhs;
    auto natural_name = [&](const ConceptPtr& c) {
        return c->kind == ConceptKind::Name && natural.count(c->label) > 0;
    };
    if (is_name_or_top(l)) {
        if (is_name_or_top(r)) return true;
        if (r->kind == ConceptKind::Exists) return is_name_or_top(r->rhs);
        if (r->kind == ConceptKind::Between)
            return natural_name(r->lhs) && natural_name(r->rhs);
        return false;
    }
    if (!is_name_or_top(r)) return false;
    if (l->kind == ConceptKind::Conj)
        return is_name_or_top(l->lhs) && is_name_or_top(l->rhs);
    if (l->kind == ConceptKind::Exists) return is_name_or_top(l->rhs);
    if (l->kind == ConceptKind::Between)
        return natural_name(l->lhs) && natural_name(l->rhs);
    return false;
}

namespace detail {

class Normalizer {
public:
    explicit Normalizer(const TBox& t) : in_(t) {
        out_.natural_names = t.natural_names;
        used_names_ = t.concept_names();
        for (const auto& n : t.natural_names) used_names_.insert(n);
    }

    NormalTBox run() {
        for (const auto& s : in_.statements) {
            if (s.is_ci())
                norm_ci(s.ci().lhs, s.ci().rhs);
            else
                out_.statements.push_back(s);
        }
        return NormalTBox{std::move(out_), std::move(fresh_map_)};
    }

private:
    void emit(ConceptPtr l, ConceptPtr r) { out_.add_ci(std::move(l), std::move(r)); }

    bool is_complex(const ConceptPtr& c) const { return !is_name_or_top(c); }

    void norm_ci(const ConceptPtr& l, const ConceptPtr& r) {
        if (is_normal_ci(ConceptInclusion{l, r}, out_.natural_names)) {
            emit(l, r);
            return;
        }
        if (r->kind == ConceptKind::Conj) {
            norm_ci(l, r->lhs);
            norm_ci(l, r->rhs);
            return;
        }
        if (is_complex(l) && is_complex(r)) {
            // Both sides complex: chain through a fresh intermediate name.
            ConceptPtr mid = make_name(fresh("chain", false));
            norm_ci(l, mid);
            norm_ci(mid, r);
            return;
        }
        if (is_complex(l)) {
            switch (l->kind) {
                case ConceptKind::Conj:
                    emit(make_conj(name_or_top(l->lhs), name_or_top(l->rhs)), r);
                    return;
                case ConceptKind::Exists:
                    emit(make_exists(l->label, name_or_top(l->rhs)), r);
                    return;
                case ConceptKind::Between:
                    emit(make_between(name_or_top(l->lhs), name_or_top(l->rhs)), r);
                    return;
                default:
                    break;
            }
        }
        switch (r->kind) {
            case ConceptKind::Exists:
                emit(l, make_exists(r->label, name_or_top(r->rhs)));
                return;
            case ConceptKind::Between:
                emit(l, make_between(name_or_top(r->lhs), name_or_top(r->rhs)));
                return;
            default:
                emit(l, r);  // unreachable for well-formed input
                return;
        }
    }

    // Returns a name (or top) denoting c, introducing a fresh two-way
    // definition on first use of a complex c.
    ConceptPtr name_or_top(const ConceptPtr& c) {
        if (is_name_or_top(c)) return c;
        auto it = memo_.find(c);
        if (it != memo_.end()) return make_name(it->second);
        bool nat = is_natural_concept(c, out_.natural_names);
        std::string n = fresh("def", nat);
        memo_.emplace(c, n);
        fresh_map_.emplace(n, c);
        ConceptPtr name = make_name(n);
        norm_ci(name, c);
        norm_ci(c, name);
        return name;
    }

    std::string fresh(const char* /*why*/, bool natural) {
        std::string n;
        do {
            n = "_N" + std::to_string(++counter_);
        } while (used_names_.count(n));
        used_names_.insert(n);
        if (natural) out_.natural_names.insert(n);
        return n;
    }

    const TBox& in_;
    TBox out_;
    std::map<std::string, ConceptPtr> fresh_map_;
    std::map<ConceptPtr, std::string, ConceptLess> memo_;
    std::set<std::string> used_names_;
    int counter_ = 0;
};

}  // namespace detail

inline NormalTBox normalize(const TBox& t) { return detail::Normalizer(t).run(); }

struct QueryNormalization {
    NormalTBox tbox;
    std::string lhs_name, rhs_name;
};

// Internalizes the query lhs <= rhs: fresh names Aq, Bq with two-way
// definitions are added before normalizing. T entails lhs <= rhs iff the
// normalized TBox entails Aq <= Bq.
inline QueryNormalization normalize_query(const TBox& t, const ConceptPtr& lhs,
                                          const ConceptPtr& rhs) {
    TBox ext = t;
    std::set<std::string> used = ext.concept_names();
    for (const auto& n : ext.natural_names) used.insert(n);
    auto fresh = [&](const char* base) {
        std::string n = base;
        int k = 0;
        while (used.count(n)) n = std::string(base) + std::to_string(++k);
        used.insert(n);
        return n;
    };
    std::string aq = fresh("_QL"), bq = fresh("_QR");
    if (is_natural_concept(lhs, t.natural_names)) ext.natural_names.insert(aq);
    if (is_natural_concept(rhs, t.natural_names)) ext.natural_names.insert(bq);
    ConceptPtr an = make_name(aq), bn = make_name(bq);
    ext.add_ci(an, lhs);
    ext.add_ci(lhs, an);
    ext.add_ci(bn, rhs);
    ext.add_ci(rhs, bn);
    return QueryNormalization{normalize(ext), aq, bq};
}

}  // namespace elbow
