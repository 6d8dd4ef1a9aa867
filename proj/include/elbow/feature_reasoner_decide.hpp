#pragma once

// Second half of the feature reasoner: the interpolative saturation engine
// with derivation traces, the decision procedure proper, and classification.
// Included at the end of feature_reasoner.hpp; not meant for direct inclusion.

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace elbow {

// ---------------------------------------------------------------------------
// Interpolative saturation: R1-R6 plus the structural, interpolation and
// conjunction-interpolation rules, every fact carrying a trace. Sound but
// deliberately incomplete.

struct InterpolativeResult {
    NormalIndex ix;

    struct Fact {
        std::vector<int> lhs;  // one atom, or two for a conjunction fact
        int rhs;
        std::string rule;
        std::vector<int> premises;   // indices into facts
        std::string side_condition;  // e.g. the axiom consumed by R6
    };
    std::vector<Fact> facts;
    std::map<std::pair<std::vector<int>, int>, int> index;

    struct ExFact {
        int lhs, role, rhs;
        std::string rule;
        std::vector<int> premises;  // SUB fact indices; -1 entries mean axioms
    };
    std::vector<ExFact> ex_facts;

    bool has(int a, int c) const { return index.count({{a}, c}) > 0; }

    bool has_name_pair(const std::string& a, const std::string& c) const {
        int ia = ix.atoms.find_name(a), ic = ix.atoms.find_name(c);
        return ia >= 0 && ic >= 0 && has(ia, ic);
    }

    nlohmann::json fact_json(int fi) const {
        const Fact& f = facts[fi];
        nlohmann::json j;
        std::string lhs = ix.atoms.render(f.lhs[0]);
        for (size_t i = 1; i < f.lhs.size(); ++i) lhs += " & " + ix.atoms.render(f.lhs[i]);
        j["conclusion"] = lhs + " <= " + ix.atoms.render(f.rhs);
        j["rule"] = f.rule;
        if (!f.side_condition.empty()) j["side"] = f.side_condition;
        auto prem = nlohmann::json::array();
        for (int p : f.premises) prem.push_back(fact_json(p));
        j["premises"] = prem;
        return j;
    }

    nlohmann::json trace_of(int a, int c) const {
        auto it = index.find({{a}, c});
        if (it == index.end()) return nullptr;
        return fact_json(it->second);
    }
};

inline InterpolativeResult interpolative_saturate(const NormalTBox& nt) {
    InterpolativeResult res;
    res.ix = index_tbox(nt);
    const NormalIndex& ix = res.ix;
    int n = ix.atoms.size();

    auto add = [&](std::vector<int> lhs, int rhs, std::string rule, std::vector<int> prem,
                   std::string side = "") -> bool {
        if (lhs.size() == 2) {
            if (lhs[0] > lhs[1]) std::swap(lhs[0], lhs[1]);
            if (lhs[0] == lhs[1]) lhs.pop_back();
        }
        auto key = std::make_pair(lhs, rhs);
        if (res.index.count(key)) return false;
        res.index.emplace(key, static_cast<int>(res.facts.size()));
        res.facts.push_back({std::move(lhs), rhs, std::move(rule), std::move(prem),
                             std::move(side)});
        return true;
    };
    auto fact_id = [&](std::vector<int> lhs, int rhs) -> int {
        if (lhs.size() == 2 && lhs[0] > lhs[1]) std::swap(lhs[0], lhs[1]);
        auto it = res.index.find({lhs, rhs});
        return it == res.index.end() ? -1 : it->second;
    };

    for (int a = 0; a < n; ++a) {
        add({a}, a, "R1", {});
        add({a}, ix.atoms.top_id(), "R2", {});
    }
    for (auto [a, c] : ix.plain) add({a}, c, "axiom", {});
    for (const auto& [a1, a2, b] : ix.conj) add({a1, a2}, b, "axiom", {});
    for (const auto& [a, r, b] : ix.ex_rhs)
        res.ex_facts.push_back({a, r, b, "axiom", {}});
    for (int bt : ix.between_ids) {
        const Atom& at = ix.atoms.at(bt);
        add({at.b1}, bt, "S1", {});
        add({at.b2}, bt, "S1", {});
    }

    bool changed = true;
    while (changed) {
        changed = false;
        size_t nf = res.facts.size();
        // R3 and R4 driven by singleton facts
        for (size_t i = 0; i < nf; ++i) {
            if (res.facts[i].lhs.size() != 1) continue;
            int a = res.facts[i].lhs[0], b = res.facts[i].rhs;
            for (size_t j = 0; j < nf; ++j) {
                const auto& g = res.facts[j];
                if (g.lhs.size() == 1 && g.lhs[0] == b) {
                    if (add({a}, g.rhs, "R3", {static_cast<int>(i), static_cast<int>(j)}))
                        changed = true;
                }
            }
        }
        nf = res.facts.size();
        for (size_t j = 0; j < nf; ++j) {
            const auto& g = res.facts[j];
            if (g.lhs.size() != 2) continue;
            int a1 = g.lhs[0], a2 = g.lhs[1], b = g.rhs;
            for (int a = 0; a < n; ++a) {
                int p1 = fact_id({a}, a1), p2 = fact_id({a}, a2);
                if (p1 >= 0 && p2 >= 0)
                    if (add({a}, b, "R4", {p1, p2, static_cast<int>(j)})) changed = true;
            }
        }
        // R5 / R6
        size_t ne = res.ex_facts.size();
        for (size_t i = 0; i < ne; ++i) {
            auto ef = res.ex_facts[i];
            for (int a = 0; a < n; ++a) {
                int p = fact_id({a}, ef.lhs);
                if (p < 0 || a == ef.lhs) continue;
                bool known = false;
                for (const auto& g : res.ex_facts)
                    if (g.lhs == a && g.role == ef.role && g.rhs == ef.rhs) known = true;
                if (!known) {
                    res.ex_facts.push_back({a, ef.role, ef.rhs, "R5", {p, static_cast<int>(i)}});
                    changed = true;
                }
            }
        }
        for (const auto& [r, bp, c] : ix.ex_lhs) {
            size_t cur = res.ex_facts.size();
            for (size_t i = 0; i < cur; ++i) {
                const auto& ef = res.ex_facts[i];
                if (ef.role != r) continue;
                int p = fact_id({ef.rhs}, bp);
                if (p < 0) continue;
                if (add({ef.lhs}, c, "R6", {p},
                        "some " + ix.roles[r] + "." + ix.atoms.render(bp) + " <= " +
                            ix.atoms.render(c)))
                    changed = true;
            }
        }
        // S2: interpolation (Lemma 4 shape)
        for (int bt : ix.between_ids) {
            const Atom& at = ix.atoms.at(bt);
            for (int b = 0; b < n; ++b) {
                if (!ix.atoms.at(b).natural) continue;
                int p1 = fact_id({at.b1}, b), p2 = fact_id({at.b2}, b);
                if (p1 >= 0 && p2 >= 0)
                    if (add({bt}, b, "lemma4", {p1, p2})) changed = true;
            }
        }
        // S3: conjunction interpolation (Theorem 1 shape)
        for (int bt : ix.between_ids) {
            const Atom& at = ix.atoms.at(bt);
            if (!at.natural) continue;
            for (int g = 0; g < n; ++g) {
                const Atom& ga = ix.atoms.at(g);
                if (ga.kind != Atom::Name || !ga.natural) continue;
                for (int b = 0; b < n; ++b) {
                    const Atom& ba = ix.atoms.at(b);
                    if (ba.kind != Atom::Name || !ba.natural) continue;
                    int p1 = fact_id({g, at.b1}, b), p2 = fact_id({g, at.b2}, b);
                    if (p1 >= 0 && p2 >= 0)
                        if (add({g, bt}, b, "theorem1", {p1, p2})) changed = true;
                }
            }
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Decision procedure.

struct DecideStats {
    uint64_t sat_calls = 0, decisions = 0, conflicts = 0, propagations = 0;
};

struct DecideResult {
    bool entailed = false;
    std::string engine;  // "direct" or "encoding"
    DecideStats stats;
    std::optional<FeatureAssignment> theta;
    std::optional<FeatureInterpretation> countermodel;
    nlohmann::json trace;  // derivation tree when entailed and derivable
};

struct DecideOptions {
    bool build_countermodel = true;
    bool validate = true;
    bool want_trace = true;
    enum Engine { Auto, ForceEncoding, ForceDirect } engine = Auto;
    int max_model_features = 16;
};

namespace detail {

// Per-feature-column admissibility: a column (one boolean per name) is
// admissible when it satisfies condition 2 for every base CI and condition 1
// for every conjunction CI. For existential-free TBoxes with natural
// conjuncts this is all of properness, column by column.
class ColumnChecker {
public:
    explicit ColumnChecker(const NormalIndex& ix) : ix_(ix) {
        for (int a : ix.name_ids) var_[a] = base_.new_var(ix.atoms.at(a).name);
        auto pos_lits = [&](int atom) -> std::optional<std::vector<int>> {
            const Atom& at = ix.atoms.at(atom);
            if (at.kind == Atom::Top) return std::nullopt;  // constant false
            if (at.kind == Atom::Name) return std::vector<int>{var_[atom]};
            return std::vector<int>{var_[at.b1], var_[at.b2]};
        };
        for (auto [a, c] : ix.plain) {
            auto r = pos_lits(c);
            if (!r) continue;  // rhs top: no constraint
            auto l = pos_lits(a);
            std::vector<int> neg;
            for (int v : *r) neg.push_back(-v);
            if (!l) {
                base_.add_clause(neg);  // lhs top: rhs may hold no feature
            } else {
                for (int v : *l) {
                    std::vector<int> cl = neg;
                    cl.push_back(v);
                    base_.add_clause(std::move(cl));
                }
            }
        }
        for (const auto& [a1, a2, b] : ix.conj) {
            auto r = pos_lits(b);
            if (!r) continue;
            std::vector<int> cl;
            for (int v : *r) cl.push_back(-v);  // rhs of a conj CI is a single name
            cl.push_back(var_[a1]);
            cl.push_back(var_[a2]);
            base_.add_clause(std::move(cl));
        }
    }

    // Admissible column with the feature present in theta_hat(c) (when
    // c >= 0) and absent from theta(a); returns the column or nothing.
    std::optional<std::vector<int>> witness(int c, int a, DecideStats& stats) const {
        SatProblem p = base_;
        p.add_clause({-var_.at(a)});
        if (c >= 0) {
            const Atom& at = ix_.atoms.at(c);
            if (at.kind == Atom::Top) return std::nullopt;  // top never holds a feature
            if (at.kind == Atom::Name) {
                p.add_clause({var_.at(c)});
            } else {
                p.add_clause({var_.at(at.b1)});
                p.add_clause({var_.at(at.b2)});
            }
        }
        SatResult r = dpll_solve(p);
        ++stats.sat_calls;
        stats.decisions += r.stats.decisions;
        stats.conflicts += r.stats.conflicts;
        stats.propagations += r.stats.propagations;
        if (!r.sat) return std::nullopt;
        std::vector<int> col;
        for (int id : ix_.name_ids) col.push_back(r.model[var_.at(id)]);
        return col;
    }

private:
    const NormalIndex& ix_;
    SatProblem base_;
    std::map<int, int> var_;
};

inline std::vector<std::pair<int, int>> step2_pairs(const NormalIndex& ix,
                                                    const FeatureAssignment& fa) {
    std::vector<std::pair<int, int>> out;
    auto subset = [](const std::set<std::string>& a, const std::set<std::string>& b) {
        return std::includes(b.begin(), b.end(), a.begin(), a.end());
    };
    std::map<int, const std::set<std::string>*> tm;
    for (int a : ix.name_ids) {
        auto it = fa.theta.find(ix.atoms.at(a).name);
        if (it == fa.theta.end()) throw EvalError("theta incomplete");
        tm[a] = &it->second;
    }
    auto hat = [&](int c) -> std::set<std::string> {
        const Atom& at = ix.atoms.at(c);
        if (at.kind == Atom::Name) return *tm[c];
        std::set<std::string> out2;
        for (const auto& f : *tm[at.b1])
            if (tm[at.b2]->count(f)) out2.insert(f);
        return out2;
    };
    std::vector<int> candidates = ix.natural_name_ids;
    for (int b : ix.between_ids) candidates.push_back(b);
    for (int a : ix.name_ids)
        for (int c : candidates)
            if (a != c && subset(hat(c), *tm[a])) out.emplace_back(a, c);
    return out;
}

inline CompletionState complete_with_theta(const NormalIndex& ix, const FeatureAssignment& fa) {
    return complete_index(ix, step2_pairs(ix, fa));
}

// Assemble a FeatureAssignment from distinct admissible columns, with one
// all-zero column guaranteeing strictness.
inline FeatureAssignment theta_from_columns(const NormalIndex& ix,
                                            std::set<std::vector<int>> columns) {
    columns.insert(std::vector<int>(ix.name_ids.size(), 0));
    FeatureAssignment fa;
    for (int a : ix.name_ids) fa.theta[ix.atoms.at(a).name] = {};
    int i = 0;
    for (const auto& col : columns) {
        std::string f = "h" + std::to_string(++i);
        fa.features.push_back(f);
        for (size_t k = 0; k < ix.name_ids.size(); ++k)
            if (col[k]) fa.theta[ix.atoms.at(ix.name_ids[k]).name].insert(f);
    }
    return fa;
}

// Drop as many feature columns as possible while the target stays
// underivable (and, when check_proper, theta stays proper for the
// completion). Chunked elimination keeps the number of completions low.
inline FeatureAssignment prune_theta(FeatureAssignment fa, const NormalIndex& ix, int aq, int bq,
                                     bool check_proper) {
    auto viable = [&](const FeatureAssignment& cand) {
        CompletionState st = complete_with_theta(ix, cand);
        if (st.has(aq, bq)) return false;
        if (check_proper && !is_proper(cand, st).ok()) return false;
        return true;
    };
    auto without = [&](const FeatureAssignment& src, size_t from, size_t len) {
        FeatureAssignment out;
        std::set<std::string> dropped(src.features.begin() + from,
                                      src.features.begin() + std::min(from + len,
                                                                      src.features.size()));
        for (const auto& f : src.features)
            if (!dropped.count(f)) out.features.push_back(f);
        for (const auto& [n, fs] : src.theta) {
            auto& tgt = out.theta[n];
            for (const auto& f : fs)
                if (!dropped.count(f)) tgt.insert(f);
        }
        return out;
    };
    size_t pos = 0;
    while (pos < fa.features.size()) {
        if (fa.features.size() == 1) break;
        size_t chunk = fa.features.size() - pos;
        bool removed = false;
        while (chunk >= 1) {
            FeatureAssignment cand = without(fa, pos, chunk);
            if (!cand.features.empty() && viable(cand)) {
                fa = std::move(cand);
                removed = true;
                break;
            }
            if (chunk == 1) break;
            chunk /= 2;
        }
        if (!removed) ++pos;
    }
    return fa;
}

}  // namespace detail

inline DecideResult decide_subsumption(const TBox& t, const ConceptPtr& lhs,
                                       const ConceptPtr& rhs,
                                       const DecideOptions& opts = {}) {
    if (t.has_ni()) throw EvalError("feature-semantics reasoning does not accept NI assertions");
    DecideResult res;
    QueryNormalization qn = normalize_query(t, lhs, rhs);
    NormalIndex ix = index_tbox(qn.tbox);
    int aq = ix.atoms.find_name(qn.lhs_name);
    int bq = ix.atoms.find_name(qn.rhs_name);

    bool eligible = ix.existential_free && ix.conjuncts_natural;
    bool direct = opts.engine == DecideOptions::ForceDirect ||
                  (opts.engine == DecideOptions::Auto && eligible);
    if (direct && !eligible)
        throw EvalError("direct engine requires an existential-free TBox with natural conjuncts");

    std::optional<FeatureAssignment> theta;
    if (direct) {
        res.engine = "direct";
        detail::ColumnChecker checker(ix);
        std::set<std::vector<int>> columns;
        bool strict_fail = false;
        for (int a : ix.name_ids) {
            auto col = checker.witness(-1, a, res.stats);
            if (!col) {
                strict_fail = true;  // theta(a) would have to be the full set
                break;
            }
        }
        std::vector<std::pair<int, int>> forced;
        if (!strict_fail) {
            std::vector<int> candidates = ix.natural_name_ids;
            for (int b : ix.between_ids) candidates.push_back(b);
            for (int a : ix.name_ids)
                for (int c : candidates) {
                    if (a == c) continue;
                    auto col = checker.witness(c, a, res.stats);
                    if (col)
                        columns.insert(*col);
                    else
                        forced.emplace_back(a, c);
                }
        }
        if (strict_fail) {
            res.entailed = true;
        } else {
            CompletionState st = complete_index(ix, forced);
            res.entailed = st.has(aq, bq);
        }
        if (!res.entailed) theta = detail::theta_from_columns(ix, std::move(columns));
    } else {
        res.engine = "encoding";
        SatEncoding enc = encode_sat(qn.tbox, make_name(qn.lhs_name), make_name(qn.rhs_name));
        SatResult sat = dpll_solve(enc.problem);
        ++res.stats.sat_calls;
        res.stats.decisions += sat.stats.decisions;
        res.stats.conflicts += sat.stats.conflicts;
        res.stats.propagations += sat.stats.propagations;
        res.entailed = !sat.sat;
        if (sat.sat) {
            std::set<std::vector<int>> columns;
            int nf = static_cast<int>(enc.features.size());
            for (int f = 0; f < nf; ++f) {
                std::vector<int> col;
                for (int id : ix.name_ids) col.push_back(sat.model[enc.x_var.at({id, f})]);
                columns.insert(std::move(col));
            }
            theta = detail::theta_from_columns(ix, std::move(columns));
        }
    }

    if (res.entailed) {
        if (opts.want_trace) {
            InterpolativeResult ir = interpolative_saturate(qn.tbox);
            res.trace = ir.trace_of(ir.ix.atoms.find_name(qn.lhs_name),
                                    ir.ix.atoms.find_name(qn.rhs_name));
        }
        return res;
    }

    // NotEntailed: shrink theta and materialize the canonical countermodel.
    FeatureAssignment fa = detail::prune_theta(std::move(*theta), ix, aq, bq, !direct);
    {
        // Pruning may drop the all-zero column; restore strictness with a
        // fresh feature held by no name (changes no theta_hat inclusion).
        bool full = false;
        for (const auto& [n, fs] : fa.theta)
            if (fs.size() == fa.features.size()) full = true;
        if (full) fa.features.push_back("h0");
    }
    CompletionState st = detail::complete_with_theta(ix, fa);
    if (st.has(aq, bq))
        throw CanonicalModelError("internal: pruned theta derives the target");
    {
        ValidationReport pr = is_proper(fa, st);
        if (!pr.ok())
            throw CanonicalModelError("internal: theta not proper: " +
                                      pr.violations.front().detail);
    }
    res.theta = fa;
    if (!opts.build_countermodel) return res;
    if (static_cast<int>(fa.features.size()) > opts.max_model_features)
        throw BoundExceeded("countermodel feature universe too large");
    FeatureInterpretation model = build_canonical_model(st, fa);
    if (opts.validate) {
        ValidationReport v = validate_interpretation(model);
        if (!v.ok())
            throw CanonicalModelError("countermodel invalid: " + v.violations.front().condition +
                                      " " + v.violations.front().detail);
        for (const TBox* box : std::initializer_list<const TBox*>{&qn.tbox.tbox, &t}) {
            ValidationReport m = is_model(model, *box);
            if (!m.ok())
                throw CanonicalModelError("countermodel violates TBox: " +
                                          m.violations.front().detail);
        }
        std::set<std::string> le = extension(model, lhs), re = extension(model, rhs);
        bool falsified = false;
        for (const auto& d : le)
            if (!re.count(d)) falsified = true;
        if (!falsified) throw CanonicalModelError("countermodel fails to falsify the query");
    }
    res.countermodel = std::move(model);
    return res;
}

inline std::map<std::pair<std::string, std::string>, bool> classify(
    const TBox& t, const DecideOptions& opts = {}) {
    std::map<std::pair<std::string, std::string>, bool> out;
    std::set<std::string> names = t.concept_names();
    for (const auto& a : names)
        for (const auto& b : names)
            out[{a, b}] = decide_subsumption(t, make_name(a), make_name(b), opts).entailed;
    return out;
}

}  // namespace elbow
