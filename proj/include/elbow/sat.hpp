#pragma once

// Small CDCL SAT solver: two-watched-literal propagation, first-UIP clause
// learning with backjumping, deterministic static branching order (lowest
// variable index first, tried false first).

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

namespace elbow {

struct SatProblem {
    int num_vars = 0;
    std::vector<std::vector<int>> clauses;  // DIMACS-style literals, 1-based
    std::vector<std::string> var_names;     // var_names[v-1] describes variable v

    int new_var(std::string name = "") {
        var_names.push_back(std::move(name));
        return ++num_vars;
    }

    void add_clause(std::vector<int> lits) { clauses.push_back(std::move(lits)); }

    std::string to_dimacs() const {
        std::ostringstream os;
        for (int v = 1; v <= num_vars; ++v)
            if (!var_names[v - 1].empty()) os << "c var " << v << " = " << var_names[v - 1] << "\n";
        os << "p cnf " << num_vars << " " << clauses.size() << "\n";
        for (const auto& c : clauses) {
            for (int l : c) os << l << " ";
            os << "0\n";
        }
        return os.str();
    }
};

struct SatStats {
    uint64_t decisions = 0, conflicts = 0, propagations = 0;
};

struct SatResult {
    bool sat = false;
    std::vector<int8_t> model;  // model[v] in {0,1} for v = 1..num_vars
    SatStats stats;
};

namespace detail {

class CdclSolver {
    // Internal literal encoding: lit = 2*(v-1) + (sign ? 1 : 0), sign = negated.
    static int enc(int dimacs_lit) {
        int v = dimacs_lit > 0 ? dimacs_lit : -dimacs_lit;
        return 2 * (v - 1) + (dimacs_lit < 0 ? 1 : 0);
    }
    static int neg(int lit) { return lit ^ 1; }
    static int var(int lit) { return lit >> 1; }  // 0-based

public:
    explicit CdclSolver(const SatProblem& p) : nvars_(p.num_vars) {
        value_.assign(nvars_, -1);
        level_.assign(nvars_, 0);
        reason_.assign(nvars_, -1);
        watches_.assign(2 * nvars_, {});
        seen_.assign(nvars_, 0);
        for (const auto& raw : p.clauses) {
            std::vector<int> c;
            bool taut = false;
            for (int l : raw) c.push_back(enc(l));
            std::sort(c.begin(), c.end());
            c.erase(std::unique(c.begin(), c.end()), c.end());
            for (size_t i = 0; i + 1 < c.size(); ++i)
                if (c[i + 1] == neg(c[i])) taut = true;
            if (taut) continue;
            if (c.empty()) {
                empty_clause_ = true;
                continue;
            }
            if (c.size() == 1) {
                units_.push_back(c[0]);
                continue;
            }
            add_clause_db(std::move(c));
        }
    }

    SatResult solve() {
        SatResult res;
        if (empty_clause_) return finish(res, false);
        for (int u : units_) {
            if (value_of(u) == 0) return finish(res, false);
            if (value_of(u) == -1) enqueue(u, -1);
        }
        if (propagate() != -1) return finish(res, false);
        for (;;) {
            int v = pick_branch();
            if (v == -1) return finish(res, true);
            ++stats_.decisions;
            ++decision_level_;
            trail_lim_.push_back(static_cast<int>(trail_.size()));
            enqueue(2 * v + 1, -1);  // try false first
            for (;;) {
                int confl = propagate();
                if (confl == -1) break;
                ++stats_.conflicts;
                if (decision_level_ == 0) return finish(res, false);
                std::vector<int> learnt;
                int back_level = analyze(confl, learnt);
                backtrack(back_level);
                if (learnt.size() == 1) {
                    enqueue(learnt[0], -1);
                } else {
                    int ci = add_clause_db(std::move(learnt));
                    enqueue(clauses_[ci][0], ci);
                }
            }
        }
    }

private:
    SatResult finish(SatResult& res, bool sat) {
        res.sat = sat;
        res.stats = stats_;
        if (sat) {
            res.model.assign(nvars_ + 1, 0);
            for (int v = 0; v < nvars_; ++v) res.model[v + 1] = value_[v] == 1 ? 1 : 0;
        }
        return res;
    }

    int add_clause_db(std::vector<int> c) {
        int idx = static_cast<int>(clauses_.size());
        watches_[neg(c[0])].push_back(idx);
        watches_[neg(c[1])].push_back(idx);
        clauses_.push_back(std::move(c));
        return idx;
    }

    int value_of(int lit) const {  // 1 true, 0 false, -1 unassigned
        int v = value_[var(lit)];
        if (v == -1) return -1;
        return (lit & 1) ? 1 - v : v;
    }

    void enqueue(int lit, int reason) {
        value_[var(lit)] = (lit & 1) ? 0 : 1;
        level_[var(lit)] = decision_level_;
        reason_[var(lit)] = reason;
        trail_.push_back(lit);
    }

    // Returns conflicting clause index or -1.
    int propagate() {
        while (qhead_ < trail_.size()) {
            int lit = trail_[qhead_++];
            ++stats_.propagations;
            auto& wl = watches_[lit];  // clauses watching ~lit via index neg(c[0/1])==lit
            size_t i = 0, j = 0;
            int confl = -1;
            for (; i < wl.size(); ++i) {
                int ci = wl[i];
                auto& c = clauses_[ci];
                int false_lit = neg(lit);
                if (c[0] == false_lit) std::swap(c[0], c[1]);
                if (value_of(c[0]) == 1) {
                    wl[j++] = ci;
                    continue;
                }
                bool moved = false;
                for (size_t k = 2; k < c.size(); ++k) {
                    if (value_of(c[k]) != 0) {
                        std::swap(c[1], c[k]);
                        watches_[neg(c[1])].push_back(ci);
                        moved = true;
                        break;
                    }
                }
                if (moved) continue;
                wl[j++] = ci;
                if (value_of(c[0]) == 0) {
                    confl = ci;
                    ++i;
                    break;
                }
                enqueue(c[0], ci);
            }
            for (; i < wl.size(); ++i) wl[j++] = wl[i];
            wl.resize(j);
            if (confl != -1) return confl;
        }
        return -1;
    }

    int pick_branch() const {
        for (int v = 0; v < nvars_; ++v)
            if (value_[v] == -1) return v;
        return -1;
    }

    // First-UIP learning; returns the backjump level, learnt[0] asserting.
    int analyze(int confl, std::vector<int>& learnt) {
        learnt.push_back(0);  // placeholder for the asserting literal
        int counter = 0;
        int p = -1;
        int idx = static_cast<int>(trail_.size()) - 1;
        for (;;) {
            const auto& c = clauses_[confl];
            for (size_t k = (p == -1 ? 0 : 1); k < c.size(); ++k) {
                int q = (p == -1) ? c[k] : c[k];
                // skip the asserting position: clauses_[confl][0] is p's lit
                if (p != -1 && c[k] == p) continue;
                int v = var(c[k]);
                if (!seen_[v] && level_[v] > 0) {
                    seen_[v] = 1;
                    if (level_[v] == decision_level_)
                        ++counter;
                    else
                        learnt.push_back(c[k]);
                }
                (void)q;
            }
            while (!seen_[var(trail_[idx])]) --idx;
            p = trail_[idx];
            confl = reason_[var(p)];
            seen_[var(p)] = 0;
            --idx;
            if (--counter == 0) break;
        }
        learnt[0] = neg(p);
        for (size_t k = 1; k < learnt.size(); ++k) seen_[var(learnt[k])] = 0;
        int back = 0;
        size_t best = 1;
        for (size_t k = 1; k < learnt.size(); ++k) {
            if (level_[var(learnt[k])] > back) {
                back = level_[var(learnt[k])];
                best = k;
            }
        }
        if (learnt.size() > 1) std::swap(learnt[1], learnt[best]);
        return back;
    }

    void backtrack(int level) {
        while (decision_level_ > level) {
            int start = trail_lim_.back();
            trail_lim_.pop_back();
            for (int i = static_cast<int>(trail_.size()) - 1; i >= start; --i)
                value_[var(trail_[i])] = -1;
            trail_.resize(start);
            --decision_level_;
        }
        if (qhead_ > trail_.size()) qhead_ = trail_.size();
    }

    int nvars_;
    std::vector<std::vector<int>> clauses_;
    std::vector<std::vector<int>> watches_;
    std::vector<int8_t> value_;
    std::vector<int> level_;
    std::vector<int> reason_;
    std::vector<int8_t> seen_;
    std::vector<int> trail_;
    std::vector<int> trail_lim_;
    std::vector<int> units_;
    size_t qhead_ = 0;
    int decision_level_ = 0;
    bool empty_clause_ = false;
    SatStats stats_;
};

}  // namespace detail

inline SatResult dpll_solve(const SatProblem& p) { return detail::CdclSolver(p).solve(); }

}  // namespace elbow
