#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "elbow/sat.hpp"
#include "helpers.hpp"

using namespace elbow;

namespace {

// Truth-table oracle, <= 16 variables.
bool brute_force_sat(const SatProblem& p) {
    REQUIRE(p.num_vars <= 16);
    for (uint32_t m = 0; m < (1u << p.num_vars); ++m) {
        bool all = true;
        for (const auto& c : p.clauses) {
            bool sat = false;
            for (int l : c) {
                int v = l > 0 ? l : -l;
                bool val = (m >> (v - 1)) & 1;
                if ((l > 0) == val) sat = true;
            }
            if (!sat) {
                all = false;
                break;
            }
        }
        if (all) return true;
    }
    return false;
}

bool model_satisfies(const SatProblem& p, const std::vector<int8_t>& model) {
    for (const auto& c : p.clauses) {
        bool sat = false;
        for (int l : c) {
            int v = l > 0 ? l : -l;
            if ((l > 0) == (model[v] != 0)) sat = true;
        }
        if (!sat) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("unit clause forces the variable") {
    SatProblem p;
    int x = p.new_var("x");
    p.add_clause({x});
    SatResult r = dpll_solve(p);
    REQUIRE(r.sat);
    CHECK(r.model[x] == 1);
}

TEST_CASE("contradictory units are unsat") {
    SatProblem p;
    int x = p.new_var("x");
    p.add_clause({x});
    p.add_clause({-x});
    CHECK(!dpll_solve(p).sat);
}

TEST_CASE("empty problem is sat, empty clause unsat") {
    SatProblem p;
    CHECK(dpll_solve(p).sat);
    p.new_var();
    p.add_clause({});
    CHECK(!dpll_solve(p).sat);
}

TEST_CASE("random instances agree with the truth table") {
    testutil::Rng rng(41);
    for (int it = 0; it < 400; ++it) {
        SatProblem p;
        int nv = rng.range(1, 10);
        for (int v = 0; v < nv; ++v) p.new_var();
        int nc = rng.range(1, 24);
        for (int c = 0; c < nc; ++c) {
            std::vector<int> lits;
            int len = rng.range(1, 3);
            for (int j = 0; j < len; ++j) {
                int v = rng.range(1, nv);
                lits.push_back(rng.coin() ? v : -v);
            }
            p.add_clause(lits);
        }
        SatResult r = dpll_solve(p);
        CHECK(r.sat == brute_force_sat(p));
        if (r.sat) CHECK(model_satisfies(p, r.model));
    }
}

TEST_CASE("solver is deterministic") {
    testutil::Rng rng(42);
    SatProblem p;
    for (int v = 0; v < 8; ++v) p.new_var();
    for (int c = 0; c < 12; ++c)
        p.add_clause({rng.coin() ? rng.range(1, 8) : -rng.range(1, 8),
                      rng.coin() ? rng.range(1, 8) : -rng.range(1, 8)});
    SatResult a = dpll_solve(p), b = dpll_solve(p);
    CHECK(a.sat == b.sat);
    CHECK(a.model == b.model);
    CHECK(a.stats.decisions == b.stats.decisions);
}

TEST_CASE("dimacs export has the standard shape") {
    SatProblem p;
    int x = p.new_var("x"), y = p.new_var("y");
    p.add_clause({x, -y});
    std::string d = p.to_dimacs();
    CHECK(d.find("p cnf 2 1") != std::string::npos);
    CHECK(d.find("1 -2 0") != std::string::npos);
}
