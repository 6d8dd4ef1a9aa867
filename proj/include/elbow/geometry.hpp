#pragma once

// Exact-rational convex geometry: V-polytope regions, hull membership via
// phase-1 simplex (Bland's rule) with a Caratheodory brute-force oracle,
// evaluation of concepts over explicit geometric models, and
// certificate-based CI checking.

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"
#include "syntax.hpp"

namespace elbow {

using Rational = boost::multiprecision::cpp_rational;
using RationalVector = std::vector<Rational>;

struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class RegionKind { General, SimplexFace };

// Denotes the convex hull of its vertices; an empty vertex list denotes the
// empty region (produced by disjoint face intersections).
struct VRegion {
    RegionKind kind = RegionKind::General;
    std::vector<RationalVector> vertices;
};

struct GeometricModel {
    int dimension = 0;
    std::map<std::string, VRegion> concept_regions;
    std::map<std::string, std::vector<std::pair<RationalVector, RationalVector>>> role_pairs;
    std::set<std::string> natural_names;
};

struct CICertificate {
    ConceptInclusion ci;
    std::vector<RationalVector> lhs_witness_vertices;
};

inline RationalVector unit_vector(int dim, int axis) {
    RationalVector v(dim, Rational(0));
    v[axis] = 1;
    return v;
}

namespace detail {

// Phase-1 simplex, Bland's rule, exact rationals. Decides feasibility of
// { lambda >= 0, sum lambda = 1, sum lambda_i v_i = p }.
inline bool lp_in_hull(const RationalVector& p, const std::vector<RationalVector>& verts) {
    if (verts.empty()) return false;
    const int d = static_cast<int>(p.size());
    const int n = static_cast<int>(verts.size());
    const int m = d + 1;  // equality constraints
    // Tableau rows: [A | I_artificial | b], b made nonnegative per row.
    std::vector<std::vector<Rational>> t(m, std::vector<Rational>(n + m + 1, Rational(0)));
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < n; ++j) t[i][j] = verts[j][i];
        t[i][n + m] = p[i];
    }
    for (int j = 0; j < n; ++j) t[d][j] = 1;
    t[d][n + m] = 1;
    for (int i = 0; i < m; ++i) {
        if (t[i][n + m] < 0)
            for (auto& x : t[i]) x = -x;
        t[i][n + i] = 1;
    }
    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = n + i;
    // Reduced costs for cost = sum of artificials: r_j = c_j - sum over rows
    // with artificial basis; maintained implicitly by recomputation (desk
    // scale keeps this cheap and obviously correct).
    auto reduced_cost = [&](int j) {
        Rational r = (j >= n) ? Rational(1) : Rational(0);
        for (int i = 0; i < m; ++i)
            if (basis[i] >= n) r -= t[i][j];
        return r;
    };
    for (;;) {
        int enter = -1;
        for (int j = 0; j < n + m; ++j) {
            if (reduced_cost(j) < 0) {
                enter = j;
                break;  // Bland: lowest index
            }
        }
        if (enter == -1) break;
        int leave = -1;
        Rational best;
        for (int i = 0; i < m; ++i) {
            if (t[i][enter] > 0) {
                Rational ratio = t[i][n + m] / t[i][enter];
                if (leave == -1 || ratio < best ||
                    (ratio == best && basis[i] < basis[leave])) {
                    best = ratio;
                    leave = i;
                }
            }
        }
        if (leave == -1)
            throw GeometryError("phase-1 LP unbounded (internal error)");
        Rational piv = t[leave][enter];
        for (auto& x : t[leave]) x /= piv;
        for (int i = 0; i < m; ++i) {
            if (i == leave || t[i][enter] == 0) continue;
            Rational f = t[i][enter];
            for (int j = 0; j <= n + m; ++j) t[i][j] -= f * t[leave][j];
        }
        basis[leave] = enter;
    }
    Rational obj = 0;
    for (int i = 0; i < m; ++i)
        if (basis[i] >= n) obj += t[i][n + m];
    return obj == 0;
}

// Solves the (d+1) x k system [v;1] lambda = [p;1] by Gaussian elimination;
// returns the unique solution if the columns are linearly independent and the
// system is consistent.
inline std::optional<std::vector<Rational>> solve_affine(
    const RationalVector& p, const std::vector<const RationalVector*>& verts) {
    const int d = static_cast<int>(p.size());
    const int k = static_cast<int>(verts.size());
    const int rows = d + 1;
    std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(k + 1, Rational(0)));
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < k; ++j) a[i][j] = (*verts[j])[i];
        a[i][k] = p[i];
    }
    for (int j = 0; j < k; ++j) a[d][j] = 1;
    a[d][k] = 1;
    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < k && r < rows; ++c) {
        int pr = -1;
        for (int i = r; i < rows; ++i)
            if (a[i][c] != 0) {
                pr = i;
                break;
            }
        if (pr == -1) continue;
        std::swap(a[r], a[pr]);
        Rational pv = a[r][c];
        for (auto& x : a[r]) x /= pv;
        for (int i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rational f = a[i][c];
            for (int j = c; j <= k; ++j) a[i][j] -= f * a[r][j];
        }
        pivot_col.push_back(c);
        ++r;
    }
    if (static_cast<int>(pivot_col.size()) < k) return std::nullopt;  // dependent columns
    for (int i = r; i < rows; ++i)
        if (a[i][k] != 0) return std::nullopt;  // inconsistent
    std::vector<Rational> sol(k);
    for (int i = 0; i < k; ++i) sol[pivot_col[i]] = a[i][k];
    return sol;
}

inline bool caratheodory_subset(const RationalVector& p,
                                const std::vector<RationalVector>& verts,
                                std::vector<const RationalVector*>& chosen, size_t start,
                                size_t max_size) {
    if (!chosen.empty()) {
        auto sol = solve_affine(p, chosen);
        if (sol) {
            bool nonneg = true;
            for (const auto& l : *sol)
                if (l < 0) {
                    nonneg = false;
                    break;
                }
            if (nonneg) return true;
        }
    }
    if (chosen.size() == max_size) return false;
    for (size_t i = start; i < verts.size(); ++i) {
        chosen.push_back(&verts[i]);
        if (caratheodory_subset(p, verts, chosen, i + 1, max_size)) return true;
        chosen.pop_back();
    }
    return false;
}

}  // namespace detail

enum class HullMethod { Simplex, Caratheodory };

inline bool hull_membership(const RationalVector& p, const VRegion& r,
                            HullMethod method = HullMethod::Simplex) {
    for (const auto& v : r.vertices)
        if (v.size() != p.size()) throw GeometryError("dimension mismatch in hull_membership");
    if (r.vertices.empty()) return false;
    if (method == HullMethod::Simplex) return detail::lp_in_hull(p, r.vertices);
    std::vector<const RationalVector*> chosen;
    return detail::caratheodory_subset(p, r.vertices, chosen, 0, p.size() + 1);
}

// Region algebra closed under: names, SimplexFace conjunction, betweenness of
// evaluable operands (vertex union). Returns nullopt when outside the algebra.
inline std::optional<VRegion> region_of(const GeometricModel& model, const ConceptPtr& c) {
    switch (c->kind) {
        case ConceptKind::Name: {
            auto it = model.concept_regions.find(c->label);
            if (it == model.concept_regions.end())
                throw GeometryError("no region for concept name " + c->label);
            return it->second;
        }
        case ConceptKind::Conj: {
            auto a = region_of(model, c->lhs);
            auto b = region_of(model, c->rhs);
            if (!a || !b) return std::nullopt;
            if (a->kind != RegionKind::SimplexFace || b->kind != RegionKind::SimplexFace)
                return std::nullopt;
            VRegion out;
            out.kind = RegionKind::SimplexFace;
            for (const auto& v : a->vertices)
                for (const auto& w : b->vertices)
                    if (v == w) out.vertices.push_back(v);
            return out;
        }
        case ConceptKind::Between: {
            auto a = region_of(model, c->lhs);
            auto b = region_of(model, c->rhs);
            if (!a || !b) return std::nullopt;
            VRegion out;
            out.kind = RegionKind::General;
            out.vertices = a->vertices;
            out.vertices.insert(out.vertices.end(), b->vertices.begin(), b->vertices.end());
            return out;
        }
        default:
            return std::nullopt;
    }
}

inline VRegion intersect_regions(const VRegion& a, const VRegion& b) {
    if (a.kind != RegionKind::SimplexFace || b.kind != RegionKind::SimplexFace)
        throw GeometryError("intersect_regions supports SimplexFace regions only");
    VRegion out;
    out.kind = RegionKind::SimplexFace;
    for (const auto& v : a.vertices)
        for (const auto& w : b.vertices)
            if (v == w) out.vertices.push_back(v);
    return out;
}

inline bool evaluate_membership(const GeometricModel& model, const ConceptPtr& c,
                                const RationalVector& p) {
    switch (c->kind) {
        case ConceptKind::Top:
            return true;
        case ConceptKind::BottomToken:
            return false;
        case ConceptKind::Name: {
            auto it = model.concept_regions.find(c->label);
            if (it == model.concept_regions.end())
                throw GeometryError("no region for concept name " + c->label);
            return hull_membership(p, it->second);
        }
        case ConceptKind::Conj:
            return evaluate_membership(model, c->lhs, p) &&
                   evaluate_membership(model, c->rhs, p);
        case ConceptKind::Exists: {
            auto it = model.role_pairs.find(c->label);
            if (it == model.role_pairs.end()) return false;
            for (const auto& [q, q2] : it->second)
                if (q == p && evaluate_membership(model, c->rhs, q2)) return true;
            return false;
        }
        case ConceptKind::Between: {
            auto r = region_of(model, c);
            if (!r)
                throw GeometryError("unsupported region algebra under betweenness: " +
                                    to_string(c));
            return hull_membership(p, *r);
        }
    }
    throw GeometryError("unreachable concept kind");
}

struct CICheckResult {
    bool ok = true;
    std::optional<RationalVector> violating_point;
    std::string message;
};

inline CICheckResult check_ci(const GeometricModel& model, const CICertificate& cert) {
    CICheckResult res;
    for (const auto& p : cert.lhs_witness_vertices) {
        if (!evaluate_membership(model, cert.ci.rhs, p)) {
            res.ok = false;
            res.violating_point = p;
            res.message = "witness vertex outside RHS region";
            return res;
        }
    }
    auto lhs_region = region_of(model, cert.ci.lhs);
    if (!lhs_region) {
        if (cert.lhs_witness_vertices.empty())
            throw GeometryError("non-evaluable LHS requires certificate witnesses: " +
                                to_string(cert.ci.lhs));
        return res;  // witnesses checked; span check impossible
    }
    VRegion witness_hull{RegionKind::General, cert.lhs_witness_vertices};
    for (const auto& v : lhs_region->vertices) {
        if (!hull_membership(v, witness_hull)) {
            res.ok = false;
            res.violating_point = v;
            res.message = "LHS vertex outside witness hull (certificate does not span LHS)";
            return res;
        }
    }
    VRegion lhs_hull{RegionKind::General, lhs_region->vertices};
    for (const auto& w : cert.lhs_witness_vertices) {
        if (!hull_membership(w, lhs_hull)) {
            res.ok = false;
            res.violating_point = w;
            res.message = "witness vertex outside LHS region";
            return res;
        }
    }
    return res;
}

// ---- JSON I/O; rationals as "p/q" (or plain integer) strings ----

inline Rational rational_from_string(const std::string& s) {
    try {
        return Rational(s);
    } catch (const std::exception&) {
        throw GeometryError("bad rational literal: " + s);
    }
}

inline std::string rational_to_string(const Rational& r) {
    if (boost::multiprecision::denominator(r) == 1)
        return boost::multiprecision::numerator(r).str();
    return boost::multiprecision::numerator(r).str() + "/" +
           boost::multiprecision::denominator(r).str();
}

inline nlohmann::json vector_to_json(const RationalVector& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& x : v) a.push_back(rational_to_string(x));
    return a;
}

inline RationalVector vector_from_json(const nlohmann::json& a, int dim) {
    if (!a.is_array() || static_cast<int>(a.size()) != dim)
        throw GeometryError("point has wrong dimension");
    RationalVector v;
    for (const auto& x : a) v.push_back(rational_from_string(x.get<std::string>()));
    return v;
}

inline nlohmann::json model_to_json(const GeometricModel& m) {
    nlohmann::json j;
    j["dim"] = m.dimension;
    j["regions"] = nlohmann::json::object();
    for (const auto& [name, r] : m.concept_regions) {
        nlohmann::json jr;
        jr["kind"] = r.kind == RegionKind::SimplexFace ? "simplex_face" : "general";
        jr["vertices"] = nlohmann::json::array();
        for (const auto& v : r.vertices) jr["vertices"].push_back(vector_to_json(v));
        j["regions"][name] = std::move(jr);
    }
    j["roles"] = nlohmann::json::object();
    for (const auto& [role, pairs] : m.role_pairs) {
        nlohmann::json ja = nlohmann::json::array();
        for (const auto& [p, q] : pairs)
            ja.push_back(nlohmann::json::array({vector_to_json(p), vector_to_json(q)}));
        j["roles"][role] = std::move(ja);
    }
    j["natural"] = nlohmann::json::array();
    for (const auto& n : m.natural_names) j["natural"].push_back(n);
    return j;
}

inline GeometricModel model_from_json(const nlohmann::json& j) {
    GeometricModel m;
    m.dimension = j.at("dim").get<int>();
    if (m.dimension <= 0 || m.dimension > 32)
        throw GeometryError("dimension out of range (1..32)");
    for (const auto& [name, jr] : j.at("regions").items()) {
        VRegion r;
        std::string kind = jr.at("kind").get<std::string>();
        if (kind == "simplex_face")
            r.kind = RegionKind::SimplexFace;
        else if (kind == "general")
            r.kind = RegionKind::General;
        else
            throw GeometryError("unknown region kind: " + kind);
        for (const auto& jv : jr.at("vertices")) r.vertices.push_back(vector_from_json(jv, m.dimension));
        if (r.kind == RegionKind::SimplexFace) {
            std::set<int> axes;
            for (const auto& v : r.vertices) {
                int axis = -1;
                for (int i = 0; i < m.dimension; ++i) {
                    if (v[i] == 1 && axis == -1)
                        axis = i;
                    else if (v[i] != 0)
                        axis = -2;
                }
                if (axis < 0 || !axes.insert(axis).second)
                    throw GeometryError("simplex_face vertices must be distinct unit vectors: " +
                                        name);
            }
        }
        m.concept_regions[name] = std::move(r);
    }
    if (j.contains("roles")) {
        for (const auto& [role, ja] : j.at("roles").items()) {
            for (const auto& jp : ja) {
                if (!jp.is_array() || jp.size() != 2)
                    throw GeometryError("role pair must be a two-point array");
                m.role_pairs[role].emplace_back(vector_from_json(jp[0], m.dimension),
                                                vector_from_json(jp[1], m.dimension));
            }
        }
    }
    if (j.contains("natural"))
        for (const auto& n : j.at("natural")) m.natural_names.insert(n.get<std::string>());
    for (const auto& n : m.natural_names)
        if (!m.concept_regions.count(n))
            throw GeometryError("natural name without region: " + n);
    return m;
}

}  // namespace elbow
