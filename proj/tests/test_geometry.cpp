#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "elbow/geometry.hpp"
#include "helpers.hpp"

using namespace elbow;

namespace {

RationalVector vec(std::initializer_list<int> xs) {
    RationalVector v;
    for (int x : xs) v.push_back(Rational(x));
    return v;
}

RationalVector rvec(testutil::Rng& rng, int dim) {
    RationalVector v;
    for (int i = 0; i < dim; ++i)
        v.push_back(Rational(rng.range(-6, 6), rng.range(1, 4)));
    return v;
}

}  // namespace

TEST_CASE("vertices and midpoints are hull members") {
    VRegion r{RegionKind::General, {vec({0, 0}), vec({2, 0}), vec({0, 2})}};
    CHECK(hull_membership(vec({0, 0}), r));
    CHECK(hull_membership(vec({1, 0}), r));  // midpoint of two vertices
    RationalVector interior{Rational(1, 2), Rational(1, 2)};
    CHECK(hull_membership(interior, r));
    CHECK(!hull_membership(vec({2, 2}), r));
    CHECK(!hull_membership(vec({-1, 0}), r));
}

TEST_CASE("dimension mismatch is an error") {
    VRegion r{RegionKind::General, {vec({0, 0})}};
    CHECK_THROWS_AS(hull_membership(vec({0, 0, 0}), r), GeometryError);
}

TEST_CASE("empty region has no members") {
    VRegion r{RegionKind::General, {}};
    CHECK(!hull_membership(vec({0, 0}), r));
}

TEST_CASE("simplex and caratheodory oracles agree on random instances") {
    testutil::Rng rng(71);
    for (int it = 0; it < 300; ++it) {
        int dim = rng.range(1, 4), nverts = rng.range(1, 8);
        VRegion r;
        for (int v = 0; v < nverts; ++v) r.vertices.push_back(rvec(rng, dim));
        // mix random points with convex combinations so both answers occur
        RationalVector p;
        if (rng.coin()) {
            p = rvec(rng, dim);
        } else {
            p = RationalVector(dim, Rational(0));
            Rational total(0);
            std::vector<Rational> w;
            for (int v = 0; v < nverts; ++v) {
                w.push_back(Rational(rng.range(0, 4)));
                total += w.back();
            }
            if (total == 0) w[0] = total = 1;
            for (int v = 0; v < nverts; ++v)
                for (int i = 0; i < dim; ++i) p[i] += r.vertices[v][i] * w[v] / total;
        }
        bool s = hull_membership(p, r, HullMethod::Simplex);
        bool c = hull_membership(p, r, HullMethod::Caratheodory);
        CHECK_MESSAGE(s == c, "oracle disagreement at dim ", dim, " verts ", nverts);
    }
}

TEST_CASE("hull membership is monotone in the vertex set") {
    testutil::Rng rng(72);
    for (int it = 0; it < 100; ++it) {
        int dim = rng.range(1, 3);
        VRegion small, big;
        for (int v = 0; v < 4; ++v) small.vertices.push_back(rvec(rng, dim));
        big = small;
        big.vertices.push_back(rvec(rng, dim));
        RationalVector p = rvec(rng, dim);
        if (hull_membership(p, small)) CHECK(hull_membership(p, big));
    }
}

TEST_CASE("simplex faces intersect on common vertices") {
    int dim = 3;
    VRegion f12{RegionKind::SimplexFace, {unit_vector(dim, 0), unit_vector(dim, 1)}};
    VRegion f23{RegionKind::SimplexFace, {unit_vector(dim, 1), unit_vector(dim, 2)}};
    VRegion i = intersect_regions(f12, f23);
    REQUIRE(i.vertices.size() == 1);
    CHECK(i.vertices[0] == unit_vector(dim, 1));

    VRegion f1{RegionKind::SimplexFace, {unit_vector(dim, 0)}};
    VRegion f2{RegionKind::SimplexFace, {unit_vector(dim, 2)}};
    CHECK(intersect_regions(f1, f2).vertices.empty());

    VRegion gen{RegionKind::General, {vec({1, 0, 0})}};
    CHECK_THROWS_AS(intersect_regions(f1, gen), GeometryError);
}

TEST_CASE("face intersection matches pointwise conjunction on unit vectors") {
    testutil::Rng rng(73);
    int dim = 4;
    for (int it = 0; it < 50; ++it) {
        VRegion a{RegionKind::SimplexFace, {}}, b{RegionKind::SimplexFace, {}};
        for (int v = 0; v < dim; ++v) {
            if (rng.coin()) a.vertices.push_back(unit_vector(dim, v));
            if (rng.coin()) b.vertices.push_back(unit_vector(dim, v));
        }
        VRegion i = intersect_regions(a, b);
        for (int v = 0; v < dim; ++v) {
            RationalVector e = unit_vector(dim, v);
            CHECK(hull_membership(e, i) == (hull_membership(e, a) && hull_membership(e, b)));
        }
    }
}

TEST_CASE("concept evaluation over a small model") {
    GeometricModel m;
    m.dimension = 3;
    m.concept_regions["A"] = {RegionKind::SimplexFace, {unit_vector(3, 0), unit_vector(3, 1)}};
    m.concept_regions["B"] = {RegionKind::SimplexFace, {unit_vector(3, 1), unit_vector(3, 2)}};
    m.concept_regions["G"] = {RegionKind::General, {vec({2, 2, 2})}};
    m.natural_names = {"A", "B"};
    m.role_pairs["r"] = {{unit_vector(3, 0), vec({2, 2, 2})}};

    CHECK(evaluate_membership(m, make_top(), vec({9, 9, 9})));
    CHECK(evaluate_membership(m, make_name("A"), unit_vector(3, 0)));
    CHECK(!evaluate_membership(m, make_name("A"), unit_vector(3, 2)));
    // conjunction: only the shared vertex e2 survives
    ConceptPtr ab = make_conj(make_name("A"), make_name("B"));
    CHECK(evaluate_membership(m, ab, unit_vector(3, 1)));
    CHECK(!evaluate_membership(m, ab, unit_vector(3, 0)));
    // betweenness: hull of the union covers the midpoint of e1 and e3
    ConceptPtr between = make_between(make_name("A"), make_name("B"));
    RationalVector mid{Rational(1, 2), Rational(0), Rational(1, 2)};
    CHECK(evaluate_membership(m, between, mid));
    CHECK(evaluate_membership(m, make_between(make_name("B"), make_name("A")), mid));
    // existential: the only r-pair starts at e1
    ConceptPtr ex = make_exists("r", make_top());
    CHECK(evaluate_membership(m, ex, unit_vector(3, 0)));
    CHECK(!evaluate_membership(m, ex, unit_vector(3, 1)));
}

TEST_CASE("betweenness membership is symmetric") {
    testutil::Rng rng(74);
    for (int it = 0; it < 50; ++it) {
        GeometricModel m;
        m.dimension = 2;
        VRegion a, b;
        for (int v = 0; v < 3; ++v) {
            a.vertices.push_back(rvec(rng, 2));
            b.vertices.push_back(rvec(rng, 2));
        }
        m.concept_regions["A"] = a;
        m.concept_regions["B"] = b;
        m.natural_names = {"A", "B"};
        RationalVector p = rvec(rng, 2);
        CHECK(evaluate_membership(m, make_between(make_name("A"), make_name("B")), p) ==
              evaluate_membership(m, make_between(make_name("B"), make_name("A")), p));
    }
}

TEST_CASE("check_ci verifies and refutes inclusions") {
    GeometricModel m;
    m.dimension = 2;
    m.concept_regions["A"] = {RegionKind::SimplexFace, {unit_vector(2, 0)}};
    m.concept_regions["B"] = {RegionKind::SimplexFace, {unit_vector(2, 0), unit_vector(2, 1)}};
    m.natural_names = {"A", "B"};

    CICertificate ok{{make_name("A"), make_name("B")}, {unit_vector(2, 0)}};
    CHECK(check_ci(m, ok).ok);

    CICertificate bad{{make_name("B"), make_name("A")}, {unit_vector(2, 0), unit_vector(2, 1)}};
    CICheckResult r = check_ci(m, bad);
    CHECK(!r.ok);

    // a certificate that does not span the LHS region is rejected
    CICertificate partial{{make_name("B"), make_name("B")}, {unit_vector(2, 0)}};
    CHECK(!check_ci(m, partial).ok);
}

TEST_CASE("rational strings round trip") {
    CHECK(rational_to_string(rational_from_string("3/4")) == "3/4");
    CHECK(rational_to_string(rational_from_string("-2")) == "-2");
    CHECK(rational_from_string("2/4") == Rational(1, 2));
}

TEST_CASE("model json round trips") {
    GeometricModel m;
    m.dimension = 2;
    m.concept_regions["A"] = {RegionKind::SimplexFace, {unit_vector(2, 0)}};
    m.concept_regions["G"] = {RegionKind::General, {vec({-1, 2})}};
    m.natural_names = {"A"};
    m.role_pairs["r"] = {{vec({0, 0}), vec({1, 1})}};
    GeometricModel back = model_from_json(model_to_json(m));
    CHECK(back.dimension == 2);
    CHECK(back.concept_regions.at("A").kind == RegionKind::SimplexFace);
    CHECK(back.concept_regions.at("G").vertices == m.concept_regions["G"].vertices);
    CHECK(back.natural_names == m.natural_names);
    CHECK(back.role_pairs.at("r") == m.role_pairs["r"]);
}
