#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include "elbow/feature_model.hpp"
#include "elbow/normalizer.hpp"
#include "helpers.hpp"

using namespace elbow;

namespace {

FeatureInterpretation zoo_interp() {
    return interp_from_json(
        nlohmann::json::parse(testutil::read_file(std::string(DATA_DIR) + "/zoo_interp.json")));
}

TBox zoo_core() {
    return parse_tbox(testutil::read_file(std::string(DATA_DIR) + "/zoo_core.tbox"));
}

std::set<std::string> F(std::initializer_list<std::string> xs) { return xs; }

}  // namespace

TEST_CASE("the zoo interpretation satisfies Def.-1 conditions") {
    CHECK(validate_interpretation(zoo_interp()).ok());
}

TEST_CASE("removing the empty-pi witness breaks condition 4") {
    FeatureInterpretation i = zoo_interp();
    i.pi.erase("d15");
    ValidationReport r = validate_interpretation(i);
    REQUIRE(!r.ok());
    bool cond4 = false;
    for (const auto& v : r.violations)
        if (v.condition.find("4") != std::string::npos) cond4 = true;
    CHECK(cond4);
}

TEST_CASE("a full feature set breaks condition 3") {
    FeatureInterpretation i = zoo_interp();
    i.pi["d1"] = {"f1", "f2", "f3", "f4"};
    ValidationReport r = validate_interpretation(i);
    REQUIRE(!r.ok());
    bool cond3 = false;
    for (const auto& v : r.violations)
        if (v.condition.find("3") != std::string::npos) cond3 = true;
    CHECK(cond3);
}

TEST_CASE("phi of the zoo names") {
    FeatureInterpretation i = zoo_interp();
    CHECK(phi(i, make_name("Rabbit")) == F({"f1", "f2", "f3"}));
    CHECK(phi(i, make_name("Zebra")) == F({"f2", "f3"}));
    CHECK(phi(i, make_name("Giraffe")) == F({"f2", "f3", "f4"}));
    CHECK(phi(i, make_name("Herbivore")) == F({"f3"}));
}

TEST_CASE("phi over an empty extension is the full feature set") {
    FeatureInterpretation i = zoo_interp();
    ConceptPtr c = make_conj(make_name("Rabbit"), make_name("Giraffe"));
    CHECK(extension(i, c).empty());
    CHECK(phi(i, c) == F({"f1", "f2", "f3", "f4"}));
}

TEST_CASE("phi of top is empty by the cond-4 witness") {
    CHECK(phi(zoo_interp(), make_top()).empty());
}

TEST_CASE("extensions over the zoo interpretation") {
    FeatureInterpretation i = zoo_interp();
    CHECK(extension(i, make_between(make_name("Rabbit"), make_name("Giraffe"))) ==
          std::set<std::string>{"d8", "d11", "d14"});
    CHECK(extension(i, make_name("Herbivore")) ==
          std::set<std::string>{"d3", "d6", "d8", "d10", "d11", "d13", "d14"});
    CHECK(extension(i, make_conj(make_name("Zebra"), make_top())) ==
          extension(i, make_name("Zebra")));
    CHECK_THROWS_AS(extension(i, make_name("Unknown")), EvalError);
}

TEST_CASE("the zoo interpretation models the core CIs") {
    CHECK(is_model(zoo_interp(), zoo_core()).ok());
}

TEST_CASE("is_model flags a violated CI with a witness") {
    TBox bad = parse_tbox("Giraffe <= Rabbit;");
    ValidationReport r = is_model(zoo_interp(), bad);
    REQUIRE(!r.ok());
    CHECK(r.violations[0].detail.find("d14") != std::string::npos);
}

TEST_CASE("is_model checks cond 2 for natural names") {
    FeatureInterpretation i = zoo_interp();
    i.name_ext["Herbivore"].erase("d3");  // d3 still has f3, so the cone is larger
    TBox t = zoo_core();
    ValidationReport r = is_model(i, t);
    REQUIRE(!r.ok());
    bool cond2 = false;
    for (const auto& v : r.violations)
        if (v.condition.find("natural") != std::string::npos ||
            v.condition.find("2") != std::string::npos)
            cond2 = true;
    CHECK(cond2);
}

TEST_CASE("element betweenness is the feature-subset test") {
    FeatureInterpretation i = zoo_interp();
    CHECK(element_between(i, "d11", "d8", "d14"));
    CHECK(element_between(i, "d3", "d3", "d3"));
    CHECK(!element_between(i, "d1", "d4", "d1"));
}

TEST_CASE("interpretation json round-trips") {
    FeatureInterpretation i = zoo_interp();
    FeatureInterpretation j = interp_from_json(interp_to_json(i));
    CHECK(i.features == j.features);
    CHECK(i.pi == j.pi);
    CHECK(i.name_ext == j.name_ext);
    CHECK(i.role_ext == j.role_ext);
}

TEST_CASE("countermodel enumeration at small bounds") {
    TBox free;
    free.add_ci(make_name("A"), make_name("A"));
    free.add_ci(make_name("B"), make_name("B"));
    NormalTBox nt = normalize(free);
    auto m = enumerate_countermodel(nt, "A", "B", 2);
    REQUIRE(m.has_value());
    CHECK(validate_interpretation(*m).ok());
    CHECK(is_model(*m, nt.tbox).ok());

    TBox sub = parse_tbox("A <= B;");
    CHECK(!enumerate_countermodel(normalize(sub), "A", "B", 3).has_value());

    NormalTBox zc = normalize(zoo_core());
    auto cm = enumerate_countermodel(zc, "Zebra", "Giraffe", 2);
    REQUIRE(cm.has_value());
    CHECK(validate_interpretation(*cm).ok());
    CHECK(is_model(*cm, zc.tbox).ok());
    std::set<std::string> ze = extension(*cm, make_name("Zebra"));
    std::set<std::string> ge = extension(*cm, make_name("Giraffe"));
    bool falsifies = false;
    for (const auto& d : ze)
        if (!ge.count(d)) falsifies = true;
    CHECK(falsifies);

    CHECK_THROWS_AS(enumerate_countermodel(nt, "A", "B", 4), BoundExceeded);
}

// ---------------------------------------------------------------------------
// Semantic property suites over random valid interpretations. The acceptance
// binary runs these at >= 1000 interpretations; here a fast sample.

TEST_CASE("semantic properties on random interpretations") {
    testutil::Rng rng(31);
    std::vector<std::string> nat = {"N1", "N2", "N3"};
    for (int it = 0; it < 200; ++it) {
        FeatureInterpretation i = testutil::random_interpretation(rng);
        REQUIRE(validate_interpretation(i).ok());
        ConceptPtr c = make_name(nat[it % 3]), d = make_name(nat[(it + 1) % 3]);

        // phi of a conjunction of naturals is the union of intents
        {
            std::set<std::string> want = phi(i, c);
            for (const auto& f : phi(i, d)) want.insert(f);
            CHECK(phi(i, make_conj(c, d)) == want);
        }

        // betweenness extension equals the element-betweenness set
        std::set<std::string> ce = extension(i, c), de = extension(i, d);
        std::set<std::string> be = extension(i, make_between(c, d));
        if (!ce.empty() && !de.empty()) {
            std::set<std::string> direct;
            for (const auto& [el, fs] : i.pi) {
                (void)fs;
                bool in = false;
                for (const auto& d1 : ce)
                    for (const auto& d2 : de)
                        if (element_between(i, d1, el, d2)) in = true;
                if (in) direct.insert(el);
            }
            CHECK(be == direct);
        }

        // the between extension is nonempty iff some operand extension is
        CHECK(be.empty() == (ce.empty() && de.empty()));

        // formal-concept closure for natural names
        for (const auto& n : nat) {
            std::set<std::string> ext = extension(i, make_name(n));
            std::set<std::string> intent = phi(i, make_name(n));
            std::set<std::string> extent_of_intent;
            for (const auto& [el, fs] : i.pi) {
                bool all = true;
                for (const auto& f : intent)
                    if (!fs.count(f)) all = false;
                if (all) extent_of_intent.insert(el);
            }
            CHECK(ext == extent_of_intent);
            std::set<std::string> intent_of_extent = i.features.empty()
                ? std::set<std::string>{}
                : std::set<std::string>(i.features.begin(), i.features.end());
            if (!ext.empty()) {
                intent_of_extent.clear();
                bool first = true;
                for (const auto& el : ext) {
                    if (first) {
                        intent_of_extent = i.pi.at(el);
                        first = false;
                    } else {
                        std::set<std::string> keep;
                        for (const auto& f : intent_of_extent)
                            if (i.pi.at(el).count(f)) keep.insert(f);
                        intent_of_extent = keep;
                    }
                }
            }
            CHECK(intent == intent_of_extent);
        }

        // phi-inclusion matches extension-inclusion against natural rhs
        for (const auto& cc : {std::string("C1"), std::string("C2"), nat[it % 3]}) {
            std::set<std::string> cext = extension(i, make_name(cc));
            std::set<std::string> dphi = phi(i, d), cphi = phi(i, make_name(cc));
            bool phi_incl = std::includes(cphi.begin(), cphi.end(), dphi.begin(), dphi.end());
            bool ext_incl = std::includes(de.begin(), de.end(), cext.begin(), cext.end());
            CHECK(phi_incl == ext_incl);
        }
    }
}
