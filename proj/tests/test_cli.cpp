#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "elbow/feature_model.hpp"
#include "helpers.hpp"

namespace {

struct CmdResult {
    int exit_code;
    std::string out;
};

CmdResult run(const std::string& args) {
    std::string cmd = std::string(ELBOW_BIN) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = std::string("/tmp/") + name;
    std::ofstream(path) << content;
    return path;
}

const std::string zoo = std::string(DATA_DIR) + "/zoo.tbox";

}  // namespace

TEST_CASE("check exits 0 on entailment and 1 otherwise") {
    CmdResult r = run("check " + zoo + " --lhs Zebra --rhs Herbivore");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("ENTAILED") == 0);
    CmdResult n = run("check " + zoo + " --lhs Herbivore --rhs Zebra");
    CHECK(n.exit_code == 1);
    CHECK(n.out.find("NOT ENTAILED") == 0);
}

TEST_CASE("check --json carries engine, stats and trace") {
    CmdResult r = run("check " + zoo + " --lhs Zebra --rhs Herbivore --json");
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["entailed"] == true);
    CHECK(j.contains("engine"));
    CHECK(j.contains("stats"));
    CHECK(j["trace"].dump().find("lemma4") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run("check").exit_code == 2);
    CHECK(run("no-such-command").exit_code == 2);
    CHECK(run("check /no/such/file.tbox --lhs A --rhs B").exit_code == 2);
}

TEST_CASE("resource bounds exit 3") {
    std::string atoms = "atoms";
    for (int i = 0; i < 15; ++i) atoms += " p" + std::to_string(i);
    std::string net = write_temp("elbow_big.gcp", atoms + ";\ntop : p0;\n");
    std::string all_false = "!p0";
    for (int i = 1; i < 15; ++i) all_false += " & !p" + std::to_string(i);
    CmdResult r = run("dominance " + net + " --from \"" + all_false + "\" --to \"" + all_false + "\"");
    CHECK(r.exit_code == 3);
}

TEST_CASE("countermodel output validates against the same tbox") {
    CmdResult r = run("countermodel " + zoo + " --lhs Herbivore --rhs Zebra --json");
    CHECK(r.exit_code == 1);
    auto j = nlohmann::json::parse(r.out);
    elbow::FeatureInterpretation m = elbow::interp_from_json(j);
    CHECK(elbow::validate_interpretation(m).ok());
    std::string path = write_temp("elbow_cm.json", r.out);
    CmdResult v = run("validate-model " + path + " --tbox " + zoo);
    CHECK(v.exit_code == 0);

    CmdResult e = run("countermodel " + zoo + " --lhs Zebra --rhs Herbivore");
    CHECK(e.exit_code == 0);
    CHECK(e.out.find("ENTAILED") != std::string::npos);
}

TEST_CASE("countermodel --enumerate cross-validates the search") {
    std::string core = std::string(DATA_DIR) + "/zoo_core.tbox";
    CmdResult r = run("countermodel " + core + " --lhs Zebra --rhs Giraffe --enumerate --json");
    CHECK(r.exit_code == 1);
    elbow::FeatureInterpretation m = elbow::interp_from_json(nlohmann::json::parse(r.out));
    CHECK(elbow::validate_interpretation(m).ok());
}

TEST_CASE("validate-model accepts the book interpretation") {
    std::string interp = std::string(DATA_DIR) + "/zoo_interp.json";
    std::string core = std::string(DATA_DIR) + "/zoo_core.tbox";
    CHECK(run("validate-model " + interp).exit_code == 0);
    CHECK(run("validate-model " + interp + " --tbox " + core).exit_code == 0);
    std::string bad_tbox = write_temp("elbow_bad.tbox", "Giraffe <= Rabbit;\n");
    CHECK(run("validate-model " + interp + " --tbox " + bad_tbox).exit_code == 1);
}

TEST_CASE("classify lists the zoo subsumptions in canonical order") {
    CmdResult r = run("classify " + zoo);
    CHECK(r.exit_code == 0);
    CHECK(r.out ==
          "Giraffe <= Herbivore\n"
          "Rabbit <= Herbivore\n"
          "Zebra <= Herbivore\n");
    CmdResult pr = run("classify " + zoo + " --jobs 4");
    CHECK(pr.out == r.out);
}

TEST_CASE("normalize emits a re-parsable normal tbox") {
    CmdResult r = run("normalize " + zoo);
    CHECK(r.exit_code == 0);
    std::string path = write_temp("elbow_norm.tbox", r.out);
    CmdResult again = run("normalize " + path);
    CHECK(again.exit_code == 0);
    CHECK(again.out == r.out);  // idempotent
}

TEST_CASE("saturate --interpolative reports the zoo derivation") {
    CmdResult r = run("saturate " + zoo + " --interpolative");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("Zebra <= Herbivore") != std::string::npos);
}

TEST_CASE("from-prop --check agrees with the truth table") {
    std::string cnf = write_temp("elbow_p.cnf", "p cnf 3 2\n-1 2 0\n-2 3 0\n");
    CmdResult r = run("from-prop " + cnf + " --conclusion \"-1 3\" --check");
    CHECK(r.exit_code == 0);
    CmdResult n = run("from-prop " + cnf + " --conclusion \"-3 1\" --check");
    CHECK(n.exit_code == 0);  // oracles agree on "not entailed"
    CHECK(n.out.find("truth table: not entailed, subsumption: not entailed") != std::string::npos);
}

TEST_CASE("dominance and gcp commands") {
    std::string net = write_temp("elbow_n.gcp", "atoms a b;\ntop : a;\na : b;\n");
    CmdResult y = run("dominance " + net + " --from \"!a & !b\" --to \"a & b\"");
    CHECK(y.exit_code == 0);
    CHECK(y.out.find("DOMINATES") == 0);
    CmdResult no = run("dominance " + net + " --from \"a & b\" --to \"!a & !b\"");
    CHECK(no.exit_code == 1);

    CmdResult red = run("from-gcp " + net + " --initial \"!a & !b\"");
    CHECK(red.exit_code == 0);
    CHECK(red.out.find("btw(W1, X1)") != std::string::npos);

    CmdResult v = run("gcp-verify " + net + " --initial \"!a & !b\"");
    CHECK(v.exit_code == 0);

    CmdResult rv = run("gcp-verify --random 3 --seed 5");
    CHECK(rv.exit_code == 0);
}

TEST_CASE("geo commands work on an exported hardness model") {
    std::string net = write_temp("elbow_n2.gcp", "atoms a;\ntop : a;\n");
    CmdResult model = run("from-gcp " + net + " --initial \"!a\" --model --json");
    CHECK(model.exit_code == 0);
    std::string mpath =
        write_temp("elbow_hm.json", nlohmann::json::parse(model.out)["model"].dump());
    CmdResult gc = run("geo-check " + mpath + " --lhs X1 --rhs Z");
    CHECK(gc.exit_code == 0);

    std::string tpath = write_temp("elbow_red.tbox",
                                   run("from-gcp " + net + " --initial \"!a\"").out);
    CmdResult gd = run("geo-derive " + tpath + " --lhs A_a --rhs Z");
    CHECK(gd.exit_code == 0);
    CHECK(gd.out.find("DERIVABLE") == 0);
    CmdResult gu = run("geo-derive " + tpath + " --lhs Z --rhs A_a");
    CHECK(gu.exit_code == 1);
    CHECK(gu.out.find("UNKNOWN") == 0);
}
