// Command-line front end. Exit codes: 0 affirmative/ok, 1 negative verdict
// (not entailed / violated / not dominated), 2 input error, 3 resource bound.

#include <atomic>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <functional>
#include <mutex>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "elbow/feature_model.hpp"
#include "elbow/feature_reasoner.hpp"
#include "elbow/gcpnet.hpp"
#include "elbow/geo_reasoner.hpp"
#include "elbow/geometry.hpp"
#include "elbow/normalizer.hpp"
#include "elbow/prop_bridge.hpp"
#include "elbow/syntax.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

elbow::TBox load_tbox(const std::string& path) { return elbow::parse_tbox(read_file(path)); }

nlohmann::json load_json(const std::string& path) {
    return nlohmann::json::parse(read_file(path));
}

// Runs fn(i) for i in [0, n) on up to jobs threads; exceptions rethrown.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
    if (jobs <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto worker = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!err) err = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    for (int t = 0; t < std::min(jobs, n); ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (err) std::rethrow_exception(err);
}

elbow::Clause clause_from_dimacs_lits(const std::string& text) {
    elbow::Clause c;
    std::istringstream is(text);
    long long lit;
    while (is >> lit) {
        if (lit == 0) break;
        std::string a = "a" + std::to_string(lit < 0 ? -lit : lit);
        (lit > 0 ? c.positives : c.negatives).insert(a);
    }
    return c;
}

struct NegativeVerdict {};  // thrown to exit with code 1 after output

int cmd_check(const std::string& file, const std::string& lhs, const std::string& rhs,
              bool json, const std::string& engine, int max_features) {
    elbow::TBox t = load_tbox(file);
    elbow::DecideOptions opts;
    opts.max_model_features = max_features;
    if (engine == "direct") opts.engine = elbow::DecideOptions::ForceDirect;
    if (engine == "encoding") opts.engine = elbow::DecideOptions::ForceEncoding;
    elbow::DecideResult r = elbow::decide_subsumption(t, elbow::parse_concept(lhs),
                                                      elbow::parse_concept(rhs), opts);
    if (json) {
        nlohmann::json j;
        j["entailed"] = r.entailed;
        j["engine"] = r.engine;
        j["stats"] = {{"sat_calls", r.stats.sat_calls},
                      {"decisions", r.stats.decisions},
                      {"conflicts", r.stats.conflicts},
                      {"propagations", r.stats.propagations}};
        if (r.entailed && !r.trace.is_null()) j["trace"] = r.trace;
        if (r.countermodel) j["countermodel"] = elbow::interp_to_json(*r.countermodel);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << (r.entailed ? "ENTAILED" : "NOT ENTAILED") << "\n";
    }
    return r.entailed ? 0 : 1;
}

int cmd_classify(const std::string& file, bool json, int jobs) {
    elbow::TBox t = load_tbox(file);
    std::set<std::string> name_set = t.concept_names();
    std::vector<std::string> names(name_set.begin(), name_set.end());
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& a : names)
        for (const auto& b : names)
            if (a != b) pairs.push_back({a, b});
    std::vector<char> entailed(pairs.size(), 0);
    elbow::DecideOptions opts;
    opts.build_countermodel = false;
    opts.want_trace = false;
    parallel_for(static_cast<int>(pairs.size()), jobs, [&](int i) {
        entailed[i] = elbow::decide_subsumption(t, elbow::make_name(pairs[i].first),
                                                elbow::make_name(pairs[i].second), opts)
                          .entailed
                          ? 1
                          : 0;
    });
    if (json) {
        nlohmann::json j = nlohmann::json::array();
        for (size_t i = 0; i < pairs.size(); ++i)
            if (entailed[i]) j.push_back({{"lhs", pairs[i].first}, {"rhs", pairs[i].second}});
        std::cout << j.dump(2) << "\n";
    } else {
        for (size_t i = 0; i < pairs.size(); ++i)
            if (entailed[i]) std::cout << pairs[i].first << " <= " << pairs[i].second << "\n";
    }
    return 0;
}

int cmd_normalize(const std::string& file, bool json) {
    elbow::NormalTBox nt = elbow::normalize(load_tbox(file));
    if (json) {
        nlohmann::json j;
        j["tbox"] = elbow::render_tbox(nt.tbox);
        j["fresh"] = nlohmann::json::object();
        for (const auto& [n, c] : nt.fresh_map) j["fresh"][n] = elbow::to_string(c);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << elbow::render_tbox(nt.tbox);
    }
    return 0;
}

int cmd_saturate(const std::string& file, bool interpolative, bool json) {
    elbow::NormalTBox nt = elbow::normalize(load_tbox(file));
    if (interpolative) {
        elbow::InterpolativeResult ir = elbow::interpolative_saturate(nt);
        if (json) {
            nlohmann::json j = nlohmann::json::array();
            for (size_t i = 0; i < ir.facts.size(); ++i) j.push_back(ir.fact_json(static_cast<int>(i)));
            std::cout << j.dump(2) << "\n";
        } else {
            for (size_t i = 0; i < ir.facts.size(); ++i) {
                const auto& f = ir.facts[i];
                std::string lhs = ir.ix.atoms.render(f.lhs[0]);
                for (size_t k = 1; k < f.lhs.size(); ++k) lhs += " & " + ir.ix.atoms.render(f.lhs[k]);
                std::cout << lhs << " <= " << ir.ix.atoms.render(f.rhs) << "   [" << f.rule << "]\n";
            }
        }
        return 0;
    }
    elbow::CompletionState st = elbow::el_complete(nt);
    nlohmann::json arr = nlohmann::json::array();
    for (int a = 0; a < st.src.atoms.size(); ++a)
        for (int c = 0; c < st.src.atoms.size(); ++c) {
            if (!st.has(a, c)) continue;
            std::string line = st.src.atoms.render(a) + " <= " + st.src.atoms.render(c);
            if (json)
                arr.push_back(line);
            else
                std::cout << line << "\n";
        }
    if (json) std::cout << arr.dump(2) << "\n";
    return 0;
}

int cmd_countermodel(const std::string& file, const std::string& lhs, const std::string& rhs,
                     bool json, int max_features, bool enumerate) {
    elbow::TBox t = load_tbox(file);
    elbow::ConceptPtr lc = elbow::parse_concept(lhs), rc = elbow::parse_concept(rhs);
    if (enumerate) {
        elbow::QueryNormalization qn = elbow::normalize_query(t, lc, rc);
        auto m = elbow::enumerate_countermodel(qn.tbox, qn.lhs_name, qn.rhs_name,
                                               std::min(max_features, 3));
        if (!m) {
            std::cout << (json ? "null\n" : "NO COUNTERMODEL FOUND (within bound)\n");
            return 0;
        }
        std::cout << elbow::interp_to_json(*m).dump(2) << "\n";
        return 1;
    }
    elbow::DecideOptions opts;
    opts.max_model_features = max_features;
    elbow::DecideResult r = elbow::decide_subsumption(t, lc, rc, opts);
    if (r.entailed) {
        std::cout << (json ? "null\n" : "ENTAILED (no countermodel exists)\n");
        return 0;
    }
    std::cout << elbow::interp_to_json(*r.countermodel).dump(2) << "\n";
    return 1;
}

int cmd_validate_model(const std::string& model_file, const std::string& tbox_file, bool json) {
    elbow::FeatureInterpretation i = elbow::interp_from_json(load_json(model_file));
    elbow::ValidationReport rep = elbow::validate_interpretation(i);
    if (!tbox_file.empty()) {
        elbow::ValidationReport m = elbow::is_model(i, load_tbox(tbox_file));
        for (auto& v : m.violations) rep.violations.push_back(std::move(v));
    }
    if (json) {
        nlohmann::json j;
        j["ok"] = rep.ok();
        j["violations"] = nlohmann::json::array();
        for (const auto& v : rep.violations)
            j["violations"].push_back({{"condition", v.condition}, {"detail", v.detail}});
        std::cout << j.dump(2) << "\n";
    } else if (rep.ok()) {
        std::cout << "VALID\n";
    } else {
        for (const auto& v : rep.violations)
            std::cout << "VIOLATION [" << v.condition << "] " << v.detail << "\n";
    }
    return rep.ok() ? 0 : 1;
}

int cmd_geo_check(const std::string& model_file, const std::string& lhs, const std::string& rhs,
                  const std::string& cert_file, bool json) {
    elbow::GeometricModel m = elbow::model_from_json(load_json(model_file));
    elbow::CICertificate cert;
    cert.ci = {elbow::parse_concept(lhs), elbow::parse_concept(rhs)};
    if (!cert_file.empty()) {
        nlohmann::json j = load_json(cert_file);
        for (const auto& p : j) cert.lhs_witness_vertices.push_back(elbow::vector_from_json(p, m.dimension));
    } else {
        auto r = elbow::region_of(m, cert.ci.lhs);
        if (!r) throw elbow::GeometryError("LHS is not region-evaluable; provide --cert");
        cert.lhs_witness_vertices = r->vertices;
    }
    elbow::CICheckResult res = elbow::check_ci(m, cert);
    if (json) {
        nlohmann::json j;
        j["ok"] = res.ok;
        if (!res.ok) {
            j["message"] = res.message;
            if (res.violating_point) j["point"] = elbow::vector_to_json(*res.violating_point);
        }
        std::cout << j.dump(2) << "\n";
    } else if (res.ok) {
        std::cout << "OK\n";
    } else {
        std::cout << "VIOLATED: " << res.message << "\n";
    }
    return res.ok ? 0 : 1;
}

int cmd_geo_derive(const std::string& file, const std::string& lhs, const std::string& rhs,
                   bool json) {
    elbow::TBox t = load_tbox(file);
    if (lhs.empty() != rhs.empty())
        throw std::runtime_error("--lhs and --rhs must be given together");
    if (lhs.empty()) {
        elbow::GeoFactBase fb = elbow::saturate_geo(t);
        if (json) {
            nlohmann::json j = nlohmann::json::array();
            for (const auto& [key, tr] : fb.traces)
                j.push_back({{"fact", fb.fact_string(key.first, key.second)}, {"rule", tr.rule}});
            std::cout << j.dump(2) << "\n";
        } else {
            for (const auto& [key, tr] : fb.traces)
                std::cout << fb.fact_string(key.first, key.second) << "   [" << tr.rule << "]\n";
        }
        return 0;
    }
    elbow::GeoEntailment r = elbow::entails_geo_sound(
        t, {elbow::parse_concept(lhs), elbow::parse_concept(rhs)});
    if (json) {
        nlohmann::json j;
        j["derivable"] = r.derivable;
        if (r.derivable) j["trace"] = r.trace;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << (r.derivable ? "DERIVABLE" : "UNKNOWN") << "\n";
    }
    return r.derivable ? 0 : 1;
}

int cmd_from_prop(const std::string& cnf_file, const std::string& conclusion, bool json,
                  bool check) {
    std::vector<elbow::Clause> premises = elbow::clauses_from_dimacs(read_file(cnf_file));
    elbow::Clause concl = clause_from_dimacs_lits(conclusion);
    elbow::PropReduction red = elbow::reduce_entailment(premises, concl);
    std::optional<bool> tt, ds;
    if (check) {
        tt = elbow::truth_table_entails(premises, concl);
        ds = elbow::decide_subsumption(red.tbox, red.query_lhs, red.query_rhs).entailed;
    }
    if (json) {
        nlohmann::json j;
        j["tbox"] = elbow::render_tbox(red.tbox);
        j["query_lhs"] = elbow::to_string(red.query_lhs);
        j["query_rhs"] = elbow::to_string(red.query_rhs);
        if (check) {
            j["truth_table_entails"] = *tt;
            j["subsumption_entailed"] = *ds;
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << elbow::render_tbox(red.tbox);
        std::cout << "# query: " << elbow::to_string(red.query_lhs) << " <= "
                  << elbow::to_string(red.query_rhs) << "\n";
        if (check)
            std::cout << "# truth table: " << (*tt ? "entailed" : "not entailed")
                      << ", subsumption: " << (*ds ? "entailed" : "not entailed") << "\n";
    }
    if (check && *tt != *ds) {
        std::cerr << "oracle disagreement\n";
        return 1;
    }
    return 0;
}

int cmd_from_gcp(const std::string& net_file, const std::string& initial,
                 const std::string& target, bool json, bool emit_model) {
    elbow::GcpNet net = elbow::parse_gcpnet(read_file(net_file));
    elbow::Outcome init = elbow::parse_outcome(net, initial);
    elbow::TBox t = elbow::reduce_to_tbox(net, init);
    nlohmann::json j;
    std::string tbox_text = elbow::render_tbox(t);
    j["tbox"] = tbox_text;
    if (!target.empty()) {
        elbow::ConceptInclusion ci = elbow::target_ci(net, elbow::parse_outcome(net, target));
        j["query_lhs"] = elbow::to_string(ci.lhs);
        j["query_rhs"] = elbow::to_string(ci.rhs);
    }
    if (emit_model) {
        elbow::HardnessModel hm = elbow::build_hardness_model(net, init);
        j["model"] = elbow::model_to_json(hm.model);
    }
    if (json) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << tbox_text;
        if (j.contains("query_lhs"))
            std::cout << "# query: " << j["query_lhs"].get<std::string>() << " <= "
                      << j["query_rhs"].get<std::string>() << "\n";
        if (emit_model) std::cout << j["model"].dump(2) << "\n";
    }
    return 0;
}

int cmd_dominance(const std::string& net_file, const std::string& from, const std::string& to,
                  bool json) {
    elbow::GcpNet net = elbow::parse_gcpnet(read_file(net_file));
    elbow::DominanceResult r =
        elbow::dominates(net, elbow::parse_outcome(net, from), elbow::parse_outcome(net, to));
    if (json) {
        nlohmann::json j;
        j["dominates"] = r.dominates;
        j["flips"] = nlohmann::json::array();
        for (const auto& [rule, w] : r.flips)
            j["flips"].push_back({{"rule", rule}, {"outcome", elbow::outcome_to_string(net, w)}});
        std::cout << j.dump(2) << "\n";
    } else if (r.dominates) {
        std::cout << "DOMINATES (" << r.flips.size() << " flip" << (r.flips.size() == 1 ? "" : "s")
                  << ")\n";
    } else {
        std::cout << "NOT DOMINATED\n";
    }
    return r.dominates ? 0 : 1;
}

elbow::GcpNet random_consistent_net(std::mt19937& rng, int max_atoms, int max_rules) {
    static const char* pool[] = {"a", "b", "c", "d", "e", "f"};
    for (;;) {
        elbow::GcpNet net;
        std::uniform_int_distribution<int> na(1, max_atoms);
        int m = na(rng);
        for (int i = 0; i < m; ++i) net.atoms.push_back(pool[i]);
        std::uniform_int_distribution<int> nr(1, max_rules);
        int k = nr(rng);
        for (int i = 0; i < k; ++i) {
            elbow::GcpRule r;
            std::uniform_int_distribution<int> atom(0, m - 1);
            std::uniform_int_distribution<int> coin(0, 1);
            r.flipped = {atom(rng), coin(rng) == 1};
            std::vector<int> others;
            for (int j = 0; j < m; ++j)
                if (j != r.flipped.atom) others.push_back(j);
            std::shuffle(others.begin(), others.end(), rng);
            std::uniform_int_distribution<int> nc(0, static_cast<int>(others.size()));
            int c = nc(rng);
            for (int j = 0; j < c; ++j) r.condition.push_back({others[j], coin(rng) == 1});
            net.rules.push_back(std::move(r));
        }
        if (elbow::is_consistent(net)) return net;
    }
}

int cmd_gcp_verify(const std::string& net_file, const std::string& initial, int random_count,
                   unsigned seed, int jobs, bool json) {
    struct Case {
        elbow::GcpNet net;
        elbow::Outcome init;
    };
    std::vector<Case> cases;
    if (random_count > 0) {
        std::mt19937 rng(seed);
        for (int i = 0; i < random_count; ++i) {
            elbow::GcpNet net = random_consistent_net(rng, 4, 6);
            std::uniform_int_distribution<int> out(0, (1 << net.atoms.size()) - 1);
            cases.push_back({net, static_cast<elbow::Outcome>(out(rng))});
        }
    } else {
        elbow::GcpNet net = elbow::parse_gcpnet(read_file(net_file));
        cases.push_back({net, elbow::parse_outcome(net, initial)});
    }
    std::atomic<long long> targets{0}, disagreements{0}, cert_failures{0};
    parallel_for(static_cast<int>(cases.size()), jobs, [&](int i) {
        const Case& c = cases[i];
        elbow::HardnessModel hm = elbow::build_hardness_model(c.net, c.init);
        for (const auto& cert : hm.certificates)
            if (!elbow::check_ci(hm.model, cert).ok) ++cert_failures;
        elbow::Outcome n = elbow::Outcome(1) << c.net.atoms.size();
        for (elbow::Outcome w = 0; w < n; ++w) {
            if (w == c.init) continue;
            ++targets;
            elbow::ReductionReport rep = elbow::verify_reduction(c.net, c.init, w);
            if (!rep.agree) ++disagreements;
        }
    });
    bool ok = disagreements == 0 && cert_failures == 0;
    if (json) {
        nlohmann::json j;
        j["nets"] = cases.size();
        j["targets"] = targets.load();
        j["disagreements"] = disagreements.load();
        j["certificate_failures"] = cert_failures.load();
        j["ok"] = ok;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "nets=" << cases.size() << " targets=" << targets.load()
                  << " disagreements=" << disagreements.load()
                  << " certificate_failures=" << cert_failures.load() << " => "
                  << (ok ? "OK" : "FAIL") << "\n";
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reasoner for EL with betweenness: feature and geometric semantics"};
    app.require_subcommand(1);

    std::string file, lhs, rhs, engine, model_file, tbox_file, cert_file, conclusion, initial,
        from, to, target;
    bool json = false, interpolative = false, enumerate = false, check = false,
         emit_model = false;
    int jobs = 1, max_features = 16, random_count = 0;
    unsigned seed = 1;

    auto add_json = [&](CLI::App* c) { c->add_flag("--json", json, "machine-readable output"); };

    auto* c_check = app.add_subcommand("check", "decide subsumption under the feature semantics");
    c_check->add_option("file", file, "TBox file")->required();
    c_check->add_option("--lhs", lhs)->required();
    c_check->add_option("--rhs", rhs)->required();
    c_check->add_option("--engine", engine)->check(CLI::IsMember({"auto", "direct", "encoding"}));
    c_check->add_option("--max-features", max_features);
    add_json(c_check);

    auto* c_classify = app.add_subcommand("classify", "all name-pair subsumptions");
    c_classify->add_option("file", file)->required();
    c_classify->add_option("--jobs", jobs);
    add_json(c_classify);

    auto* c_norm = app.add_subcommand("normalize", "print the normal form");
    c_norm->add_option("file", file)->required();
    add_json(c_norm);

    auto* c_sat = app.add_subcommand("saturate", "print the completion");
    c_sat->add_option("file", file)->required();
    c_sat->add_flag("--interpolative", interpolative, "use the traced interpolative rules");
    add_json(c_sat);

    auto* c_cm = app.add_subcommand("countermodel", "emit a countermodel when not entailed");
    c_cm->add_option("file", file)->required();
    c_cm->add_option("--lhs", lhs)->required();
    c_cm->add_option("--rhs", rhs)->required();
    c_cm->add_option("--max-features", max_features);
    c_cm->add_flag("--enumerate", enumerate, "brute-force enumerator instead of canonical model");
    add_json(c_cm);

    auto* c_vm = app.add_subcommand("validate-model", "validate a feature interpretation");
    c_vm->add_option("model", model_file)->required();
    c_vm->add_option("--tbox", tbox_file, "also check modelhood for this TBox");
    add_json(c_vm);

    auto* c_gc = app.add_subcommand("geo-check", "check a CI against a geometric model");
    c_gc->add_option("model", model_file)->required();
    c_gc->add_option("--lhs", lhs)->required();
    c_gc->add_option("--rhs", rhs)->required();
    c_gc->add_option("--cert", cert_file, "JSON array of witness vertices");
    add_json(c_gc);

    auto* c_gd = app.add_subcommand("geo-derive", "sound geometric derivation");
    c_gd->add_option("file", file)->required();
    c_gd->add_option("--lhs", lhs);
    c_gd->add_option("--rhs", rhs);
    add_json(c_gd);

    auto* c_fp = app.add_subcommand("from-prop", "reduce clause entailment to subsumption");
    c_fp->add_option("cnf", file, "premises in DIMACS CNF")->required();
    c_fp->add_option("--conclusion", conclusion, "conclusion clause as DIMACS literals")
        ->required();
    c_fp->add_flag("--check", check, "run both oracles and compare");
    add_json(c_fp);

    auto* c_fg = app.add_subcommand("from-gcp", "reduce a GCP-net to a TBox");
    c_fg->add_option("net", file)->required();
    c_fg->add_option("--initial", initial)->required();
    c_fg->add_option("--target", target, "also print the target CI");
    c_fg->add_flag("--model", emit_model, "also emit the geometric hardness model");
    add_json(c_fg);

    auto* c_dom = app.add_subcommand("dominance", "GCP-net dominance by improving flips");
    c_dom->add_option("net", file)->required();
    c_dom->add_option("--from", from)->required();
    c_dom->add_option("--to", to)->required();
    add_json(c_dom);

    auto* c_gv = app.add_subcommand("gcp-verify", "verify the reduction equivalence");
    c_gv->add_option("net", file, "net file (omit with --random)");
    c_gv->add_option("--initial", initial);
    c_gv->add_option("--random", random_count, "verify N random consistent nets instead");
    c_gv->add_option("--seed", seed);
    c_gv->add_option("--jobs", jobs);
    add_json(c_gv);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (c_check->parsed()) return cmd_check(file, lhs, rhs, json, engine, max_features);
        if (c_classify->parsed()) return cmd_classify(file, json, jobs);
        if (c_norm->parsed()) return cmd_normalize(file, json);
        if (c_sat->parsed()) return cmd_saturate(file, interpolative, json);
        if (c_cm->parsed()) return cmd_countermodel(file, lhs, rhs, json, max_features, enumerate);
        if (c_vm->parsed()) return cmd_validate_model(model_file, tbox_file, json);
        if (c_gc->parsed()) return cmd_geo_check(model_file, lhs, rhs, cert_file, json);
        if (c_gd->parsed()) return cmd_geo_derive(file, lhs, rhs, json);
        if (c_fp->parsed()) return cmd_from_prop(file, conclusion, json, check);
        if (c_fg->parsed()) return cmd_from_gcp(file, initial, target, json, emit_model);
        if (c_dom->parsed()) return cmd_dominance(file, from, to, json);
        if (c_gv->parsed()) {
            if (random_count <= 0 && (file.empty() || initial.empty()))
                throw std::runtime_error("gcp-verify needs a net file and --initial, or --random");
            return cmd_gcp_verify(file, initial, random_count, seed, jobs, json);
        }
    } catch (const elbow::BoundExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const elbow::GcpError& e) {
        std::string msg = e.what();
        std::cerr << "error: " << msg << "\n";
        return msg.find("exceeds the supported bound") != std::string::npos ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
