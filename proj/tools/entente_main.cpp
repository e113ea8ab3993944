// entente - mediates divergent entailment opinions between two agents over
// ontology-derived hypotheses.
//
// Subcommands:
//   run <config>                 run a scenario and write its reports
//   verify <config> <expected>   re-run and diff against an expected report
//   hypotheses <ontology>        verbalize an ontology file
//   assess <l> <c> <l> <c>       fuzzy-assess one pair of decisions

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "entente/report_io.hpp"
#include "entente/scenario.hpp"

namespace fs = std::filesystem;
using namespace entente;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitMismatch = 3;

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out.good()) throw Error("cannot write " + path.string());
    out << content;
}

void write_outputs(const Scenario& sc, const MediationResult& result) {
    if (sc.outputs.table) write_file(*sc.outputs.table, render_table(result.report));
    if (sc.outputs.structured) write_file(*sc.outputs.structured, render_structured(result.report));
    if (sc.outputs.trace_dir) {
        for (const auto& run : result.runs) {
            write_file(*sc.outputs.trace_dir / (run.hypothesis_id + ".trace.txt"),
                       render_trace_text(run));
            write_file(*sc.outputs.trace_dir / (run.hypothesis_id + ".trace.json"),
                       trace_to_json(run).dump(2) + "\n");
        }
    }
}

void print_warnings(const std::vector<VerbalizationWarning>& warnings) {
    for (const auto& w : warnings)
        std::cerr << "warning: axiom " << w.axiom_index + 1 << " skipped: " << w.reason << "\n";
}

int cmd_run(const std::string& config_path, const std::string& format, bool dry_run,
            std::optional<long long> seed_override) {
    Scenario sc = load_scenario(config_path);
    if (seed_override) sc.seed = *seed_override;

    if (dry_run) {
        HypothesisSet hs = generate_hypotheses(sc.ontology);
        print_warnings(hs.warnings);
        for (const auto& h : hs.hypotheses) std::cout << h.id << "\t" << h.text << "\n";
        return kExitOk;
    }

    MediationResult result = run_scenario(sc);
    print_warnings(result.warnings);
    write_outputs(sc, result);
    if (format == "structured")
        std::cout << render_structured(result.report);
    else
        std::cout << render_table(result.report);
    return kExitOk;
}

int cmd_verify(const std::string& config_path, const std::string& expected_path) {
    Scenario sc = load_scenario(config_path);

    std::ifstream in(expected_path);
    if (!in.good()) throw ConfigError("cannot open expected report: " + expected_path);
    std::stringstream buf;
    buf << in.rdbuf();

    MediationReport expected;
    try {
        expected = parse_structured(buf.str());
    } catch (const std::exception& e) {
        std::cerr << "error: expected report is not a valid structured report: " << e.what()
                  << "\n";
        return kExitMismatch;
    }

    MediationResult result = run_scenario(sc);
    auto diffs = diff_reports(expected, result.report);
    if (diffs.empty()) {
        std::cout << "report matches (" << result.report.rows.size() << " rows)\n";
        return kExitOk;
    }
    for (const auto& d : diffs) std::cerr << d << "\n";
    return kExitMismatch;
}

int cmd_hypotheses(const std::string& ontology_path) {
    std::ifstream in(ontology_path);
    if (!in.good()) throw ConfigError("cannot open ontology: " + ontology_path);
    Ontology onto;
    try {
        onto = parse_ontology(in, fs::path(ontology_path).filename().string());
    } catch (const ParseError& e) {
        throw ConfigError("in " + ontology_path + ": " + e.what());
    }
    HypothesisSet hs = generate_hypotheses(onto);
    print_warnings(hs.warnings);
    for (const auto& h : hs.hypotheses) std::cout << h.id << "\t" << h.text << "\n";
    return kExitOk;
}

int cmd_assess(const std::string& l1, double c1, const std::string& l2, double c2,
               const std::string& fuzzy_path) {
    std::shared_ptr<const FuzzyKnowledgeBase> fkb;
    if (!fuzzy_path.empty()) {
        std::ifstream in(fuzzy_path);
        if (!in.good()) throw ConfigError("cannot open fuzzy config: " + fuzzy_path);
        fkb = std::make_shared<FuzzyKnowledgeBase>(parse_fuzzy_config(in));
    } else {
        fkb = std::make_shared<FuzzyKnowledgeBase>(default_fuzzy_knowledge_base());
    }
    EntailmentDecision d1{parse_label(l1), c1};
    EntailmentDecision d2{parse_label(l2), c2};
    if (c1 < 0 || c1 > 1 || c2 < 0 || c2 > 1) throw ConfigError("confidences must lie in [0,1]");

    auto f1 = fuzzify(fkb->input(), c1);
    auto f2 = fuzzify(fkb->input(), c2);
    InferenceResult r = fkb->infer(d1, d2);
    std::cout << to_string(d1.label) << " " << detail::fixed(c1) << " fuzzifies to "
              << to_string(f1.term) << " (" << detail::fixed(f1.degree) << ")\n";
    std::cout << to_string(d2.label) << " " << detail::fixed(c2) << " fuzzifies to "
              << to_string(f2.term) << " (" << detail::fixed(f2.degree) << ")\n";
    std::cout << "assessment: " << to_display(r.assessment) << ", degree "
              << detail::fixed(r.assessment.degree) << "\n";
    std::cout << "fired:";
    for (const auto& f : r.fired) std::cout << " " << f.name << "(" << detail::fixed(f.strength) << ")";
    std::cout << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mediates divergent entailment opinions between two agents"};
    app.require_subcommand(1);

    std::string config_path, expected_path, ontology_path, fuzzy_path, format = "table";
    bool dry_run = false;
    long long seed = 0;
    bool seed_set = false;
    std::string label1, label2;
    double conf1 = 0, conf2 = 0;

    auto* run = app.add_subcommand("run", "run a scenario and write its reports");
    run->add_option("config", config_path, "scenario config (JSON)")->required();
    run->add_option("--format", format, "stdout format")
        ->check(CLI::IsMember({"table", "structured"}));
    run->add_flag("--dry-run", dry_run, "validate and print the hypothesis list only");
    run->add_option("--seed", seed, "override the scenario seed")->each([&](const std::string&) {
        seed_set = true;
    });

    auto* verify = app.add_subcommand("verify", "re-run a scenario and diff against a report");
    verify->add_option("config", config_path, "scenario config (JSON)")->required();
    verify->add_option("expected", expected_path, "expected structured report")->required();

    auto* hypotheses = app.add_subcommand("hypotheses", "verbalize an ontology file");
    hypotheses->add_option("ontology", ontology_path, "ontology file")->required();

    auto* assess = app.add_subcommand("assess", "fuzzy-assess one pair of decisions");
    assess->add_option("label1", label1, "ENT|CONTR|UNK")->required();
    assess->add_option("conf1", conf1, "confidence in [0,1]")->required();
    assess->add_option("label2", label2, "ENT|CONTR|UNK")->required();
    assess->add_option("conf2", conf2, "confidence in [0,1]")->required();
    assess->add_option("--fuzzy", fuzzy_path, "fuzzy config file (default: built-in)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(config_path, format,
                           dry_run, seed_set ? std::optional<long long>(seed) : std::nullopt);
        if (verify->parsed()) return cmd_verify(config_path, expected_path);
        if (hypotheses->parsed()) return cmd_hypotheses(ontology_path);
        if (assess->parsed()) return cmd_assess(label1, conf1, label2, conf2, fuzzy_path);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitConfig;
}
