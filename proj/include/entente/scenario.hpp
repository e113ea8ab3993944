#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "entente/entailment.hpp"
#include "entente/errors.hpp"
#include "entente/fuzzy.hpp"
#include "entente/mediation.hpp"

namespace entente {

/// Where a run writes its results. All paths optional.
struct OutputPaths {
    std::optional<std::filesystem::path> table;
    std::optional<std::filesystem::path> structured;
    std::optional<std::filesystem::path> trace_dir;
};

/// A fully loaded scenario: everything run_mediation needs.
struct Scenario {
    Ontology ontology;
    Corpus corpus1;
    Corpus corpus2;
    std::shared_ptr<const Oracle> oracle;
    std::shared_ptr<const FuzzyKnowledgeBase> fkb;
    ProtocolConfig protocol;
    OutputPaths outputs;
    long long seed = 0;
};

namespace detail {

inline std::string slurp(const std::filesystem::path& path, const char* what) {
    std::ifstream in(path);
    if (!in.good())
        throw ConfigError(std::string("cannot open ") + what + " file: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace detail

/// Loads a scenario config (JSON). Relative paths resolve against the
/// config file's directory.
///
///   {
///     "ontology": "ontology.ont",
///     "corpora": {"a1": "corpus_a1.tsv", "a2": "corpus_a2.tsv"},
///     "oracle": {"mode": "recorded", "script": "oracle.tsv"},
///     "fuzzy": "fuzzy.fkb",
///     "protocol": {"max_share_fraction": 0.25, ...},
///     "lexicon": {"stopwords": "...", "negation_cues": "..."},
///     "output": {"table": "...", "structured": "...", "trace_dir": "..."},
///     "seed": 0
///   }
inline Scenario load_scenario(const std::filesystem::path& config_path) {
    nlohmann::json j;
    {
        std::ifstream in(config_path);
        if (!in.good()) throw ConfigError("cannot open scenario config: " + config_path.string());
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("malformed scenario config " + config_path.string() + ": " + e.what());
        }
    }
    const auto base = std::filesystem::absolute(config_path).parent_path();
    auto resolve = [&](const std::string& p) {
        std::filesystem::path path(p);
        return path.is_absolute() ? path : base / path;
    };

    try {
        Scenario sc;

        {
            auto path = resolve(j.at("ontology").get<std::string>());
            std::istringstream in(detail::slurp(path, "ontology"));
            try {
                sc.ontology = parse_ontology(in, path.filename().string());
            } catch (const ParseError& e) {
                throw ConfigError("in " + path.string() + ": " + e.what());
            }
        }

        const auto& corpora = j.at("corpora");
        if (!corpora.is_object() || corpora.size() != 2)
            throw ConfigError("scenario needs exactly two corpora");
        std::vector<std::pair<std::string, std::string>> corpus_entries;
        for (const auto& [agent, path] : corpora.items())
            corpus_entries.emplace_back(agent, path.get<std::string>());
        // json objects iterate in key order; keep that order as (a1, a2)
        for (std::size_t i = 0; i < 2; ++i) {
            auto path = resolve(corpus_entries[i].second);
            std::istringstream in(detail::slurp(path, "corpus"));
            Corpus c;
            try {
                c = ingest_corpus(in, corpus_entries[i].first);
            } catch (const ParseError& e) {
                throw ConfigError("in " + path.string() + ": " + e.what());
            }
            (i == 0 ? sc.corpus1 : sc.corpus2) = std::move(c);
        }

        Lexicon lexicon = Lexicon::builtin();
        if (j.contains("lexicon")) {
            auto stop_path = resolve(j.at("lexicon").at("stopwords").get<std::string>());
            auto cue_path = resolve(j.at("lexicon").at("negation_cues").get<std::string>());
            std::istringstream stop(detail::slurp(stop_path, "stopwords"));
            std::istringstream cues(detail::slurp(cue_path, "negation cues"));
            lexicon = Lexicon::load(stop, cues);
        }

        const auto& oracle = j.at("oracle");
        std::string mode = oracle.at("mode").get<std::string>();
        if (mode == "recorded") {
            auto path = resolve(oracle.at("script").get<std::string>());
            std::istringstream in(detail::slurp(path, "oracle script"));
            try {
                sc.oracle = std::make_shared<RecordedOracle>(parse_oracle_script(in));
            } catch (const ParseError& e) {
                throw ConfigError("in " + path.string() + ": " + e.what());
            }
        } else if (mode == "lexical") {
            sc.oracle = std::make_shared<LexicalOracle>(lexicon);
        } else {
            throw ConfigError("unknown oracle mode '" + mode + "'");
        }

        if (j.contains("fuzzy")) {
            auto path = resolve(j.at("fuzzy").get<std::string>());
            try {
                sc.fkb = std::make_shared<FuzzyKnowledgeBase>(
                    parse_fuzzy_config(detail::slurp(path, "fuzzy config")));
            } catch (const ParseError& e) {
                throw ConfigError("in " + path.string() + ": " + e.what());
            }
        } else {
            sc.fkb = std::make_shared<FuzzyKnowledgeBase>(default_fuzzy_knowledge_base());
        }

        if (j.contains("protocol")) {
            const auto& p = j.at("protocol");
            if (p.contains("max_share_fraction"))
                sc.protocol.max_share_fraction = p.at("max_share_fraction").get<double>();
            if (p.contains("pc_round_share_count"))
                sc.protocol.pc_round_share_count = p.at("pc_round_share_count").get<std::size_t>();
            if (p.contains("pa_share_count"))
                sc.protocol.pa_share_count = p.at("pa_share_count").get<std::size_t>();
            if (p.contains("cost_per_sample"))
                sc.protocol.cost_per_sample = p.at("cost_per_sample").get<double>();
            if (p.contains("cost_per_locution"))
                sc.protocol.cost_per_locution = p.at("cost_per_locution").get<double>();
        }
        sc.protocol.lexicon = lexicon;

        if (j.contains("output")) {
            const auto& o = j.at("output");
            if (o.contains("table")) sc.outputs.table = resolve(o.at("table").get<std::string>());
            if (o.contains("structured"))
                sc.outputs.structured = resolve(o.at("structured").get<std::string>());
            if (o.contains("trace_dir"))
                sc.outputs.trace_dir = resolve(o.at("trace_dir").get<std::string>());
        }
        if (j.contains("seed")) sc.seed = j.at("seed").get<long long>();
        return sc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed scenario config " + config_path.string() + ": " + e.what());
    }
}

inline MediationResult run_scenario(const Scenario& sc) {
    return run_mediation(sc.ontology, sc.corpus1, sc.corpus2, sc.oracle, *sc.fkb, sc.protocol,
                         sc.seed);
}

} // namespace entente
