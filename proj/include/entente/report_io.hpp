#pragma once

#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "entente/mediation.hpp"

namespace entente {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// JSON <-> report
// ---------------------------------------------------------------------------

namespace detail {

inline json decision_to_json(const EntailmentDecision& d) {
    return json{{"label", to_string(d.label)}, {"confidence", d.confidence}};
}

inline EntailmentDecision decision_from_json(const json& j) {
    return {parse_label(j.at("label").get<std::string>()), j.at("confidence").get<double>()};
}

inline json assessment_to_json(const SituationAssessment& s) {
    return json{{"kind", to_string(s.kind)}, {"term", to_string(s.term)}, {"degree", s.degree}};
}

inline SituationAssessment assessment_from_json(const json& j) {
    return {parse_kind(j.at("kind").get<std::string>()),
            parse_term(j.at("term").get<std::string>()), j.at("degree").get<double>()};
}

inline std::string rational_to_string(const Rational& r) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline Rational rational_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) throw Error("malformed rational '" + s + "'");
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

inline json metrics_to_json(const Metrics& m) {
    return json{{"agr", rational_to_string(m.agr)},
                {"dis", rational_to_string(m.dis)},
                {"con", rational_to_string(m.con)}};
}

inline Metrics metrics_from_json(const json& j) {
    return {rational_from_string(j.at("agr").get<std::string>()),
            rational_from_string(j.at("dis").get<std::string>()),
            rational_from_string(j.at("con").get<std::string>())};
}

} // namespace detail

inline json report_to_json(const MediationReport& report) {
    json rows = json::array();
    for (const auto& r : report.rows) {
        json declarations = json::object();
        for (const auto& [agent, outcome] : r.declarations) declarations[agent] = to_string(outcome);
        rows.push_back(json{{"id", r.id},
                            {"text", r.text},
                            {"initial_decisions", json::array({detail::decision_to_json(r.initial_d1),
                                                               detail::decision_to_json(r.initial_d2)})},
                            {"initial", detail::assessment_to_json(r.initial)},
                            {"protocol", to_string(r.protocol)},
                            {"final_decisions", json::array({detail::decision_to_json(r.final_d1),
                                                             detail::decision_to_json(r.final_d2)})},
                            {"final", detail::assessment_to_json(r.final_state)},
                            {"declarations", declarations},
                            {"costs", json{{"samples_shared", r.costs.samples_shared},
                                           {"locutions_sent", r.costs.locutions_sent},
                                           {"benefit", r.costs.benefit},
                                           {"cost", r.costs.cost},
                                           {"worthwhile", r.costs.worthwhile}}}});
    }
    json out{{"agents", report.agents},
             {"seed", report.seed},
             {"rows", rows},
             {"ledger", json{{"samples_shared", report.ledger.samples_shared},
                             {"locutions_sent", report.ledger.locutions_sent},
                             {"benefit", report.ledger.benefit},
                             {"cost", report.ledger.cost}}}};
    out["metrics_before"] =
        report.metrics_before ? detail::metrics_to_json(*report.metrics_before) : json(nullptr);
    out["metrics_after"] =
        report.metrics_after ? detail::metrics_to_json(*report.metrics_after) : json(nullptr);
    return out;
}

inline MediationReport report_from_json(const json& j) {
    MediationReport report;
    report.agents = j.at("agents").get<std::vector<std::string>>();
    report.seed = j.at("seed").get<long long>();
    for (const auto& rj : j.at("rows")) {
        ReportRow r;
        r.id = rj.at("id").get<std::string>();
        r.text = rj.at("text").get<std::string>();
        r.initial_d1 = detail::decision_from_json(rj.at("initial_decisions").at(0));
        r.initial_d2 = detail::decision_from_json(rj.at("initial_decisions").at(1));
        r.initial = detail::assessment_from_json(rj.at("initial"));
        r.protocol = parse_protocol(rj.at("protocol").get<std::string>());
        r.final_d1 = detail::decision_from_json(rj.at("final_decisions").at(0));
        r.final_d2 = detail::decision_from_json(rj.at("final_decisions").at(1));
        r.final_state = detail::assessment_from_json(rj.at("final"));
        for (const auto& [agent, outcome] : rj.at("declarations").items())
            r.declarations[agent] = parse_outcome(outcome.get<std::string>());
        const auto& cj = rj.at("costs");
        r.costs.samples_shared = cj.at("samples_shared").get<std::size_t>();
        r.costs.locutions_sent = cj.at("locutions_sent").get<std::size_t>();
        r.costs.benefit = cj.at("benefit").get<double>();
        r.costs.cost = cj.at("cost").get<double>();
        r.costs.worthwhile = cj.at("worthwhile").get<bool>();
        report.rows.push_back(std::move(r));
    }
    if (!j.at("metrics_before").is_null())
        report.metrics_before = detail::metrics_from_json(j.at("metrics_before"));
    if (!j.at("metrics_after").is_null())
        report.metrics_after = detail::metrics_from_json(j.at("metrics_after"));
    const auto& lj = j.at("ledger");
    report.ledger.samples_shared = lj.at("samples_shared").get<std::size_t>();
    report.ledger.locutions_sent = lj.at("locutions_sent").get<std::size_t>();
    report.ledger.benefit = lj.at("benefit").get<double>();
    report.ledger.cost = lj.at("cost").get<double>();
    return report;
}

inline std::string render_structured(const MediationReport& report) {
    return report_to_json(report).dump(2) + "\n";
}

inline MediationReport parse_structured(const std::string& text) {
    return report_from_json(json::parse(text));
}

// ---------------------------------------------------------------------------
// Field-level diff (for the verify command)
// ---------------------------------------------------------------------------

namespace detail {

inline void diff_json(const json& expected, const json& actual, const std::string& path,
                      std::vector<std::string>& out) {
    if (expected == actual) return;
    if (expected.type() != actual.type() || (!expected.is_object() && !expected.is_array())) {
        out.push_back(path + ": expected " + expected.dump() + ", got " + actual.dump());
        return;
    }
    if (expected.is_object()) {
        for (const auto& [key, val] : expected.items()) {
            if (!actual.contains(key))
                out.push_back(path + "." + key + ": missing in actual");
            else
                diff_json(val, actual.at(key), path + "." + key, out);
        }
        for (const auto& [key, val] : actual.items())
            if (!expected.contains(key)) out.push_back(path + "." + key + ": unexpected field");
        return;
    }
    // arrays
    std::size_t n = std::min(expected.size(), actual.size());
    for (std::size_t i = 0; i < n; ++i) {
        std::string sub = path + "[" + std::to_string(i) + "]";
        if (expected[i].is_object() && expected[i].contains("id"))
            sub = path + "[" + expected[i]["id"].get<std::string>() + "]";
        diff_json(expected[i], actual[i], sub, out);
    }
    if (expected.size() != actual.size())
        out.push_back(path + ": size " + std::to_string(expected.size()) + " vs " +
                      std::to_string(actual.size()));
}

} // namespace detail

/// Structural comparison; returns one line per differing field.
inline std::vector<std::string> diff_reports(const MediationReport& expected,
                                             const MediationReport& actual) {
    std::vector<std::string> out;
    detail::diff_json(report_to_json(expected), report_to_json(actual), "report", out);
    return out;
}

// ---------------------------------------------------------------------------
// Human-readable table
// ---------------------------------------------------------------------------

namespace detail {

inline std::string fixed(double v, int prec = 2) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(prec) << v;
    return os.str();
}

inline std::string decision_cell(const EntailmentDecision& d) {
    return std::string(to_string(d.label)) + " " + fixed(d.confidence);
}

inline std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s += std::string(width - s.size(), ' ');
    return s;
}

inline std::string metrics_line(const char* title, const Metrics& m) {
    std::ostringstream os;
    os << title << "  agr = " << rational_to_string(m.agr) << "  dis = "
       << rational_to_string(m.dis) << "  con = " << rational_to_string(m.con);
    return os.str();
}

} // namespace detail

/// Renders the per-hypothesis table plus metric and ledger summaries.
inline std::string render_table(const MediationReport& report) {
    using detail::pad;
    std::ostringstream os;
    const std::string a1 = report.agents.size() > 0 ? report.agents[0] : "a1";
    const std::string a2 = report.agents.size() > 1 ? report.agents[1] : "a2";

    std::vector<std::array<std::string, 7>> cells;
    cells.push_back({"hyp", a1, a2, "initial state", "protocol", "final state", "declarations"});
    for (const auto& r : report.rows) {
        std::string decl = "-";
        if (!r.declarations.empty()) {
            std::vector<std::string> parts;
            for (const auto& [agent, outcome] : r.declarations)
                parts.push_back(agent + "=" + to_string(outcome));
            decl = detail::join(parts, " ");
        }
        cells.push_back({r.id, detail::decision_cell(r.initial_d1),
                         detail::decision_cell(r.initial_d2), to_display(r.initial),
                         to_string(r.protocol), to_display(r.final_state), decl});
    }
    std::array<std::size_t, 7> width{};
    for (const auto& row : cells)
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    for (const auto& row : cells) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << pad(row[i], width[i]);
            if (i + 1 < row.size()) os << "  ";
        }
        os << "\n";
    }

    os << "\n";
    if (report.metrics_before && report.metrics_after) {
        os << detail::metrics_line("before:", *report.metrics_before) << "\n";
        os << detail::metrics_line("after: ", *report.metrics_after) << "\n";
    } else {
        os << "metrics: n/a (no hypotheses)\n";
    }
    os << "ledger: " << report.ledger.samples_shared << " samples, "
       << report.ledger.locutions_sent << " locutions, cost " << detail::fixed(report.ledger.cost)
       << ", benefit " << detail::fixed(report.ledger.benefit) << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Dialog traces
// ---------------------------------------------------------------------------

/// Line format: seq | from | to | locution | payload
inline std::string render_trace_text(const ProtocolRun& run) {
    std::ostringstream os;
    for (const auto& m : run.trace)
        os << m.seq << " | " << m.from << " | " << m.to << " | " << locution_name(m.locution)
           << " | " << locution_payload(m.locution) << "\n";
    return os.str();
}

inline json trace_to_json(const ProtocolRun& run) {
    json messages = json::array();
    for (const auto& m : run.trace)
        messages.push_back(json{{"seq", m.seq},
                                {"from", m.from},
                                {"to", m.to},
                                {"locution", locution_name(m.locution)},
                                {"payload", locution_payload(m.locution)}});
    json shares = json::array();
    for (const auto& s : run.shares)
        shares.push_back(json{{"round", s.round}, {"sender", s.sender}, {"count", s.count}});
    auto rules = [](const std::vector<FiredRule>& fired) {
        json arr = json::array();
        for (const auto& f : fired)
            arr.push_back(json{{"rule", f.name},
                               {"strength", f.strength},
                               {"consequent", to_string(f.consequent)}});
        return arr;
    };
    json declarations = json::object();
    for (const auto& [agent, outcome] : run.declarations) declarations[agent] = to_string(outcome);
    return json{{"hypothesis", run.hypothesis_id},
                {"protocol", to_string(run.protocol)},
                {"initial", detail::assessment_to_json(run.initial)},
                {"initial_rules", rules(run.initial_rules)},
                {"final", detail::assessment_to_json(run.final_state)},
                {"final_rules", rules(run.final_rules)},
                {"messages", messages},
                {"shares", shares},
                {"declarations", declarations}};
}

} // namespace entente
