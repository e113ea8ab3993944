#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "entente/entailment.hpp"
#include "entente/errors.hpp"
#include "entente/fuzzy.hpp"
#include "entente/ontology.hpp"
#include "entente/protocol.hpp"

namespace entente {

using Rational = boost::rational<long long>;

// ---------------------------------------------------------------------------
// Partition and metrics
// ---------------------------------------------------------------------------

/// The hypothesis set split by the agents' pairwise relation.
struct PartitionSets {
    std::set<std::string> agreeing;
    std::set<std::string> disagreeing;
    std::set<std::string> conflicting;

    void insert(const std::string& id, RelationKind kind) {
        switch (kind) {
        case RelationKind::agreement: agreeing.insert(id); break;
        case RelationKind::disagreement: disagreeing.insert(id); break;
        case RelationKind::conflict: conflicting.insert(id); break;
        }
    }
    std::size_t total() const {
        return agreeing.size() + disagreeing.size() + conflicting.size();
    }
    bool operator==(const PartitionSets&) const = default;
};

/// Cardinality-based similarity metrics; kept as exact rationals so the
/// three always sum to one.
struct Metrics {
    Rational agr{0};
    Rational dis{0};
    Rational con{0};

    bool operator==(const Metrics&) const = default;
};

inline Metrics compute_metrics(const PartitionSets& partition, std::size_t total) {
    if (total == 0) throw Error("metrics are undefined for an empty hypothesis set");
    auto n = static_cast<long long>(total);
    return Metrics{Rational(static_cast<long long>(partition.agreeing.size()), n),
                   Rational(static_cast<long long>(partition.disagreeing.size()), n),
                   Rational(static_cast<long long>(partition.conflicting.size()), n)};
}

// ---------------------------------------------------------------------------
// Cost-benefit
// ---------------------------------------------------------------------------

/// Ordinal position of a situation on the nine-step ladder from strong
/// conflict (0) up to strong agreement (8). Within the adverse kinds a
/// weaker grade is the better one.
inline int level_index(const SituationAssessment& s) {
    int strength = static_cast<int>(s.term); // weak 0, medium 1, strong 2
    switch (s.kind) {
    case RelationKind::conflict: return 2 - strength;
    case RelationKind::disagreement: return 3 + (2 - strength);
    case RelationKind::agreement: return 6 + strength;
    }
    throw Error("unreachable");
}

/// Per-dialog accounting: what was exchanged and what it bought.
struct CostBenefit {
    std::size_t samples_shared = 0;
    std::size_t locutions_sent = 0;
    double benefit = 0.0;
    double cost = 0.0;
    bool worthwhile = false;

    bool operator==(const CostBenefit&) const = default;
};

/// Aggregate ledger over a whole mediation.
struct CostLedger {
    std::size_t samples_shared = 0;
    std::size_t locutions_sent = 0;
    double benefit = 0.0;
    double cost = 0.0;

    void add(const CostBenefit& cb) {
        samples_shared += cb.samples_shared;
        locutions_sent += cb.locutions_sent;
        benefit += cb.benefit;
        cost += cb.cost;
    }
    bool operator==(const CostLedger&) const = default;
};

inline CostBenefit cost_benefit(const ProtocolRun& run, const ProtocolConfig& config) {
    CostBenefit cb;
    cb.samples_shared = run.samples_shared();
    cb.locutions_sent = run.trace.size();
    cb.benefit = static_cast<double>(level_index(run.final_state) - level_index(run.initial));
    cb.cost = static_cast<double>(cb.samples_shared) * config.cost_per_sample +
              static_cast<double>(cb.locutions_sent) * config.cost_per_locution;
    cb.worthwhile = cb.benefit > cb.cost;
    return cb;
}

// ---------------------------------------------------------------------------
// Mediation report
// ---------------------------------------------------------------------------

struct ReportRow {
    std::string id;
    std::string text;
    EntailmentDecision initial_d1;
    EntailmentDecision initial_d2;
    SituationAssessment initial;
    ProtocolId protocol = ProtocolId::pa;
    EntailmentDecision final_d1;
    EntailmentDecision final_d2;
    SituationAssessment final_state;
    std::map<std::string, Outcome> declarations;
    CostBenefit costs;

    bool operator==(const ReportRow&) const = default;
};

struct MediationReport {
    std::vector<std::string> agents; // the two agent ids, in configured order
    std::vector<ReportRow> rows;
    std::optional<Metrics> metrics_before;
    std::optional<Metrics> metrics_after;
    CostLedger ledger;
    long long seed = 0;

    bool operator==(const MediationReport&) const = default;
};

/// Everything a mediation produced: the report plus the full dialog records
/// (the latter feed the trace files, not the report).
struct MediationResult {
    MediationReport report;
    std::vector<ProtocolRun> runs;
    std::vector<VerbalizationWarning> warnings;
};

// ---------------------------------------------------------------------------
// Orchestration
// ---------------------------------------------------------------------------

/// Runs the whole harmonization loop: verbalize, decide, assess, partition,
/// mediate, recompute. Each hypothesis is mediated independently, starting
/// from the agents' initial corpora.
inline MediationResult run_mediation(const Ontology& ontology,
                                     const Corpus& corpus1, const Corpus& corpus2,
                                     std::shared_ptr<const Oracle> oracle,
                                     const FuzzyKnowledgeBase& fkb,
                                     const ProtocolConfig& config,
                                     long long seed = 0) {
    MediationResult result;
    result.report.seed = seed;

    HypothesisSet hset = generate_hypotheses(ontology);
    result.warnings = hset.warnings;
    result.report.agents = {corpus1.owner, corpus2.owner};

    PartitionSets before, after;
    for (const auto& h : hset.hypotheses) {
        try {
            AgentState a1{corpus1.owner, corpus1, oracle};
            AgentState a2{corpus2.owner, corpus2, oracle};
            a1.evaluate(h);
            a2.evaluate(h);

            InferenceResult initial = fkb.infer(a1.decision(h), a2.decision(h));
            // both agents reason over the same knowledge base: evaluating the
            // situation from either side must agree
            InferenceResult mirrored = fkb.infer(a2.decision(h), a1.decision(h));
            if (!(mirrored.assessment == initial.assessment))
                throw Error("situation assessment is not agent-symmetric");

            before.insert(h.id, initial.assessment.kind);

            ReportRow row;
            row.id = h.id;
            row.text = h.text;
            row.initial_d1 = a1.decision(h);
            row.initial_d2 = a2.decision(h);
            row.initial = initial.assessment;
            row.protocol = select_protocol(initial.assessment);

            ProtocolRun run;
            switch (row.protocol) {
            case ProtocolId::pa:
                run = run_pa(a1, a2, h, initial, fkb, config);
                break;
            case ProtocolId::pd: {
                bool first_committed = a1.decision(h).label != EntailmentLabel::unknown;
                bool second_committed = a2.decision(h).label != EntailmentLabel::unknown;
                AgentState* provider = &a1;
                AgentState* receiver = &a2;
                if (first_committed && second_committed) {
                    // cannot happen for a disagreement, but the tie-break is
                    // fixed: the more confident agent provides
                    if (a2.decision(h).confidence > a1.decision(h).confidence)
                        std::swap(provider, receiver);
                } else if (!first_committed) {
                    std::swap(provider, receiver);
                }
                run = run_pd(*provider, *receiver, h, initial, fkb, config);
                break;
            }
            case ProtocolId::pc:
                run = run_pc(a1, a2, h, initial, fkb, config);
                break;
            }

            after.insert(h.id, classify_relation(a1.decision(h).label, a2.decision(h).label));

            row.final_d1 = a1.decision(h);
            row.final_d2 = a2.decision(h);
            row.final_state = run.final_state;
            row.declarations = run.declarations;
            row.costs = cost_benefit(run, config);
            result.report.ledger.add(row.costs);
            result.report.rows.push_back(std::move(row));
            result.runs.push_back(std::move(run));
        } catch (const Error& e) {
            throw Error("while mediating " + h.id + ": " + e.what());
        }
    }

    if (!hset.hypotheses.empty()) {
        result.report.metrics_before = compute_metrics(before, hset.hypotheses.size());
        result.report.metrics_after = compute_metrics(after, hset.hypotheses.size());
    }
    return result;
}

} // namespace entente
