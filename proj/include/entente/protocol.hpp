#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "entente/entailment.hpp"
#include "entente/errors.hpp"
#include "entente/fuzzy.hpp"

namespace entente {

// ---------------------------------------------------------------------------
// Locutions and messages
// ---------------------------------------------------------------------------

enum class ProtocolId { pa, pd, pc };

inline const char* to_string(ProtocolId p) {
    switch (p) {
    case ProtocolId::pa: return "Pa";
    case ProtocolId::pd: return "Pd";
    case ProtocolId::pc: return "Pc";
    }
    return "?";
}

inline ProtocolId parse_protocol(std::string_view s) {
    if (s == "Pa") return ProtocolId::pa;
    if (s == "Pd") return ProtocolId::pd;
    if (s == "Pc") return ProtocolId::pc;
    throw Error("unknown protocol '" + std::string(s) + "'");
}

enum class Outcome { win, quit, lost };

inline const char* to_string(Outcome o) {
    switch (o) {
    case Outcome::win: return "WIN";
    case Outcome::quit: return "QUIT";
    case Outcome::lost: return "LOST";
    }
    return "?";
}

inline Outcome parse_outcome(std::string_view s) {
    if (s == "WIN") return Outcome::win;
    if (s == "QUIT") return Outcome::quit;
    if (s == "LOST") return Outcome::lost;
    throw Error("unknown outcome '" + std::string(s) + "'");
}

struct Inform {
    std::string content;
    bool operator==(const Inform&) const = default;
};
struct PrimaryReasonQuestion {
    bool operator==(const PrimaryReasonQuestion&) const = default;
};
struct PersuasiveAnswer {
    std::vector<std::string> pair_ids;
    bool operator==(const PersuasiveAnswer&) const = default;
};
struct Challenge {
    bool operator==(const Challenge&) const = default;
};
struct RequestExplanation {
    LinguisticTerm term = LinguisticTerm::strong;
    bool operator==(const RequestExplanation&) const = default;
};
struct FinalRemark {
    Outcome outcome = Outcome::quit;
    bool operator==(const FinalRemark&) const = default;
};

using Locution =
    std::variant<Inform, PrimaryReasonQuestion, PersuasiveAnswer, Challenge, RequestExplanation, FinalRemark>;

inline const char* locution_name(const Locution& l) {
    switch (l.index()) {
    case 0: return "inform";
    case 1: return "primary_reason_question";
    case 2: return "persuasive_answer";
    case 3: return "challenge";
    case 4: return "request_explanation";
    case 5: return "final_remark";
    }
    return "?";
}

inline std::string locution_payload(const Locution& l) {
    if (const auto* inf = std::get_if<Inform>(&l)) return inf->content;
    if (const auto* pa = std::get_if<PersuasiveAnswer>(&l)) return detail::join(pa->pair_ids, ",");
    if (const auto* re = std::get_if<RequestExplanation>(&l)) return to_string(re->term);
    if (const auto* fr = std::get_if<FinalRemark>(&l)) return to_string(fr->outcome);
    return "";
}

struct Message {
    std::string from;
    std::string to;
    int seq = 0; // 1-based, gapless per dialog
    Locution locution;
    std::string hypothesis_id;

    bool operator==(const Message&) const = default;
};

struct ShareRecord {
    int round = 0;
    std::string sender;
    std::size_t count = 0;

    bool operator==(const ShareRecord&) const = default;
};

// ---------------------------------------------------------------------------
// Agent state
// ---------------------------------------------------------------------------

/// One agent's side of a dialog: its corpus, its oracle and its latest
/// decision per hypothesis. Rounds count the merges performed in the
/// current dialog.
struct AgentState {
    std::string id;
    Corpus corpus;
    std::shared_ptr<const Oracle> oracle;
    int round = 0;
    std::map<std::string, EntailmentDecision> decisions;

    const EntailmentDecision& evaluate(const Hypothesis& h) {
        decisions[h.id] = oracle_decide(*oracle, id, h, corpus, round);
        return decisions.at(h.id);
    }
    const EntailmentDecision& decision(const Hypothesis& h) const { return decisions.at(h.id); }

    void receive_samples(const std::vector<TextHypothesisPair>& samples, const Hypothesis& h) {
        corpus = merge_samples(corpus, samples);
        ++round;
        evaluate(h);
    }
};

/// Knobs of the three protocols, with the defaults used by the shipped
/// scenario.
struct ProtocolConfig {
    double max_share_fraction = 0.25;     // Pd: fraction shared at degree 1
    std::size_t pc_round_share_count = 5; // Pc: samples per agent per round
    std::size_t pa_share_count = 3;       // Pa: best gold-labeled pairs per agent
    double cost_per_sample = 1.0;
    double cost_per_locution = 0.1;
    Lexicon lexicon = Lexicon::builtin(); // ranks shareable samples
};

/// Complete record of one mediation dialog.
struct ProtocolRun {
    ProtocolId protocol = ProtocolId::pa;
    std::string hypothesis_id;
    std::vector<Message> trace;
    std::vector<ShareRecord> shares;
    SituationAssessment initial;
    SituationAssessment final_state;
    std::vector<FiredRule> initial_rules;
    std::vector<FiredRule> final_rules;
    std::map<std::string, Outcome> declarations; // empty for Pa

    std::size_t samples_shared() const {
        std::size_t n = 0;
        for (const auto& s : shares) n += s.count;
        return n;
    }
};

// ---------------------------------------------------------------------------
// Protocol selection and sample ranking
// ---------------------------------------------------------------------------

inline ProtocolId select_protocol(const SituationAssessment& sit) {
    switch (sit.kind) {
    case RelationKind::agreement: return ProtocolId::pa;
    case RelationKind::disagreement: return ProtocolId::pd;
    case RelationKind::conflict: return ProtocolId::pc;
    }
    throw Error("unreachable");
}

namespace detail {

/// Deterministic ranking of shareable pairs: pairs collected for the
/// hypothesis first, then by lexical overlap with it, then by pair_id.
inline std::vector<const TextHypothesisPair*> rank_shareable(const Corpus& corpus,
                                                             const Hypothesis& h,
                                                             const Lexicon& lex,
                                                             bool gold_only) {
    std::vector<const TextHypothesisPair*> ranked;
    for (const auto& p : corpus.pairs) {
        if (gold_only && !p.gold_label) continue;
        ranked.push_back(&p);
    }
    std::vector<double> score(ranked.size());
    std::map<const TextHypothesisPair*, double> overlap;
    for (const auto* p : ranked) overlap[p] = overlap_score(p->text, h.text, lex);
    std::sort(ranked.begin(), ranked.end(),
              [&](const TextHypothesisPair* x, const TextHypothesisPair* y) {
                  bool rx = x->hypothesis_id == h.id;
                  bool ry = y->hypothesis_id == h.id;
                  if (rx != ry) return rx;
                  if (overlap.at(x) != overlap.at(y)) return overlap.at(x) > overlap.at(y);
                  return x->pair_id < y->pair_id;
              });
    return ranked;
}

/// Picks up to `count` ranked pairs not yet shared in this dialog.
inline std::vector<TextHypothesisPair> pick_samples(const Corpus& corpus, const Hypothesis& h,
                                                    const Lexicon& lex, std::size_t count,
                                                    std::set<std::string>& already_shared,
                                                    bool gold_only = false) {
    std::vector<TextHypothesisPair> out;
    for (const auto* p : rank_shareable(corpus, h, lex, gold_only)) {
        if (out.size() >= count) break;
        if (!already_shared.insert(p->pair_id).second) continue;
        out.push_back(*p);
    }
    return out;
}

inline std::vector<std::string> ids_of(const std::vector<TextHypothesisPair>& pairs) {
    std::vector<std::string> ids;
    ids.reserve(pairs.size());
    for (const auto& p : pairs) ids.push_back(p.pair_id);
    return ids;
}

struct DialogRecorder {
    ProtocolRun& run;
    int seq = 0;

    void send(const std::string& from, const std::string& to, Locution loc) {
        run.trace.push_back(Message{from, to, ++seq, std::move(loc), run.hypothesis_id});
    }
};

inline std::string relation_content(const Hypothesis& h, const SituationAssessment& sit) {
    return "relation(" + h.id + ", " + to_display(sit) + ")";
}

inline std::string opinion_content(const Hypothesis& h, const EntailmentDecision& d) {
    std::ostringstream os;
    os << "opinion(" << h.id << ", " << to_string(d.label) << ", " << d.confidence << ")";
    return os.str();
}

/// How far the degree of disagreement lets the provider open its corpus:
/// fraction = degree * max_share_fraction, at least one sample when the
/// degree is positive.
inline std::size_t pd_share_count(double degree, double max_fraction, std::size_t corpus_size) {
    double fraction = degree * max_fraction;
    auto n = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(corpus_size)));
    if (n == 0 && degree > 0.0) n = 1;
    return std::min(n, corpus_size);
}

/// Post-dialog verdicts. An agent concedes (declares LOST) when it alone
/// moved, either by adopting the other's label or by weakening its own
/// position; the standing agent then declares WIN. Joint movement onto the
/// same label is a shared WIN; anything else ends in QUIT.
inline std::map<std::string, Outcome> declare_outcomes(const LinguisticVariable& certainty,
                                                       const AgentState& a1, const AgentState& a2,
                                                       const Hypothesis& h,
                                                       const EntailmentDecision& before1,
                                                       const EntailmentDecision& before2) {
    auto view = [&](const EntailmentDecision& d) {
        return std::make_pair(d.label, fuzzify(certainty, d.confidence).term);
    };
    auto b1 = view(before1), b2 = view(before2);
    auto f1 = view(a1.decision(h)), f2 = view(a2.decision(h));
    bool moved1 = f1 != b1;
    bool moved2 = f2 != b2;

    std::map<std::string, Outcome> out;
    if (!moved1 && !moved2) {
        out[a1.id] = out[a2.id] = Outcome::quit;
    } else if (moved1 && moved2) {
        bool agree = f1.first == f2.first;
        out[a1.id] = out[a2.id] = agree ? Outcome::win : Outcome::quit;
    } else {
        const auto& mover_before = moved1 ? b1 : b2;
        const auto& mover_after = moved1 ? f1 : f2;
        const auto& other_after = moved1 ? f2 : f1;
        bool adopted = mover_after.first != mover_before.first && mover_after.first == other_after.first;
        bool weakened = mover_after.first == mover_before.first &&
                        static_cast<int>(mover_after.second) < static_cast<int>(mover_before.second);
        if (adopted || weakened) {
            out[moved1 ? a1.id : a2.id] = Outcome::lost;
            out[moved1 ? a2.id : a1.id] = Outcome::win;
        } else {
            out[a1.id] = out[a2.id] = Outcome::quit;
        }
    }
    return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// The three protocols
// ---------------------------------------------------------------------------

/// Agreement protocol. The initiator informs about the relation; unless the
/// agreement is already strong, the less confident agent questions the
/// degree, both share a slice of their best gold-labeled pairs, re-evaluate
/// once, and the initiator closes with the updated relation.
inline ProtocolRun run_pa(AgentState& a1, AgentState& a2, const Hypothesis& h,
                          const InferenceResult& initial, const FuzzyKnowledgeBase& fkb,
                          const ProtocolConfig& config) {
    if (initial.assessment.kind != RelationKind::agreement)
        throw PreconditionError("run_pa requires an agreement situation");

    ProtocolRun run;
    run.protocol = ProtocolId::pa;
    run.hypothesis_id = h.id;
    run.initial = initial.assessment;
    run.initial_rules = initial.fired;
    detail::DialogRecorder rec{run};

    rec.send(a1.id, a2.id, Inform{detail::relation_content(h, initial.assessment)});

    if (initial.assessment.term != LinguisticTerm::strong) {
        // the less confident agent asks why the degree is not strong
        AgentState& questioner = a2.decision(h).confidence <= a1.decision(h).confidence ? a2 : a1;
        AgentState& responder = &questioner == &a1 ? a2 : a1;
        rec.send(questioner.id, responder.id, RequestExplanation{LinguisticTerm::strong});

        std::set<std::string> shared;
        auto from_responder = detail::pick_samples(responder.corpus, h, config.lexicon,
                                                   config.pa_share_count, shared, /*gold_only=*/true);
        rec.send(responder.id, questioner.id, PersuasiveAnswer{detail::ids_of(from_responder)});
        auto from_questioner = detail::pick_samples(questioner.corpus, h, config.lexicon,
                                                    config.pa_share_count, shared, /*gold_only=*/true);
        rec.send(questioner.id, responder.id, PersuasiveAnswer{detail::ids_of(from_questioner)});

        run.shares.push_back({1, responder.id, from_responder.size()});
        run.shares.push_back({1, questioner.id, from_questioner.size()});
        questioner.receive_samples(from_responder, h);
        responder.receive_samples(from_questioner, h);

        auto updated = fkb.infer(a1.decision(h), a2.decision(h));
        rec.send(a1.id, a2.id, Inform{detail::relation_content(h, updated.assessment)});
    }

    auto final_inf = fkb.infer(a1.decision(h), a2.decision(h));
    run.final_state = final_inf.assessment;
    run.final_rules = final_inf.fired;
    return run;
}

/// Disagreement protocol. The committed agent provides samples sized by the
/// degree of disagreement; the unknowing agent merges and re-evaluates. A
/// changed label is announced as a reconsidered opinion; otherwise the
/// receiver challenges and the cycle repeats. After two challenges both
/// agents state their final position.
inline ProtocolRun run_pd(AgentState& provider, AgentState& receiver, const Hypothesis& h,
                          const InferenceResult& initial, const FuzzyKnowledgeBase& fkb,
                          const ProtocolConfig& config) {
    if (initial.assessment.kind != RelationKind::disagreement)
        throw PreconditionError("run_pd requires a disagreement situation");
    if (provider.decision(h).label == EntailmentLabel::unknown)
        throw PreconditionError("run_pd provider must hold a committed (non-Unknown) label");

    ProtocolRun run;
    run.protocol = ProtocolId::pd;
    run.hypothesis_id = h.id;
    run.initial = initial.assessment;
    run.initial_rules = initial.fired;
    detail::DialogRecorder rec{run};

    EntailmentDecision before_p = provider.decision(h);
    EntailmentDecision before_r = receiver.decision(h);

    std::set<std::string> shared;
    std::size_t per_share = detail::pd_share_count(initial.assessment.degree,
                                                   config.max_share_fraction,
                                                   provider.corpus.pairs.size());
    int challenges = 0;
    while (true) {
        auto samples = detail::pick_samples(provider.corpus, h, config.lexicon, per_share, shared);
        rec.send(provider.id, receiver.id, PersuasiveAnswer{detail::ids_of(samples)});
        run.shares.push_back({receiver.round + 1, provider.id, samples.size()});

        EntailmentLabel label_before = receiver.decision(h).label;
        receiver.receive_samples(samples, h);
        if (receiver.decision(h).label != label_before) {
            rec.send(receiver.id, provider.id,
                     Inform{detail::opinion_content(h, receiver.decision(h))});
            break;
        }
        ++challenges;
        rec.send(receiver.id, provider.id, Challenge{});
        if (challenges == 2) break; // two challenges exhaust the protocol
    }

    run.declarations = detail::declare_outcomes(fkb.input(), provider, receiver, h, before_p, before_r);
    rec.send(provider.id, receiver.id, FinalRemark{run.declarations.at(provider.id)});
    rec.send(receiver.id, provider.id, FinalRemark{run.declarations.at(receiver.id)});

    auto final_inf = fkb.infer(provider.decision(h), receiver.decision(h));
    run.final_state = final_inf.assessment;
    run.final_rules = final_inf.fired;
    return run;
}

/// Conflict protocol. After an informative statement declaring the conflict
/// and a primary reason question, both agents exchange the same fixed number
/// of samples for exactly three rounds, re-evaluating each round, and close
/// with their final remarks.
inline ProtocolRun run_pc(AgentState& a1, AgentState& a2, const Hypothesis& h,
                          const InferenceResult& initial, const FuzzyKnowledgeBase& fkb,
                          const ProtocolConfig& config) {
    if (initial.assessment.kind != RelationKind::conflict)
        throw PreconditionError("run_pc requires a conflict situation");

    ProtocolRun run;
    run.protocol = ProtocolId::pc;
    run.hypothesis_id = h.id;
    run.initial = initial.assessment;
    run.initial_rules = initial.fired;
    detail::DialogRecorder rec{run};

    EntailmentDecision before1 = a1.decision(h);
    EntailmentDecision before2 = a2.decision(h);

    rec.send(a1.id, a2.id, Inform{detail::relation_content(h, initial.assessment)});
    rec.send(a2.id, a1.id, PrimaryReasonQuestion{});

    std::set<std::string> shared1, shared2; // ids each agent has sent or received
    for (int round = 1; round <= 3; ++round) {
        auto from1 = detail::pick_samples(a1.corpus, h, config.lexicon, config.pc_round_share_count,
                                          shared1);
        rec.send(a1.id, a2.id, PersuasiveAnswer{detail::ids_of(from1)});
        auto from2 = detail::pick_samples(a2.corpus, h, config.lexicon, config.pc_round_share_count,
                                          shared2);
        rec.send(a2.id, a1.id, PersuasiveAnswer{detail::ids_of(from2)});
        run.shares.push_back({round, a1.id, from1.size()});
        run.shares.push_back({round, a2.id, from2.size()});
        a2.receive_samples(from1, h);
        a1.receive_samples(from2, h);
        // received material is not echoed back in later rounds
        for (const auto& p : from1) shared2.insert(p.pair_id);
        for (const auto& p : from2) shared1.insert(p.pair_id);
    }

    run.declarations = detail::declare_outcomes(fkb.input(), a1, a2, h, before1, before2);
    rec.send(a1.id, a2.id, FinalRemark{run.declarations.at(a1.id)});
    rec.send(a2.id, a1.id, FinalRemark{run.declarations.at(a2.id)});

    auto final_inf = fkb.infer(a1.decision(h), a2.decision(h));
    run.final_state = final_inf.assessment;
    run.final_rules = final_inf.fired;
    return run;
}

} // namespace entente
