#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "entente/protocol.hpp"

using namespace entente;

namespace {

constexpr EntailmentLabel ENT = EntailmentLabel::entailed;
constexpr EntailmentLabel CONTR = EntailmentLabel::contradicted;
constexpr EntailmentLabel UNK = EntailmentLabel::unknown;

Corpus small_corpus(const std::string& owner, int n = 12) {
    Corpus c;
    c.owner = owner;
    for (int i = 1; i <= n; ++i) {
        TextHypothesisPair p;
        p.pair_id = owner + "p" + (i < 10 ? "0" : "") + std::to_string(i);
        p.hypothesis_id = "h" + std::to_string(1 + i % 3);
        p.text = "Sample text " + std::to_string(i) + " about tremor and dopamine.";
        p.gold_label = static_cast<EntailmentLabel>(i % 3);
        c.pairs.push_back(std::move(p));
    }
    return c;
}

struct Scenario {
    std::shared_ptr<RecordedOracle> oracle;
    AgentState a1;
    AgentState a2;
    Hypothesis h{"h1", "Hypomimia is-a Motor-feature.", 0};

    Scenario(OracleScript script, int corpus_size = 12) {
        oracle = std::make_shared<RecordedOracle>(std::move(script));
        a1 = AgentState{"a1", small_corpus("a1", corpus_size), oracle};
        a2 = AgentState{"a2", small_corpus("a2", corpus_size), oracle};
        a1.evaluate(h);
        a2.evaluate(h);
    }
};

OracleScript script_of(std::initializer_list<std::tuple<const char*, int, EntailmentLabel, double>> rows) {
    OracleScript s;
    for (const auto& [agent, round, label, conf] : rows) s.add(agent, "h1", round, {label, conf});
    return s;
}

const FuzzyKnowledgeBase& fkb() { return default_fuzzy_knowledge_base(); }

bool seq_gapless(const std::vector<Message>& trace) {
    for (std::size_t i = 0; i < trace.size(); ++i)
        if (trace[i].seq != static_cast<int>(i) + 1) return false;
    return true;
}

int count_locutions(const std::vector<Message>& trace, const char* name) {
    int n = 0;
    for (const auto& m : trace)
        if (std::string(locution_name(m.locution)) == name) ++n;
    return n;
}

} // namespace

TEST_CASE("select_protocol maps each relation to its protocol") {
    CHECK(select_protocol({RelationKind::agreement, LinguisticTerm::medium, 0.75}) == ProtocolId::pa);
    CHECK(select_protocol({RelationKind::disagreement, LinguisticTerm::medium, 0.53}) == ProtocolId::pd);
    CHECK(select_protocol({RelationKind::conflict, LinguisticTerm::medium, 0.45}) == ProtocolId::pc);
}

TEST_CASE("Pa: agreement dialog") {
    SECTION("strong agreement ends after a single inform, nothing shared") {
        Scenario sc(script_of({{"a1", 0, ENT, 0.55}, {"a2", 0, ENT, 0.52}}));
        // force a strong initial assessment by construction
        auto initial = fkb().infer(sc.a1.decision(sc.h), sc.a2.decision(sc.h));
        initial.assessment.term = LinguisticTerm::strong;
        auto run = run_pa(sc.a1, sc.a2, sc.h, initial, fkb(), {});
        REQUIRE(run.trace.size() == 1);
        CHECK(count_locutions(run.trace, "inform") == 1);
        CHECK(run.shares.empty());
        CHECK(run.declarations.empty());
    }

    SECTION("non-strong agreement: one exchange, unchanged opinions keep the state") {
        Scenario sc(script_of({{"a1", 0, UNK, 0.57}, {"a2", 0, UNK, 0.50}}));
        auto initial = fkb().infer(sc.a1.decision(sc.h), sc.a2.decision(sc.h));
        REQUIRE(initial.assessment.term == LinguisticTerm::medium);
        auto run = run_pa(sc.a1, sc.a2, sc.h, initial, fkb(), {});
        CHECK(run.final_state == run.initial);
        CHECK(count_locutions(run.trace, "request_explanation") == 1);
        CHECK(count_locutions(run.trace, "persuasive_answer") == 2);
        CHECK(run.trace.size() == 5);
        // the less confident agent raises the question
        CHECK(run.trace[1].from == "a2");
        CHECK(std::get<RequestExplanation>(run.trace[1].locution).term == LinguisticTerm::strong);
    }

    SECTION("scripted confidence rise lifts weak agreement to medium") {
        Scenario sc(script_of(
            {{"a1", 0, ENT, 0.52}, {"a2", 0, ENT, 0.30}, {"a2", 1, ENT, 0.45}}));
        auto initial = fkb().infer(sc.a1.decision(sc.h), sc.a2.decision(sc.h));
        REQUIRE(initial.assessment.term == LinguisticTerm::weak);
        auto run = run_pa(sc.a1, sc.a2, sc.h, initial, fkb(), {});
        CHECK(run.final_state.kind == RelationKind::agreement);
        CHECK(run.final_state.term == LinguisticTerm::medium);
    }

    SECTION("precondition: conflict input is rejected") {
        Scenario sc(script_of({{"a1", 0, CONTR, 0.41}, {"a2", 0, ENT, 0.68}}));
        auto initial = fkb().infer(sc.a1.decision(sc.h), sc.a2.decision(sc.h));
        CHECK_THROWS_AS(run_pa(sc.a1, sc.a2, sc.h, initial, fkb(), {}), PreconditionError);
    }
}

TEST_CASE("Pd: disagreement dialog") {
    SECTION("receiver flips after the first share: reconsidered opinion, no challenge") {
        Scenario sc(script_of(
            {{"a1", 0, ENT, 0.50}, {"a2", 0, UNK, 0.33}, {"a2", 1, ENT, 0.33}}));
        auto initial = fkb().infer(sc.a1.decision(sc.h), sc.a2.decision(sc.h));
        REQUIRE(initial.assessment.kind == RelationKind::disagreement);
        auto run = run_pd(sc.a1, sc.a2, sc.h, initial, fkb(), {});

        CHECK(count_locutions(run.trace, "challenge") == 0);
        CHECK(count_locutions(run.trace, "inform") == 1);
        CHECK(count_locutions(run.trace, "final_remark") == 2);
        CHECK(run.final_state.kind == RelationKind::agreement);
        CHECK(run.declarations.at("a2") == Outcome::lost);
        CHECK(run.declarations.at("a1") == Outcome::win);
        // share volume follows the degree of disagreement
        std::size_t expected =
            static_cast<std::size_t>(std::ceil(initial.assessment.degree * 0.25 * 12));
        CHECK(run.shares.size() == 1);
        CHECK(run.shares[0].count == expected);
    }

    SECTION("stubborn receiver: exactly two challenges, state unchanged") {
        Scenario sc(script_of({{"a1", 0, UNK, 0.54}, {"a2", 0, CONTR, 0.45}}));
        auto initial = fkb().infer(sc.a1.decision(sc.h), sc.a2.decision(sc.h));
        REQUIRE(initial.assessment.kind == RelationKind::disagreement);
        // a2 holds the committed label and provides
        auto run = run_pd(sc.a2, sc.a1, sc.h, initial, fkb(), {});
        CHECK(count_locutions(run.trace, "challenge") == 2);
        CHECK(run.final_state == run.initial);
        CHECK(run.declarations.at("a1") == Outcome::quit);
        CHECK(run.declarations.at("a2") == Outcome::quit);
    }

    SECTION("degenerate zero-degree share still terminates") {
        Scenario sc(script_of({{"a1", 0, ENT, 0.50}, {"a2", 0, UNK, 0.33}}));
        auto initial = fkb().infer(sc.a1.decision(sc.h), sc.a2.decision(sc.h));
        initial.assessment.degree = 0.0;
        auto run = run_pd(sc.a1, sc.a2, sc.h, initial, fkb(), {});
        for (const auto& s : run.shares) CHECK(s.count == 0);
        CHECK(count_locutions(run.trace, "final_remark") == 2);
    }

    SECTION("precondition: provider must hold a committed label") {
        Scenario sc(script_of({{"a1", 0, ENT, 0.50}, {"a2", 0, UNK, 0.33}}));
        auto initial = fkb().infer(sc.a1.decision(sc.h), sc.a2.decision(sc.h));
        CHECK_THROWS_AS(run_pd(sc.a2, sc.a1, sc.h, initial, fkb(), {}), PreconditionError);
    }
}

TEST_CASE("Pc: conflict dialog") {
    SECTION("weakening contradiction concedes; entailment side wins") {
        Scenario sc(script_of({{"a1", 0, CONTR, 0.41},
                               {"a1", 1, CONTR, 0.35},
                               {"a1", 2, CONTR, 0.30},
                               {"a1", 3, CONTR, 0.25},
                               {"a2", 0, ENT, 0.68}}));
        auto initial = fkb().infer(sc.a1.decision(sc.h), sc.a2.decision(sc.h));
        REQUIRE(initial.assessment.kind == RelationKind::conflict);
        REQUIRE(initial.assessment.term == LinguisticTerm::medium);
        auto run = run_pc(sc.a1, sc.a2, sc.h, initial, fkb(), {});

        CHECK(run.declarations.at("a2") == Outcome::win);
        CHECK(run.declarations.at("a1") == Outcome::lost);
        CHECK(run.final_state.kind == RelationKind::conflict);
        CHECK(run.final_state.term == LinguisticTerm::weak);
        // opening statement, primary reason question, 3 rounds of mutual
        // sharing, two final remarks
        CHECK(run.trace.size() == 2 + 6 + 2);
        CHECK(count_locutions(run.trace, "primary_reason_question") == 1);
        CHECK(run.shares.size() == 6);

        SECTION("the named rules anchor both assessments") {
            REQUIRE_FALSE(run.initial_rules.empty());
            REQUIRE_FALSE(run.final_rules.empty());
            CHECK(run.initial_rules.front().name == "R9");
            CHECK(run.final_rules.front().name == "R10");
        }
    }

    SECTION("no movement on either side: both quit, state preserved") {
        Scenario sc(script_of({{"a1", 0, CONTR, 0.41}, {"a2", 0, ENT, 0.68}}));
        auto initial = fkb().infer(sc.a1.decision(sc.h), sc.a2.decision(sc.h));
        auto run = run_pc(sc.a1, sc.a2, sc.h, initial, fkb(), {});
        CHECK(run.declarations.at("a1") == Outcome::quit);
        CHECK(run.declarations.at("a2") == Outcome::quit);
        CHECK(run.final_state == run.initial);
    }

    SECTION("convergence on one label: both win, relation becomes agreement") {
        Scenario sc(script_of({{"a1", 0, CONTR, 0.41},
                               {"a2", 0, ENT, 0.68},
                               {"a1", 2, ENT, 0.55},
                               {"a2", 2, ENT, 0.60}}));
        auto initial = fkb().infer(sc.a1.decision(sc.h), sc.a2.decision(sc.h));
        auto run = run_pc(sc.a1, sc.a2, sc.h, initial, fkb(), {});
        CHECK(run.declarations.at("a1") == Outcome::win);
        CHECK(run.declarations.at("a2") == Outcome::win);
        CHECK(run.final_state.kind == RelationKind::agreement);
    }

    SECTION("equal share counts per round") {
        Scenario sc(script_of({{"a1", 0, CONTR, 0.41}, {"a2", 0, ENT, 0.68}}), 20);
        auto initial = fkb().infer(sc.a1.decision(sc.h), sc.a2.decision(sc.h));
        ProtocolConfig cfg;
        cfg.pc_round_share_count = 4;
        auto run = run_pc(sc.a1, sc.a2, sc.h, initial, fkb(), cfg);
        for (const auto& s : run.shares) CHECK(s.count == 4);
    }
}

// ---------------------------------------------------------------------------
// Randomized invariants
// ---------------------------------------------------------------------------

namespace {

OracleScript random_script(std::mt19937& rng) {
    std::uniform_real_distribution<double> conf(0.0, 1.0);
    OracleScript s;
    for (const char* agent : {"a1", "a2"})
        for (int round = 0; round <= 4; ++round)
            s.add(agent, "h1", round, {static_cast<EntailmentLabel>(rng() % 3), conf(rng)});
    return s;
}

ProtocolRun run_any(Scenario& sc) {
    auto initial = fkb().infer(sc.a1.decision(sc.h), sc.a2.decision(sc.h));
    switch (select_protocol(initial.assessment)) {
    case ProtocolId::pa:
        return run_pa(sc.a1, sc.a2, sc.h, initial, fkb(), {});
    case ProtocolId::pd: {
        bool a1_committed = sc.a1.decision(sc.h).label != EntailmentLabel::unknown;
        return a1_committed ? run_pd(sc.a1, sc.a2, sc.h, initial, fkb(), {})
                            : run_pd(sc.a2, sc.a1, sc.h, initial, fkb(), {});
    }
    case ProtocolId::pc:
        return run_pc(sc.a1, sc.a2, sc.h, initial, fkb(), {});
    }
    throw Error("unreachable");
}

} // namespace

TEST_CASE("randomized scripts: termination, well-formed traces, determinism") {
    std::mt19937 rng(20260809);
    for (int iter = 0; iter < 1000; ++iter) {
        OracleScript script = random_script(rng);

        Scenario sc(script);
        std::size_t corpus_before_1 = sc.a1.corpus.pairs.size();
        std::size_t corpus_before_2 = sc.a2.corpus.pairs.size();
        ProtocolRun run = run_any(sc);

        // termination bounds per protocol
        CHECK(run.trace.size() <= 10);
        if (run.protocol == ProtocolId::pa) CHECK(run.trace.size() <= 5);

        // gapless sequence numbers, alternating endpoints
        CHECK(seq_gapless(run.trace));
        for (const auto& m : run.trace) CHECK(m.from != m.to);

        // Pd and Pc end with one final remark from each agent
        if (run.protocol != ProtocolId::pa) {
            REQUIRE(run.trace.size() >= 2);
            const auto& last = run.trace[run.trace.size() - 1];
            const auto& prev = run.trace[run.trace.size() - 2];
            CHECK(std::holds_alternative<FinalRemark>(last.locution));
            CHECK(std::holds_alternative<FinalRemark>(prev.locution));
            CHECK(last.from != prev.from);
            CHECK(run.declarations.size() == 2);
        } else {
            CHECK(run.declarations.empty());
        }

        // corpora never shrink
        CHECK(sc.a1.corpus.pairs.size() >= corpus_before_1);
        CHECK(sc.a2.corpus.pairs.size() >= corpus_before_2);

        // every shared pair id existed in the sender's corpus at send time;
        // senders only ever grow, so membership in the final corpus suffices
        for (const auto& m : run.trace) {
            if (const auto* pa = std::get_if<PersuasiveAnswer>(&m.locution)) {
                const Corpus& sender = m.from == "a1" ? sc.a1.corpus : sc.a2.corpus;
                for (const auto& id : pa->pair_ids) CHECK(sender.contains(id));
            }
        }

        // the recorded final state is exactly the re-inferred one
        auto reinferred = fkb().infer(sc.a1.decision(sc.h), sc.a2.decision(sc.h));
        CHECK(run.final_state == reinferred.assessment);

        // determinism: a fresh replay gives an identical run
        Scenario sc2(script);
        ProtocolRun run2 = run_any(sc2);
        CHECK(run.trace == run2.trace);
        CHECK(run.shares == run2.shares);
        CHECK(run.final_state == run2.final_state);
        CHECK(run.declarations == run2.declarations);
    }
}
