#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "entente/ontology.hpp"

using namespace entente;

namespace {

const char* kVerbalizationFixture = R"(# TBox slice behind the five reference verbalizations
CONCEPT Hypomimia
CONCEPT Motor-feature
CONCEPT Malaria
CONCEPT Infectious-cause-of-parkinsonism
CONCEPT Cigarette-smoking
CONCEPT Environmental-risk-factor
CONCEPT Resting-tremor
CONCEPT Parkinsonian-tremor
CONCEPT Canonical-etiology
CONCEPT Etiology-of-Parkinson-disease
ROLE part-of

DEF Hypomimia = Motor-feature
DEF Malaria = Infectious-cause-of-parkinsonism
DEF Cigarette-smoking = Environmental-risk-factor
INC Resting-tremor < Parkinsonian-tremor
INC Canonical-etiology < EXISTS part-of . Etiology-of-Parkinson-disease
)";

} // namespace

TEST_CASE("parse_ontology handles the record forms") {
    SECTION("definition with atomic right side") {
        auto onto = parse_ontology("CONCEPT Hypomimia\nCONCEPT Motor-feature\n"
                                   "DEF Hypomimia = Motor-feature\n");
        REQUIRE(onto.axioms.size() == 1);
        const auto& def = std::get<Definition>(onto.axioms[0]);
        CHECK(def.name.value == "Hypomimia");
        CHECK(def.rhs->kind == ConceptExpr::Kind::atomic);
        CHECK(def.rhs->name == "Motor-feature");
    }

    SECTION("inclusion between atomics") {
        auto onto = parse_ontology("CONCEPT Resting-tremor\nCONCEPT Parkinsonian-tremor\n"
                                   "INC Resting-tremor < Parkinsonian-tremor\n");
        REQUIRE(onto.axioms.size() == 1);
        const auto& inc = std::get<Inclusion>(onto.axioms[0]);
        CHECK(inc.lhs->kind == ConceptExpr::Kind::atomic);
        CHECK(inc.rhs->name == "Parkinsonian-tremor");
    }

    SECTION("empty input yields an empty ontology") {
        auto onto = parse_ontology("");
        CHECK(onto.axioms.empty());
        CHECK(onto.concepts.empty());
    }

    SECTION("composite expressions") {
        auto onto = parse_ontology("CONCEPT Tremor\nCONCEPT Motor-feature\nCONCEPT Parkinsonism\n"
                                   "ROLE part-of\n"
                                   "DEF Tremor = Motor-feature AND EXISTS part-of . Parkinsonism\n");
        const auto& def = std::get<Definition>(onto.axioms[0]);
        REQUIRE(def.rhs->kind == ConceptExpr::Kind::conj);
        CHECK(def.rhs->lhs->name == "Motor-feature");
        CHECK(def.rhs->rhs->kind == ConceptExpr::Kind::exists);
        CHECK(def.rhs->rhs->name == "part-of");
    }

    SECTION("assertions") {
        auto onto = parse_ontology("CONCEPT Tremor\nROLE part-of\n"
                                   "ASSERT involuntary-shaking : Tremor\n"
                                   "ASSERT Head-trauma , Medical-risk-factors : part-of\n");
        REQUIRE(onto.axioms.size() == 2);
        CHECK(std::get<ConceptAssertion>(onto.axioms[0]).individual == "involuntary-shaking");
        CHECK(std::get<RoleAssertion>(onto.axioms[1]).role.value == "part-of");
    }

    SECTION("declarations may follow their first use") {
        auto onto = parse_ontology("DEF A = B\nCONCEPT A\nCONCEPT B\n");
        CHECK(onto.axioms.size() == 1);
    }
}

TEST_CASE("parse_ontology rejects bad input") {
    SECTION("undeclared concept") {
        try {
            parse_ontology("CONCEPT A\nDEF A = Missing\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line == 2);
            CHECK(std::string(e.what()).find("Missing") != std::string::npos);
        }
    }

    SECTION("undeclared role") {
        CHECK_THROWS_AS(parse_ontology("CONCEPT A\nCONCEPT B\nINC A < EXISTS r . B\n"), ParseError);
    }

    SECTION("duplicate declaration") {
        try {
            parse_ontology("CONCEPT A\nCONCEPT A\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line == 2);
        }
    }

    SECTION("syntax error reports line and column") {
        try {
            parse_ontology("CONCEPT A\nDEF A =\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line == 2);
            CHECK(e.column >= 7);
        }
    }

    SECTION("concept and role namespaces are separate") {
        CHECK_NOTHROW(parse_ontology("CONCEPT part-of\nROLE part-of\n"));
    }
}

TEST_CASE("verbalize_axiom renders the covered templates") {
    auto onto = parse_ontology(kVerbalizationFixture);
    REQUIRE(onto.axioms.size() == 5);

    CHECK(verbalize_axiom(onto.axioms[0]) == "Hypomimia is-a Motor-feature.");
    CHECK(verbalize_axiom(onto.axioms[1]) == "Malaria is-a Infectious-cause-of-parkinsonism.");
    CHECK(verbalize_axiom(onto.axioms[2]) == "Cigarette-smoking is-a Environmental-risk-factor.");
    CHECK(verbalize_axiom(onto.axioms[3]) == "Every Resting-tremor is-a Parkinsonian-tremor.");
    CHECK(verbalize_axiom(onto.axioms[4]) ==
          "Every Canonical-etiology part-of an Etiology-of-Parkinson-disease.");

    SECTION("pure function: identical axiom, identical text") {
        CHECK(verbalize_axiom(onto.axioms[4]) == verbalize_axiom(onto.axioms[4]));
    }

    SECTION("article selection follows the filler's initial letter") {
        auto o = parse_ontology("CONCEPT A\nCONCEPT Neuropathology\nROLE causes\n"
                                "INC A < EXISTS causes . Neuropathology\n");
        CHECK(verbalize_axiom(o.axioms[0]) == "Every A causes a Neuropathology.");
    }

    SECTION("uncovered templates raise") {
        auto o = parse_ontology("CONCEPT A\nCONCEPT B\nCONCEPT C\nROLE r\n"
                                "INC A < NOT B\n"
                                "INC A < B OR C\n"
                                "INC A < FORALL r . B\n"
                                "DEF A = B AND C\n");
        for (const auto& ax : o.axioms) CHECK_THROWS_AS(verbalize_axiom(ax), VerbalizationError);
        CHECK_THROWS_AS(
            verbalize_axiom(ConceptAssertion{"x", ConceptName{"A"}}), VerbalizationError);
    }
}

TEST_CASE("generate_hypotheses") {
    SECTION("the five reference axioms yield h1..h5 in order") {
        auto hs = generate_hypotheses(parse_ontology(kVerbalizationFixture));
        REQUIRE(hs.hypotheses.size() == 5);
        CHECK(hs.warnings.empty());
        for (std::size_t i = 0; i < 5; ++i) {
            CHECK(hs.hypotheses[i].id == "h" + std::to_string(i + 1));
            CHECK(hs.hypotheses[i].source_axiom == i);
            CHECK(hs.hypotheses[i].text.back() == '.');
        }
    }

    SECTION("ABox-only ontology yields warnings, no hypotheses") {
        auto hs = generate_hypotheses(
            parse_ontology("CONCEPT Tremor\nASSERT shaking : Tremor\n"));
        CHECK(hs.hypotheses.empty());
        REQUIRE(hs.warnings.size() == 1);
        CHECK(hs.warnings[0].axiom_index == 0);
    }

    SECTION("mixed coverage: one hypothesis plus one warning") {
        auto hs = generate_hypotheses(parse_ontology(
            "CONCEPT A\nCONCEPT B\nCONCEPT C\nDEF A = B\nINC A < NOT C\n"));
        REQUIRE(hs.hypotheses.size() == 1);
        REQUIRE(hs.warnings.size() == 1);
        CHECK(hs.hypotheses[0].id == "h1");
        CHECK(hs.hypotheses[0].source_axiom == 0);
        CHECK(hs.warnings[0].axiom_index == 1);
    }
}

namespace {

// hand-rolled generator for round-trip checks
ConceptExpr::Ptr random_expr(std::mt19937& rng, const std::vector<std::string>& concepts,
                             const std::vector<std::string>& roles, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 0 : 5);
    switch (pick(rng)) {
    case 1:
        return ConceptExpr::conj(random_expr(rng, concepts, roles, depth - 1),
                                 random_expr(rng, concepts, roles, depth - 1));
    case 2:
        return ConceptExpr::disj(random_expr(rng, concepts, roles, depth - 1),
                                 random_expr(rng, concepts, roles, depth - 1));
    case 3:
        return ConceptExpr::neg(random_expr(rng, concepts, roles, depth - 1));
    case 4:
        return ConceptExpr::exists(roles[rng() % roles.size()],
                                   random_expr(rng, concepts, roles, depth - 1));
    case 5:
        return ConceptExpr::forall(roles[rng() % roles.size()],
                                   random_expr(rng, concepts, roles, depth - 1));
    default:
        return ConceptExpr::atomic(concepts[rng() % concepts.size()]);
    }
}

Ontology random_ontology(std::mt19937& rng) {
    Ontology onto;
    std::vector<std::string> concepts = {"Alpha", "Beta-prime", "Gamma", "Delta'-form"};
    std::vector<std::string> roles = {"part-of", "causes"};
    for (const auto& c : concepts) onto.concepts.insert(c);
    for (const auto& r : roles) onto.roles.insert(r);
    std::uniform_int_distribution<int> n_axioms(0, 6);
    std::uniform_int_distribution<int> kind(0, 3);
    int n = n_axioms(rng);
    for (int i = 0; i < n; ++i) {
        switch (kind(rng)) {
        case 0:
            onto.axioms.push_back(Definition{ConceptName{concepts[rng() % concepts.size()]},
                                             random_expr(rng, concepts, roles, 3)});
            break;
        case 1:
            onto.axioms.push_back(Inclusion{random_expr(rng, concepts, roles, 3),
                                            random_expr(rng, concepts, roles, 3)});
            break;
        case 2:
            onto.axioms.push_back(
                ConceptAssertion{"ind-" + std::to_string(i), ConceptName{concepts[0]}});
            break;
        default:
            onto.axioms.push_back(
                RoleAssertion{"x" + std::to_string(i), "y", RoleName{roles[rng() % roles.size()]}});
        }
    }
    return onto;
}

} // namespace

TEST_CASE("parse(serialize(o)) round-trips structurally") {
    std::mt19937 rng(20260809);
    for (int iter = 0; iter < 200; ++iter) {
        Ontology onto = random_ontology(rng);
        std::string text = serialize_ontology(onto);
        INFO(text);
        Ontology back = parse_ontology(text);
        CHECK(ontology_equal(onto, back));
    }
}
