#pragma once

#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "entente/errors.hpp"
#include "entente/strings.hpp"

namespace entente {

// ---------------------------------------------------------------------------
// Names
// ---------------------------------------------------------------------------

namespace detail {
inline bool valid_name(std::string_view s) {
    if (s.empty()) return false;
    for (unsigned char c : s)
        if (!(std::isalnum(c) || c == '-' || c == '\'')) return false;
    return true;
}
} // namespace detail

/// Hyphenated identifier naming an atomic concept, e.g. "Motor-feature".
struct ConceptName {
    std::string value;
    auto operator<=>(const ConceptName&) const = default;
};

/// Hyphenated identifier naming an atomic role, e.g. "part-of".
struct RoleName {
    std::string value;
    auto operator<=>(const RoleName&) const = default;
};

// ---------------------------------------------------------------------------
// Concept expressions
// ---------------------------------------------------------------------------

/// Finite expression tree over atomic concepts: conjunction, disjunction,
/// negation and the two restricted quantifier forms.
struct ConceptExpr {
    enum class Kind { atomic, conj, disj, neg, exists, forall };
    using Ptr = std::shared_ptr<const ConceptExpr>;

    Kind kind;
    std::string name; // concept name (atomic) or role name (exists/forall)
    Ptr lhs;          // only child for neg/exists/forall
    Ptr rhs;

    static Ptr atomic(std::string concept_name) {
        return std::make_shared<ConceptExpr>(ConceptExpr{Kind::atomic, std::move(concept_name), nullptr, nullptr});
    }
    static Ptr conj(Ptr a, Ptr b) {
        return std::make_shared<ConceptExpr>(ConceptExpr{Kind::conj, {}, std::move(a), std::move(b)});
    }
    static Ptr disj(Ptr a, Ptr b) {
        return std::make_shared<ConceptExpr>(ConceptExpr{Kind::disj, {}, std::move(a), std::move(b)});
    }
    static Ptr neg(Ptr a) {
        return std::make_shared<ConceptExpr>(ConceptExpr{Kind::neg, {}, std::move(a), nullptr});
    }
    static Ptr exists(std::string role, Ptr filler) {
        return std::make_shared<ConceptExpr>(ConceptExpr{Kind::exists, std::move(role), std::move(filler), nullptr});
    }
    static Ptr forall(std::string role, Ptr filler) {
        return std::make_shared<ConceptExpr>(ConceptExpr{Kind::forall, std::move(role), std::move(filler), nullptr});
    }
};

inline bool expr_equal(const ConceptExpr::Ptr& a, const ConceptExpr::Ptr& b) {
    if (!a || !b) return !a && !b;
    if (a->kind != b->kind || a->name != b->name) return false;
    return expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
}

// ---------------------------------------------------------------------------
// Axioms
// ---------------------------------------------------------------------------

/// A ≡ C with atomic left side.
struct Definition {
    ConceptName name;
    ConceptExpr::Ptr rhs;
};

/// C ⊑ D.
struct Inclusion {
    ConceptExpr::Ptr lhs;
    ConceptExpr::Ptr rhs;
};

/// a : C.
struct ConceptAssertion {
    std::string individual;
    ConceptName concept_name;
};

/// <a, b> : R.
struct RoleAssertion {
    std::string a;
    std::string b;
    RoleName role;
};

using Axiom = std::variant<Definition, Inclusion, ConceptAssertion, RoleAssertion>;

inline bool axiom_equal(const Axiom& x, const Axiom& y) {
    if (x.index() != y.index()) return false;
    return std::visit(
        [&y](const auto& a) {
            using T = std::decay_t<decltype(a)>;
            const auto& b = std::get<T>(y);
            if constexpr (std::is_same_v<T, Definition>)
                return a.name == b.name && expr_equal(a.rhs, b.rhs);
            else if constexpr (std::is_same_v<T, Inclusion>)
                return expr_equal(a.lhs, b.lhs) && expr_equal(a.rhs, b.rhs);
            else if constexpr (std::is_same_v<T, ConceptAssertion>)
                return a.individual == b.individual && a.concept_name == b.concept_name;
            else
                return a.a == b.a && a.b == b.b && a.role == b.role;
        },
        x);
}

/// Declared names plus an ordered axiom list. Hypothesis identifiers derive
/// from axiom order, so the list order is part of the value.
struct Ontology {
    std::set<std::string> concepts;
    std::set<std::string> roles;
    std::vector<Axiom> axioms;
    std::string label;
};

inline bool ontology_equal(const Ontology& a, const Ontology& b) {
    if (a.concepts != b.concepts || a.roles != b.roles) return false;
    if (a.axioms.size() != b.axioms.size()) return false;
    for (std::size_t i = 0; i < a.axioms.size(); ++i)
        if (!axiom_equal(a.axioms[i], b.axioms[i])) return false;
    return true;
}

/// One verbalized axiom: the unit of debate between agents.
struct Hypothesis {
    std::string id;   // "h1", "h2", ... in axiom order
    std::string text; // English sentence ending with a period
    std::size_t source_axiom = 0;
};

struct VerbalizationWarning {
    std::size_t axiom_index = 0;
    std::string reason;
};

struct HypothesisSet {
    std::vector<Hypothesis> hypotheses;
    std::vector<VerbalizationWarning> warnings;
};

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace detail {

struct Token {
    std::string text;
    int column = 0; // 1-based
};

inline bool is_name_char(unsigned char c) { return std::isalnum(c) || c == '-' || c == '\''; }

inline std::vector<Token> lex_line(const std::string& line, int line_no) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        unsigned char c = static_cast<unsigned char>(line[i]);
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        int col = static_cast<int>(i) + 1;
        if (is_name_char(c)) {
            std::size_t j = i;
            while (j < line.size() && is_name_char(static_cast<unsigned char>(line[j]))) ++j;
            out.push_back({line.substr(i, j - i), col});
            i = j;
        } else if (c == '=' || c == '<' || c == '(' || c == ')' || c == '.' || c == ':' || c == ',') {
            out.push_back({std::string(1, line[i]), col});
            ++i;
        } else {
            throw ParseError("unexpected character '" + std::string(1, line[i]) + "'", line_no, col);
        }
    }
    return out;
}

// Recursive-descent parser over one line's tokens. OR binds loosest, then
// AND; NOT / EXISTS / FORALL bind tightest.
class ExprParser {
  public:
    ExprParser(const std::vector<Token>& toks, std::size_t& pos, int line, const Ontology& onto)
        : toks_(toks), pos_(pos), line_(line), onto_(onto) {}

    ConceptExpr::Ptr parse() { return parse_or(); }

  private:
    const std::vector<Token>& toks_;
    std::size_t& pos_;
    int line_;
    const Ontology& onto_;

    [[noreturn]] void fail(const std::string& msg) const {
        int col = pos_ < toks_.size() ? toks_[pos_].column : (toks_.empty() ? 1 : toks_.back().column + 1);
        throw ParseError(msg, line_, col);
    }

    bool at_end() const { return pos_ >= toks_.size(); }
    const Token& peek() const {
        if (at_end()) fail("unexpected end of line");
        return toks_[pos_];
    }
    Token take() {
        const Token& t = peek();
        ++pos_;
        return t;
    }
    void expect(const std::string& text) {
        if (at_end() || toks_[pos_].text != text) fail("expected '" + text + "'");
        ++pos_;
    }

    ConceptExpr::Ptr parse_or() {
        auto lhs = parse_and();
        while (!at_end() && peek().text == "OR") {
            take();
            lhs = ConceptExpr::disj(std::move(lhs), parse_and());
        }
        return lhs;
    }

    ConceptExpr::Ptr parse_and() {
        auto lhs = parse_unary();
        while (!at_end() && peek().text == "AND") {
            take();
            lhs = ConceptExpr::conj(std::move(lhs), parse_unary());
        }
        return lhs;
    }

    ConceptExpr::Ptr parse_unary() {
        const Token& t = peek();
        if (t.text == "NOT") {
            take();
            return ConceptExpr::neg(parse_unary());
        }
        if (t.text == "EXISTS" || t.text == "FORALL") {
            bool is_exists = t.text == "EXISTS";
            take();
            Token role = take();
            if (!valid_name(role.text)) throw ParseError("expected role name", line_, role.column);
            if (!onto_.roles.count(role.text))
                throw ParseError("undeclared role '" + role.text + "'", line_, role.column);
            expect(".");
            auto filler = parse_unary();
            return is_exists ? ConceptExpr::exists(role.text, std::move(filler))
                             : ConceptExpr::forall(role.text, std::move(filler));
        }
        if (t.text == "(") {
            take();
            auto inner = parse_or();
            expect(")");
            return inner;
        }
        if (!valid_name(t.text) || t.text == "AND" || t.text == "OR")
            fail("expected concept expression");
        Token name = take();
        if (!onto_.concepts.count(name.text))
            throw ParseError("undeclared concept '" + name.text + "'", line_, name.column);
        return ConceptExpr::atomic(name.text);
    }
};

} // namespace detail

/// Parses the line-based ontology format. Declarations (`CONCEPT`, `ROLE`)
/// may appear anywhere in the file; axiom lines keep file order. Lines
/// starting with `#` are comments.
inline Ontology parse_ontology(std::istream& in, std::string label = {}) {
    std::vector<std::pair<int, std::string>> lines;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view t = detail::trim(raw);
        if (t.empty() || t.front() == '#') continue;
        lines.emplace_back(line_no, std::string(t));
    }

    Ontology onto;
    onto.label = std::move(label);

    // Pass 1: declarations.
    for (const auto& [no, text] : lines) {
        auto toks = detail::lex_line(text, no);
        const std::string& kw = toks[0].text;
        if (kw != "CONCEPT" && kw != "ROLE") continue;
        if (toks.size() != 2 || !detail::valid_name(toks[1].text))
            throw ParseError("expected exactly one name after " + kw, no,
                             toks.size() > 1 ? toks[1].column : toks[0].column);
        auto& ns = kw == "CONCEPT" ? onto.concepts : onto.roles;
        if (!ns.insert(toks[1].text).second)
            throw ParseError("duplicate declaration of '" + toks[1].text + "'", no, toks[1].column);
    }

    // Pass 2: axioms, in file order.
    for (const auto& [no, text] : lines) {
        auto toks = detail::lex_line(text, no);
        const std::string& kw = toks[0].text;
        if (kw == "CONCEPT" || kw == "ROLE") continue;
        std::size_t pos = 1;
        auto expect = [&](const std::string& s) {
            if (pos >= toks.size() || toks[pos].text != s)
                throw ParseError("expected '" + s + "'", no,
                                 pos < toks.size() ? toks[pos].column : toks.back().column + 1);
            ++pos;
        };
        auto take_name = [&](const char* what) {
            if (pos >= toks.size() || !detail::valid_name(toks[pos].text))
                throw ParseError(std::string("expected ") + what, no,
                                 pos < toks.size() ? toks[pos].column : toks.back().column + 1);
            return toks[pos++];
        };
        auto end_of_line = [&] {
            if (pos != toks.size())
                throw ParseError("trailing tokens after axiom", no, toks[pos].column);
        };

        if (kw == "DEF") {
            auto lhs = take_name("concept name");
            if (!onto.concepts.count(lhs.text))
                throw ParseError("undeclared concept '" + lhs.text + "'", no, lhs.column);
            expect("=");
            detail::ExprParser p(toks, pos, no, onto);
            auto rhs = p.parse();
            end_of_line();
            onto.axioms.push_back(Definition{ConceptName{lhs.text}, std::move(rhs)});
        } else if (kw == "INC") {
            detail::ExprParser p(toks, pos, no, onto);
            auto lhs = p.parse();
            expect("<");
            detail::ExprParser q(toks, pos, no, onto);
            auto rhs = q.parse();
            end_of_line();
            onto.axioms.push_back(Inclusion{std::move(lhs), std::move(rhs)});
        } else if (kw == "ASSERT") {
            auto first = take_name("individual name");
            if (pos < toks.size() && toks[pos].text == ",") {
                ++pos;
                auto second = take_name("individual name");
                expect(":");
                auto role = take_name("role name");
                if (!onto.roles.count(role.text))
                    throw ParseError("undeclared role '" + role.text + "'", no, role.column);
                end_of_line();
                onto.axioms.push_back(RoleAssertion{first.text, second.text, RoleName{role.text}});
            } else {
                expect(":");
                auto cname = take_name("concept name");
                if (!onto.concepts.count(cname.text))
                    throw ParseError("undeclared concept '" + cname.text + "'", no, cname.column);
                end_of_line();
                onto.axioms.push_back(ConceptAssertion{first.text, ConceptName{cname.text}});
            }
        } else {
            throw ParseError("unknown record '" + kw + "'", no, toks[0].column);
        }
    }
    return onto;
}

inline Ontology parse_ontology(const std::string& text, std::string label = {}) {
    std::istringstream in(text);
    return parse_ontology(in, std::move(label));
}

// ---------------------------------------------------------------------------
// Serialization (canonical form; parse(serialize(o)) == o)
// ---------------------------------------------------------------------------

namespace detail {

inline void write_expr(std::ostream& os, const ConceptExpr::Ptr& e, bool parenthesize = false) {
    switch (e->kind) {
    case ConceptExpr::Kind::atomic:
        os << e->name;
        return;
    case ConceptExpr::Kind::neg:
        os << "NOT ";
        write_expr(os, e->lhs, true);
        return;
    case ConceptExpr::Kind::exists:
    case ConceptExpr::Kind::forall:
        os << (e->kind == ConceptExpr::Kind::exists ? "EXISTS " : "FORALL ") << e->name << " . ";
        write_expr(os, e->lhs, true);
        return;
    case ConceptExpr::Kind::conj:
    case ConceptExpr::Kind::disj: {
        if (parenthesize) os << "( ";
        write_expr(os, e->lhs, true);
        os << (e->kind == ConceptExpr::Kind::conj ? " AND " : " OR ");
        write_expr(os, e->rhs, true);
        if (parenthesize) os << " )";
        return;
    }
    }
}

} // namespace detail

inline std::string serialize_ontology(const Ontology& onto) {
    std::ostringstream os;
    for (const auto& c : onto.concepts) os << "CONCEPT " << c << "\n";
    for (const auto& r : onto.roles) os << "ROLE " << r << "\n";
    for (const auto& ax : onto.axioms) {
        std::visit(
            [&os](const auto& a) {
                using T = std::decay_t<decltype(a)>;
                if constexpr (std::is_same_v<T, Definition>) {
                    os << "DEF " << a.name.value << " = ";
                    detail::write_expr(os, a.rhs);
                } else if constexpr (std::is_same_v<T, Inclusion>) {
                    os << "INC ";
                    detail::write_expr(os, a.lhs);
                    os << " < ";
                    detail::write_expr(os, a.rhs);
                } else if constexpr (std::is_same_v<T, ConceptAssertion>) {
                    os << "ASSERT " << a.individual << " : " << a.concept_name.value;
                } else {
                    os << "ASSERT " << a.a << " , " << a.b << " : " << a.role.value;
                }
            },
            ax);
        os << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Verbalization
// ---------------------------------------------------------------------------

/// Template not covered by the verbalizer.
struct VerbalizationError : Error {
    using Error::Error;
};

namespace detail {

inline bool starts_with_vowel(const std::string& word) {
    if (word.empty()) return false;
    char c = static_cast<char>(std::tolower(static_cast<unsigned char>(word.front())));
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

inline const std::string& atomic_name(const ConceptExpr::Ptr& e, const char* side) {
    if (e->kind != ConceptExpr::Kind::atomic)
        throw VerbalizationError(std::string("unsupported ") + side + " expression: only atomic concepts and "
                                 "EXISTS over an atomic filler are template-covered");
    return e->name;
}

} // namespace detail

/// Renders the three template-covered axiom shapes:
///   Definition(A, B)              -> "A is-a B."
///   Inclusion(A, B)               -> "Every A is-a B."
///   Inclusion(A, EXISTS r . B)    -> "Every A r a B."  ("an" before a vowel)
/// Everything else raises VerbalizationError.
inline std::string verbalize_axiom(const Axiom& axiom) {
    if (const auto* def = std::get_if<Definition>(&axiom)) {
        return def->name.value + " is-a " + detail::atomic_name(def->rhs, "right-hand") + ".";
    }
    if (const auto* inc = std::get_if<Inclusion>(&axiom)) {
        const std::string& subject = detail::atomic_name(inc->lhs, "left-hand");
        if (inc->rhs->kind == ConceptExpr::Kind::exists) {
            const std::string& filler = detail::atomic_name(inc->rhs->lhs, "filler");
            const char* article = detail::starts_with_vowel(filler) ? "an" : "a";
            return "Every " + subject + " " + inc->rhs->name + " " + article + " " + filler + ".";
        }
        return "Every " + subject + " is-a " + detail::atomic_name(inc->rhs, "right-hand") + ".";
    }
    throw VerbalizationError("assertions are not verbalized");
}

/// One hypothesis per verbalizable TBox axiom, ids h1..hn in axiom order.
/// Axioms outside the template coverage are skipped and reported as warnings.
inline HypothesisSet generate_hypotheses(const Ontology& onto) {
    HypothesisSet out;
    for (std::size_t i = 0; i < onto.axioms.size(); ++i) {
        try {
            std::string text = verbalize_axiom(onto.axioms[i]);
            std::string id = "h" + std::to_string(out.hypotheses.size() + 1);
            out.hypotheses.push_back(Hypothesis{std::move(id), std::move(text), i});
        } catch (const VerbalizationError& e) {
            out.warnings.push_back(VerbalizationWarning{i, e.what()});
        }
    }
    return out;
}

} // namespace entente
