#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "entente/entailment.hpp"
#include "entente/errors.hpp"
#include "entente/strings.hpp"

namespace entente {

// ---------------------------------------------------------------------------
// Linguistic terms and relation kinds
// ---------------------------------------------------------------------------

enum class LinguisticTerm { weak = 0, medium = 1, strong = 2 };

inline const char* to_string(LinguisticTerm t) {
    switch (t) {
    case LinguisticTerm::weak: return "weak";
    case LinguisticTerm::medium: return "medium";
    case LinguisticTerm::strong: return "strong";
    }
    return "?";
}

inline LinguisticTerm parse_term(std::string_view s) {
    if (s == "weak") return LinguisticTerm::weak;
    if (s == "medium") return LinguisticTerm::medium;
    if (s == "strong") return LinguisticTerm::strong;
    throw Error("unknown linguistic term '" + std::string(s) + "'");
}

enum class RelationKind { agreement = 0, disagreement = 1, conflict = 2 };

inline const char* to_string(RelationKind k) {
    switch (k) {
    case RelationKind::agreement: return "Agreement";
    case RelationKind::disagreement: return "Disagreement";
    case RelationKind::conflict: return "Conflict";
    }
    return "?";
}

inline RelationKind parse_kind(std::string_view s) {
    std::string l = detail::to_lower(s);
    if (l == "agreement") return RelationKind::agreement;
    if (l == "disagreement") return RelationKind::disagreement;
    if (l == "conflict") return RelationKind::conflict;
    throw Error("unknown relation kind '" + std::string(s) + "'");
}

/// The commutative combination of two entailment labels: equal labels agree,
/// Entailed vs Contradicted conflict, and any pairing with Unknown disagrees.
inline RelationKind classify_relation(EntailmentLabel r1, EntailmentLabel r2) {
    if (r1 == r2) return RelationKind::agreement;
    bool ent = r1 == EntailmentLabel::entailed || r2 == EntailmentLabel::entailed;
    bool con = r1 == EntailmentLabel::contradicted || r2 == EntailmentLabel::contradicted;
    if (ent && con) return RelationKind::conflict;
    return RelationKind::disagreement;
}

// ---------------------------------------------------------------------------
// Piecewise-linear membership functions
// ---------------------------------------------------------------------------

/// A piecewise-linear function over [0,1] given by breakpoints. Supports the
/// three operations Mamdani inference needs: clipping (min with a constant),
/// pointwise max, and exact closed-form integration.
class PiecewiseLinear {
  public:
    struct Point {
        double x;
        double y;
        bool operator==(const Point&) const = default;
    };

    PiecewiseLinear() : pts_{{0.0, 0.0}, {1.0, 0.0}} {}

    explicit PiecewiseLinear(std::vector<Point> pts) : pts_(std::move(pts)) {
        if (pts_.size() < 2 || pts_.front().x != 0.0 || pts_.back().x != 1.0)
            throw Error("membership breakpoints must span [0,1]");
        for (std::size_t i = 1; i < pts_.size(); ++i)
            if (pts_[i].x <= pts_[i - 1].x)
                throw Error("membership breakpoints must be strictly increasing in x");
        for (const auto& p : pts_)
            if (p.y < 0.0 || p.y > 1.0) throw Error("membership values must lie in [0,1]");
    }

    const std::vector<Point>& points() const { return pts_; }

    double operator()(double x) const {
        if (x <= pts_.front().x) return pts_.front().y;
        if (x >= pts_.back().x) return pts_.back().y;
        auto it = std::upper_bound(pts_.begin(), pts_.end(), x,
                                   [](double v, const Point& p) { return v < p.x; });
        const Point& b = *it;
        const Point& a = *std::prev(it);
        double t = (x - a.x) / (b.x - a.x);
        return a.y + t * (b.y - a.y);
    }

    /// min(f, alpha), with crossing points inserted.
    PiecewiseLinear clipped(double alpha) const {
        std::vector<Point> out;
        for (std::size_t i = 0; i + 1 < pts_.size(); ++i) {
            const Point& a = pts_[i];
            const Point& b = pts_[i + 1];
            out.push_back({a.x, std::min(a.y, alpha)});
            bool above_a = a.y > alpha;
            bool above_b = b.y > alpha;
            if (above_a != above_b) {
                double t = (alpha - a.y) / (b.y - a.y);
                double x = a.x + t * (b.x - a.x);
                if (x > a.x && x < b.x) out.push_back({x, alpha});
            }
        }
        out.push_back({pts_.back().x, std::min(pts_.back().y, alpha)});
        return from_raw(std::move(out));
    }

    /// Pointwise maximum of two functions.
    PiecewiseLinear max_with(const PiecewiseLinear& other) const {
        std::vector<double> xs;
        for (const auto& p : pts_) xs.push_back(p.x);
        for (const auto& p : other.pts_) xs.push_back(p.x);
        // segment intersections
        for (std::size_t i = 0; i + 1 < pts_.size(); ++i)
            for (std::size_t j = 0; j + 1 < other.pts_.size(); ++j) {
                double lo = std::max(pts_[i].x, other.pts_[j].x);
                double hi = std::min(pts_[i + 1].x, other.pts_[j + 1].x);
                if (lo >= hi) continue;
                double fa = (*this)(lo)-other(lo);
                double fb = (*this)(hi)-other(hi);
                if ((fa < 0 && fb > 0) || (fa > 0 && fb < 0)) {
                    double t = fa / (fa - fb);
                    xs.push_back(lo + t * (hi - lo));
                }
            }
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        std::vector<Point> out;
        out.reserve(xs.size());
        for (double x : xs) out.push_back({x, std::max((*this)(x), other(x))});
        return from_raw(std::move(out));
    }

    /// Integral of the function over [0,1], closed form per segment.
    double area() const {
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < pts_.size(); ++i)
            acc += 0.5 * (pts_[i].y + pts_[i + 1].y) * (pts_[i + 1].x - pts_[i].x);
        return acc;
    }

    /// Integral of x * f(x) over [0,1], closed form per segment.
    double moment() const {
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < pts_.size(); ++i) {
            double x0 = pts_[i].x, y0 = pts_[i].y;
            double x1 = pts_[i + 1].x, y1 = pts_[i + 1].y;
            if (x1 == x0) continue;
            double m = (y1 - y0) / (x1 - x0);
            double b = y0 - m * x0;
            auto F = [&](double x) { return m * x * x * x / 3.0 + b * x * x / 2.0; };
            acc += F(x1) - F(x0);
        }
        return acc;
    }

    bool operator==(const PiecewiseLinear&) const = default;

  private:
    static PiecewiseLinear from_raw(std::vector<Point> pts) {
        // collapse duplicate x values that clipping/max may introduce
        std::vector<Point> clean;
        for (auto& p : pts)
            if (clean.empty() || p.x > clean.back().x + 1e-15) clean.push_back(p);
        PiecewiseLinear out;
        out.pts_ = std::move(clean);
        return out;
    }

    std::vector<Point> pts_;
};

/// Center-of-gravity of the aggregated output set.
inline double defuzzify_centroid(const PiecewiseLinear& aggregated) {
    double a = aggregated.area();
    if (a <= 0.0) throw Error("cannot defuzzify a zero-area membership set");
    return aggregated.moment() / a;
}

// ---------------------------------------------------------------------------
// Linguistic variables
// ---------------------------------------------------------------------------

constexpr std::array<LinguisticTerm, 3> kAllTerms = {LinguisticTerm::weak, LinguisticTerm::medium,
                                                     LinguisticTerm::strong};

/// Three-term variable (weak / medium / strong) over [0,1].
struct LinguisticVariable {
    std::string name;
    std::array<PiecewiseLinear, 3> terms; // indexed by LinguisticTerm

    const PiecewiseLinear& term(LinguisticTerm t) const { return terms[static_cast<int>(t)]; }

    std::array<double, 3> memberships(double x) const {
        return {terms[0](x), terms[1](x), terms[2](x)};
    }

    /// Checks that every crisp value is covered by at least one term.
    void validate() const {
        for (int i = 0; i <= 1000; ++i) {
            double x = i / 1000.0;
            auto m = memberships(x);
            if (std::max({m[0], m[1], m[2]}) <= 0.0)
                throw Error("variable '" + name + "' leaves x=" + std::to_string(x) + " uncovered");
        }
    }
};

/// Argmax term with its membership value.
struct Fuzzified {
    LinguisticTerm term = LinguisticTerm::weak;
    double degree = 0.0;

    bool operator==(const Fuzzified&) const = default;
};

/// Maps a crisp confidence to its dominant term. Ties resolve toward the
/// stronger term.
inline Fuzzified fuzzify(const LinguisticVariable& variable, double crisp) {
    if (crisp < 0.0 || crisp > 1.0) throw Error("fuzzify input out of [0,1]");
    auto m = variable.memberships(crisp);
    Fuzzified out{LinguisticTerm::weak, m[0]};
    for (int i = 1; i < 3; ++i)
        if (m[i] >= out.degree) out = {static_cast<LinguisticTerm>(i), m[i]};
    return out;
}

/// Crisp confidence classified with its entailment label.
struct FuzzifiedDecision {
    EntailmentLabel label = EntailmentLabel::unknown;
    LinguisticTerm term = LinguisticTerm::weak;
    double degree = 0.0;

    bool operator==(const FuzzifiedDecision&) const = default;
};

inline FuzzifiedDecision fuzzify_decision(const LinguisticVariable& variable,
                                          const EntailmentDecision& d) {
    auto f = fuzzify(variable, d.confidence);
    return {d.label, f.term, f.degree};
}

// ---------------------------------------------------------------------------
// Rules
// ---------------------------------------------------------------------------

struct RuleAtom {
    EntailmentLabel label;
    LinguisticTerm term;
    bool operator==(const RuleAtom&) const = default;
    auto operator<=>(const RuleAtom&) const = default;
};

/// "IF <label> is <term> AND <label> is <term> THEN <kind> is <term>".
/// The antecedent pair is unordered: rules fire for either assignment of
/// the two agents.
struct FuzzyRule {
    std::string name;
    RuleAtom a;
    RuleAtom b;
    RelationKind kind;
    LinguisticTerm consequent;
};

struct FiredRule {
    std::string name;
    double strength = 0.0;
    LinguisticTerm consequent = LinguisticTerm::weak;

    bool operator==(const FiredRule&) const = default;
};

/// Fuzzy-classified relation between the two agents' decisions.
struct SituationAssessment {
    RelationKind kind = RelationKind::agreement;
    LinguisticTerm term = LinguisticTerm::weak;
    double degree = 0.0;

    bool operator==(const SituationAssessment&) const = default;
};

inline std::string to_display(const SituationAssessment& s) {
    return std::string(to_string(s.term)) + " " + to_string(s.kind);
}

struct InferenceResult {
    SituationAssessment assessment;
    std::vector<FiredRule> fired; // strength-descending, config order on ties
};

// ---------------------------------------------------------------------------
// Knowledge base
// ---------------------------------------------------------------------------

/// Input variable, per-relation output variables and a total rule base.
class FuzzyKnowledgeBase {
  public:
    FuzzyKnowledgeBase(LinguisticVariable input,
                       std::map<RelationKind, LinguisticVariable> outputs,
                       std::vector<FuzzyRule> rules)
        : input_(std::move(input)), outputs_(std::move(outputs)), rules_(std::move(rules)) {
        input_.validate();
        for (auto kind : {RelationKind::agreement, RelationKind::disagreement, RelationKind::conflict}) {
            auto it = outputs_.find(kind);
            if (it == outputs_.end())
                throw Error(std::string("missing output variable for ") + to_string(kind));
            it->second.validate();
        }
        validate_rules();
    }

    const LinguisticVariable& input() const { return input_; }
    const LinguisticVariable& output(RelationKind k) const { return outputs_.at(k); }
    const std::vector<FuzzyRule>& rules() const { return rules_; }

    /// Mamdani inference over the two decisions: fires every rule matching
    /// the label pair with strength min over memberships, clips consequents,
    /// aggregates by max and defuzzifies by centroid. The reported term is
    /// the argmax of the output variable at the centroid.
    InferenceResult infer(const EntailmentDecision& d1, const EntailmentDecision& d2) const {
        RelationKind kind = classify_relation(d1.label, d2.label);
        auto m1 = input_.memberships(d1.confidence);
        auto m2 = input_.memberships(d2.confidence);

        const LinguisticVariable& out = outputs_.at(kind);
        PiecewiseLinear aggregate;
        std::vector<FiredRule> fired;
        for (const auto& rule : rules_) {
            if (rule.kind != kind) continue;
            double s = 0.0;
            if (d1.label == rule.a.label && d2.label == rule.b.label)
                s = std::max(s, std::min(m1[static_cast<int>(rule.a.term)],
                                         m2[static_cast<int>(rule.b.term)]));
            if (d1.label == rule.b.label && d2.label == rule.a.label)
                s = std::max(s, std::min(m1[static_cast<int>(rule.b.term)],
                                         m2[static_cast<int>(rule.a.term)]));
            if (s <= 0.0) continue;
            fired.push_back({rule.name, s, rule.consequent});
            aggregate = aggregate.max_with(out.term(rule.consequent).clipped(s));
        }
        if (fired.empty())
            throw Error("no rule fired; rule base is not total"); // unreachable after validate
        double degree = defuzzify_centroid(aggregate);
        LinguisticTerm term = fuzzify(out, degree).term;
        std::stable_sort(fired.begin(), fired.end(),
                         [](const FiredRule& x, const FiredRule& y) { return x.strength > y.strength; });
        return {SituationAssessment{kind, term, degree}, std::move(fired)};
    }

  private:
    void validate_rules() const {
        // every unordered pair of (label, term) atoms exactly once, with the
        // consequent kind matching the label pair's relation
        std::map<std::pair<RuleAtom, RuleAtom>, const FuzzyRule*> seen;
        for (const auto& rule : rules_) {
            if (rule.kind != classify_relation(rule.a.label, rule.b.label))
                throw Error("rule '" + rule.name + "' consequent kind contradicts its label pair");
            auto key = std::minmax(rule.a, rule.b);
            if (!seen.emplace(std::make_pair(key.first, key.second), &rule).second)
                throw Error("duplicate rule for antecedent of '" + rule.name + "'");
        }
        std::size_t expected = 0;
        std::array<EntailmentLabel, 3> labels = {EntailmentLabel::entailed,
                                                 EntailmentLabel::contradicted,
                                                 EntailmentLabel::unknown};
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j)
                expected += (i == j) ? 6 : 9;
        if (seen.size() != expected)
            throw Error("rule base is not total: " + std::to_string(seen.size()) + " of " +
                        std::to_string(expected) + " antecedent combinations covered");
        (void)labels;
    }

    LinguisticVariable input_;
    std::map<RelationKind, LinguisticVariable> outputs_;
    std::vector<FuzzyRule> rules_;
};

inline InferenceResult infer(const FuzzyKnowledgeBase& fkb, const EntailmentDecision& d1,
                             const EntailmentDecision& d2) {
    return fkb.infer(d1, d2);
}

// ---------------------------------------------------------------------------
// Config file
// ---------------------------------------------------------------------------

/// Parses the declarative knowledge-base format:
///
///   VAR certainty
///     TERM weak 0:1 0.2:1 0.45:0 1:0
///     ...
///   RULE R1: IF ENT is strong AND ENT is medium THEN agreement is medium
///
/// The input variable must be named "certainty"; output variables are named
/// after the relation they grade.
inline FuzzyKnowledgeBase parse_fuzzy_config(std::istream& in) {
    std::map<std::string, LinguisticVariable> vars;
    std::vector<FuzzyRule> rules;
    std::string current_var;
    std::array<bool, 3> have_term{};
    int rule_auto_index = 1;

    auto finish_var = [&](const std::string& name) {
        if (name.empty()) return;
        if (!have_term[0] || !have_term[1] || !have_term[2])
            throw Error("variable '" + name + "' must define weak, medium and strong");
    };

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        std::istringstream ls{std::string(t)};
        std::string kw;
        ls >> kw;

        if (kw == "VAR") {
            finish_var(current_var);
            std::string name;
            ls >> name;
            if (name.empty()) throw ParseError("VAR needs a name", line_no, 1);
            if (vars.count(name)) throw ParseError("duplicate variable '" + name + "'", line_no, 1);
            vars[name].name = name;
            current_var = name;
            have_term = {};
        } else if (kw == "TERM") {
            if (current_var.empty()) throw ParseError("TERM outside of VAR", line_no, 1);
            std::string term_name;
            ls >> term_name;
            LinguisticTerm term = parse_term(term_name);
            std::vector<PiecewiseLinear::Point> pts;
            std::string bp;
            while (ls >> bp) {
                auto colon = bp.find(':');
                if (colon == std::string::npos)
                    throw ParseError("breakpoint must be x:mu", line_no, 1);
                pts.push_back({std::stod(bp.substr(0, colon)), std::stod(bp.substr(colon + 1))});
            }
            vars[current_var].terms[static_cast<int>(term)] = PiecewiseLinear(std::move(pts));
            have_term[static_cast<int>(term)] = true;
        } else if (kw == "RULE") {
            std::string rest{detail::trim(std::string(t).substr(4))};
            std::string name;
            auto colon = rest.find(':');
            auto if_pos = rest.find("IF ");
            if (colon != std::string::npos && (if_pos == std::string::npos || colon < if_pos)) {
                name = std::string(detail::trim(rest.substr(0, colon)));
                rest = std::string(detail::trim(rest.substr(colon + 1)));
            } else {
                name = "rule" + std::to_string(rule_auto_index);
            }
            ++rule_auto_index;
            std::istringstream rs(rest);
            std::string w_if, l1, w_is1, t1, w_and, l2, w_is2, t2, w_then, kind_s, w_is3, t3;
            rs >> w_if >> l1 >> w_is1 >> t1 >> w_and >> l2 >> w_is2 >> t2 >> w_then >> kind_s >>
                w_is3 >> t3;
            if (w_if != "IF" || w_is1 != "is" || w_and != "AND" || w_is2 != "is" ||
                w_then != "THEN" || w_is3 != "is")
                throw ParseError("rule must read: IF <label> is <term> AND <label> is <term> "
                                 "THEN <kind> is <term>",
                                 line_no, 1);
            FuzzyRule rule;
            rule.name = name;
            rule.a = {parse_label(l1), parse_term(t1)};
            rule.b = {parse_label(l2), parse_term(t2)};
            rule.kind = parse_kind(kind_s);
            rule.consequent = parse_term(t3);
            rules.push_back(std::move(rule));
        } else {
            throw ParseError("unknown directive '" + kw + "'", line_no, 1);
        }
    }
    finish_var(current_var);

    auto take_var = [&](const std::string& name) {
        auto it = vars.find(name);
        if (it == vars.end()) throw Error("fuzzy config does not define variable '" + name + "'");
        return it->second;
    };
    LinguisticVariable input = take_var("certainty");
    std::map<RelationKind, LinguisticVariable> outputs;
    outputs[RelationKind::agreement] = take_var("agreement");
    outputs[RelationKind::disagreement] = take_var("disagreement");
    outputs[RelationKind::conflict] = take_var("conflict");
    return FuzzyKnowledgeBase(std::move(input), std::move(outputs), std::move(rules));
}

inline FuzzyKnowledgeBase parse_fuzzy_config(const std::string& text) {
    std::istringstream in(text);
    return parse_fuzzy_config(in);
}

/// The default knowledge base: membership families calibrated against the
/// published anchor values, the ten named sample rules, and a completion
/// assigning each remaining antecedent the weaker of its two strengths.
std::string default_fuzzy_config_text();

inline const FuzzyKnowledgeBase& default_fuzzy_knowledge_base() {
    static const FuzzyKnowledgeBase fkb = parse_fuzzy_config(default_fuzzy_config_text());
    return fkb;
}

} // namespace entente

#include "entente/fuzzy_defaults.hpp"
