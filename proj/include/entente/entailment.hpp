#pragma once

#include <algorithm>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "entente/errors.hpp"
#include "entente/ontology.hpp"
#include "entente/strings.hpp"

namespace entente {

// ---------------------------------------------------------------------------
// Labels and decisions
// ---------------------------------------------------------------------------

enum class EntailmentLabel { entailed, contradicted, unknown };

inline const char* to_string(EntailmentLabel l) {
    switch (l) {
    case EntailmentLabel::entailed: return "ENT";
    case EntailmentLabel::contradicted: return "CONTR";
    case EntailmentLabel::unknown: return "UNK";
    }
    return "?";
}

inline EntailmentLabel parse_label(std::string_view s) {
    if (s == "ENT") return EntailmentLabel::entailed;
    if (s == "CONTR") return EntailmentLabel::contradicted;
    if (s == "UNK") return EntailmentLabel::unknown;
    throw Error("unknown entailment label '" + std::string(s) + "' (expected ENT, CONTR or UNK)");
}

/// One agent's verdict on one hypothesis.
struct EntailmentDecision {
    EntailmentLabel label = EntailmentLabel::unknown;
    double confidence = 0.0; // in [0,1]

    bool operator==(const EntailmentDecision&) const = default;
};

inline EntailmentDecision make_decision(EntailmentLabel label, double confidence) {
    if (confidence < 0.0 || confidence > 1.0)
        throw Error("decision confidence out of [0,1]");
    return EntailmentDecision{label, confidence};
}

// ---------------------------------------------------------------------------
// Corpora
// ---------------------------------------------------------------------------

/// An entailing text T paired with the hypothesis it was collected for.
struct TextHypothesisPair {
    std::string pair_id;
    std::string hypothesis_id;
    std::string text;
    std::optional<EntailmentLabel> gold_label;

    bool operator==(const TextHypothesisPair&) const = default;
};

/// One agent's private training material.
struct Corpus {
    std::string owner;
    std::vector<TextHypothesisPair> pairs;

    bool contains(const std::string& pair_id) const {
        return std::any_of(pairs.begin(), pairs.end(),
                           [&](const auto& p) { return p.pair_id == pair_id; });
    }
    bool operator==(const Corpus&) const = default;
};

/// Reads the tab-separated corpus format:
///   pair_id <TAB> hypothesis_id <TAB> gold_label|"-" <TAB> text
inline Corpus ingest_corpus(std::istream& in, std::string owner = {}) {
    Corpus corpus;
    corpus.owner = std::move(owner);
    std::set<std::string> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        auto fields = detail::split(line, '\t');
        if (fields.size() != 4)
            throw ParseError("corpus record needs 4 tab-separated fields, got " +
                                 std::to_string(fields.size()),
                             line_no, 1);
        TextHypothesisPair pair;
        pair.pair_id = std::string(detail::trim(fields[0]));
        pair.hypothesis_id = std::string(detail::trim(fields[1]));
        std::string gold{detail::trim(fields[2])};
        pair.text = std::string(detail::trim(fields[3]));
        if (pair.pair_id.empty() || pair.text.empty())
            throw ParseError("empty pair_id or text", line_no, 1);
        if (gold != "-") pair.gold_label = parse_label(gold);
        if (!seen.insert(pair.pair_id).second)
            throw ParseError("duplicate pair_id '" + pair.pair_id + "'", line_no, 1);
        corpus.pairs.push_back(std::move(pair));
    }
    return corpus;
}

/// Returns a new corpus extended with every sample whose pair_id is new.
/// The receiver is left untouched.
inline Corpus merge_samples(const Corpus& receiver, const std::vector<TextHypothesisPair>& samples) {
    Corpus merged = receiver;
    std::set<std::string> ids;
    for (const auto& p : merged.pairs) ids.insert(p.pair_id);
    for (const auto& s : samples)
        if (ids.insert(s.pair_id).second) merged.pairs.push_back(s);
    return merged;
}

// ---------------------------------------------------------------------------
// Recorded oracle script
// ---------------------------------------------------------------------------

/// Replays pre-recorded decisions keyed by (agent, hypothesis, round).
/// A lookup at round r falls back to the greatest recorded round <= r.
struct OracleScript {
    // (agent, hypothesis) -> round -> decision
    std::map<std::pair<std::string, std::string>, std::map<int, EntailmentDecision>> entries;

    void add(const std::string& agent, const std::string& hyp, int round, EntailmentDecision d) {
        entries[{agent, hyp}][round] = d;
    }

    EntailmentDecision lookup(const std::string& agent, const std::string& hyp, int round) const {
        auto it = entries.find({agent, hyp});
        if (it == entries.end() || it->second.empty() || it->second.begin()->first != 0)
            throw Error("oracle script has no round-0 entry for agent '" + agent +
                        "', hypothesis '" + hyp + "'");
        const auto& rounds = it->second;
        auto up = rounds.upper_bound(round);
        if (up == rounds.begin())
            throw Error("oracle script lookup before round 0");
        return std::prev(up)->second;
    }
};

/// Reads the tab-separated script format:
///   agent_id <TAB> hypothesis_id <TAB> round <TAB> label <TAB> confidence
inline OracleScript parse_oracle_script(std::istream& in) {
    OracleScript script;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        auto fields = detail::split(line, '\t');
        if (fields.size() != 5)
            throw ParseError("script record needs 5 tab-separated fields", line_no, 1);
        try {
            int round = std::stoi(fields[2]);
            if (round < 0) throw Error("negative round");
            double conf = std::stod(fields[4]);
            script.add(std::string(detail::trim(fields[0])), std::string(detail::trim(fields[1])),
                       round, make_decision(parse_label(detail::trim(fields[3])), conf));
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            throw ParseError("malformed script record", line_no, 1);
        }
    }
    return script;
}

// ---------------------------------------------------------------------------
// Lexical baseline
// ---------------------------------------------------------------------------

/// Fixed word lists backing the lexical-overlap baseline. The same lists
/// ship as data files under fixtures/lexicon for external tooling.
struct Lexicon {
    std::set<std::string> stopwords;
    std::vector<std::string> negation_cues;
    int negation_window = 3;

    static const Lexicon& builtin() {
        static const Lexicon lex = [] {
            Lexicon l;
            for (const char* w :
                 {"a",    "an",   "and",  "are",   "as",    "at",    "be",    "been",  "but",
                  "by",   "can",  "could","did",   "do",    "does",  "for",   "from",  "had",
                  "has",  "have", "he",   "her",   "his",   "if",    "in",    "into",  "is",
                  "it",   "its",  "may",  "might", "of",    "on",    "or",    "s",     "shall",
                  "she",  "should","that","the",   "their", "them",  "then",  "there", "these",
                  "they", "this", "those","to",    "was",   "we",    "were",  "what",  "when",
                  "which","who",  "will", "with",  "would"})
                l.stopwords.insert(w);
            l.negation_cues = {"no", "not", "were not", "ineffective", "no correlation"};
            return l;
        }();
        return lex;
    }

    static Lexicon load(std::istream& stopwords_in, std::istream& cues_in) {
        Lexicon l;
        std::string line;
        while (std::getline(stopwords_in, line)) {
            auto t = detail::trim(line);
            if (!t.empty() && t.front() != '#') l.stopwords.insert(detail::to_lower(t));
        }
        while (std::getline(cues_in, line)) {
            auto t = detail::trim(line);
            if (!t.empty() && t.front() != '#') l.negation_cues.push_back(detail::to_lower(t));
        }
        return l;
    }
};

namespace detail {

inline std::set<std::string> content_tokens(std::string_view text, const Lexicon& lex) {
    std::set<std::string> out;
    for (auto& t : word_tokens(text))
        if (!lex.stopwords.count(t)) out.insert(std::move(t));
    return out;
}

/// Token-overlap score between a text and a hypothesis: shared content
/// tokens over the hypothesis' content tokens.
inline double overlap_score(std::string_view text, std::string_view hypothesis, const Lexicon& lex) {
    auto ch = content_tokens(hypothesis, lex);
    if (ch.empty()) return 0.0;
    auto ct = content_tokens(text, lex);
    std::size_t shared = 0;
    for (const auto& t : ch) shared += ct.count(t);
    return static_cast<double>(shared) / static_cast<double>(ch.size());
}

/// True when a negation cue occurs within `window` raw tokens of a token
/// shared with the hypothesis. Cues are matched on the raw token stream,
/// before stop-word removal, so "not" and friends are still visible.
inline bool negation_adjoins_overlap(std::string_view text, std::string_view hypothesis,
                                     const Lexicon& lex) {
    auto raw = word_tokens(text);
    auto ch = content_tokens(hypothesis, lex);
    auto ct = content_tokens(text, lex);
    std::set<std::string> shared;
    for (const auto& t : ch)
        if (ct.count(t)) shared.insert(t);
    if (shared.empty()) return false;

    for (const auto& cue : lex.negation_cues) {
        auto cue_toks = word_tokens(cue);
        if (cue_toks.empty() || cue_toks.size() > raw.size()) continue;
        for (std::size_t i = 0; i + cue_toks.size() <= raw.size(); ++i) {
            if (!std::equal(cue_toks.begin(), cue_toks.end(), raw.begin() + i)) continue;
            std::size_t lo = i >= static_cast<std::size_t>(lex.negation_window)
                                 ? i - lex.negation_window
                                 : 0;
            std::size_t hi = std::min(raw.size(), i + cue_toks.size() + lex.negation_window);
            for (std::size_t p = lo; p < hi; ++p)
                if (shared.count(raw[p])) return true;
        }
    }
    return false;
}

} // namespace detail

/// Lexical-overlap baseline. Scores the hypothesis against the best-matching
/// corpus text; a negation cue adjoining shared tokens flips the verdict to
/// Contradicted. Empty or unrelated corpora yield (Unknown, 1.0).
inline EntailmentDecision lexical_decide(const Hypothesis& hypothesis, const Corpus& corpus,
                                         const Lexicon& lex = Lexicon::builtin()) {
    const TextHypothesisPair* best = nullptr;
    double best_score = 0.0;
    for (const auto& pair : corpus.pairs) {
        double s = detail::overlap_score(pair.text, hypothesis.text, lex);
        if (s == 0.0 && pair.hypothesis_id != hypothesis.id) continue;
        if (!best || s > best_score || (s == best_score && pair.pair_id < best->pair_id)) {
            best = &pair;
            best_score = s;
        }
    }
    if (!best || best_score == 0.0)
        return EntailmentDecision{EntailmentLabel::unknown, 1.0};
    if (detail::negation_adjoins_overlap(best->text, hypothesis.text, lex))
        return EntailmentDecision{EntailmentLabel::contradicted, best_score};
    if (best_score >= 0.5)
        return EntailmentDecision{EntailmentLabel::entailed, best_score};
    return EntailmentDecision{EntailmentLabel::unknown, 1.0 - best_score};
}

// ---------------------------------------------------------------------------
// Oracle interface
// ---------------------------------------------------------------------------

/// Produces one agent's decision about one hypothesis. Implementations must
/// be pure given (agent, hypothesis, corpus, round).
class Oracle {
  public:
    virtual ~Oracle() = default;
    virtual EntailmentDecision decide(const std::string& agent, const Hypothesis& hypothesis,
                                      const Corpus& corpus, int round) const = 0;
    virtual std::string mode() const = 0;
};

class RecordedOracle final : public Oracle {
  public:
    explicit RecordedOracle(OracleScript script) : script_(std::move(script)) {}

    EntailmentDecision decide(const std::string& agent, const Hypothesis& hypothesis,
                              const Corpus&, int round) const override {
        return script_.lookup(agent, hypothesis.id, round);
    }
    std::string mode() const override { return "recorded"; }

  private:
    OracleScript script_;
};

class LexicalOracle final : public Oracle {
  public:
    explicit LexicalOracle(Lexicon lex = Lexicon::builtin()) : lex_(std::move(lex)) {}

    EntailmentDecision decide(const std::string&, const Hypothesis& hypothesis,
                              const Corpus& corpus, int) const override {
        return lexical_decide(hypothesis, corpus, lex_);
    }
    std::string mode() const override { return "lexical"; }

    const Lexicon& lexicon() const { return lex_; }

  private:
    Lexicon lex_;
};

inline EntailmentDecision oracle_decide(const Oracle& oracle, const std::string& agent,
                                        const Hypothesis& hypothesis, const Corpus& corpus,
                                        int round) {
    if (round < 0) throw PreconditionError("round must be non-negative");
    return oracle.decide(agent, hypothesis, corpus, round);
}

} // namespace entente
