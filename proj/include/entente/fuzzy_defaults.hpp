#pragma once

#include <string>

namespace entente {

/// Text of the shipped default knowledge base (identical to the
/// fixtures/paper/fuzzy.fkb data file).
inline std::string default_fuzzy_config_text() {
    return R"FKB(# Default fuzzy knowledge base for grading agreement, disagreement and
# conflict between two entailment decisions.
#
# Variables are piecewise-linear over [0,1], breakpoints given as x:mu.
# 'certainty' grades the agents' confidences; the other three grade the
# inferred relation of the matching kind.

VAR certainty
  TERM weak   0:1 0.2:1 0.45:0 1:0
  TERM medium 0:0 0.3:0 0.55:1 0.8:0 1:0
  TERM strong 0:0 0.4:0 0.885:1 1:1

VAR agreement
  TERM weak   0:1 0.15:1 0.5:0 1:0
  TERM medium 0:0 0.45:0 0.8:1 0.99:0 1:0
  TERM strong 0:0 0.82:0 0.99:1 1:1

VAR disagreement
  TERM weak   0:1 0.1:1 0.45:0 1:0
  TERM medium 0:0 0.2:0 0.5:1 0.8:0 1:0
  TERM strong 0:0 0.55:0 0.9:1 1:1

VAR conflict
  TERM weak   0:1 0.1:1 0.45:0 1:0
  TERM medium 0:0 0.2:0 0.5:1 0.8:0 1:0
  TERM strong 0:0 0.55:0 0.9:1 1:1

# Named sample rules.
RULE R1: IF ENT is strong AND ENT is medium THEN agreement is medium
RULE R2: IF ENT is medium AND ENT is medium THEN agreement is strong
RULE R3: IF ENT is strong AND ENT is weak THEN agreement is weak
RULE R4: IF ENT is strong AND UNK is medium THEN disagreement is medium
RULE R5: IF CONTR is strong AND UNK is strong THEN disagreement is strong
RULE R6: IF UNK is weak AND ENT is strong THEN disagreement is weak
RULE R7: IF CONTR is strong AND ENT is strong THEN conflict is strong
RULE R8: IF CONTR is medium AND ENT is weak THEN conflict is weak
RULE R9: IF CONTR is medium AND ENT is strong THEN conflict is medium
RULE R10: IF CONTR is weak AND ENT is strong THEN conflict is weak

# Completion: every remaining antecedent combination, graded by the
# weaker of its two term strengths.
RULE K11: IF ENT is weak AND ENT is weak THEN agreement is weak
RULE K12: IF ENT is weak AND ENT is medium THEN agreement is weak
RULE K13: IF ENT is strong AND ENT is strong THEN agreement is strong
RULE K14: IF CONTR is weak AND CONTR is weak THEN agreement is weak
RULE K15: IF CONTR is weak AND CONTR is medium THEN agreement is weak
RULE K16: IF CONTR is weak AND CONTR is strong THEN agreement is weak
RULE K17: IF CONTR is medium AND CONTR is medium THEN agreement is medium
RULE K18: IF CONTR is medium AND CONTR is strong THEN agreement is medium
RULE K19: IF CONTR is strong AND CONTR is strong THEN agreement is strong
RULE K20: IF UNK is weak AND UNK is weak THEN agreement is weak
RULE K21: IF UNK is weak AND UNK is medium THEN agreement is weak
RULE K22: IF UNK is weak AND UNK is strong THEN agreement is weak
RULE K23: IF UNK is medium AND UNK is medium THEN agreement is medium
RULE K24: IF UNK is medium AND UNK is strong THEN agreement is medium
RULE K25: IF UNK is strong AND UNK is strong THEN agreement is strong
RULE K26: IF ENT is weak AND UNK is weak THEN disagreement is weak
RULE K27: IF ENT is weak AND UNK is medium THEN disagreement is weak
RULE K28: IF ENT is weak AND UNK is strong THEN disagreement is weak
RULE K29: IF ENT is medium AND UNK is weak THEN disagreement is weak
RULE K30: IF ENT is medium AND UNK is medium THEN disagreement is medium
RULE K31: IF ENT is medium AND UNK is strong THEN disagreement is medium
RULE K32: IF ENT is strong AND UNK is strong THEN disagreement is strong
RULE K33: IF CONTR is weak AND UNK is weak THEN disagreement is weak
RULE K34: IF CONTR is weak AND UNK is medium THEN disagreement is weak
RULE K35: IF CONTR is weak AND UNK is strong THEN disagreement is weak
RULE K36: IF CONTR is medium AND UNK is weak THEN disagreement is weak
RULE K37: IF CONTR is medium AND UNK is medium THEN disagreement is medium
RULE K38: IF CONTR is medium AND UNK is strong THEN disagreement is medium
RULE K39: IF CONTR is strong AND UNK is weak THEN disagreement is weak
RULE K40: IF CONTR is strong AND UNK is medium THEN disagreement is medium
RULE K41: IF ENT is weak AND CONTR is weak THEN conflict is weak
RULE K42: IF ENT is weak AND CONTR is strong THEN conflict is weak
RULE K43: IF ENT is medium AND CONTR is weak THEN conflict is weak
RULE K44: IF ENT is medium AND CONTR is medium THEN conflict is medium
RULE K45: IF ENT is medium AND CONTR is strong THEN conflict is medium
)FKB";
}

} // namespace entente
