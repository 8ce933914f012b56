#pragma once

#include <string>
#include <vector>

#include "seqrule/rule.hpp"

namespace seqrule {

/// A variable a CNF clause can reference: a (scope, code) pair, plus the
/// temporal selector when the scope is history.
struct CnfVariable {
  std::string name;
  Scope scope = Scope::kCurrent;
  int code = 0;
  TemporalComponent temporal;  // meaningful only for history scope
};

struct CnfLiteral {
  int var = 0;  // index into variables
  bool negated = false;
};

using CnfClause = std::vector<CnfLiteral>;

/// CNF over named variables: the conjunction of clauses, each a disjunction
/// of signed variable references.
struct CnfExpr {
  int vocab_size = 0;
  std::vector<CnfVariable> variables;
  std::vector<CnfClause> clauses;
};

/// Text format:
///
///   VOCAB <n>            (optional; defaults to max code + 1)
///   VAR <name> cur <code>
///   VAR <name> past <code>        (history over all past steps)
///   VAR <name> past[<tc>] <code>
///   CLAUSE <±name> <±name> ...    (`-` prefix negates)
///
/// `#` starts a comment. Throws ParseError on bad input.
CnfExpr parse_cnf(const std::string& text);

/// CNF-to-entailment conversion: clause a_1 v ... v a_m becomes the rule
/// !a_1 ^ ... ^ !a_{m-1} => a_m, with a negated consequent encoded as an
/// alpha = 0 output. The returned set is logically equivalent to the CNF.
/// Tautological clauses (containing x and !x) impose no constraint and
/// produce no rule. Each clause's last literal must be current-scope, and
/// history literals within one clause must share one temporal selector.
RuleSet cnf_to_rules(const CnfExpr& expr);

}  // namespace seqrule
