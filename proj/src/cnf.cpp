#include "seqrule/cnf.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "seqrule/dsl.hpp"

namespace seqrule {

namespace {

TemporalComponent parse_selector(const std::string& body, int line, int col) {
  TemporalComponent tc;
  std::stringstream ss(body);
  std::string item;
  bool saw_any = false;
  while (std::getline(ss, item, ',')) {
    saw_any = true;
    if (item == "*") {
      tc.set_all_past(true);
      continue;
    }
    try {
      std::size_t used = 0;
      int k = std::stoi(item, &used);
      if (used != item.size() || k == 0) throw std::invalid_argument("");
      tc.add_index(k);
    } catch (const std::exception&) {
      throw ParseError(line, col, "bad temporal selector '" + item + "'");
    }
  }
  if (!saw_any) throw ParseError(line, col, "empty temporal selector");
  return tc;
}

}  // namespace

CnfExpr parse_cnf(const std::string& text) {
  CnfExpr expr;
  std::map<std::string, int> by_name;
  int max_code = -1;
  bool have_vocab = false;

  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string word;
    std::vector<std::string> tokens;
    while (ls >> word) {
      if (word[0] == '#') break;
      tokens.push_back(word);
    }
    if (tokens.empty()) continue;

    if (tokens[0] == "VOCAB") {
      if (tokens.size() != 2) throw ParseError(line_no, 1, "VOCAB expects one argument");
      expr.vocab_size = std::stoi(tokens[1]);
      have_vocab = true;
    } else if (tokens[0] == "VAR") {
      if (tokens.size() != 4)
        throw ParseError(line_no, 1, "VAR expects: VAR <name> <scope> <code>");
      CnfVariable v;
      v.name = tokens[1];
      const std::string& scope = tokens[2];
      if (scope == "cur") {
        v.scope = Scope::kCurrent;
      } else if (scope == "past") {
        v.scope = Scope::kHistory;
        v.temporal.set_all_past(true);
      } else if (scope.rfind("past[", 0) == 0 && scope.back() == ']') {
        v.scope = Scope::kHistory;
        v.temporal = parse_selector(scope.substr(5, scope.size() - 6), line_no, 1);
      } else {
        throw ParseError(line_no, 1, "scope must be cur, past or past[<tc>]");
      }
      try {
        v.code = std::stoi(tokens[3]);
      } catch (const std::exception&) {
        throw ParseError(line_no, 1, "bad code index '" + tokens[3] + "'");
      }
      if (v.code < 0) throw ParseError(line_no, 1, "code index must be nonnegative");
      if (by_name.count(v.name))
        throw ParseError(line_no, 1, "duplicate variable '" + v.name + "'");
      by_name[v.name] = static_cast<int>(expr.variables.size());
      max_code = std::max(max_code, v.code);
      expr.variables.push_back(std::move(v));
    } else if (tokens[0] == "CLAUSE") {
      if (tokens.size() < 2) throw ParseError(line_no, 1, "empty clause");
      CnfClause clause;
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        std::string name = tokens[i];
        bool negated = false;
        if (!name.empty() && (name[0] == '-' || name[0] == '!')) {
          negated = true;
          name = name.substr(1);
        }
        auto it = by_name.find(name);
        if (it == by_name.end())
          throw ParseError(line_no, 1, "clause references unmapped variable '" + name + "'");
        clause.push_back({it->second, negated});
      }
      expr.clauses.push_back(std::move(clause));
    } else {
      throw ParseError(line_no, 1, "expected VOCAB, VAR or CLAUSE, got '" + tokens[0] + "'");
    }
  }

  if (!have_vocab) expr.vocab_size = max_code + 1;
  for (const auto& v : expr.variables)
    if (v.code >= expr.vocab_size)
      throw ParseError(1, 1, "variable '" + v.name + "' code exceeds vocabulary");
  return expr;
}

RuleSet cnf_to_rules(const CnfExpr& expr) {
  if (expr.clauses.empty()) throw std::invalid_argument("CNF must have at least one clause");
  RuleSet rs;
  rs.vocab_size = expr.vocab_size;

  int counter = 0;
  for (const auto& raw : expr.clauses) {
    ++counter;
    if (raw.empty()) throw std::invalid_argument("CNF clause must be nonempty");

    // Duplicate literals add nothing to a disjunction; a complementary pair
    // makes the clause a tautology, which constrains nothing. Deduplication
    // keeps the last occurrence so the consequent stays the clause's last
    // literal.
    CnfClause clause;
    bool tautology = false;
    for (auto it = raw.rbegin(); it != raw.rend(); ++it) {
      bool dup = false;
      for (const auto& kept : clause) {
        if (kept.var == it->var && kept.negated == it->negated) dup = true;
        if (kept.var == it->var && kept.negated != it->negated) tautology = true;
      }
      if (!dup) clause.push_back(*it);
    }
    if (tautology) continue;
    std::reverse(clause.begin(), clause.end());

    for (const auto& lit : clause) {
      if (lit.var < 0 || lit.var >= static_cast<int>(expr.variables.size()))
        throw std::invalid_argument("clause references unmapped variable");
    }

    const CnfLiteral& last = clause.back();
    const CnfVariable& last_var = expr.variables[static_cast<std::size_t>(last.var)];
    if (last_var.scope != Scope::kCurrent)
      throw std::invalid_argument("clause " + std::to_string(counter) +
                                  ": consequent (last literal) must be current-scope");

    Rule rule;
    rule.id = "cnf" + std::to_string(counter);
    bool have_tc = false;
    for (std::size_t i = 0; i + 1 < clause.size(); ++i) {
      const CnfVariable& var = expr.variables[static_cast<std::size_t>(clause[i].var)];
      Literal lit;
      lit.scope = var.scope;
      lit.code = var.code;
      // Antecedent literals are the negations of the clause literals.
      lit.polarity = clause[i].negated ? Polarity::kPositive : Polarity::kNegated;
      if (var.scope == Scope::kHistory) {
        if (have_tc && !(rule.temporal == var.temporal))
          throw std::invalid_argument("clause " + std::to_string(counter) +
                                      ": history literals must share one temporal selector");
        rule.temporal = var.temporal;
        have_tc = true;
      }
      rule.antecedent.push_back(lit);
    }
    rule.output_code = last_var.code;
    rule.alpha = last.negated ? 0.0 : 1.0;
    rs.rules.push_back(std::move(rule));
  }
  return rs;
}

}  // namespace seqrule
