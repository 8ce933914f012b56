#pragma once

// Random rule sets, records and CNF expressions shared by the property
// tests. Rule sets are acyclic by construction: outputs are drawn first and
// each rule's current-scope reads come only from earlier outputs or from
// codes nothing writes.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "seqrule/cnf.hpp"
#include "seqrule/rule.hpp"

namespace seqrule::testing {

struct RulesetOptions {
  bool allow_soft = true;
  bool distinct_outputs = true;
  int max_literals = 4;
};

inline Bitset random_visit(std::mt19937_64& rng, int vocab, double density = 0.4) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Bitset v(static_cast<std::size_t>(vocab));
  for (int c = 0; c < vocab; ++c)
    if (u(rng) < density) v.set(static_cast<std::size_t>(c));
  return v;
}

inline Record random_record(std::mt19937_64& rng, int vocab, int steps, double density = 0.4) {
  Record rec(vocab);
  for (int t = 0; t < steps; ++t) rec.push_visit(random_visit(rng, vocab, density));
  return rec;
}

inline TemporalComponent random_temporal(std::mt19937_64& rng) {
  switch (rng() % 6) {
    case 0:
      return TemporalComponent::of({-1});
    case 1:
      return TemporalComponent::of({1});
    case 2:
      return TemporalComponent::all_past();
    case 3:
      return TemporalComponent::of({-1, 1, 4});
    case 4: {
      TemporalComponent tc;
      int n = 1 + static_cast<int>(rng() % 3);
      for (int i = 0; i < n; ++i) {
        int k = static_cast<int>(rng() % 9) - 4;
        if (k == 0) k = 2;
        tc.add_index(k);
      }
      if (rng() % 4 == 0) tc.set_all_past(true);
      return tc;
    }
    default:
      return TemporalComponent::of({-2, -1});
  }
}

inline RuleSet random_ruleset(std::mt19937_64& rng, int vocab, int n_rules,
                              RulesetOptions options = {}) {
  RuleSet rs;
  rs.vocab_size = vocab;
  if (options.distinct_outputs) n_rules = std::min(n_rules, vocab);

  std::vector<int> outputs;
  std::vector<int> pool(static_cast<std::size_t>(vocab));
  for (int c = 0; c < vocab; ++c) pool[static_cast<std::size_t>(c)] = c;
  std::shuffle(pool.begin(), pool.end(), rng);
  for (int i = 0; i < n_rules; ++i)
    outputs.push_back(options.distinct_outputs ? pool[static_cast<std::size_t>(i)]
                                               : static_cast<int>(rng() % vocab));

  // Last rule writing each code, so reads can be restricted to codes whose
  // writers all come earlier; edges then always point forward.
  std::vector<int> last_writer(static_cast<std::size_t>(vocab), -1);
  for (int i = 0; i < n_rules; ++i)
    last_writer[static_cast<std::size_t>(outputs[static_cast<std::size_t>(i)])] = i;

  for (int i = 0; i < n_rules; ++i) {
    Rule rule;
    rule.id = "r" + std::to_string(i);
    rule.output_code = outputs[static_cast<std::size_t>(i)];
    if (options.allow_soft && rng() % 4 == 0)
      rule.alpha = 0.05 + 0.9 * std::uniform_real_distribution<double>(0, 1)(rng);
    else
      rule.alpha = (rng() % 2) ? 1.0 : 0.0;

    // Current-scope reads: codes every writer of which precedes this rule.
    std::vector<int> readable;
    for (int c = 0; c < vocab; ++c)
      if (c != rule.output_code && last_writer[static_cast<std::size_t>(c)] < i)
        readable.push_back(c);

    int n_literals = static_cast<int>(rng() % (static_cast<unsigned>(options.max_literals) + 1));
    std::vector<std::pair<int, int>> used;  // (scope, code)
    bool has_history = false;
    for (int l = 0; l < n_literals; ++l) {
      Literal lit;
      bool history = rng() % 2 == 0;
      if (history) {
        lit.scope = Scope::kHistory;
        lit.code = static_cast<int>(rng() % vocab);
      } else {
        if (readable.empty()) continue;
        lit.scope = Scope::kCurrent;
        lit.code = readable[rng() % readable.size()];
      }
      auto key = std::make_pair(static_cast<int>(lit.scope), lit.code);
      if (std::find(used.begin(), used.end(), key) != used.end()) continue;
      used.push_back(key);
      lit.polarity = (rng() % 2) ? Polarity::kNegated : Polarity::kPositive;
      rule.antecedent.push_back(lit);
      has_history |= history;
    }
    if (has_history) rule.temporal = random_temporal(rng);
    rs.rules.push_back(std::move(rule));
  }
  return rs;
}

/// CNF over up to max_vars abstract variables; current-scope vars map to
/// codes [0, n_vars) and history vars (previous visit) may be mixed in.
inline CnfExpr random_cnf(std::mt19937_64& rng, int max_vars, int max_clauses,
                          bool with_history = true) {
  CnfExpr expr;
  int n_vars = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_vars));
  expr.vocab_size = n_vars;
  for (int v = 0; v < n_vars; ++v) {
    CnfVariable var;
    var.name = "x" + std::to_string(v);
    var.code = v;
    if (with_history && rng() % 3 == 0) {
      var.scope = Scope::kHistory;
      var.temporal = TemporalComponent::of({-1});
    } else {
      var.scope = Scope::kCurrent;
    }
    expr.variables.push_back(std::move(var));
  }

  // Every clause needs a current-scope literal to act as consequent.
  std::vector<int> current_vars;
  for (int v = 0; v < n_vars; ++v)
    if (expr.variables[static_cast<std::size_t>(v)].scope == Scope::kCurrent)
      current_vars.push_back(v);
  if (current_vars.empty()) {
    expr.variables[0].scope = Scope::kCurrent;
    expr.variables[0].temporal = TemporalComponent{};
    current_vars.push_back(0);
  }

  int n_clauses = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_clauses));
  for (int i = 0; i < n_clauses; ++i) {
    CnfClause clause;
    int len = 1 + static_cast<int>(rng() % 4);
    for (int l = 0; l + 1 < len; ++l)
      clause.push_back({static_cast<int>(rng() % static_cast<unsigned>(n_vars)), rng() % 2 == 0});
    clause.push_back({current_vars[rng() % current_vars.size()], rng() % 2 == 0});
    expr.clauses.push_back(std::move(clause));
  }
  return expr;
}

}  // namespace seqrule::testing
