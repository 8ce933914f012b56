#include "seqrule/rule.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace seqrule {

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  if (issues.empty()) {
    os << "ok\n";
    return os.str();
  }
  for (const auto& issue : issues) {
    os << (issue.rule_id.empty() ? std::string("<ruleset>") : issue.rule_id) << ": "
       << issue.reason << "\n";
  }
  return os.str();
}

ValidationError::ValidationError(ValidationReport report)
    : std::runtime_error("invalid rule set:\n" + report.to_string()),
      report_(std::move(report)) {}

std::vector<int> current_read_codes(const Rule& rule) {
  std::vector<int> codes;
  for (const auto& lit : rule.antecedent)
    if (lit.scope == Scope::kCurrent) codes.push_back(lit.code);
  std::sort(codes.begin(), codes.end());
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
  return codes;
}

namespace {

bool has_history_literal(const Rule& r) {
  return std::any_of(r.antecedent.begin(), r.antecedent.end(),
                     [](const Literal& l) { return l.scope == Scope::kHistory; });
}

// Same-step dependency edges: writer index -> reader indices.
std::vector<std::vector<std::size_t>> dependency_edges(const RuleSet& rs) {
  std::map<int, std::vector<std::size_t>> readers;  // code -> rules reading it
  for (std::size_t i = 0; i < rs.rules.size(); ++i)
    for (int c : current_read_codes(rs.rules[i])) readers[c].push_back(i);

  std::vector<std::vector<std::size_t>> out(rs.rules.size());
  for (std::size_t i = 0; i < rs.rules.size(); ++i) {
    auto it = readers.find(rs.rules[i].output_code);
    if (it != readers.end()) out[i] = it->second;
  }
  return out;
}

// Kahn's algorithm with a min-heap on rule index, so ties keep file order.
// Returns the order, or nullopt-style empty vector plus the leftover rules
// (the cycle participants) via `cycle`.
std::vector<std::size_t> stable_topo(const RuleSet& rs,
                                     std::vector<std::size_t>* cycle) {
  auto edges = dependency_edges(rs);
  std::vector<int> indeg(rs.rules.size(), 0);
  for (const auto& outs : edges)
    for (std::size_t j : outs) ++indeg[j];

  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < rs.rules.size(); ++i)
    if (indeg[i] == 0) ready.push(i);

  std::vector<std::size_t> order;
  order.reserve(rs.rules.size());
  while (!ready.empty()) {
    std::size_t i = ready.top();
    ready.pop();
    order.push_back(i);
    for (std::size_t j : edges[i])
      if (--indeg[j] == 0) ready.push(j);
  }
  if (cycle) {
    cycle->clear();
    for (std::size_t i = 0; i < rs.rules.size(); ++i)
      if (indeg[i] > 0) cycle->push_back(i);
  }
  return order;
}

}  // namespace

ValidationReport validate_ruleset(const RuleSet& rs) {
  ValidationReport report;
  auto flag = [&](const std::string& id, std::string reason) {
    report.issues.push_back({id, std::move(reason)});
  };

  if (rs.vocab_size <= 0) flag("", "vocab_size must be positive");

  std::set<std::string> seen_ids;
  for (const auto& r : rs.rules) {
    if (r.id.empty()) flag(r.id, "rule id must be nonempty");
    if (r.id.find_first_of(" \t#") != std::string::npos)
      flag(r.id, "rule id must not contain whitespace or '#'");
    if (!seen_ids.insert(r.id).second) flag(r.id, "duplicate rule id");

    if (r.output_code < 0 || r.output_code >= rs.vocab_size)
      flag(r.id, "output code " + std::to_string(r.output_code) + " out of vocabulary");
    if (!(r.alpha >= 0.0 && r.alpha <= 1.0))  // also rejects NaN
      flag(r.id, "alpha must lie in [0,1]");

    std::set<std::pair<int, int>> positives, negatives;  // (scope, code)
    for (const auto& lit : r.antecedent) {
      if (lit.code < 0 || lit.code >= rs.vocab_size)
        flag(r.id, "antecedent code " + std::to_string(lit.code) + " out of vocabulary");
      auto key = std::make_pair(static_cast<int>(lit.scope), lit.code);
      (lit.negated() ? negatives : positives).insert(key);
    }
    for (const auto& key : positives)
      if (negatives.count(key))
        flag(r.id, "contradictory antecedent on code " + std::to_string(key.second));

    if (has_history_literal(r) && r.temporal.is_static())
      flag(r.id, "history literal requires a nonempty temporal component");
    if (!r.temporal.is_static() && !has_history_literal(r))
      flag(r.id, "temporal component without any history literal");
  }

  // Duplicate (output, temporal, antecedent) triples.
  for (std::size_t i = 0; i < rs.rules.size(); ++i)
    for (std::size_t j = i + 1; j < rs.rules.size(); ++j) {
      const Rule& a = rs.rules[i];
      const Rule& b = rs.rules[j];
      if (a.output_code == b.output_code && a.temporal == b.temporal &&
          a.antecedent == b.antecedent)
        flag(a.id + "," + b.id, "duplicate rule (same output, temporal component, antecedent)");
    }

  // Acyclicity of same-step current-scope dependencies.
  std::vector<std::size_t> cycle;
  stable_topo(rs, &cycle);
  if (!cycle.empty()) {
    std::string ids;
    for (std::size_t i : cycle) {
      if (!ids.empty()) ids += ",";
      ids += rs.rules[i].id;
    }
    flag(ids, "cyclic same-step dependency between rules");
  }

  return report;
}

std::vector<std::size_t> canonical_order(const RuleSet& rs) {
  std::vector<std::size_t> cycle;
  auto order = stable_topo(rs, &cycle);
  if (!cycle.empty()) throw ValidationError(validate_ruleset(rs));
  return order;
}

}  // namespace seqrule
