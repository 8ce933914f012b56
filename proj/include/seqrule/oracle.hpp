#pragma once

#include <string>
#include <vector>

#include "seqrule/matrix.hpp"
#include "seqrule/rng.hpp"
#include "seqrule/rule.hpp"

namespace seqrule {

enum class RuleStatus { kSatisfied, kViolated, kNotApplicable };

/// Slow, obviously-correct evaluation of one rule at one step via a direct
/// literal walk: NOT_APPLICABLE when some antecedent literal is false;
/// otherwise VIOLATED iff a hard alpha disagrees with the output bit. Soft
/// rules are never VIOLATED, only counted as fired.
RuleStatus eval_rule_naive(const Record& record, const Rule& rule, int t);

struct RuleStats {
  std::string id;
  bool temporal = false;
  double alpha = 1.0;
  long long fired = 0;
  long long violations = 0;       // hard rules only
  long long consequent_ones = 0;  // fired steps whose output bit is 1
};

struct ViolationReport {
  long long records = 0;
  long long valid_records = 0;
  long long static_violations = 0;
  long long temporal_violations = 0;
  std::vector<RuleStats> per_rule;

  long long total_violations() const { return static_violations + temporal_violations; }
  double percent_valid() const {
    return records == 0 ? 100.0 : 100.0 * static_cast<double>(valid_records) / static_cast<double>(records);
  }
};

/// Checks every (record, rule, step) and tallies violations split
/// static/temporal plus per-rule counts. Soft rules report their empirical
/// consequent frequency instead of violations.
ViolationReport check_violations(const Dataset& dataset, const RuleSet& rules, int threads = 1);

std::string format_report(const ViolationReport& report);

/// Sequential reference for the compiled path: applies rules one at a time
/// in canonical order at every step, reading history from already-processed
/// steps. This is the semantics compile_program must reproduce.
Record apply_rules_naive(const Record& record, const RuleSet& rules, const Rng& record_rng);

/// Training-mode reference: antecedents read the labels, fired cells of the
/// probability matrix become alpha.
void apply_rules_naive_train(RealMatrix& probs, const Record& labels, const RuleSet& rules);

}  // namespace seqrule
