#pragma once

#include <vector>

#include "seqrule/rule.hpp"

namespace seqrule {

/// Mining cut-offs; defaults match the inpatient configuration.
struct MinerThresholds {
  int min_exclusive = 10;       // co-occurrence evidence for static rules
  int min_demo = 500;           // prevalence for demographically forbidden codes
  int min_precede = 10;         // evidence for precedence rules
  int min_persist = 10;         // overall occurrences for persistence rules
  int min_persist_repeat = 5;   // consecutive repeats for persistence rules
};

/// At most one code per demographic group, encoded autoregressively: one
/// rule per consecutive member pair, `cur[d_i] => cur[d_{i+1}] = 0`.
/// Singleton groups emit nothing. Throws on overlapping groups.
RuleSet mine_demographic_exclusive(const Dataset& dataset,
                                   const std::vector<std::vector<int>>& demo_groups);

/// Codes that only ever appear alongside another code: for pairs (a, b)
/// where b occurs at least min_count times and every visit with b also has
/// a, emit `cur[b] => cur[a] = 1`.
RuleSet mine_exclusive_cooccurrence(const Dataset& dataset, int min_count);

/// Prevalent codes that never appear in records with a given demographic:
/// `past[1][demo] => cur[code] = 0`. static_rules provides the mined
/// co-occurrence rules for the closure pass, which also forbids any
/// below-threshold code that forces a forbidden one.
RuleSet mine_demographic_forbidden(const Dataset& dataset, const std::vector<int>& demo_codes,
                                   int min_count, const RuleSet& static_rules);

/// Common codes that only occur after a specific code has appeared:
/// `NOT past[*][a] => cur[b] = 0`.
RuleSet mine_precedence(const Dataset& dataset, int min_count);

/// Codes that always continue once present: `past[-1][a] => cur[a] = 1`,
/// requiring min_total occurrences and min_repeat consecutive repeats.
RuleSet mine_persistence(const Dataset& dataset, int min_total, int min_repeat);

/// All five procedures in order; demographic codes are the union of the
/// groups.
RuleSet mine_all(const Dataset& dataset, const std::vector<std::vector<int>>& demo_groups,
                 const MinerThresholds& thresholds);

}  // namespace seqrule
