#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "seqrule/matrix.hpp"
#include "seqrule/neuron.hpp"
#include "seqrule/rng.hpp"
#include "seqrule/rule.hpp"
#include "seqrule/temporal.hpp"

namespace seqrule {

/// Rules sharing one temporal component with pairwise-distinct output codes
/// and no overlap between any member's current-scope reads and another
/// member's output, so all members can be applied in a single matrix pass.
struct RuleGroup {
  TemporalComponent temporal;
  std::vector<RuleNeuron> members;

  // Per-output-code compiled vectors. theta is -1 where no member targets
  // the code; has_rule is the structural guard that makes the sentinel moot.
  std::vector<int> theta_vec;
  std::vector<double> alpha_vec;
  Bitset has_rule;
  std::vector<int> member_of_code;  // code -> index into members, or -1

  int vocab_size() const { return static_cast<int>(theta_vec.size()); }

  /// Dense 2*vocab x vocab weight matrix (row-major); column j holds the
  /// weights of the member that outputs code j. Materialized on demand.
  std::vector<std::int8_t> weight_matrix() const;
};

/// The whole rule set compiled for execution: groups emitted in an order
/// whose sequential application matches applying the rules one at a time in
/// canonical (stable topological) order.
struct CompiledRuleProgram {
  int vocab_size = 0;
  std::vector<RuleGroup> groups;
  RuleSet source;

  // Distinct temporal components, and each group's index into them, so
  // evaluation can share one history aggregation per component.
  std::vector<TemporalComponent> categories;
  std::vector<int> group_category;

  bool empty() const { return groups.empty(); }
};

/// Greedy grouping over the canonical rule order: a new group starts
/// whenever the temporal component changes or the candidate's output or
/// current-scope reads overlap an output already in the group. Throws
/// ValidationError if the rule set is invalid.
CompiledRuleProgram compile_program(const RuleSet& rules);

/// One parallel pass of a group over a binary record: S = X W is evaluated
/// against theta with X = [H, P] taken from the pre-pass matrix, then every
/// fired (step, code) cell is set to a Bernoulli(alpha) draw keyed by
/// (step, code).
void apply_group_batch(Record& record, const RuleGroup& group, const Rng& rng,
                       HistoryKernel kernel = HistoryKernel::kBitwise);

/// Training-mode pass: X comes from the binary label matrix (teacher
/// forcing); fired cells of the probability matrix are set to alpha exactly.
void apply_group_batch(RealMatrix& probs, const Record& labels, const RuleGroup& group,
                       HistoryKernel kernel = HistoryKernel::kBitwise);

/// All groups in program order (generation-mode batch pass; intended for
/// re-checking complete records).
void apply_program_batch(Record& record, const CompiledRuleProgram& program, const Rng& rng,
                         HistoryKernel kernel = HistoryKernel::kBitwise);

/// All groups in program order against fixed labels.
void apply_program_batch(RealMatrix& probs, const Record& labels,
                         const CompiledRuleProgram& program,
                         HistoryKernel kernel = HistoryKernel::kBitwise);

/// Plain-text dump of every group's W, theta and alpha for inspection.
void dump_program(const CompiledRuleProgram& program, std::ostream& os);

}  // namespace seqrule
