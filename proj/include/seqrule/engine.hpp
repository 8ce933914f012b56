#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "seqrule/matrix.hpp"
#include "seqrule/program.hpp"
#include "seqrule/rng.hpp"
#include "seqrule/rule.hpp"

namespace seqrule {

/// Contract with whatever model produces visits: given the record so far,
/// return one probability per code for the next visit.
using GeneratorAdapter = std::function<std::vector<double>(const Record& prefix)>;

struct GenerationConfig {
  int max_steps = 100;
  int end_code = -1;  // generation stops after a visit sets this bit; <0 = fixed length
  std::uint64_t seed = 0;
  int threads = 1;
};

/// Incremental per-step evaluator. Feed visits in order with push_visit and
/// constrain each new candidate visit in place; history per temporal
/// component is maintained incrementally so a generation loop avoids
/// re-aggregating the whole prefix at every step.
class StepEvaluator {
 public:
  explicit StepEvaluator(const CompiledRuleProgram& program);

  /// Applies every group, in program order, to the visit for step
  /// next_step(); the visit sees history from all pushed visits.
  void constrain(Bitset& visit, const Rng& record_rng) const;

  void push_visit(const Bitset& visit);
  int next_step() const { return static_cast<int>(visits_.size()) + 1; }

 private:
  const CompiledRuleProgram* program_;
  std::vector<Bitset> visits_;
  std::vector<Bitset> all_past_or_;  // running OR per category with the wildcard
  mutable std::vector<Bitset> history_scratch_;

  void history_for(int cat, Bitset& out) const;
};

/// Enforces the program on one sampled visit given the (already
/// constrained) prefix. The returned visit violates no rule whose
/// antecedent is determined by (prefix, visit).
Bitset constrain_step(const Record& prefix, const Bitset& sampled_visit,
                      const CompiledRuleProgram& program, const Rng& record_rng);

/// Autoregressive loop: adapter probabilities -> Bernoulli sample ->
/// constrain -> append, until the end code appears or max_steps is reached.
/// Pass nullptr to generate unconstrained. record_index selects the
/// per-record random stream.
Record generate_constrained(const GeneratorAdapter& adapter, const CompiledRuleProgram* program,
                            const GenerationConfig& config, std::uint64_t record_index = 0);

/// n records, deterministically seeded per record index; identical output
/// for any thread count.
Dataset generate_dataset(const GeneratorAdapter& adapter, const CompiledRuleProgram* program,
                         const GenerationConfig& config, int n);

/// Training-mode enforcement over a whole sequence: antecedents read the
/// binary labels (teacher forcing), fired cells of the probability matrix
/// are set to alpha exactly.
void constrain_training_batch(RealMatrix& probs, const Record& labels,
                              const CompiledRuleProgram& program);

/// Step-by-step enforcement pass over a complete record (the per-step path
/// applied at every t in order). On a record produced by
/// generate_constrained this is the identity for hard rules.
Record enforce_record(const Record& record, const CompiledRuleProgram& program,
                      const Rng& record_rng);

}  // namespace seqrule
