#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "seqrule/engine.hpp"
#include "seqrule/rule.hpp"

namespace seqrule {

struct FreqModelParams {
  int hash_buckets = 16;   // previous-visit bitset hash buckets
  int index_buckets = 4;   // visit position buckets (1, 2, 3, >=4)
  bool operator==(const FreqModelParams&) const = default;
};

/// Count model over (previous-visit hash bucket, visit-index bucket):
/// per-code firing probabilities with Laplace smoothing, so every
/// probability stays strictly inside (0, 1). Stands in for any
/// autoregressive visit generator.
class FreqModel {
 public:
  FreqModel(int vocab_size, FreqModelParams params = {});

  static FreqModel fit(const Dataset& dataset, FreqModelParams params = {});

  /// Adds the dataset's counts once more. Repeated accumulation anneals the
  /// smoothing prior away, sharpening probabilities toward empirical rates.
  void accumulate(const Dataset& dataset);

  /// Probability vector for the next visit given the record so far.
  std::vector<double> predict(const Record& prefix) const;

  GeneratorAdapter adapter() const;

  int vocab_size() const { return vocab_; }
  const FreqModelParams& params() const { return params_; }

  /// Versioned little-endian binary checkpoint of the raw counts.
  void save(const std::string& path) const;
  static FreqModel load(const std::string& path);

  bool operator==(const FreqModel&) const = default;

 private:
  int vocab_ = 0;
  FreqModelParams params_;
  std::vector<std::uint64_t> counts_;  // [hash][index][code]
  std::vector<std::uint64_t> totals_;  // [hash][index]

  std::size_t bucket_of(const Record& prefix) const;
  friend struct FreqModelTestAccess;
};

struct TrainTrace {
  std::vector<double> constrained_nll;
  std::vector<double> unconstrained_nll;
};

/// Epoch loop: accumulate counts, then score the dataset. The constrained
/// score applies constrain_training_batch to the predicted probabilities
/// before the log loss; on data consistent with the (hard) rules it can
/// never exceed the unconstrained score. Pass nullptr to skip enforcement
/// (both traces then coincide).
std::pair<FreqModel, TrainTrace> train_constrained(const Dataset& dataset,
                                                   const CompiledRuleProgram* program, int epochs,
                                                   FreqModelParams params = {});

/// Mean binary log loss of the model on the dataset, optionally constrained.
double dataset_nll(const FreqModel& model, const Dataset& dataset,
                   const CompiledRuleProgram* program);

}  // namespace seqrule
