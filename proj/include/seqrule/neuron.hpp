#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "seqrule/bitset.hpp"
#include "seqrule/rng.hpp"
#include "seqrule/rule.hpp"

namespace seqrule {

/// One rule compiled to a thresholded linear unit over
/// x = concat(history bits, current bits). Weights are +1 for positive
/// literals, -1 for negated ones, 0 elsewhere; the threshold equals the
/// number of +1 weights, which the weighted sum reaches exactly when every
/// positive literal is set and every negated one is clear.
struct RuleNeuron {
  std::string rule_id;
  std::vector<std::int8_t> weights;  // length 2*vocab: history half, then current half
  int threshold = 0;
  int output_code = 0;
  double alpha = 1.0;

  // Nonzero-weight code indices by (scope, sign); the sparse evaluation path.
  std::vector<int> hist_pos, hist_neg, cur_pos, cur_neg;

  int vocab_size() const { return static_cast<int>(weights.size()) / 2; }
  bool fires(int s) const { return s >= threshold; }
};

RuleNeuron compile_neuron(const Rule& rule, int vocab_size);

/// Weighted sum over the sparse index lists.
int activation_sum(const RuleNeuron& n, const Bitset& history, const Bitset& current);

/// Dense reference: s = sum_i w_i * x_i for an explicit input vector of
/// length 2*vocab.
int activation_sum(const RuleNeuron& n, std::span<const std::uint8_t> x);

/// Generation mode: if the neuron fires, the output bit becomes a Bernoulli
/// draw with p = alpha (deterministic for hard rules); other bits are never
/// touched. `step` keys the draw.
void apply_consequent(const RuleNeuron& n, int s, Bitset& visit, const Rng& rng,
                      std::uint64_t step);

/// Training mode: a fired neuron overwrites the predicted probability of the
/// output code with alpha exactly.
void apply_consequent(const RuleNeuron& n, int s, std::span<double> prob_row);

}  // namespace seqrule
