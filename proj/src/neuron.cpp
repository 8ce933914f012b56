#include "seqrule/neuron.hpp"

#include <cassert>
#include <stdexcept>

namespace seqrule {

RuleNeuron compile_neuron(const Rule& rule, int vocab_size) {
  RuleNeuron n;
  n.rule_id = rule.id;
  n.weights.assign(static_cast<std::size_t>(vocab_size) * 2, 0);
  n.output_code = rule.output_code;
  n.alpha = rule.alpha;

  for (const auto& lit : rule.antecedent) {
    std::size_t slot = static_cast<std::size_t>(lit.code) +
                       (lit.scope == Scope::kCurrent ? static_cast<std::size_t>(vocab_size) : 0);
    n.weights[slot] = lit.negated() ? -1 : 1;  // duplicate literals collapse
  }
  for (int c = 0; c < vocab_size; ++c) {
    if (n.weights[static_cast<std::size_t>(c)] > 0) n.hist_pos.push_back(c);
    if (n.weights[static_cast<std::size_t>(c)] < 0) n.hist_neg.push_back(c);
    std::size_t cc = static_cast<std::size_t>(c) + static_cast<std::size_t>(vocab_size);
    if (n.weights[cc] > 0) n.cur_pos.push_back(c);
    if (n.weights[cc] < 0) n.cur_neg.push_back(c);
  }
  n.threshold = static_cast<int>(n.hist_pos.size() + n.cur_pos.size());
  return n;
}

int activation_sum(const RuleNeuron& n, const Bitset& history, const Bitset& current) {
  if (static_cast<int>(history.size()) != n.vocab_size() ||
      static_cast<int>(current.size()) != n.vocab_size())
    throw std::invalid_argument("input length does not match neuron vocabulary");
  int s = 0;
  for (int c : n.hist_pos) s += history.test(static_cast<std::size_t>(c));
  for (int c : n.cur_pos) s += current.test(static_cast<std::size_t>(c));
  for (int c : n.hist_neg) s -= history.test(static_cast<std::size_t>(c));
  for (int c : n.cur_neg) s -= current.test(static_cast<std::size_t>(c));
  assert(s <= n.threshold);
  return s;
}

int activation_sum(const RuleNeuron& n, std::span<const std::uint8_t> x) {
  if (x.size() != n.weights.size())
    throw std::invalid_argument("input length does not match neuron weights");
  int s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += n.weights[i] * (x[i] ? 1 : 0);
  assert(s <= n.threshold);
  return s;
}

void apply_consequent(const RuleNeuron& n, int s, Bitset& visit, const Rng& rng,
                      std::uint64_t step) {
  if (!n.fires(s)) return;
  bool bit = rng.bernoulli(n.alpha, kRngTagConsequent, step,
                           static_cast<std::uint64_t>(n.output_code));
  visit.assign(static_cast<std::size_t>(n.output_code), bit);
}

void apply_consequent(const RuleNeuron& n, int s, std::span<double> prob_row) {
  if (!n.fires(s)) return;
  prob_row[static_cast<std::size_t>(n.output_code)] = n.alpha;
}

}  // namespace seqrule
