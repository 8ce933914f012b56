#include "seqrule/program.hpp"

#include <algorithm>
#include <ostream>
#include <set>

namespace seqrule {

std::vector<std::int8_t> RuleGroup::weight_matrix() const {
  const int C = vocab_size();
  std::vector<std::int8_t> w(static_cast<std::size_t>(2 * C) * C, 0);
  for (const auto& m : members)
    for (int i = 0; i < 2 * C; ++i)
      w[static_cast<std::size_t>(i) * C + m.output_code] = m.weights[static_cast<std::size_t>(i)];
  return w;
}

namespace {

RuleGroup make_group(const TemporalComponent& tc, int vocab) {
  RuleGroup g;
  g.temporal = tc;
  g.theta_vec.assign(static_cast<std::size_t>(vocab), -1);
  g.alpha_vec.assign(static_cast<std::size_t>(vocab), 0.0);
  g.has_rule = Bitset(static_cast<std::size_t>(vocab));
  g.member_of_code.assign(static_cast<std::size_t>(vocab), -1);
  return g;
}

void group_add(RuleGroup& g, RuleNeuron neuron) {
  int j = neuron.output_code;
  g.theta_vec[static_cast<std::size_t>(j)] = neuron.threshold;
  g.alpha_vec[static_cast<std::size_t>(j)] = neuron.alpha;
  g.has_rule.set(static_cast<std::size_t>(j));
  g.member_of_code[static_cast<std::size_t>(j)] = static_cast<int>(g.members.size());
  g.members.push_back(std::move(neuron));
}

}  // namespace

CompiledRuleProgram compile_program(const RuleSet& rules) {
  ValidationReport report = validate_ruleset(rules);
  if (!report.ok()) throw ValidationError(std::move(report));

  CompiledRuleProgram prog;
  prog.vocab_size = rules.vocab_size;
  prog.source = rules;

  RuleGroup current = make_group(TemporalComponent{}, rules.vocab_size);
  std::set<int> group_outputs;
  bool open = false;

  auto flush = [&] {
    if (open && !current.members.empty()) prog.groups.push_back(std::move(current));
    group_outputs.clear();
    open = false;
  };

  for (std::size_t idx : canonical_order(rules)) {
    const Rule& r = rules.rules[idx];
    bool overlap = false;
    if (open) {
      if (group_outputs.count(r.output_code)) overlap = true;
      for (int c : current_read_codes(r))
        if (group_outputs.count(c)) overlap = true;
    }
    if (!open || r.temporal != current.temporal || overlap) {
      flush();
      current = make_group(r.temporal, rules.vocab_size);
      open = true;
    }
    group_add(current, compile_neuron(r, rules.vocab_size));
    group_outputs.insert(r.output_code);
  }
  flush();

  for (const auto& g : prog.groups) {
    auto it = std::find(prog.categories.begin(), prog.categories.end(), g.temporal);
    if (it == prog.categories.end()) {
      prog.categories.push_back(g.temporal);
      prog.group_category.push_back(static_cast<int>(prog.categories.size()) - 1);
    } else {
      prog.group_category.push_back(static_cast<int>(it - prog.categories.begin()));
    }
  }
  return prog;
}

namespace {

// Fired (step, code) decisions for one group against a fixed input matrix.
// X rows are [history(t), state(t)]; nothing is written here, so the caller
// gets exact pre-pass matrix semantics.
std::vector<std::pair<int, int>> fired_cells(const Record& state, const RuleGroup& group,
                                             HistoryKernel kernel) {
  const int T = state.steps();
  auto mask = build_mask_matrix(group.temporal, T);
  auto history = aggregate_history_batch(state, mask, kernel);

  std::vector<std::pair<int, int>> fired;
  for (int t = 1; t <= T; ++t) {
    const Bitset& h = history[static_cast<std::size_t>(t) - 1];
    const Bitset& v = state.visit(t);
    for (const auto& m : group.members) {
      int s = activation_sum(m, h, v);
      if (m.fires(s)) fired.emplace_back(t, m.output_code);
    }
  }
  return fired;
}

}  // namespace

void apply_group_batch(Record& record, const RuleGroup& group, const Rng& rng,
                       HistoryKernel kernel) {
  if (record.vocab_size() != group.vocab_size())
    throw std::invalid_argument("record vocabulary does not match group");
  for (auto [t, j] : fired_cells(record, group, kernel)) {
    bool bit = rng.bernoulli(group.alpha_vec[static_cast<std::size_t>(j)], kRngTagConsequent,
                             static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(j));
    record.visit(t).assign(static_cast<std::size_t>(j), bit);
  }
}

void apply_group_batch(RealMatrix& probs, const Record& labels, const RuleGroup& group,
                       HistoryKernel kernel) {
  if (labels.vocab_size() != group.vocab_size())
    throw std::invalid_argument("label vocabulary does not match group");
  if (probs.rows != labels.steps() || probs.cols != labels.vocab_size())
    throw std::invalid_argument("probability matrix shape does not match labels");
  for (auto [t, j] : fired_cells(labels, group, kernel))
    probs.at(t - 1, j) = group.alpha_vec[static_cast<std::size_t>(j)];
}

void apply_program_batch(Record& record, const CompiledRuleProgram& program, const Rng& rng,
                         HistoryKernel kernel) {
  for (const auto& g : program.groups) apply_group_batch(record, g, rng, kernel);
}

void apply_program_batch(RealMatrix& probs, const Record& labels,
                         const CompiledRuleProgram& program, HistoryKernel kernel) {
  // Labels never change, so history per temporal component is shared
  // across groups of the same category.
  const int T = labels.steps();
  std::vector<std::vector<Bitset>> history_by_cat(program.categories.size());
  for (std::size_t gi = 0; gi < program.groups.size(); ++gi) {
    const RuleGroup& group = program.groups[gi];
    if (labels.vocab_size() != group.vocab_size())
      throw std::invalid_argument("label vocabulary does not match group");
    if (probs.rows != T || probs.cols != labels.vocab_size())
      throw std::invalid_argument("probability matrix shape does not match labels");

    auto& history = history_by_cat[static_cast<std::size_t>(program.group_category[gi])];
    if (history.empty() && T > 0)
      history = aggregate_history_batch(labels, build_mask_matrix(group.temporal, T), kernel);

    for (int t = 1; t <= T; ++t) {
      const Bitset& h = history[static_cast<std::size_t>(t) - 1];
      const Bitset& v = labels.visit(t);
      for (const auto& m : group.members) {
        int s = activation_sum(m, h, v);
        if (m.fires(s)) probs.at(t - 1, m.output_code) = m.alpha;
      }
    }
  }
}

void dump_program(const CompiledRuleProgram& program, std::ostream& os) {
  os << "vocab " << program.vocab_size << "\n";
  os << "groups " << program.groups.size() << "\n";
  const int C = program.vocab_size;
  for (std::size_t gi = 0; gi < program.groups.size(); ++gi) {
    const RuleGroup& g = program.groups[gi];
    os << "group " << gi << " temporal ";
    if (g.temporal.is_static()) {
      os << "static";
    } else {
      os << "[";
      bool first = true;
      for (int k : g.temporal.indices()) {
        if (!first) os << ",";
        os << k;
        first = false;
      }
      if (g.temporal.has_all_past()) os << (first ? "*" : ",*");
      os << "]";
    }
    os << " members";
    for (const auto& m : g.members) os << " " << m.rule_id;
    os << "\n";

    os << "theta";
    for (int j = 0; j < C; ++j) os << " " << g.theta_vec[static_cast<std::size_t>(j)];
    os << "\nalpha";
    for (int j = 0; j < C; ++j) os << " " << g.alpha_vec[static_cast<std::size_t>(j)];
    os << "\n";

    if (C <= 64) {
      auto w = g.weight_matrix();
      os << "W (" << 2 * C << "x" << C << ")\n";
      for (int i = 0; i < 2 * C; ++i) {
        for (int j = 0; j < C; ++j)
          os << (j ? " " : "") << static_cast<int>(w[static_cast<std::size_t>(i) * C + j]);
        os << "\n";
      }
    } else {
      os << "W (sparse by output code)\n";
      for (const auto& m : g.members) {
        os << m.output_code << ":";
        for (int i = 0; i < 2 * C; ++i)
          if (m.weights[static_cast<std::size_t>(i)] != 0)
            os << " " << i << ":" << static_cast<int>(m.weights[static_cast<std::size_t>(i)]);
        os << "\n";
      }
    }
  }
}

}  // namespace seqrule
