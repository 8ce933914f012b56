#include "seqrule/engine.hpp"

#include <atomic>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <thread>

#include "seqrule/temporal.hpp"

namespace seqrule {

StepEvaluator::StepEvaluator(const CompiledRuleProgram& program) : program_(&program) {
  all_past_or_.resize(program.categories.size());
  history_scratch_.resize(program.categories.size());
  for (std::size_t c = 0; c < program.categories.size(); ++c) {
    if (program.categories[c].has_all_past())
      all_past_or_[c] = Bitset(static_cast<std::size_t>(program.vocab_size));
    history_scratch_[c] = Bitset(static_cast<std::size_t>(program.vocab_size));
  }
}

void StepEvaluator::history_for(int cat, Bitset& out) const {
  const TemporalComponent& tc = program_->categories[static_cast<std::size_t>(cat)];
  if (tc.has_all_past()) {
    out = all_past_or_[static_cast<std::size_t>(cat)];
    return;
  }
  out.clear();
  int t = next_step();
  for (int k : tc.indices()) {
    int i = k > 0 ? k : t + k;
    if (i >= 1 && i < t) out.or_with(visits_[static_cast<std::size_t>(i) - 1]);
  }
}

void StepEvaluator::constrain(Bitset& visit, const Rng& record_rng) const {
  if (program_->empty()) return;
  if (static_cast<int>(visit.size()) != program_->vocab_size)
    throw std::invalid_argument("visit length does not match program vocabulary");

  const std::uint64_t t = static_cast<std::uint64_t>(next_step());
  std::vector<bool> have(program_->categories.size(), false);
  for (std::size_t gi = 0; gi < program_->groups.size(); ++gi) {
    int cat = program_->group_category[gi];
    Bitset& h = history_scratch_[static_cast<std::size_t>(cat)];
    if (!have[static_cast<std::size_t>(cat)]) {
      history_for(cat, h);
      have[static_cast<std::size_t>(cat)] = true;
    }
    // Members of one group are hazard-free, so in-place writes are safe.
    for (const auto& m : program_->groups[gi].members) {
      int s = activation_sum(m, h, visit);
      apply_consequent(m, s, visit, record_rng, t);
    }
  }
}

void StepEvaluator::push_visit(const Bitset& visit) {
  if (!program_->categories.empty() && static_cast<int>(visit.size()) != program_->vocab_size)
    throw std::invalid_argument("visit length does not match program vocabulary");
  visits_.push_back(visit);
  for (std::size_t c = 0; c < all_past_or_.size(); ++c)
    if (program_->categories[c].has_all_past()) all_past_or_[c].or_with(visit);
}

Bitset constrain_step(const Record& prefix, const Bitset& sampled_visit,
                      const CompiledRuleProgram& program, const Rng& record_rng) {
  StepEvaluator eval(program);
  for (int t = 1; t <= prefix.steps(); ++t) eval.push_visit(prefix.visit(t));
  Bitset visit = sampled_visit;
  eval.constrain(visit, record_rng);
  return visit;
}

namespace {

void check_probabilities(const std::vector<double>& p, int vocab) {
  if (static_cast<int>(p.size()) != vocab)
    throw std::runtime_error("generator adapter returned a vector of wrong length");
  for (double v : p)
    if (!(v >= 0.0 && v <= 1.0))
      throw std::runtime_error("generator adapter returned a probability outside [0,1]");
}

}  // namespace

Record generate_constrained(const GeneratorAdapter& adapter, const CompiledRuleProgram* program,
                            const GenerationConfig& config, std::uint64_t record_index) {
  if (config.max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");

  const Rng rng = Rng(config.seed).fork(record_index);

  // Without a program the vocabulary comes from the first adapter reply.
  int vocab = program ? program->vocab_size : -1;
  Record record(vocab > 0 ? vocab : 1);
  std::optional<StepEvaluator> eval;
  if (program) eval.emplace(*program);

  for (int t = 1; t <= config.max_steps; ++t) {
    std::vector<double> probs = adapter(record);
    if (vocab < 0) {
      vocab = static_cast<int>(probs.size());
      if (vocab < 1) throw std::runtime_error("generator adapter returned an empty vector");
      record = Record(vocab);
    }
    check_probabilities(probs, vocab);

    Bitset visit(static_cast<std::size_t>(vocab));
    for (int c = 0; c < vocab; ++c)
      if (rng.uniform(kRngTagVisitSample, static_cast<std::uint64_t>(t),
                      static_cast<std::uint64_t>(c)) < probs[static_cast<std::size_t>(c)])
        visit.set(static_cast<std::size_t>(c));

    if (eval) {
      eval->constrain(visit, rng);
      eval->push_visit(visit);
    }
    record.push_visit(std::move(visit));

    if (config.end_code >= 0 && config.end_code < vocab &&
        record.visit(t).test(static_cast<std::size_t>(config.end_code)))
      break;
  }
  return record;
}

Dataset generate_dataset(const GeneratorAdapter& adapter, const CompiledRuleProgram* program,
                         const GenerationConfig& config, int n) {
  if (n < 0) throw std::invalid_argument("record count must be nonnegative");
  Dataset out;
  out.records.resize(static_cast<std::size_t>(n));

  int workers = std::max(1, config.threads);
  if (workers == 1) {
    for (int i = 0; i < n; ++i)
      out.records[static_cast<std::size_t>(i)] =
          generate_constrained(adapter, program, config, static_cast<std::uint64_t>(i));
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1))
          out.records[static_cast<std::size_t>(i)] =
              generate_constrained(adapter, program, config, static_cast<std::uint64_t>(i));
      });
    for (auto& th : pool) th.join();
  }

  out.vocab_size = program                ? program->vocab_size
                   : !out.records.empty() ? out.records.front().vocab_size()
                                          : 0;
  return out;
}

void constrain_training_batch(RealMatrix& probs, const Record& labels,
                              const CompiledRuleProgram& program) {
  apply_program_batch(probs, labels, program);
}

Record enforce_record(const Record& record, const CompiledRuleProgram& program,
                      const Rng& record_rng) {
  Record out(record.vocab_size());
  StepEvaluator eval(program);
  for (int t = 1; t <= record.steps(); ++t) {
    Bitset visit = record.visit(t);
    eval.constrain(visit, record_rng);
    eval.push_visit(visit);
    out.push_visit(std::move(visit));
  }
  return out;
}

}  // namespace seqrule
