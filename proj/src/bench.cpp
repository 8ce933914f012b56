#include "seqrule/bench.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "seqrule/rng.hpp"

namespace seqrule {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

BenchStats summarize(std::vector<double> samples) {
  BenchStats stats;
  stats.samples = std::move(samples);
  const auto n = static_cast<double>(stats.samples.size());
  for (double s : stats.samples) stats.mean += s;
  stats.mean /= n;
  if (stats.samples.size() > 1) {
    double var = 0.0;
    for (double s : stats.samples) var += (s - stats.mean) * (s - stats.mean);
    var /= (n - 1.0);
    stats.ci95 = 1.96 * std::sqrt(var / n);
  }
  return stats;
}

}  // namespace

BenchResult bench_generation(const GeneratorAdapter& adapter, const CompiledRuleProgram& program,
                             const GenerationConfig& config, int n, int repeats) {
  if (n < 1 || repeats < 1) throw std::invalid_argument("n and repeats must be >= 1");

  std::vector<double> unconstrained, constrained;
  for (int rep = 0; rep < repeats; ++rep) {
    GenerationConfig c = config;
    c.seed = config.seed + static_cast<std::uint64_t>(rep);

    auto start = Clock::now();
    Dataset plain = generate_dataset(adapter, nullptr, c, n);
    unconstrained.push_back(seconds_since(start) / n);
    (void)plain;

    start = Clock::now();
    Dataset ruled = generate_dataset(adapter, &program, c, n);
    constrained.push_back(seconds_since(start) / n);
    (void)ruled;
  }

  BenchResult result;
  result.unconstrained = summarize(std::move(unconstrained));
  result.constrained = summarize(std::move(constrained));
  result.slowdown_percent =
      (result.constrained.mean / result.unconstrained.mean - 1.0) * 100.0;
  return result;
}

namespace {

Record random_record(int steps, int vocab, double density, const Rng& rng) {
  Record rec(vocab);
  for (int t = 1; t <= steps; ++t) {
    Bitset v(static_cast<std::size_t>(vocab));
    for (int c = 0; c < vocab; ++c)
      if (rng.uniform(static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(c)) < density)
        v.set(static_cast<std::size_t>(c));
    rec.push_visit(std::move(v));
  }
  return rec;
}

// Small fixed-shape rule set over the full-history category, so the batch
// pass is dominated by mask construction, aggregation and rule execution.
RuleSet scaling_rules(int vocab) {
  RuleSet rs;
  rs.vocab_size = vocab;
  for (int i = 0; i < 5; ++i) {
    Rule r;
    r.id = "t" + std::to_string(i);
    r.temporal = TemporalComponent::all_past();
    r.antecedent = {past(i % vocab), not_cur((i + 1) % vocab)};
    r.output_code = (vocab / 2 + i) % vocab;
    r.alpha = 1.0;
    rs.rules.push_back(std::move(r));
  }
  return rs;
}

double time_batch_pass(int steps, int vocab, HistoryKernel kernel, const Rng& rng) {
  auto program = compile_program(scaling_rules(vocab));
  Record labels = random_record(steps, vocab, 0.2, rng);
  RealMatrix work(steps, vocab, 0.5);

  // Training-mode cost does not depend on the probability values, so the
  // work matrix is reused across repetitions. Repeat until the measurement
  // is comfortably above timer resolution.
  int reps = 1;
  double elapsed = 0.0;
  while (true) {
    auto start = Clock::now();
    for (int i = 0; i < reps; ++i) apply_program_batch(work, labels, program, kernel);
    elapsed = seconds_since(start);
    if (elapsed > 0.03 || reps > (1 << 20)) break;
    reps *= 2;
  }
  return elapsed / reps;
}

}  // namespace

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("slope fit needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double lx = std::log(x[i]);
    double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ScalingResult scaling_sweep(const std::vector<int>& steps_sweep, int fixed_vocab,
                            const std::vector<int>& vocab_sweep, int fixed_steps,
                            HistoryKernel kernel, std::uint64_t seed) {
  const Rng rng(seed);
  ScalingResult result;

  std::vector<double> xs, ys;
  for (int T : steps_sweep) {
    double best = 1e300;
    for (int trial = 0; trial < 5; ++trial)
      best = std::min(best, time_batch_pass(T, fixed_vocab, kernel, rng.fork(static_cast<std::uint64_t>(T))));
    result.vs_steps.push_back({T, fixed_vocab, best});
    xs.push_back(static_cast<double>(T));
    ys.push_back(best);
  }
  result.slope_steps = loglog_slope(xs, ys);

  xs.clear();
  ys.clear();
  for (int C : vocab_sweep) {
    double best = 1e300;
    for (int trial = 0; trial < 5; ++trial)
      best = std::min(best, time_batch_pass(fixed_steps, C, kernel, rng.fork(0x1000 + static_cast<std::uint64_t>(C))));
    result.vs_vocab.push_back({fixed_steps, C, best});
    xs.push_back(static_cast<double>(C));
    ys.push_back(best);
  }
  result.slope_vocab = loglog_slope(xs, ys);
  return result;
}

}  // namespace seqrule
