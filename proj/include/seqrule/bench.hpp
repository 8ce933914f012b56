#pragma once

#include <cstdint>
#include <vector>

#include "seqrule/engine.hpp"
#include "seqrule/program.hpp"

namespace seqrule {

struct BenchStats {
  double mean = 0.0;      // seconds per record
  double ci95 = 0.0;      // 1.96 standard errors over the repeats
  std::vector<double> samples;
};

struct BenchResult {
  BenchStats unconstrained;
  BenchStats constrained;
  double slowdown_percent = 0.0;  // (constrained/unconstrained - 1) * 100
};

/// Times generation of n records with and without the program, repeated
/// with distinct seeds; reports mean +- 95% CI seconds per record.
BenchResult bench_generation(const GeneratorAdapter& adapter, const CompiledRuleProgram& program,
                             const GenerationConfig& config, int n, int repeats);

struct ScalingPoint {
  int steps = 0;
  int vocab = 0;
  double seconds = 0.0;
};

struct ScalingResult {
  std::vector<ScalingPoint> vs_steps;  // vocab fixed
  std::vector<ScalingPoint> vs_vocab;  // steps fixed
  double slope_steps = 0.0;            // log-log fit of batch-pass time vs T
  double slope_vocab = 0.0;            // log-log fit of batch-pass time vs |C|
};

/// Times the whole training-mode batch pass (mask construction, history
/// aggregation, rule execution, output setting) on random records over a
/// sweep of T and |C| and fits log-log slopes.
ScalingResult scaling_sweep(const std::vector<int>& steps_sweep, int fixed_vocab,
                            const std::vector<int>& vocab_sweep, int fixed_steps,
                            HistoryKernel kernel = HistoryKernel::kMatMul,
                            std::uint64_t seed = 7);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace seqrule
