// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Bounds and tolerances are pinned in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "seqrule/bench.hpp"
#include "seqrule/cnf.hpp"
#include "seqrule/engine.hpp"
#include "seqrule/miner.hpp"
#include "seqrule/neuron.hpp"
#include "seqrule/oracle.hpp"
#include "seqrule/program.hpp"
#include "seqrule/synth.hpp"
#include "seqrule/temporal.hpp"
#include "seqrule/toygen.hpp"
#include "support/generators.hpp"

using namespace seqrule;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail,
            double seconds) {
  std::printf("[%s] %2d. %s: %s (%.1fs)\n", pass ? "PASS" : "FAIL", number, name.c_str(),
              detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

class Timer {
 public:
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Shared desk-scale pipeline: synthetic data, mined rules, fitted model.
struct Pipeline {
  SynthConfig config;
  Dataset train;
  RuleSet rules;
  CompiledRuleProgram program;
  FreqModel model;

  Pipeline()
      : config(default_synth_config()),
        train(synth_dataset(config)),
        rules(mine_all(train, config.demo_groups, MinerThresholds{})),
        program(compile_program(rules)),
        model(FreqModel::fit(train)) {}
};

// 1. Generate 10,000 records with the mined hard rules; the checker must
// report exactly zero violations and 100% valid records.
void criterion_1(const Pipeline& p) {
  Timer timer;
  GenerationConfig config;
  config.max_steps = 100;
  config.end_code = p.config.vocab_size - 1;
  config.seed = 20240607;
  config.threads = 4;
  Dataset generated = generate_dataset(p.model.adapter(), &p.program, config, 10000);

  auto report_v = check_violations(generated, p.rules, 4);
  bool pass = report_v.static_violations == 0 && report_v.temporal_violations == 0 &&
              report_v.valid_records == report_v.records && report_v.records == 10000;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "10000 records, %zu hard rules -> static=%lld temporal=%lld valid=%.1f%%",
                p.rules.rules.size(), report_v.static_violations, report_v.temporal_violations,
                report_v.percent_valid());
  report(1, "zero-violation guarantee", pass, detail, timer.elapsed());
}

// 2. CNF/entailment equivalence on 1,000 random CNF expressions, checked by
// exhaustive truth tables.
void criterion_2() {
  Timer timer;
  std::mt19937_64 rng(611);
  long long checked = 0;
  bool pass = true;
  for (int iter = 0; iter < 1000 && pass; ++iter) {
    auto expr = testing::random_cnf(rng, 12, 8);
    auto rules = cnf_to_rules(expr);
    unsigned n = static_cast<unsigned>(expr.variables.size());
    for (unsigned bits = 0; bits < (1u << n); ++bits) {
      Bitset h(static_cast<std::size_t>(expr.vocab_size));
      Bitset v(static_cast<std::size_t>(expr.vocab_size));
      for (std::size_t i = 0; i < expr.variables.size(); ++i) {
        const CnfVariable& var = expr.variables[i];
        if (bits & (1u << i))
          (var.scope == Scope::kHistory ? h : v).set(static_cast<std::size_t>(var.code));
      }

      bool sat = true;
      for (const auto& clause : expr.clauses) {
        bool any = false;
        for (const auto& lit : clause) {
          const CnfVariable& var = expr.variables[static_cast<std::size_t>(lit.var)];
          bool val = (var.scope == Scope::kHistory ? h : v).test(static_cast<std::size_t>(var.code));
          any = any || (lit.negated ? !val : val);
        }
        sat = sat && any;
      }

      bool violated = false;
      for (const auto& rule : rules.rules) {
        bool fire = true;
        for (const auto& lit : rule.antecedent) {
          bool val = (lit.scope == Scope::kHistory ? h : v).test(static_cast<std::size_t>(lit.code));
          if (lit.negated()) val = !val;
          fire = fire && val;
        }
        if (fire && v.test(static_cast<std::size_t>(rule.output_code)) != (rule.alpha == 1.0))
          violated = true;
      }
      ++checked;
      if (sat != !violated) {
        pass = false;
        break;
      }
    }
  }
  char detail[120];
  std::snprintf(detail, sizeof(detail), "1000 expressions, %lld assignments, exact agreement",
                checked);
  report(2, "CNF-to-entailment equivalence", pass, detail, timer.elapsed());
}

// 3. Compiled path equals the one-rule-at-a-time oracle bit for bit, in
// both generation and training modes.
void criterion_3() {
  Timer timer;
  std::mt19937_64 rng(333);
  bool pass = true;
  int instances = 0;
  while (instances < 500) {
    int vocab = 8 + static_cast<int>(rng() % 57);  // <= 64
    int n_rules = 1 + static_cast<int>(rng() % 40);
    testing::RulesetOptions options;
    options.distinct_outputs = rng() % 4 != 0;
    auto rs = testing::random_ruleset(rng, vocab, n_rules, options);
    if (!validate_ruleset(rs).ok()) continue;
    ++instances;
    auto prog = compile_program(rs);

    int steps = 1 + static_cast<int>(rng() % 32);
    Record rec = testing::random_record(rng, vocab, steps);
    const Rng rec_rng(rng());

    if (enforce_record(rec, prog, rec_rng) != apply_rules_naive(rec, rs, rec_rng)) {
      pass = false;
      break;
    }

    RealMatrix fast(steps, vocab, 0.5), slow(steps, vocab, 0.5);
    constrain_training_batch(fast, rec, prog);
    apply_rules_naive_train(slow, rec, rs);
    if (!(fast == slow)) {
      pass = false;
      break;
    }
  }
  report(3, "batch/step equivalence", pass, "500 instances, exact on every bit",
         timer.elapsed());
}

// 4. The temporal index function on mixed absolute and relative selectors.
void criterion_4() {
  Timer timer;
  auto tc = TemporalComponent::of({-1, 1, 4});
  bool pass = resolve_indices(tc, 1) == std::vector<int>{} &&
              resolve_indices(tc, 2) == std::vector<int>{1} &&
              resolve_indices(tc, 3) == std::vector<int>{1, 2} &&
              resolve_indices(tc, 10) == std::vector<int>{1, 4, 9};
  report(4, "temporal index conformance", pass,
         "{-1,1,4}: f(1)={} f(2)={1} f(3)={1,2} f(10)={1,4,9}", timer.elapsed());
}

// 5. The five-literal worked rule compiles to threshold 2 and fires exactly
// under its stated condition (all 32 input combinations).
void criterion_5() {
  Timer timer;
  Rule rule;
  rule.id = "gi";
  rule.temporal = TemporalComponent::all_past();
  rule.antecedent = {past(0), cur(2), not_past(1), not_cur(3), not_cur(4)};
  rule.output_code = 5;
  rule.alpha = 1.0;
  auto neuron = compile_neuron(rule, 6);

  bool pass = neuron.threshold == 2;
  for (int bits = 0; bits < 32 && pass; ++bits) {
    Bitset h(6), v(6);
    h.assign(0, bits & 1);
    h.assign(1, bits & 2);
    v.assign(2, bits & 4);
    v.assign(3, bits & 8);
    v.assign(4, bits & 16);
    bool expect = (bits & 1) && (bits & 4) && !(bits & 2) && !(bits & 8) && !(bits & 16);
    pass = neuron.fires(activation_sum(neuron, h, v)) == expect;
  }
  report(5, "rule neuron conformance", pass, "threshold 2; 32/32 input combinations",
         timer.elapsed());
}

// 6. Empirical firing frequency of an alpha=0.01 rule over 100,000 draws
// falls inside the exact central 99% binomial interval.
void criterion_6() {
  Timer timer;
  const int n = 100000;
  const double p = 0.01;

  // Exact binomial quantiles via the recurrent pmf.
  long long k_lo = -1, k_hi = -1;
  double log_pmf = static_cast<double>(n) * std::log1p(-p);
  double cdf = std::exp(log_pmf);
  const double log_odds = std::log(p) - std::log1p(-p);
  for (long long k = 0; k < n; ++k) {
    if (k_lo < 0 && cdf > 0.005) k_lo = k;
    if (cdf >= 0.995) {
      k_hi = k;
      break;
    }
    log_pmf += std::log(static_cast<double>(n - k)) - std::log(static_cast<double>(k + 1)) +
               log_odds;
    cdf += std::exp(log_pmf);
  }

  Rule rule;
  rule.id = "soft";
  rule.output_code = 0;
  rule.alpha = p;
  auto neuron = compile_neuron(rule, 1);
  const Rng rng(424242);
  long long fired_ones = 0;
  for (long long i = 0; i < n; ++i) {
    Bitset visit(1);
    apply_consequent(neuron, 0, visit, rng, static_cast<std::uint64_t>(i));
    fired_ones += visit.test(0);
  }

  bool pass = fired_ones >= k_lo && fired_ones <= k_hi;
  char detail[160];
  std::snprintf(detail, sizeof(detail), "observed %lld of 100000 in exact 99%% interval [%lld, %lld]",
                fired_ones, k_lo, k_hi);
  report(6, "soft-constraint calibration", pass, detail, timer.elapsed());
}

// 7. The batch pass scales quadratically in T and linearly in |C|.
void criterion_7() {
  Timer timer;
  auto result = scaling_sweep({32, 48, 64, 96, 128, 192, 256, 384, 512}, 256,
                              {64, 96, 128, 192, 256, 384, 512, 768, 1024}, 256,
                              HistoryKernel::kMatMul, 7);
  bool pass = result.slope_steps >= 1.7 && result.slope_steps <= 2.3 &&
              result.slope_vocab >= 0.8 && result.slope_vocab <= 1.2;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "slope vs T = %.3f (need [1.7,2.3]), slope vs |C| = %.3f (need [0.8,1.2])",
                result.slope_steps, result.slope_vocab);
  report(7, "runtime scaling", pass, detail, timer.elapsed());
}

// 8. Generation overhead of constraint enforcement stays under 2x on the
// toy model; the measured slowdown is reported, not compared to any
// hardware-specific figure.
void criterion_8(const Pipeline& p) {
  Timer timer;
  GenerationConfig config;
  config.max_steps = 100;
  config.end_code = p.config.vocab_size - 1;
  config.seed = 5;
  auto result = bench_generation(p.model.adapter(), p.program, config, 300, 5);
  bool pass = result.constrained.mean < 2.0 * result.unconstrained.mean;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "%zu rules: %.2f%% slowdown (%.3g -> %.3g s/record), bound < 2x",
                p.rules.rules.size(), result.slowdown_percent, result.unconstrained.mean,
                result.constrained.mean);
  report(8, "generation overhead", pass, detail, timer.elapsed());
}

// 9. On rule-consistent data the constrained training loss never exceeds
// the unconstrained loss, epoch for epoch.
void criterion_9(const Pipeline& p) {
  Timer timer;
  Dataset subset;
  subset.vocab_size = p.train.vocab_size;
  subset.records.assign(p.train.records.begin(), p.train.records.begin() + 800);
  auto [model, trace] = train_constrained(subset, &p.program, 5);

  bool pass = trace.constrained_nll.size() == 5;
  for (std::size_t e = 0; e < trace.constrained_nll.size(); ++e)
    pass = pass && trace.constrained_nll[e] <= trace.unconstrained_nll[e];
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "5 epochs, final constrained %.4f <= unconstrained %.4f",
                trace.constrained_nll.back(), trace.unconstrained_nll.back());
  report(9, "constrained-training loss", pass, detail, timer.elapsed());
}

// 10. Every planted pattern is recovered exactly at the default
// thresholds, and 20 unplanted datasets yield no data-driven rules at all.
void criterion_10() {
  Timer timer;
  auto config = default_synth_config();
  Dataset planted = synth_dataset(config);
  auto mined = mine_all(planted, config.demo_groups, MinerThresholds{});
  std::vector<std::string> expected = {"dx_0_1", "dx_2_3", "dx_3_4", "co_31_30",
                                       "df_0_40", "pr_21_20", "ps_10"};
  bool pass = mined.rules.size() == expected.size();
  for (std::size_t i = 0; pass && i < expected.size(); ++i)
    pass = mined.rules[i].id == expected[i];

  int clean = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto cfg = unplanted_synth_config(seed * 1234567);
    Dataset ds = synth_dataset(cfg);
    auto rules = mine_all(ds, cfg.demo_groups, MinerThresholds{});
    bool only_chains = true;
    for (const auto& r : rules.rules) only_chains = only_chains && r.id.rfind("dx_", 0) == 0;
    clean += only_chains && rules.rules.size() == 3;
  }
  pass = pass && clean == 20;
  char detail[120];
  std::snprintf(detail, sizeof(detail),
                "all 5 pattern types recovered exactly; %d/20 unplanted datasets clean", clean);
  report(10, "miner recovery", pass, detail, timer.elapsed());
}

}  // namespace

int main() {
  Timer total;
  Pipeline pipeline;

  criterion_1(pipeline);
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8(pipeline);
  criterion_9(pipeline);
  criterion_10();

  std::printf("%s: %d/10 criteria passed (%.1fs)\n", g_failures == 0 ? "SUCCESS" : "FAILURE",
              10 - g_failures, total.elapsed());
  return g_failures == 0 ? 0 : 1;
}
