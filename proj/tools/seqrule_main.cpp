// seqrule: temporal rule constraints for autoregressive sequence generators.

#include <cstdio>
#include <iostream>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "seqrule/bench.hpp"
#include "seqrule/cnf.hpp"
#include "seqrule/dataset_io.hpp"
#include "seqrule/dsl.hpp"
#include "seqrule/engine.hpp"
#include "seqrule/miner.hpp"
#include "seqrule/oracle.hpp"
#include "seqrule/program.hpp"
#include "seqrule/synth.hpp"
#include "seqrule/toygen.hpp"

namespace {

using namespace seqrule;

std::vector<std::vector<int>> parse_demo_groups(const std::vector<std::string>& specs) {
  std::vector<std::vector<int>> groups;
  for (const auto& spec : specs) {
    std::vector<int> group;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) group.push_back(std::stoi(item));
    if (!group.empty()) groups.push_back(std::move(group));
  }
  return groups;
}

int cmd_validate(const std::string& rules_path, const std::string& dump_path) {
  auto rules = read_rules_file(rules_path);
  auto report = validate_ruleset(rules);
  std::cout << "rules " << rules.rules.size() << "\n" << report.to_string();
  if (!report.ok()) return 1;
  if (!dump_path.empty()) {
    std::ofstream os(dump_path);
    if (!os) throw std::runtime_error("cannot write " + dump_path);
    dump_program(compile_program(rules), os);
    std::cout << "program dump written to " << dump_path << "\n";
  }
  return 0;
}

int cmd_convert(const std::string& cnf_path, const std::string& out_path) {
  auto expr = parse_cnf(read_text_file(cnf_path));
  auto rules = cnf_to_rules(expr);
  write_rules_file(rules, out_path);
  std::cout << "clauses " << expr.clauses.size() << " rules " << rules.rules.size() << "\n";
  return 0;
}

int cmd_mine(const std::string& data_path, const std::string& out_path,
             const std::vector<std::string>& demo_specs, const MinerThresholds& thresholds) {
  auto ds = read_dataset_file(data_path);
  auto groups = parse_demo_groups(demo_specs);
  auto rules = mine_all(ds, groups, thresholds);
  write_rules_file(rules, out_path);

  int n_static = 0, n_temporal = 0;
  for (const auto& r : rules.rules) (r.is_temporal() ? n_temporal : n_static)++;
  std::cout << "mined " << rules.rules.size() << " rules (" << n_static << " static, "
            << n_temporal << " temporal)\n";
  return 0;
}

int cmd_generate(const std::string& model_path, const std::string& rules_path, int n,
                 std::uint64_t seed, const std::string& out_path, int max_steps, int end_code,
                 int threads) {
  auto model = FreqModel::load(model_path);

  CompiledRuleProgram program;
  bool constrained = !rules_path.empty();
  if (constrained) {
    auto rules = read_rules_file(rules_path);
    if (rules.vocab_size != model.vocab_size())
      throw std::runtime_error("rule vocabulary does not match model vocabulary");
    program = compile_program(rules);
  }

  GenerationConfig config;
  config.max_steps = max_steps;
  config.end_code = end_code >= -1 ? end_code : -1;
  if (end_code == -2) config.end_code = model.vocab_size() - 1;  // default: last code
  config.seed = seed;
  config.threads = threads;

  Dataset out = generate_dataset(model.adapter(), constrained ? &program : nullptr, config, n);
  out.vocab_size = model.vocab_size();
  write_dataset_file(out, out_path);
  std::cout << "generated " << n << " records"
            << (constrained ? " (constrained)" : " (unconstrained)") << "\n";
  return 0;
}

int cmd_check(const std::string& data_path, const std::string& rules_path,
              const std::string& mode, int threads, std::uint64_t seed) {
  auto ds = read_dataset_file(data_path);
  auto rules = read_rules_file(rules_path);
  if (rules.vocab_size != ds.vocab_size)
    throw std::runtime_error("rule vocabulary does not match dataset vocabulary");

  if (mode == "step") {
    auto report = check_violations(ds, rules, threads);
    std::cout << format_report(report);
    return report.total_violations() == 0 ? 0 : 1;
  }

  // Batch mode: re-apply the compiled program; for hard rules every changed
  // bit marks a violated cell.
  auto program = compile_program(rules);
  long long changed = 0;
  long long invalid_records = 0;
  for (std::size_t i = 0; i < ds.records.size(); ++i) {
    Record re = ds.records[i];
    apply_program_batch(re, program, Rng(seed).fork(i));
    if (re == ds.records[i]) continue;
    ++invalid_records;
    for (int t = 1; t <= re.steps(); ++t)
      for (int c = 0; c < re.vocab_size(); ++c)
        changed += re.visit(t).test(static_cast<std::size_t>(c)) !=
                   ds.records[i].visit(t).test(static_cast<std::size_t>(c));
  }
  std::cout << "records " << ds.records.size() << "\n"
            << "changed_cells " << changed << "\n"
            << "changed_records " << invalid_records << "\n";
  return changed == 0 ? 0 : 1;
}

int cmd_fit(const std::string& data_path, const std::string& out_path, int hash_buckets,
            int index_buckets) {
  auto ds = read_dataset_file(data_path);
  auto model = FreqModel::fit(ds, FreqModelParams{hash_buckets, index_buckets});
  model.save(out_path);
  std::cout << "fitted model on " << ds.records.size() << " records (vocab "
            << ds.vocab_size << ")\n";
  return 0;
}

int cmd_train(const std::string& data_path, const std::string& rules_path, int epochs,
              const std::string& out_path, int hash_buckets, int index_buckets) {
  auto ds = read_dataset_file(data_path);

  CompiledRuleProgram program;
  const CompiledRuleProgram* prog_ptr = nullptr;
  if (!rules_path.empty()) {
    program = compile_program(read_rules_file(rules_path));
    prog_ptr = &program;
  }

  auto [model, trace] =
      train_constrained(ds, prog_ptr, epochs, FreqModelParams{hash_buckets, index_buckets});
  for (std::size_t e = 0; e < trace.constrained_nll.size(); ++e)
    std::printf("epoch %zu constrained_nll %.6f unconstrained_nll %.6f\n", e + 1,
                trace.constrained_nll[e], trace.unconstrained_nll[e]);
  if (!out_path.empty()) model.save(out_path);
  return 0;
}

int cmd_synth(int n, int vocab, std::uint64_t seed, const std::string& out_path, bool plant) {
  SynthConfig config = plant ? default_synth_config() : unplanted_synth_config(seed);
  config.n_records = n;
  if (vocab > 0) config.vocab_size = vocab;
  config.seed = seed;
  Dataset ds = synth_dataset(config);
  write_dataset_file(ds, out_path);
  std::cout << "synthesized " << n << " records (vocab " << config.vocab_size << ")\n";
  return 0;
}

int cmd_bench(const std::string& model_path, const std::string& rules_path, int n, int repeats,
              std::uint64_t seed, int max_steps, int threads) {
  auto model = FreqModel::load(model_path);
  auto rules = read_rules_file(rules_path);
  auto program = compile_program(rules);

  GenerationConfig config;
  config.max_steps = max_steps;
  config.end_code = model.vocab_size() - 1;
  config.seed = seed;
  config.threads = threads;

  auto result = bench_generation(model.adapter(), program, config, n, repeats);
  std::printf("unconstrained s/record %.6g +- %.2g\n", result.unconstrained.mean,
              result.unconstrained.ci95);
  std::printf("constrained   s/record %.6g +- %.2g\n", result.constrained.mean,
              result.constrained.ci95);
  std::printf("slowdown %.2f%%\n", result.slowdown_percent);
  return 0;
}

int cmd_scaling(std::vector<int> t_sweep, int fixed_vocab, std::vector<int> c_sweep,
                int fixed_steps, const std::string& kernel_name, std::uint64_t seed) {
  if (t_sweep.empty()) t_sweep = {32, 48, 64, 96, 128, 192, 256, 384, 512};
  if (c_sweep.empty()) c_sweep = {64, 96, 128, 192, 256, 384, 512, 768, 1024};
  HistoryKernel kernel =
      kernel_name == "bitwise" ? HistoryKernel::kBitwise : HistoryKernel::kMatMul;

  auto result = scaling_sweep(t_sweep, fixed_vocab, c_sweep, fixed_steps, kernel, seed);
  for (const auto& p : result.vs_steps)
    std::printf("T %4d C %4d seconds %.6g\n", p.steps, p.vocab, p.seconds);
  for (const auto& p : result.vs_vocab)
    std::printf("T %4d C %4d seconds %.6g\n", p.steps, p.vocab, p.seconds);
  std::printf("slope_T %.3f\n", result.slope_steps);
  std::printf("slope_C %.3f\n", result.slope_vocab);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporal rule constraints for sequential generators"};
  app.require_subcommand(1);

  // validate
  std::string rules_path, dump_path;
  auto* validate = app.add_subcommand("validate", "Parse and validate a rule file");
  validate->add_option("rules", rules_path, "rule DSL file")->required();
  validate->add_option("--dump", dump_path, "write compiled W/theta/alpha dump");

  // convert
  std::string cnf_path, convert_out;
  auto* convert = app.add_subcommand("convert", "Convert a CNF file to rules");
  convert->add_option("cnf", cnf_path, "CNF input file")->required();
  convert->add_option("out", convert_out, "output rule file")->required();

  // mine
  std::string mine_data, mine_out;
  std::vector<std::string> demo_specs;
  MinerThresholds thresholds;
  auto* mine = app.add_subcommand("mine", "Mine rules from a dataset");
  mine->add_option("data", mine_data, "dataset file")->required();
  mine->add_option("out", mine_out, "output rule file")->required();
  mine->add_option("--demo-group", demo_specs, "comma-separated demographic group (repeatable)");
  mine->add_option("--min-exclusive", thresholds.min_exclusive, "co-occurrence threshold");
  mine->add_option("--min-demo", thresholds.min_demo, "demographic prevalence threshold");
  mine->add_option("--min-precede", thresholds.min_precede, "precedence threshold");
  mine->add_option("--min-persist", thresholds.min_persist, "persistence total threshold");
  mine->add_option("--min-persist-repeat", thresholds.min_persist_repeat,
                   "persistence repeat threshold");

  // generate
  std::string gen_model, gen_rules, gen_out;
  int gen_n = 100, gen_max_steps = 100, gen_end_code = -2, gen_threads = 1;
  std::uint64_t gen_seed = 0;
  auto* generate = app.add_subcommand("generate", "Generate records from a model");
  generate->add_option("--model", gen_model, "model checkpoint")->required();
  generate->add_option("--rules", gen_rules, "rule file (omit for unconstrained)");
  generate->add_option("-n", gen_n, "number of records");
  generate->add_option("--seed", gen_seed, "master seed");
  generate->add_option("-o,--out", gen_out, "output dataset")->required();
  generate->add_option("--max-steps", gen_max_steps, "visit cap per record");
  generate->add_option("--end-code", gen_end_code,
                       "stop code (-1 fixed length, default: last code)");
  generate->add_option("--threads", gen_threads, "worker threads");

  // check
  std::string check_data, check_rules, check_mode = "step";
  int check_threads = 1;
  std::uint64_t check_seed = 0;
  auto* check = app.add_subcommand("check", "Count rule violations in a dataset");
  check->add_option("data", check_data, "dataset file")->required();
  check->add_option("rules", check_rules, "rule file")->required();
  check->add_option("--mode", check_mode, "step (oracle) or batch (compiled re-apply)")
      ->check(CLI::IsMember({"step", "batch"}));
  check->add_option("--threads", check_threads, "worker threads");
  check->add_option("--seed", check_seed, "seed for batch-mode soft draws");

  // fit
  std::string fit_data, fit_out;
  int fit_hash = 16, fit_index = 4;
  auto* fit = app.add_subcommand("fit", "Fit the count model on a dataset");
  fit->add_option("data", fit_data, "dataset file")->required();
  fit->add_option("-o,--out", fit_out, "model checkpoint")->required();
  fit->add_option("--buckets", fit_hash, "previous-visit hash buckets");
  fit->add_option("--index-buckets", fit_index, "visit index buckets");

  // train
  std::string train_data, train_rules, train_out;
  int train_epochs = 5, train_hash = 16, train_index = 4;
  auto* train = app.add_subcommand("train", "Constrained training with a loss trace");
  train->add_option("data", train_data, "dataset file")->required();
  train->add_option("--rules", train_rules, "rule file (omit for unconstrained)");
  train->add_option("--epochs", train_epochs, "count accumulation epochs");
  train->add_option("-o,--out", train_out, "model checkpoint");
  train->add_option("--buckets", train_hash, "previous-visit hash buckets");
  train->add_option("--index-buckets", train_index, "visit index buckets");

  // synth
  std::string synth_out;
  int synth_n = 1000, synth_vocab = 0;
  std::uint64_t synth_seed = 1;
  bool synth_plant = true;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth->add_option("-n", synth_n, "number of records");
  synth->add_option("--vocab", synth_vocab, "vocabulary size (0 = default)");
  synth->add_option("--seed", synth_seed, "seed");
  synth->add_option("-o,--out", synth_out, "output dataset")->required();
  synth->add_flag("--plant,!--no-plant", synth_plant, "include planted patterns");

  // bench
  std::string bench_model, bench_rules;
  int bench_n = 200, bench_repeats = 25, bench_max_steps = 100, bench_threads = 1;
  std::uint64_t bench_seed = 0;
  auto* bench = app.add_subcommand("bench", "Constrained vs unconstrained generation speed");
  bench->add_option("--model", bench_model, "model checkpoint")->required();
  bench->add_option("--rules", bench_rules, "rule file")->required();
  bench->add_option("-n", bench_n, "records per run");
  bench->add_option("--repeats", bench_repeats, "independent runs");
  bench->add_option("--seed", bench_seed, "master seed");
  bench->add_option("--max-steps", bench_max_steps, "visit cap per record");
  bench->add_option("--threads", bench_threads, "worker threads");

  // scaling
  std::vector<int> scale_t, scale_c;
  int scale_fixed_vocab = 256, scale_fixed_steps = 256;
  std::string scale_kernel = "matmul";
  std::uint64_t scale_seed = 7;
  auto* scaling = app.add_subcommand("scaling", "Fit batch-pass runtime slopes vs T and |C|");
  scaling->add_option("--t-sweep", scale_t, "step counts to sweep");
  scaling->add_option("--c-sweep", scale_c, "vocabulary sizes to sweep");
  scaling->add_option("--fixed-vocab", scale_fixed_vocab, "vocabulary for the T sweep");
  scaling->add_option("--fixed-steps", scale_fixed_steps, "steps for the |C| sweep");
  scaling->add_option("--kernel", scale_kernel, "history kernel: matmul or bitwise")
      ->check(CLI::IsMember({"matmul", "bitwise"}));
  scaling->add_option("--seed", scale_seed, "seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(rules_path, dump_path);
    if (*convert) return cmd_convert(cnf_path, convert_out);
    if (*mine) return cmd_mine(mine_data, mine_out, demo_specs, thresholds);
    if (*generate)
      return cmd_generate(gen_model, gen_rules, gen_n, gen_seed, gen_out, gen_max_steps,
                          gen_end_code, gen_threads);
    if (*check) return cmd_check(check_data, check_rules, check_mode, check_threads, check_seed);
    if (*fit) return cmd_fit(fit_data, fit_out, fit_hash, fit_index);
    if (*train)
      return cmd_train(train_data, train_rules, train_epochs, train_out, train_hash, train_index);
    if (*synth) return cmd_synth(synth_n, synth_vocab, synth_seed, synth_out, synth_plant);
    if (*bench)
      return cmd_bench(bench_model, bench_rules, bench_n, bench_repeats, bench_seed,
                       bench_max_steps, bench_threads);
    if (*scaling)
      return cmd_scaling(scale_t, scale_fixed_vocab, scale_c, scale_fixed_steps, scale_kernel,
                         scale_seed);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << e.what();
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
