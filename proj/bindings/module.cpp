// Python bindings for the rule engine: rule parsing and validation, CNF
// conversion, program compilation, per-step and training-batch enforcement,
// generation, mining, the toy count model and the synthetic data generator.

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

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

namespace py = pybind11;
using namespace seqrule;

namespace {

Record record_from_array(py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast> arr,
                         int vocab_hint = -1) {
  if (arr.ndim() != 2) throw std::invalid_argument("record array must be 2-D (steps x codes)");
  int steps = static_cast<int>(arr.shape(0));
  int vocab = static_cast<int>(arr.shape(1));
  if (vocab_hint > 0 && vocab != vocab_hint)
    throw std::invalid_argument("record width does not match vocabulary");
  Record rec(vocab);
  auto view = arr.unchecked<2>();
  for (int t = 0; t < steps; ++t) {
    Bitset v(static_cast<std::size_t>(vocab));
    for (int c = 0; c < vocab; ++c)
      if (view(t, c)) v.set(static_cast<std::size_t>(c));
    rec.push_visit(std::move(v));
  }
  return rec;
}

py::array_t<std::uint8_t> record_to_array(const Record& rec) {
  py::array_t<std::uint8_t> arr({rec.steps(), rec.vocab_size()});
  auto view = arr.mutable_unchecked<2>();
  for (int t = 0; t < rec.steps(); ++t)
    for (int c = 0; c < rec.vocab_size(); ++c)
      view(t, c) = rec.visit(t + 1).test(static_cast<std::size_t>(c)) ? 1 : 0;
  return arr;
}

GeneratorAdapter wrap_adapter(const py::function& fn) {
  return [fn](const Record& prefix) {
    py::gil_scoped_acquire gil;
    py::object out = fn(record_to_array(prefix));
    return out.cast<std::vector<double>>();
  };
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Temporal rule constraints for autoregressive sequence generators";

  py::register_exception<ParseError>(m, "RuleParseError");
  py::register_exception<ValidationError>(m, "RuleValidationError");

  py::class_<RuleSet>(m, "RuleSet")
      .def_readonly("vocab_size", &RuleSet::vocab_size)
      .def("__len__", [](const RuleSet& rs) { return rs.rules.size(); })
      .def("rule_ids",
           [](const RuleSet& rs) {
             std::vector<std::string> ids;
             for (const auto& r : rs.rules) ids.push_back(r.id);
             return ids;
           })
      .def("to_text", &serialize_rules)
      .def("__repr__", [](const RuleSet& rs) {
        return "<RuleSet vocab=" + std::to_string(rs.vocab_size) + " rules=" +
               std::to_string(rs.rules.size()) + ">";
      });

  py::class_<Dataset>(m, "Dataset")
      .def_readonly("vocab_size", &Dataset::vocab_size)
      .def("__len__", [](const Dataset& ds) { return ds.records.size(); })
      .def("record",
           [](const Dataset& ds, std::size_t i) { return record_to_array(ds.records.at(i)); })
      .def("__repr__", [](const Dataset& ds) {
        return "<Dataset vocab=" + std::to_string(ds.vocab_size) + " records=" +
               std::to_string(ds.records.size()) + ">";
      });

  py::class_<CompiledRuleProgram>(m, "CompiledRuleProgram")
      .def_readonly("vocab_size", &CompiledRuleProgram::vocab_size)
      .def_property_readonly("group_count",
                             [](const CompiledRuleProgram& p) { return p.groups.size(); })
      .def("__repr__", [](const CompiledRuleProgram& p) {
        return "<CompiledRuleProgram vocab=" + std::to_string(p.vocab_size) + " groups=" +
               std::to_string(p.groups.size()) + ">";
      });

  py::class_<ViolationReport>(m, "ViolationReport")
      .def_readonly("records", &ViolationReport::records)
      .def_readonly("valid_records", &ViolationReport::valid_records)
      .def_readonly("static_violations", &ViolationReport::static_violations)
      .def_readonly("temporal_violations", &ViolationReport::temporal_violations)
      .def_property_readonly("total_violations", &ViolationReport::total_violations)
      .def_property_readonly("percent_valid", &ViolationReport::percent_valid)
      .def("format", &format_report)
      .def("__repr__", [](const ViolationReport& r) {
        return "<ViolationReport static=" + std::to_string(r.static_violations) + " temporal=" +
               std::to_string(r.temporal_violations) + ">";
      });

  py::class_<FreqModel>(m, "FreqModel")
      .def_static(
          "fit",
          [](const Dataset& ds, int hash_buckets, int index_buckets) {
            return FreqModel::fit(ds, FreqModelParams{hash_buckets, index_buckets});
          },
          py::arg("dataset"), py::arg("hash_buckets") = 16, py::arg("index_buckets") = 4)
      .def_property_readonly("vocab_size", &FreqModel::vocab_size)
      .def("predict",
           [](const FreqModel& model, py::array_t<std::uint8_t> prefix) {
             return model.predict(record_from_array(prefix, model.vocab_size()));
           })
      .def("save", &FreqModel::save)
      .def_static("load", &FreqModel::load);

  m.def("parse_rules", &parse_rules, py::arg("text"),
        "Parse the rule DSL text into a RuleSet");
  m.def("serialize_rules", &serialize_rules, py::arg("rules"));
  m.def(
      "validate_rules",
      [](const RuleSet& rs) {
        std::vector<std::pair<std::string, std::string>> issues;
        for (const auto& issue : validate_ruleset(rs).issues)
          issues.emplace_back(issue.rule_id, issue.reason);
        return issues;
      },
      py::arg("rules"), "Invariant violations as (rule_id, reason) pairs; empty means valid");
  m.def(
      "convert_cnf", [](const std::string& text) { return cnf_to_rules(parse_cnf(text)); },
      py::arg("text"), "Convert CNF text (VAR/CLAUSE lines) to an equivalent RuleSet");
  m.def("compile_program", &compile_program, py::arg("rules"));

  m.def(
      "constrain_step",
      [](py::array_t<std::uint8_t> prefix, py::array_t<std::uint8_t> visit,
         const CompiledRuleProgram& program, std::uint64_t seed, std::uint64_t record_index) {
        Record pre = record_from_array(prefix, program.vocab_size);
        Record one = record_from_array(visit, program.vocab_size);
        if (one.steps() != 1) throw std::invalid_argument("visit must be a 1 x vocab array");
        Bitset out = constrain_step(pre, one.visit(1), program, Rng(seed).fork(record_index));
        Record wrapped(program.vocab_size);
        wrapped.push_visit(out);
        return record_to_array(wrapped);
      },
      py::arg("prefix"), py::arg("visit"), py::arg("program"), py::arg("seed") = 0,
      py::arg("record_index") = 0,
      "Enforce the program on one sampled visit given the record so far");

  m.def(
      "constrain_training_batch",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> probs,
         py::array_t<std::uint8_t> labels, const CompiledRuleProgram& program) {
        Record lab = record_from_array(labels, program.vocab_size);
        if (probs.ndim() != 2 || static_cast<int>(probs.shape(0)) != lab.steps() ||
            static_cast<int>(probs.shape(1)) != lab.vocab_size())
          throw std::invalid_argument("probability matrix shape does not match labels");
        RealMatrix matrix(lab.steps(), lab.vocab_size());
        auto view = probs.unchecked<2>();
        for (int t = 0; t < matrix.rows; ++t)
          for (int c = 0; c < matrix.cols; ++c) matrix.at(t, c) = view(t, c);
        constrain_training_batch(matrix, lab, program);
        py::array_t<double> out({matrix.rows, matrix.cols});
        auto mut = out.mutable_unchecked<2>();
        for (int t = 0; t < matrix.rows; ++t)
          for (int c = 0; c < matrix.cols; ++c) mut(t, c) = matrix.at(t, c);
        return out;
      },
      py::arg("probs"), py::arg("labels"), py::arg("program"),
      "Teacher-forced enforcement: returns the probability matrix with fired "
      "cells set to alpha");

  m.def(
      "generate",
      [](const FreqModel& model, const CompiledRuleProgram* program, int n, std::uint64_t seed,
         int max_steps, int end_code, int threads) {
        GenerationConfig config;
        config.max_steps = max_steps;
        config.end_code = end_code == -2 ? model.vocab_size() - 1 : end_code;
        config.seed = seed;
        config.threads = threads;
        Dataset out;
        {
          py::gil_scoped_release release;
          out = generate_dataset(model.adapter(), program, config, n);
        }
        out.vocab_size = model.vocab_size();
        return out;
      },
      py::arg("model"), py::arg("program") = nullptr, py::arg("n") = 100, py::arg("seed") = 0,
      py::arg("max_steps") = 100, py::arg("end_code") = -2, py::arg("threads") = 1,
      "Generate records from a fitted count model, optionally constrained");

  m.def(
      "generate_with_adapter",
      [](const py::function& adapter, const CompiledRuleProgram* program, int n,
         std::uint64_t seed, int max_steps, int end_code) {
        GenerationConfig config;
        config.max_steps = max_steps;
        config.end_code = end_code;
        config.seed = seed;
        return generate_dataset(wrap_adapter(adapter), program, config, n);
      },
      py::arg("adapter"), py::arg("program") = nullptr, py::arg("n") = 100, py::arg("seed") = 0,
      py::arg("max_steps") = 100, py::arg("end_code") = -1,
      "Generate records by calling a python function prefix -> probability vector");

  m.def("check_violations", &check_violations, py::arg("dataset"), py::arg("rules"),
        py::arg("threads") = 1);

  m.def(
      "mine_rules",
      [](const Dataset& ds, const std::vector<std::vector<int>>& demo_groups, int min_exclusive,
         int min_demo, int min_precede, int min_persist, int min_persist_repeat) {
        MinerThresholds thresholds{min_exclusive, min_demo, min_precede, min_persist,
                                   min_persist_repeat};
        return mine_all(ds, demo_groups, thresholds);
      },
      py::arg("dataset"), py::arg("demo_groups") = std::vector<std::vector<int>>{},
      py::arg("min_exclusive") = 10, py::arg("min_demo") = 500, py::arg("min_precede") = 10,
      py::arg("min_persist") = 10, py::arg("min_persist_repeat") = 5,
      "Run all five mining procedures");

  m.def(
      "train_constrained",
      [](const Dataset& ds, const CompiledRuleProgram* program, int epochs) {
        auto [model, trace] = train_constrained(ds, program, epochs);
        return py::make_tuple(std::move(model), trace.constrained_nll, trace.unconstrained_nll);
      },
      py::arg("dataset"), py::arg("program") = nullptr, py::arg("epochs") = 5,
      "Returns (model, constrained_nll_per_epoch, unconstrained_nll_per_epoch)");

  m.def(
      "synth_dataset",
      [](int n, std::uint64_t seed, bool planted, int vocab) {
        SynthConfig config = planted ? default_synth_config() : unplanted_synth_config(seed);
        config.n_records = n;
        config.seed = seed;
        if (vocab > 0) config.vocab_size = vocab;
        return synth_dataset(config);
      },
      py::arg("n") = 1000, py::arg("seed") = 1, py::arg("planted") = true, py::arg("vocab") = 0,
      "Synthetic sequence data with optional planted patterns");
  m.def(
      "synth_demo_groups",
      [](bool planted, std::uint64_t seed) {
        return (planted ? default_synth_config() : unplanted_synth_config(seed)).demo_groups;
      },
      py::arg("planted") = true, py::arg("seed") = 1);

  m.def("load_dataset", &read_dataset_file, py::arg("path"));
  m.def("save_dataset", &write_dataset_file, py::arg("dataset"), py::arg("path"));
  m.def(
      "dataset_from_arrays",
      [](const std::vector<py::array_t<std::uint8_t>>& arrays, int vocab) {
        Dataset ds;
        ds.vocab_size = vocab;
        for (const auto& arr : arrays) ds.records.push_back(record_from_array(arr, vocab));
        return ds;
      },
      py::arg("records"), py::arg("vocab"));
}
