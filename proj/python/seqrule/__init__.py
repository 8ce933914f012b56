"""Temporal rule constraints for autoregressive sequence generators."""

try:
    from . import _core
except ImportError:  # development layout: extension lives in the CMake build tree
    import _core

CompiledRuleProgram = _core.CompiledRuleProgram
Dataset = _core.Dataset
FreqModel = _core.FreqModel
RuleParseError = _core.RuleParseError
RuleSet = _core.RuleSet
RuleValidationError = _core.RuleValidationError
ViolationReport = _core.ViolationReport
check_violations = _core.check_violations
compile_program = _core.compile_program
constrain_step = _core.constrain_step
constrain_training_batch = _core.constrain_training_batch
convert_cnf = _core.convert_cnf
dataset_from_arrays = _core.dataset_from_arrays
generate = _core.generate
generate_with_adapter = _core.generate_with_adapter
load_dataset = _core.load_dataset
mine_rules = _core.mine_rules
parse_rules = _core.parse_rules
save_dataset = _core.save_dataset
serialize_rules = _core.serialize_rules
synth_dataset = _core.synth_dataset
synth_demo_groups = _core.synth_demo_groups
train_constrained = _core.train_constrained
validate_rules = _core.validate_rules

__all__ = [
    "CompiledRuleProgram",
    "Dataset",
    "FreqModel",
    "RuleParseError",
    "RuleSet",
    "RuleValidationError",
    "ViolationReport",
    "check_violations",
    "compile_program",
    "constrain_step",
    "constrain_training_batch",
    "convert_cnf",
    "dataset_from_arrays",
    "generate",
    "generate_with_adapter",
    "load_dataset",
    "mine_rules",
    "parse_rules",
    "save_dataset",
    "serialize_rules",
    "synth_dataset",
    "synth_demo_groups",
    "train_constrained",
    "validate_rules",
]
