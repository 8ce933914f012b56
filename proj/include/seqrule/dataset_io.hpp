#pragma once

#include <iosfwd>
#include <string>

#include "seqrule/rule.hpp"

namespace seqrule {

/// Line-delimited record format:
///
///   #VOCAB <n> #MAXT <t>
///   7,12 -  3,5,9
///
/// One record per line; visits are space-separated; a visit is a
/// comma-separated sorted list of code indices, `-` when empty. Lines
/// starting with `#` after the header are comments; blank lines are
/// skipped.
Dataset read_dataset(std::istream& in);
Dataset read_dataset_file(const std::string& path);

void write_dataset(const Dataset& dataset, std::ostream& out);
void write_dataset_file(const Dataset& dataset, const std::string& path);

/// Helpers shared by the CLI for rule files.
RuleSet read_rules_file(const std::string& path);
void write_rules_file(const RuleSet& rules, const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace seqrule
