#pragma once

#include <stdexcept>
#include <string>

#include "seqrule/rule.hpp"

namespace seqrule {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Parses the rule text format:
///
///   VOCAB <n>
///   RULE <id> [WHEN <literal> (AND <literal>)*] THEN <code> = <alpha>
///
/// where a literal is `cur[<code>]` or `past[<tc>][<code>]`, optionally
/// prefixed by NOT, and <tc> is a comma list of nonzero integers and/or `*`.
/// `#` starts a comment. A rule's temporal component is the union of all its
/// past selectors. Throws ParseError with line/column on bad input.
RuleSet parse_rules(const std::string& text);

/// Inverse of parse_rules: parse_rules(serialize_rules(rs)) == rs
/// field-for-field. Alpha is rendered with the shortest decimal that parses
/// back to the same double.
std::string serialize_rules(const RuleSet& rules);

/// Shortest decimal representation that round-trips through strtod.
std::string format_double(double value);

}  // namespace seqrule
