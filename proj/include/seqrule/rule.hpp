#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqrule/bitset.hpp"

namespace seqrule {

/// Which half of the rule input a literal addresses: the aggregated history
/// vector or the visit currently being produced.
enum class Scope : std::uint8_t { kHistory, kCurrent };

enum class Polarity : std::uint8_t { kPositive, kNegated };

/// Selector over past time steps. Positive entries are absolute 1-based
/// visit numbers, negative entries are offsets from the current step
/// (-1 = previous visit). The wildcard selects every earlier step.
/// Empty with no wildcard means the rule is static.
class TemporalComponent {
 public:
  TemporalComponent() = default;

  static TemporalComponent all_past() {
    TemporalComponent tc;
    tc.all_past_ = true;
    return tc;
  }

  static TemporalComponent of(std::initializer_list<int> idx) {
    TemporalComponent tc;
    for (int k : idx) tc.add_index(k);
    return tc;
  }

  void add_index(int k) {
    if (k == 0) throw std::invalid_argument("temporal index 0 is not allowed");
    auto it = std::lower_bound(indices_.begin(), indices_.end(), k);
    if (it == indices_.end() || *it != k) indices_.insert(it, k);
  }

  void set_all_past(bool v) { all_past_ = v; }

  bool has_all_past() const { return all_past_; }
  bool is_static() const { return !all_past_ && indices_.empty(); }

  /// Explicit indices, sorted ascending (relative before absolute).
  const std::vector<int>& indices() const { return indices_; }

  bool operator==(const TemporalComponent&) const = default;

 private:
  bool all_past_ = false;
  std::vector<int> indices_;
};

struct Literal {
  Scope scope = Scope::kCurrent;
  int code = 0;  // 0-based code index
  Polarity polarity = Polarity::kPositive;

  bool negated() const { return polarity == Polarity::kNegated; }
  bool operator==(const Literal&) const = default;
};

inline Literal cur(int code) { return {Scope::kCurrent, code, Polarity::kPositive}; }
inline Literal not_cur(int code) { return {Scope::kCurrent, code, Polarity::kNegated}; }
inline Literal past(int code) { return {Scope::kHistory, code, Polarity::kPositive}; }
inline Literal not_past(int code) { return {Scope::kHistory, code, Polarity::kNegated}; }

/// One entailment: a conjunction of literals over (history, current)
/// implying an output code with probability alpha. alpha in {0,1} makes the
/// constraint hard.
struct Rule {
  std::string id;
  TemporalComponent temporal;
  std::vector<Literal> antecedent;
  int output_code = 0;
  double alpha = 1.0;

  bool is_temporal() const { return !temporal.is_static(); }
  bool is_hard() const { return alpha == 0.0 || alpha == 1.0; }
  bool operator==(const Rule&) const = default;
};

struct RuleSet {
  int vocab_size = 0;
  std::vector<Rule> rules;
  bool operator==(const RuleSet&) const = default;
};

/// A sequence of multi-hot visits over a fixed code vocabulary. Visit time
/// steps are 1-based; code indices are 0-based.
class Record {
 public:
  Record() = default;
  explicit Record(int vocab_size) : vocab_(vocab_size) {
    if (vocab_size <= 0) throw std::invalid_argument("vocab_size must be positive");
  }
  Record(int vocab_size, std::vector<Bitset> visits)
      : vocab_(vocab_size), visits_(std::move(visits)) {
    if (vocab_size <= 0) throw std::invalid_argument("vocab_size must be positive");
    for (const auto& v : visits_)
      if (static_cast<int>(v.size()) != vocab_)
        throw std::invalid_argument("visit length does not match vocab_size");
  }

  int vocab_size() const { return vocab_; }
  int steps() const { return static_cast<int>(visits_.size()); }

  const Bitset& visit(int t) const { return visits_.at(static_cast<std::size_t>(t) - 1); }
  Bitset& visit(int t) { return visits_.at(static_cast<std::size_t>(t) - 1); }

  void push_visit(Bitset v) {
    if (static_cast<int>(v.size()) != vocab_)
      throw std::invalid_argument("visit length does not match vocab_size");
    visits_.push_back(std::move(v));
  }

  const std::vector<Bitset>& visits() const { return visits_; }

  bool operator==(const Record&) const = default;

 private:
  int vocab_ = 1;
  std::vector<Bitset> visits_;
};

struct Dataset {
  int vocab_size = 0;
  std::vector<Record> records;
};

struct ValidationIssue {
  std::string rule_id;  // offending rule, or comma-joined ids for cycles
  std::string reason;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string to_string() const;
};

/// Checks every rule-set invariant: index bounds, alpha range, history
/// literals backed by a temporal component, contradiction-free antecedents,
/// no duplicated (output, temporal, antecedent) triples, and acyclicity of
/// the same-step output->input dependency graph. Problems are report
/// entries, not exceptions.
ValidationReport validate_ruleset(const RuleSet& rules);

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

/// Stable topological order of rule indices: a rule that writes a code runs
/// before every rule whose current-scope antecedent reads it; independent
/// rules keep file order. History reads never order rules (they point
/// backwards in time). Throws ValidationError if the set has a cycle.
std::vector<std::size_t> canonical_order(const RuleSet& rules);

/// Codes read by a rule's current-scope antecedent literals.
std::vector<int> current_read_codes(const Rule& rule);

}  // namespace seqrule
