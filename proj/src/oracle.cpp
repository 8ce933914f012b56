#include "seqrule/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "seqrule/temporal.hpp"

namespace seqrule {

namespace {

bool literal_true(const Record& record, const Rule& rule, int t, const Literal& lit) {
  bool value;
  if (lit.scope == Scope::kCurrent) {
    value = record.visit(t).test(static_cast<std::size_t>(lit.code));
  } else {
    value = false;
    for (int i : resolve_indices(rule.temporal, t))
      if (record.visit(i).test(static_cast<std::size_t>(lit.code))) {
        value = true;
        break;
      }
  }
  return lit.negated() ? !value : value;
}

bool antecedent_true(const Record& record, const Rule& rule, int t) {
  return std::all_of(rule.antecedent.begin(), rule.antecedent.end(),
                     [&](const Literal& lit) { return literal_true(record, rule, t, lit); });
}

}  // namespace

RuleStatus eval_rule_naive(const Record& record, const Rule& rule, int t) {
  if (t < 1 || t > record.steps()) throw std::invalid_argument("step out of record range");
  if (!antecedent_true(record, rule, t)) return RuleStatus::kNotApplicable;
  if (!rule.is_hard()) return RuleStatus::kSatisfied;
  bool bit = record.visit(t).test(static_cast<std::size_t>(rule.output_code));
  bool wanted = rule.alpha == 1.0;
  return bit == wanted ? RuleStatus::kSatisfied : RuleStatus::kViolated;
}

namespace {

// Per-record history aggregations memoized by (distinct temporal component,
// step); pure caching on top of the naive OR.
class HistoryCache {
 public:
  HistoryCache(const Record& record, const std::vector<TemporalComponent>& tcs)
      : record_(&record), tcs_(&tcs), rows_(tcs.size()) {}

  const Bitset& at(int tc_index, int t) {
    auto& per_step = rows_[static_cast<std::size_t>(tc_index)];
    if (per_step.empty()) per_step.resize(static_cast<std::size_t>(record_->steps()) + 1);
    auto& slot = per_step[static_cast<std::size_t>(t)];
    if (!slot) {
      Bitset h(static_cast<std::size_t>(record_->vocab_size()));
      for (int i : resolve_indices((*tcs_)[static_cast<std::size_t>(tc_index)], t))
        h.or_with(record_->visit(i));
      slot = std::move(h);
    }
    return *slot;
  }

 private:
  const Record* record_;
  const std::vector<TemporalComponent>* tcs_;
  std::vector<std::vector<std::optional<Bitset>>> rows_;
};

struct PerRecordTally {
  std::vector<long long> fired, violations, ones;
  bool valid = true;
};

PerRecordTally tally_record(const Record& record, const RuleSet& rules,
                            const std::vector<TemporalComponent>& tcs,
                            const std::vector<int>& rule_tc) {
  PerRecordTally tally;
  tally.fired.assign(rules.rules.size(), 0);
  tally.violations.assign(rules.rules.size(), 0);
  tally.ones.assign(rules.rules.size(), 0);

  HistoryCache cache(record, tcs);
  for (int t = 1; t <= record.steps(); ++t) {
    for (std::size_t ri = 0; ri < rules.rules.size(); ++ri) {
      const Rule& rule = rules.rules[ri];
      const Bitset* h = nullptr;
      bool ok = true;
      for (const auto& lit : rule.antecedent) {
        bool value;
        if (lit.scope == Scope::kCurrent) {
          value = record.visit(t).test(static_cast<std::size_t>(lit.code));
        } else {
          if (!h) h = &cache.at(rule_tc[ri], t);
          value = h->test(static_cast<std::size_t>(lit.code));
        }
        if (lit.negated() ? value : !value) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;

      ++tally.fired[ri];
      bool bit = record.visit(t).test(static_cast<std::size_t>(rule.output_code));
      if (bit) ++tally.ones[ri];
      if (rule.is_hard() && bit != (rule.alpha == 1.0)) {
        ++tally.violations[ri];
        tally.valid = false;
      }
    }
  }
  return tally;
}

}  // namespace

ViolationReport check_violations(const Dataset& dataset, const RuleSet& rules, int threads) {
  ViolationReport report;
  report.records = static_cast<long long>(dataset.records.size());
  report.per_rule.reserve(rules.rules.size());
  for (const auto& r : rules.rules)
    report.per_rule.push_back({r.id, r.is_temporal(), r.alpha, 0, 0, 0});

  std::vector<TemporalComponent> tcs;
  std::vector<int> rule_tc(rules.rules.size(), -1);
  for (std::size_t ri = 0; ri < rules.rules.size(); ++ri) {
    auto it = std::find(tcs.begin(), tcs.end(), rules.rules[ri].temporal);
    if (it == tcs.end()) {
      tcs.push_back(rules.rules[ri].temporal);
      rule_tc[ri] = static_cast<int>(tcs.size()) - 1;
    } else {
      rule_tc[ri] = static_cast<int>(it - tcs.begin());
    }
  }

  const int n = static_cast<int>(dataset.records.size());
  std::vector<PerRecordTally> tallies(static_cast<std::size_t>(n));
  int workers = std::max(1, threads);
  auto work = [&](int i) {
    tallies[static_cast<std::size_t>(i)] =
        tally_record(dataset.records[static_cast<std::size_t>(i)], rules, tcs, rule_tc);
  };
  if (workers == 1) {
    for (int i = 0; i < n; ++i) work(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) work(i);
      });
    for (auto& th : pool) th.join();
  }

  for (const auto& tally : tallies) {
    if (tally.valid) ++report.valid_records;
    for (std::size_t ri = 0; ri < rules.rules.size(); ++ri) {
      report.per_rule[ri].fired += tally.fired[ri];
      report.per_rule[ri].violations += tally.violations[ri];
      report.per_rule[ri].consequent_ones += tally.ones[ri];
      (rules.rules[ri].is_temporal() ? report.temporal_violations : report.static_violations) +=
          tally.violations[ri];
    }
  }
  return report;
}

std::string format_report(const ViolationReport& report) {
  std::ostringstream os;
  os << "records " << report.records << "\n";
  os << "valid " << report.valid_records << "\n";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", report.percent_valid());
  os << "percent_valid " << buf << "\n";
  os << "static_violations " << report.static_violations << "\n";
  os << "temporal_violations " << report.temporal_violations << "\n";
  for (const auto& rs : report.per_rule) {
    os << "rule " << rs.id << " kind=" << (rs.temporal ? "temporal" : "static")
       << " fired=" << rs.fired;
    if (rs.alpha == 0.0 || rs.alpha == 1.0) {
      os << " violations=" << rs.violations;
    } else {
      std::snprintf(buf, sizeof(buf), "%.6f", rs.alpha);
      os << " alpha=" << buf;
      double freq = rs.fired ? static_cast<double>(rs.consequent_ones) / static_cast<double>(rs.fired)
                             : 0.0;
      std::snprintf(buf, sizeof(buf), "%.6f", freq);
      os << " observed=" << buf;
    }
    os << "\n";
  }
  return os.str();
}

Record apply_rules_naive(const Record& record, const RuleSet& rules, const Rng& record_rng) {
  auto order = canonical_order(rules);
  Record out(record.vocab_size());
  for (int t = 1; t <= record.steps(); ++t) {
    out.push_visit(record.visit(t));
    for (std::size_t idx : order) {
      const Rule& rule = rules.rules[idx];
      if (antecedent_true(out, rule, t)) {
        bool bit = record_rng.bernoulli(rule.alpha, kRngTagConsequent,
                                        static_cast<std::uint64_t>(t),
                                        static_cast<std::uint64_t>(rule.output_code));
        out.visit(t).assign(static_cast<std::size_t>(rule.output_code), bit);
      }
    }
  }
  return out;
}

void apply_rules_naive_train(RealMatrix& probs, const Record& labels, const RuleSet& rules) {
  if (probs.rows != labels.steps() || probs.cols != labels.vocab_size())
    throw std::invalid_argument("probability matrix shape does not match labels");
  auto order = canonical_order(rules);
  for (int t = 1; t <= labels.steps(); ++t)
    for (std::size_t idx : order) {
      const Rule& rule = rules.rules[idx];
      if (antecedent_true(labels, rule, t))
        probs.at(t - 1, rule.output_code) = rule.alpha;
    }
}

}  // namespace seqrule
