#include "seqrule/miner.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace seqrule {

namespace {

std::vector<long long> code_counts(const Dataset& ds) {
  std::vector<long long> counts(static_cast<std::size_t>(ds.vocab_size), 0);
  for (const auto& rec : ds.records)
    for (int t = 1; t <= rec.steps(); ++t)
      for (int c = 0; c < ds.vocab_size; ++c)
        if (rec.visit(t).test(static_cast<std::size_t>(c))) ++counts[static_cast<std::size_t>(c)];
  return counts;
}

Rule forbidden_rule(int demo, int code) {
  Rule r;
  r.id = "df_" + std::to_string(demo) + "_" + std::to_string(code);
  r.temporal = TemporalComponent::of({1});
  r.antecedent = {past(demo)};
  r.output_code = code;
  r.alpha = 0.0;
  return r;
}

}  // namespace

RuleSet mine_demographic_exclusive(const Dataset& dataset,
                                   const std::vector<std::vector<int>>& demo_groups) {
  std::set<int> seen;
  for (const auto& group : demo_groups)
    for (int d : group) {
      if (d < 0 || d >= dataset.vocab_size)
        throw std::invalid_argument("demographic code out of vocabulary");
      if (!seen.insert(d).second)
        throw std::invalid_argument("demographic groups overlap on code " + std::to_string(d));
    }

  RuleSet rs;
  rs.vocab_size = dataset.vocab_size;
  for (const auto& group : demo_groups)
    for (std::size_t i = 0; i + 1 < group.size(); ++i) {
      Rule r;
      r.id = "dx_" + std::to_string(group[i]) + "_" + std::to_string(group[i + 1]);
      r.antecedent = {cur(group[i])};
      r.output_code = group[i + 1];
      r.alpha = 0.0;
      rs.rules.push_back(std::move(r));
    }
  return rs;
}

RuleSet mine_exclusive_cooccurrence(const Dataset& dataset, int min_count) {
  const int C = dataset.vocab_size;
  auto counts = code_counts(dataset);

  RuleSet rs;
  rs.vocab_size = C;
  for (int b = 0; b < C; ++b) {
    if (counts[static_cast<std::size_t>(b)] < min_count) continue;
    // Codes present in every visit that contains b.
    Bitset always(static_cast<std::size_t>(C));
    bool first = true;
    for (const auto& rec : dataset.records)
      for (int t = 1; t <= rec.steps(); ++t) {
        if (!rec.visit(t).test(static_cast<std::size_t>(b))) continue;
        if (first) {
          always = rec.visit(t);
          first = false;
        } else {
          always.and_with(rec.visit(t));
        }
        if (always.count() == 1) break;  // only b itself left
      }
    if (first) continue;
    for (int a = 0; a < C; ++a) {
      if (a == b || !always.test(static_cast<std::size_t>(a))) continue;
      Rule r;
      r.id = "co_" + std::to_string(b) + "_" + std::to_string(a);
      r.antecedent = {cur(b)};
      r.output_code = a;
      r.alpha = 1.0;
      rs.rules.push_back(std::move(r));
    }
  }
  return rs;
}

RuleSet mine_demographic_forbidden(const Dataset& dataset, const std::vector<int>& demo_codes,
                                   int min_count, const RuleSet& static_rules) {
  const int C = dataset.vocab_size;
  auto counts = code_counts(dataset);

  // Candidates are regular codes only; demographic variables are governed
  // by the exclusivity rules.
  std::vector<bool> is_demo(static_cast<std::size_t>(C), false);
  for (int demo : demo_codes) {
    if (demo < 0 || demo >= C) throw std::invalid_argument("demographic code out of vocabulary");
    is_demo[static_cast<std::size_t>(demo)] = true;
  }

  RuleSet rs;
  rs.vocab_size = C;
  for (int demo : demo_codes) {
    // Codes appearing anywhere in a record whose label visit has the demo.
    Bitset present(static_cast<std::size_t>(C));
    bool demo_occurs = false;
    for (const auto& rec : dataset.records) {
      if (rec.steps() == 0 || !rec.visit(1).test(static_cast<std::size_t>(demo))) continue;
      demo_occurs = true;
      for (int t = 1; t <= rec.steps(); ++t) present.or_with(rec.visit(t));
    }
    if (!demo_occurs) continue;  // no evidence about this demographic

    std::set<int> forbidden;
    for (int c = 0; c < C; ++c)
      if (counts[static_cast<std::size_t>(c)] >= min_count && !is_demo[static_cast<std::size_t>(c)] &&
          !present.test(static_cast<std::size_t>(c)))
        forbidden.insert(c);

    // Closure: one pass over the static co-occurrence rules. A code that
    // forces a forbidden code must itself be forbidden, even below the
    // prevalence cut-off.
    std::set<int> extra;
    for (const auto& sr : static_rules.rules) {
      if (sr.alpha != 1.0 || sr.antecedent.size() != 1) continue;
      const Literal& trigger = sr.antecedent.front();
      if (trigger.scope != Scope::kCurrent || trigger.negated()) continue;
      if (forbidden.count(sr.output_code) && !forbidden.count(trigger.code) &&
          !is_demo[static_cast<std::size_t>(trigger.code)] &&
          !present.test(static_cast<std::size_t>(trigger.code)))
        extra.insert(trigger.code);
    }
    forbidden.insert(extra.begin(), extra.end());

    for (int c : forbidden) rs.rules.push_back(forbidden_rule(demo, c));
  }
  return rs;
}

RuleSet mine_precedence(const Dataset& dataset, int min_count) {
  const int C = dataset.vocab_size;
  auto counts = code_counts(dataset);

  RuleSet rs;
  rs.vocab_size = C;
  for (int b = 0; b < C; ++b) {
    if (counts[static_cast<std::size_t>(b)] < min_count) continue;
    // Codes present strictly before every occurrence of b.
    Bitset candidates(static_cast<std::size_t>(C));
    for (int c = 0; c < C; ++c) candidates.set(static_cast<std::size_t>(c));
    bool alive = true;
    for (const auto& rec : dataset.records) {
      if (!alive) break;
      Bitset seen(static_cast<std::size_t>(C));
      for (int t = 1; t <= rec.steps() && alive; ++t) {
        if (rec.visit(t).test(static_cast<std::size_t>(b))) {
          candidates.and_with(seen);
          if (candidates.none()) alive = false;
        }
        seen.or_with(rec.visit(t));
      }
    }
    if (!alive) continue;
    for (int a = 0; a < C; ++a) {
      if (a == b || !candidates.test(static_cast<std::size_t>(a))) continue;
      Rule r;
      r.id = "pr_" + std::to_string(b) + "_" + std::to_string(a);
      r.temporal = TemporalComponent::all_past();
      r.antecedent = {not_past(a)};
      r.output_code = b;
      r.alpha = 0.0;
      rs.rules.push_back(std::move(r));
    }
  }
  return rs;
}

RuleSet mine_persistence(const Dataset& dataset, int min_total, int min_repeat) {
  const int C = dataset.vocab_size;
  std::vector<long long> total(static_cast<std::size_t>(C), 0);
  std::vector<long long> repeats(static_cast<std::size_t>(C), 0);
  std::vector<bool> consistent(static_cast<std::size_t>(C), true);

  for (const auto& rec : dataset.records)
    for (int t = 1; t <= rec.steps(); ++t)
      for (int c = 0; c < C; ++c) {
        if (!rec.visit(t).test(static_cast<std::size_t>(c))) continue;
        ++total[static_cast<std::size_t>(c)];
        if (t < rec.steps()) {
          if (rec.visit(t + 1).test(static_cast<std::size_t>(c)))
            ++repeats[static_cast<std::size_t>(c)];
          else
            consistent[static_cast<std::size_t>(c)] = false;
        }
      }

  RuleSet rs;
  rs.vocab_size = C;
  for (int c = 0; c < C; ++c) {
    if (!consistent[static_cast<std::size_t>(c)]) continue;
    if (total[static_cast<std::size_t>(c)] < min_total) continue;
    if (repeats[static_cast<std::size_t>(c)] < min_repeat) continue;
    Rule r;
    r.id = "ps_" + std::to_string(c);
    r.temporal = TemporalComponent::of({-1});
    r.antecedent = {past(c)};
    r.output_code = c;
    r.alpha = 1.0;
    rs.rules.push_back(std::move(r));
  }
  return rs;
}

RuleSet mine_all(const Dataset& dataset, const std::vector<std::vector<int>>& demo_groups,
                 const MinerThresholds& thresholds) {
  std::vector<int> demo_codes;
  for (const auto& group : demo_groups) demo_codes.insert(demo_codes.end(), group.begin(), group.end());

  RuleSet out;
  out.vocab_size = dataset.vocab_size;
  auto append = [&out](RuleSet&& rs) {
    for (auto& r : rs.rules) out.rules.push_back(std::move(r));
  };

  RuleSet cooccur = mine_exclusive_cooccurrence(dataset, thresholds.min_exclusive);
  append(mine_demographic_exclusive(dataset, demo_groups));
  RuleSet cooccur_copy = cooccur;
  append(std::move(cooccur_copy));
  append(mine_demographic_forbidden(dataset, demo_codes, thresholds.min_demo, cooccur));
  append(mine_precedence(dataset, thresholds.min_precede));
  append(mine_persistence(dataset, thresholds.min_persist, thresholds.min_persist_repeat));
  return out;
}

}  // namespace seqrule
