#include "seqrule/synth.hpp"

#include <stdexcept>

#include "seqrule/rng.hpp"

namespace seqrule {

namespace {

constexpr std::uint64_t kTagRate = 11;
constexpr std::uint64_t kTagLength = 12;
constexpr std::uint64_t kTagDemo = 13;
constexpr std::uint64_t kTagCode = 14;

}  // namespace

Dataset synth_dataset(const SynthConfig& config) {
  const int C = config.vocab_size;
  if (C < 2) throw std::invalid_argument("synth vocabulary too small");
  if (config.min_body_visits < 1 || config.max_body_visits < config.min_body_visits)
    throw std::invalid_argument("bad body visit range");
  const int end_code = config.end_code >= 0 ? config.end_code : C - 1;

  std::vector<bool> is_demo(static_cast<std::size_t>(C), false);
  for (const auto& group : config.demo_groups)
    for (int d : group) {
      if (d < 0 || d >= C) throw std::invalid_argument("demographic code out of vocabulary");
      is_demo[static_cast<std::size_t>(d)] = true;
    }

  const Rng rng(config.seed);

  // Per-code base rates, fixed for the whole dataset.
  std::vector<double> rate(static_cast<std::size_t>(C), 0.0);
  for (int c = 0; c < C; ++c) {
    if (is_demo[static_cast<std::size_t>(c)] || c == end_code) continue;
    rate[static_cast<std::size_t>(c)] =
        config.base_rate_min +
        (config.base_rate_max - config.base_rate_min) * rng.uniform(kTagRate, static_cast<std::uint64_t>(c));
  }
  for (auto [code, r] : config.rate_overrides) {
    if (code < 0 || code >= C) throw std::invalid_argument("rate override out of vocabulary");
    rate[static_cast<std::size_t>(code)] = r;
  }

  Dataset ds;
  ds.vocab_size = C;
  ds.records.reserve(static_cast<std::size_t>(config.n_records));

  for (int r = 0; r < config.n_records; ++r) {
    const Rng rec_rng = rng.fork(static_cast<std::uint64_t>(r) + 0x517cc1b727220a95ULL);
    const std::uint64_t R = static_cast<std::uint64_t>(r);

    int body = config.min_body_visits +
               static_cast<int>(rng.bits(kTagLength, R) %
                                static_cast<std::uint64_t>(config.max_body_visits -
                                                           config.min_body_visits + 1));
    Record rec(C);

    // Label visit: at most one code per demographic group.
    Bitset label(static_cast<std::size_t>(C));
    for (std::size_t g = 0; g < config.demo_groups.size(); ++g) {
      const auto& group = config.demo_groups[g];
      if (group.empty()) continue;
      if (rec_rng.uniform(kTagDemo, g) >= config.demo_present_prob) continue;
      std::size_t pick = static_cast<std::size_t>(rec_rng.bits(kTagDemo, g, 1) % group.size());
      label.set(static_cast<std::size_t>(group[pick]));
    }
    rec.push_visit(std::move(label));

    for (int b = 1; b <= body; ++b) {
      Bitset v(static_cast<std::size_t>(C));
      for (int c = 0; c < C; ++c)
        if (rate[static_cast<std::size_t>(c)] > 0.0 &&
            rec_rng.uniform(kTagCode, static_cast<std::uint64_t>(b), static_cast<std::uint64_t>(c)) <
                rate[static_cast<std::size_t>(c)])
          v.set(static_cast<std::size_t>(c));
      if (b == body) v.set(static_cast<std::size_t>(end_code));
      rec.push_visit(std::move(v));
    }

    // Planted structure. Pattern ranges are disjoint by configuration, so
    // the passes commute.
    for (auto [demo, code] : config.forbidden_pairs)
      if (rec.visit(1).test(static_cast<std::size_t>(demo)))
        for (int t = 1; t <= rec.steps(); ++t) rec.visit(t).reset(static_cast<std::size_t>(code));

    for (auto [prior, dependent] : config.precedence_pairs) {
      bool seen = false;
      for (int t = 1; t <= rec.steps(); ++t) {
        if (!seen) rec.visit(t).reset(static_cast<std::size_t>(dependent));
        if (rec.visit(t).test(static_cast<std::size_t>(prior))) seen = true;
      }
    }

    for (auto [mandatory, trigger] : config.cooccur_pairs)
      for (int t = 1; t <= rec.steps(); ++t)
        if (rec.visit(t).test(static_cast<std::size_t>(trigger)))
          rec.visit(t).set(static_cast<std::size_t>(mandatory));

    for (int code : config.persist_codes) {
      bool seen = false;
      for (int t = 1; t <= rec.steps(); ++t) {
        if (seen) rec.visit(t).set(static_cast<std::size_t>(code));
        if (rec.visit(t).test(static_cast<std::size_t>(code))) seen = true;
      }
    }

    ds.records.push_back(std::move(rec));
  }
  return ds;
}

SynthConfig default_synth_config() {
  SynthConfig config;
  config.n_records = 2000;
  config.vocab_size = 120;
  config.seed = 20240601;
  config.demo_groups = {{0, 1}, {2, 3, 4}};
  // Disjoint planted ranges, all comfortably above the default thresholds.
  config.persist_codes = {10};
  config.precedence_pairs = {{20, 21}};   // 21 only after 20
  config.cooccur_pairs = {{30, 31}};      // 31 forces 30
  config.forbidden_pairs = {{0, 40}};     // demo 0 never shows code 40
  config.rate_overrides = {{10, 0.18}, {20, 0.25}, {21, 0.25}, {30, 0.12}, {31, 0.15}, {40, 0.25}};
  return config;
}

SynthConfig unplanted_synth_config(std::uint64_t seed) {
  SynthConfig config;
  config.n_records = 1200;
  config.vocab_size = 80;
  config.seed = seed;
  config.demo_groups = {{0, 1}, {2, 3, 4}};
  config.base_rate_min = 0.10;
  config.base_rate_max = 0.35;
  return config;
}

}  // namespace seqrule
