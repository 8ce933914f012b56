#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "seqrule/rule.hpp"

namespace seqrule {

/// Synthetic sequence generator with plantable structure, used to exercise
/// the miners and the end-to-end pipeline. Visit 1 is a label visit holding
/// one code per demographic group; later visits draw regular codes
/// independently at per-code base rates, then the planted patterns are
/// enforced. Pattern code sets should be pairwise disjoint so enforcement
/// passes cannot interfere.
struct SynthConfig {
  int n_records = 1000;
  int vocab_size = 120;
  std::uint64_t seed = 1;
  int min_body_visits = 4;
  int max_body_visits = 12;
  double demo_present_prob = 0.9;  // chance a group sets one of its codes
  double base_rate_min = 0.05;
  double base_rate_max = 0.30;
  int end_code = -1;  // defaults to vocab_size - 1; set in each final visit

  std::vector<std::vector<int>> demo_groups;
  std::vector<std::pair<int, double>> rate_overrides;  // pin base rates of planted codes

  std::vector<int> persist_codes;                      // once present, kept in every later visit
  std::vector<std::pair<int, int>> precedence_pairs;   // (prior, dependent): dependent dropped until prior seen
  std::vector<std::pair<int, int>> cooccur_pairs;      // (mandatory, trigger): trigger forces mandatory
  std::vector<std::pair<int, int>> forbidden_pairs;    // (demo, code): code removed from records with demo
};

Dataset synth_dataset(const SynthConfig& config);

/// Desk-scale defaults with one planted pattern of every kind, all above
/// the default mining thresholds.
SynthConfig default_synth_config();

/// Same structure with no planted patterns (demographic groups remain).
SynthConfig unplanted_synth_config(std::uint64_t seed);

}  // namespace seqrule
