#include "seqrule/temporal.hpp"

#include <algorithm>
#include <stdexcept>

namespace seqrule {

std::vector<int> resolve_indices(const TemporalComponent& tc, int t) {
  if (t < 1) throw std::invalid_argument("step index must be >= 1");
  std::vector<int> steps;
  if (tc.has_all_past()) {
    steps.reserve(static_cast<std::size_t>(t) - 1);
    for (int i = 1; i < t; ++i) steps.push_back(i);
    return steps;
  }
  for (int k : tc.indices()) {
    int i = k > 0 ? k : t + k;
    if (i >= 1 && i < t) steps.push_back(i);
  }
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  return steps;
}

MaskVector build_mask_vector(const TemporalComponent& tc, int t, int horizon) {
  if (t < 1 || t > horizon) throw std::invalid_argument("step out of horizon");
  MaskVector mask(static_cast<std::size_t>(horizon));
  if (tc.has_all_past()) {
    mask.set_first(static_cast<std::size_t>(t) - 1);
    return mask;
  }
  for (int i : resolve_indices(tc, t)) mask.set(static_cast<std::size_t>(i) - 1);
  return mask;
}

MaskMatrix build_mask_matrix(const TemporalComponent& tc, int horizon) {
  MaskMatrix rows;
  rows.reserve(static_cast<std::size_t>(horizon));
  for (int t = 1; t <= horizon; ++t) rows.push_back(build_mask_vector(tc, t, horizon));
  return rows;
}

HistoryVector aggregate_history(const Record& record, const MaskVector& mask) {
  if (static_cast<int>(mask.size()) != record.steps())
    throw std::invalid_argument("mask length does not match record length");
  HistoryVector h(static_cast<std::size_t>(record.vocab_size()));
  for (int i = 1; i <= record.steps(); ++i)
    if (mask.test(static_cast<std::size_t>(i) - 1)) h.or_with(record.visit(i));
  return h;
}

namespace {

std::vector<HistoryVector> batch_bitwise(const Record& record, const MaskMatrix& mask) {
  std::vector<HistoryVector> out;
  out.reserve(mask.size());
  for (const auto& row : mask) out.push_back(aggregate_history(record, row));
  return out;
}

// Literal realization of H = M * P over integers, clamped back to {0,1}.
std::vector<HistoryVector> batch_matmul(const Record& record, const MaskMatrix& mask) {
  const int T = record.steps();
  const int C = record.vocab_size();

  // Dense copy of the visit matrix so the inner loop stays contiguous.
  std::vector<std::int32_t> visits(static_cast<std::size_t>(T) * C, 0);
  for (int i = 0; i < T; ++i) {
    const Bitset& v = record.visit(i + 1);
    for (int c = 0; c < C; ++c)
      if (v.test(static_cast<std::size_t>(c))) visits[static_cast<std::size_t>(i) * C + c] = 1;
  }

  std::vector<HistoryVector> out;
  out.reserve(mask.size());
  std::vector<std::int32_t> acc(static_cast<std::size_t>(C));
  for (const auto& row : mask) {
    std::fill(acc.begin(), acc.end(), 0);
    for (int i = 0; i < T; ++i) {
      if (!row.test(static_cast<std::size_t>(i))) continue;
      const std::int32_t* src = &visits[static_cast<std::size_t>(i) * C];
      for (int c = 0; c < C; ++c) acc[static_cast<std::size_t>(c)] += src[c];
    }
    HistoryVector h(static_cast<std::size_t>(C));
    for (int c = 0; c < C; ++c)
      if (acc[static_cast<std::size_t>(c)] > 0) h.set(static_cast<std::size_t>(c));
    out.push_back(std::move(h));
  }
  return out;
}

}  // namespace

std::vector<HistoryVector> aggregate_history_batch(const Record& record,
                                                   const MaskMatrix& mask,
                                                   HistoryKernel kernel) {
  if (static_cast<int>(mask.size()) != record.steps())
    throw std::invalid_argument("mask matrix height does not match record length");
  return kernel == HistoryKernel::kBitwise ? batch_bitwise(record, mask)
                                           : batch_matmul(record, mask);
}

}  // namespace seqrule
