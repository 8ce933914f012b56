#pragma once

#include <vector>

#include "seqrule/bitset.hpp"
#include "seqrule/rule.hpp"

namespace seqrule {

/// Mask over past steps for one (rule, step): bit i-1 selects visit i.
using MaskVector = Bitset;

/// One mask row per step; strictly lower-triangular.
using MaskMatrix = std::vector<Bitset>;

/// Aggregated history bits over the code vocabulary.
using HistoryVector = Bitset;

/// Past steps a temporal component references at step t: absolute indices,
/// relative offsets resolved against t, and the wildcard expansion, clipped
/// to [1, t-1]. Relative offsets landing before step 1 are dropped.
std::vector<int> resolve_indices(const TemporalComponent& tc, int t);

/// Mask with bit i-1 set iff step i is referenced at step t (1 <= t <= horizon).
MaskVector build_mask_vector(const TemporalComponent& tc, int t, int horizon);

/// All per-step masks stacked; row t-1 is the mask for step t.
MaskMatrix build_mask_matrix(const TemporalComponent& tc, int horizon);

/// OR of the masked visits, one bit per code. Mask length must equal the
/// record length.
HistoryVector aggregate_history(const Record& record, const MaskVector& mask);

/// How the boolean matrix product for batched aggregation is realized.
/// Both produce identical bits; kMatMul is the integer-product-then-clamp
/// reference, kBitwise the word-parallel fast path.
enum class HistoryKernel { kBitwise, kMatMul };

/// Row t-1 = aggregate_history at step t, computed as one boolean matrix
/// product of the mask matrix with the visit matrix.
std::vector<HistoryVector> aggregate_history_batch(
    const Record& record, const MaskMatrix& mask,
    HistoryKernel kernel = HistoryKernel::kBitwise);

}  // namespace seqrule
