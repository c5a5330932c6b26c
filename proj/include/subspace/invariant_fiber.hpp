#pragma once

#include <utility>

#include "subspace/model.hpp"

namespace subspace {

/// Per-character fiber components of a data set: one DataSet of m vectors in
/// C^q for each of the p characters.
struct FiberData {
  CyclicAction action;
  std::vector<DataSet> fibers;
};

/// Permutation matrix of the cyclic shift by q on C^(p*q); its p-th power is
/// the identity.
Matrix shift_operator(const CyclicAction& action);

/// Splits each vector into its p character fibers: reshape into p blocks of
/// length q and apply the unitary p-point DFT across the block index. An
/// isometry; shifting the input multiplies fiber chi by exp(-2*pi*i*chi/p).
FiberData fiber_decompose(const DataSet& f, const CyclicAction& action);

/// Exact inverse of fiber_decompose.
DataSet fiber_recompose(const FiberData& fd);

/// Optimal invariant model of per-fiber dimension at most `pidim`: each fiber
/// is fit independently with best_subspace and the costs add up. Globally
/// optimal over the invariant class because the fiber problems decouple.
std::pair<FiberedModel, FitReport> best_invariant(const DataSet& f, const CyclicAction& action,
                                                  std::size_t pidim);

/// Minimal number of group generators of the assembled subspace: the largest
/// fiber dimension.
std::size_t pi_dimension(const FiberedModel& m);

/// True when the subspace commutes with the block shift:
/// ||S P S^H - P||_max <= tolerance.
bool is_invariant(const Subspace& v, const CyclicAction& action, double tolerance);

/// The invariant subspace of C^(p*q) determined by the fibers, with an
/// orthonormal basis obtained by inverse-transforming each fiber basis
/// vector.
Subspace assembled_subspace(const FiberedModel& m);

}  // namespace subspace
