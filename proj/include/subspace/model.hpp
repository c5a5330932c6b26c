#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "subspace/approximation.hpp"
#include "subspace/linalg.hpp"

namespace subspace {

/// An ordered list of subspaces of a common ambient space, each of dimension
/// at most rank_bound.
class UnionModel {
 public:
  UnionModel(std::vector<Subspace> subspaces, std::size_t rank_bound);

  const std::vector<Subspace>& subspaces() const noexcept { return subspaces_; }
  std::size_t count() const noexcept { return subspaces_.size(); }
  std::size_t ambient_dimension() const noexcept { return subspaces_.front().ambient_dimension(); }
  std::size_t rank_bound() const noexcept { return rank_bound_; }

 private:
  std::vector<Subspace> subspaces_;
  std::size_t rank_bound_;
};

/// Z/pZ acting on C^(p*q) by cyclic block shift with step q.
struct CyclicAction {
  std::size_t group_order = 1;  // p
  std::size_t block_size = 1;   // q

  std::size_t dimension() const noexcept { return group_order * block_size; }
};

/// A shift-invariant subspace of C^(p*q) stored as one subspace of C^q per
/// character of the cyclic group.
class FiberedModel {
 public:
  FiberedModel(CyclicAction action, std::vector<Subspace> fibers, std::size_t pidim_bound);

  const CyclicAction& action() const noexcept { return action_; }
  const std::vector<Subspace>& fibers() const noexcept { return fibers_; }
  std::size_t pidim_bound() const noexcept { return pidim_bound_; }

 private:
  CyclicAction action_;
  std::vector<Subspace> fibers_;
  std::size_t pidim_bound_;
};

/// Maps each data index to a model subspace index.
struct Partition {
  std::vector<std::size_t> assignment;
};

void validate_partition(const Partition& p, std::size_t data_size, std::size_t count);

struct SolverConfig {
  int restarts = 20;
  int max_iters = 200;
  std::uint64_t seed = 0;
  double tol_improve = 1e-10;         // scaled by (1 + data energy)
  std::size_t exhaustive_limit = 12;  // refusal cap for the partition oracle
  int threads = 1;                    // parallel restarts
};

/// Serialized outcome of a solve.
struct FitReport {
  double cost = 0.0;
  std::variant<std::monostate, UnionModel, FiberedModel> model;
  Partition partition;
  int iterations = 0;
  int restarts_used = 0;
  std::uint64_t seed = 0;
  bool converged = false;
  std::vector<double> trace;
  std::vector<std::string> warnings;
};

}  // namespace subspace
