#include "subspace/invariant_fiber.hpp"

#include <utility>

namespace subspace {

namespace {

void require(bool condition, const char* message) {
  if (!condition) throw input_error(message);
}

void validate_action(const CyclicAction& action) {
  require(action.group_order >= 1 && action.block_size >= 1,
          "cyclic action: group order and block size must be positive");
}

}  // namespace

FiberedModel::FiberedModel(CyclicAction action, std::vector<Subspace> fibers,
                           std::size_t pidim_bound)
    : action_(action), fibers_(std::move(fibers)), pidim_bound_(pidim_bound) {
  validate_action(action_);
  require(fibers_.size() == action_.group_order, "fibered model: one fiber per character");
  for (const Subspace& fiber : fibers_) {
    require(fiber.ambient_dimension() == action_.block_size,
            "fibered model: fiber ambient dimension must equal block size");
    require(fiber.dimension() <= pidim_bound_, "fibered model: fiber exceeds pidim bound");
  }
}

Matrix shift_operator(const CyclicAction& action) {
  validate_action(action);
  const std::size_t d = action.dimension();
  const std::size_t q = action.block_size;
  Matrix s(d, d);
  for (std::size_t n = 0; n < d; ++n) s(n, (n + d - q) % d) = 1.0;
  return s;
}

FiberData fiber_decompose(const DataSet& f, const CyclicAction& action) {
  validate_action(action);
  require(f.dimension() == action.dimension(), "fiber_decompose: dimension mismatch");
  const std::size_t p = action.group_order;
  const std::size_t q = action.block_size;
  const Matrix w = dft_matrix(p);

  std::vector<std::vector<Vector>> per_character(p);
  for (auto& v : per_character) v.reserve(f.size());
  for (const Vector& x : f.vectors()) {
    for (std::size_t chi = 0; chi < p; ++chi) {
      Vector fiber(q, Complex{});
      for (std::size_t j = 0; j < p; ++j) {
        const Complex weight = w(chi, j);
        for (std::size_t i = 0; i < q; ++i) fiber[i] += weight * x[j * q + i];
      }
      per_character[chi].push_back(std::move(fiber));
    }
  }

  FiberData out{action, {}};
  out.fibers.reserve(p);
  for (std::size_t chi = 0; chi < p; ++chi)
    out.fibers.emplace_back(std::move(per_character[chi]), f.label());
  return out;
}

DataSet fiber_recompose(const FiberData& fd) {
  validate_action(fd.action);
  const std::size_t p = fd.action.group_order;
  const std::size_t q = fd.action.block_size;
  require(fd.fibers.size() == p, "fiber_recompose: block count mismatch");
  const std::size_t m = fd.fibers.front().size();
  for (const DataSet& fiber : fd.fibers) {
    require(fiber.size() == m, "fiber_recompose: fibers disagree on vector count");
    require(fiber.dimension() == q, "fiber_recompose: fiber dimension mismatch");
  }
  const Matrix w = dft_matrix(p);

  std::vector<Vector> vectors(m, Vector(p * q, Complex{}));
  for (std::size_t chi = 0; chi < p; ++chi) {
    for (std::size_t k = 0; k < m; ++k) {
      const Vector& fiber = fd.fibers[chi].vectors()[k];
      for (std::size_t j = 0; j < p; ++j) {
        const Complex weight = std::conj(w(chi, j));
        for (std::size_t i = 0; i < q; ++i) vectors[k][j * q + i] += weight * fiber[i];
      }
    }
  }
  return DataSet(std::move(vectors), fd.fibers.front().label());
}

std::pair<FiberedModel, FitReport> best_invariant(const DataSet& f, const CyclicAction& action,
                                                  std::size_t pidim) {
  validate_action(action);
  require(pidim <= action.block_size, "best_invariant: pidim exceeds fiber dimension");
  require(f.dimension() == action.dimension(), "best_invariant: dimension mismatch");

  const FiberData data = fiber_decompose(f, action);
  std::vector<Subspace> fibers;
  fibers.reserve(action.group_order);
  double cost = 0.0;
  for (const DataSet& fiber : data.fibers) {
    SingleFit fit = best_subspace(fiber, pidim);
    cost += fit.cost;
    fibers.push_back(std::move(fit.subspace));
  }

  FiberedModel model(action, std::move(fibers), pidim);
  FitReport report;
  report.cost = cost;
  report.model = model;
  report.partition.assignment.assign(f.size(), 0);
  report.iterations = 1;
  report.restarts_used = 0;
  report.seed = 0;
  report.converged = true;
  report.trace = {cost};
  return {std::move(model), std::move(report)};
}

std::size_t pi_dimension(const FiberedModel& m) {
  std::size_t out = 0;
  for (const Subspace& fiber : m.fibers()) out = std::max(out, fiber.dimension());
  return out;
}

bool is_invariant(const Subspace& v, const CyclicAction& action, double tolerance) {
  validate_action(action);
  require(v.ambient_dimension() == action.dimension(), "is_invariant: dimension mismatch");
  const Matrix s = shift_operator(action);
  const Matrix p = v.projector_matrix();
  return max_abs(s * p * s.adjoint() - p) <= tolerance;
}

Subspace assembled_subspace(const FiberedModel& m) {
  const std::size_t p = m.action().group_order;
  const std::size_t q = m.action().block_size;
  const Matrix w = dft_matrix(p);

  std::vector<Vector> columns;
  for (std::size_t chi = 0; chi < p; ++chi) {
    const Matrix& basis = m.fibers()[chi].basis();
    for (std::size_t c = 0; c < basis.cols(); ++c) {
      Vector column(p * q, Complex{});
      for (std::size_t j = 0; j < p; ++j) {
        const Complex weight = std::conj(w(chi, j));
        for (std::size_t i = 0; i < q; ++i) column[j * q + i] = weight * basis(i, c);
      }
      columns.push_back(std::move(column));
    }
  }
  return Subspace(p * q, Matrix::from_columns(p * q, columns));
}

}  // namespace subspace
