#include "subspace/approximation.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace subspace {

namespace {

void require(bool condition, const char* message) {
  if (!condition) throw input_error(message);
}

}  // namespace

DataSet::DataSet(std::vector<Vector> vectors, std::string label)
    : vectors_(std::move(vectors)), label_(std::move(label)) {
  require(!vectors_.empty(), "dataset: needs at least one vector");
  dimension_ = vectors_.front().size();
  require(dimension_ >= 1, "dataset: vectors must have dimension >= 1");
  for (const Vector& v : vectors_) {
    require(v.size() == dimension_, "dataset: vectors have mixed dimensions");
    require(is_finite(v), "dataset: non-finite entries");
    energy_ += norm_sq(v);
  }
}

Subspace::Subspace(std::size_t ambient_dimension, Matrix basis)
    : ambient_dimension_(ambient_dimension), basis_(std::move(basis)) {
  require(ambient_dimension_ >= 1, "subspace: ambient dimension must be >= 1");
  if (basis_.cols() == 0) {
    basis_ = Matrix(ambient_dimension_, 0);
    return;
  }
  require(basis_.rows() == ambient_dimension_, "subspace: basis rows must match ambient dimension");
  require(basis_.cols() <= ambient_dimension_, "subspace: more basis vectors than dimensions");
  require(is_finite(basis_), "subspace: non-finite entries");
  require(max_abs(basis_.adjoint() * basis_ - Matrix::identity(basis_.cols())) <= tol::orth,
          "subspace: basis columns not orthonormal");
}

Subspace Subspace::zero(std::size_t ambient_dimension) {
  return Subspace(ambient_dimension, Matrix(ambient_dimension, 0));
}

Subspace Subspace::span_of(const std::vector<Vector>& generators, double tol_rank) {
  require(!generators.empty(), "span_of: needs at least one generator");
  return Subspace(generators.front().size(), orthonormalize(generators, tol_rank));
}

Matrix Subspace::projector_matrix() const {
  if (basis_.cols() == 0) return Matrix(ambient_dimension_, ambient_dimension_);
  return basis_ * basis_.adjoint();
}

Projector Subspace::projector() const { return Projector(projector_matrix()); }

double distance_sq(const Vector& f, const Subspace& v) {
  require(f.size() == v.ambient_dimension(), "distance_sq: dimension mismatch");
  require(is_finite(f), "distance_sq: non-finite entries");
  double projected = 0.0;
  const Matrix& b = v.basis();
  for (std::size_t j = 0; j < b.cols(); ++j) {
    Complex coeff{};
    for (std::size_t i = 0; i < f.size(); ++i) coeff += std::conj(b(i, j)) * f[i];
    projected += std::norm(coeff);
  }
  return std::max(norm_sq(f) - projected, 0.0);
}

double cost_single(const DataSet& f, const Subspace& v) {
  require(f.dimension() == v.ambient_dimension(), "cost_single: dimension mismatch");
  double total = 0.0;
  for (const Vector& x : f.vectors()) total += distance_sq(x, v);
  return total;
}

double phi(const DataSet& f, const Projector& q) {
  double ignored = 0.0;
  return phi(f, q, ignored);
}

double phi(const DataSet& f, const Projector& q, double& imag_residual) {
  require(f.dimension() == q.dimension(), "phi: dimension mismatch");
  Complex total{};
  for (const Vector& x : f.vectors()) total += inner(x, q.matrix() * x);
  imag_residual = std::abs(total.imag());
  return total.real();
}

SingleFit best_subspace(const DataSet& f, std::size_t rank) {
  require(rank <= f.dimension(), "best_subspace: rank exceeds ambient dimension");
  const Matrix data = Matrix::from_columns(f.dimension(), f.vectors());
  const SvdResult s = svd(data);

  const double sigma_max = s.singular_values.empty() ? 0.0 : s.singular_values[0];
  const double cut = sigma_max * tol::rank;
  std::vector<Vector> kept;
  for (std::size_t i = 0; i < std::min(rank, s.singular_values.size()); ++i) {
    if (s.singular_values[i] > cut) kept.push_back(s.left_vectors.column(i));
  }

  double cost = 0.0;
  for (std::size_t i = rank; i < s.singular_values.size(); ++i)
    cost += s.singular_values[i] * s.singular_values[i];

  return SingleFit{Subspace(f.dimension(), Matrix::from_columns(f.dimension(), kept)), cost};
}

SymmetricFunctional::SymmetricFunctional(Matrix sigma) : sigma_(std::move(sigma)) {
  require(sigma_.rows() == sigma_.cols(), "functional: matrix must be square");
  require(sigma_.rows() >= 1, "functional: dimension must be >= 1");
  require(is_finite(sigma_), "functional: non-finite entries");
}

DataSet functional_to_frame(const SymmetricFunctional& s) {
  const std::size_t d = s.dimension();
  Matrix h = s.sigma();
  {
    const Matrix ah = s.sigma().adjoint();
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) h(i, j) = 0.5 * (h(i, j) + ah(i, j));
  }

  const SvdResult sigma_svd = svd(s.sigma());
  const double sigma_norm = sigma_svd.singular_values.empty() ? 0.0 : sigma_svd.singular_values[0];
  const double threshold = tol::psd * sigma_norm;

  const HermitianEig eig = hermitian_eig(h);
  if (!eig.eigenvalues.empty() && eig.eigenvalues.back() < -threshold) {
    throw input_error("functional_to_frame: not a state on the PSD cone");
  }

  std::vector<Vector> frame;
  for (std::size_t i = 0; i < eig.eigenvalues.size(); ++i) {
    const double lambda = eig.eigenvalues[i];
    if (lambda > threshold) {
      Vector f = eig.eigenvectors.column(i);
      const double scale = std::sqrt(lambda);
      for (Complex& z : f) z *= scale;
      frame.push_back(std::move(f));
    }
  }
  // A functional that vanishes on the PSD cone is represented by the zero
  // vector so the frame is never empty.
  if (frame.empty()) frame.emplace_back(d, Complex{});
  return DataSet(std::move(frame), "frame");
}

}  // namespace subspace
