#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "subspace/linalg.hpp"

namespace subspace {

/// A finite list of vectors of common dimension, the object being modeled.
class DataSet {
 public:
  explicit DataSet(std::vector<Vector> vectors, std::string label = {});

  const std::vector<Vector>& vectors() const noexcept { return vectors_; }
  std::size_t size() const noexcept { return vectors_.size(); }
  std::size_t dimension() const noexcept { return dimension_; }
  const std::string& label() const noexcept { return label_; }

  /// alpha = sum of squared norms; the natural scale of every cost.
  double energy() const noexcept { return energy_; }

 private:
  std::vector<Vector> vectors_;
  std::string label_;
  std::size_t dimension_ = 0;
  double energy_ = 0.0;
};

/// A subspace of C^d held as an orthonormal basis (possibly zero columns).
class Subspace {
 public:
  Subspace(std::size_t ambient_dimension, Matrix basis);

  static Subspace zero(std::size_t ambient_dimension);
  static Subspace span_of(const std::vector<Vector>& generators,
                          double tol_rank = tol::rank);

  std::size_t ambient_dimension() const noexcept { return ambient_dimension_; }
  std::size_t dimension() const noexcept { return basis_.cols(); }
  const Matrix& basis() const noexcept { return basis_; }

  Matrix projector_matrix() const;  // B B^H
  Projector projector() const;

 private:
  std::size_t ambient_dimension_;
  Matrix basis_;
};

/// Squared distance from f to the subspace: ||f||^2 - ||P f||^2, clamped at 0.
double distance_sq(const Vector& f, const Subspace& v);

/// Least-squares cost of a single subspace: sum of squared distances.
double cost_single(const DataSet& f, const Subspace& v);

/// The linear functional Q |-> Re sum <Q f, f>. For Q = I - P_V this equals
/// cost_single(F, V). The optional out-parameter reports the leftover
/// imaginary part, which measures numerical asymmetry of Q.
double phi(const DataSet& f, const Projector& q);
double phi(const DataSet& f, const Projector& q, double& imag_residual);

struct SingleFit {
  Subspace subspace;
  double cost = 0.0;
};

/// Globally optimal subspace of dimension <= rank for the data set, via SVD
/// of the data matrix. When the data rank is below `rank` the basis keeps
/// only the natural rank; the cost is the tail sum of squared singular
/// values either way.
SingleFit best_subspace(const DataSet& f, std::size_t rank);

/// phi(A) = trace(Sigma * A), the matrix form of a weak-continuous linear
/// functional on operators.
class SymmetricFunctional {
 public:
  explicit SymmetricFunctional(Matrix sigma);

  const Matrix& sigma() const noexcept { return sigma_; }
  std::size_t dimension() const noexcept { return sigma_.rows(); }

 private:
  Matrix sigma_;
};

/// Decomposes a functional that is nonnegative on the PSD cone into a frame:
/// F = { sqrt(lambda_i) u_i } over the positive eigenpairs of the symmetrized
/// matrix, so that trace(Sigma A) = sum <A f, f> for all PSD A. Throws
/// input_error when the symmetrized part has an eigenvalue below
/// -tol::psd * ||Sigma||.
DataSet functional_to_frame(const SymmetricFunctional& s);

}  // namespace subspace
