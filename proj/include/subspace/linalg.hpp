#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace subspace {

using Complex = std::complex<double>;
using Vector = std::vector<Complex>;

/// Default numerical tolerances. Absolute in the max norm unless a comment
/// says the check is scale-relative.
namespace tol {
inline constexpr double sym = 1e-10;   ///< projector self-adjointness
inline constexpr double idem = 1e-10;  ///< projector idempotency
inline constexpr double orth = 1e-10;  ///< basis orthonormality
inline constexpr double rank = 1e-9;   ///< rank cutoff, relative to largest input norm
inline constexpr double psd = 1e-9;    ///< PSD acceptance for functionals, relative
}  // namespace tol

/// Caller-supplied data violates an operation's preconditions.
class input_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A solver declined the instance (size caps and the like).
class solver_refusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool is_finite(Complex z);
bool is_finite(const Vector& v);

double norm_sq(const Vector& v);
double norm(const Vector& v);

/// Hermitian inner product, conjugate-linear in the first argument.
Complex inner(const Vector& a, const Vector& b);

/// Dense complex matrix, row-major. Matrices with zero columns are legal and
/// represent empty spans.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, Complex fill = Complex{});

  static Matrix identity(std::size_t n);
  /// Builds a rows x columns.size() matrix from column vectors (each of
  /// length `rows`).
  static Matrix from_columns(std::size_t rows, const std::vector<Vector>& columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Matrix adjoint() const;
  Vector column(std::size_t j) const;
  void set_column(std::size_t j, const Vector& v);

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(Complex scalar);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator*(Complex scalar, Matrix m);
Matrix operator*(const Matrix& lhs, const Matrix& rhs);
Vector operator*(const Matrix& m, const Vector& v);

/// v * w^H as a rows(v) x rows(w) matrix.
Matrix outer(const Vector& v, const Vector& w);

bool is_finite(const Matrix& m);
double max_abs(const Matrix& m);
double frobenius_norm(const Matrix& m);

/// Orthogonal projector: square, self-adjoint and idempotent to tolerance.
/// Construction validates; the eigenvalue range [0, 1] follows from the two
/// checks and is asserted property-style in the test suite.
class Projector {
 public:
  explicit Projector(Matrix m);

  const Matrix& matrix() const noexcept { return matrix_; }
  std::size_t dimension() const noexcept { return matrix_.rows(); }

 private:
  Matrix matrix_;
};

/// Thin SVD A = U diag(sigma) V^H with r = min(rows, cols) columns on each
/// side. Singular values are non-increasing; every left singular vector's
/// first nonzero entry is real and positive.
struct SvdResult {
  Matrix left_vectors;                  // rows x r, orthonormal columns
  std::vector<double> singular_values;  // size r, non-increasing, >= 0
  Matrix right_vectors;                 // cols x r, orthonormal columns
};

/// One-sided Jacobi SVD. Deterministic for a fixed input; ties between equal
/// singular values keep the sweep's output order.
SvdResult svd(const Matrix& a);

/// Modified Gram-Schmidt with re-orthogonalization. Vectors whose residual
/// after projection onto previously accepted columns is <= tol_rank times the
/// largest input norm are dropped; the result may have zero columns.
Matrix orthonormalize(const std::vector<Vector>& vectors, double tol_rank = tol::rank);

/// P = B B^H for a matrix B with orthonormal columns.
Projector projector_from_basis(const Matrix& basis);

/// Q = I - P. Applying twice returns the original projector exactly.
Projector complement_projector(const Projector& p);

/// Unitary DFT matrix W[j,k] = exp(-2*pi*i*j*k/p) / sqrt(p).
Matrix dft_matrix(std::size_t p);

/// Eigendecomposition A = V diag(lambda) V^H of a Hermitian matrix,
/// eigenvalues sorted non-increasing.
struct HermitianEig {
  std::vector<double> eigenvalues;
  Matrix eigenvectors;  // n x n unitary, columns aligned with eigenvalues
};

HermitianEig hermitian_eig(const Matrix& a);

}  // namespace subspace
