#include "subspace/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace subspace {

namespace {

constexpr double kJacobiConvergence = 1e-14;
constexpr int kJacobiMaxSweeps = 64;

// Relative cutoff below which a Jacobi column is treated as numerically zero
// and its left singular vector is rebuilt by basis completion.
constexpr double kDegenerateCutoff = 1e-13;

void require(bool condition, const char* message) {
  if (!condition) throw input_error(message);
}

// Rotates columns i and j of m in place: (x, y) -> (c*x - conj(s)*y, s*x + c*y).
void rotate_columns(Matrix& m, std::size_t i, std::size_t j, double c, Complex s) {
  const std::size_t rows = m.rows();
  for (std::size_t k = 0; k < rows; ++k) {
    const Complex x = m(k, i);
    const Complex y = m(k, j);
    m(k, i) = c * x - std::conj(s) * y;
    m(k, j) = s * x + c * y;
  }
}

// One-sided Jacobi: orthogonalizes the columns of u, accumulating the applied
// rotations into v (so that input = u_out * v^H once u_out is normalized).
void jacobi_orthogonalize(Matrix& u, Matrix& v) {
  const std::size_t n = u.cols();
  const std::size_t rows = u.rows();
  if (n < 2) return;
  for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        Complex g{};
        double a = 0.0;
        double b = 0.0;
        for (std::size_t k = 0; k < rows; ++k) {
          g += std::conj(u(k, i)) * u(k, j);
          a += std::norm(u(k, i));
          b += std::norm(u(k, j));
        }
        if (a == 0.0 || b == 0.0) continue;
        const double abs_g = std::abs(g);
        if (abs_g <= kJacobiConvergence * std::sqrt(a) * std::sqrt(b)) continue;
        rotated = true;
        const Complex phase = g / abs_g;
        const double zeta = (b - a) / (2.0 * abs_g);
        double t = 1.0 / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        if (zeta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const Complex s = phase * (c * t);
        rotate_columns(u, i, j, c, s);
        rotate_columns(v, i, j, c, s);
      }
    }
    if (!rotated) break;
  }
}

// Makes the first nonzero entry of u's column j real and positive, applying
// the compensating phase to v's column j so the product u * v^H is unchanged.
void fix_column_phase(Matrix& u, Matrix& v, std::size_t j) {
  double column_max = 0.0;
  for (std::size_t k = 0; k < u.rows(); ++k) column_max = std::max(column_max, std::abs(u(k, j)));
  if (column_max == 0.0) return;
  for (std::size_t k = 0; k < u.rows(); ++k) {
    const double mag = std::abs(u(k, j));
    if (mag > 1e-12 * column_max) {
      const Complex phase = u(k, j) / mag;
      const Complex rot = std::conj(phase);
      for (std::size_t r = 0; r < u.rows(); ++r) u(r, j) *= rot;
      if (j < v.cols()) {
        for (std::size_t r = 0; r < v.rows(); ++r) v(r, j) *= rot;
      }
      return;
    }
  }
}

// Replaces column j of u with a unit vector orthogonal to columns [0, j).
// Used for singular directions below the degeneracy cutoff. Takes the basis
// vector with the largest residual; with j < rows one always exists.
void complete_column(Matrix& u, std::size_t j) {
  const std::size_t rows = u.rows();
  Vector best;
  double best_norm = 0.0;
  for (std::size_t candidate = 0; candidate < rows; ++candidate) {
    Vector r(rows, Complex{});
    r[candidate] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t c = 0; c < j; ++c) {
        Complex coeff{};
        for (std::size_t k = 0; k < rows; ++k) coeff += std::conj(u(k, c)) * r[k];
        for (std::size_t k = 0; k < rows; ++k) r[k] -= coeff * u(k, c);
      }
    }
    const double rn = norm(r);
    if (rn > best_norm) {
      best_norm = rn;
      best = std::move(r);
    }
    if (best_norm > 0.70) break;  // good enough; avoids scanning every candidate
  }
  if (best_norm <= 0.0) throw std::runtime_error("svd: failed to complete orthonormal basis");
  for (std::size_t k = 0; k < rows; ++k) u(k, j) = best[k] / best_norm;
}

}  // namespace

bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

bool is_finite(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](Complex z) { return is_finite(z); });
}

double norm_sq(const Vector& v) {
  double s = 0.0;
  for (const Complex& z : v) s += std::norm(z);
  return s;
}

double norm(const Vector& v) { return std::sqrt(norm_sq(v)); }

Complex inner(const Vector& a, const Vector& b) {
  require(a.size() == b.size(), "inner: dimension mismatch");
  Complex s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

Matrix::Matrix(std::size_t rows, std::size_t cols, Complex fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_columns(std::size_t rows, const std::vector<Vector>& columns) {
  Matrix m(rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    require(columns[j].size() == rows, "from_columns: column dimension mismatch");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
  }
  return m;
}

Matrix Matrix::adjoint() const {
  Matrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

Vector Matrix::column(std::size_t j) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

void Matrix::set_column(std::size_t j, const Vector& v) {
  require(v.size() == rows_, "set_column: dimension mismatch");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

Matrix& Matrix::operator+=(const Matrix& other) {
  require(rows_ == other.rows_ && cols_ == other.cols_, "matrix add: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require(rows_ == other.rows_ && cols_ == other.cols_, "matrix subtract: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(Complex scalar) {
  for (Complex& z : data_) z *= scalar;
  return *this;
}

Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
Matrix operator*(Complex scalar, Matrix m) { return m *= scalar; }

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
  require(lhs.cols() == rhs.rows(), "matrix multiply: shape mismatch");
  Matrix out(lhs.rows(), rhs.cols());
  for (std::size_t i = 0; i < lhs.rows(); ++i) {
    for (std::size_t k = 0; k < lhs.cols(); ++k) {
      const Complex a = lhs(i, k);
      if (a == Complex{}) continue;
      for (std::size_t j = 0; j < rhs.cols(); ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

Vector operator*(const Matrix& m, const Vector& v) {
  require(m.cols() == v.size(), "matrix apply: dimension mismatch");
  Vector out(m.rows(), Complex{});
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Complex s{};
    for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

Matrix outer(const Vector& v, const Vector& w) {
  Matrix m(v.size(), w.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j) m(i, j) = v[i] * std::conj(w[j]);
  return m;
}

bool is_finite(const Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!is_finite(m(i, j))) return false;
  return true;
}

double max_abs(const Matrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s = std::max(s, std::abs(m(i, j)));
  return s;
}

double frobenius_norm(const Matrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s += std::norm(m(i, j));
  return std::sqrt(s);
}

Projector::Projector(Matrix m) : matrix_(std::move(m)) {
  require(matrix_.rows() == matrix_.cols(), "projector: matrix must be square");
  require(is_finite(matrix_), "projector: non-finite entries");
  require(max_abs(matrix_ - matrix_.adjoint()) <= tol::sym, "projector: not self-adjoint");
  require(max_abs(matrix_ * matrix_ - matrix_) <= tol::idem, "projector: not idempotent");
}

SvdResult svd(const Matrix& a) {
  require(is_finite(a), "svd: non-finite entries");
  if (a.rows() < a.cols()) {
    SvdResult t = svd(a.adjoint());
    SvdResult out{std::move(t.right_vectors), std::move(t.singular_values),
                  std::move(t.left_vectors)};
    // the sign convention follows the left vectors; re-apply after the swap
    for (std::size_t j = 0; j < out.left_vectors.cols(); ++j)
      fix_column_phase(out.left_vectors, out.right_vectors, j);
    return out;
  }
  const std::size_t rows = a.rows();
  const std::size_t n = a.cols();  // r = min(rows, cols) = n here

  Matrix u = a;
  Matrix v = Matrix::identity(n);
  jacobi_orthogonalize(u, v);

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = norm(u.column(j));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&sigma](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

  SvdResult out;
  out.left_vectors = Matrix(rows, n);
  out.right_vectors = Matrix(n, n);
  out.singular_values.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.singular_values[j] = sigma[order[j]];
    out.left_vectors.set_column(j, u.column(order[j]));
    out.right_vectors.set_column(j, v.column(order[j]));
  }

  const double sigma_max = n > 0 ? out.singular_values[0] : 0.0;
  const double cutoff = sigma_max * kDegenerateCutoff;
  for (std::size_t j = 0; j < n; ++j) {
    const double s = out.singular_values[j];
    if (s > cutoff && s > 0.0) {
      Vector col = out.left_vectors.column(j);
      for (Complex& z : col) z /= s;
      out.left_vectors.set_column(j, col);
    } else {
      complete_column(out.left_vectors, j);
    }
    fix_column_phase(out.left_vectors, out.right_vectors, j);
  }
  return out;
}

Matrix orthonormalize(const std::vector<Vector>& vectors, double tol_rank) {
  if (vectors.empty()) return Matrix(0, 0);
  const std::size_t d = vectors.front().size();
  require(d >= 1, "orthonormalize: zero-length vector");
  double max_norm = 0.0;
  for (const Vector& v : vectors) {
    require(v.size() == d, "orthonormalize: dimension mismatch");
    require(is_finite(v), "orthonormalize: non-finite entries");
    max_norm = std::max(max_norm, norm(v));
  }
  if (max_norm == 0.0) return Matrix(d, 0);

  std::vector<Vector> accepted;
  for (const Vector& v : vectors) {
    Vector r = v;
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vector& c : accepted) {
        const Complex coeff = inner(c, r);
        for (std::size_t k = 0; k < d; ++k) r[k] -= coeff * c[k];
      }
    }
    const double rn = norm(r);
    if (rn > tol_rank * max_norm) {
      for (Complex& z : r) z /= rn;
      accepted.push_back(std::move(r));
    }
  }
  return Matrix::from_columns(d, accepted);
}

Projector projector_from_basis(const Matrix& basis) {
  require(is_finite(basis), "projector_from_basis: non-finite entries");
  if (basis.cols() > 0) {
    const Matrix gram = basis.adjoint() * basis;
    require(max_abs(gram - Matrix::identity(basis.cols())) <= tol::orth,
            "projector_from_basis: columns not orthonormal");
  }
  return Projector(basis * basis.adjoint());
}

Projector complement_projector(const Projector& p) {
  return Projector(Matrix::identity(p.dimension()) - p.matrix());
}

Matrix dft_matrix(std::size_t p) {
  require(p >= 1, "dft_matrix: order must be positive");
  Matrix w(p, p);
  const double scale = 1.0 / std::sqrt(static_cast<double>(p));
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t k = 0; k < p; ++k) {
      const std::size_t phase_index = (j * k) % p;
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(phase_index) /
                           static_cast<double>(p);
      w(j, k) = std::polar(scale, angle);
    }
  }
  return w;
}

HermitianEig hermitian_eig(const Matrix& a) {
  require(a.rows() == a.cols(), "hermitian_eig: matrix must be square");
  require(is_finite(a), "hermitian_eig: non-finite entries");
  const std::size_t n = a.rows();
  const double scale = std::max(max_abs(a), 1.0);
  require(max_abs(a - a.adjoint()) <= 1e-8 * scale, "hermitian_eig: matrix not Hermitian");

  Matrix h = a;
  {  // exact symmetrization removes the caller's rounding
    Matrix ah = a.adjoint();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) h(i, j) = 0.5 * (h(i, j) + ah(i, j));
  }
  Matrix v = Matrix::identity(n);

  const double threshold = kJacobiConvergence * std::max(frobenius_norm(h), 1e-300);
  for (int sweep = 0; sweep < kJacobiMaxSweeps && n >= 2; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex g = h(p, q);
        const double abs_g = std::abs(g);
        if (abs_g <= threshold) continue;
        rotated = true;
        const Complex phase = g / abs_g;
        const double alpha = h(p, p).real();
        const double beta = h(q, q).real();
        const double tau = (alpha - beta) / (2.0 * abs_g);
        double t;
        if (tau >= 0.0) {
          t = -1.0 / (tau + std::sqrt(1.0 + tau * tau));
        } else {
          t = 1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // similarity by U = [[c, s*phase], [-s*conj(phase), c]] on (p, q)
        for (std::size_t k = 0; k < n; ++k) {  // right multiplication
          const Complex x = h(k, p);
          const Complex y = h(k, q);
          h(k, p) = c * x - s * std::conj(phase) * y;
          h(k, q) = s * phase * x + c * y;
        }
        for (std::size_t k = 0; k < n; ++k) {  // left multiplication by U^H
          const Complex x = h(p, k);
          const Complex y = h(q, k);
          h(p, k) = c * x - s * phase * y;
          h(q, k) = s * std::conj(phase) * x + c * y;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex x = v(k, p);
          const Complex y = v(k, q);
          v(k, p) = c * x - s * std::conj(phase) * y;
          v(k, q) = s * phase * x + c * y;
        }
        h(p, q) = Complex{};
        h(q, p) = Complex{};
      }
    }
    if (!rotated) break;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&h](std::size_t i, std::size_t j) {
    return h(i, i).real() > h(j, j).real();
  });

  HermitianEig out;
  out.eigenvalues.resize(n);
  out.eigenvectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.eigenvalues[j] = h(order[j], order[j]).real();
    out.eigenvectors.set_column(j, v.column(order[j]));
  }
  return out;
}

}  // namespace subspace
