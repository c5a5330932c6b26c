#include "subspace/msap_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace subspace::lab {

namespace {

void require(bool condition, const char* message) {
  if (!condition) throw input_error(message);
}

constexpr double kAttainmentBand = 1e-9;

Vector basis_vector(std::size_t dimension, std::size_t index_1based) {
  Vector v(dimension, Complex{});
  v[index_1based - 1] = 1.0;
  return v;
}

double max_probe_residual(const Matrix& difference) {
  const std::size_t window = std::min(probe_window, difference.rows());
  double out = 0.0;
  for (std::size_t a = 0; a < window; ++a)
    for (std::size_t b = 0; b < window; ++b) out = std::max(out, std::abs(difference(a, b)));
  return out;
}

double min_diagonal(const Matrix& m) {
  double out = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m.rows(); ++i) out = std::min(out, m(i, i).real());
  return out;
}

double smallest_eigenvalue(const Matrix& m) {
  const HermitianEig eig = hermitian_eig(m);
  return eig.eigenvalues.back();
}

void finish_scan(AttainmentScan& scan, double energy) {
  double infimum = std::numeric_limits<double>::infinity();
  for (double c : scan.costs) infimum = std::min(infimum, c);
  if (scan.external_minimizer_cost) infimum = std::min(infimum, *scan.external_minimizer_cost);
  scan.infimum_estimate = infimum;
  const double band = kAttainmentBand * (1.0 + energy);
  for (std::size_t i = 0; i < scan.costs.size(); ++i) {
    if (scan.costs[i] <= infimum + band)
      scan.attained.emplace_back(scan.parameters[i], scan.costs[i]);
  }
}

}  // namespace

AttainmentScan lines_plane_scan(const std::vector<double>& c_grid) {
  require(!c_grid.empty(), "lines_plane_scan: empty grid");
  const DataSet f({basis_vector(3, 2)});

  AttainmentScan scan;
  scan.family = "lines-plane";
  scan.parameters = c_grid;
  for (double c : c_grid) {
    Vector generator(3, Complex{});
    generator[1] = c;
    generator[2] = 1.0;
    scan.costs.push_back(cost_single(f, Subspace::span_of({generator})));
  }
  const Subspace plane(3, Matrix::from_columns(3, {basis_vector(3, 1), basis_vector(3, 2)}));
  scan.external_minimizer_cost = cost_single(f, plane);
  finish_scan(scan, f.energy());
  return scan;
}

WeakConvergenceTrace weak_limit_trace(std::size_t truncation,
                                      const std::vector<std::size_t>& n_list) {
  const std::size_t n_dim = truncation;
  for (std::size_t n : n_list) {
    require(n >= 3, "weak_limit_trace: indices must be >= 3");
    require(n + 1 <= n_dim, "weak_limit_trace: index exceeds truncation dimension");
  }
  require(n_dim >= probe_window, "weak_limit_trace: truncation below the probe window");

  Matrix q(n_dim, n_dim);
  q(0, 0) = 0.5;
  q(1, 1) = 0.5;

  WeakConvergenceTrace trace;
  trace.truncation = n_dim;
  trace.indices = n_list;
  for (std::size_t n : n_list) {
    const Vector v = [&] {
      Vector x(n_dim, Complex{});
      x[0] = 1.0;
      x[n - 1] = 1.0;
      return x;
    }();
    const Vector w = [&] {
      Vector x(n_dim, Complex{});
      x[1] = 1.0;
      x[n] = 1.0;
      return x;
    }();
    Matrix p = outer(v, v);
    p += outer(w, w);
    p *= 0.5;

    const Matrix difference = p - q;
    trace.probe_residuals.push_back(max_probe_residual(difference));
    trace.psd_gaps.push_back(smallest_eigenvalue(difference));
    trace.diagonal_gaps.push_back(min_diagonal(difference));

    Matrix split = difference;  // P_n - Q - (P_{e_n} + P_{e_{n+1}})/2
    split(n - 1, n - 1) -= 0.5;
    split(n, n) -= 0.5;
    trace.split_residuals.push_back(max_abs(split));

    split(0, n - 1) -= 0.5;  // restore the rank-one coupling terms
    split(n - 1, 0) -= 0.5;
    split(1, n) -= 0.5;
    split(n, 1) -= 0.5;
    trace.coupled_split_residuals.push_back(max_abs(split));
  }
  return trace;
}

WeakConvergenceTrace rank_closure_trace(std::size_t k, const std::vector<double>& t,
                                        std::size_t truncation,
                                        const std::vector<std::size_t>& n_list) {
  require(k == t.size(), "rank_closure_trace: k must equal the number of weights");
  require(k >= 1, "rank_closure_trace: k must be >= 1");
  for (double ti : t)
    require(ti >= 0.0 && ti <= 1.0, "rank_closure_trace: weights must lie in [0, 1]");
  for (std::size_t n : n_list) {
    require(n >= 1, "rank_closure_trace: indices must be >= 1");
    require(n * (2 * k + 1) <= truncation, "rank_closure_trace: escape index exceeds truncation");
  }
  require(truncation >= probe_window, "rank_closure_trace: truncation below the probe window");

  Matrix limit(truncation, truncation);
  for (std::size_t i = 0; i < k; ++i) limit(i, i) = t[i] * t[i];

  WeakConvergenceTrace trace;
  trace.truncation = truncation;
  trace.indices = n_list;
  for (std::size_t n : n_list) {
    Matrix x(truncation, truncation);
    for (std::size_t i = 1; i <= k; ++i) {
      const double ti = std::abs(t[i - 1]);
      const double si = std::sqrt(std::max(1.0 - ti * ti, 0.0));
      Vector v(truncation, Complex{});
      v[i - 1] = ti;
      v[n * i + n * (k + 1) - 1] += si;  // escape index n*i + n*(k+1), 1-based
      x += outer(v, v);
    }
    const Matrix difference = x - limit;
    trace.probe_residuals.push_back(max_probe_residual(difference));
    trace.psd_gaps.push_back(smallest_eigenvalue(difference));
    trace.diagonal_gaps.push_back(min_diagonal(difference));
  }
  return trace;
}

SeparationFamily separation_family(std::size_t k, std::size_t d, std::uint64_t seed) {
  require(k >= 1, "separation_family: k must be >= 1");
  require(k < d, "separation_family: k must be below the dimension");

  std::mt19937_64 rng(seed);
  const auto draw = [&rng]() {
    const double re = static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
    const double im = static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
    return Complex(re, im);
  };

  SeparationFamily family;
  for (;;) {
    family.generators.clear();
    for (std::size_t i = 0; i < k; ++i) {
      Vector v(d);
      for (Complex& z : v) z = draw();
      const double n = norm(v);
      for (Complex& z : v) z /= n;
      family.generators.push_back(std::move(v));
    }
    const Matrix basis = orthonormalize(family.generators);
    if (basis.cols() != k) continue;  // regenerate a degenerate draw

    Vector u(d);
    for (Complex& z : u) z = draw();
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t c = 0; c < basis.cols(); ++c) {
        const Vector col = basis.column(c);
        const Complex coeff = inner(col, u);
        for (std::size_t i = 0; i < d; ++i) u[i] -= coeff * col[i];
      }
    }
    const double un = norm(u);
    if (un < 1e-6) continue;
    for (Complex& z : u) z /= un;
    family.direction = std::move(u);
    return family;
  }
}

double separation_cost(const SeparationFamily& family, double t, bool reduced_data) {
  std::vector<Vector> span_generators(family.generators.begin(), family.generators.end() - 1);
  Vector tilted = family.generators.back();
  for (std::size_t i = 0; i < tilted.size(); ++i) tilted[i] += t * family.direction[i];
  span_generators.push_back(std::move(tilted));
  const Subspace v_t = Subspace::span_of(span_generators);

  std::vector<Vector> data(family.generators.begin(),
                           reduced_data ? family.generators.end() - 1 : family.generators.end());
  if (data.empty()) return 0.0;  // reduced side of k = 1 has no data
  return cost_single(DataSet(std::move(data)), v_t);
}

AttainmentScan separation_scan(std::size_t k, std::size_t d, const std::vector<double>& t_grid,
                               std::uint64_t seed) {
  require(!t_grid.empty(), "separation_scan: empty grid");
  for (double t : t_grid) require(t > 0.0, "separation_scan: grid must be positive");
  const SeparationFamily family = separation_family(k, d, seed);

  AttainmentScan scan;
  scan.family = "msap-separation";
  scan.parameters = t_grid;
  double energy = 0.0;
  for (const Vector& v : family.generators) energy += norm_sq(v);
  for (double t : t_grid) scan.costs.push_back(separation_cost(family, t, false));
  // The subspace excluded from the class (t = 0) contains every generator.
  scan.external_minimizer_cost =
      cost_single(DataSet(family.generators), Subspace::span_of(family.generators));
  finish_scan(scan, energy);
  return scan;
}

}  // namespace subspace::lab
