#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "subspace/approximation.hpp"

// Numerical reconstructions of attainment and non-attainment phenomena for
// subspace families: a parameterized family whose infimum is only reached
// outside the family, weakly convergent projector sequences probed on a
// finite window, and a family separating the cardinality-restricted
// attainment properties.
//
// Infinite-dimensional sequences are truncated to R^N (default N = 64) and
// probed against the first `probe_window` basis vectors. Escaping mass moves
// to basis directions beyond the window, so the probed residuals vanish
// exactly once the escape indices pass it; the demonstrations are exact
// rather than asymptotic.
//
// Out of scope here, and documented only: the family of all
// finite-dimensional subspaces of an infinite-dimensional space (its content
// has no faithful finite truncation) and the codimension-one family with one
// member removed (mixes infinite rank and corank).

namespace subspace::lab {

inline constexpr std::size_t probe_window = 10;
inline constexpr std::uint64_t separation_seed = 2024;

/// Costs of a parameterized family, the estimated infimum, and which family
/// members (if any) attain it within a scale-relative band.
struct AttainmentScan {
  std::string family;
  std::vector<double> parameters;
  std::vector<double> costs;
  double infimum_estimate = 0.0;
  std::vector<std::pair<double, double>> attained;  // (parameter, cost)
  std::optional<double> external_minimizer_cost;
};

/// Entrywise diagnostics of a matrix sequence against its weak limit. All
/// lists are aligned with `indices`.
struct WeakConvergenceTrace {
  std::size_t truncation = 0;
  std::vector<std::size_t> indices;
  std::vector<double> probe_residuals;  // max |(A_n - A_inf)(a, b)| over the probe window
  std::vector<double> psd_gaps;         // smallest eigenvalue of A_n - A_inf
  std::vector<double> diagonal_gaps;    // smallest diagonal entry of A_n - A_inf
  // Residual of the split P_n = Q + (P_{e_n} + P_{e_{n+1}})/2, and of the same
  // split with the rank-one coupling terms (e_1 e_n^* + e_n e_1^* + e_2
  // e_{n+1}^* + e_{n+1} e_2^*)/2 restored. The first stays at 1/2: the plain
  // split drops the coupling, so only the corrected identity closes.
  std::vector<double> split_residuals;
  std::vector<double> coupled_split_residuals;
};

/// Family of lines spanned by e3 + c*e2 in C^3, scanned against F = {e2};
/// the plane span{e1, e2} is the external minimizer. Closed-form costs
/// 1/(1 + c^2) decrease to 0 but never reach it on the lines.
AttainmentScan lines_plane_scan(const std::vector<double>& c_grid);

/// Rank-2 projectors P_n onto span{e1 + e_n, e2 + e_{n+1}} in R^N, probed
/// against their weak limit Q = (P_{e1} + P_{e2})/2.
WeakConvergenceTrace weak_limit_trace(std::size_t truncation,
                                      const std::vector<std::size_t>& n_list);

/// Rank-k projectors x_n built from v_n(i) = |t_i| e_i + sqrt(1 - t_i^2)
/// e_{n(i+k+1)}, probed against the diagonal limit sum t_i^2 P_{e_i}.
WeakConvergenceTrace rank_closure_trace(std::size_t k, const std::vector<double>& t,
                                        std::size_t truncation,
                                        const std::vector<std::size_t>& n_list);

/// Seeded generic independent vectors v_1..v_k in C^d plus a unit direction u
/// orthogonal to all of them.
struct SeparationFamily {
  std::vector<Vector> generators;
  Vector direction;
};

SeparationFamily separation_family(std::size_t k, std::size_t d,
                                   std::uint64_t seed = separation_seed);

/// Cost of V_t = span{v_1, .., v_{k-1}, v_k + t*u} against the full generator
/// set (reduced_data = false) or against {v_1, .., v_{k-1}} (reduced_data =
/// true, always zero).
double separation_cost(const SeparationFamily& family, double t, bool reduced_data);

/// Scans V_t over a positive grid against F = {v_1..v_k}: costs are strictly
/// positive, decrease with t and tend to 0, which only the excluded subspace
/// span{v_1..v_k} itself attains.
AttainmentScan separation_scan(std::size_t k, std::size_t d, const std::vector<double>& t_grid,
                               std::uint64_t seed = separation_seed);

}  // namespace subspace::lab
