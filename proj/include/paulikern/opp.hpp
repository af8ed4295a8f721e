#pragma once

// Orthogonalizing pseudopotential: H + lambda * P at finite strength versus H
// restricted to the allowed subspace ker P.

#include <optional>
#include <vector>

#include "paulikern/operator.hpp"
#include "paulikern/projector_algebra.hpp"

namespace paulikern {

struct ProjectedHamiltonian {
  Operator matrix;  // K^T h K
  KernelBasis kernel;
  Vector spectrum;  // ascending
};

/// Throws EmptyKernel when no allowed states remain.
ProjectedHamiltonian projected_hamiltonian(const Operator& h, const ProjectorSet& set,
                                           double threshold = kDefaultKernelThreshold);
/// Same, for an arbitrary positive semidefinite penalty (e.g. the complete projector).
ProjectedHamiltonian projected_hamiltonian(const Operator& h, const Operator& penalty,
                                           double threshold = kDefaultKernelThreshold);

struct OppSweepResult {
  double h_norm = 0.0;  // ||h||_F
  double threshold = 0.0;
  std::vector<double> lambda_grid;
  std::vector<std::vector<double>> energies;  // [grid point][level]
  std::vector<std::vector<double>> gaps;      // |E_k(lambda) - E_k^proj|
  std::vector<double> projected_energies;     // lowest k levels of K^T h K
  std::vector<std::optional<double>> slopes;  // log-log slope over the tail
  std::vector<bool> degenerate_tail;
  bool monotone = true;  // E_k nondecreasing along the grid for every k
};

/// Number of trailing grid points used for the slope fit.
inline constexpr std::size_t kSlopeFitPoints = 4;

/// Log-spaced grid of `count` points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t count);

/// Twelve points from 1e1 to 1e6, in units of ||h||_F.
std::vector<double> default_lambda_grid(double h_norm);

/// Lowest `levels` eigenvalues of h + lambda P for each grid point. Levels
/// living in ker P are refined through the exact partitioned
/// (Feshbach) equation whenever the penalized block sits well above them,
/// which keeps the O(1/lambda) gaps accurate at large lambda.
OppSweepResult lambda_sweep(const Operator& h, const Operator& penalty, const std::vector<double>& lambda_grid,
                            int levels, double threshold = kDefaultKernelThreshold);
OppSweepResult lambda_sweep(const Operator& h, const ProjectorSet& set, const std::vector<double>& lambda_grid,
                            int levels, double threshold = kDefaultKernelThreshold);

struct AlmostForbiddenRow {
  double eps = 0.0;
  Index band_modes = 0;  // eigenvalues of P in [threshold, eps)
  std::optional<double> e_elim;  // ground energy on {mu < threshold}
  std::optional<double> e_keep;  // ground energy on {mu < eps}
  std::optional<double> e_opp;   // ground energy of h + lambda_ref P
};

struct AlmostForbiddenReport {
  double threshold = 0.0;
  double lambda_ref = 0.0;
  std::vector<AlmostForbiddenRow> rows;
};

/// For each eps, compares eliminating the modes of P with eigenvalue in
/// [threshold, eps) against keeping them in the allowed space.
AlmostForbiddenReport almost_forbidden_report(const Operator& h, const ProjectorSet& set,
                                              const std::vector<double>& eps_grid, double lambda_ref,
                                              double threshold = kDefaultKernelThreshold);

}  // namespace paulikern
