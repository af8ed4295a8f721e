#pragma once

// Numeric side of the complete-projector algebra: P = sum_i P_i, the
// truncated expansions Gamma_n, the power sequence 1 - (1-P)^m, and the
// allowed subspace ker P.

#include <optional>
#include <vector>

#include "paulikern/operator.hpp"
#include "paulikern/words.hpp"

namespace paulikern {

/// Eigenvalues of P below this count as zero (P's spectrum lives in [0, N]).
inline constexpr double kDefaultKernelThreshold = 1e-10;
/// Upper edge of the "almost forbidden" band reported by convergence_report.
inline constexpr double kAlmostForbiddenCeiling = 0.1;

Operator sum_projector(const ProjectorSet& set);

/// Gamma_n via Gamma_{k+1} = 1 - (1-P)(1-Gamma_k), Gamma_1 = P.
Operator gamma_truncated(const ProjectorSet& set, int n);

/// Gamma_n straight from its definition: alternating sum of the layers of
/// adjacent-distinct products, each layer accumulated by last letter.
/// Independent of the recursion above.
Operator gamma_expansion(const ProjectorSet& set, int n);

/// Sum of coeff * (product of projectors along the word), term by term.
/// Letters are 1-based indices into the set.
Operator evaluate_formal_sum(const FormalSum& s, const ProjectorSet& set);

/// (1-P)^m by binary exponentiation.
Operator complement_power(const ProjectorSet& set, long long m);

/// Default growth guard for power_limit: sqrt(dim) bounds ||(1-P)^j||_F
/// whenever the spectrum of P lies in [0, 2].
double default_power_guard(const ProjectorSet& set);

/// 1 - (1-P)^m. Throws DivergedError when an intermediate power's Frobenius
/// norm exceeds `guard` (guard <= 0 selects default_power_guard).
Operator power_limit(const ProjectorSet& set, long long m, double guard = 0.0);

struct KernelBasis {
  Index ambient_dim = 0;
  Matrix vectors;                     // orthonormal columns spanning ker P
  double threshold = kDefaultKernelThreshold;
  double residual = 0.0;              // max_v ||P v||
  double intersection_residual = 0.0; // max_{v,i} ||P_i v||

  Index size() const noexcept { return vectors.cols(); }
  bool intersection_ok() const noexcept { return intersection_residual <= threshold; }
};

/// Eigenvectors of P with eigenvalue strictly below `threshold`.
KernelBasis kernel_basis(const ProjectorSet& set, double threshold = kDefaultKernelThreshold);

/// Kernel of an arbitrary positive semidefinite penalty operator.
KernelBasis kernel_basis(const Operator& penalty, double threshold = kDefaultKernelThreshold);

/// The complete projector, defined as 1 minus the projector onto ker P.
Projector gamma_spectral(const ProjectorSet& set, double threshold = kDefaultKernelThreshold);

/// Projector onto the union of all spans, from an SVD of the stacked span
/// vectors; a singular value s counts iff s^2 >= threshold, which matches
/// the eigenvalue cut on P.
Projector gamma_union(const ProjectorSet& set, double threshold = kDefaultKernelThreshold);

struct Theorem1Report {
  int order = 0;
  double expansion_residual = 0.0;  // ||gamma_expansion - (1 - (1-P)^m)||_F
  double recursion_residual = 0.0;  // ||gamma_truncated - (1 - (1-P)^m)||_F
  double tolerance = 0.0;           // 1e-10 * dim
  bool passed = false;
};

Theorem1Report verify_theorem1(const ProjectorSet& set, int m);

struct Theorem2Report {
  Index kernel_dim_sum = 0;        // from eigenvalues of P
  Index kernel_dim_gamma = 0;      // from the complete projector (union route)
  Index kernel_dim_spectral = 0;   // from eigenvalues of gamma_spectral
  double gamma_on_kernel = 0.0;    // max_{v in ker P} ||Gamma v||
  double sum_on_gamma_kernel = 0.0;  // max_{u in ker Gamma} ||P u||
  double gamma_mismatch = 0.0;     // ||gamma_spectral - gamma_union||_F
  double threshold = 0.0;
  bool passed = false;
};

Theorem2Report verify_theorem2(const ProjectorSet& set, double threshold = kDefaultKernelThreshold);

struct CommutationReport {
  std::vector<double> left;   // ||P_i Gamma - P_i||_F
  std::vector<double> right;  // ||Gamma P_i - P_i||_F
  double max_residual = 0.0;
  double tolerance = 0.0;     // 1e-9 * dim
  bool passed = false;
};

CommutationReport commutation_check(const ProjectorSet& set, double threshold = kDefaultKernelThreshold);

struct SpectrumReport {
  Vector eigenvalues;  // ascending spectrum of P
  Index kernel_dim = 0;
  double contraction_factor = 0.0;  // max |1 - lambda| over lambda >= threshold
  std::optional<long long> predicted_m;
  bool divergent = false;  // some lambda >= 2 (within tolerance)
  bool stagnant = false;   // some lambda == 2 (within tolerance)
  Index ambiguous_count = 0;  // eigenvalues within a factor 10 of the threshold
  std::vector<double> almost_forbidden;  // eigenvalues in [threshold, 0.1]
  double threshold = 0.0;
  double target = 0.0;
};

inline constexpr double kSpectrumEdgeTolerance = 1e-9;

SpectrumReport convergence_report(const ProjectorSet& set, double threshold = kDefaultKernelThreshold,
                                  double target = 1e-12);

/// Candidate pairwise overlap statistics between the projectors.
struct OverlapStatistics {
  double lambda_max = 0.0;
  Matrix product_norms;  // ||P_i P_j||_F
  Matrix traces;         // trace(P_i P_j)
};

OverlapStatistics overlap_statistics(const ProjectorSet& set);

}  // namespace paulikern
