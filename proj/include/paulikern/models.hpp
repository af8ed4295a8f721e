#pragma once

// Generators of projector sets and toy Hamiltonians.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "paulikern/operator.hpp"

namespace paulikern {

/// Random ensemble: projector i spans ranks[i] Gaussian vectors. Bit-identical
/// output for equal (dim, ranks, seed).
ProjectorSet random_ensemble(Index dim, int n_proj, std::span<const int> ranks, std::uint64_t seed);

/// Three rank-1 projectors onto unit vectors with pairwise inner product c,
/// embedded in the first three coordinates of R^dim. Requires c in (-1/2, 1).
ProjectorSet equal_overlap_triple(Index dim, double c);

struct GaussHermite {
  std::vector<double> nodes;    // ascending
  std::vector<double> weights;  // for weight function exp(-x^2)
};

/// n-point rule, exact for polynomial degree <= 2n-1.
GaussHermite gauss_hermite(int n);

/// Polynomial part of the normalized oscillator functions,
/// psi_k(x) = h_k(x) exp(-x^2/2), for k = 0..nmax.
std::vector<double> oscillator_polynomials(int nmax, double x);

enum class ForbiddenState { s0, s2 };

std::string to_string(ForbiddenState f);
ForbiddenState forbidden_state_from_string(const std::string& label);
/// Oscillator quantum of the pair state (0S -> 0, 2S -> 2).
int oscillator_quantum(ForbiddenState f);

struct ForbiddenStateSpec {
  std::vector<ForbiddenState> labels{ForbiddenState::s0};

  void validate() const;
  int max_quantum() const;
};

struct ToyModelParams {
  int nmax = 8;
  ForbiddenStateSpec fs;
  double rotation_cos = -0.5;  // equal masses
  double potential_depth = 3.0;
  double potential_range = 1.0;
  double oscillator_length = 1.0;

  void validate() const;
};

/// |n_x> |n_y> in one Jacobi frame.
struct BasisLabel {
  int nx = 0;
  int ny = 0;
  friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
};

/// Product states with nx + ny <= nmax, ordered by shell nx + ny, then by
/// descending nx.
std::vector<BasisLabel> product_basis(int nmax);

/// Orthogonal operator on product_basis(nmax) representing the coordinate
/// rotation (x, y) -> (x cos a + y sin a, -x sin a + y cos a). Block diagonal
/// in total quanta.
Operator frame_rotation(int nmax, double angle);

struct ToyModel {
  ToyModelParams params;
  ProjectorSet projectors;
  Operator hamiltonian;
  std::vector<BasisLabel> basis;
};

/// Three particles on a line in an oscillator product basis. P_1 removes the
/// forbidden pair states in frame 1; P_2 and P_3 are its images under the
/// kinematic rotations by +-arccos(rotation_cos). The Hamiltonian is the
/// two-coordinate oscillator plus a Gaussian attraction in each pair
/// coordinate.
ToyModel build_three_body_toy(const ToyModelParams& params);

}  // namespace paulikern
