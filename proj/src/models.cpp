#include "paulikern/models.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "paulikern/error.hpp"

namespace paulikern {

namespace {

constexpr double kQuadratureTolerance = 1e-12;

int quadrature_order(int nmax) { return 2 * nmax + 16; }

// Rows: quadrature nodes; columns: h_0..h_nmax at that node.
Matrix polynomial_table(int nmax, const std::vector<double>& points) {
  Matrix t(static_cast<Index>(points.size()), nmax + 1);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto h = oscillator_polynomials(nmax, points[i]);
    for (int k = 0; k <= nmax; ++k) t(static_cast<Index>(i), k) = h[static_cast<std::size_t>(k)];
  }
  return t;
}

void check_rule(const GaussHermite& rule, int nmax) {
  const Matrix t = polynomial_table(nmax, rule.nodes);
  Matrix overlap = Matrix::Zero(nmax + 1, nmax + 1);
  for (Index i = 0; i < t.rows(); ++i) {
    overlap += rule.weights[static_cast<std::size_t>(i)] * t.row(i).transpose() * t.row(i);
  }
  const double residual = (overlap - Matrix::Identity(nmax + 1, nmax + 1)).cwiseAbs().maxCoeff();
  if (!(residual <= kQuadratureTolerance)) {
    std::ostringstream os;
    os << "oscillator basis orthonormality residual " << residual << " with " << rule.nodes.size() << " nodes";
    throw Error(Errc::quadrature_failure, os.str());
  }
}

}  // namespace

ProjectorSet random_ensemble(Index dim, int n_proj, std::span<const int> ranks, std::uint64_t seed) {
  if (dim < 2) throw Error(Errc::invalid_argument, "random ensemble needs dim >= 2");
  if (n_proj < 1 || ranks.size() != static_cast<std::size_t>(n_proj)) {
    std::ostringstream os;
    os << "expected " << n_proj << " ranks, got " << ranks.size();
    throw Error(Errc::bad_ranks, os.str());
  }
  for (int r : ranks) {
    if (r < 1 || r > dim) {
      std::ostringstream os;
      os << "rank " << r << " outside 1.." << dim;
      throw Error(Errc::bad_ranks, os.str());
    }
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Projector> projectors;
  projectors.reserve(ranks.size());
  for (int r : ranks) {
    Matrix columns(dim, r);
    for (Index c = 0; c < r; ++c) {
      for (Index i = 0; i < dim; ++i) columns(i, c) = gauss(rng);
    }
    projectors.push_back(projector_from_span(columns));
  }
  return ProjectorSet(std::move(projectors));
}

ProjectorSet equal_overlap_triple(Index dim, double c) {
  if (dim < 3) throw Error(Errc::invalid_argument, "equal-overlap triple needs dim >= 3");
  if (!(c > -0.5 && c < 1.0)) {
    std::ostringstream os;
    os << "overlap " << c << " outside (-1/2, 1); the Gram matrix is not positive definite";
    throw Error(Errc::invalid_overlap, os.str());
  }
  const Matrix gram = (1.0 - c) * Matrix::Identity(3, 3) + c * Matrix::Ones(3, 3);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  const Matrix root = eig.operatorSqrt();  // columns u_i with u_i . u_j = gram(i, j)

  std::vector<Projector> projectors;
  for (Index i = 0; i < 3; ++i) {
    Matrix column = Matrix::Zero(dim, 1);
    column.block(0, 0, 3, 1) = root.col(i);
    projectors.push_back(projector_from_span(column));
  }
  return ProjectorSet(std::move(projectors));
}

std::string to_string(ForbiddenState f) { return f == ForbiddenState::s0 ? "0S" : "2S"; }

ForbiddenState forbidden_state_from_string(const std::string& label) {
  if (label == "0S") return ForbiddenState::s0;
  if (label == "2S") return ForbiddenState::s2;
  throw Error(Errc::invalid_argument, "unknown forbidden state '" + label + "' (expected 0S or 2S)");
}

int oscillator_quantum(ForbiddenState f) { return f == ForbiddenState::s0 ? 0 : 2; }

void ForbiddenStateSpec::validate() const {
  if (labels.empty()) throw Error(Errc::invalid_argument, "forbidden-state list is empty");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t j = i + 1; j < labels.size(); ++j) {
      if (labels[i] == labels[j]) throw Error(Errc::invalid_argument, "forbidden-state labels must be distinct");
    }
  }
}

int ForbiddenStateSpec::max_quantum() const {
  int q = 0;
  for (auto f : labels) q = std::max(q, oscillator_quantum(f));
  return q;
}

void ToyModelParams::validate() const {
  fs.validate();
  if (nmax < fs.max_quantum()) {
    std::ostringstream os;
    os << "nmax " << nmax << " is below the highest forbidden quantum " << fs.max_quantum();
    throw Error(Errc::invalid_argument, os.str());
  }
  if (!(std::abs(rotation_cos) <= 1.0)) throw Error(Errc::invalid_argument, "|rotation_cos| must be <= 1");
  if (!(potential_range > 0.0)) throw Error(Errc::invalid_argument, "potential_range must be positive");
  if (!(oscillator_length > 0.0)) throw Error(Errc::invalid_argument, "oscillator_length must be positive");
  if (!std::isfinite(potential_depth)) throw Error(Errc::invalid_argument, "potential_depth must be finite");
}

std::vector<BasisLabel> product_basis(int nmax) {
  if (nmax < 0) throw Error(Errc::invalid_argument, "nmax must be >= 0");
  std::vector<BasisLabel> basis;
  for (int shell = 0; shell <= nmax; ++shell) {
    for (int nx = shell; nx >= 0; --nx) basis.push_back({nx, shell - nx});
  }
  return basis;
}

Operator frame_rotation(int nmax, double angle) {
  const auto basis = product_basis(nmax);
  const GaussHermite rule = gauss_hermite(quadrature_order(nmax));
  check_rule(rule, nmax);

  const std::size_t n = rule.nodes.size();
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const Matrix table = polynomial_table(nmax, rule.nodes);
  const auto dim = static_cast<Index>(basis.size());

  // M(r, c) = sum_ij w_i w_j h_r(rotated node) h_c(node): rotated holds the
  // row functions at the rotated grid, plain the weighted column functions.
  Matrix rotated(static_cast<Index>(n * n), dim);
  Matrix plain(static_cast<Index>(n * n), dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double x = rule.nodes[i];
      const double y = rule.nodes[j];
      const auto hxr = oscillator_polynomials(nmax, x * c + y * s);
      const auto hyr = oscillator_polynomials(nmax, -x * s + y * c);
      const double w = rule.weights[i] * rule.weights[j];
      const auto row = static_cast<Index>(i * n + j);
      for (Index b = 0; b < dim; ++b) {
        const auto& lbl = basis[static_cast<std::size_t>(b)];
        rotated(row, b) = hxr[static_cast<std::size_t>(lbl.nx)] * hyr[static_cast<std::size_t>(lbl.ny)];
        plain(row, b) = w * table(static_cast<Index>(i), lbl.nx) * table(static_cast<Index>(j), lbl.ny);
      }
    }
  }
  Matrix m = rotated.transpose() * plain;

  const double ortho = (m.transpose() * m - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
  if (!(ortho <= 1e-10)) {
    std::ostringstream os;
    os << "frame rotation orthogonality residual " << ortho;
    throw Error(Errc::quadrature_failure, os.str());
  }
  return Operator(std::move(m));
}

ToyModel build_three_body_toy(const ToyModelParams& params) {
  params.validate();
  const int nmax = params.nmax;
  const auto basis = product_basis(nmax);
  const auto dim = static_cast<Index>(basis.size());

  const double angle = std::acos(params.rotation_cos);
  const Matrix plus = frame_rotation(nmax, angle).matrix();
  const Matrix minus = frame_rotation(nmax, -angle).matrix();

  std::vector<Index> forbidden;
  for (Index b = 0; b < dim; ++b) {
    for (auto f : params.fs.labels) {
      if (basis[static_cast<std::size_t>(b)].nx == oscillator_quantum(f)) forbidden.push_back(b);
    }
  }
  std::sort(forbidden.begin(), forbidden.end());
  Matrix span1 = Matrix::Zero(dim, static_cast<Index>(forbidden.size()));
  for (std::size_t k = 0; k < forbidden.size(); ++k) span1(forbidden[k], static_cast<Index>(k)) = 1.0;

  std::vector<Projector> projectors;
  projectors.push_back(Projector::from_orthonormal(span1));
  projectors.push_back(Projector::from_orthonormal(plus * span1));
  projectors.push_back(Projector::from_orthonormal(minus * span1));

  // Pair interaction -V0 exp(-r^2/a^2) in the frame-1 pair coordinate,
  // r = b * xi. Substituting t = xi * sqrt(1 + (b/a)^2) makes the integrand
  // polynomial times exp(-t^2).
  const double beta = params.oscillator_length / params.potential_range;
  const double stretch = std::sqrt(1.0 + beta * beta);
  const GaussHermite rule = gauss_hermite(quadrature_order(nmax));
  check_rule(rule, nmax);
  Matrix pair = Matrix::Zero(nmax + 1, nmax + 1);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const auto h = oscillator_polynomials(nmax, rule.nodes[i] / stretch);
    for (int p = 0; p <= nmax; ++p) {
      for (int q = 0; q <= nmax; ++q) {
        pair(p, q) += rule.weights[i] * h[static_cast<std::size_t>(p)] * h[static_cast<std::size_t>(q)];
      }
    }
  }
  pair *= -params.potential_depth / stretch;

  Matrix v1 = Matrix::Zero(dim, dim);
  Matrix h = Matrix::Zero(dim, dim);
  for (Index r = 0; r < dim; ++r) {
    const auto& a = basis[static_cast<std::size_t>(r)];
    h(r, r) = static_cast<double>(a.nx + a.ny) + 1.0;
    for (Index c = 0; c < dim; ++c) {
      const auto& b = basis[static_cast<std::size_t>(c)];
      if (a.ny == b.ny) v1(r, c) = pair(a.nx, b.nx);
    }
  }
  h += v1 + plus * v1 * plus.transpose() + minus * v1 * minus.transpose();

  Operator hamiltonian = Operator(std::move(h)).symmetrized();
  return ToyModel{params, ProjectorSet(std::move(projectors)), std::move(hamiltonian), basis};
}

}  // namespace paulikern
