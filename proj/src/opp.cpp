#include "paulikern/opp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "paulikern/error.hpp"
#include "paulikern/parallel.hpp"

namespace paulikern {

namespace {

void require_matching(const Operator& h, const Operator& penalty) {
  if (h.dim() != penalty.dim()) throw Error(Errc::dim_mismatch, "hamiltonian and penalty dims differ");
}

Vector lowest_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

// Least-squares slope of log(y) against log(x).
std::optional<double> loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() < 2) return std::nullopt;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) return std::nullopt;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const auto n = static_cast<double>(x.size());
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return std::nullopt;
  return (n * sxy - sx * sy) / denom;
}

// Blocks of h in the eigenbasis of the penalty: allowed (mu < threshold) and
// penalized (mu >= threshold).
struct Partition {
  Matrix allowed_block;    // K^T h K
  Matrix coupling;         // K^T h R
  Matrix penalized_block;  // R^T h R
  Vector mu;               // penalty eigenvalues on R
  double coupling_norm = 0.0;
  double penalized_floor = 0.0;  // smallest eigenvalue of R^T h R
};

Partition partition(const Operator& h, const EigenDecomposition& penalty_eig, Index kernel_dim) {
  const Index dim = h.dim();
  const Matrix k = penalty_eig.vectors.leftCols(kernel_dim);
  const Matrix r = penalty_eig.vectors.rightCols(dim - kernel_dim);
  Partition p;
  p.allowed_block = k.transpose() * h.matrix() * k;
  p.coupling = k.transpose() * h.matrix() * r;
  p.penalized_block = r.transpose() * h.matrix() * r;
  p.mu = penalty_eig.values.tail(dim - kernel_dim);
  if (r.cols() > 0) {
    p.coupling_norm = p.coupling.size() ? Eigen::JacobiSVD<Matrix>(p.coupling).singularValues()(0) : 0.0;
    p.penalized_floor = lowest_eigenvalues(p.penalized_block)(0);
  }
  return p;
}

// Solves E = eig_level(A - B (C + lambda D - E)^{-1} B^T) by fixed-point
// iteration from `start`. Returns nullopt if the iteration stalls.
std::optional<double> refine_level(const Partition& p, double lambda, int level, double start) {
  const Index r = p.mu.size();
  double e = start;
  for (int it = 0; it < 100; ++it) {
    Matrix shifted = p.penalized_block;
    shifted.diagonal() += lambda * p.mu - Vector::Constant(r, e);
    Eigen::LLT<Matrix> llt(0.5 * (shifted + shifted.transpose()));
    if (llt.info() != Eigen::Success) return std::nullopt;
    const Matrix effective = p.allowed_block - p.coupling * llt.solve(p.coupling.transpose());
    const double next = lowest_eigenvalues(effective)(level);
    const double step = next - e;
    e = next;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(e))) return e;
  }
  return std::nullopt;
}

}  // namespace

ProjectedHamiltonian projected_hamiltonian(const Operator& h, const Operator& penalty, double threshold) {
  require_matching(h, penalty);
  KernelBasis kernel = kernel_basis(penalty, threshold);
  if (kernel.size() == 0) throw Error(Errc::empty_kernel, "no allowed states: the penalty has no kernel");
  Operator m = Operator(kernel.vectors.transpose() * h.matrix() * kernel.vectors).symmetrized();
  Vector spectrum = hermitian_eigenvalues(m);
  return {std::move(m), std::move(kernel), std::move(spectrum)};
}

ProjectedHamiltonian projected_hamiltonian(const Operator& h, const ProjectorSet& set, double threshold) {
  ProjectedHamiltonian ph = projected_hamiltonian(h, sum_projector(set), threshold);
  ph.kernel = kernel_basis(set, threshold);
  return ph;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count == 0) throw Error(Errc::invalid_argument, "bad log grid bounds");
  if (count == 1) return {lo};
  std::vector<double> g(count);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < count; ++i) {
    g[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> default_lambda_grid(double h_norm) {
  auto g = log_grid(1e1, 1e6, 12);
  for (double& v : g) v *= h_norm;
  return g;
}

OppSweepResult lambda_sweep(const Operator& h, const Operator& penalty, const std::vector<double>& lambda_grid,
                            int levels, double threshold) {
  require_matching(h, penalty);
  if (levels < 1) throw Error(Errc::invalid_argument, "level count must be >= 1");
  if (lambda_grid.empty()) throw Error(Errc::invalid_argument, "lambda grid is empty");
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    if (!(lambda_grid[i] >= 0.0) || (i > 0 && !(lambda_grid[i] > lambda_grid[i - 1]))) {
      throw Error(Errc::invalid_argument, "lambda grid must be nonnegative and strictly ascending");
    }
  }
  if (!h.is_symmetric()) throw Error(Errc::not_symmetric, "hamiltonian is not symmetric");

  const EigenDecomposition penalty_eig = hermitian_eig(penalty);
  const Index kernel_dim = static_cast<Index>(
      std::count_if(penalty_eig.values.begin(), penalty_eig.values.end(), [&](double v) { return v < threshold; }));
  if (kernel_dim == 0) throw Error(Errc::empty_kernel, "no allowed states: the penalty has no kernel");
  if (levels > kernel_dim) {
    std::ostringstream os;
    os << "requested " << levels << " levels but the allowed space has dim " << kernel_dim;
    throw Error(Errc::invalid_argument, os.str());
  }

  const Partition part = partition(h, penalty_eig, kernel_dim);
  const Vector projected = lowest_eigenvalues(part.allowed_block);
  const double mu_floor = part.mu.size() ? part.mu.minCoeff() : 0.0;

  OppSweepResult out;
  out.h_norm = h.frobenius_norm();
  out.threshold = threshold;
  out.lambda_grid = lambda_grid;
  out.projected_energies.assign(projected.data(), projected.data() + levels);
  out.energies.assign(lambda_grid.size(), std::vector<double>(static_cast<std::size_t>(levels)));
  out.gaps = out.energies;

  const Matrix sym_h = 0.5 * (h.matrix() + h.matrix().transpose());
  const Matrix sym_p = 0.5 * (penalty.matrix() + penalty.matrix().transpose());
  parallel_for(lambda_grid.size(), [&](std::size_t g) {
    const double lambda = lambda_grid[g];
    const Vector dense = lowest_eigenvalues(sym_h + lambda * sym_p);
    const double top = dense(levels - 1);
    // The penalized block lies above every requested level with room to spare.
    const bool separated = part.mu.size() == 0 ||
                           lambda * mu_floor + part.penalized_floor - top > 2.0 * part.coupling_norm + 1.0;
    const double roundoff = 1e-10 * (sym_h.norm() + lambda * sym_p.norm());
    for (int k = 0; k < levels; ++k) {
      double e = dense(k);
      if (separated && part.mu.size() > 0) {
        if (auto refined = refine_level(part, lambda, k, e); refined && std::abs(*refined - e) <= roundoff) {
          e = *refined;
        }
      }
      out.energies[g][static_cast<std::size_t>(k)] = e;
      out.gaps[g][static_cast<std::size_t>(k)] = std::abs(e - projected(k));
    }
  });

  for (std::size_t g = 1; g < lambda_grid.size(); ++g) {
    for (int k = 0; k < levels; ++k) {
      const double prev = out.energies[g - 1][static_cast<std::size_t>(k)];
      const double cur = out.energies[g][static_cast<std::size_t>(k)];
      if (cur < prev - 1e-12 * std::max(1.0, std::abs(prev))) out.monotone = false;
    }
  }

  const std::size_t fit = std::min(kSlopeFitPoints, lambda_grid.size());
  for (int k = 0; k < levels; ++k) {
    std::vector<double> xs, ys;
    for (std::size_t g = lambda_grid.size() - fit; g < lambda_grid.size(); ++g) {
      xs.push_back(lambda_grid[g]);
      ys.push_back(out.gaps[g][static_cast<std::size_t>(k)]);
    }
    out.slopes.push_back(loglog_slope(xs, ys));
    bool degenerate = false;
    if (k > 0 && std::abs(projected(k) - projected(k - 1)) <= 1e-8) degenerate = true;
    if (k + 1 < projected.size() && std::abs(projected(k + 1) - projected(k)) <= 1e-8) degenerate = true;
    out.degenerate_tail.push_back(degenerate);
  }
  return out;
}

OppSweepResult lambda_sweep(const Operator& h, const ProjectorSet& set, const std::vector<double>& lambda_grid,
                            int levels, double threshold) {
  return lambda_sweep(h, sum_projector(set), lambda_grid, levels, threshold);
}

AlmostForbiddenReport almost_forbidden_report(const Operator& h, const ProjectorSet& set,
                                              const std::vector<double>& eps_grid, double lambda_ref,
                                              double threshold) {
  const Operator p = sum_projector(set);
  require_matching(h, p);
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] > 0.0 && eps_grid[i] < 1.0) || (i > 0 && !(eps_grid[i] > eps_grid[i - 1]))) {
      throw Error(Errc::invalid_argument, "eps grid must be strictly ascending inside (0, 1)");
    }
  }
  if (!(lambda_ref >= 0.0)) throw Error(Errc::invalid_argument, "lambda_ref must be nonnegative");

  const EigenDecomposition eig = hermitian_eig(p);
  auto count_below = [&](double cut) {
    return static_cast<Index>(std::count_if(eig.values.begin(), eig.values.end(), [&](double v) { return v < cut; }));
  };
  auto ground = [&](Index n) -> std::optional<double> {
    if (n == 0) return std::nullopt;
    const Matrix k = eig.vectors.leftCols(n);
    return lowest_eigenvalues(k.transpose() * h.matrix() * k)(0);
  };

  AlmostForbiddenReport report;
  report.threshold = threshold;
  report.lambda_ref = lambda_ref;
  const Index exact = count_below(threshold);
  const std::optional<double> e_elim = ground(exact);
  // The refined sweep keeps the penalized ground energy free of the
  // lambda * eps roundoff of a plain dense solve.
  const double e_opp = exact > 0 ? lambda_sweep(h, p, {lambda_ref}, 1, threshold).energies[0][0]
                                 : lowest_eigenvalues(h.matrix() + lambda_ref * p.matrix())(0);
  for (double eps : eps_grid) {
    const Index kept = count_below(std::max(eps, threshold));
    AlmostForbiddenRow row;
    row.eps = eps;
    row.band_modes = kept - exact;
    row.e_elim = e_elim;
    row.e_keep = ground(kept);
    row.e_opp = e_opp;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace paulikern
