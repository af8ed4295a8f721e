#include "paulikern/projector_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "paulikern/error.hpp"

namespace paulikern {

namespace {

void require_order(long long n, const char* what) {
  if (n < 1) {
    std::ostringstream os;
    os << what << " must be >= 1, got " << n;
    throw Error(Errc::invalid_argument, os.str());
  }
}

void require_threshold(double threshold) {
  if (!(threshold > 0.0)) throw Error(Errc::invalid_argument, "kernel threshold must be positive");
}

Matrix stacked_spans(const ProjectorSet& set) {
  Index total = 0;
  for (const auto& p : set) total += p.rank();
  Matrix a(set.dim(), total);
  Index col = 0;
  for (const auto& p : set) {
    a.middleCols(col, p.rank()) = p.span();
    col += p.rank();
  }
  return a;
}

double max_column_norm(const Matrix& m) {
  return m.cols() == 0 ? 0.0 : m.colwise().norm().maxCoeff();
}

Index count_below(const Vector& values, double cut) {
  return static_cast<Index>(std::count_if(values.begin(), values.end(), [&](double v) { return v < cut; }));
}

}  // namespace

Operator sum_projector(const ProjectorSet& set) {
  Matrix p = Matrix::Zero(set.dim(), set.dim());
  for (const auto& proj : set) p += proj.op().matrix();
  return Operator(std::move(p));
}

Operator gamma_truncated(const ProjectorSet& set, int n) {
  require_order(n, "expansion order");
  const Operator p = sum_projector(set);
  const Matrix complement = Matrix::Identity(set.dim(), set.dim()) - p.matrix();
  Matrix gamma = p.matrix();
  for (int k = 1; k < n; ++k) {
    gamma = Matrix::Identity(set.dim(), set.dim()) - complement * (Matrix::Identity(set.dim(), set.dim()) - gamma);
  }
  return Operator(std::move(gamma));
}

Operator gamma_expansion(const ProjectorSet& set, int n) {
  require_order(n, "expansion order");
  const std::size_t count = set.size();
  const Index dim = set.dim();

  // by_last[j]: sum of all layer-k words whose last letter is j.
  std::vector<Matrix> by_last(count);
  Matrix layer_sum = Matrix::Zero(dim, dim);
  for (std::size_t j = 0; j < count; ++j) {
    by_last[j] = set[j].op().matrix();
    layer_sum += by_last[j];
  }
  Matrix gamma = layer_sum;
  for (int k = 2; k <= n; ++k) {
    std::vector<Matrix> next(count);
    Matrix next_sum = Matrix::Zero(dim, dim);
    for (std::size_t j = 0; j < count; ++j) {
      // Words of length k ending in j extend length k-1 words ending elsewhere.
      next[j] = (layer_sum - by_last[j]) * set[j].op().matrix();
      next_sum += next[j];
    }
    by_last = std::move(next);
    layer_sum = std::move(next_sum);
    if (k % 2 == 1) gamma += layer_sum;
    else gamma -= layer_sum;
  }
  return Operator(std::move(gamma));
}

Operator evaluate_formal_sum(const FormalSum& s, const ProjectorSet& set) {
  const Letter top = s.max_letter();
  if (top > static_cast<Letter>(set.size())) {
    std::ostringstream os;
    os << "formal sum uses generator " << top << " but the set has " << set.size() << " projectors";
    throw Error(Errc::index_out_of_range, os.str());
  }
  const Index dim = set.dim();
  Matrix out = Matrix::Zero(dim, dim);
  for (const auto& [word, coeff] : s.terms()) {
    Matrix product = Matrix::Identity(dim, dim);
    for (Letter l : word.letters()) product = product * set[static_cast<std::size_t>(l - 1)].op().matrix();
    out += static_cast<double>(coeff) * product;
  }
  return Operator(std::move(out));
}

Operator complement_power(const ProjectorSet& set, long long m) {
  require_order(m, "power");
  const Index dim = set.dim();
  Matrix base = Matrix::Identity(dim, dim) - sum_projector(set).matrix();
  Matrix result = Matrix::Identity(dim, dim);
  for (long long e = m; e > 0; e >>= 1) {
    if (e & 1) result = result * base;
    if (e > 1) base = base * base;
  }
  return Operator(std::move(result));
}

double default_power_guard(const ProjectorSet& set) {
  return std::sqrt(static_cast<double>(set.dim())) * (1.0 + 1e-6);
}

Operator power_limit(const ProjectorSet& set, long long m, double guard) {
  require_order(m, "power");
  if (guard <= 0.0) guard = default_power_guard(set);
  const Index dim = set.dim();
  const Matrix identity = Matrix::Identity(dim, dim);
  Matrix base = identity - sum_projector(set).matrix();
  long long base_power = 1;
  Matrix result = identity;
  long long result_power = 0;
  for (long long e = m; e > 0; e >>= 1) {
    if (e & 1) {
      result = result_power == 0 ? base : Matrix(result * base);
      result_power += base_power;
      const double norm = result.norm();
      if (!(norm <= guard)) throw DivergedError(result_power, norm);
    }
    if (e > 1) {
      base = base * base;
      base_power *= 2;
      const double norm = base.norm();
      if (!(norm <= guard)) throw DivergedError(base_power, norm);
    }
  }
  return Operator(identity - result);
}

KernelBasis kernel_basis(const Operator& penalty, double threshold) {
  require_threshold(threshold);
  const EigenDecomposition eig = hermitian_eig(penalty);
  const Index k = count_below(eig.values, threshold);
  KernelBasis kb;
  kb.ambient_dim = penalty.dim();
  kb.threshold = threshold;
  kb.vectors = eig.vectors.leftCols(k);
  kb.residual = max_column_norm(penalty.matrix() * kb.vectors);
  kb.intersection_residual = kb.residual;
  return kb;
}

KernelBasis kernel_basis(const ProjectorSet& set, double threshold) {
  KernelBasis kb = kernel_basis(sum_projector(set), threshold);
  kb.intersection_residual = 0.0;
  for (const auto& p : set) {
    kb.intersection_residual = std::max(kb.intersection_residual, max_column_norm(p.op().matrix() * kb.vectors));
  }
  return kb;
}

Projector gamma_spectral(const ProjectorSet& set, double threshold) {
  require_threshold(threshold);
  const EigenDecomposition eig = hermitian_eig(sum_projector(set));
  const Index k = count_below(eig.values, threshold);
  return Projector::from_orthonormal(eig.vectors.rightCols(set.dim() - k));
}

Projector gamma_union(const ProjectorSet& set, double threshold) {
  require_threshold(threshold);
  const Matrix a = stacked_spans(set);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU);
  const Vector& sigma = svd.singularValues();
  Index rank = 0;
  while (rank < sigma.size() && sigma(rank) * sigma(rank) >= threshold) ++rank;
  return Projector::from_orthonormal(svd.matrixU().leftCols(rank));
}

Theorem1Report verify_theorem1(const ProjectorSet& set, int m) {
  require_order(m, "order");
  const Index dim = set.dim();
  const Operator reference = Operator::identity(dim) - complement_power(set, m);
  Theorem1Report r;
  r.order = m;
  r.expansion_residual = distance(gamma_expansion(set, m), reference);
  r.recursion_residual = distance(gamma_truncated(set, m), reference);
  r.tolerance = 1e-10 * static_cast<double>(dim);
  r.passed = r.expansion_residual <= r.tolerance && r.recursion_residual <= r.tolerance;
  return r;
}

Theorem2Report verify_theorem2(const ProjectorSet& set, double threshold) {
  const KernelBasis kernel = kernel_basis(set, threshold);
  const Projector complete = gamma_union(set, threshold);
  const Projector spectral = gamma_spectral(set, threshold);

  const EigenDecomposition complete_eig = hermitian_eig(complete.op());
  const Index complete_kernel = count_below(complete_eig.values, 0.5);
  const Matrix complete_kernel_vectors = complete_eig.vectors.leftCols(complete_kernel);

  Theorem2Report r;
  r.threshold = threshold;
  r.kernel_dim_sum = kernel.size();
  r.kernel_dim_gamma = complete_kernel;
  r.kernel_dim_spectral = count_below(hermitian_eigenvalues(spectral.op()), 0.5);
  r.gamma_on_kernel = max_column_norm(complete.op().matrix() * kernel.vectors);
  r.sum_on_gamma_kernel = max_column_norm(sum_projector(set).matrix() * complete_kernel_vectors);
  r.gamma_mismatch = distance(spectral.op(), complete.op());
  const double tol = 10.0 * threshold;
  r.passed = r.kernel_dim_sum == r.kernel_dim_gamma && r.kernel_dim_sum == r.kernel_dim_spectral &&
             r.gamma_on_kernel <= tol && r.sum_on_gamma_kernel <= tol;
  return r;
}

CommutationReport commutation_check(const ProjectorSet& set, double threshold) {
  const Matrix gamma = gamma_spectral(set, threshold).op().matrix();
  CommutationReport r;
  r.tolerance = 1e-9 * static_cast<double>(set.dim());
  for (const auto& p : set) {
    const Matrix& pi = p.op().matrix();
    r.left.push_back((pi * gamma - pi).norm());
    r.right.push_back((gamma * pi - pi).norm());
    r.max_residual = std::max({r.max_residual, r.left.back(), r.right.back()});
  }
  r.passed = r.max_residual <= r.tolerance;
  return r;
}

SpectrumReport convergence_report(const ProjectorSet& set, double threshold, double target) {
  require_threshold(threshold);
  if (!(target > 0.0 && target < 1.0)) throw Error(Errc::invalid_argument, "target must lie in (0, 1)");
  SpectrumReport r;
  r.threshold = threshold;
  r.target = target;
  r.eigenvalues = hermitian_eigenvalues(sum_projector(set));
  r.kernel_dim = count_below(r.eigenvalues, threshold);
  for (double lambda : r.eigenvalues) {
    if (lambda >= threshold) r.contraction_factor = std::max(r.contraction_factor, std::abs(1.0 - lambda));
    if (lambda >= 2.0 - kSpectrumEdgeTolerance) r.divergent = true;
    if (std::abs(lambda - 2.0) <= kSpectrumEdgeTolerance) r.stagnant = true;
    if (lambda > threshold / 10.0 && lambda < threshold * 10.0) ++r.ambiguous_count;
    if (lambda >= threshold && lambda <= kAlmostForbiddenCeiling) r.almost_forbidden.push_back(lambda);
  }
  if (!r.divergent && r.contraction_factor < 1.0) {
    if (r.contraction_factor == 0.0) {
      r.predicted_m = 1;
    } else {
      const double m = std::ceil(std::log(target) / std::log(r.contraction_factor));
      r.predicted_m = std::max(1LL, static_cast<long long>(m));
    }
  }
  return r;
}

OverlapStatistics overlap_statistics(const ProjectorSet& set) {
  const auto n = static_cast<Index>(set.size());
  OverlapStatistics s;
  s.lambda_max = hermitian_eigenvalues(sum_projector(set)).maxCoeff();
  s.product_norms = Matrix::Zero(n, n);
  s.traces = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const Matrix prod = set[static_cast<std::size_t>(i)].op().matrix() * set[static_cast<std::size_t>(j)].op().matrix();
      s.product_norms(i, j) = prod.norm();
      s.traces(i, j) = prod.trace();
    }
  }
  return s;
}

}  // namespace paulikern
