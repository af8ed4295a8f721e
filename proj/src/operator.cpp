#include "paulikern/operator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "paulikern/error.hpp"

namespace paulikern {

namespace {

void require_same_dim(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << "operator dims " << a.dim() << " and " << b.dim() << " differ";
    throw Error(Errc::dim_mismatch, os.str());
  }
}

double orthonormality_residual(const Matrix& columns) {
  if (columns.cols() == 0) return 0.0;
  const Matrix gram = columns.transpose() * columns;
  return (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

Operator outer_projector(const Matrix& span) {
  const Matrix p = span * span.transpose();
  return Operator(0.5 * (p + p.transpose()));
}

constexpr double kOrthonormalTolerance = 1e-12;

}  // namespace

Operator::Operator(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() < 1 || entries_.rows() != entries_.cols()) {
    std::ostringstream os;
    os << "operator must be square with dim >= 1, got " << entries_.rows() << "x" << entries_.cols();
    throw Error(Errc::dim_mismatch, os.str());
  }
}

Operator Operator::identity(Index dim) { return Operator(Matrix::Identity(dim, dim)); }

Operator Operator::zero(Index dim) { return Operator(Matrix::Zero(dim, dim)); }

Operator Operator::diagonal(std::span<const double> values) {
  Matrix m = Matrix::Zero(static_cast<Index>(values.size()), static_cast<Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) m(static_cast<Index>(i), static_cast<Index>(i)) = values[i];
  return Operator(std::move(m));
}

double Operator::spectral_norm() const {
  Eigen::JacobiSVD<Matrix> svd(entries_);
  return svd.singularValues()(0);
}

double Operator::symmetry_residual() const {
  return (entries_ - entries_.transpose()).cwiseAbs().maxCoeff();
}

double Operator::symmetry_tolerance() const {
  const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
  return 1e-12 * static_cast<double>(dim()) * scale;
}

Operator Operator::symmetrized() const { return Operator(0.5 * (entries_ + entries_.transpose())); }

Operator& Operator::operator+=(const Operator& other) {
  require_same_dim(*this, other);
  entries_ += other.entries_;
  return *this;
}

Operator& Operator::operator-=(const Operator& other) {
  require_same_dim(*this, other);
  entries_ -= other.entries_;
  return *this;
}

Operator& Operator::operator*=(double c) {
  entries_ *= c;
  return *this;
}

Operator operator+(Operator a, const Operator& b) { return a += b; }
Operator operator-(Operator a, const Operator& b) { return a -= b; }

Operator operator*(const Operator& a, const Operator& b) {
  require_same_dim(a, b);
  return Operator(a.matrix() * b.matrix());
}

Operator operator*(double c, Operator a) { return a *= c; }

Vector operator*(const Operator& a, const Vector& v) {
  if (v.size() != a.dim()) throw Error(Errc::dim_mismatch, "vector length does not match operator dim");
  return a.matrix() * v;
}

Operator add(const Operator& a, const Operator& b) { return a + b; }
Operator sub(const Operator& a, const Operator& b) { return a - b; }
Operator mul(const Operator& a, const Operator& b) { return a * b; }
Operator scale(const Operator& a, double c) { return c * a; }

double distance(const Operator& a, const Operator& b) {
  require_same_dim(a, b);
  return (a.matrix() - b.matrix()).norm();
}

Projector::Projector(Operator op, Matrix span) : op_(std::move(op)), span_(std::move(span)) {}

Projector Projector::from_orthonormal(Matrix span) {
  if (span.cols() == 0) throw Error(Errc::rank_zero, "projector needs at least one spanning vector");
  const double residual = orthonormality_residual(span);
  if (!(residual <= kOrthonormalTolerance)) {
    std::ostringstream os;
    os << "span columns are not orthonormal (residual " << residual << ")";
    throw Error(Errc::invalid_argument, os.str());
  }
  Operator op = outer_projector(span);
  return Projector(std::move(op), std::move(span));
}

Projector projector_from_span(const Matrix& columns, double tol) {
  if (columns.cols() == 0) throw Error(Errc::empty_span, "no spanning vectors given");
  if (columns.rows() == 0) throw Error(Errc::dim_mismatch, "spanning vectors have length 0");
  if (!(tol > 0.0)) throw Error(Errc::invalid_argument, "rank tolerance must be positive");

  if (columns.cols() <= columns.rows() && orthonormality_residual(columns) <= kOrthonormalTolerance) {
    return Projector(outer_projector(columns), columns);
  }

  const double largest_norm = columns.colwise().norm().maxCoeff();
  if (largest_norm < tol) throw Error(Errc::rank_zero, "all spanning vectors are below tolerance");

  Eigen::JacobiSVD<Matrix> svd(columns, Eigen::ComputeThinU);
  const Vector& sigma = svd.singularValues();
  Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > tol * sigma(0)) ++rank;
  if (rank == 0) throw Error(Errc::rank_zero, "numerical rank is zero");

  Matrix span = svd.matrixU().leftCols(rank);
  // One Gram-Schmidt sweep tightens orthonormality to machine precision.
  Eigen::HouseholderQR<Matrix> qr(span);
  Matrix q = qr.householderQ() * Matrix::Identity(span.rows(), rank);
  Operator op = outer_projector(q);
  return Projector(std::move(op), std::move(q));
}

Projector projector_from_span(std::span<const Vector> vectors, double tol) {
  if (vectors.empty()) throw Error(Errc::empty_span, "no spanning vectors given");
  const Index dim = vectors.front().size();
  Matrix columns(dim, static_cast<Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != dim) {
      std::ostringstream os;
      os << "spanning vector " << i << " has length " << vectors[i].size() << ", expected " << dim;
      throw Error(Errc::dim_mismatch, os.str());
    }
    columns.col(static_cast<Index>(i)) = vectors[i];
  }
  return projector_from_span(columns, tol);
}

ProjectorSet::ProjectorSet(std::vector<Projector> projectors) : projectors_(std::move(projectors)) {
  if (projectors_.empty()) throw Error(Errc::empty_span, "projector set must contain at least one projector");
  const Index dim = projectors_.front().dim();
  for (const auto& p : projectors_) {
    if (p.dim() != dim) throw Error(Errc::dim_mismatch, "projectors in a set must share dim");
  }
}

EigenDecomposition hermitian_eig(const Operator& a) {
  if (!a.is_symmetric()) {
    std::ostringstream os;
    os << "symmetry residual " << a.symmetry_residual() << " exceeds " << a.symmetry_tolerance();
    throw Error(Errc::not_symmetric, os.str());
  }
  const Matrix sym = 0.5 * (a.matrix() + a.matrix().transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Vector hermitian_eigenvalues(const Operator& a) {
  if (!a.is_symmetric()) {
    std::ostringstream os;
    os << "symmetry residual " << a.symmetry_residual() << " exceeds " << a.symmetry_tolerance();
    throw Error(Errc::not_symmetric, os.str());
  }
  const Matrix sym = 0.5 * (a.matrix() + a.matrix().transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

ProjectorCheck is_projector(const Operator& a, double tol) {
  const double idem = (a.matrix() * a.matrix() - a.matrix()).norm();
  const double sym = a.symmetry_residual();
  return {idem <= tol && sym <= a.symmetry_tolerance(), idem, sym};
}

}  // namespace paulikern
