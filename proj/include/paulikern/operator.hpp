#pragma once

// Dense real-symmetric operator arithmetic and certified projectors.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace paulikern {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Square real matrix in a fixed orthonormal basis. Products of operators are
/// not assumed symmetric; symmetry is checked where a routine needs it.
class Operator {
 public:
  explicit Operator(Matrix entries);

  static Operator identity(Index dim);
  static Operator zero(Index dim);
  static Operator diagonal(std::span<const double> values);

  Index dim() const noexcept { return entries_.rows(); }
  const Matrix& matrix() const noexcept { return entries_; }
  double operator()(Index row, Index col) const { return entries_(row, col); }

  double frobenius_norm() const { return entries_.norm(); }
  double spectral_norm() const;
  double trace() const { return entries_.trace(); }

  /// max |a_ij - a_ji|
  double symmetry_residual() const;
  /// Default tolerance for the symmetry check: 1e-12 * dim * max(1, max|a_ij|).
  double symmetry_tolerance() const;
  bool is_symmetric() const { return symmetry_residual() <= symmetry_tolerance(); }

  Operator symmetrized() const;
  Operator transposed() const { return Operator(entries_.transpose()); }

  Operator& operator+=(const Operator& other);
  Operator& operator-=(const Operator& other);
  Operator& operator*=(double c);

 private:
  Matrix entries_;
};

Operator operator+(Operator a, const Operator& b);
Operator operator-(Operator a, const Operator& b);
Operator operator*(const Operator& a, const Operator& b);
Operator operator*(double c, Operator a);
Vector operator*(const Operator& a, const Vector& v);

Operator add(const Operator& a, const Operator& b);
Operator sub(const Operator& a, const Operator& b);
Operator mul(const Operator& a, const Operator& b);
Operator scale(const Operator& a, double c);

/// Frobenius distance ||a - b||_F.
double distance(const Operator& a, const Operator& b);

inline constexpr double kDefaultRankTolerance = 1e-10;

/// Orthogonal projector together with an orthonormal basis of its range.
class Projector {
 public:
  const Operator& op() const noexcept { return op_; }
  const Matrix& span() const noexcept { return span_; }
  Index rank() const noexcept { return span_.cols(); }
  Index dim() const noexcept { return op_.dim(); }

  /// Wraps columns that are already orthonormal within 1e-12; throws otherwise.
  static Projector from_orthonormal(Matrix span);

 private:
  Projector(Operator op, Matrix span);
  friend Projector projector_from_span(const Matrix& columns, double tol);

  Operator op_;
  Matrix span_;
};

/// Projector onto the span of the given columns. Rank is decided by singular
/// values relative to the largest one; columns that are already orthonormal
/// are kept verbatim.
Projector projector_from_span(const Matrix& columns, double tol = kDefaultRankTolerance);
Projector projector_from_span(std::span<const Vector> vectors, double tol = kDefaultRankTolerance);

class ProjectorSet {
 public:
  explicit ProjectorSet(std::vector<Projector> projectors);

  Index dim() const noexcept { return projectors_.front().dim(); }
  std::size_t size() const noexcept { return projectors_.size(); }
  /// Zero-based access.
  const Projector& operator[](std::size_t i) const { return projectors_.at(i); }
  auto begin() const { return projectors_.begin(); }
  auto end() const { return projectors_.end(); }

 private:
  std::vector<Projector> projectors_;
};

struct EigenDecomposition {
  Vector values;   // ascending
  Matrix vectors;  // orthonormal columns, vectors.col(k) <-> values(k)
};

/// Symmetric eigensolver. Throws NotSymmetric if the input fails the
/// symmetry check.
EigenDecomposition hermitian_eig(const Operator& a);
Vector hermitian_eigenvalues(const Operator& a);

struct ProjectorCheck {
  bool ok;
  double idempotency_residual;  // ||a^2 - a||_F
  double symmetry_residual;     // max |a_ij - a_ji|
};

ProjectorCheck is_projector(const Operator& a, double tol);

}  // namespace paulikern
