// Copyright 2026 The mtopos Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Small dense complex linear algebra: Hermitian eigendecomposition by
// cyclic Jacobi, one-sided Jacobi SVD, projectors, subspaces and rays.
// Dimensions are tiny (≤ 16), so everything is dense and row-major.

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace mtopos {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Numerical tolerances shared by every downstream module. `eps` governs
/// equality of eigenvalues, Hermiticity and ray overlap; `null_threshold`
/// decides when a vector or singular value counts as zero.
struct TolerancePolicy {
  double eps = 1e-9;
  double null_threshold = 1e-9;

  /// Throws ValidationError unless both values are positive and finite.
  void validate() const;
};

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  /// Row-major nested lists; throws ValidationError on ragged input or
  /// non-finite entries.
  explicit ComplexMatrix(const std::vector<std::vector<Complex>>& rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zero(std::size_t rows, std::size_t cols);
  static ComplexMatrix zero(std::size_t n) { return zero(n, n); }
  /// Matrix whose columns are the given vectors.
  static ComplexMatrix from_columns(const std::vector<ComplexVector>& cols,
                                    std::size_t rows);
  /// |u⟩⟨v|
  static ComplexMatrix outer(const ComplexVector& u, const ComplexVector& v);
  static ComplexMatrix diagonal(const std::vector<double>& d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  ComplexMatrix adjoint() const;
  ComplexVector column(std::size_t j) const;
  std::vector<std::vector<Complex>> to_rows() const;

  double frobenius_norm() const;
  double max_abs() const;
  Complex trace() const;

  ComplexMatrix operator*(const ComplexMatrix& rhs) const;
  ComplexVector operator*(const ComplexVector& v) const;
  ComplexMatrix operator+(const ComplexMatrix& rhs) const;
  ComplexMatrix operator-(const ComplexMatrix& rhs) const;
  ComplexMatrix operator*(Complex s) const;
  ComplexMatrix& operator+=(const ComplexMatrix& rhs);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// max |a_ij - b_ij|; throws UsageError on a shape mismatch.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol);

/// ⟨a|b⟩ = Σ conj(a_i) b_i.
Complex inner(const ComplexVector& a, const ComplexVector& b);
double norm(const ComplexVector& v);
ComplexVector scaled(const ComplexVector& v, Complex s);
ComplexVector subtract(const ComplexVector& a, const ComplexVector& b);
ComplexVector basis_vector(std::size_t n, std::size_t i);

/// Thin SVD A = U Σ V†, singular values descending. `u` holds the left
/// singular vectors of the nonzero singular values only.
struct SingularValueDecomposition {
  std::vector<double> values;
  std::vector<ComplexVector> left;   // one per entry of `values`
  std::vector<ComplexVector> right;  // one per entry of `values`
};

/// One-sided (Hestenes) Jacobi SVD. Throws NumericError when it fails to
/// converge.
SingularValueDecomposition svd(const ComplexMatrix& a);
/// Largest singular value.
double operator_norm(const ComplexMatrix& a);

/// P = P† = P² within eps; construction validates.
class Projector {
 public:
  /// Throws ValidationError unless the matrix is a projector.
  Projector(ComplexMatrix matrix, const TolerancePolicy& tol = {});

  static Projector zero(std::size_t n);
  static Projector identity(std::size_t n);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return matrix_.rows(); }
  std::size_t rank(const TolerancePolicy& tol = {}) const;

 private:
  struct Trusted {};
  Projector(ComplexMatrix matrix, Trusted) : matrix_(std::move(matrix)) {}
  friend Projector trusted_projector(ComplexMatrix);

  ComplexMatrix matrix_;
};

/// Wraps a matrix already known to be a projector (no validation).
Projector trusted_projector(ComplexMatrix matrix);

/// True iff P = P† = P² entrywise within eps.
bool is_projector(const ComplexMatrix& m, const TolerancePolicy& tol = {});

/// A subspace given by an orthonormal basis (possibly empty).
class Subspace {
 public:
  explicit Subspace(std::size_t ambient = 0) : ambient_(ambient) {}

  static Subspace zero(std::size_t n) { return Subspace(n); }
  static Subspace full(std::size_t n);
  /// Span of arbitrary vectors; rank decided by singular values above the
  /// null threshold.
  static Subspace span(const std::vector<ComplexVector>& vectors,
                       std::size_t ambient, const TolerancePolicy& tol = {});
  static Subspace image_of(const Projector& p,
                           const TolerancePolicy& tol = {});

  std::size_t ambient() const noexcept { return ambient_; }
  std::size_t dim() const noexcept { return basis_.size(); }
  const std::vector<ComplexVector>& basis() const noexcept { return basis_; }
  /// Orthogonal projector onto the subspace.
  ComplexMatrix projector() const;
  /// v minus its orthogonal projection onto the subspace.
  ComplexVector residual(const ComplexVector& v) const;

 private:
  std::size_t ambient_;
  std::vector<ComplexVector> basis_;
};

/// Same dimension and mutual containment within tolerance.
bool subspace_equal(const Subspace& a, const Subspace& b,
                    const TolerancePolicy& tol = {});

/// One eigenvalue cluster of a Hermitian operator.
struct Eigenspace {
  double value = 0.0;
  Projector projector = Projector::zero(0);
  Subspace space;
};

/// A Hermitian matrix with its spectral decomposition Σ λᵢPᵢ, eigenvalues
/// ascending and pairwise separated by more than eps.
class HermitianOperator {
 public:
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return matrix_.rows(); }
  const std::vector<Eigenspace>& spectrum() const noexcept {
    return spectrum_;
  }
  std::vector<double> eigenvalues() const;

 private:
  friend HermitianOperator hermitian_eig(const ComplexMatrix&,
                                         const TolerancePolicy&,
                                         const std::vector<double>*);
  friend HermitianOperator apply_function(
      const HermitianOperator&,
      const std::function<std::optional<double>(double)>&,
      const TolerancePolicy&);

  ComplexMatrix matrix_;
  std::vector<Eigenspace> spectrum_;
};

/// Cyclic Jacobi eigendecomposition. Eigenvalues within eps of each other
/// are merged; when `value_set` is given, eigenvalues within eps of one of
/// its entries are snapped to that entry. Throws ValidationError for
/// non-square or non-Hermitian input, NumericError if Jacobi stalls.
HermitianOperator hermitian_eig(const ComplexMatrix& a,
                                const TolerancePolicy& tol = {},
                                const std::vector<double>* value_set = nullptr);

/// Ê[A∈Δ] = Σ_{λᵢ∈Δ} Pᵢ, matching eigenvalues to Δ within eps.
Projector spectral_projector(const HermitianOperator& a,
                             const std::vector<double>& delta,
                             const TolerancePolicy& tol = {});

/// f(A) = Σ f(λᵢ)Pᵢ. `f` returns nullopt where it is undefined, which is
/// a DomainError. Eigenspaces sharing an image value are merged.
HermitianOperator apply_function(
    const HermitianOperator& a,
    const std::function<std::optional<double>(double)>& f,
    const TolerancePolicy& tol = {});

/// f given as a finite table x ↦ y, looked up within eps.
HermitianOperator apply_function(const HermitianOperator& a,
                                 const std::vector<double>& domain,
                                 const std::vector<double>& image,
                                 const TolerancePolicy& tol = {});

/// Closure of A·K, orthonormalised with rank decided at the null threshold.
Subspace image_subspace(const ComplexMatrix& a, const Subspace& k,
                        const TolerancePolicy& tol = {});

/// ‖v - P_K v‖ ≤ null_threshold · max(‖v‖, 1).
bool in_subspace(const ComplexVector& v, const Subspace& k,
                 const TolerancePolicy& tol = {});

/// True iff |⟨ψ̂|φ̂⟩| ≥ 1 - eps. Throws PreconditionError when either
/// vector has norm at or below the null threshold.
bool ray_equal(const ComplexVector& psi, const ComplexVector& phi,
               const TolerancePolicy& tol = {});

/// A ray [ψ], stored as a unit representative whose largest component
/// is real and positive.
class Ray {
 public:
  /// Throws PreconditionError for a null vector.
  static Ray of(const ComplexVector& v, const TolerancePolicy& tol = {});

  const ComplexVector& representative() const noexcept { return rep_; }
  std::size_t dim() const noexcept { return rep_.size(); }

 private:
  ComplexVector rep_;
};

bool ray_equal(const Ray& a, const Ray& b, const TolerancePolicy& tol = {});

/// A ray or the absorbing point [0].
class ExtendedRay {
 public:
  static ExtendedRay zero() { return ExtendedRay(); }
  static ExtendedRay of(const Ray& r) { return ExtendedRay(r); }
  /// [v], or [0] when ‖v‖ ≤ null threshold.
  static ExtendedRay from_vector(const ComplexVector& v,
                                 const TolerancePolicy& tol = {});

  bool is_zero() const noexcept { return !ray_.has_value(); }
  /// Throws PreconditionError on [0].
  const Ray& ray() const;

 private:
  ExtendedRay() = default;
  explicit ExtendedRay(Ray r) : ray_(std::move(r)) {}
  std::optional<Ray> ray_;
};

/// Both [0], or both rays and equal.
bool extended_ray_equal(const ExtendedRay& a, const ExtendedRay& b,
                        const TolerancePolicy& tol = {});

}  // namespace mtopos
