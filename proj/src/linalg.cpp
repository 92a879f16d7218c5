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

#include "mtopos/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mtopos/error.hpp"

namespace mtopos {

void TolerancePolicy::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw ValidationError("eps must be positive, got " + std::to_string(eps));
  }
  if (!(null_threshold > 0.0) || !std::isfinite(null_threshold)) {
    throw ValidationError("null threshold must be positive, got " +
                          std::to_string(null_threshold));
  }
}

// ---------------------------------------------------------------------------
// ComplexMatrix
// ---------------------------------------------------------------------------

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(const std::vector<std::vector<Complex>>& rows)
    : rows_(rows.size()), cols_(rows.empty() ? 0 : rows.front().size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw ValidationError("ragged matrix rows");
    }
    for (const Complex& z : r) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw ValidationError("matrix entries must be finite");
      }
      data_.push_back(z);
    }
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::zero(std::size_t rows, std::size_t cols) {
  return ComplexMatrix(rows, cols);
}

ComplexMatrix ComplexMatrix::from_columns(
    const std::vector<ComplexVector>& cols, std::size_t rows) {
  ComplexMatrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows) throw UsageError("column length mismatch");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

ComplexMatrix ComplexMatrix::outer(const ComplexVector& u,
                                   const ComplexVector& v) {
  ComplexMatrix m(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) {
      m(i, j) = u[i] * std::conj(v[j]);
    }
  }
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<double>& d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  }
  return m;
}

ComplexVector ComplexMatrix::column(std::size_t j) const {
  ComplexVector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

std::vector<std::vector<Complex>> ComplexMatrix::to_rows() const {
  std::vector<std::vector<Complex>> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    out[i].assign(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }
  return out;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const Complex& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const Complex& z : data_) m = std::max(m, std::abs(z));
  return m;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw UsageError("matrix product shape mismatch");
  ComplexMatrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const Complex a = (*this)(i, k);
      if (a == Complex{}) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

ComplexVector ComplexMatrix::operator*(const ComplexVector& v) const {
  if (cols_ != v.size()) throw UsageError("matrix-vector shape mismatch");
  ComplexVector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    Complex s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& rhs) const {
  ComplexMatrix out = *this;
  out += rhs;
  return out;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
    throw UsageError("matrix sum shape mismatch");
  }
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& rhs) const {
  return *this + rhs * Complex(-1.0);
}

ComplexMatrix ComplexMatrix::operator*(Complex s) const {
  ComplexMatrix out = *this;
  for (Complex& z : out.data_) z *= s;
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw UsageError("matrix shape mismatch");
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      m = std::max(m, std::abs(a(i, j) - b(i, j)));
    }
  }
  return m;
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  return max_abs_diff(a, b) <= tol;
}

Complex inner(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) throw UsageError("vector length mismatch");
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm(const ComplexVector& v) {
  double s = 0.0;
  for (const Complex& z : v) s += std::norm(z);
  return std::sqrt(s);
}

ComplexVector scaled(const ComplexVector& v, Complex s) {
  ComplexVector out = v;
  for (Complex& z : out) z *= s;
  return out;
}

ComplexVector subtract(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) throw UsageError("vector length mismatch");
  ComplexVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

ComplexVector basis_vector(std::size_t n, std::size_t i) {
  ComplexVector v(n);
  v.at(i) = 1.0;
  return v;
}

// ---------------------------------------------------------------------------
// SVD
// ---------------------------------------------------------------------------

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kMachine = 1e-15;

double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

// Orthonormalises `vs` in place (modified Gram-Schmidt, two passes).
void reorthonormalise(std::vector<ComplexVector>& vs) {
  for (std::size_t i = 0; i < vs.size(); ++i) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < i; ++j) {
        const Complex c = inner(vs[j], vs[i]);
        for (std::size_t k = 0; k < vs[i].size(); ++k) vs[i][k] -= c * vs[j][k];
      }
    }
    const double n = norm(vs[i]);
    for (Complex& z : vs[i]) z /= n;
  }
}

}  // namespace

SingularValueDecomposition svd(const ComplexMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  std::vector<ComplexVector> u(n), v(n);
  for (std::size_t j = 0; j < n; ++j) {
    u[j] = a.column(j);
    v[j] = basis_vector(n, j);
  }
  // Columns below this squared norm are rounding noise and never rotated.
  const double floor_sq = std::pow(kMachine * a.frobenius_norm(), 2);
  const double rel = kMachine * static_cast<double>(std::max<std::size_t>(m, 1));
  bool converged = n < 2;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double alpha = std::real(inner(u[i], u[i]));
        const double beta = std::real(inner(u[j], u[j]));
        const Complex gamma = inner(u[i], u[j]);
        const double g = std::abs(gamma);
        if (alpha <= floor_sq || beta <= floor_sq) continue;
        if (g <= rel * std::sqrt(alpha * beta) || g == 0.0) continue;
        converged = false;
        // Rotate column j by the phase of γ so the overlap becomes real,
        // then apply the real Jacobi rotation.
        const Complex phase = std::conj(gamma) / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t =
            sign_of(zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t k = 0; k < m; ++k) {
          const Complex ui = u[i][k];
          const Complex uj = u[j][k] * phase;
          u[i][k] = c * ui - s * uj;
          u[j][k] = s * ui + c * uj;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vi = v[i][k];
          const Complex vj = v[j][k] * phase;
          v[i][k] = c * vi - s * vj;
          v[j][k] = s * vi + c * vj;
        }
      }
    }
  }
  if (!converged) throw NumericError("one-sided Jacobi SVD did not converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0U);
  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = norm(u[j]);
  std::stable_sort(order.begin(), order.end(),
                   [&](auto x, auto y) { return sigma[x] > sigma[y]; });
  SingularValueDecomposition out;
  for (std::size_t j : order) {
    out.values.push_back(sigma[j]);
    out.right.push_back(v[j]);
    out.left.push_back(sigma[j] > 0.0 ? scaled(u[j], 1.0 / sigma[j])
                                      : ComplexVector(m));
  }
  return out;
}

double operator_norm(const ComplexMatrix& a) {
  if (a.cols() == 0 || a.rows() == 0) return 0.0;
  return svd(a).values.front();
}

// ---------------------------------------------------------------------------
// Projectors and subspaces
// ---------------------------------------------------------------------------

bool is_projector(const ComplexMatrix& m, const TolerancePolicy& tol) {
  if (!m.square()) return false;
  return max_abs_diff(m, m.adjoint()) <= tol.eps &&
         max_abs_diff(m, m * m) <= tol.eps;
}

Projector::Projector(ComplexMatrix matrix, const TolerancePolicy& tol)
    : matrix_(std::move(matrix)) {
  if (!matrix_.square()) throw ValidationError("projector must be square");
  if (!is_projector(matrix_, tol)) {
    throw ValidationError("matrix is not a projector (P = P† = P² fails)");
  }
}

Projector Projector::zero(std::size_t n) {
  return Projector(ComplexMatrix::zero(n), Trusted{});
}

Projector Projector::identity(std::size_t n) {
  return Projector(ComplexMatrix::identity(n), Trusted{});
}

std::size_t Projector::rank(const TolerancePolicy& tol) const {
  return Subspace::image_of(*this, tol).dim();
}

Projector trusted_projector(ComplexMatrix matrix) {
  return Projector(std::move(matrix), Projector::Trusted{});
}

Subspace Subspace::full(std::size_t n) {
  Subspace s(n);
  for (std::size_t i = 0; i < n; ++i) s.basis_.push_back(basis_vector(n, i));
  return s;
}

Subspace Subspace::span(const std::vector<ComplexVector>& vectors,
                        std::size_t ambient, const TolerancePolicy& tol) {
  Subspace s(ambient);
  if (vectors.empty() || ambient == 0) return s;
  auto d = svd(ComplexMatrix::from_columns(vectors, ambient));
  for (std::size_t i = 0; i < d.values.size(); ++i) {
    if (d.values[i] > tol.null_threshold) s.basis_.push_back(d.left[i]);
  }
  reorthonormalise(s.basis_);
  return s;
}

Subspace Subspace::image_of(const Projector& p, const TolerancePolicy& tol) {
  return image_subspace(p.matrix(), full(p.dim()), tol);
}

ComplexMatrix Subspace::projector() const {
  ComplexMatrix p(ambient_, ambient_);
  for (const auto& b : basis_) p += ComplexMatrix::outer(b, b);
  return p;
}

ComplexVector Subspace::residual(const ComplexVector& v) const {
  if (v.size() != ambient_) throw UsageError("vector dimension mismatch");
  ComplexVector r = v;
  // twice, for numerical orthogonality of the residual
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis_) {
      const Complex c = inner(b, r);
      for (std::size_t k = 0; k < r.size(); ++k) r[k] -= c * b[k];
    }
  }
  return r;
}

bool subspace_equal(const Subspace& a, const Subspace& b,
                    const TolerancePolicy& tol) {
  if (a.ambient() != b.ambient() || a.dim() != b.dim()) return false;
  for (const auto& v : a.basis()) {
    if (!in_subspace(v, b, tol)) return false;
  }
  for (const auto& v : b.basis()) {
    if (!in_subspace(v, a, tol)) return false;
  }
  return true;
}

Subspace image_subspace(const ComplexMatrix& a, const Subspace& k,
                        const TolerancePolicy& tol) {
  if (a.cols() != k.ambient()) {
    throw UsageError("operator and subspace dimensions differ");
  }
  if (k.dim() == 0) return Subspace::zero(a.rows());
  std::vector<ComplexVector> images;
  images.reserve(k.dim());
  for (const auto& b : k.basis()) images.push_back(a * b);
  return Subspace::span(images, a.rows(), tol);
}

bool in_subspace(const ComplexVector& v, const Subspace& k,
                 const TolerancePolicy& tol) {
  return norm(k.residual(v)) <= tol.null_threshold * std::max(norm(v), 1.0);
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition
// ---------------------------------------------------------------------------

std::vector<double> HermitianOperator::eigenvalues() const {
  std::vector<double> out;
  for (const auto& e : spectrum_) out.push_back(e.value);
  return out;
}

namespace {

double off_diagonal(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (i != j) s += std::norm(a(i, j));
    }
  }
  return std::sqrt(s);
}

// Merges sorted (value, vector) pairs into eigenspaces.
std::vector<Eigenspace> cluster(std::vector<std::pair<double, ComplexVector>> ev,
                                std::size_t n, const TolerancePolicy& tol,
                                const std::vector<double>* value_set) {
  std::sort(ev.begin(), ev.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Eigenspace> out;
  std::size_t i = 0;
  while (i < ev.size()) {
    std::size_t j = i + 1;
    double sum = ev[i].first;
    while (j < ev.size() && ev[j].first - ev[j - 1].first <= tol.eps) {
      sum += ev[j].first;
      ++j;
    }
    double value = sum / static_cast<double>(j - i);
    if (value_set != nullptr) {
      for (double x : *value_set) {
        if (std::abs(x - value) <= tol.eps) {
          value = x;
          break;
        }
      }
    }
    std::vector<ComplexVector> vecs;
    for (std::size_t k = i; k < j; ++k) vecs.push_back(ev[k].second);
    reorthonormalise(vecs);
    Eigenspace e;
    e.value = value;
    e.space = Subspace::span(vecs, n, tol);
    e.projector = trusted_projector(e.space.projector());
    out.push_back(std::move(e));
    i = j;
  }
  // snapping may make neighbouring clusters coincide
  std::vector<Eigenspace> merged;
  for (auto& e : out) {
    if (!merged.empty() && merged.back().value == e.value) {
      auto basis = merged.back().space.basis();
      basis.insert(basis.end(), e.space.basis().begin(), e.space.basis().end());
      merged.back().space = Subspace::span(basis, n, tol);
      merged.back().projector =
          trusted_projector(merged.back().space.projector());
    } else {
      merged.push_back(std::move(e));
    }
  }
  return merged;
}

}  // namespace

HermitianOperator hermitian_eig(const ComplexMatrix& input,
                                const TolerancePolicy& tol,
                                const std::vector<double>* value_set) {
  if (!input.square() || input.rows() == 0) {
    throw ValidationError("Hermitian operator must be a non-empty square matrix");
  }
  const double scale = std::max(1.0, input.max_abs());
  if (max_abs_diff(input, input.adjoint()) > tol.eps * scale) {
    throw ValidationError("matrix is not Hermitian");
  }
  const std::size_t n = input.rows();
  ComplexMatrix a = (input + input.adjoint()) * Complex(0.5);
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double target = kMachine * std::max(a.frobenius_norm(), 1e-300);

  int sweep = 0;
  while (off_diagonal(a) > target) {
    if (++sweep > kMaxSweeps) {
      throw NumericError("Jacobi eigensolver did not converge");
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r == 0.0) continue;
        // G = diag(1, e^{-iφ}) · [[c, s], [-s, c]] zeroes a(p,q) in G†AG.
        const Complex phase = std::conj(apq) / r;
        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
        const double t =
            sign_of(tau) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const Complex gpp = c, gpq = s, gqp = -s * phase, gqq = c * phase;
        // A ← A G (columns p, q)
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * gpp + akq * gqp;
          a(k, q) = akp * gpq + akq * gqq;
        }
        // A ← G† A (rows p, q)
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
          a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * gpp + vkq * gqp;
          v(k, q) = vkp * gpq + vkq * gqq;
        }
      }
    }
  }

  std::vector<std::pair<double, ComplexVector>> ev;
  for (std::size_t i = 0; i < n; ++i) ev.emplace_back(a(i, i).real(), v.column(i));
  HermitianOperator out;
  out.matrix_ = input;
  out.spectrum_ = cluster(std::move(ev), n, tol, value_set);
  return out;
}

Projector spectral_projector(const HermitianOperator& a,
                             const std::vector<double>& delta,
                             const TolerancePolicy& tol) {
  ComplexMatrix p = ComplexMatrix::zero(a.dim());
  for (const auto& e : a.spectrum()) {
    const bool hit = std::any_of(delta.begin(), delta.end(), [&](double d) {
      return std::abs(d - e.value) <= tol.eps;
    });
    if (hit) p += e.projector.matrix();
  }
  return trusted_projector(std::move(p));
}

HermitianOperator apply_function(
    const HermitianOperator& a,
    const std::function<std::optional<double>(double)>& f,
    const TolerancePolicy& tol) {
  std::vector<std::pair<double, Subspace>> images;
  for (const auto& e : a.spectrum()) {
    auto y = f(e.value);
    if (!y) {
      throw DomainError("function undefined at eigenvalue " +
                        std::to_string(e.value));
    }
    images.emplace_back(*y, e.space);
  }
  std::stable_sort(images.begin(), images.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
  const std::size_t n = a.dim();
  HermitianOperator out;
  out.matrix_ = ComplexMatrix::zero(n);
  for (std::size_t i = 0; i < images.size();) {
    std::size_t j = i;
    std::vector<ComplexVector> basis;
    while (j < images.size() &&
           std::abs(images[j].first - images[i].first) <= tol.eps) {
      const auto& b = images[j].second.basis();
      basis.insert(basis.end(), b.begin(), b.end());
      ++j;
    }
    Eigenspace e;
    e.value = images[i].first;
    e.space = Subspace::span(basis, n, tol);
    e.projector = trusted_projector(e.space.projector());
    out.matrix_ += e.projector.matrix() * Complex(e.value);
    out.spectrum_.push_back(std::move(e));
    i = j;
  }
  return out;
}

HermitianOperator apply_function(const HermitianOperator& a,
                                 const std::vector<double>& domain,
                                 const std::vector<double>& image,
                                 const TolerancePolicy& tol) {
  if (domain.size() != image.size()) {
    throw UsageError("function table needs one image per domain value");
  }
  return apply_function(
      a,
      [&](double x) -> std::optional<double> {
        for (std::size_t i = 0; i < domain.size(); ++i) {
          if (std::abs(domain[i] - x) <= tol.eps) return image[i];
        }
        return std::nullopt;
      },
      tol);
}

// ---------------------------------------------------------------------------
// Rays
// ---------------------------------------------------------------------------

bool ray_equal(const ComplexVector& psi, const ComplexVector& phi,
               const TolerancePolicy& tol) {
  const double a = norm(psi);
  const double b = norm(phi);
  if (a <= tol.null_threshold || b <= tol.null_threshold) {
    throw PreconditionError("ray comparison needs non-null vectors");
  }
  return std::abs(inner(psi, phi)) / (a * b) >= 1.0 - tol.eps;
}

Ray Ray::of(const ComplexVector& v, const TolerancePolicy& tol) {
  const double n = norm(v);
  if (n <= tol.null_threshold) {
    throw PreconditionError("null vector has no ray");
  }
  Ray r;
  r.rep_ = scaled(v, 1.0 / n);
  // fix the phase on the largest component, ties going to the first
  std::size_t pivot = 0;
  for (std::size_t i = 1; i < r.rep_.size(); ++i) {
    if (std::abs(r.rep_[i]) > std::abs(r.rep_[pivot]) + 1e-12) pivot = i;
  }
  const Complex p = r.rep_[pivot];
  r.rep_ = scaled(r.rep_, std::conj(p) / std::abs(p));
  r.rep_[pivot] = std::abs(r.rep_[pivot]);
  return r;
}

bool ray_equal(const Ray& a, const Ray& b, const TolerancePolicy& tol) {
  return ray_equal(a.representative(), b.representative(), tol);
}

ExtendedRay ExtendedRay::from_vector(const ComplexVector& v,
                                     const TolerancePolicy& tol) {
  if (norm(v) <= tol.null_threshold) return zero();
  return of(Ray::of(v, tol));
}

const Ray& ExtendedRay::ray() const {
  if (!ray_) throw PreconditionError("[0] has no representative");
  return *ray_;
}

bool extended_ray_equal(const ExtendedRay& a, const ExtendedRay& b,
                        const TolerancePolicy& tol) {
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  return ray_equal(a.ray(), b.ray(), tol);
}

}  // namespace mtopos
