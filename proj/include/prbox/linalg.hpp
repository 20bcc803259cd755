// Copyright 2026 The prbox Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Dense complex linear algebra for the small operators used throughout the
// library (dimension <= 16). Storage is row-major. Matrices are usually
// square; Kraus operators between spaces of different dimension are the one
// place where rectangular shapes appear, so shape-sensitive operations check
// their own preconditions.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "prbox/errors.hpp"

namespace prbox::linalg {

using Complex = std::complex<double>;
using Vector = std::vector<Complex>;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {
    if (rows == 0 || cols == 0) {
      throw DimensionError("ComplexMatrix: dimensions must be positive");
    }
  }

  /// Square dim x dim zero matrix.
  explicit ComplexMatrix(std::size_t dim) : ComplexMatrix(dim, dim) {}

  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows == 0 || cols == 0) {
      throw DimensionError("ComplexMatrix: dimensions must be positive");
    }
    if (data_.size() != rows * cols) {
      throw DimensionError("ComplexMatrix: data size does not match shape");
    }
    check_finite();
  }

  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    if (rows_ == 0 || cols_ == 0) {
      throw DimensionError("ComplexMatrix: dimensions must be positive");
    }
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) {
        throw DimensionError("ComplexMatrix: ragged initializer");
      }
      data_.insert(data_.end(), row.begin(), row.end());
    }
    check_finite();
  }

  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) {
    return ComplexMatrix(rows, cols);
  }

  static ComplexMatrix identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }

  static ComplexMatrix diagonal(std::initializer_list<double> values) {
    return diagonal(std::span<const double>(values.begin(), values.size()));
  }

  /// |i><i| on a dim-dimensional space.
  static ComplexMatrix basis_projector(std::size_t dim, std::size_t i) {
    if (i >= dim) throw DimensionError("basis_projector: index out of range");
    ComplexMatrix m(dim);
    m(i, i) = 1.0;
    return m;
  }

  /// |u><v|
  static ComplexMatrix outer(std::span<const Complex> u,
                             std::span<const Complex> v) {
    ComplexMatrix m(u.size(), v.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      for (std::size_t j = 0; j < v.size(); ++j) {
        m(i, j) = u[i] * std::conj(v[j]);
      }
    }
    m.check_finite();
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  /// Dimension of a square matrix.
  std::size_t dim() const {
    require_square("dim");
    return rows_;
  }

  Complex& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<const Complex> data() const { return data_; }

  ComplexMatrix adjoint() const {
    ComplexMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    }
    return r;
  }

  ComplexMatrix transpose() const {
    ComplexMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    }
    return r;
  }

  ComplexMatrix conjugate() const {
    ComplexMatrix r = *this;
    for (auto& z : r.data_) z = std::conj(z);
    return r;
  }

  Complex trace() const {
    require_square("trace");
    Complex t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  /// Largest |m_ij - conj(m_ji)|; zero for Hermitian matrices.
  double hermitian_defect() const {
    require_square("hermitian_defect");
    double worst = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = i; j < cols_; ++j) {
        worst = std::max(worst,
                         std::abs((*this)(i, j) - std::conj((*this)(j, i))));
      }
    }
    return worst;
  }

  bool is_hermitian(double tol = kHermitianTol) const {
    return is_square() && hermitian_defect() <= tol;
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
      return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_shape(o, "operator+");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }

  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_shape(o, "operator-");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }

  ComplexMatrix& operator*=(Complex s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) {
    return a += b;
  }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) {
    return a -= b;
  }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(ComplexMatrix a, double s) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a,
                                 const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) {
      throw DimensionError("matrix product: inner dimensions differ (" +
                           a.shape_string() + " * " + b.shape_string() + ")");
    }
    ComplexMatrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Complex aik = a(i, k);
        if (aik == Complex{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
      }
    }
    return r;
  }

  friend Vector operator*(const ComplexMatrix& a, std::span<const Complex> v) {
    if (a.cols_ != v.size()) {
      throw DimensionError("matrix-vector product: dimension mismatch");
    }
    Vector r(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t j = 0; j < a.cols_; ++j) r[i] += a(i, j) * v[j];
    }
    return r;
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

  std::string shape_string() const {
    std::ostringstream os;
    os << rows_ << "x" << cols_;
    return os.str();
  }

 private:
  void check_finite() const {
    if (!all_finite()) {
      throw ValidationError("ComplexMatrix: non-finite entry");
    }
  }
  void require_square(const char* what) const {
    if (!is_square()) {
      throw DimensionError(std::string(what) + ": matrix is not square (" +
                           shape_string() + ")");
    }
  }
  void require_same_shape(const ComplexMatrix& o, const char* what) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
      throw DimensionError(std::string(what) + ": shapes differ (" +
                           shape_string() + " vs " + o.shape_string() + ")");
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

inline double frobenius_distance(const ComplexMatrix& a,
                                 const ComplexMatrix& b) {
  return (a - b).frobenius_norm();
}

/// Ordered subsystem dimensions of a composite space, e.g. {2, 2} for two
/// qubits. Subsystem indices are 0-based.
struct SubsystemShape {
  std::vector<std::size_t> dims;

  std::size_t total() const {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                           std::multiplies<>{});
  }

  void require_matches(std::size_t dim) const {
    if (dims.empty() ||
        std::any_of(dims.begin(), dims.end(), [](auto d) { return d == 0; })) {
      throw DimensionError("SubsystemShape: dims must be a nonempty list of "
                           "positive integers");
    }
    if (total() != dim) {
      throw DimensionError("SubsystemShape: product of dims does not match "
                           "matrix dimension");
    }
  }

  friend bool operator==(const SubsystemShape&, const SubsystemShape&) = default;
};

inline SubsystemShape qubits(std::size_t n) {
  return SubsystemShape{std::vector<std::size_t>(n, 2)};
}

/// Kronecker product; entry (i*rb + k, j*cb + l) = a(i,j) * b(k,l).
inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t rb = b.rows(), cb = b.cols();
  ComplexMatrix r(a.rows() * rb, a.cols() * cb);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{}) continue;
      for (std::size_t k = 0; k < rb; ++k) {
        for (std::size_t l = 0; l < cb; ++l) {
          r(i * rb + k, j * cb + l) = aij * b(k, l);
        }
      }
    }
  }
  return r;
}

inline Vector tensor(std::span<const Complex> u, std::span<const Complex> v) {
  Vector r(u.size() * v.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (std::size_t j = 0; j < v.size(); ++j) r[i * v.size() + j] = u[i] * v[j];
  }
  return r;
}

namespace detail {

// Mixed-radix digits of a flat index, most significant subsystem first.
inline std::vector<std::size_t> digits(std::size_t index,
                                       const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> d(dims.size());
  for (std::size_t s = dims.size(); s-- > 0;) {
    d[s] = index % dims[s];
    index /= dims[s];
  }
  return d;
}

}  // namespace detail

/// Traces out every subsystem not listed in `keep`. The kept subsystems stay
/// in their original order. An empty `keep` yields the 1x1 matrix [tr(m)].
inline ComplexMatrix partial_trace(const ComplexMatrix& m,
                                   const SubsystemShape& shape,
                                   std::vector<std::size_t> keep) {
  if (!m.is_square()) throw DimensionError("partial_trace: matrix not square");
  shape.require_matches(m.rows());
  std::sort(keep.begin(), keep.end());
  if (std::adjacent_find(keep.begin(), keep.end()) != keep.end()) {
    throw DimensionError("partial_trace: repeated subsystem index");
  }
  for (auto k : keep) {
    if (k >= shape.dims.size()) {
      throw DimensionError("partial_trace: subsystem index out of range");
    }
  }
  std::vector<bool> kept(shape.dims.size(), false);
  for (auto k : keep) kept[k] = true;

  std::size_t out_dim = 1;
  for (auto k : keep) out_dim *= shape.dims[k];
  ComplexMatrix r(out_dim);

  const std::size_t n = m.rows();
  for (std::size_t i = 0; i < n; ++i) {
    const auto di = detail::digits(i, shape.dims);
    for (std::size_t j = 0; j < n; ++j) {
      const auto dj = detail::digits(j, shape.dims);
      bool traced_match = true;
      std::size_t oi = 0, oj = 0;
      for (std::size_t s = 0; s < shape.dims.size(); ++s) {
        if (kept[s]) {
          oi = oi * shape.dims[s] + di[s];
          oj = oj * shape.dims[s] + dj[s];
        } else if (di[s] != dj[s]) {
          traced_match = false;
          break;
        }
      }
      if (traced_match) r(oi, oj) += m(i, j);
    }
  }
  return r;
}

inline void require_hermitian(const ComplexMatrix& m, double tol,
                              const char* what) {
  if (!m.is_square()) {
    throw DimensionError(std::string(what) + ": matrix is not square");
  }
  if (m.hermitian_defect() > tol) {
    throw ValidationError(std::string(what) + ": matrix is not Hermitian");
  }
}

/// Eigenvalues ascending; eigenvectors stored as the columns of `vectors`.
struct Eigensystem {
  std::vector<double> values;
  ComplexMatrix vectors;

  Vector vector(std::size_t k) const {
    Vector v(vectors.rows());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = vectors(i, k);
    return v;
  }
};

inline Eigensystem hermitian_eigensystem(const ComplexMatrix& m,
                                         double tol = kHermitianTol) {
  require_hermitian(m, tol, "hermitian_eigensystem");
  const auto n = static_cast<Eigen::Index>(m.rows());
  Eigen::MatrixXcd a(n, n);
  // Symmetrize so the solver sees an exactly Hermitian input.
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto ui = static_cast<std::size_t>(i);
      const auto uj = static_cast<std::size_t>(j);
      a(i, j) = 0.5 * (m(ui, uj) + std::conj(m(uj, ui)));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a);
  if (solver.info() != Eigen::Success) {
    throw ValidationError("hermitian_eigensystem: solver did not converge");
  }
  Eigensystem es{std::vector<double>(m.rows()), ComplexMatrix(m.rows())};
  for (Eigen::Index k = 0; k < n; ++k) {
    es.values[static_cast<std::size_t>(k)] = solver.eigenvalues()(k);
    for (Eigen::Index i = 0; i < n; ++i) {
      es.vectors(static_cast<std::size_t>(i), static_cast<std::size_t>(k)) =
          solver.eigenvectors()(i, k);
    }
  }
  return es;
}

/// Real eigenvalues of a Hermitian matrix, ascending.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m,
                                                 double tol = kHermitianTol) {
  return hermitian_eigensystem(m, tol).values;
}

/// True iff the smallest eigenvalue is >= -tol. Throws ValidationError for a
/// non-Hermitian input.
inline bool is_positive_semidefinite(const ComplexMatrix& m,
                                     double tol = kPsdTol,
                                     double hermitian_tol = kHermitianTol) {
  const auto ev = hermitian_eigenvalues(m, hermitian_tol);
  return ev.front() >= -tol;
}

/// Rebuilds V diag(values) V^dagger.
inline ComplexMatrix reconstruct(const Eigensystem& es) {
  const std::size_t n = es.values.size();
  ComplexMatrix r(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto v = es.vector(k);
    r += es.values[k] * ComplexMatrix::outer(v, v);
  }
  return r;
}

inline Complex inner(std::span<const Complex> u, std::span<const Complex> v) {
  if (u.size() != v.size()) throw DimensionError("inner: size mismatch");
  Complex s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
  return s;
}

/// Standard basis ket |i> in dimension dim.
inline Vector ket(std::size_t dim, std::size_t i) {
  if (i >= dim) throw DimensionError("ket: index out of range");
  Vector v(dim);
  v[i] = 1.0;
  return v;
}

/// Hilbert-Schmidt inner product tr(a^dagger b).
inline Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("hs_inner: shapes differ");
  }
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    s += std::conj(a.data()[i]) * b.data()[i];
  }
  return s;
}

inline const ComplexMatrix& pauli_x() {
  static const ComplexMatrix m{{0.0, 1.0}, {1.0, 0.0}};
  return m;
}
inline const ComplexMatrix& pauli_y() {
  static const ComplexMatrix m{{0.0, Complex(0.0, -1.0)},
                               {Complex(0.0, 1.0), 0.0}};
  return m;
}
inline const ComplexMatrix& pauli_z() {
  static const ComplexMatrix m{{1.0, 0.0}, {0.0, -1.0}};
  return m;
}

}  // namespace prbox::linalg
