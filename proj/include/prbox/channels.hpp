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

// Quantum states and channels on small systems.
//
// Choi convention used throughout the library: for a channel E from a
// din-dimensional input to a dout-dimensional output,
//
//   C = (E (x) I)[w+] / din,     w+ = sum_jk |jj><kk|,
//
// ordered output (x) input. C is a unit-trace density operator, and trace
// preservation of E is equivalent to tr_output(C) = I / din.

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "prbox/errors.hpp"
#include "prbox/linalg.hpp"
#include "prbox/random.hpp"

namespace prbox::channels {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::SubsystemShape;

inline constexpr double kStateTol = 1e-10;

/// Positive, unit-trace operator together with its subsystem structure.
class DensityOperator {
 public:
  DensityOperator(ComplexMatrix m, SubsystemShape shape, double tol = kStateTol)
      : matrix_(std::move(m)), shape_(std::move(shape)) {
    if (!matrix_.is_square()) {
      throw DimensionError("DensityOperator: matrix is not square");
    }
    shape_.require_matches(matrix_.rows());
    if (matrix_.hermitian_defect() > tol) {
      throw ValidationError("DensityOperator: matrix is not Hermitian");
    }
    if (std::abs(matrix_.trace() - Complex(1.0)) > tol) {
      throw ValidationError("DensityOperator: trace is not 1");
    }
    if (!linalg::is_positive_semidefinite(matrix_, tol, tol)) {
      throw ValidationError("DensityOperator: matrix is not positive");
    }
  }

  /// Single-system state with shape {dim}.
  explicit DensityOperator(ComplexMatrix m, double tol = kStateTol)
      : DensityOperator(m, SubsystemShape{{m.rows()}}, tol) {}

  static DensityOperator pure(std::span<const Complex> psi,
                              SubsystemShape shape) {
    double norm2 = 0.0;
    for (const auto& c : psi) norm2 += std::norm(c);
    if (norm2 <= 0.0) throw ValidationError("DensityOperator::pure: zero vector");
    ComplexMatrix m = ComplexMatrix::outer(psi, psi) * (1.0 / norm2);
    return DensityOperator(std::move(m), std::move(shape));
  }

  static DensityOperator pure(std::span<const Complex> psi) {
    return pure(psi, SubsystemShape{{psi.size()}});
  }

  /// Computational basis state |index> on the given shape.
  static DensityOperator basis(const SubsystemShape& shape, std::size_t index) {
    return DensityOperator(ComplexMatrix::basis_projector(shape.total(), index),
                           shape);
  }

  static DensityOperator maximally_mixed(const SubsystemShape& shape) {
    const auto d = shape.total();
    return DensityOperator(ComplexMatrix::identity(d) * (1.0 / double(d)),
                           shape);
  }

  const ComplexMatrix& matrix() const { return matrix_; }
  const SubsystemShape& shape() const { return shape_; }
  std::size_t dim() const { return matrix_.rows(); }

  /// <index|rho|index>
  double population(std::size_t index) const {
    return matrix_(index, index).real();
  }

  /// tr(rho^2) > 1 - tol
  bool is_pure(double tol = kStateTol) const {
    return std::abs((matrix_ * matrix_).trace().real() - 1.0) <= tol;
  }

 private:
  ComplexMatrix matrix_;
  SubsystemShape shape_;
};

inline DensityOperator tensor(const DensityOperator& a,
                              const DensityOperator& b) {
  SubsystemShape shape = a.shape();
  shape.dims.insert(shape.dims.end(), b.shape().dims.begin(),
                    b.shape().dims.end());
  return DensityOperator(linalg::tensor(a.matrix(), b.matrix()),
                         std::move(shape));
}

/// Full-rank sample G G^dagger / tr(G G^dagger), G Ginibre.
inline DensityOperator random_density(Rng& rng, const SubsystemShape& shape) {
  const auto d = shape.total();
  const ComplexMatrix g = random_ginibre(rng, d, d);
  ComplexMatrix m = g * g.adjoint();
  m *= 1.0 / m.trace().real();
  return DensityOperator(std::move(m), shape);
}

/// Completely positive trace-preserving map held as a Kraus family.
class Channel {
 public:
  Channel(std::vector<ComplexMatrix> kraus, std::size_t din, std::size_t dout,
          SubsystemShape out_shape, double tol = kStateTol)
      : kraus_(std::move(kraus)),
        din_(din),
        dout_(dout),
        out_shape_(std::move(out_shape)) {
    if (kraus_.empty()) throw ValidationError("Channel: empty Kraus family");
    out_shape_.require_matches(dout_);
    ComplexMatrix sum(din_);
    for (const auto& k : kraus_) {
      if (k.rows() != dout_ || k.cols() != din_) {
        throw DimensionError("Channel: Kraus operator has shape " +
                             k.shape_string() + ", expected " +
                             std::to_string(dout_) + "x" +
                             std::to_string(din_));
      }
      sum += k.adjoint() * k;
    }
    if (linalg::frobenius_distance(sum, ComplexMatrix::identity(din_)) > tol) {
      throw ValidationError(
          "Channel: Kraus family is not trace preserving");
    }
  }

  Channel(std::vector<ComplexMatrix> kraus, std::size_t din, std::size_t dout)
      : Channel(std::move(kraus), din, dout, SubsystemShape{{dout}}) {}

  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }
  std::size_t din() const { return din_; }
  std::size_t dout() const { return dout_; }
  const SubsystemShape& out_shape() const { return out_shape_; }

  /// sum_i K_i X K_i^dagger for an arbitrary din x din operator X.
  ComplexMatrix apply_to(const ComplexMatrix& x) const {
    if (x.rows() != din_ || x.cols() != din_) {
      throw DimensionError("Channel::apply_to: operand is " + x.shape_string() +
                           ", channel input dimension is " +
                           std::to_string(din_));
    }
    ComplexMatrix out(dout_);
    for (const auto& k : kraus_) out += k * x * k.adjoint();
    return out;
  }

 private:
  std::vector<ComplexMatrix> kraus_;
  std::size_t din_;
  std::size_t dout_;
  SubsystemShape out_shape_;
};

inline DensityOperator apply(const Channel& ch, const DensityOperator& rho) {
  if (rho.dim() != ch.din()) {
    throw DimensionError("apply: state dimension " + std::to_string(rho.dim()) +
                         " does not match channel input " +
                         std::to_string(ch.din()));
  }
  return DensityOperator(ch.apply_to(rho.matrix()), ch.out_shape());
}

/// (E (x) I_anc) applied to an operator on input (x) ancilla.
inline ComplexMatrix apply_extended(const Channel& ch, const ComplexMatrix& x,
                                    std::size_t anc_dim) {
  if (x.rows() != ch.din() * anc_dim || !x.is_square()) {
    throw DimensionError("apply_extended: operand does not match input (x) "
                         "ancilla");
  }
  const auto id = ComplexMatrix::identity(anc_dim);
  ComplexMatrix out(ch.dout() * anc_dim);
  for (const auto& k : ch.kraus()) {
    const auto ke = linalg::tensor(k, id);
    out += ke * x * ke.adjoint();
  }
  return out;
}

inline Channel identity_channel(std::size_t d) {
  return Channel({ComplexMatrix::identity(d)}, d, d);
}

/// rho -> tr(rho) I/d, with Kraus operators |i><j| / sqrt(d).
inline Channel completely_depolarizing(std::size_t d) {
  std::vector<ComplexMatrix> kraus;
  const double s = 1.0 / std::sqrt(double(d));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      ComplexMatrix k(d);
      k(i, j) = s;
      kraus.push_back(std::move(k));
    }
  }
  return Channel(std::move(kraus), d, d);
}

/// Product channel a (x) b.
inline Channel tensor(const Channel& a, const Channel& b) {
  std::vector<ComplexMatrix> kraus;
  for (const auto& ka : a.kraus()) {
    for (const auto& kb : b.kraus()) kraus.push_back(linalg::tensor(ka, kb));
  }
  SubsystemShape shape = a.out_shape();
  shape.dims.insert(shape.dims.end(), b.out_shape().dims.begin(),
                    b.out_shape().dims.end());
  return Channel(std::move(kraus), a.din() * b.din(), a.dout() * b.dout(),
                 std::move(shape));
}

/// Measures in the computational basis of the input and prepares
/// prepared[outcome]. Diagonal prepared states use basis vectors for their
/// support; others use their eigenvectors.
inline Channel measure_and_prepare(std::span<const DensityOperator> prepared) {
  const std::size_t din = prepared.size();
  if (din == 0) throw DimensionError("measure_and_prepare: no outcomes");
  const std::size_t dout = prepared.front().dim();
  const SubsystemShape out_shape = prepared.front().shape();
  std::vector<ComplexMatrix> kraus;
  for (std::size_t outcome = 0; outcome < din; ++outcome) {
    const auto& xi = prepared[outcome];
    if (xi.dim() != dout) {
      throw DimensionError("measure_and_prepare: prepared states differ in "
                           "dimension");
    }
    const auto input = linalg::ket(din, outcome);
    bool diagonal = true;
    for (std::size_t i = 0; i < dout && diagonal; ++i) {
      for (std::size_t j = 0; j < dout; ++j) {
        if (i != j && xi.matrix()(i, j) != Complex{}) {
          diagonal = false;
          break;
        }
      }
    }
    if (diagonal) {
      for (std::size_t m = 0; m < dout; ++m) {
        const double w = xi.population(m);
        if (w <= 0.0) continue;
        kraus.push_back(ComplexMatrix::outer(linalg::ket(dout, m), input) *
                        std::sqrt(w));
      }
    } else {
      const auto es = linalg::hermitian_eigensystem(xi.matrix());
      for (std::size_t m = 0; m < dout; ++m) {
        if (es.values[m] <= 0.0) continue;
        kraus.push_back(ComplexMatrix::outer(es.vector(m), input) *
                        std::sqrt(es.values[m]));
      }
    }
  }
  return Channel(std::move(kraus), din, dout, out_shape);
}

/// (xi_cor, xi_acor): the classically correlated mixture
/// (|00><00| + |11><11|)/2 and the anticorrelated (|01><01| + |10><10|)/2.
inline std::pair<DensityOperator, DensityOperator> make_prepared_states() {
  const auto shape = linalg::qubits(2);
  return {DensityOperator(ComplexMatrix::diagonal({0.5, 0.0, 0.0, 0.5}), shape),
          DensityOperator(ComplexMatrix::diagonal({0.0, 0.5, 0.5, 0.0}), shape)};
}

/// Two-qubit measure-and-prepare channel realizing the PR box: both qubits are
/// measured in the computational basis; outcomes (j,k) with jk = 0 prepare
/// xi_cor, and (1,1) prepares xi_acor. Sixteen Kraus operators
/// sqrt(1/2) |m><jk|, outcome pairs in order 00, 01, 10, 11.
inline Channel make_pr_channel() {
  auto [cor, acor] = make_prepared_states();
  const std::array<DensityOperator, 4> prepared{cor, cor, cor, acor};
  std::vector<ComplexMatrix> kraus;
  for (std::size_t jk = 0; jk < 4; ++jk) {
    const auto& xi = prepared[jk];
    for (std::size_t m = 0; m < 4; ++m) {
      // Every basis vector gets an operator, so the family always has 16
      // members; the ones outside the support vanish.
      kraus.push_back(
          ComplexMatrix::outer(linalg::ket(4, m), linalg::ket(4, jk)) *
          std::sqrt(xi.population(m)));
    }
  }
  return Channel(std::move(kraus), 4, 4, linalg::qubits(2));
}

/// Normalized Choi operator, ordered output (x) input.
class ChoiOperator {
 public:
  ChoiOperator(ComplexMatrix m, std::size_t din, std::size_t dout,
               double tol = kStateTol)
      : matrix_(std::move(m)), din_(din), dout_(dout) {
    if (!matrix_.is_square() || matrix_.rows() != din_ * dout_) {
      throw DimensionError("ChoiOperator: matrix is " + matrix_.shape_string() +
                           ", expected dimension dout*din = " +
                           std::to_string(din_ * dout_));
    }
    if (matrix_.hermitian_defect() > tol) {
      throw ValidationError("ChoiOperator: matrix is not Hermitian");
    }
    if (std::abs(matrix_.trace() - Complex(1.0)) > tol) {
      throw ValidationError("ChoiOperator: trace is not 1");
    }
    if (!linalg::is_positive_semidefinite(matrix_, tol, tol)) {
      throw ValidationError("ChoiOperator: not positive (channel is not "
                            "completely positive)");
    }
    const auto marginal = input_marginal();
    const auto target = ComplexMatrix::identity(din_) * (1.0 / double(din_));
    double worst = 0.0;
    for (std::size_t i = 0; i < din_; ++i) {
      for (std::size_t j = 0; j < din_; ++j) {
        worst = std::max(worst, std::abs(marginal(i, j) - target(i, j)));
      }
    }
    if (worst > tol) {
      throw ValidationError("ChoiOperator: tr_out(C) != I/din (channel is not "
                            "trace preserving)");
    }
  }

  const ComplexMatrix& matrix() const { return matrix_; }
  std::size_t din() const { return din_; }
  std::size_t dout() const { return dout_; }

  /// Partial trace over the output factor.
  ComplexMatrix input_marginal() const {
    return linalg::partial_trace(matrix_, SubsystemShape{{dout_, din_}}, {1});
  }

 private:
  ComplexMatrix matrix_;
  std::size_t din_;
  std::size_t dout_;
};

/// Unnormalized w+ = sum_jk |jj><kk| on C^d (x) C^d.
inline ComplexMatrix max_entangled_reference(std::size_t d) {
  ComplexMatrix w(d * d);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k < d; ++k) w(j * d + j, k * d + k) = 1.0;
  }
  return w;
}

namespace detail {

// Row-major vec(K): entry a*din + j holds K(a, j). Equals (K (x) I)|w+>.
inline linalg::Vector vectorize(const ComplexMatrix& k) {
  return linalg::Vector(k.data().begin(), k.data().end());
}

}  // namespace detail

inline ChoiOperator to_choi(const Channel& ch) {
  const std::size_t n = ch.din() * ch.dout();
  ComplexMatrix c(n);
  for (const auto& k : ch.kraus()) {
    const auto v = detail::vectorize(k);
    c += ComplexMatrix::outer(v, v);
  }
  c *= 1.0 / double(ch.din());
  return ChoiOperator(std::move(c), ch.din(), ch.dout());
}

/// Canonical Kraus family from the spectral decomposition of din * C.
/// Eigenvalues at or below `drop_tol` (relative to the largest) are discarded.
inline Channel from_choi(const ChoiOperator& c, SubsystemShape out_shape,
                         double drop_tol = 1e-14) {
  const std::size_t din = c.din(), dout = c.dout();
  const auto es = linalg::hermitian_eigensystem(c.matrix() * double(din));
  const double top = es.values.back();
  std::vector<ComplexMatrix> kraus;
  for (std::size_t m = es.values.size(); m-- > 0;) {
    const double lambda = es.values[m];
    if (lambda <= drop_tol * std::max(top, 1.0)) continue;
    ComplexMatrix k(dout, din);
    const double s = std::sqrt(lambda);
    for (std::size_t a = 0; a < dout; ++a) {
      for (std::size_t j = 0; j < din; ++j) {
        k(a, j) = s * es.vectors(a * din + j, m);
      }
    }
    kraus.push_back(std::move(k));
  }
  return Channel(std::move(kraus), din, dout, std::move(out_shape), 1e-9);
}

inline Channel from_choi(const ChoiOperator& c) {
  return from_choi(c, SubsystemShape{{c.dout()}});
}

/// E(X) = din * tr_in[C (I (x) X^T)], computed from the Choi operator alone.
inline ComplexMatrix apply_via_choi(const ChoiOperator& c,
                                    const ComplexMatrix& x) {
  if (x.rows() != c.din() || !x.is_square()) {
    throw DimensionError("apply_via_choi: operand dimension mismatch");
  }
  const auto prod = c.matrix() *
                    linalg::tensor(ComplexMatrix::identity(c.dout()),
                                   x.transpose());
  return linalg::partial_trace(prod, SubsystemShape{{c.dout(), c.din()}}, {0}) *
         double(c.din());
}

/// Random channel with `n_kraus` operators: stacked Ginibre blocks G_i,
/// orthonormalized as K_i = G_i S^{-1/2}, S = sum_i G_i^dagger G_i.
inline Channel random_channel(Rng& rng, std::size_t din, std::size_t dout,
                              std::size_t n_kraus, SubsystemShape out_shape) {
  std::vector<ComplexMatrix> blocks;
  ComplexMatrix s(din);
  for (std::size_t i = 0; i < n_kraus; ++i) {
    blocks.push_back(random_ginibre(rng, dout, din));
    s += blocks.back().adjoint() * blocks.back();
  }
  const auto es = linalg::hermitian_eigensystem(s);
  ComplexMatrix inv_sqrt(din);
  for (std::size_t m = 0; m < din; ++m) {
    const auto v = es.vector(m);
    inv_sqrt += ComplexMatrix::outer(v, v) * (1.0 / std::sqrt(es.values[m]));
  }
  for (auto& b : blocks) b = b * inv_sqrt;
  return Channel(std::move(blocks), din, dout, std::move(out_shape));
}

inline Channel random_channel(Rng& rng, std::size_t din, std::size_t dout,
                              std::size_t n_kraus) {
  return random_channel(rng, din, dout, n_kraus, SubsystemShape{{dout}});
}

}  // namespace prbox::channels
