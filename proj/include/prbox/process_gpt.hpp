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

// Measurements on processes. An experiment on an unknown channel E prepares a
// test state rho on input (x) ancilla, applies E (x) I, and records an effect
// on output (x) ancilla. Its outcome probability is a linear functional of the
// Choi operator C of E:
//
//   tr[Eff (E (x) I)(rho)] = tr[C F],   F = din * (I (x) R*_rho)[Eff],
//
// where R_rho is the map fixed by (I (x) R_rho)[w+] = rho and R*_rho is its
// Hilbert-Schmidt adjoint. Without an ancilla (dimension 1) R_rho is the
// functional X -> tr(rho^T X) and F reduces to din * Eff (x) rho^T.

#include <cstddef>
#include <string>
#include <utility>

#include "prbox/channels.hpp"
#include "prbox/errors.hpp"
#include "prbox/linalg.hpp"
#include "prbox/random.hpp"

namespace prbox::gpt {

using channels::ChoiOperator;
using channels::DensityOperator;
using linalg::Complex;
using linalg::ComplexMatrix;

inline constexpr double kEffectTol = 1e-10;

/// Hermitian operator with 0 <= E <= I.
class Effect {
 public:
  explicit Effect(ComplexMatrix m, double tol = kEffectTol)
      : matrix_(std::move(m)) {
    if (!matrix_.is_square()) throw DimensionError("Effect: not square");
    const auto ev = linalg::hermitian_eigenvalues(matrix_, tol);
    if (ev.front() < -tol || ev.back() > 1.0 + tol) {
      throw ValidationError("Effect: spectrum outside [0, 1]");
    }
  }

  const ComplexMatrix& matrix() const { return matrix_; }
  std::size_t dim() const { return matrix_.rows(); }

 private:
  ComplexMatrix matrix_;
};

/// Random effect M / lambda_max(M) scaled by a uniform factor, M Wishart.
inline Effect random_effect(Rng& rng, std::size_t d) {
  const auto g = random_ginibre(rng, d, d);
  const ComplexMatrix m = g * g.adjoint();
  const double top = linalg::hermitian_eigenvalues(m).back();
  return Effect(m * (rng.uniform() / top));
}

/// Linear map L(C^in) -> L(C^out) as a matrix on row-major vectorizations:
/// vec(T(X)) = S vec(X), vec(X)[j*in + k] = X(j,k).
struct Superoperator {
  ComplexMatrix matrix;
  std::size_t in_dim;
  std::size_t out_dim;

  ComplexMatrix apply(const ComplexMatrix& x) const {
    if (x.rows() != in_dim || x.cols() != in_dim) {
      throw DimensionError("Superoperator::apply: operand dimension mismatch");
    }
    const auto v = matrix * x.data();
    return ComplexMatrix(out_dim, out_dim, v);
  }

  /// (I_k (x) T)[Y] for Y on C^k (x) C^in.
  ComplexMatrix apply_on_second(const ComplexMatrix& y, std::size_t k) const {
    if (y.rows() != k * in_dim || !y.is_square()) {
      throw DimensionError(
          "Superoperator::apply_on_second: operand dimension mismatch");
    }
    ComplexMatrix out(k * out_dim);
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        ComplexMatrix block(in_dim);
        for (std::size_t p = 0; p < in_dim; ++p) {
          for (std::size_t q = 0; q < in_dim; ++q) {
            block(p, q) = y(a * in_dim + p, b * in_dim + q);
          }
        }
        const auto mapped = apply(block);
        for (std::size_t p = 0; p < out_dim; ++p) {
          for (std::size_t q = 0; q < out_dim; ++q) {
            out(a * out_dim + p, b * out_dim + q) = mapped(p, q);
          }
        }
      }
    }
    return out;
  }

  /// Hilbert-Schmidt adjoint: <T*(A), B> = <A, T(B)>.
  Superoperator adjoint() const {
    return Superoperator{matrix.adjoint(), out_dim, in_dim};
  }
};

/// R_rho for a state rho on input (x) ancilla.
struct StateInductionMap {
  Superoperator map;  // L(C^input) -> L(C^ancilla)
  std::size_t input_dim;
  std::size_t ancilla_dim;

  /// (I (x) R_rho)[w+]; reproduces rho.
  ComplexMatrix induced_state() const {
    return map.apply_on_second(channels::max_entangled_reference(input_dim),
                               input_dim);
  }
};

/// Builds R_rho from (I (x) R_rho)[w+] = rho: the (j,k) block of rho is
/// R_rho(|j><k|). `input_dim` must divide rho's dimension; the quotient is
/// the ancilla dimension (1 when rho lives on the input alone).
inline StateInductionMap make_state_induction(const DensityOperator& rho,
                                              std::size_t input_dim) {
  if (input_dim == 0 || rho.dim() % input_dim != 0) {
    throw DimensionError("make_state_induction: input dimension " +
                         std::to_string(input_dim) +
                         " does not divide state dimension " +
                         std::to_string(rho.dim()));
  }
  const std::size_t d = input_dim;
  const std::size_t m = rho.dim() / d;
  ComplexMatrix s(m * m, d * d);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k < d; ++k) {
      for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
          s(a * m + b, j * d + k) = rho.matrix()(j * m + a, k * m + b);
        }
      }
    }
  }
  return {Superoperator{std::move(s), d, m}, d, m};
}

inline StateInductionMap make_state_induction(const DensityOperator& rho) {
  return make_state_induction(rho, rho.dim());
}

/// Process effect F on output (x) input, paired with Choi operators by
/// tr[C F].
class ProcessEffect {
 public:
  ProcessEffect(ComplexMatrix f, std::size_t din, std::size_t dout,
                DensityOperator rho_used, Effect e_used)
      : matrix_(std::move(f)),
        din_(din),
        dout_(dout),
        rho_used_(std::move(rho_used)),
        e_used_(std::move(e_used)) {
    if (matrix_.rows() != din_ * dout_ || !matrix_.is_square()) {
      throw DimensionError("ProcessEffect: matrix dimension mismatch");
    }
    if (!linalg::is_positive_semidefinite(matrix_, kEffectTol, kEffectTol)) {
      throw ValidationError("ProcessEffect: operator is not positive");
    }
  }

  const ComplexMatrix& matrix() const { return matrix_; }
  std::size_t din() const { return din_; }
  std::size_t dout() const { return dout_; }
  const DensityOperator& rho_used() const { return rho_used_; }
  const Effect& e_used() const { return e_used_; }

 private:
  ComplexMatrix matrix_;
  std::size_t din_;
  std::size_t dout_;
  DensityOperator rho_used_;
  Effect e_used_;
};

/// F = din * (I_out (x) R*_rho)[E] for test state rho on input (x) ancilla
/// and effect E on output (x) ancilla.
inline ProcessEffect make_process_effect(const DensityOperator& rho,
                                         const Effect& e,
                                         std::size_t input_dim) {
  const auto induction = make_state_induction(rho, input_dim);
  const std::size_t m = induction.ancilla_dim;
  if (e.dim() % m != 0) {
    throw DimensionError("make_process_effect: effect dimension is not a "
                         "multiple of the ancilla dimension");
  }
  const std::size_t dout = e.dim() / m;
  auto f = induction.map.adjoint().apply_on_second(e.matrix(), dout) *
           double(input_dim);
  return ProcessEffect(std::move(f), input_dim, dout, rho, e);
}

/// No-ancilla form: rho on the channel input, E on the channel output.
inline ProcessEffect make_process_effect(const DensityOperator& rho,
                                         const Effect& e) {
  return make_process_effect(rho, e, rho.dim());
}

/// tr[C F]
inline double evaluate(const ProcessEffect& f, const ChoiOperator& choi) {
  if (f.din() != choi.din() || f.dout() != choi.dout()) {
    throw DimensionError("evaluate: process effect is for " +
                         std::to_string(f.dout()) + "x" +
                         std::to_string(f.din()) + " channels, Choi operator "
                         "is " + std::to_string(choi.dout()) + "x" +
                         std::to_string(choi.din()));
  }
  return linalg::hs_inner(f.matrix(), choi.matrix()).real();
}

/// Outcome probability of running the experiment directly:
/// tr[E (ch (x) I_anc)(rho)].
inline double direct_experiment(const channels::Channel& ch,
                                const DensityOperator& rho, const Effect& e) {
  if (rho.dim() % ch.din() != 0) {
    throw DimensionError("direct_experiment: state does not fit channel input");
  }
  const std::size_t m = rho.dim() / ch.din();
  const auto out = channels::apply_extended(ch, rho.matrix(), m);
  if (out.rows() != e.dim()) {
    throw DimensionError("direct_experiment: effect does not fit output");
  }
  return (e.matrix() * out).trace().real();
}

}  // namespace prbox::gpt
