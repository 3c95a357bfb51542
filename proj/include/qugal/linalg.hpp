// Copyright 2026 The qugal Authors.
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

// Dense complex linear algebra on small qubit registers.
//
// Everything here is a free function over Eigen dense types templated on the
// real scalar. Subsystems are ordered left to right in tensor order and
// qubit 0 is the most significant bit of a basis index.

#ifndef QUGAL_LINALG_HPP
#define QUGAL_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qugal/error.hpp"

namespace qugal {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using CMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using CVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// Tolerances shared by the validated state types.
template <typename Real>
struct Tolerance {
  static constexpr Real hermitian = Real(1e-10);
  static constexpr Real trace = Real(1e-9);
  static constexpr Real psd = Real(1e-9);
  static constexpr Real norm = Real(1e-10);
};

inline std::size_t qubit_dim(int n_qubits) {
  if (n_qubits < 0 || n_qubits > 30) {
    throw DimensionError("qubit count out of range: " + std::to_string(n_qubits));
  }
  return std::size_t{1} << n_qubits;
}

inline int qubits_for_dim(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim) {
    throw DimensionError("dimension " + std::to_string(dim) + " is not a power of two");
  }
  return n;
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw DimensionError(std::string(what) + ": expected a non-empty square matrix");
  }
  if (!m.allFinite()) {
    throw NumericalError(std::string(what) + ": matrix has non-finite entries");
  }
}

/// Largest |m(i,j) - conj(m(j,i))|.
template <typename Derived>
typename Derived::RealScalar hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m,
                  typename Derived::RealScalar tol =
                      Tolerance<typename Derived::RealScalar>::hermitian) {
  using Real = typename Derived::RealScalar;
  if (m.rows() != m.cols()) return false;
  const Real scale = std::max(Real(1), m.cwiseAbs().maxCoeff());
  return hermiticity_defect(m) <= tol * scale;
}

/// (m + m^dagger) / 2
template <typename Derived>
CMatrix<typename Derived::RealScalar> hermitian_part(const Eigen::MatrixBase<Derived>& m) {
  return (m + m.adjoint()) * typename Derived::RealScalar(0.5);
}

template <typename Derived>
void require_hermitian(const Eigen::MatrixBase<Derived>& m, const char* what) {
  require_square(m, what);
  if (!is_hermitian(m)) {
    throw NotHermitianError(std::string(what) + ": matrix is not Hermitian (defect " +
                            std::to_string(double(hermiticity_defect(m))) + ")");
  }
}

// ---------------------------------------------------------------------------
// Validated state types

/// Unit-norm state vector on n qubits.
template <typename Real = double>
class PureState {
 public:
  explicit PureState(CVector<Real> amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() == 0) throw DimensionError("pure state: empty amplitude vector");
    n_qubits_ = qubits_for_dim(amplitudes_.size());
    if (!amplitudes_.allFinite()) throw NumericalError("pure state: non-finite amplitude");
    const Real dev = std::abs(amplitudes_.squaredNorm() - Real(1));
    if (dev > Tolerance<Real>::norm) {
      throw NormalizationError("pure state: squared norm deviates from 1 by " +
                               std::to_string(double(dev)));
    }
  }

  /// Rescales to unit norm before validating.
  static PureState normalized(CVector<Real> amplitudes) {
    const Real n = amplitudes.norm();
    if (!(n > Real(0))) throw NormalizationError("pure state: zero vector");
    amplitudes /= n;
    return PureState(std::move(amplitudes));
  }

  static PureState basis(int n_qubits, std::size_t index) {
    CVector<Real> v = CVector<Real>::Zero(Eigen::Index(qubit_dim(n_qubits)));
    if (index >= std::size_t(v.size())) throw DimensionError("basis index out of range");
    v(Eigen::Index(index)) = Real(1);
    return PureState(std::move(v));
  }

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return amplitudes_.size(); }
  const CVector<Real>& amplitudes() const { return amplitudes_; }

  /// |psi><psi|
  CMatrix<Real> projector() const { return amplitudes_ * amplitudes_.adjoint(); }

 private:
  CVector<Real> amplitudes_;
  int n_qubits_ = 0;
};

/// Hermitian, unit-trace, positive semidefinite matrix of dimension 2^n.
template <typename Real = double>
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix<Real> m) : matrix_(std::move(m)) {
    require_hermitian(matrix_, "density matrix");
    n_qubits_ = qubits_for_dim(matrix_.rows());
    const Real tr = matrix_.trace().real();
    if (std::abs(tr - Real(1)) > Tolerance<Real>::trace) {
      throw NormalizationError("density matrix: trace is " + std::to_string(double(tr)));
    }
    matrix_ = hermitian_part(matrix_);
    Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(matrix_, Eigen::EigenvaluesOnly);
    const Real lo = es.eigenvalues()(0);
    if (lo < -Tolerance<Real>::psd) {
      throw NotPsdError("density matrix: smallest eigenvalue is " + std::to_string(double(lo)));
    }
  }

  DensityMatrix(const PureState<Real>& psi)  // NOLINT(google-explicit-constructor)
      : matrix_(psi.projector()), n_qubits_(psi.n_qubits()) {}

  static DensityMatrix maximally_mixed(int n_qubits) {
    const auto d = Eigen::Index(qubit_dim(n_qubits));
    return DensityMatrix(CMatrix<Real>::Identity(d, d) / Real(d), n_qubits);
  }

  /// For results that are positive semidefinite with unit trace by
  /// construction; only symmetrizes.
  static DensityMatrix trusted(const CMatrix<Real>& m) {
    return DensityMatrix(hermitian_part(m), qubits_for_dim(m.rows()));
  }

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  const CMatrix<Real>& matrix() const { return matrix_; }

 private:
  DensityMatrix(CMatrix<Real> m, int n) : matrix_(std::move(m)), n_qubits_(n) {}

  CMatrix<Real> matrix_;
  int n_qubits_ = 0;
};

/// Running sum of Hermitian matrices.
template <typename Real = double>
class HermitianAccumulator {
 public:
  explicit HermitianAccumulator(Eigen::Index dim) : sum_(CMatrix<Real>::Zero(dim, dim)) {}

  template <typename Derived>
  HermitianAccumulator& add(const Eigen::MatrixBase<Derived>& h, Real scale = Real(1)) {
    if (h.rows() != sum_.rows() || h.cols() != sum_.cols()) {
      throw DimensionError("accumulator: dimension mismatch");
    }
    sum_.noalias() += scale * hermitian_part(h);
    return *this;
  }

  Eigen::Index dim() const { return sum_.rows(); }
  const CMatrix<Real>& sum() const { return sum_; }
  Real trace() const { return sum_.trace().real(); }

 private:
  CMatrix<Real> sum_;
};

// ---------------------------------------------------------------------------
// Operations

/// Kronecker product a (x) b.
template <typename DerivedA, typename DerivedB>
CMatrix<typename DerivedA::RealScalar> tensor_product(const Eigen::MatrixBase<DerivedA>& a,
                                                      const Eigen::MatrixBase<DerivedB>& b) {
  using Real = typename DerivedA::RealScalar;
  const Eigen::Index ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
  CMatrix<Real> out(ar * br, ac * bc);
  for (Eigen::Index i = 0; i < ar; ++i) {
    for (Eigen::Index j = 0; j < ac; ++j) {
      out.block(i * br, j * bc, br, bc) = a(i, j) * b;
    }
  }
  return out;
}

template <typename Real>
DensityMatrix<Real> tensor_product(const DensityMatrix<Real>& a, const DensityMatrix<Real>& b) {
  return DensityMatrix<Real>::trusted(tensor_product(a.matrix(), b.matrix()));
}

template <typename Real>
CVector<Real> tensor_product(const CVector<Real>& a, const CVector<Real>& b) {
  CVector<Real> out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

/// Reduced matrix on subsystem `keep` of a register split into subsystems of
/// `dims[i]` qubits each. Works on any square operator, not only states.
template <typename Derived>
CMatrix<typename Derived::RealScalar> partial_trace(const Eigen::MatrixBase<Derived>& m,
                                                    std::span<const int> dims, std::size_t keep) {
  using Real = typename Derived::RealScalar;
  require_square(m, "partial_trace");
  if (keep >= dims.size()) throw DimensionError("partial_trace: keep index out of range");
  int before = 0, after = 0, total = 0;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] < 0) throw DimensionError("partial_trace: negative subsystem size");
    total += dims[i];
    if (i < keep) before += dims[i];
    if (i > keep) after += dims[i];
  }
  if (Eigen::Index(qubit_dim(total)) != m.rows()) {
    throw DimensionError("partial_trace: subsystem sizes sum to " + std::to_string(total) +
                         " qubits but the matrix has dimension " + std::to_string(m.rows()));
  }
  const auto left = Eigen::Index(qubit_dim(before));
  const auto mid = Eigen::Index(qubit_dim(dims[keep]));
  const auto right = Eigen::Index(qubit_dim(after));
  CMatrix<Real> out = CMatrix<Real>::Zero(mid, mid);
  for (Eigen::Index l = 0; l < left; ++l) {
    for (Eigen::Index r = 0; r < right; ++r) {
      const Eigen::Index offset = l * mid * right + r;
      for (Eigen::Index i = 0; i < mid; ++i) {
        for (Eigen::Index j = 0; j < mid; ++j) {
          out(i, j) += m(offset + i * right, offset + j * right);
        }
      }
    }
  }
  return out;
}

template <typename Real>
DensityMatrix<Real> partial_trace(const DensityMatrix<Real>& rho, std::span<const int> dims,
                                  std::size_t keep) {
  return DensityMatrix<Real>::trusted(partial_trace(rho.matrix(), dims, keep));
}

template <typename Real>
DensityMatrix<Real> partial_trace(const DensityMatrix<Real>& rho, std::initializer_list<int> dims,
                                  std::size_t keep) {
  return partial_trace(rho, std::span<const int>(dims.begin(), dims.size()), keep);
}

template <typename Real>
struct HermitianEigen {
  RVector<Real> eigenvalues;    // ascending
  CMatrix<Real> eigenvectors;   // columns, unitary
};

/// Eigendecomposition h = V diag(lambda) V^dagger.
template <typename Derived>
HermitianEigen<typename Derived::RealScalar> herm_eig(const Eigen::MatrixBase<Derived>& h) {
  using Real = typename Derived::RealScalar;
  require_hermitian(h, "herm_eig");
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(hermitian_part(h));
  if (es.info() != Eigen::Success) throw NumericalError("herm_eig: solver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

/// f applied to the spectrum of a Hermitian matrix.
template <typename Real, typename F>
CMatrix<Real> spectral_map(const HermitianEigen<Real>& eig, F&& f) {
  RVector<Real> mapped = eig.eigenvalues.unaryExpr(std::forward<F>(f));
  return eig.eigenvectors * mapped.asDiagonal() * eig.eigenvectors.adjoint();
}

/// exp(h) / Tr exp(h). The spectrum is shifted by its maximum before
/// exponentiation, so arbitrarily large exponents do not overflow.
template <typename Derived>
DensityMatrix<typename Derived::RealScalar> gibbs_normalize(const Eigen::MatrixBase<Derived>& h) {
  using Real = typename Derived::RealScalar;
  const auto eig = herm_eig(h);
  const Real top = eig.eigenvalues.maxCoeff();
  RVector<Real> weights = (eig.eigenvalues.array() - top).exp().matrix();
  weights /= weights.sum();
  return DensityMatrix<Real>::trusted(eig.eigenvectors * weights.asDiagonal() *
                                      eig.eigenvectors.adjoint());
}

/// Re Tr(a b); the imaginary part must vanish for Hermitian inputs.
template <typename DerivedA, typename DerivedB>
typename DerivedA::RealScalar trace_inner(const Eigen::MatrixBase<DerivedA>& a,
                                          const Eigen::MatrixBase<DerivedB>& b) {
  using Real = typename DerivedA::RealScalar;
  if (a.rows() != b.cols() || a.cols() != b.rows()) {
    throw DimensionError("trace_inner: dimension mismatch");
  }
  // Tr(ab) = sum_ij a_ij b_ji
  const Complex<Real> value = a.cwiseProduct(b.transpose()).sum();
  const Real scale = std::max(Real(1), a.cwiseAbs().maxCoeff() * b.cwiseAbs().maxCoeff() *
                                           Real(a.rows()));
  if (std::abs(value.imag()) > Tolerance<Real>::hermitian * scale) {
    throw NotHermitianError("trace_inner: imaginary part " + std::to_string(double(value.imag())));
  }
  return value.real();
}

template <typename Real>
Real trace_inner(const DensityMatrix<Real>& a, const DensityMatrix<Real>& b) {
  return trace_inner(a.matrix(), b.matrix());
}

enum class FidelityConvention {
  squared,  // (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2
  root,     // Tr sqrt(sqrt(rho) sigma sqrt(rho))
};

/// Uhlmann fidelity, clamped to [0, 1].
///
/// Works on the support of rho, and drops eigenvalues at rounding level
/// before the square root; sqrt amplifies 1e-17 noise to 3e-9 otherwise.
template <typename Real>
Real fidelity(const DensityMatrix<Real>& rho, const DensityMatrix<Real>& sigma,
              FidelityConvention convention = FidelityConvention::squared) {
  if (rho.dim() != sigma.dim()) throw DimensionError("fidelity: dimension mismatch");
  const Real cutoff = Real(8) * Real(rho.dim()) * std::numeric_limits<Real>::epsilon();
  const auto eig = herm_eig(rho.matrix());
  const Real top = eig.eigenvalues.maxCoeff();
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    if (eig.eigenvalues(i) > cutoff * top) support.push_back(i);
  }
  const auto r = Eigen::Index(support.size());
  CMatrix<Real> basis(rho.dim(), r);
  for (Eigen::Index k = 0; k < r; ++k) {
    basis.col(k) = std::sqrt(eig.eigenvalues(support[std::size_t(k)])) *
                   eig.eigenvectors.col(support[std::size_t(k)]);
  }
  // sqrt(rho) sigma sqrt(rho) restricted to the support of rho
  const CMatrix<Real> inner = hermitian_part(basis.adjoint() * sigma.matrix() * basis);
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(inner, Eigen::EigenvaluesOnly);
  const Real inner_top = std::max(es.eigenvalues().maxCoeff(), Real(0));
  Real root = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const Real x = es.eigenvalues()(i);
    if (x > cutoff * inner_top) root += std::sqrt(x);
  }
  root = std::clamp(root, Real(0), Real(1));
  return convention == FidelityConvention::squared ? root * root : root;
}

/// <psi|sigma|psi>, the squared fidelity against a pure state.
template <typename Real>
Real fidelity(const PureState<Real>& psi, const DensityMatrix<Real>& sigma) {
  if (psi.dim() != sigma.dim()) throw DimensionError("fidelity: dimension mismatch");
  const Real v = (psi.amplitudes().adjoint() * sigma.matrix() * psi.amplitudes())(0, 0).real();
  return std::clamp(v, Real(0), Real(1));
}

enum class Extreme { min, max };

/// Rank-1 projector onto an eigenvector of the smallest or largest
/// eigenvalue. Ties go to the lowest eigenvector index.
template <typename Derived>
DensityMatrix<typename Derived::RealScalar> extreme_eig_projector(
    const Eigen::MatrixBase<Derived>& h, Extreme which) {
  using Real = typename Derived::RealScalar;
  const auto eig = herm_eig(h);
  const Eigen::Index n = eig.eigenvalues.size();
  Eigen::Index pick = 0;
  if (which == Extreme::max) {
    const Real top = eig.eigenvalues(n - 1);
    const Real tol = Real(1e-12) * std::max(Real(1), std::abs(top));
    pick = n - 1;
    while (pick > 0 && top - eig.eigenvalues(pick - 1) <= tol) --pick;
  }
  const CVector<Real> v = eig.eigenvectors.col(pick);
  return DensityMatrix<Real>::trusted(v * v.adjoint());
}

}  // namespace qugal

#endif  // QUGAL_LINALG_HPP
