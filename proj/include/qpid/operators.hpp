#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <utility>

#include "qpid/layout.hpp"

namespace qpid {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Default tolerances; see also the overloads taking explicit values.
inline constexpr double kEpsRank = 1e-12;  // relative kernel cutoff
inline constexpr double kEpsPsd = 1e-9;    // relative negative-eigenvalue slack
inline constexpr double kEpsHerm = 1e-10;  // relative Hermiticity slack

/// Hermitian operator on a multipartite space.
struct HermitianOperator {
  Matrix matrix;
  HilbertLayout layout;

  HermitianOperator() = default;
  HermitianOperator(Matrix m, HilbertLayout l)
      : matrix(std::move(m)), layout(std::move(l)) {
    validate();
  }

  void validate() const {
    if (matrix.rows() != matrix.cols())
      throw std::invalid_argument("HermitianOperator: non-square matrix");
    if (matrix.rows() != layout.total_dim())
      throw std::invalid_argument(
          "HermitianOperator: matrix side does not match layout dimension");
    const double nrm = matrix.norm();
    if ((matrix - matrix.adjoint()).norm() > kEpsHerm * std::max(nrm, 1.0))
      throw std::invalid_argument("HermitianOperator: not Hermitian");
  }
};

/// Unit-trace PSD Hermitian operator.
struct DensityOperator : HermitianOperator {
  DensityOperator() = default;
  DensityOperator(Matrix m, HilbertLayout l)
      : HermitianOperator(std::move(m), std::move(l)) {
    validate_density();
  }

  void validate_density() const {
    if (std::abs(matrix.trace().real() - 1.0) > 1e-10 ||
        std::abs(matrix.trace().imag()) > 1e-10)
      throw std::invalid_argument("DensityOperator: trace != 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix,
                                             Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9)
      throw std::invalid_argument("DensityOperator: negative eigenvalue");
  }
};

/// Normalized state vector on a multipartite space.
struct PureState {
  Vector amplitudes;
  HilbertLayout layout;

  PureState() = default;
  PureState(Vector v, HilbertLayout l)
      : amplitudes(std::move(v)), layout(std::move(l)) {
    if (amplitudes.size() != layout.total_dim())
      throw std::invalid_argument("PureState: size does not match layout");
    if (std::abs(amplitudes.squaredNorm() - 1.0) > 1e-12)
      throw std::invalid_argument("PureState: not normalized");
  }

  [[nodiscard]] DensityOperator density() const {
    return {amplitudes * amplitudes.adjoint(), layout};
  }
};

}  // namespace qpid
