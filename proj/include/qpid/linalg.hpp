#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpid/operators.hpp"

namespace qpid {

struct NotPsdError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

/// Strides of a row-major multi-index (first factor slowest).
inline std::vector<long> strides(const std::vector<int>& dims) {
  std::vector<long> s(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i)
    s[i] = s[i + 1] * dims[i + 1];
  return s;
}

/// Full-space offsets of all linear indices over the factors at `positions`.
inline std::vector<long> factor_offsets(const std::vector<int>& dims,
                                        const std::vector<int>& positions) {
  const auto st = strides(dims);
  std::vector<long> offs{0};
  for (int p : positions) {
    std::vector<long> next;
    next.reserve(offs.size() * dims[p]);
    for (long o : offs)
      for (int k = 0; k < dims[p]; ++k) next.push_back(o + k * st[p]);
    offs = std::move(next);
  }
  return offs;
}

/// Partial trace over the factors not listed in `keep` (positions into dims).
template <typename Derived>
Matrix partial_trace(const Eigen::MatrixBase<Derived>& op,
                     const std::vector<int>& dims,
                     const std::vector<int>& keep) {
  std::vector<int> traced;
  for (int i = 0; i < static_cast<int>(dims.size()); ++i)
    if (std::find(keep.begin(), keep.end(), i) == keep.end())
      traced.push_back(i);
  const auto keep_off = factor_offsets(dims, keep);
  const auto tr_off = factor_offsets(dims, traced);
  const long dk = static_cast<long>(keep_off.size());
  Matrix out = Matrix::Zero(dk, dk);
  for (long i = 0; i < dk; ++i)
    for (long j = 0; j < dk; ++j) {
      Complex acc(0, 0);
      for (long t : tr_off) acc += op(keep_off[i] + t, keep_off[j] + t);
      out(i, j) = acc;
    }
  return out;
}

/// Tensor identity onto the factors at `missing` and scatter `op` (whose
/// factors sit at `positions`, in op's own factor order) into the full space.
template <typename Derived>
Matrix embed(const Eigen::MatrixBase<Derived>& op,
             const std::vector<int>& dims, const std::vector<int>& positions) {
  std::vector<int> missing;
  for (int i = 0; i < static_cast<int>(dims.size()); ++i)
    if (std::find(positions.begin(), positions.end(), i) == positions.end())
      missing.push_back(i);
  const auto op_off = factor_offsets(dims, positions);
  const auto id_off = factor_offsets(dims, missing);
  long full = 1;
  for (int d : dims) full *= d;
  Matrix out = Matrix::Zero(full, full);
  for (std::size_t a = 0; a < op_off.size(); ++a)
    for (std::size_t b = 0; b < op_off.size(); ++b) {
      const Complex v = op(a, b);
      if (v == Complex(0, 0)) continue;
      for (long m : id_off) out(op_off[a] + m, op_off[b] + m) = v;
    }
  return out;
}

inline double entropy_bits(const Eigen::VectorXd& eigs) {
  double s = 0;
  for (double l : eigs)
    if (l > 1e-15) s -= l * std::log2(l);
  return s;
}

}  // namespace detail

/// Trace out every factor not in `keep`; kept factors stay in their original
/// relative order.
inline HermitianOperator partial_trace(const HermitianOperator& op,
                                       const std::vector<std::string>& keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
  auto sub = op.layout.sub_layout(keep);
  std::vector<int> pos;
  for (const auto& l : sub.labels) pos.push_back(op.layout.index_of(l));
  return {detail::partial_trace(op.matrix, op.layout.dims, pos), sub};
}

inline DensityOperator partial_trace(const DensityOperator& op,
                                     const std::vector<std::string>& keep) {
  auto h = partial_trace(static_cast<const HermitianOperator&>(op), keep);
  return {std::move(h.matrix), std::move(h.layout)};
}

/// Insert identities on the target factors missing from op's layout and
/// permute to the target factor order.
inline HermitianOperator embed(const HermitianOperator& op,
                               const HilbertLayout& target) {
  std::vector<int> pos;
  for (std::size_t i = 0; i < op.layout.labels.size(); ++i) {
    const auto& l = op.layout.labels[i];
    const int p = target.index_of(l);
    if (target.dims[p] != op.layout.dims[i])
      throw std::invalid_argument("embed: dimension mismatch on label " + l);
    pos.push_back(p);
  }
  return {detail::embed(op.matrix, target.dims, pos), target};
}

/// Moore-Penrose fractional power: eigenvalues below eps_rank * lambda_max map
/// to 0 for every exponent; negatives within eps_psd * lambda_max are clamped.
inline Matrix hermitian_power(const Matrix& m, double exponent,
                              double eps_rank = kEpsRank,
                              double eps_psd = kEpsPsd) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  Eigen::VectorXd w = es.eigenvalues();
  const double lmax = std::max(w.maxCoeff(), 0.0);
  if (w.minCoeff() < -eps_psd * std::max(lmax, 1.0))
    throw NotPsdError("hermitian_power: operator is not PSD");
  Eigen::VectorXd wp(w.size());
  for (long i = 0; i < w.size(); ++i) {
    const double l = std::max(w[i], 0.0);
    wp[i] = (l <= eps_rank * lmax) ? 0.0 : std::pow(l, exponent);
  }
  return es.eigenvectors() * wp.asDiagonal() *
         es.eigenvectors().adjoint();
}

inline HermitianOperator hermitian_power(const HermitianOperator& op,
                                         double exponent,
                                         double eps_rank = kEpsRank,
                                         double eps_psd = kEpsPsd) {
  return {hermitian_power(op.matrix, exponent, eps_rank, eps_psd), op.layout};
}

/// a * b := b^{1/2} a b^{1/2}
inline HermitianOperator star_product(const HermitianOperator& a,
                                      const HermitianOperator& b) {
  if (!(a.layout == b.layout))
    throw std::invalid_argument("star_product: layout mismatch");
  const Matrix bh = hermitian_power(b.matrix, 0.5);
  Matrix out = bh * a.matrix * bh;
  out = 0.5 * (out + out.adjoint().eval());
  return {std::move(out), a.layout};
}

struct LogOnSupport {
  Matrix log2_matrix;        // log2 of eigenvalues on the support, 0 on kernel
  Matrix support_projector;  // projector onto eigenvalues > eps_rank * max
};

/// With require_psd = false an indefinite operator is accepted and its
/// non-positive eigenvalues are treated as kernel; the caller is expected to
/// check how much weight falls outside the returned support projector.
inline LogOnSupport operator_log_on_support(const Matrix& m,
                                            double eps_rank = kEpsRank,
                                            double eps_psd = kEpsPsd,
                                            bool require_psd = true) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  Eigen::VectorXd w = es.eigenvalues();
  const double lmax = std::max(w.maxCoeff(), 0.0);
  if (require_psd && w.minCoeff() < -eps_psd * std::max(lmax, 1.0))
    throw NotPsdError("operator_log_on_support: operator is not PSD");
  Eigen::VectorXd wl(w.size()), ws(w.size());
  for (long i = 0; i < w.size(); ++i) {
    const bool on_support = w[i] > eps_rank * lmax;
    wl[i] = on_support ? std::log2(w[i]) : 0.0;
    ws[i] = on_support ? 1.0 : 0.0;
  }
  const Matrix& v = es.eigenvectors();
  return {v * wl.asDiagonal() * v.adjoint(), v * ws.asDiagonal() * v.adjoint()};
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
          a(i, j) * b;
  return out;
}

/// S(rho) = -Tr rho log2 rho, in bits.
inline double von_neumann_entropy(const DensityOperator& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix, Eigen::EigenvaluesOnly);
  return detail::entropy_bits(es.eigenvalues());
}

namespace detail {

/// Entropy of a Hermitian unit-trace matrix without density validation.
inline double entropy_bits(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return entropy_bits(es.eigenvalues());
}

}  // namespace detail

}  // namespace qpid
