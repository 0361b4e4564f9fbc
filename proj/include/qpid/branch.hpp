#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qpid/operators.hpp"
#include "qpid/qpid.hpp"

namespace qpid {

/// Pure state given as a short sum of product terms: K branch amplitudes and
/// one unit vector per (branch, site). Sites are partitioned into the T, A
/// and B subsystems; an empty part acts as a trivial one-dimensional factor.
struct BranchState {
  Vector amplitudes;  // K
  // local_vectors[k][s]: state of site s in branch k
  std::vector<std::vector<Vector>> local_vectors;
  std::array<std::vector<int>, 3> partition;  // site indices of T, A, B

  [[nodiscard]] long branch_count() const { return amplitudes.size(); }
  [[nodiscard]] std::size_t site_count() const {
    return local_vectors.empty() ? 0 : local_vectors.front().size();
  }

  void validate() const {
    const long k = branch_count();
    if (k < 1) throw std::invalid_argument("BranchState: no branches");
    if (static_cast<long>(local_vectors.size()) != k)
      throw std::invalid_argument("BranchState: branch count mismatch");
    for (const auto& branch : local_vectors) {
      if (branch.size() != site_count())
        throw std::invalid_argument("BranchState: ragged site lists");
      for (const auto& v : branch)
        if (std::abs(v.squaredNorm() - 1.0) > 1e-12)
          throw std::invalid_argument("BranchState: local vector not unit");
    }
    std::vector<bool> seen(site_count(), false);
    for (const auto& part : partition)
      for (int s : part) {
        if (s < 0 || s >= static_cast<int>(site_count()) || seen[s])
          throw std::invalid_argument("BranchState: bad site partition");
        seen[s] = true;
      }
    for (bool b : seen)
      if (!b) throw std::invalid_argument("BranchState: unassigned site");
  }
};

/// G(i,j) = prod_{s in sites} <v_i^s | v_j^s>; Hermitian PSD, unit diagonal.
/// An empty site set gives the all-ones matrix (every branch overlaps fully).
inline Matrix gram_matrix(const BranchState& state,
                          const std::vector<int>& sites) {
  const long k = state.branch_count();
  Matrix g = Matrix::Ones(k, k);
  for (int s : sites) {
    if (s < 0 || s >= static_cast<int>(state.site_count()))
      throw std::invalid_argument("gram_matrix: site out of range");
    for (long i = 0; i < k; ++i)
      for (long j = 0; j < k; ++j)
        g(i, j) *= state.local_vectors[i][s].dot(state.local_vectors[j][s]);
  }
  return g;
}

namespace detail {

/// Coordinates of the branch vectors in an orthonormal basis of their span,
/// from the Gram eigendecomposition: G = X^dag X with X of shape rank x K.
inline Matrix branch_coordinates(const Matrix& gram, double tol = 1e-12) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  const Eigen::VectorXd w = es.eigenvalues();
  const double wmax = std::max(w.maxCoeff(), 0.0);
  std::vector<long> kept;
  for (long i = 0; i < w.size(); ++i)
    if (w[i] > tol * wmax) kept.push_back(i);
  if (kept.empty())
    throw std::invalid_argument("branch_coordinates: Gram matrix is zero");
  Matrix x(static_cast<long>(kept.size()), gram.cols());
  for (std::size_t r = 0; r < kept.size(); ++r)
    x.row(static_cast<long>(r)) =
        std::sqrt(w[kept[r]]) * es.eigenvectors().col(kept[r]).adjoint();
  return x;
}

}  // namespace detail

struct EffectiveReduction {
  DensityOperator rho;  // reduced state in the orthonormalized branch span
  Matrix coordinates;   // rank x K map from branches to the effective basis
};

/// Reduced density operator on the kept sites, expressed in the <= K
/// dimensional branch span; eigenvalues agree with the dense reduction.
inline EffectiveReduction reduced_operator_effective(
    const BranchState& state, const std::vector<int>& keep) {
  state.validate();
  if (keep.empty())
    throw std::invalid_argument("reduced_operator_effective: empty keep set");
  std::vector<int> rest;
  for (int s = 0; s < static_cast<int>(state.site_count()); ++s)
    if (std::find(keep.begin(), keep.end(), s) == keep.end())
      rest.push_back(s);
  const Matrix x = detail::branch_coordinates(gram_matrix(state, keep));
  const Matrix g_rest = gram_matrix(state, rest);
  const long k = state.branch_count();
  Matrix c(k, k);
  for (long i = 0; i < k; ++i)
    for (long j = 0; j < k; ++j)
      c(i, j) = state.amplitudes[i] * std::conj(state.amplitudes[j]) *
                g_rest(j, i);
  Matrix rho = x * c * x.adjoint();
  rho = 0.5 * (rho + rho.adjoint().eval());
  rho /= rho.trace().real();
  const int r = static_cast<int>(rho.rows());
  return {DensityOperator{std::move(rho), HilbertLayout({r}, {"S"})}, x};
}

/// Full QPID of a branch state, computed in the effective T/A/B branch spans
/// (dimension <= K per factor) instead of the exponentially large site space.
inline QPIDResult qpid_via_branches(const BranchState& state,
                                    Variant variant = Variant::star) {
  state.validate();
  if (state.branch_count() > 8)
    throw std::invalid_argument("qpid_via_branches: more than 8 branches");
  const Matrix xt =
      detail::branch_coordinates(gram_matrix(state, state.partition[0]));
  const Matrix xa =
      detail::branch_coordinates(gram_matrix(state, state.partition[1]));
  const Matrix xb =
      detail::branch_coordinates(gram_matrix(state, state.partition[2]));
  const long rt = xt.rows(), ra = xa.rows(), rb = xb.rows();
  const long k = state.branch_count();
  Vector psi = Vector::Zero(rt * ra * rb);
  for (long i = 0; i < k; ++i)
    for (long t = 0; t < rt; ++t)
      for (long a = 0; a < ra; ++a)
        for (long b = 0; b < rb; ++b)
          psi[(t * ra + a) * rb + b] +=
              state.amplitudes[i] * xt(t, i) * xa(a, i) * xb(b, i);
  psi /= psi.norm();
  PureState eff{std::move(psi),
                HilbertLayout({static_cast<int>(rt), static_cast<int>(ra),
                               static_cast<int>(rb)},
                              {"T", "A", "B"})};
  return qpid_decompose(eff.density(), variant);
}

/// Two-branch environment state: sqrt(p) |0>|0...0> + sqrt(q) |1>|r...r>,
/// |r> = s|0> + sqrt(1-s^2)|1>, with m_a sites in A and m_b in B.
inline BranchState darwinism_state(double p, double s, int m_a, int m_b) {
  if (p < 0 || p > 1 || s < 0 || s > 1)
    throw std::invalid_argument("darwinism_state: parameter out of range");
  if (m_a + m_b < 1 || m_a < 0 || m_b < 0)
    throw std::invalid_argument("darwinism_state: need at least one qubit");
  const double q = 1.0 - p;
  Vector zero(2), one(2), rot(2);
  zero << 1, 0;
  one << 0, 1;
  rot << s, std::sqrt(1.0 - s * s);
  BranchState st;
  st.amplitudes = Vector(2);
  st.amplitudes << std::sqrt(p), std::sqrt(q);
  const int n = 1 + m_a + m_b;  // site 0 is the target qubit
  st.local_vectors = {std::vector<Vector>(n, zero),
                      std::vector<Vector>(n, rot)};
  st.local_vectors[1][0] = one;
  st.partition[0] = {0};
  for (int i = 0; i < m_a; ++i) st.partition[1].push_back(1 + i);
  for (int i = 0; i < m_b; ++i) st.partition[2].push_back(1 + m_a + i);
  st.validate();
  return st;
}

/// Dense vector of a branch state, for small site counts.
inline PureState branch_state_dense(const BranchState& state) {
  state.validate();
  // Factor order: T sites, then A sites, then B sites.
  std::vector<int> order;
  for (const auto& part : state.partition)
    order.insert(order.end(), part.begin(), part.end());
  std::vector<int> dims;
  for (int s : order)
    dims.push_back(static_cast<int>(state.local_vectors[0][s].size()));
  long d = 1;
  for (int x : dims) d *= x;
  Vector v = Vector::Zero(d);
  for (long i = 0; i < state.branch_count(); ++i) {
    Vector term(1);
    term << state.amplitudes[i];
    for (int s : order) {
      Vector next(term.size() * state.local_vectors[i][s].size());
      for (long a = 0; a < term.size(); ++a)
        next.segment(a * state.local_vectors[i][s].size(),
                     state.local_vectors[i][s].size()) =
            term[a] * state.local_vectors[i][s];
      term = std::move(next);
    }
    v += term;
  }
  v /= v.norm();
  std::vector<int> group_dims(3, 1);
  for (int g = 0; g < 3; ++g)
    for (int s : state.partition[g])
      group_dims[g] *= static_cast<int>(state.local_vectors[0][s].size());
  return {std::move(v), HilbertLayout(group_dims, {"T", "A", "B"})};
}

}  // namespace qpid
