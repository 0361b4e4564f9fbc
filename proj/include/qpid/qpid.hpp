#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpid/classical.hpp"
#include "qpid/linalg.hpp"
#include "qpid/operators.hpp"

namespace qpid {

/// rho_AB has non-negligible weight outside the support of Z_AB; the log-on-
/// support trace would silently drop it, so we refuse instead.
struct SupportLeakError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kSupportLeakTol = 1e-8;

enum class Variant { star, plain };

inline const char* variant_name(Variant v) {
  return v == Variant::star ? "star" : "plain";
}

/// rho_{T|C} = (1 (x) rho_C^{-1/2}) rho (1 (x) rho_C^{-1/2}); PSD but not
/// trace-normalized, eigenvalues may exceed 1.
struct ConditionalOperator {
  HermitianOperator op;
  std::string conditioned_on;
};

struct QPIDResult {
  double i_ta = 0, i_tb = 0, i_tab = 0;
  double bq0 = 0, bq1 = 0, bq = 0;
  double unique_a = 0, unique_b = 0, redundant = 0, synergy = 0;
  double tri_information = 0;
  Variant variant = Variant::star;
};

/// I(x;y) = S(rho_x) + S(rho_y) - S(rho_xy)
inline double quantum_mutual_information(const DensityOperator& rho,
                                         const std::vector<std::string>& x,
                                         const std::vector<std::string>& y) {
  for (const auto& l : x)
    if (std::find(y.begin(), y.end(), l) != y.end())
      throw std::invalid_argument(
          "quantum_mutual_information: overlapping label sets");
  std::vector<std::string> xy = x;
  xy.insert(xy.end(), y.begin(), y.end());
  const auto& h = static_cast<const HermitianOperator&>(rho);
  return detail::entropy_bits(partial_trace(h, x).matrix) +
         detail::entropy_bits(partial_trace(h, y).matrix) -
         detail::entropy_bits(partial_trace(h, xy).matrix);
}

/// J(T;X) = S(rho_T) - sum_n p_n S(rho_{T|n}) for a POVM on the second factor.
inline double measured_mutual_information(const DensityOperator& rho,
                                          const std::vector<Matrix>& povm) {
  if (rho.layout.factor_count() != 2)
    throw std::invalid_argument(
        "measured_mutual_information: expected a two-factor layout");
  const auto& target = rho.layout.labels[0];
  const auto& measured = rho.layout.labels[1];
  const long dx = rho.layout.dims[1];
  Matrix sum = Matrix::Zero(dx, dx);
  for (const auto& e : povm) {
    if (e.rows() != dx || e.cols() != dx)
      throw std::invalid_argument("measured_mutual_information: effect size");
    Eigen::SelfAdjointEigenSolver<Matrix> es(e, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
      throw std::invalid_argument(
          "measured_mutual_information: effect not PSD");
    sum += e;
  }
  if ((sum - Matrix::Identity(dx, dx)).norm() > 1e-10)
    throw std::invalid_argument(
        "measured_mutual_information: effects do not sum to identity");

  const auto& h = static_cast<const HermitianOperator&>(rho);
  double j = detail::entropy_bits(partial_trace(h, {target}).matrix);
  for (const auto& e : povm) {
    HermitianOperator effect{e, rho.layout.sub_layout({measured})};
    const Matrix big = embed(effect, rho.layout).matrix;
    // Tr_X(rho (1 (x) Pi_n)); the product is not Hermitian, symmetrized by
    // cycling half the effect to each side.
    const Matrix half = hermitian_power(big, 0.5);
    Matrix post_full = half * rho.matrix * half;
    HermitianOperator pf{0.5 * (post_full + post_full.adjoint().eval()),
                         rho.layout};
    Matrix post = partial_trace(pf, {target}).matrix;
    const double pn = post.trace().real();
    if (pn <= 1e-14) continue;
    j -= pn * detail::entropy_bits(Matrix(post / pn));
  }
  return j;
}

/// Moore-Penrose conditional operator, conditioning on one factor's marginal.
inline ConditionalOperator conditional_state(const DensityOperator& rho,
                                             const std::string& condition) {
  const auto& h = static_cast<const HermitianOperator&>(rho);
  const auto marginal = partial_trace(h, {condition});
  const auto inv_sqrt = hermitian_power(marginal, -0.5);
  const Matrix m = embed(inv_sqrt, rho.layout).matrix;
  Matrix out = m * rho.matrix * m;
  out = 0.5 * (out + out.adjoint().eval());
  return {{std::move(out), rho.layout}, condition};
}

namespace detail {

inline void require_tab(const HilbertLayout& layout) {
  if (layout.labels != std::vector<std::string>{"T", "A", "B"})
    throw std::invalid_argument("expected layout labels {T, A, B}");
}

}  // namespace detail

/// Z_AB (star variant) or Z'_AB (plain variant), an operator on
/// A (x) B obtained by tracing T out of symmetrized products of fractional
/// powers of the two conditional operators.
inline HermitianOperator z_operator(const DensityOperator& rho_tab,
                                    Variant variant) {
  detail::require_tab(rho_tab.layout);
  const auto& h = static_cast<const HermitianOperator&>(rho_tab);
  const auto rho_ta = partial_trace(rho_tab, {"T", "A"});
  const auto rho_tb = partial_trace(rho_tab, {"T", "B"});
  const auto cond_a = conditional_state(rho_ta, "A").op;
  const auto cond_b = conditional_state(rho_tb, "B").op;

  // Powers are cheaper on the two-factor spaces; identities are inserted on
  // the missing factor afterwards.
  auto lifted_power = [&](const HermitianOperator& c, double p) {
    return embed(hermitian_power(c, p), rho_tab.layout).matrix;
  };

  Matrix full;
  if (variant == Variant::star) {
    const Matrix a4 = lifted_power(cond_a, 0.25);
    const Matrix a2 = lifted_power(cond_a, 0.5);
    const Matrix b4 = lifted_power(cond_b, 0.25);
    const Matrix b2 = lifted_power(cond_b, 0.5);
    full = 0.5 * (a4 * b2 * a4 + b4 * a2 * b4);
  } else {
    const Matrix a2 = lifted_power(cond_a, 0.5);
    const Matrix b2 = lifted_power(cond_b, 0.5);
    full = 0.5 * (a2 * b2 + b2 * a2);
  }
  HermitianOperator lifted{0.5 * (full + full.adjoint().eval()),
                           rho_tab.layout};
  auto z = partial_trace(lifted, {"A", "B"});
  z.matrix = 0.5 * (z.matrix + z.matrix.adjoint().eval());
  return z;
}

struct QuantumBonus {
  double bq0 = 0, bq1 = 0, bq = 0;
};

inline QuantumBonus quantum_bonus(const DensityOperator& rho_tab,
                                  Variant variant) {
  detail::require_tab(rho_tab.layout);
  const auto z = z_operator(rho_tab, variant);
  const auto rho_ab = partial_trace(rho_tab, {"A", "B"});
  // The plain variant of Z may be indefinite; its non-positive directions
  // count as kernel and are caught by the support-leak check below.
  const auto log_z =
      operator_log_on_support(z.matrix, kEpsRank, kEpsPsd, false);
  const long d = rho_ab.matrix.rows();
  const double leak =
      (rho_ab.matrix *
       (Matrix::Identity(d, d) - log_z.support_projector))
          .trace()
          .real();
  if (leak > kSupportLeakTol)
    throw SupportLeakError("quantum_bonus: rho_AB has weight " +
                           std::to_string(leak) +
                           " outside the support of Z_AB");
  QuantumBonus b;
  b.bq1 = -(rho_ab.matrix * log_z.log2_matrix).trace().real();
  b.bq0 = 0.5 * std::abs(quantum_mutual_information(rho_tab, {"T"}, {"A"}) -
                         quantum_mutual_information(rho_tab, {"T"}, {"B"}));
  b.bq = std::max(b.bq0, b.bq1);
  return b;
}

inline QPIDResult qpid_decompose(const DensityOperator& rho_tab,
                                 Variant variant = Variant::star) {
  detail::require_tab(rho_tab.layout);
  QPIDResult r;
  r.variant = variant;
  r.i_ta = quantum_mutual_information(rho_tab, {"T"}, {"A"});
  r.i_tb = quantum_mutual_information(rho_tab, {"T"}, {"B"});
  r.i_tab = quantum_mutual_information(rho_tab, {"T"}, {"A", "B"});
  const auto b = quantum_bonus(rho_tab, variant);
  r.bq0 = b.bq0;
  r.bq1 = b.bq1;
  r.bq = b.bq;
  r.unique_a = r.bq + 0.5 * (r.i_ta - r.i_tb);
  r.unique_b = r.bq + 0.5 * (r.i_tb - r.i_ta);
  r.redundant = r.i_ta - r.unique_a;
  r.synergy = r.i_tab - r.unique_a - r.unique_b - r.redundant;
  r.tri_information = -(r.i_tab - r.i_ta - r.i_tb);
  return r;
}

/// Diagonal embedding of a classical table as a state on {T, A, B}.
inline DensityOperator diagonal_state(const ProbabilityTable& table) {
  table.validate();
  const long d = static_cast<long>(table.nt) * table.na * table.nb;
  Matrix m = Matrix::Zero(d, d);
  for (long i = 0; i < d; ++i) m(i, i) = table.p[i];
  return {std::move(m),
          HilbertLayout({table.nt, table.na, table.nb}, {"T", "A", "B"})};
}

}  // namespace qpid
