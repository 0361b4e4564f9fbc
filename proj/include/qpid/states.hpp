#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include "qpid/classical.hpp"
#include "qpid/linalg.hpp"
#include "qpid/operators.hpp"

namespace qpid {

/// Seeded RNG; same (seed, algorithm) reproduces the same stream. derive()
/// yields independent sub-streams keyed by task index.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed,
                        std::string algorithm = "mt19937_64")
      : seed_(seed), algorithm_(std::move(algorithm)), engine_(seed) {
    if (algorithm_ != "mt19937_64")
      throw std::invalid_argument("RandomSource: unknown algorithm " +
                                  algorithm_);
  }

  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  [[nodiscard]] const std::string& algorithm() const { return algorithm_; }

  double gaussian() { return normal_(engine_); }
  Complex complex_gaussian() { return {normal_(engine_), normal_(engine_)}; }

  [[nodiscard]] RandomSource derive(std::uint64_t index) const {
    // splitmix64 of seed xor index keeps sub-streams decorrelated.
    std::uint64_t z = seed_ + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return RandomSource(z ^ (z >> 31), algorithm_);
  }

 private:
  std::uint64_t seed_;
  std::string algorithm_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

inline Matrix ginibre(long rows, long cols, RandomSource& rng) {
  Matrix g(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) g(i, j) = rng.complex_gaussian();
  return g;
}

/// Haar unitary via QR of a complex Ginibre matrix with the R-diagonal phase
/// folded back into Q.
inline Matrix haar_unitary(long d, RandomSource& rng) {
  if (d < 1) throw std::invalid_argument("haar_unitary: d < 1");
  const Matrix g = ginibre(d, d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (long j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    q.col(j) *= (std::abs(rjj) > 0) ? rjj / std::abs(rjj) : Complex(1, 0);
  }
  return q;
}

/// Equal superposition of the support of a uniform table, on layout {T,A,B}.
inline PureState superposition_from_table(const ProbabilityTable& table) {
  table.validate();
  long k = 0;
  double w = 0;
  for (double x : table.p)
    if (x > kProbZero) {
      ++k;
      w = x;
    }
  if (k == 0) throw std::invalid_argument("superposition_from_table: empty");
  for (double x : table.p)
    if (x > kProbZero && std::abs(x - w) > 1e-12)
      throw std::invalid_argument(
          "superposition_from_table: table support is not uniform");
  if (std::abs(w * static_cast<double>(k) - 1.0) > 1e-9)
    throw std::invalid_argument(
        "superposition_from_table: table support is not uniform");
  Vector v = Vector::Zero(static_cast<long>(table.p.size()));
  const double amp = 1.0 / std::sqrt(static_cast<double>(k));
  for (std::size_t i = 0; i < table.p.size(); ++i)
    if (table.p[i] > kProbZero) v[static_cast<long>(i)] = amp;
  return {std::move(v),
          HilbertLayout({table.nt, table.na, table.nb}, {"T", "A", "B"})};
}

/// |Psi> = 1/sqrt(d_t) sum_n |n>_T |Phi_n>_AB with the Phi_n the first d_t
/// columns of a Haar unitary on AB; rho_T comes out maximally mixed.
inline PureState scrambled_state(long d_t, const HilbertLayout& layout_ab,
                                 RandomSource& rng) {
  const long d_ab = layout_ab.total_dim();
  if (d_t > d_ab)
    throw std::invalid_argument("scrambled_state: d_t exceeds dim(AB)");
  const Matrix u = haar_unitary(d_ab, rng);
  Vector v = Vector::Zero(d_t * d_ab);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d_t));
  for (long n = 0; n < d_t; ++n)
    v.segment(n * d_ab, d_ab) = amp * u.col(n);
  std::vector<int> dims{static_cast<int>(d_t)};
  std::vector<std::string> labels{"T"};
  dims.insert(dims.end(), layout_ab.dims.begin(), layout_ab.dims.end());
  labels.insert(labels.end(), layout_ab.labels.begin(),
                layout_ab.labels.end());
  return {std::move(v), HilbertLayout(dims, labels)};
}

inline PureState random_pure(const HilbertLayout& layout, RandomSource& rng) {
  Vector v = ginibre(layout.total_dim(), 1, rng).col(0);
  v /= v.norm();
  return {std::move(v), layout};
}

/// Partial trace over an env_dim environment of a Haar pure state; env_dim
/// equal to the system dimension gives the Hilbert-Schmidt ensemble.
inline DensityOperator random_mixed(const HilbertLayout& layout, long env_dim,
                                    RandomSource& rng) {
  if (env_dim < 1) throw std::invalid_argument("random_mixed: env_dim < 1");
  const long d = layout.total_dim();
  // Tracing the environment out of |psi><psi| with psi = vec(G)/|G| is just
  // G G^dag / Tr, with G a d x env_dim Ginibre block.
  Matrix g = ginibre(d, env_dim, rng);
  Matrix w = g * g.adjoint();
  w /= w.trace().real();
  w = 0.5 * (w + w.adjoint().eval());
  return {std::move(w), layout};
}

}  // namespace qpid
