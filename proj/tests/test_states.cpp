#include <doctest.h>

#include <algorithm>
#include <vector>

#include "qpid/classical.hpp"
#include "qpid/linalg.hpp"
#include "qpid/qpid.hpp"
#include "qpid/states.hpp"

using namespace qpid;

TEST_CASE("superposition_from_table anchors") {
  auto psi1 = superposition_from_table(triadic_table());
  auto rho1 = psi1.density();
  CHECK(quantum_mutual_information(rho1, {"T"}, {"A"}) ==
        doctest::Approx(2.0).epsilon(1e-10));

  auto psi2 = superposition_from_table(dyadic_table());
  CHECK(quantum_mutual_information(psi2.density(), {"T"}, {"A", "B"}) ==
        doctest::Approx(4.0).epsilon(1e-10));

  ProbabilityTable single(2, 2, 2);
  single.at(1, 0, 1) = 1.0;
  auto basis = superposition_from_table(single);
  CHECK(von_neumann_entropy(partial_trace(basis.density(), {"T"})) ==
        doctest::Approx(0.0).epsilon(1e-12));

  ProbabilityTable nonuniform(2, 1, 1);
  nonuniform.at(0, 0, 0) = 0.3;
  nonuniform.at(1, 0, 0) = 0.7;
  CHECK_THROWS_AS(superposition_from_table(nonuniform),
                  std::invalid_argument);
}

TEST_CASE("haar_unitary is unitary with unit columns") {
  RandomSource rng(1);
  auto u1 = haar_unitary(1, rng);
  CHECK(std::abs(std::abs(u1(0, 0)) - 1.0) < 1e-12);

  auto u = haar_unitary(7, rng);
  CHECK((u.adjoint() * u - Matrix::Identity(7, 7)).norm() < 1e-10);
  for (int j = 0; j < 7; ++j)
    CHECK(std::abs(u.col(j).norm() - 1.0) < 1e-12);
}

TEST_CASE("haar_unitary first-moment |U11|^2 = 1/d") {
  RandomSource rng(2);
  double acc = 0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    auto u = haar_unitary(4, rng);
    acc += std::norm(u(0, 0));
  }
  CHECK(std::abs(acc / draws - 0.25) < 0.01);
}

TEST_CASE("scrambled_state reductions") {
  for (std::uint64_t seed : {3u, 4u, 5u}) {
    RandomSource rng(seed);
    HilbertLayout ab({6, 6}, {"A", "B"});
    auto psi = scrambled_state(4, ab, rng);
    auto rho = psi.density();
    auto rho_t = partial_trace(rho, {"T"});
    CHECK((rho_t.matrix - 0.25 * Matrix::Identity(4, 4)).norm() < 1e-10);
    CHECK(von_neumann_entropy(rho) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(quantum_mutual_information(rho, {"T"}, {"A", "B"}) ==
          doctest::Approx(4.0).epsilon(1e-9));
  }
  RandomSource rng(9);
  HilbertLayout tiny({2}, {"A"});
  CHECK_THROWS_AS(scrambled_state(4, tiny, rng), std::invalid_argument);
}

TEST_CASE("random_pure is normalized with the Haar mean purity") {
  RandomSource rng(6);
  HilbertLayout l({2, 2}, {"A", "B"});
  double acc = 0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    auto psi = random_pure(l, rng);
    CHECK(std::abs(psi.amplitudes.norm() - 1.0) < 1e-12);
    auto ra = partial_trace(psi.density(), {"A"}).matrix;
    acc += (ra * ra).trace().real();
  }
  // E[Tr rho_A^2] = (d_A + d_B) / (d_A d_B + 1) = 4/5 for two qubits
  CHECK(std::abs(acc / draws - 0.8) < 0.01);

  auto psi = random_pure(l, rng);
  CHECK(von_neumann_entropy(psi.density()) ==
        doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("random_mixed basics") {
  RandomSource rng(7);
  HilbertLayout l({2, 2}, {"A", "B"});
  auto pure = random_mixed(l, 1, rng);
  CHECK(von_neumann_entropy(pure) == doctest::Approx(0.0).epsilon(1e-9));
  auto rho = random_mixed(l, 4, rng);
  CHECK(std::abs(rho.matrix.trace().real() - 1.0) < 1e-12);
}

TEST_CASE("random_mixed spectrum matches the dense purification route") {
  // dual route: random_mixed draws a Ginibre block; the oracle explicitly
  // builds a Haar pure state on system x environment and traces it out
  RandomSource rng(8);
  RandomSource rng_oracle(1008);
  HilbertLayout sys({4}, {"S"});
  HilbertLayout joint({4, 4}, {"S", "E"});
  const int draws = 4000;
  const int bins = 8;
  std::vector<double> h1(bins, 0.0), h2(bins, 0.0);
  auto bin_of = [&](double lambda) {
    int b = static_cast<int>(lambda * bins);
    return std::clamp(b, 0, bins - 1);
  };
  for (int i = 0; i < draws; ++i) {
    auto rho = random_mixed(sys, 4, rng);
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix,
                                             Eigen::EigenvaluesOnly);
    for (double l : es.eigenvalues()) h1[bin_of(l)] += 1.0;

    auto psi = random_pure(joint, rng_oracle);
    auto red = partial_trace(psi.density(), {"S"});
    Eigen::SelfAdjointEigenSolver<Matrix> es2(red.matrix,
                                              Eigen::EigenvaluesOnly);
    for (double l : es2.eigenvalues()) h2[bin_of(l)] += 1.0;
  }
  double tv = 0;
  for (int b = 0; b < bins; ++b)
    tv += std::abs(h1[b] - h2[b]) / (4.0 * draws);
  CHECK(tv / 2.0 < 0.05);
}

TEST_CASE("generators are deterministic per seed") {
  RandomSource a(1234), b(1234), c(4321);
  HilbertLayout l({3, 3}, {"A", "B"});
  auto pa = random_pure(l, a);
  auto pb = random_pure(l, b);
  auto pc = random_pure(l, c);
  CHECK((pa.amplitudes - pb.amplitudes).norm() == 0.0);
  CHECK((pa.amplitudes - pc.amplitudes).norm() != 0.0);

  // derived sub-streams are reproducible and distinct
  auto d0 = RandomSource(77).derive(0);
  auto d0b = RandomSource(77).derive(0);
  auto d1 = RandomSource(77).derive(1);
  CHECK(d0.seed() == d0b.seed());
  CHECK(d0.seed() != d1.seed());
}
