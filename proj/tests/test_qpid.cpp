#include <doctest.h>

#include <random>

#include "qpid/classical.hpp"
#include "qpid/qpid.hpp"
#include "qpid/states.hpp"

using namespace qpid;

namespace {

DensityOperator bell_pair(const std::string& l0 = "T",
                          const std::string& l1 = "A") {
  Vector v = Vector::Zero(4);
  v[0] = v[3] = 1.0 / std::sqrt(2.0);
  return PureState{v, HilbertLayout({2, 2}, {l0, l1})}.density();
}

ProbabilityTable random_table(std::mt19937_64& gen, int nt, int na, int nb) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ProbabilityTable t(nt, na, nb);
  double sum = 0;
  for (auto& x : t.p) {
    x = u(gen) * u(gen);
    sum += x;
  }
  for (auto& x : t.p) x /= sum;
  return t;
}

DensityOperator table_marginal_ta(const ProbabilityTable& t) {
  Matrix m = Matrix::Zero(t.nt * t.na, t.nt * t.na);
  for (int ti = 0; ti < t.nt; ++ti)
    for (int a = 0; a < t.na; ++a) {
      double s = 0;
      for (int b = 0; b < t.nb; ++b) s += t.at(ti, a, b);
      m(ti * t.na + a, ti * t.na + a) = s;
    }
  return {std::move(m), HilbertLayout({t.nt, t.na}, {"T", "A"})};
}

double max_field_diff(const QPIDResult& a, const QPIDResult& b) {
  double m = 0;
  for (auto f : {&QPIDResult::i_ta, &QPIDResult::i_tb, &QPIDResult::i_tab,
                 &QPIDResult::bq0, &QPIDResult::bq1, &QPIDResult::bq,
                 &QPIDResult::unique_a, &QPIDResult::unique_b,
                 &QPIDResult::redundant, &QPIDResult::synergy,
                 &QPIDResult::tri_information})
    m = std::max(m, std::abs(a.*f - b.*f));
  return m;
}

}  // namespace

TEST_CASE("quantum mutual information anchors") {
  CHECK(quantum_mutual_information(bell_pair(), {"T"}, {"A"}) ==
        doctest::Approx(2.0).epsilon(1e-10));

  RandomSource rng(21);
  HilbertLayout l({2, 3}, {"X", "Y"});
  auto rx = random_mixed(HilbertLayout({2}, {"X"}), 2, rng);
  auto ry = random_mixed(HilbertLayout({3}, {"Y"}), 3, rng);
  Matrix prod = Matrix::Zero(6, 6);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      prod.block(i * 3, j * 3, 3, 3) = rx.matrix(i, j) * ry.matrix;
  DensityOperator rho{prod, l};
  CHECK(quantum_mutual_information(rho, {"X"}, {"Y"}) ==
        doctest::Approx(0.0).epsilon(1e-10));

  auto psi1 = superposition_from_table(triadic_table()).density();
  CHECK(quantum_mutual_information(psi1, {"T"}, {"A"}) ==
        doctest::Approx(2.0).epsilon(1e-9));
  CHECK(quantum_mutual_information(psi1, {"T"}, {"B"}) ==
        doctest::Approx(2.0).epsilon(1e-9));
  CHECK(quantum_mutual_information(psi1, {"T"}, {"A", "B"}) ==
        doctest::Approx(4.0).epsilon(1e-9));
  CHECK_THROWS_AS(quantum_mutual_information(psi1, {"T"}, {"T"}),
                  std::invalid_argument);
}

TEST_CASE("measured mutual information") {
  // classical diagonal state from the triadic table, computational POVM
  auto t1 = triadic_table();
  auto rho_ta = table_marginal_ta(t1);
  std::vector<Matrix> proj;
  for (int a = 0; a < 4; ++a) {
    Matrix e = Matrix::Zero(4, 4);
    e(a, a) = 1.0;
    proj.push_back(e);
  }
  CHECK(measured_mutual_information(rho_ta, proj) ==
        doctest::Approx(1.0).epsilon(1e-10));

  // trivial POVM gains nothing
  std::vector<Matrix> trivial{Matrix::Identity(4, 4)};
  CHECK(measured_mutual_information(rho_ta, trivial) ==
        doctest::Approx(0.0).epsilon(1e-10));

  // Bell pair with Z projectors on A: post-measurement states are pure,
  // J = S(rho_T) = 1
  std::vector<Matrix> z;
  for (int k = 0; k < 2; ++k) {
    Matrix e = Matrix::Zero(2, 2);
    e(k, k) = 1.0;
    z.push_back(e);
  }
  CHECK(measured_mutual_information(bell_pair(), z) ==
        doctest::Approx(1.0).epsilon(1e-10));

  // not a POVM
  std::vector<Matrix> bad{Matrix::Identity(2, 2), Matrix::Identity(2, 2)};
  CHECK_THROWS_AS(measured_mutual_information(bell_pair(), bad),
                  std::invalid_argument);
}

TEST_CASE("J never exceeds I for random states and a fixed POVM") {
  RandomSource rng(22);
  HilbertLayout l({2, 2}, {"T", "A"});
  std::vector<Matrix> z;
  for (int k = 0; k < 2; ++k) {
    Matrix e = Matrix::Zero(2, 2);
    e(k, k) = 1.0;
    z.push_back(e);
  }
  for (int rep = 0; rep < 30; ++rep) {
    auto rho = random_mixed(l, 4, rng);
    const double j = measured_mutual_information(rho, z);
    const double i = quantum_mutual_information(rho, {"T"}, {"A"});
    CHECK(j >= -1e-10);
    CHECK(j <= i + 1e-9);
  }
}

TEST_CASE("conditional operator") {
  // vacuous conditioning on a product state
  RandomSource rng(23);
  auto rt = random_mixed(HilbertLayout({2}, {"T"}), 2, rng);
  Matrix proj_a = Matrix::Zero(2, 2);
  proj_a(0, 0) = 1.0;  // rho_A is a pure projector, rank deficient
  Matrix prod = Matrix::Zero(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      prod.block(i * 2, j * 2, 2, 2) = rt.matrix(i, j) * proj_a;
  DensityOperator rho{prod, HilbertLayout({2, 2}, {"T", "A"})};
  auto cond = conditional_state(rho, "A");
  Matrix expect = Matrix::Zero(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      expect.block(i * 2, j * 2, 2, 2) = rt.matrix(i, j) * proj_a;
  CHECK((cond.op.matrix - expect).norm() < 1e-10);

  // partial trace over T returns the support projector of rho_A
  auto tr = partial_trace(cond.op, {"A"});
  CHECK((tr.matrix - proj_a).norm() < 1e-9);

  // classical diagonal: entries are P(t|a)
  std::mt19937_64 gen(5);
  auto table = random_table(gen, 3, 2, 2);
  auto rho_ta = table_marginal_ta(table);
  auto ccond = conditional_state(rho_ta, "A");
  for (int t = 0; t < 3; ++t)
    for (int a = 0; a < 2; ++a) {
      const double expect_p = table.conditional_t_given_a(a)[t];
      CHECK(std::abs(ccond.op.matrix(t * 2 + a, t * 2 + a).real() -
                     expect_p) < 1e-10);
    }

  // Bell pair: largest eigenvalue 2 flags entanglement
  auto bcond = conditional_state(bell_pair(), "A");
  Eigen::SelfAdjointEigenSolver<Matrix> es(bcond.op.matrix,
                                           Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().maxCoeff() == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("z_operator on classical diagonals matches the overlap table") {
  std::mt19937_64 gen(17);
  for (auto variant : {Variant::star, Variant::plain}) {
    auto table = random_table(gen, 3, 2, 3);
    auto rho = diagonal_state(table);
    auto z = z_operator(rho, variant);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 3; ++b) {
        if (table.marginal_ab(a, b) <= 1e-15) continue;
        CHECK(std::abs(z.matrix(a * 3 + b, a * 3 + b).real() -
                       bhattacharyya_overlap(table, a, b)) < 1e-9);
      }
  }
}

TEST_CASE("z_operator of a full product state is the support projector") {
  RandomSource rng(29);
  auto rt = random_mixed(HilbertLayout({2}, {"T"}), 2, rng);
  auto ra = random_mixed(HilbertLayout({2}, {"A"}), 2, rng);
  auto rb = random_mixed(HilbertLayout({2}, {"B"}), 2, rng);
  Matrix m = Matrix::Zero(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      auto d = [](int x, int k) { return (x >> (2 - k)) & 1; };
      m(i, j) = rt.matrix(d(i, 0), d(j, 0)) * ra.matrix(d(i, 1), d(j, 1)) *
                rb.matrix(d(i, 2), d(j, 2));
    }
  DensityOperator rho{m, HilbertLayout({2, 2, 2}, {"T", "A", "B"})};
  auto z = z_operator(rho, Variant::star);
  // full-rank marginals: support projector is the identity on A x B
  CHECK((z.matrix - Matrix::Identity(4, 4)).norm() < 1e-8);
}

TEST_CASE("quantum bonus anchors") {
  auto psi1 = superposition_from_table(triadic_table()).density();
  auto psi2 = superposition_from_table(dyadic_table()).density();
  for (auto variant : {Variant::star, Variant::plain}) {
    auto b1 = quantum_bonus(psi1, variant);
    CHECK(std::abs(b1.bq) < 1e-9);
    auto b2 = quantum_bonus(psi2, variant);
    CHECK(b2.bq == doctest::Approx(2.0).epsilon(1e-9));
  }
  auto diag2 = diagonal_state(dyadic_table());
  auto bd = quantum_bonus(diag2, Variant::star);
  CHECK(bd.bq1 == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("qpid_decompose anchors") {
  auto psi1 = superposition_from_table(triadic_table()).density();
  auto psi2 = superposition_from_table(dyadic_table()).density();
  for (auto variant : {Variant::star, Variant::plain}) {
    auto r1 = qpid_decompose(psi1, variant);
    CHECK(std::abs(r1.unique_a) < 1e-9);
    CHECK(std::abs(r1.unique_b) < 1e-9);
    auto r2 = qpid_decompose(psi2, variant);
    CHECK(r2.unique_a == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(r2.unique_b == doctest::Approx(2.0).epsilon(1e-9));
  }

  // no information about an uncorrelated target
  RandomSource rng(31);
  auto rt = random_mixed(HilbertLayout({2}, {"T"}), 2, rng);
  auto rab = random_mixed(HilbertLayout({2, 2}, {"A", "B"}), 4, rng);
  Matrix m = Matrix::Zero(8, 8);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      m.block(i * 4, j * 4, 4, 4) = rt.matrix(i, j) * rab.matrix;
  DensityOperator rho{m, HilbertLayout({2, 2, 2}, {"T", "A", "B"})};
  auto r = qpid_decompose(rho, Variant::star);
  CHECK(std::abs(r.i_tab) < 1e-9);
  CHECK(std::abs(r.unique_a) < 1e-9);
  CHECK(std::abs(r.redundant) < 1e-9);
  CHECK(std::abs(r.synergy) < 1e-9);
}

TEST_CASE("local unitary invariance") {
  RandomSource rng(37);
  HilbertLayout l({2, 2, 2}, {"T", "A", "B"});
  for (int rep = 0; rep < 10; ++rep) {
    auto rho = random_mixed(l, 8, rng);
    Matrix u = kron(haar_unitary(2, rng),
                    kron(haar_unitary(2, rng), haar_unitary(2, rng)));
    DensityOperator rotated{Matrix(u * rho.matrix * u.adjoint()), l};
    for (auto variant : {Variant::star, Variant::plain}) {
      auto r1 = qpid_decompose(rho, variant);
      auto r2 = qpid_decompose(rotated, variant);
      CHECK(max_field_diff(r1, r2) < 1e-8);
    }
  }
}

TEST_CASE("classical reduction of diagonal states") {
  std::mt19937_64 gen(41);
  for (int rep = 0; rep < 10; ++rep) {
    auto table = random_table(gen, 3, 3, 2);
    auto classical = pid_decompose(table);
    auto rho = diagonal_state(table);
    for (auto variant : {Variant::star, Variant::plain}) {
      auto q = qpid_decompose(rho, variant);
      CHECK(std::abs(q.i_ta - classical.i_ta) < 1e-9);
      CHECK(std::abs(q.i_tb - classical.i_tb) < 1e-9);
      CHECK(std::abs(q.i_tab - classical.i_tab) < 1e-9);
      CHECK(std::abs(q.bq0 - classical.b0) < 1e-9);
      CHECK(std::abs(q.bq1 - classical.b1) < 1e-9);
      CHECK(std::abs(q.unique_a - classical.unique_a) < 1e-9);
      CHECK(std::abs(q.unique_b - classical.unique_b) < 1e-9);
      CHECK(std::abs(q.redundant - classical.redundant) < 1e-9);
      CHECK(std::abs(q.synergy - classical.synergy) < 1e-9);
    }
  }
}

TEST_CASE("swap symmetry between A and B") {
  RandomSource rng(43);
  HilbertLayout l({2, 2, 2}, {"T", "A", "B"});
  for (int rep = 0; rep < 10; ++rep) {
    auto rho = random_mixed(l, 8, rng);
    // swap the A and B factors
    Matrix sw = Matrix::Zero(8, 8);
    for (int t = 0; t < 2; ++t)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          sw((t * 2 + b) * 2 + a, (t * 2 + a) * 2 + b) = 1.0;
    DensityOperator swapped{Matrix(sw * rho.matrix * sw.adjoint()), l};
    auto r1 = qpid_decompose(rho, Variant::star);
    auto r2 = qpid_decompose(swapped, Variant::star);
    CHECK(std::abs(r1.unique_a - r2.unique_b) < 1e-10);
    CHECK(std::abs(r1.unique_b - r2.unique_a) < 1e-10);
    CHECK(std::abs(r1.bq - r2.bq) < 1e-10);
    CHECK(std::abs(r1.redundant - r2.redundant) < 1e-10);
    CHECK(std::abs(r1.synergy - r2.synergy) < 1e-10);
  }
}

TEST_CASE("algebraic identities of the decomposition") {
  RandomSource rng(47);
  HilbertLayout l({2, 2, 2}, {"T", "A", "B"});
  for (int rep = 0; rep < 20; ++rep) {
    auto rho = random_mixed(l, 8, rng);
    auto r = qpid_decompose(rho, Variant::star);
    CHECK(r.unique_a >= -1e-10);
    CHECK(r.unique_b >= -1e-10);
    CHECK(std::abs((r.unique_a - r.unique_b) - (r.i_ta - r.i_tb)) < 1e-12);
    CHECK(std::abs(r.i_ta - (r.unique_a + r.redundant)) < 1e-9);
    CHECK(std::abs(r.i_tab - (r.unique_a + r.unique_b + r.redundant +
                              r.synergy)) < 1e-9);
    CHECK(std::abs(r.tri_information -
                   (r.i_ta + r.i_tb - r.i_tab)) < 1e-12);
  }
}

TEST_CASE("star-variant Z is PSD on random mixed three-qubit states") {
  RandomSource rng(53);
  HilbertLayout l({2, 2, 2}, {"T", "A", "B"});
  for (int rep = 0; rep < 1000; ++rep) {
    auto rho = random_mixed(l, 8, rng);
    auto z = z_operator(rho, Variant::star);
    Eigen::SelfAdjointEigenSolver<Matrix> es(z.matrix,
                                             Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() >= -1e-9);
  }
}
