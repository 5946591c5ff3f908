#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "rankone/errors.hpp"
#include "rankone/perturbation.hpp"
#include "rankone/presets.hpp"

using namespace rankone;

namespace {

Eigen::VectorXcd random_vector(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  Eigen::VectorXcd v(n);
  for (int k = 0; k < n; ++k) v(k) = cplx(box(rng), box(rng));
  return v;
}

}  // namespace

TEST_CASE("rank one inverse") {
  SUBCASE("a = b with squared norm one half") {
    Eigen::VectorXcd a(2);
    a << 0.5, 0.5;  // |a|^2 = 1/2, determinant d = 1/2
    const Eigen::MatrixXcd inv = rank_one_inverse(a, a);
    const Eigen::MatrixXcd want =
        Eigen::MatrixXcd::Identity(2, 2) + 2.0 * a * a.adjoint();
    CHECK((inv - want).norm() < 1e-15);
  }
  SUBCASE("b = 0 gives the identity") {
    Eigen::VectorXcd a(3), b = Eigen::VectorXcd::Zero(3);
    a << 1.0, 2.0, 3.0;
    CHECK((rank_one_inverse(a, b) - Eigen::MatrixXcd::Identity(3, 3)).norm() == 0.0);
  }
  SUBCASE("random pair composes to the identity") {
    std::mt19937_64 rng(31);
    const Eigen::VectorXcd a = random_vector(rng, 5);
    const Eigen::VectorXcd b = 0.3 * random_vector(rng, 5);
    const Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(5, 5) - a * b.adjoint();
    CHECK((rank_one_inverse(a, b) * m - Eigen::MatrixXcd::Identity(5, 5)).norm() < 1e-13);
  }
  SUBCASE("vanishing determinant throws") {
    Eigen::VectorXcd a(1);
    a << 1.0;  // d = 1 - 1 = 0
    CHECK_THROWS_AS(rank_one_inverse(a, a), SingularOperatorError);
  }
}

TEST_CASE("perturbed multiplication matrices") {
  SUBCASE("single atom") {
    const OperatorMatrix A =
        build_A_alpha({Measure::point_mass(Support::line, 0.0), 3.0});
    REQUIRE(A.mat.rows() == 1);
    CHECK(std::abs(A.mat(0, 0) - 3.0) < 1e-15);
  }
  SUBCASE("two symmetric atoms, alpha = 2") {
    const OperatorMatrix A = build_A_alpha({two_atom_line(), 2.0});
    Eigen::MatrixXcd want(2, 2);
    want << 0.0, 1.0, 1.0, 2.0;
    CHECK((A.mat - want).norm() < 1e-14);
    const Eigen::VectorXcd ev =
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(A.mat).eigenvalues();
    // characteristic polynomial x^2 - 2x - 1, roots 1 +- sqrt(2)
    const double lo = std::min(ev(0).real(), ev(1).real());
    const double hi = std::max(ev(0).real(), ev(1).real());
    CHECK(lo == doctest::Approx(1.0 - std::sqrt(2.0)).epsilon(1e-12));
    CHECK(hi == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-12));
  }
  SUBCASE("unimodular parameter gives a unitary matrix") {
    const Measure mu(Support::circle, {{0.0, 0.5}, {pi, 0.5}});
    const OperatorMatrix U = build_U_param({mu, cplx(-1.0, 0.0)});
    CHECK((U.mat.adjoint() * U.mat - Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-13);
    CHECK(std::abs(std::abs(U.mat.determinant()) - 1.0) < 1e-13);
  }
  SUBCASE("interior parameter gives a strict contraction") {
    std::mt19937_64 rng(41);
    const Measure mu = random_atomic_circle(rng, 5);
    const OperatorMatrix U = build_U_param({mu, cplx(0.3, 0.4)});
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(U.mat);
    CHECK(svd.singularValues()(0) <= 1.0 + 1e-13);
  }
}

TEST_CASE("perturbed resolvent") {
  SUBCASE("alpha = 0 is the diagonal resolvent") {
    const Measure mu = three_atom_line();
    const SelfAdjointFamily fam{mu, 0.0};
    Eigen::VectorXcd f(3);
    f << 1.0, 2.0, 3.0;
    const cplx lambda(0.0, 1.0);
    const Eigen::VectorXcd got = resolvent_perturbed(fam, f, lambda);
    for (int k = 0; k < 3; ++k) {
      const cplx want = f(k) / (mu.atoms()[static_cast<size_t>(k)].position - lambda);
      CHECK(std::abs(got(k) - want) < 1e-14);
    }
  }
  SUBCASE("single atom scalar solve") {
    const SelfAdjointFamily fam{Measure::point_mass(Support::line, 0.0), 1.0};
    Eigen::VectorXcd f(1);
    f << cplx(2.0, 0.0);
    const Eigen::VectorXcd got = resolvent_perturbed(fam, f, cplx(0.0, 1.0));
    CHECK(std::abs(got(0) - 2.0 / (1.0 - iu)) < 1e-14);
  }
  SUBCASE("matches a dense solve") {
    std::mt19937_64 rng(43);
    const Measure mu = random_atomic_line(rng, 5);
    const SelfAdjointFamily fam{mu, 0.7};
    const Eigen::VectorXcd f = random_vector(rng, 5);
    const cplx lambda(0.3, 0.8);
    const OperatorMatrix A = build_A_alpha(fam);
    const Eigen::MatrixXcd shifted =
        A.mat - lambda * Eigen::MatrixXcd::Identity(5, 5);
    const Eigen::VectorXcd want = shifted.lu().solve(f);
    CHECK((resolvent_perturbed(fam, f, lambda) - want).norm() < 1e-12);
  }
  SUBCASE("eigenvalue hit throws") {
    const SelfAdjointFamily fam{Measure::point_mass(Support::line, 0.0), 1.0};
    Eigen::VectorXcd f(1);
    f << 1.0;
    CHECK_THROWS_AS(resolvent_perturbed(fam, f, cplx(1.0, 0.0)), PoleError);
  }
}

TEST_CASE("pointwise resolvent-function move") {
  SUBCASE("point mass moves to a shifted point mass") {
    // F(lambda) = -1/lambda turns into -1/(lambda - alpha)
    for (cplx lambda : {cplx(0.0, 2.0), cplx(1.5, 0.5), cplx(-2.0, 1.0)}) {
      const cplx F = -1.0 / lambda;
      CHECK(std::abs(aronszajn_krein(F, 1.0) - (-1.0 / (lambda - 1.0))) < 1e-14);
    }
  }
  SUBCASE("alpha = 0 is the identity") {
    CHECK(aronszajn_krein(cplx(0.3, 0.7), cplx(0.0)) == cplx(0.3, 0.7));
  }
  SUBCASE("imaginary part transforms by the modulus square") {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> box(-2.0, 2.0);
    for (int k = 0; k < 20; ++k) {
      const cplx F(box(rng), std::abs(box(rng)) + 0.1);
      const double alpha = box(rng);
      const cplx Fa = aronszajn_krein(F, alpha);
      CHECK(Fa.imag() ==
            doctest::Approx(F.imag() / std::norm(1.0 + alpha * F)).epsilon(1e-12));
    }
  }
}

TEST_CASE("spectral measure of the perturbed operator") {
  SUBCASE("single atom moves by alpha") {
    const Measure out =
        spectral_measure_perturbed({Measure::point_mass(Support::line, 0.0), 3.0});
    REQUIRE(out.atoms().size() == 1);
    CHECK(out.atoms()[0].position == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(out.atoms()[0].weight == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("two symmetric atoms, alpha = 1: frozen golden ratio spectrum") {
    const Measure out = spectral_measure_perturbed({two_atom_line(), 1.0});
    REQUIRE(out.atoms().size() == 2);
    CHECK(out.atoms()[0].position ==
          doctest::Approx(-0.6180339887498948).epsilon(1e-13));
    CHECK(out.atoms()[1].position ==
          doctest::Approx(1.6180339887498949).epsilon(1e-13));
    CHECK(out.atoms()[0].weight ==
          doctest::Approx(0.2763932022500210).epsilon(1e-11));
    CHECK(out.atoms()[1].weight ==
          doctest::Approx(0.7236067977499790).epsilon(1e-11));
  }
  SUBCASE("two symmetric atoms, alpha = 2") {
    const Measure out = spectral_measure_perturbed({two_atom_line(), 2.0});
    REQUIRE(out.atoms().size() == 2);
    CHECK(out.atoms()[0].position ==
          doctest::Approx(1.0 - std::sqrt(2.0)).epsilon(1e-13));
    CHECK(out.atoms()[1].position ==
          doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-13));
    // weights (2 -+ sqrt 2)/4 from the eigenvectors of [[0,1],[1,2]]
    CHECK(out.atoms()[0].weight ==
          doctest::Approx((2.0 - std::sqrt(2.0)) / 4.0).epsilon(1e-11));
    CHECK(out.atoms()[1].weight ==
          doctest::Approx((2.0 + std::sqrt(2.0)) / 4.0).epsilon(1e-11));
    CHECK(out.mass() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("unitary case stays on the circle") {
    std::mt19937_64 rng(53);
    const Measure mu = random_atomic_circle(rng, 6);
    const cplx alpha = random_unimodular(rng);
    const Measure out = spectral_measure_perturbed(UnitaryFamily{mu, alpha});
    CHECK(out.support() == Support::circle);
    CHECK(out.mass() == doctest::Approx(1.0).epsilon(1e-12));
    // positions are angles; nothing to check beyond the weight budget and
    // that the count survived
    CHECK(out.atoms().size() == 6);
  }
}

TEST_CASE("agreement of the pointwise move with the eigen route") {
  std::mt19937_64 rng(59);
  for (double alpha : {1.0, -1.0, 0.5}) {
    const Measure mu = random_atomic_line(rng, 8);
    const Measure mu_alpha = spectral_measure_perturbed({mu, alpha});
    for (int k = 0; k < 20; ++k) {
      std::uniform_real_distribution<double> box(-4.0, 4.0);
      const cplx lambda(box(rng), box(rng) >= 0 ? box(rng) + 0.1 : box(rng) - 0.1);
      const cplx direct = cauchy_line(mu_alpha, lambda);
      const cplx moved = aronszajn_krein(cauchy_line(mu, lambda), alpha);
      CHECK(std::abs(direct - moved) <= 1e-10 * std::abs(direct));
    }
  }
}

TEST_CASE("eigenvalues interlace the atoms and distinct parameters never collide") {
  const Measure mu = three_atom_line();
  const Measure m1 = spectral_measure_perturbed({mu, 1.0});
  const Measure m2 = spectral_measure_perturbed({mu, 2.0});

  auto positions = [](const Measure& m) {
    std::vector<double> p;
    for (const Atom& a : m.atoms()) p.push_back(a.position);
    std::sort(p.begin(), p.end());
    return p;
  };
  const std::vector<double> base = positions(mu);
  for (const Measure* m : {&m1, &m2}) {
    const std::vector<double> ev = positions(*m);
    REQUIRE(ev.size() == 3);
    // positive coupling pushes one eigenvalue into each gap and one above
    CHECK(ev[0] > base[0]);
    CHECK(ev[0] < base[1]);
    CHECK(ev[1] > base[1]);
    CHECK(ev[1] < base[2]);
    CHECK(ev[2] > base[2]);
  }
  for (double e1 : positions(m1))
    for (double e2 : positions(m2)) CHECK(std::abs(e1 - e2) > 1e-6);
}

TEST_CASE("constant vector stays cyclic for the perturbed matrix") {
  const OperatorMatrix A = build_A_alpha({three_atom_line(), 1.0});
  const Eigen::VectorXcd phi = constant_coords(A.source);
  Eigen::MatrixXcd krylov(3, 3);
  krylov.col(0) = phi;
  krylov.col(1) = A.mat * phi;
  krylov.col(2) = A.mat * krylov.col(1);
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(krylov);
  CHECK(svd.singularValues()(2) > 1e-8);
}

TEST_CASE("defect pieces of the contractive family") {
  SUBCASE("factors") {
    const Measure mu = two_atom_circle();
    CHECK(defect_data({mu, cplx(0.0)}).defect_norm_factor == 1.0);
    CHECK(defect_data({mu, cplx(0.5)}).defect_norm_factor ==
          doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-15));
    CHECK(defect_data({mu, cplx(1.0)}).defect_norm_factor == 0.0);
  }
  SUBCASE("rank one identity for the defect operator") {
    std::mt19937_64 rng(61);
    const Measure mu = random_atomic_circle(rng, 3);
    const cplx gamma(0.3, 0.4);
    const UnitaryFamily fam{mu, gamma};
    const DefectData d = defect_data(fam);
    const OperatorMatrix U = build_U_param(fam);
    const Eigen::MatrixXcd lhs =
        Eigen::MatrixXcd::Identity(3, 3) - U.mat.adjoint() * U.mat;
    const Eigen::MatrixXcd rhs =
        (1.0 - std::norm(gamma)) * d.b1 * d.b1.adjoint();
    CHECK((lhs - rhs).norm() < 1e-13);
    // and the adjoint side lives on b
    const Eigen::MatrixXcd lhs2 =
        Eigen::MatrixXcd::Identity(3, 3) - U.mat * U.mat.adjoint();
    const Eigen::MatrixXcd rhs2 =
        (1.0 - std::norm(gamma)) * d.b * d.b.adjoint();
    CHECK((lhs2 - rhs2).norm() < 1e-13);
  }
}
