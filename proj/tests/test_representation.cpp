#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "rankone/errors.hpp"
#include "rankone/perturbation.hpp"
#include "rankone/presets.hpp"
#include "rankone/representation.hpp"

using namespace rankone;

namespace {

Eigen::MatrixXcd multiplication_diag(const WeightedPoints& pts) {
  Eigen::VectorXcd d(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t k = 0; k < pts.size(); ++k)
    d(static_cast<Eigen::Index>(k)) = pts.points[k];
  return d.asDiagonal();
}

double unitarity_residual(const Eigen::MatrixXcd& V) {
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(V.cols(), V.cols());
  return std::max((V.adjoint() * V - I).norm(), (V * V.adjoint() - I).norm());
}

}  // namespace

TEST_CASE("one dimensional representation is the unit scalar") {
  const Measure mu = Measure::point_mass(Support::line, 0.0);
  const Measure mu_alpha = spectral_measure_perturbed({mu, 3.0});
  const RepresentationOperator V = build_V_alpha(mu, mu_alpha, 3.0);
  REQUIRE(V.matrix.mat.rows() == 1);
  CHECK(std::abs(V.matrix.mat(0, 0) - 1.0) < 1e-14);
}

TEST_CASE("line representation of the two atom pair") {
  const Measure mu = two_atom_line();
  const Measure mu_alpha = spectral_measure_perturbed({mu, 2.0});
  const RepresentationOperator V = build_V_alpha(mu, mu_alpha, 2.0);

  CHECK(unitarity_residual(V.matrix.mat) < 1e-12);

  // constants map to constants
  const Samples image = apply(V.matrix, ones_samples(mu));
  for (const cplx& v : image) CHECK(std::abs(v - 1.0) < 1e-12);

  // V A_alpha = M_s V with M_s multiplication on the perturbed side
  const OperatorMatrix A = build_A_alpha({mu, 2.0});
  const Eigen::MatrixXcd Ms = multiplication_diag(V.matrix.target);
  CHECK((V.matrix.mat * A.mat - Ms * V.matrix.mat).norm() < 1e-12);
}

TEST_CASE("boundary value construction agrees with the kernel formula") {
  const Measure mu = two_atom_line();
  const Measure mu_alpha = spectral_measure_perturbed({mu, 2.0});
  const RepresentationOperator direct = build_V_alpha(mu, mu_alpha, 2.0);
  const RepresentationOperator via_boundary =
      alternative_representation(mu, mu_alpha, 2.0, BoundarySide::plus);
  CHECK((direct.matrix.mat - via_boundary.matrix.mat).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(via_boundary.construction == VConstruction::alternative_T);
}

TEST_CASE("circle representation") {
  SUBCASE("parameter one degenerates to the identity") {
    const Measure mu = two_atom_circle();
    const RepresentationOperator V = build_V_gamma_circle(mu, mu, cplx(1.0));
    CHECK((V.matrix.mat - Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-15);
  }
  SUBCASE("two atom pair at alpha = -1") {
    const Measure mu = two_atom_circle();
    const cplx alpha(-1.0, 0.0);
    const Measure mu_alpha = spectral_measure_perturbed(UnitaryFamily{mu, alpha});
    const RepresentationOperator V = build_V_gamma_circle(mu, mu_alpha, alpha);
    CHECK(unitarity_residual(V.matrix.mat) < 1e-12);

    const Samples image = apply(V.matrix, ones_samples(mu));
    for (const cplx& v : image) CHECK(std::abs(v - 1.0) < 1e-12);

    const OperatorMatrix U = build_U_param({mu, alpha});
    const Eigen::MatrixXcd Mz = multiplication_diag(V.matrix.target);
    CHECK((V.matrix.mat * U.mat - Mz * V.matrix.mat).norm() < 1e-12);
  }
  SUBCASE("random atomic pairs stay unitary") {
    std::mt19937_64 rng(67);
    for (int k = 0; k < 5; ++k) {
      const Measure mu = random_atomic_circle(rng, 8);
      const cplx alpha = random_unimodular(rng);
      const Measure mu_alpha =
          spectral_measure_perturbed(UnitaryFamily{mu, alpha});
      const RepresentationOperator V = build_V_gamma_circle(mu, mu_alpha, alpha);
      CHECK(unitarity_residual(V.matrix.mat) < 1e-10);
    }
  }
}

TEST_CASE("bilinear form of the representation operator") {
  const Measure mu = two_atom_line();
  const double alpha = 1.0;
  const Measure mu_alpha = spectral_measure_perturbed({mu, alpha});
  const RepresentationOperator V = build_V_alpha(mu, mu_alpha, alpha);

  std::mt19937_64 rng(71);
  const Samples f = random_samples(rng, mu);
  const Samples g = random_samples(rng, mu_alpha);
  const Samples Vf = apply(V.matrix, f);

  const WeightedPoints src = mu.discretize();
  const WeightedPoints tgt = mu_alpha.discretize();
  cplx pairing(0.0), direct(0.0);
  double norm_f = 0.0, norm_g = 0.0;
  for (std::size_t i = 0; i < tgt.size(); ++i) {
    pairing += Vf[i] * std::conj(g[i]) * tgt.weights[i];
    norm_g += std::norm(g[i]) * tgt.weights[i];
    for (std::size_t j = 0; j < src.size(); ++j) {
      direct += alpha * f[j] * std::conj(g[i]) /
                (tgt.coords[i] - src.coords[j]) * src.weights[j] * tgt.weights[i];
    }
  }
  for (std::size_t j = 0; j < src.size(); ++j)
    norm_f += std::norm(f[j]) * src.weights[j];

  CHECK(std::abs(pairing - direct) < 1e-12);
  CHECK(std::abs(pairing) <= std::sqrt(norm_f) * std::sqrt(norm_g) + 1e-12);
}

TEST_CASE("rigidity reconstruction") {
  const Measure mu = two_atom_line();
  const Measure mu_alpha = spectral_measure_perturbed({mu, 2.0});
  const RepresentationOperator V = build_V_alpha(mu, mu_alpha, 2.0);

  SUBCASE("already-normalized target gives unit h") {
    const RigidityResult r = rigidity_reconstruct(mu, mu_alpha, 2.0, V.matrix);
    for (double h : r.h) CHECK(h == doctest::Approx(1.0).epsilon(1e-10));
    REQUIRE(r.mu_alpha.atoms().size() == 2);
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(r.mu_alpha.atoms()[k].weight ==
            doctest::Approx(mu_alpha.atoms()[k].weight).epsilon(1e-10));
    }
  }
  SUBCASE("uniformly scaled target weights") {
    const Measure nu = mu_alpha.scaled(4.0);
    // V is built against nu, so its rows pick up the 1/2 factors
    const RepresentationOperator W = build_V_alpha(mu, nu, 2.0);
    const RigidityResult r = rigidity_reconstruct(mu, nu, 2.0, W.matrix);
    for (double h : r.h) CHECK(h * h == doctest::Approx(0.25).epsilon(1e-10));
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(r.mu_alpha.atoms()[k].weight ==
            doctest::Approx(mu_alpha.atoms()[k].weight).epsilon(1e-10));
    }
  }
  SUBCASE("a single misweighted atom is repaired") {
    std::vector<Atom> atoms = mu_alpha.atoms();
    atoms[0].weight *= 2.0;
    const Measure nu(Support::line, atoms);
    const RepresentationOperator W = build_V_alpha(mu, nu, 2.0);
    const RigidityResult r = rigidity_reconstruct(mu, nu, 2.0, W.matrix);
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(r.mu_alpha.atoms()[k].weight ==
            doctest::Approx(mu_alpha.atoms()[k].weight).epsilon(1e-10));
    }
  }
  SUBCASE("single-atom base is rejected") {
    const Measure one = Measure::point_mass(Support::line, 0.0);
    const Measure one_alpha = spectral_measure_perturbed({one, 1.0});
    const RepresentationOperator W = build_V_alpha(one, one_alpha, 1.0);
    CHECK_THROWS_AS(rigidity_reconstruct(one, one_alpha, 1.0, W.matrix),
                    DomainError);
  }
}

TEST_CASE("support collision is rejected") {
  const Measure mu = two_atom_line();
  CHECK_THROWS_AS(build_V_alpha(mu, mu, 2.0), DomainError);
}
