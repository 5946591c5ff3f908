#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "rankone/model.hpp"
#include "rankone/perturbation.hpp"
#include "rankone/presets.hpp"

using namespace rankone;

namespace {

ModelVectorSNF random_member(std::mt19937_64& rng,
                             const CharacteristicFunction& cf) {
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  ModelVectorSNF raw;
  raw.g1.resize(static_cast<size_t>(cf.size()));
  raw.g2.resize(static_cast<size_t>(cf.size()));
  for (int j = 0; j < cf.size(); ++j) {
    raw.g1[static_cast<size_t>(j)] = cplx(box(rng), box(rng));
    raw.g2[static_cast<size_t>(j)] = cplx(box(rng), box(rng));
  }
  return snf_project(raw, cf);
}

double vec_gap(const ModelVectorSNF& a, const ModelVectorSNF& b) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.g1.size(); ++j) {
    worst = std::max(worst, std::abs(a.g1[j] - b.g1[j]));
    worst = std::max(worst, std::abs(a.g2[j] - b.g2[j]));
  }
  return worst;
}

}  // namespace

TEST_CASE("moebius link between family members") {
  std::mt19937_64 rng(103);
  SUBCASE("gamma zero is the identity") {
    const cplx t(0.3, -0.5);
    CHECK(fractional_relation(t, cplx(0.0)) == t);
  }
  SUBCASE("theta zero maps to minus gamma") {
    const cplx g(0.2, 0.6);
    CHECK(std::abs(fractional_relation(cplx(0.0), g) + g) < 1e-15);
  }
  SUBCASE("round trips") {
    for (int k = 0; k < 25; ++k) {
      const cplx t = random_point_in_disc(rng);
      const cplx g = random_gamma(rng);
      const cplx fwd = fractional_relation(t, g);
      CHECK(std::abs(fractional_relation_inverse(fwd, g) - t) < 1e-13);
      CHECK(std::abs(fwd) < 1.0);
    }
  }
}

TEST_CASE("characteristic values from the measure") {
  std::mt19937_64 rng(107);
  SUBCASE("value at the origin is minus gamma") {
    for (int k = 0; k < 10; ++k) {
      const Measure mu = random_atomic_circle(rng, 5);
      const cplx g = random_gamma(rng);
      CHECK(std::abs(theta_from_measure(mu, g, cplx(0.0)) + g) < 1e-12);
    }
  }
  SUBCASE("arc length gives the constant minus gamma") {
    const Measure leb = lebesgue_grid(1 << 8);
    for (int k = 0; k < 10; ++k) {
      const cplx lambda = random_point_in_disc(rng, 0.9);
      CHECK(std::abs(theta_from_measure(leb, cplx(0.0), lambda)) < 1e-12);
      CHECK(std::abs(theta_from_measure(leb, cplx(0.4, -0.2), lambda) -
                     cplx(-0.4, 0.2)) < 1e-12);
    }
  }
  SUBCASE("point mass gives a rotation of the identity") {
    const double phase = 0.7;
    const Measure mu = Measure::point_mass(Support::circle, phase);
    for (int k = 0; k < 10; ++k) {
      const cplx lambda = random_point_in_disc(rng, 0.95);
      const cplx want = std::exp(-iu * phase) * lambda;
      CHECK(std::abs(theta_from_measure(mu, cplx(0.0), lambda) - want) < 1e-13);
    }
  }
}

TEST_CASE("contraction route matches the measure route") {
  SUBCASE("one atom in closed form") {
    const Measure mu = Measure::point_mass(Support::circle, 0.0);
    const cplx g(0.5, 0.0);
    const UnitaryFamily fam{mu, g};
    const OperatorMatrix U = build_U_param(fam);
    const DefectData d = defect_data(fam);
    for (const cplx z : {cplx(0.0), cplx(0.3, 0.2), cplx(-0.6, 0.1)}) {
      const cplx via_matrix = char_function_from_contraction(U.mat, d.b, d.b1, z);
      const cplx closed = (z - g) / (1.0 - std::conj(g) * z);
      CHECK(std::abs(via_matrix - closed) < 1e-13);
      CHECK(std::abs(theta_from_measure(mu, g, z) - closed) < 1e-13);
    }
  }
  SUBCASE("random atomic base") {
    std::mt19937_64 rng(109);
    const Measure mu = random_atomic_circle(rng, 4);
    const cplx g(0.2, -0.3);
    const UnitaryFamily fam{mu, g};
    const OperatorMatrix U = build_U_param(fam);
    const DefectData d = defect_data(fam);
    CHECK(std::abs(char_function_from_contraction(U.mat, d.b, d.b1, cplx(0.0)) +
                   g) < 1e-12);
    for (int k = 0; k < 10; ++k) {
      const cplx z = random_point_in_disc(rng, 0.9);
      const cplx a = char_function_from_contraction(U.mat, d.b, d.b1, z);
      const cplx b = theta_from_measure(mu, g, z);
      CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(b)));
    }
  }
}

TEST_CASE("boundary samples of the characteristic function") {
  SUBCASE("atomic base is inner, bit for bit") {
    const CharacteristicFunction cf =
        char_function_boundary(three_atom_circle(), cplx(0.4, 0.0), 1 << 10);
    CHECK(cf.inner_score() == 0.0);
    for (int j = 0; j < cf.size(); ++j) {
      CHECK(std::abs(cf.theta[static_cast<size_t>(j)]) <= 1.0 + 1e-9);
    }
  }
  SUBCASE("arc length carries constant defect") {
    const cplx g(0.3, 0.1);
    const CharacteristicFunction cf =
        char_function_boundary(lebesgue_grid(1 << 8), g, 1 << 8);
    const double want = std::sqrt(1.0 - std::norm(g));
    for (int j = 0; j < cf.size(); ++j) {
      CHECK(std::abs(cf.theta[static_cast<size_t>(j)] + g) < 1e-10);
      CHECK(cf.delta[static_cast<size_t>(j)] ==
            doctest::Approx(want).epsilon(1e-10));
    }
  }
}

TEST_CASE("defect vectors of the model space") {
  SUBCASE("arc length, gamma zero") {
    const CharacteristicFunction cf =
        char_function_boundary(lebesgue_grid(1 << 8), cplx(0.0), 1 << 8);
    const DefectVectorsModel d = defect_vectors_model(cf);
    for (int j = 0; j < cf.size(); ++j) {
      const auto uj = static_cast<size_t>(j);
      CHECK(std::abs(d.c.g1[uj] - 1.0) < 1e-10);
      CHECK(std::abs(d.c.g2[uj]) < 1e-10);
      CHECK(std::abs(d.c1.g1[uj]) < 1e-10);
      CHECK(std::abs(d.c1.g2[uj] - std::conj(cf.grid.point(j))) < 1e-10);
    }
  }
  SUBCASE("unit model norms") {
    const cplx g(0.5, -0.2);
    const CharacteristicFunction leb =
        char_function_boundary(lebesgue_grid(1 << 8), g, 1 << 8);
    const DefectVectorsModel d = defect_vectors_model(leb);
    CHECK(model_norm(leb.grid, d.c) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(model_norm(leb.grid, d.c1) == doctest::Approx(1.0).epsilon(1e-8));

    const CharacteristicFunction inner =
        char_function_boundary(three_atom_circle(), g, 1 << 10);
    const DefectVectorsModel di = defect_vectors_model(inner);
    // bottom stories vanish with the defect
    for (const cplx& v : di.c.g2) CHECK(v == cplx(0.0));
    CHECK(model_norm(inner.grid, di.c) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(model_norm(inner.grid, di.c1) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("projection onto the model space") {
  const cplx g(0.3, 0.1);
  const CharacteristicFunction cf =
      char_function_boundary(lebesgue_grid(1 << 8), g, 1 << 8);
  std::mt19937_64 rng(113);

  SUBCASE("idempotence") {
    const ModelVectorSNF v = random_member(rng, cf);
    const ModelVectorSNF again = snf_project(v, cf);
    CHECK(vec_gap(v, again) < 1e-10);
    CHECK(snf_membership_residual(v, cf) < 1e-10);
  }
  SUBCASE("the shifted range projects to zero") {
    // (theta, delta) * h for an analytic polynomial h lies in the removed part
    ModelVectorSNF raw;
    raw.g1.resize(static_cast<size_t>(cf.size()));
    raw.g2.resize(static_cast<size_t>(cf.size()));
    for (int j = 0; j < cf.size(); ++j) {
      const auto uj = static_cast<size_t>(j);
      const cplx h = 1.0 + cf.grid.point(j);
      raw.g1[uj] = cf.theta[uj] * h;
      raw.g2[uj] = cf.delta[uj] * h;
    }
    const ModelVectorSNF proj = snf_project(raw, cf);
    CHECK(model_norm(cf.grid, proj) < 1e-9);
  }
}

TEST_CASE("compressed shift forms agree") {
  const cplx g(0.3, 0.1);
  const CharacteristicFunction cf =
      char_function_boundary(lebesgue_grid(1 << 8), g, 1 << 8);
  const DefectVectorsModel d = defect_vectors_model(cf);
  std::mt19937_64 rng(127);
  const ModelVectorSNF v = random_member(rng, cf);

  const ModelVectorSNF via_projection = compressed_shift_projection(v, cf);
  const ModelVectorSNF via_rank_one = compressed_shift_rank_one(v, cf, d);
  CHECK(vec_gap(via_projection, via_rank_one) < 1e-9);

  // contraction bound
  CHECK(model_norm(cf.grid, via_rank_one) <=
        model_norm(cf.grid, v) * (1.0 + 1e-10));
}

TEST_CASE("transcriptions between the two model pictures") {
  std::mt19937_64 rng(131);
  SUBCASE("full-density base: lossless round trip and equal norms") {
    const cplx g(0.3, 0.1);
    const CharacteristicFunction cf =
        char_function_boundary(lebesgue_grid(1 << 8), g, 1 << 8);
    const ModelVectorSNF v = random_member(rng, cf);
    const ModelVectorDBR w = transcription_map(v, cf);
    const ModelVectorSNF back = transcription_inverse(w, cf);
    CHECK(vec_gap(v, back) < 1e-10);
    CHECK(dbr_norm(w, cf) ==
          doctest::Approx(model_norm(cf.grid, v)).epsilon(1e-8));
    CHECK(moore_penrose_identity_residual(cf) < 1e-12);
  }
  SUBCASE("inner case: second story is the reflected first") {
    const CharacteristicFunction cf =
        char_function_boundary(three_atom_circle(), cplx(0.4, 0.0), 1 << 10);
    ModelVectorSNF v;
    v.g1.assign(static_cast<size_t>(cf.size()), cplx(1.0));
    v.g2.assign(static_cast<size_t>(cf.size()), cplx(0.0));
    const ModelVectorDBR w = transcription_map(v, cf);
    for (int j = 0; j < cf.size(); ++j) {
      const auto uj = static_cast<size_t>(j);
      CHECK(std::abs(w.g_minus[uj] - std::conj(cf.theta[uj]) * v.g1[uj]) <
            1e-14);
    }
  }
}

TEST_CASE("reproducing kernels") {
  const Measure mu = three_atom_circle();
  const cplx g(0.2, 0.3);
  std::mt19937_64 rng(137);

  SUBCASE("conjugate symmetry and positivity") {
    std::vector<cplx> pts;
    for (int k = 0; k < 4; ++k) pts.push_back(random_point_in_disc(rng, 0.8));
    Eigen::MatrixXcd G(4, 4);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        G(i, j) = reproducing_kernel(mu, g, pts[static_cast<size_t>(j)],
                                     pts[static_cast<size_t>(i)]);
      }
    }
    CHECK((G - G.adjoint()).norm() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
    CHECK(es.eigenvalues()(0) > -1e-12);
  }
  SUBCASE("closed-form basis data is consistent") {
    const InnerModelBasis basis = inner_model_basis(mu, g);
    const auto n = static_cast<int>(basis.eigenvalues.size());
    REQUIRE(n == 3);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const cplx want =
            reproducing_kernel(mu, g, basis.eigenvalues[static_cast<size_t>(j)],
                               basis.eigenvalues[static_cast<size_t>(i)]);
        CHECK(std::abs(basis.gram(i, j) - want) < 1e-10);
      }
    }
    // kernel functions evaluated at the nodes reproduce the gram matrix
    const Eigen::MatrixXcd M = gram_from_point_values(basis, basis.gram);
    CHECK((M - basis.gram).norm() < 1e-8);
  }
}

TEST_CASE("analytic coefficients of boundary samples") {
  const BoundaryGrid grid(1 << 6);
  std::vector<cplx> samples(static_cast<size_t>(grid.size()));
  for (int j = 0; j < grid.size(); ++j) {
    const cplx z = grid.point(j);
    samples[static_cast<size_t>(j)] = z * z + 2.0 * z;
  }
  const std::vector<cplx> coeffs = analytic_coefficients(grid, samples);
  REQUIRE(coeffs.size() >= 3);
  CHECK(std::abs(coeffs[0]) < 1e-13);
  CHECK(std::abs(coeffs[1] - 2.0) < 1e-13);
  CHECK(std::abs(coeffs[2] - 1.0) < 1e-13);
  const cplx lambda(0.3, 0.1);
  CHECK(std::abs(BoundaryGrid::eval_analytic(coeffs, lambda) -
                 (lambda * lambda + 2.0 * lambda)) < 1e-12);
}
