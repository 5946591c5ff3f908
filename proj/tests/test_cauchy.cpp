#include <doctest.h>

#include <cmath>
#include <random>

#include "rankone/cauchy.hpp"
#include "rankone/errors.hpp"
#include "rankone/grid.hpp"
#include "rankone/operator_matrix.hpp"
#include "rankone/perturbation.hpp"
#include "rankone/presets.hpp"
#include "rankone/representation.hpp"

using namespace rankone;

TEST_CASE("line transform of a point mass") {
  const Measure mu = Measure::point_mass(Support::line, 0.0);
  // integral of 1/(t - i) d delta_0 = -1/i = i
  CHECK(std::abs(cauchy_line(mu, cplx(0.0, 1.0)) - cplx(0.0, 1.0)) < 1e-15);
  CHECK_THROWS_AS(cauchy_line(mu, cplx(0.0, 0.0)), PoleError);
}

TEST_CASE("line transform of two symmetric atoms") {
  // 1/2 / (-1 - 2i) + 1/2 / (1 - 2i) = 0.4i
  const cplx F = cauchy_line(two_atom_line(), cplx(0.0, 2.0));
  CHECK(std::abs(F - cplx(0.0, 0.4)) < 1e-15);
}

TEST_CASE("line transform is Herglotz off the real axis") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> box(-4.0, 4.0);
  std::uniform_real_distribution<double> up(0.05, 3.0);
  for (int k = 0; k < 20; ++k) {
    const Measure mu = random_atomic_line(rng, 7);
    const cplx lambda(box(rng), up(rng));
    CHECK(cauchy_line(mu, lambda).imag() > 0.0);
  }
}

TEST_CASE("circle transforms of the normalized arc length") {
  const Measure leb = lebesgue_grid(1 << 8);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 10; ++k) {
    const cplx lambda = random_point_in_disc(rng, 0.9);
    CHECK(std::abs(cauchy_circle_R(leb, lambda) - 1.0) < 1e-12);
    CHECK(std::abs(cauchy_circle_R1(leb, lambda)) < 1e-12);
    CHECK(std::abs(cauchy_circle_R2(leb, lambda) - 1.0) < 1e-12);
  }
}

TEST_CASE("circle transform of a point mass") {
  const Measure mu = Measure::point_mass(Support::circle, 0.7);
  CHECK(std::abs(cauchy_circle_R(mu, cplx(0.0, 0.0)) - 1.0) < 1e-15);
  // closed form 1/(1 - conj(xi0) lambda)
  const cplx xi0 = std::exp(iu * 0.7);
  const cplx lambda(0.3, -0.4);
  const cplx want = 1.0 / (1.0 - std::conj(xi0) * lambda);
  CHECK(std::abs(cauchy_circle_R(mu, lambda) - want) < 1e-14);
}

TEST_CASE("R2 equals 2R minus the mass") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 10; ++k) {
    const Measure mu = random_atomic_circle(rng, 6);
    const Samples f = random_samples(rng, mu);
    const cplx lambda = random_point_in_disc(rng);
    const cplx lhs = cauchy_circle_R2(mu, f, lambda);
    const cplx rhs = 2.0 * cauchy_circle_R(mu, f, lambda) - integrate(mu, f);
    CHECK(std::abs(lhs - rhs) < 1e-13);
  }
}

TEST_CASE("integrate sums atoms then cells") {
  Grid g;
  g.a = 0.0;
  g.b = 1.0;
  g.n = 2;
  g.density = {2.0, 0.0};
  const Measure mu(Support::line, {{4.0, 0.5}}, g);
  // one atom (weight 1/2) + one charged cell (mass 2 * 1/2 = 1)
  const Samples f = {cplx(2.0, 1.0), cplx(-1.0, 0.0)};
  CHECK(std::abs(integrate(mu, f) - (cplx(1.0, 0.5) + cplx(-1.0, 0.0))) < 1e-15);
}

TEST_CASE("regularized line operator on a single atom") {
  const Measure mu = Measure::point_mass(Support::line, 0.0);
  const OperatorMatrix op = regularized_T_eps_line(mu, mu, RegFamily::cauchy_plus, 1.0);
  REQUIRE(op.mat.rows() == 1);
  // kernel 1/(s - t + i eps) at s = t = 0 is -i
  CHECK(std::abs(op.mat(0, 0) - cplx(0.0, -1.0)) < 1e-15);
}

TEST_CASE("truncation wider than the support blocks everything") {
  const Measure mu = three_atom_line();
  const OperatorMatrix op = regularized_T_eps_line(mu, mu, RegFamily::truncation, 100.0);
  CHECK(op.mat.norm() == 0.0);
}

TEST_CASE("circle regularization at r = 0 is rank one") {
  const Measure mu = three_atom_circle();
  const OperatorMatrix op = regularized_T_r_circle(mu, mu, 0.0);
  // kernel is identically 1, so the matrix is sqrt(w) sqrt(w)^T
  Eigen::VectorXcd s(3);
  for (int k = 0; k < 3; ++k) s(k) = std::sqrt(mu.atoms()[k].weight);
  CHECK((op.mat - s * s.transpose()).norm() < 1e-15);
}

TEST_CASE("circle regularization fixes constants against arc length") {
  // midpoint lumping aliases the kernel tail at order r^n, so keep r away
  // from 1 relative to the cell count
  const Measure leb = lebesgue_grid(1 << 8);
  for (double r : {0.0, 0.5, 1.5}) {
    const OperatorMatrix op = regularized_T_r_circle(leb, leb, r);
    const Samples out = apply(op, ones_samples(leb));
    const cplx want = r < 1.0 ? cplx(1.0) : cplx(0.0);
    for (const cplx& v : out) CHECK(std::abs(v - want) < 1e-12);
  }
}

TEST_CASE("boundary values of the arc length transform") {
  const Measure leb = lebesgue_grid(1 << 8);
  const BoundaryGrid grid(1 << 8);
  const Samples one = ones_samples(leb);
  const BoundaryField plus = boundary_values_on_grid(leb, one, grid, BoundarySide::plus);
  const BoundaryField minus = boundary_values_on_grid(leb, one, grid, BoundarySide::minus);
  for (int j = 0; j < grid.size(); ++j) {
    CHECK(plus.converged[j]);
    CHECK(minus.converged[j]);
    CHECK(std::abs(plus.values[j] - 1.0) < 1e-10);
    CHECK(std::abs(minus.values[j]) < 1e-10);
  }
}

TEST_CASE("fatou jump recovers the density") {
  // density grid aligned with the boundary grid, smooth positive profile
  const int n = 1 << 8;
  const BoundaryGrid grid(n);
  Grid g = grid.aligned_measure_grid();
  for (int j = 0; j < n; ++j) g.density[j] = 1.0 + 0.5 * std::cos(grid.angle(j));
  const Measure mu(Support::circle, {}, g);

  Samples f(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) f[static_cast<size_t>(j)] = std::exp(iu * (2.0 * grid.angle(j)));
  const BoundaryField plus = boundary_values_on_grid(mu, f, grid, BoundarySide::plus);
  const BoundaryField minus = boundary_values_on_grid(mu, f, grid, BoundarySide::minus);
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    const cplx jump = plus.values[j] - minus.values[j];
    worst = std::max(worst, std::abs(jump - g.density[j] * f[static_cast<size_t>(j)]));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("transform quotients are invariant under the rank one move") {
  // R(f_a mu_a)/R(mu_a) = R(f mu)/R(mu) for f_a the image of f under the
  // spectral representation of the perturbed pair
  const Measure mu = two_atom_circle();
  std::mt19937_64 rng(23);
  const cplx alpha = random_unimodular(rng);
  const Measure mu_alpha = spectral_measure_perturbed(UnitaryFamily{mu, alpha});
  const RepresentationOperator V = build_V_gamma_circle(mu, mu_alpha, alpha);
  const Samples f = random_samples(rng, mu);
  const Samples f_alpha = apply(V.matrix, f);
  for (int k = 0; k < 10; ++k) {
    const cplx lambda = random_point_in_disc(rng, 0.9);
    const cplx lhs = cauchy_circle_R(mu_alpha, f_alpha, lambda) /
                     cauchy_circle_R(mu_alpha, lambda);
    const cplx rhs = cauchy_circle_R(mu, f, lambda) / cauchy_circle_R(mu, lambda);
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("radial limits settle on convergent schedules") {
  const cplx c(3.0, 2.0);
  const RadialLimit lim = radial_limit([&](double t) { return c + t * cplx(1.0, -1.0); });
  CHECK(lim.converged);
  CHECK(std::abs(lim.value - c) < 1e-9);

  // oscillation with no limit must not be reported as converged
  const RadialLimit bad = radial_limit(
      [](double t) { return cplx(std::sin(pi * std::log2(t)), 0.0); });
  CHECK_FALSE(bad.converged);
}

TEST_CASE("collapse_schedule keeps the last value and flags agreement") {
  std::vector<std::vector<cplx>> steps = {
      {cplx(1.0)}, {cplx(1.4)}, {cplx(1.41)}, {cplx(1.414)}, {cplx(1.4142)}};
  const CollapsedSchedule c = collapse_schedule(steps, 1e-2, 1e-12);
  REQUIRE(c.values.size() == 1);
  CHECK(c.values[0] == cplx(1.4142));
  CHECK(c.converged[0]);

  std::vector<std::vector<cplx>> wild = {
      {cplx(1.0)}, {cplx(2.0)}, {cplx(1.0)}, {cplx(2.0)}, {cplx(1.0)}};
  CHECK_FALSE(collapse_schedule(wild, 1e-2, 1e-12).converged[0]);
}

TEST_CASE("smooth regularizer is a plateau step") {
  CHECK(smooth_regularizer(0.5) == 0.0);
  CHECK(smooth_regularizer(1.0) == 0.0);
  CHECK(smooth_regularizer(2.0) == 1.0);
  CHECK(smooth_regularizer(-3.0) == 1.0);
  const double mid = smooth_regularizer(1.5);
  CHECK(mid > 0.0);
  CHECK(mid < 1.0);
  // symmetric in |x|
  CHECK(smooth_regularizer(-1.5) == mid);
}
