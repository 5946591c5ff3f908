#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "rankone/clark.hpp"
#include "rankone/operator_matrix.hpp"
#include "rankone/perturbation.hpp"
#include "rankone/presets.hpp"

using namespace rankone;

namespace {

ModelVectorSNF vec_diff(const ModelVectorSNF& a, const ModelVectorSNF& b) {
  ModelVectorSNF d;
  d.g1.resize(a.g1.size());
  d.g2.resize(a.g2.size());
  for (std::size_t j = 0; j < a.g1.size(); ++j) {
    d.g1[j] = a.g1[j] - b.g1[j];
    d.g2[j] = a.g2[j] - b.g2[j];
  }
  return d;
}

double route_gap(const BoundaryGrid& grid, const ModelVectorSNF& a,
                 const ModelVectorSNF& b) {
  return model_norm(grid, vec_diff(a, b)) / std::max(1.0, model_norm(grid, a));
}

Samples random_samples(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  Samples f(n);
  for (auto& v : f) v = cplx(box(rng), box(rng));
  return f;
}

}  // namespace

TEST_CASE("adjoint images of the distinguished vectors") {
  const Measure mu = three_atom_circle();
  const cplx g(0.3, 0.0);
  const ClarkContext ctx = make_clark_context(mu, g, 1 << 10);
  const WeightedPoints pts = mu.discretize();

  SUBCASE("the constant function maps to c") {
    const Samples ones(pts.size(), cplx(1.0));
    const RouteResult r = phi_star_universal(ctx, ones);
    CHECK(r.excluded.empty());
    CHECK(r.unsettled.empty());
    CHECK(model_norm(ctx.grid(), vec_diff(r.vec, ctx.defect.c)) < 1e-9);
  }
  SUBCASE("the back-rotated constant maps to c1") {
    const OperatorMatrix U = build_U_param({mu, g});
    const Eigen::VectorXcd coords = U.mat.adjoint() * constant_coords(pts);
    const Samples f = samples_from_coords(pts, coords);
    const RouteResult r = phi_star_universal(ctx, f);
    CHECK(model_norm(ctx.grid(), vec_diff(r.vec, ctx.defect.c1)) < 1e-9);
  }
}

TEST_CASE("trivial parameters split off the analytic part") {
  const int n = 1 << 8;
  const ClarkContext ctx = make_clark_context(lebesgue_grid(n), cplx(0.0), n);
  const WeightedPoints pts = ctx.mu().discretize();
  REQUIRE(static_cast<int>(pts.size()) == n);

  Samples fwd(pts.size()), bwd(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    fwd[k] = pts.points[k];
    bwd[k] = std::conj(pts.points[k]);
  }

  const RouteResult rf = phi_star_universal(ctx, fwd);
  const RouteResult rb = phi_star_universal(ctx, bwd);
  for (int j = 0; j < n; ++j) {
    const auto uj = static_cast<size_t>(j);
    const cplx z = ctx.grid().point(j);
    CHECK(std::abs(rf.vec.g1[uj] - z) < 1e-10);
    CHECK(std::abs(rf.vec.g2[uj]) < 1e-10);
    CHECK(std::abs(rb.vec.g1[uj]) < 1e-10);
    CHECK(std::abs(rb.vec.g2[uj] - std::conj(z)) < 1e-10);
  }
}

TEST_CASE("all written routes agree") {
  std::mt19937_64 rng(211);

  const auto check_routes = [&](const Measure& mu, cplx g, int grid_n,
                                double tol) {
    const ClarkContext ctx = make_clark_context(mu, g, grid_n);
    const Samples f = random_samples(rng, mu.discretize().size());

    const RouteResult uni = phi_star_universal(ctx, f);
    const RouteResult snf = phi_star_snf(ctx, f);
    CHECK(route_gap(ctx.grid(), uni.vec, snf.vec) < tol);

    const DbrResult dbr = dbr_components(ctx, f);
    const ModelVectorDBR via_uni = transcription_map(uni.vec, ctx.cf);
    double gap = 0.0;
    for (int j = 0; j < ctx.grid().size(); ++j) {
      const auto uj = static_cast<size_t>(j);
      gap = std::max(gap, std::abs(via_uni.g_plus[uj] - dbr.vec.g_plus[uj]));
      gap = std::max(gap, std::abs(via_uni.g_minus[uj] - dbr.vec.g_minus[uj]));
    }
    CHECK(gap < tol);
  };

  SUBCASE("atomic base") {
    check_routes(three_atom_circle(), cplx(0.3, 0.0), 1 << 10, 1e-8);
  }
  SUBCASE("mixed base") {
    check_routes(random_mixed_circle(rng, 1 << 10, 2), cplx(0.25, -0.35),
                 1 << 10, 1e-7);
  }
}

TEST_CASE("the two written forms of the coefficients") {
  std::mt19937_64 rng(223);
  const ClarkContext atomic =
      make_clark_context(three_atom_circle(), cplx(0.3, 0.0), 1 << 10);
  CHECK(A_B_coefficients(atomic).disagreement < 1e-12);

  const ClarkContext mixed = make_clark_context(
      random_mixed_circle(rng, 1 << 10, 2), cplx(0.2, 0.4), 1 << 10);
  CHECK(A_B_coefficients(mixed).disagreement < 1e-10);
}

TEST_CASE("the adjoint intertwines the family with the compressed shift") {
  std::mt19937_64 rng(227);
  const Measure mu = three_atom_circle();
  const cplx g(0.3, 0.0);
  const ClarkContext ctx = make_clark_context(mu, g, 1 << 10);
  const WeightedPoints pts = mu.discretize();
  const OperatorMatrix U = build_U_param({mu, g});

  const Samples f = random_samples(rng, pts.size());
  const Eigen::VectorXcd uf = U.mat * coords_from_samples(pts, f);
  const Samples f_rot = samples_from_coords(pts, uf);

  const ModelVectorSNF lhs = phi_star_universal(ctx, f_rot).vec;
  const ModelVectorSNF rhs = compressed_shift_rank_one(
      phi_star_universal(ctx, f).vec, ctx.cf, ctx.defect);
  CHECK(route_gap(ctx.grid(), lhs, rhs) < 1e-8);
}

TEST_CASE("rotated members of the family") {
  std::mt19937_64 rng(229);
  SUBCASE("alpha = 1 reduces to the base operator") {
    const Measure mu = three_atom_circle();
    const ClarkContext ctx = make_clark_context(mu, cplx(0.3, 0.0), 1 << 10);
    const AlphaClarkContext actx = make_alpha_context(ctx, cplx(1.0), mu);
    const Samples f = random_samples(rng, mu.discretize().size());
    const ModelVectorSNF direct = phi_star_alpha(ctx, actx, f).vec;
    const ModelVectorSNF base = phi_star_snf(ctx, f).vec;
    CHECK(route_gap(ctx.grid(), direct, base) < 1e-10);
  }
  SUBCASE("direct formula matches the composition oracle") {
    const Measure mu = two_atom_circle();
    const ClarkContext ctx = make_clark_context(mu, cplx(0.5, 0.0), 1 << 10);
    const AlphaClarkContext actx = make_alpha_context(ctx, cplx(-1.0));
    const Samples f_alpha =
        random_samples(rng, actx.mu_alpha.discretize().size());
    const ModelVectorSNF direct = phi_star_alpha(ctx, actx, f_alpha).vec;
    const ModelVectorSNF composed =
        phi_star_alpha_composed(ctx, actx, f_alpha).vec;
    CHECK(route_gap(ctx.grid(), direct, composed) < 1e-8);
  }
}

TEST_CASE("atomic closed forms are unitary") {
  CHECK(inner_case_clark(three_atom_circle(), cplx(0.3, 0.0))
            .unitarity_residual < 1e-10);
  std::mt19937_64 rng(233);
  const Measure mu = random_atomic_circle(rng, 8);
  const cplx g = random_gamma(rng);
  const InnerCaseClark icc = inner_case_clark(mu, g);
  CHECK(icc.unitarity_residual < 1e-10);
  CHECK(icc.basis.eigenvalues.size() == 8);
}

TEST_CASE("forward map undoes the adjoint") {
  std::mt19937_64 rng(239);
  const Measure mu = random_mixed_circle(rng, 1 << 10, 2);
  const ClarkContext ctx = make_clark_context(mu, cplx(0.3, 0.2), 1 << 10);
  const WeightedPoints pts = mu.discretize();

  // low bandwidth keeps the grid sampling of the image alias-free
  Samples f(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    f[k] = 2.0 + pts.points[k] + 0.5 * std::conj(pts.points[k]);
  }

  const DbrResult dbr = dbr_components(ctx, f);
  const ForwardResult fwd = phi_forward(ctx, dbr.vec);
  REQUIRE(fwd.f.size() == f.size());
  for (bool ok : fwd.atom_converged) CHECK(ok);

  std::vector<bool> skip(f.size(), false);
  for (int k : fwd.excluded) skip[static_cast<size_t>(k)] = true;
  double worst = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (skip[k]) continue;
    worst = std::max(worst, std::abs(fwd.f[k] - f[k]) / std::abs(f[k]));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("normalized transform recovers atom samples") {
  std::mt19937_64 rng(241);
  const Measure mu = three_atom_circle();
  const Samples f = random_samples(rng, mu.discretize().size());
  const std::vector<RadialLimit> lims = normalized_transform_at_atoms(mu, f);
  REQUIRE(lims.size() == 3);
  for (std::size_t k = 0; k < lims.size(); ++k) {
    CHECK(lims[k].converged);
    CHECK(std::abs(lims[k].value - f[k]) < 1e-6);
  }
}

TEST_CASE("grid extension of measure samples") {
  const Measure mu = Measure::point_mass(Support::circle, 0.0);
  const Samples f{cplx(3.0, 1.0)};
  const BoundaryGrid grid(1 << 6);
  const std::vector<cplx> ext = samples_on_grid(mu, f, grid);
  int nonzero = 0;
  cplx seen{};
  for (const cplx& v : ext) {
    if (v != cplx(0.0)) {
      ++nonzero;
      seen = v;
    }
  }
  CHECK(nonzero == 1);
  CHECK(seen == f[0]);
}
