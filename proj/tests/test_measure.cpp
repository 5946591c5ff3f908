#include <doctest.h>

#include <cmath>

#include "rankone/errors.hpp"
#include "rankone/measure.hpp"
#include "rankone/presets.hpp"

using namespace rankone;

namespace {

Grid unit_interval_grid(int n, std::vector<double> density) {
  Grid g;
  g.a = 0.0;
  g.b = 1.0;
  g.n = n;
  g.density = std::move(density);
  return g;
}

}  // namespace

TEST_CASE("poisson mass of point masses") {
  CHECK(poisson_mass(Measure::point_mass(Support::line, 0.0)) == 1.0);
  // weight 2 at t = 1: 2 / (1 + 1) = 1
  CHECK(poisson_mass(Measure::point_mass(Support::line, 1.0, 2.0)) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(poisson_mass(two_atom_line()) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("poisson_normalize rescales to unit poisson mass") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 5; ++k) {
    const Measure mu = random_atomic_line(rng, 6);
    const Measure nu = poisson_normalize(mu);
    CHECK(std::abs(poisson_mass(nu) - 1.0) < 1e-14);
    // same atom positions, only weights rescaled
    REQUIRE(nu.atoms().size() == mu.atoms().size());
    for (std::size_t j = 0; j < nu.atoms().size(); ++j)
      CHECK(nu.atoms()[j].position == mu.atoms()[j].position);
  }
}

TEST_CASE("lebesgue decomposition splits atoms from density") {
  SUBCASE("purely atomic") {
    const Measure mu = three_atom_line();
    const LebesgueParts parts = lebesgue_decompose(mu);
    CHECK(parts.ac.mass() == 0.0);
    CHECK(parts.sing.mass() == mu.mass());
    CHECK(parts.sing.atoms().size() == 3);
  }
  SUBCASE("pure density") {
    const Measure mu(Support::line, {}, unit_interval_grid(8, std::vector<double>(8, 2.0)));
    const LebesgueParts parts = lebesgue_decompose(mu);
    CHECK(parts.sing.mass() == 0.0);
    CHECK(parts.ac.mass() == mu.mass());
  }
  SUBCASE("mixed: masses add up exactly") {
    Grid g = unit_interval_grid(16, {});
    g.density.resize(16);
    for (int j = 0; j < 16; ++j) g.density[j] = j < 8 ? 0.3 + 0.1 * j : 0.0;
    const Measure mu(Support::line, {{2.0, 0.25}, {3.0, 0.5}}, g);
    const LebesgueParts parts = lebesgue_decompose(mu);
    // all three sums share one accumulation order, so this is bit-for-bit
    CHECK(mu.mass() == parts.sing.mass() + parts.ac.mass());
  }
}

TEST_CASE("absolute continuity criterion integral") {
  const int n = 1 << 10;
  SUBCASE("constant density diverges like 1/h") {
    const Measure mu(Support::line, {}, unit_interval_grid(n, std::vector<double>(n, 1.0)));
    const AcCriterionResult r = ac_criterion_integral(mu, 0.0, 1.0, 1.0);
    CHECK(r.divergent);
    REQUIRE(r.cutoffs.size() == r.values.size());
    REQUIRE(r.values.size() >= 10);
    for (std::size_t k = 2; k < 10; ++k) {
      const double h = r.cutoffs[k];
      CHECK(r.values[k] == doctest::Approx(1.0 / h - 1.0).epsilon(1e-9));
    }
  }
  SUBCASE("zero density gives zero values and no divergence") {
    const Measure mu(Support::line, {{2.0, 1.0}},
                     unit_interval_grid(n, std::vector<double>(n, 0.0)));
    const AcCriterionResult r = ac_criterion_integral(mu, 0.0, 1.0, 1.0);
    CHECK_FALSE(r.divergent);
    for (double v : r.values) CHECK(v == 0.0);
  }
  SUBCASE("density vanishing quadratically stays integrable") {
    Grid g = unit_interval_grid(n, {});
    g.density.resize(n);
    for (int j = 0; j < n; ++j) {
      const double x = g.cell_mid(j);
      g.density[j] = x * x;
    }
    const Measure mu(Support::line, {}, g);
    const AcCriterionResult r = ac_criterion_integral(mu, 0.0, 1.0, 1.0);
    CHECK_FALSE(r.divergent);
    // integral of x^-2 * x^2 over (h, 1) is 1 - h < 1
    for (double v : r.values) CHECK(v < 1.05);
  }
}

TEST_CASE("json round trip preserves atoms and grid") {
  Grid g;
  g.a = -pi;
  g.b = pi;
  g.n = 8;
  g.density = {1.0, 0.5, 0.0, 0.0, 2.0, 0.25, 0.0, 0.0};
  const Measure mu(Support::circle, {{-pi / 4 + 0.01, 0.75}}, g);
  const Measure back = Measure::from_json(mu.to_json());
  CHECK(back.support() == Support::circle);
  REQUIRE(back.atoms().size() == 1);
  CHECK(back.atoms()[0].position == mu.atoms()[0].position);
  CHECK(back.atoms()[0].weight == mu.atoms()[0].weight);
  REQUIRE(back.grid().has_value());
  CHECK(back.grid()->n == 8);
  CHECK(back.grid()->density == g.density);
  CHECK(back.mass() == mu.mass());
}

TEST_CASE("construction rejects ill-formed measures") {
  CHECK_THROWS_AS(Measure(Support::line, {{0.0, -1.0}}), DomainError);
  CHECK_THROWS_AS(Measure(Support::line, {{0.0, 0.5}, {0.0, 0.5}}), DomainError);
  // atom inside a cell carrying positive density
  const Grid g = unit_interval_grid(4, {1.0, 1.0, 1.0, 1.0});
  CHECK_THROWS_AS(Measure(Support::line, {{0.5, 1.0}}, g), DomainError);
  // the same atom is fine when that cell has zero density
  const Grid g2 = unit_interval_grid(4, {1.0, 1.0, 0.0, 1.0});
  CHECK_NOTHROW(Measure(Support::line, {{0.6, 1.0}}, g2));
}

TEST_CASE("density_at reads the covering cell") {
  const Measure atomic = three_atom_circle();
  CHECK(atomic.density_at(0.3) == 0.0);

  Grid g;
  g.a = -pi;
  g.b = pi;
  g.n = 4;
  g.density = {1.0, 2.0, 3.0, 4.0};
  const Measure mu(Support::circle, {}, g);
  const double theta = -pi + 0.1;  // first cell
  CHECK(mu.density_at(theta) == 1.0);
  CHECK(mu.density_at(theta + pi / 2) == 2.0);
  // circle positions wrap modulo 2 pi
  CHECK(mu.density_at(theta + 2.0 * pi) == 1.0);
  CHECK(mu.density_at(theta - 2.0 * pi) == 1.0);
}

TEST_CASE("discretize lists atoms first, then charged cells") {
  Grid g = unit_interval_grid(4, {2.0, 0.0, 0.0, 1.0});
  const Measure mu(Support::line, {{3.0, 0.5}, {-2.0, 0.25}}, g);
  const WeightedPoints pts = mu.discretize();
  REQUIRE(pts.size() == 4);  // 2 atoms + 2 charged cells
  CHECK_FALSE(pts.from_cell[0]);
  CHECK_FALSE(pts.from_cell[1]);
  CHECK(pts.from_cell[2]);
  CHECK(pts.from_cell[3]);
  // atoms come in position order
  CHECK(pts.coords[0] == -2.0);
  CHECK(pts.coords[1] == 3.0);
  // cell mass is density * dx on the line
  CHECK(pts.weights[2] == doctest::Approx(2.0 * 0.25).epsilon(1e-15));
  CHECK(pts.weights[3] == doctest::Approx(1.0 * 0.25).epsilon(1e-15));
  CHECK(pts.mass() == doctest::Approx(mu.mass()).epsilon(1e-15));
}

TEST_CASE("circle discretization embeds angles on the unit circle") {
  const Measure mu = two_atom_circle();
  const WeightedPoints pts = mu.discretize();
  for (std::size_t k = 0; k < pts.size(); ++k) {
    CHECK(std::abs(pts.points[k] - std::exp(iu * pts.coords[k])) < 1e-15);
    CHECK(std::abs(std::abs(pts.points[k]) - 1.0) < 1e-15);
  }
}

TEST_CASE("scaled multiplies weights and densities") {
  Grid g = unit_interval_grid(2, {1.0, 3.0});
  const Measure mu(Support::line, {{5.0, 2.0}}, g);
  const Measure nu = mu.scaled(0.25);
  CHECK(nu.atoms()[0].weight == 0.5);
  CHECK(nu.grid()->density[1] == 0.75);
  CHECK(nu.mass() == doctest::Approx(0.25 * mu.mass()).epsilon(1e-15));
}

TEST_CASE("atom_index finds exact matches only") {
  const Measure mu = three_atom_line();
  const double p0 = mu.atoms()[0].position;
  CHECK(mu.atom_index(p0) == 0);
  CHECK(mu.atom_index(p0 + 1e-9) == -1);
}
