#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rankone/types.hpp"

namespace rankone {

/// Point mass. For circle measures `position` is the angle in (-pi, pi].
struct Atom {
  double position = 0.0;
  double weight = 0.0;
};

/// Piecewise constant density on a uniform grid over [a, b).
/// Cell j covers [a + j*dx, a + (j+1)*dx), dx = (b-a)/n.
/// Line: density is taken w.r.t. Lebesgue measure, so cell mass = w*dx.
/// Circle: a, b are angles and the density is w.r.t. normalized arc length,
/// so cell mass = w*dx/(2*pi).
struct Grid {
  double a = 0.0;
  double b = 0.0;
  int n = 0;
  std::vector<double> density;

  double dx() const { return (b - a) / n; }
  double cell_lo(int j) const { return a + j * dx(); }
  double cell_hi(int j) const { return a + (j + 1) * dx(); }
  double cell_mid(int j) const { return a + (j + 0.5) * dx(); }
};

/// A measure flattened to weighted points: atoms plus grid cells lumped to
/// their midpoints. This is the basis-index set for all operator matrices;
/// the orthonormal basis of L2(mu) is e_k = weight_k^{-1/2} * indicator_k.
struct WeightedPoints {
  Support support = Support::line;
  std::vector<double> coords;      // line position or circle angle
  std::vector<cplx> points;        // line: (x, 0); circle: exp(i*angle)
  std::vector<double> weights;
  std::vector<bool> from_cell;     // true for lumped ("discretized") cells

  std::size_t size() const { return coords.size(); }
  double mass() const;
};

/// Finite positive measure on the line or circle: finitely many atoms plus an
/// optional piecewise constant density. Atoms must be pairwise distinct and
/// must not sit inside cells carrying positive density.
class Measure {
 public:
  Measure(Support support, std::vector<Atom> atoms,
          std::optional<Grid> grid = std::nullopt);

  static Measure point_mass(Support support, double position,
                            double weight = 1.0);

  Support support() const { return support_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::optional<Grid>& grid() const { return grid_; }

  bool has_atoms() const { return !atoms_.empty(); }
  /// True if some grid cell carries strictly positive density.
  bool has_ac() const;
  bool is_atomic() const { return !has_ac(); }

  /// Total mass, always accumulated atoms-first-then-cells in storage order.
  double mass() const;

  /// Piecewise constant density at a point: the covering cell's value, zero
  /// off the grid (atoms carry no density). Circle positions are wrapped
  /// into the grid's angular window first.
  double density_at(double position) const;

  /// Same measure with all weights and densities scaled by c > 0.
  Measure scaled(double c) const;

  /// Atom/cell flattening used by the matrix-level layer.
  WeightedPoints discretize() const;

  /// Embeds a coordinate: identity on the line, angle -> exp(i*angle) on the
  /// circle.
  cplx embed(double coord) const;

  /// Index of the atom at `coord` (exact match), or -1.
  int atom_index(double coord) const;

  std::string to_json() const;
  static Measure from_json(const std::string& text);

 private:
  Support support_;
  std::vector<Atom> atoms_;
  std::optional<Grid> grid_;
};

/// Result of splitting a measure into absolutely continuous and singular
/// (here: atomic) parts.
struct LebesgueParts {
  Measure ac;
  Measure sing;
};

/// Exact partition: `ac` keeps the grid, `sing` keeps the atoms, and
/// mass(mu) == mass(ac) + mass(sing) bit-for-bit because all three sums use
/// the same accumulation order.
LebesgueParts lebesgue_decompose(const Measure& mu);

/// P = integral of 1/(1+t^2) d mu(t). Line measures only.
double poisson_mass(const Measure& mu);

/// Rescales mu so that poisson_mass == 1.
Measure poisson_normalize(const Measure& mu);

/// Diagnostic for pure absolute continuity on an interval I inside the grid
/// span: values of the integral of x^{-2} * w*(x) over [h_k, |I|], where w*
/// is the increasing rearrangement of the density over I and h_k = eps*2^-k.
struct AcCriterionResult {
  std::vector<double> cutoffs;  // h_k
  std::vector<double> values;
  bool divergent = false;
};

AcCriterionResult ac_criterion_integral(const Measure& mu, double lo,
                                        double hi, double eps,
                                        int max_halvings = 40);

}  // namespace rankone
