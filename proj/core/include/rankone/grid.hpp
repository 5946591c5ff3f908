#pragma once

#include <vector>

#include "rankone/measure.hpp"
#include "rankone/types.hpp"

namespace rankone {

/// Uniform circle grid of size n (a power of two) at half-offset angles
/// theta_j = -pi + (j + 1/2) * 2*pi/n, so the points are the cell midpoints of
/// the aligned measure grid and generically avoid atoms.
///
/// Samples F_j = F(z_j) are identified with trigonometric coefficients c_m,
/// m in [-n/2, n/2), via F_j = sum_m c_m z_j^m. The analytic half keeps
/// m >= 0 (the constant term counts as analytic).
class BoundaryGrid {
 public:
  explicit BoundaryGrid(int n);

  int size() const { return n_; }
  double angle(int j) const { return -pi + (j + 0.5) * (2.0 * pi / n_); }
  cplx point(int j) const { return points_[j]; }
  const std::vector<cplx>& points() const { return points_; }
  std::vector<double> angles() const;

  /// Sample values -> coefficients c_m, returned with m = idx - n/2.
  std::vector<cplx> harmonics(const std::vector<cplx>& samples) const;
  /// Coefficients (m = idx - n/2) -> sample values.
  std::vector<cplx> synthesize(const std::vector<cplx>& coeffs) const;

  /// Orthogonal projection onto the analytic half (m >= 0) in the discrete
  /// inner product (1/n) * sum_j.
  std::vector<cplx> project_analytic(const std::vector<cplx>& samples) const;
  /// Complementary projection (m < 0).
  std::vector<cplx> project_antianalytic(const std::vector<cplx>& samples) const;

  /// Discrete inner product (f, g) = (1/n) * sum_j f_j conj(g_j).
  cplx inner(const std::vector<cplx>& f, const std::vector<cplx>& g) const;
  double norm(const std::vector<cplx>& f) const;

  /// Evaluates sum_{m>=0} c_m lambda^m inside the disc from analytic
  /// coefficients (index m = 0.. upward), the discrete Cauchy integral of the
  /// samples.
  static cplx eval_analytic(const std::vector<cplx>& analytic_coeffs,
                            cplx lambda);

  /// The measure grid aligned with this boundary grid (density wrt normalized
  /// arc length, uniform value 1 unless reweighted later).
  Grid aligned_measure_grid() const;

 private:
  int n_;
  std::vector<cplx> points_;
};

/// Points interleaving the support of a line or circle measure: midpoints of
/// consecutive atom gaps plus `per_gap` extra uniform subdivisions, skipping
/// positive-density cell interiors (those need radial limits, handled
/// separately) and the atoms themselves.
std::vector<double> interleaved_points(const Measure& mu, int per_gap = 1);

}  // namespace rankone
