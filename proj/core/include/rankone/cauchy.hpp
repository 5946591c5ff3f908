#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rankone/measure.hpp"
#include "rankone/types.hpp"

namespace rankone {

/// Function samples on the support of a measure, aligned with the index set
/// of Measure::discretize(): atoms in position order, then positive cells.
using Samples = std::vector<cplx>;

Samples ones_samples(const Measure& mu);

/// R f mu (lambda) = integral of f(t)/(t - lambda) d mu(t), line measures.
/// Grid cells integrate exactly (log primitive, f constant per cell).
/// Throws PoleError when lambda lies on the closed support.
cplx cauchy_line(const Measure& mu, const Samples& f, cplx lambda);
cplx cauchy_line(const Measure& mu, cplx lambda);

/// Circle transforms with kernel 1/(1 - conj(xi) * lambda):
///   R  f mu (lambda) = integral f(xi) / (1 - conj(xi) lambda) d mu(xi)
///   R1 f mu = R f mu - integral f d mu
///   R2 f mu = 2 R f mu - integral f d mu
cplx cauchy_circle_R(const Measure& mu, const Samples& f, cplx lambda);
cplx cauchy_circle_R(const Measure& mu, cplx lambda);
cplx cauchy_circle_R1(const Measure& mu, const Samples& f, cplx lambda);
cplx cauchy_circle_R1(const Measure& mu, cplx lambda);
cplx cauchy_circle_R2(const Measure& mu, const Samples& f, cplx lambda);
cplx cauchy_circle_R2(const Measure& mu, cplx lambda);

/// integral of f d mu (atoms plus cells, fixed accumulation order).
cplx integrate(const Measure& mu, const Samples& f);

/// Which boundary approach (if any) a batch of evaluations represents.
enum class FieldSide { none, plus, minus };

/// Values of an analytic function (a Cauchy transform, usually) at a list of
/// evaluation points off the measure's support.
struct AnalyticField {
  FieldSide side = FieldSide::none;
  std::vector<cplx> points;
  std::vector<cplx> values;
};

AnalyticField cauchy_field_line(const Measure& mu, const Samples& f,
                                const std::vector<cplx>& points);
AnalyticField cauchy_field_circle(const Measure& mu, const Samples& f,
                                  const std::vector<cplx>& points);

/// Geometric approach schedule for boundary values: step k evaluates at
/// distance t_k = 2^-k * t0 from the boundary. Convergence is declared when
/// three consecutive values agree to rel_tol (with a small absolute floor so
/// limits equal to zero converge too); iteration continues until the
/// agreement reaches early_stop_tol or the schedule is exhausted, and the
/// last computed value is reported.
struct RadialOptions {
  double t0 = 0.5;
  int max_steps = 48;
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  double early_stop_rel = 1e-12;
  double early_stop_abs = 1e-15;
};

struct RadialLimit {
  cplx value{};
  bool converged = false;
  int steps = 0;
};

RadialLimit radial_limit(const std::function<cplx(double)>& value_at,
                         const RadialOptions& opt = {});

/// Which side the boundary is approached from. For line measures the
/// convention is T_plus/minus f(s) = lim integral f(t) d mu(t)/(s - t +- i eps),
/// so plus approaches through the upper half plane of the kernel family
/// (the line Fatou jump is T_plus f - T_minus f = -2 pi i w f, density w wrt
/// Lebesgue). For circle measures T_plus/minus f(z) = lim_{r->1-+} of
/// integral f d mu / (1 - r conj(xi) z); the circle Fatou jump is
/// T_plus f - T_minus f = w f with w the density wrt normalized arc length.
enum class BoundarySide { plus, minus };

struct BoundaryField {
  Support support = Support::line;
  BoundarySide side = BoundarySide::plus;
  std::vector<double> points;  // line positions or circle angles
  std::vector<cplx> values;
  std::vector<bool> converged;

  std::string to_csv() const;
};

/// T_side f at one point (line position / circle angle), by radial approach.
RadialLimit boundary_value(const Measure& mu, const Samples& f,
                           BoundarySide side, double point,
                           const RadialOptions& opt = {});

BoundaryField boundary_values(const Measure& mu, const Samples& f,
                              BoundarySide side,
                              const std::vector<double>& points,
                              const RadialOptions& opt = {});

class BoundaryGrid;

/// T_side f at every point of a uniform circle grid at once. Runs the full
/// radial schedule (no per-point early stop) and reports the last value, with
/// the same three-in-a-row convergence flag as radial_limit. When the measure
/// carries a density grid aligned with the boundary grid (same size, full
/// circle) each radius step costs one circular convolution instead of an
/// n^2 sweep, which keeps 2^12-point grids affordable.
BoundaryField boundary_values_on_grid(const Measure& mu, const Samples& f,
                                      const BoundaryGrid& grid,
                                      BoundarySide side,
                                      const RadialOptions& opt = {});

/// Every step of the radial schedule on a circle grid, kept so that
/// combinations of several transforms (differences, quotients) can be formed
/// per radius before taking the limit. steps[k][j] is the integral at radius
/// radii[k] toward grid point j.
struct GridSchedule {
  BoundarySide side = BoundarySide::plus;
  std::vector<double> points;  // circle angles
  std::vector<double> radii;
  std::vector<std::vector<cplx>> steps;
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
};

GridSchedule radial_schedule_on_grid(const Measure& mu, const Samples& f,
                                     const BoundaryGrid& grid,
                                     BoundarySide side,
                                     const RadialOptions& opt = {});

/// Last value of each per-point series together with the three-in-a-row
/// convergence flag radial_limit uses. Sizes: steps[k] all equal.
struct CollapsedSchedule {
  std::vector<cplx> values;
  std::vector<bool> converged;
};

CollapsedSchedule collapse_schedule(const std::vector<std::vector<cplx>>& steps,
                                    double rel_tol, double abs_tol);

/// Kernel regularization families on the line, applied to 1/(s - t).
enum class RegFamily {
  cauchy_plus,   // 1/(s - t + i eps)
  cauchy_minus,  // 1/(s - t - i eps)
  truncation,    // 1/(s - t) restricted to |s - t| > eps
  smooth,        // 1/(s - t) * m((s - t)/eps), m the C-infinity step below
};

/// The fixed smooth regularizer: m(x) = 0 for |x| <= 1, = 1 for |x| >= 2,
/// and the exponential smoothstep e(u)/(e(u)+e(1-u)), e(u) = exp(-1/u),
/// in between (u = |x| - 1).
double smooth_regularizer(double x);

}  // namespace rankone
