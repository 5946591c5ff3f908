#pragma once

#include <vector>

#include <Eigen/Dense>

#include "rankone/cauchy.hpp"
#include "rankone/clark.hpp"
#include "rankone/measure.hpp"
#include "rankone/types.hpp"

namespace rankone {

/// Conformal map between the upper half plane and the disc (and R to T).
cplx omega_map(cplx z);
cplx omega_inverse(cplx xi);

/// gamma(alpha) = (1 + alpha conj(Q)) / (1 + alpha Q) with Q = F(-i). The
/// dichotomy is exact: for real alpha the numerator is the conjugate of the
/// denominator, so |gamma| = 1; Im Q = -P < 0 gives |gamma| < 1 for
/// Im alpha > 0.
cplx gamma_of_alpha(const Measure& mu_line, cplx alpha);

/// Spectral measure of the Cayley transform of multiplication by the
/// variable: atoms move by omega, weights rescale by 1/(P (1 + t^2)).
/// Implemented for purely atomic line measures.
Measure pushforward_to_circle(const Measure& mu_line);

/// Cauchy-type transforms moved to the upper half plane. The subtractions
/// make them match the circle transforms of the pushforward exactly:
/// R uses 1/(x - w) - 1/(x + i), R1 uses 1/(x - w) - 1/(x - i), and R2 uses
/// 1/(x - w) - x/(x^2 + 1), all against dmu/(2iP) (1/(iP) for R2). With these
/// R2 = 2R - 1 identically.
cplx halfplane_R(const Measure& mu_line, const Samples& f, cplx w);
cplx halfplane_R1(const Measure& mu_line, const Samples& f, cplx w);
cplx halfplane_R2(const Measure& mu_line, const Samples& f, cplx w);

/// Characteristic function of the dissipative family at gamma = gamma(alpha),
/// evaluated through the half-plane transforms; equals the circle route
/// composed with omega.
cplx theta_halfplane(const Measure& mu_line, cplx gamma, cplx w);

/// Normalized resolvent defects: b = (A + i)^{-1} phi / ||.||, sampled on the
/// atoms, together with the norms ||(A +- i)^{-1} phi|| = sqrt(P).
struct HalfplaneDefects {
  Samples b;
  Samples b1;
  double resolvent_norm = 0.0;
};

HalfplaneDefects halfplane_defect_vectors(const Measure& mu_line);

/// Frobenius gap between the Cayley transform of A_alpha assembled directly
/// and U~ + (gamma - 1) b b1^* assembled from gamma(alpha) data. Atomic mu.
double cayley_identity_residual(const Measure& mu_line, cplx alpha);

/// Frobenius gap of the conjugation identity: the unitary sqrt(pi/P) Omega
/// carries multiplication by the circle variable to multiplication by
/// omega(x). Atomic mu.
double omega_conjugation_residual(const Measure& mu_line);

/// Everything the dissipative Clark formulas share for one (mu_line, alpha):
/// the bridge data, the circle-side context over the pushforward, the real
/// evaluation grid omega^{-1}(circle grid), and the vertical-approach
/// boundary data of R mu on that grid.
struct CayleyBridge {
  cplx alpha{};
  cplx gamma{};
  cplx q{};
  double p = 0.0;
  Measure mu_line;
  Measure mu_circle;
};

CayleyBridge make_cayley_bridge(const Measure& mu_line, cplx alpha);

struct HalfplaneModelVector {
  std::vector<double> points;  // real grid
  std::vector<cplx> g1;
  std::vector<cplx> g2;
};

struct HalfplaneClarkContext {
  CayleyBridge bridge;
  ClarkContext circle;
  std::vector<double> real_points;
  // data computed on the half-plane side by vertical approach z = x + it
  std::vector<std::vector<cplx>> one_steps;  // R mu at each t, subtracted kernel
  CollapsedSchedule t_plus_one;
  std::vector<cplx> theta;  // characteristic function on the real grid
  std::vector<double> delta;
};

/// Requires Im alpha > 0 (so |gamma| < 1) and a Poisson normalized atomic
/// measure; rescale first for general P.
HalfplaneClarkContext make_halfplane_context(const Measure& mu_line,
                                             cplx alpha, int grid_n = 1 << 12);
HalfplaneClarkContext make_halfplane_context(const Measure& mu_line,
                                             cplx alpha, int grid_n,
                                             const RadialOptions& opt);

/// Two-term closed form on the real grid, all boundary data taken by the
/// vertical approach.
HalfplaneModelVector phi_star_halfplane_universal(
    const HalfplaneClarkContext& ctx, const Samples& f);

/// Transcription form driven by T_+ 1 (subtracted kernel) and T_+^1 f (plain
/// Cauchy kernel).
HalfplaneModelVector phi_star_halfplane_snf(const HalfplaneClarkContext& ctx,
                                            const Samples& f);

/// Oracle route: transfer f to the pushforward measure, apply the circle
/// operator, pull back through Omega.
HalfplaneModelVector phi_star_halfplane_via_circle(
    const HalfplaneClarkContext& ctx, const Samples& f);

/// Largest pointwise gap across both components.
double route_residual(const HalfplaneModelVector& a,
                      const HalfplaneModelVector& b);

}  // namespace rankone
