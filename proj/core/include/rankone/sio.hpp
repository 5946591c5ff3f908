#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rankone/measure.hpp"
#include "rankone/operator_matrix.hpp"

namespace rankone {

/// A bilinear integral kernel, defined off the diagonal. `dimension` is 1
/// for kernels of a real (or circle) variable and 2 for genuinely planar
/// kernels; either way the evaluator receives embedded complex points.
struct KernelSpec {
  std::function<cplx(cplx, cplx)> evaluator;  // (x, y) with x ~ target side
  int dimension = 1;
  std::string name;
};

/// Factory for the kernels used by the scans: "hilbert" and "cauchy_line"
/// (1/(x-y) on the line), "cauchy_circle" (1/(1 - conj(xi) z)), "riesz"
/// (1/conj(z-w)) and "beurling" (1/(z-w)^2, planar).
KernelSpec named_kernel(const std::string& name);

/// An entrywise multiplier M(x,y) together with a certificate for its Schur
/// norm (the variation of the measure whose Fourier transform it is).
struct MultiplierEvaluator {
  std::function<cplx(cplx, cplx)> value;
  double variation = 0.0;
  std::string name;
};

/// Atom of a complex measure on the line.
struct ComplexAtom {
  double position = 0.0;
  cplx weight{0.0, 0.0};
};

/// A finite complex combination of point masses sigma = sum w_k delta_{a_k};
/// its Fourier transform sigma_hat(s) = sum w_k exp(-i a_k s) is a Schur
/// multiplier M(x,y) = sigma_hat(x-y) with Schur norm at most sum |w_k|.
struct SchurMultiplierSpec {
  std::vector<ComplexAtom> atoms;

  double variation() const;
  cplx multiplier(cplx s) const;
  MultiplierEvaluator evaluator() const;
};

/// m_eps(s) = s/(s - sign * i * eps); multiplying 1/(x-y) by
/// m_eps(x-y) gives exactly 1/(x - y - sign*i*eps). The underlying measure is
/// delta_0 minus a one-sided exponential profile, so the variation is 2 for
/// every eps.
MultiplierEvaluator cauchy_multiplier_line(double eps, int sign = -1);

/// Circle multiplier (1 - conj(xi) z)/(1 - r conj(xi) z), turning the circle
/// Cauchy kernel into its r-regularization. The absolute coefficient sums
/// telescope to 2 for r < 1 and 2/r for r > 1, so the variation certificate
/// is min(2, 2/r).
MultiplierEvaluator cauchy_multiplier_circle(double r);

/// Entrywise product kernel.
KernelSpec schur_apply(const KernelSpec& kernel, const MultiplierEvaluator& m);

/// Randomized lower estimate of the restricted bound [K]^r: the supremum of
/// |iint K(x,y) f(y) conj(g(x)) dmu(y) dnu(x)| over f in L^p(mu) and g in
/// L^p'(nu) with separated supports and unit norms. Each trial draws a random
/// support split (with a gap of one grid cell, or half the minimal atom gap)
/// and runs an alternating p-norm power iteration to a local maximum; the
/// best ratio over all trials is returned. A lower bound only.
double restricted_bound_estimate(const KernelSpec& kernel, const Measure& mu,
                                 const Measure& nu, double p, int trials,
                                 std::uint64_t rng_seed);

/// Outcome of checking the Schur bound [K.M]^r <= variation * upper(K),
/// where the upper certificate for [K]^r is the norm of the full kernel
/// matrix (valid when the supports of mu and nu are disjoint).
struct SchurBoundReport {
  double km_estimate = 0.0;
  double k_upper = 0.0;
  double variation = 0.0;
  double slack = 0.0;  // variation * k_upper - km_estimate
  bool ok = false;
};

SchurBoundReport schur_bound_check(const KernelSpec& kernel,
                                   const MultiplierEvaluator& m,
                                   const Measure& mu, const Measure& nu,
                                   double p, int trials, std::uint64_t seed);

/// Multiplicative regularization families for the norm scans. For `radial`
/// the grid entries are the radii r themselves (r >= 0, r != 1); for the
/// others they are the usual eps > 0.
enum class ScanFamily { trunc, smooth, cauchy, radial };

struct NormScan {
  std::vector<double> eps;
  std::vector<double> norms;
  double max_norm = 0.0;
  double min_norm = 0.0;
  double c_target = 0.0;  // 0 disables the verdict
  bool pass = true;

  std::string to_csv() const;  // header "eps,norm"
};

/// Operator norm of the regularized kernel over the discretized pair for
/// each grid entry. Diagonal entries (x == y) are zero for every family.
NormScan uniform_bound_scan(const KernelSpec& kernel, ScanFamily family,
                            const Measure& mu, const Measure& nu,
                            const std::vector<double>& eps_grid,
                            double c_target = 0.0);

/// A pair of disjoint index sets over the cells of sigma such that every
/// dyadic interval Q (relative to the support span, levels 0..n) carries
/// close to half of its sigma-mass in E and in F. Atoms are excluded from
/// both sets; they count half toward either side in the verification, which
/// makes them neutral there.
struct WellMixedPair {
  std::vector<std::size_t> E, F;  // indices into sigma.discretize()
  int level = 0;
  std::vector<double> level_errors;  // max relative error per dyadic level
  double achieved_error = 0.0;
  bool meets_target = false;  // achieved_error <= 2^-level
};

WellMixedPair well_mixed_sets(const Measure& sigma, int level);

}  // namespace rankone
