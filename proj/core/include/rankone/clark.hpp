#pragma once

#include <vector>

#include <Eigen/Dense>

#include "rankone/cauchy.hpp"
#include "rankone/grid.hpp"
#include "rankone/measure.hpp"
#include "rankone/model.hpp"
#include "rankone/representation.hpp"
#include "rankone/types.hpp"

namespace rankone {

/// Boundary data shared by every route of the adjoint Clark operator for one
/// (mu, gamma): the characteristic function and defect vectors on the grid,
/// the base (gamma = 0) characteristic function, and the full radial
/// schedules of R mu from both sides so that combinations with other
/// transforms can be formed per radius before taking the limit.
struct ClarkContext {
  CharacteristicFunction cf;
  DefectVectorsModel defect;
  std::vector<cplx> theta0;
  GridSchedule one_plus;
  GridSchedule one_minus;
  CollapsedSchedule t_plus_one;
  CollapsedSchedule t_minus_one;
  RadialOptions opt;

  const Measure& mu() const { return cf.mu; }
  cplx gamma() const { return cf.gamma; }
  const BoundaryGrid& grid() const { return cf.grid; }
};

ClarkContext make_clark_context(const Measure& mu, cplx gamma,
                                int grid_n = 1 << 12);
ClarkContext make_clark_context(const Measure& mu, cplx gamma, int grid_n,
                                const RadialOptions& opt);

/// f at each grid point, extended by zero off the support of mu: the covering
/// positive-density cell's sample where there is one, an atom's sample if the
/// point sits on an atom (to grid resolution), zero elsewhere.
std::vector<cplx> samples_on_grid(const Measure& mu, const Samples& f,
                                  const BoundaryGrid& grid);

struct RouteResult {
  ModelVectorSNF vec;
  std::vector<int> excluded;   // grid indices dropped by a division cutoff
  std::vector<int> unsettled;  // grid indices whose radial limit did not settle
};

/// Two-term closed form A f + B (T_+ f - f T_+ 1) with A = c, B = c - z c1.
/// The bracket is a joint limit, so it stays finite across atoms where the
/// two transforms individually blow up.
RouteResult phi_star_universal(const ClarkContext& ctx, const Samples& f);

/// Sz.-Nagy-Foias form driven by T_+ f and T_+ 1 alone. Points where
/// |T_+ 1| < 1e-12 are excluded (Re R mu >= mass/2 keeps this from firing on
/// sound data).
RouteResult phi_star_snf(const ClarkContext& ctx, const Samples& f);

/// Both written forms of the coefficient pair: from the defect vectors and
/// from the gamma = 0 characteristic function. disagreement is the largest
/// pointwise gap between the two, a pure algebra check.
struct ABCoefficients {
  ModelVectorSNF a;
  ModelVectorSNF b;
  ModelVectorSNF a_theta;
  ModelVectorSNF b_theta;
  double disagreement = 0.0;
};

ABCoefficients A_B_coefficients(const ClarkContext& ctx);

struct DbrResult {
  ModelVectorDBR vec;
  std::vector<int> excluded;
  std::vector<int> unsettled;
  bool lebesgue_fallback = false;
};

/// de Branges-Rovnyak components from normalized transforms on both sides.
/// The quotients are formed per radius. When T_- 1 vanishes identically to
/// the cutoff (Lebesgue base measure) g_minus comes from the transcription of
/// the universal route instead.
DbrResult dbr_components(const ClarkContext& ctx, const Samples& f,
                         double cutoff = 1e-10);

struct ForwardResult {
  Samples f;  // aligned with mu.discretize(): atom values then cell values
  std::vector<int> excluded;         // discretize indices with density below cutoff
  std::vector<bool> atom_converged;  // radial limit flag per atom
};

/// Inverse direction: recover f in L2(mu) from a model vector in transcription
/// form. Atom values are radial limits of the analytic extension of g_plus
/// (Cauchy integral of its boundary samples, so resolution is set by the
/// grid); cell values come from the pointwise two-component formula divided
/// by the density. The a.c. part needs the density grid aligned with the
/// boundary grid.
ForwardResult phi_forward(const ClarkContext& ctx, const ModelVectorDBR& g,
                          double w_cutoff = 1e-10);

/// Radial limit of R(f mu)/R(mu) at each atom of mu; the limit should equal
/// the sample of f at that atom.
std::vector<RadialLimit> normalized_transform_at_atoms(
    const Measure& mu, const Samples& f, const RadialOptions& opt = {});

/// Data for the rotated family member at a unimodular alpha: the perturbed
/// spectral measure, the schedule of R mu_alpha, and the spectral
/// representation operator used by the composition route.
struct AlphaClarkContext {
  cplx alpha{};
  Measure mu_alpha;
  GridSchedule alpha_one_plus;
  CollapsedSchedule t_plus_one_alpha;
  RepresentationOperator v_alpha;
};

AlphaClarkContext make_alpha_context(const ClarkContext& ctx, cplx alpha);
AlphaClarkContext make_alpha_context(const ClarkContext& ctx, cplx alpha,
                                     const Measure& mu_alpha);

/// Direct formula for the adjoint Clark operator of the alpha member, landing
/// in the model space of the base characteristic function.
RouteResult phi_star_alpha(const ClarkContext& ctx,
                           const AlphaClarkContext& actx,
                           const Samples& f_alpha);

/// Oracle route: pull f back along the spectral representation and apply the
/// base operator.
RouteResult phi_star_alpha_composed(const ClarkContext& ctx,
                                    const AlphaClarkContext& actx,
                                    const Samples& f_alpha);

/// The unitary that aligns the rotated model space with the base one: bottom
/// entries pick up conj(alpha).
ModelVectorSNF alpha_transcription(const ModelVectorSNF& v, cplx alpha);

/// Purely atomic closed forms: the image of the natural orthonormal basis of
/// L2(mu) evaluated at the eigenvalues of the perturbed contraction.
/// w(i, k) = B_top(lambda_i) sqrt(mu_k) / (1 - conj(xi_k) lambda_i), and
/// unitarity of the Clark operator is exactly w w^H = gram.
struct InnerCaseClark {
  InnerModelBasis basis;
  Eigen::MatrixXcd w;
  double unitarity_residual = 0.0;
};

InnerCaseClark inner_case_clark(const Measure& mu, cplx gamma);

/// Top component of the adjoint Clark image at an interior point, by the
/// closed form B_top(lambda) R(f mu)(lambda) (f extends by zero off supp mu).
cplx phi_star_interior(const Measure& mu, cplx gamma, const Samples& f,
                       cplx lambda);

/// B_top(lambda) = (1-|gamma|^2)^{-1/2} [(1-gamma) - (1-conj(gamma)) theta(lambda)].
cplx b_top_interior(const Measure& mu, cplx gamma, cplx lambda);

}  // namespace rankone
