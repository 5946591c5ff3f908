#pragma once

#include <vector>

#include "rankone/cauchy.hpp"
#include "rankone/measure.hpp"
#include "rankone/operator_matrix.hpp"

namespace rankone {

/// How a spectral-representation operator was assembled.
enum class VConstruction { formula, alternative_T, rigidity };

/// Unitary spectral representation V : L2(mu) -> L2(mu_alpha) of a perturbed
/// multiplication operator. Maps the constant function to the constant
/// function and intertwines A_alpha with multiplication on the target.
struct RepresentationOperator {
  OperatorMatrix matrix;
  cplx alpha{};
  VConstruction construction = VConstruction::formula;
};

/// Line representation assembled from the difference-quotient formula
/// V f(s) = f(s) - alpha * integral (f(s) - f(t))/(s - t) dmu(t). On the
/// basis indicators of an atomic mu this reduces to entries
/// alpha sqrt(v_i w_k)/(s_i - t_k) because supports are disjoint (functions
/// on supp mu extend by zero to supp mu_alpha). alpha = 0 degenerates to the
/// identity and requires mu_alpha == mu.
RepresentationOperator build_V_alpha(const Measure& mu,
                                     const Measure& mu_alpha, double alpha);

/// Circle analogue with kernel (1 - alpha)/(1 - conj(xi) z); param on the
/// unit circle. param = 1 degenerates to the identity.
RepresentationOperator build_V_gamma_circle(const Measure& mu,
                                            const Measure& mu_alpha,
                                            cplx alpha);

/// Same operator through boundary values: entries use T_side of the basis
/// functions at the target atoms, computed by radial limits, instead of the
/// exact kernel. The multiplication term f(s)(1 - alpha T_side 1(s)) drops
/// out: functions extend by zero and the coefficient vanishes at eigenvalues
/// anyway. Throws ConvergenceError listing any non-converged target points.
RepresentationOperator alternative_representation(const Measure& mu,
                                                  const Measure& mu_alpha,
                                                  cplx alpha,
                                                  BoundarySide side,
                                                  const RadialOptions& opt = {});

/// Result of the rigidity reconstruction: the positive weight h on supp nu
/// making M_h V unitary, and the renormalized measure |h|^2 nu (which is the
/// true perturbed spectral measure when V came from the formula).
struct RigidityResult {
  std::vector<double> h;
  Measure mu_alpha;
};

/// Finds the diagonal renormalization from the rows of V: M_h V is unitary
/// iff V V* is diagonal, and then h_i = (V V*)_ii^{-1/2}. Requires mu with
/// at least two support points and V with trivial kernel (smallest singular
/// value > 1e-10); off-diagonal mass in V V* beyond 1e-8 (relative) means no
/// renormalization exists and raises DomainError.
RigidityResult rigidity_reconstruct(const Measure& mu, const Measure& nu,
                                    cplx alpha, const OperatorMatrix& V);

}  // namespace rankone
