#pragma once

#include <Eigen/Dense>

#include "rankone/cauchy.hpp"
#include "rankone/measure.hpp"
#include "rankone/operator_matrix.hpp"

namespace rankone {

/// The self-adjoint family A_alpha = A + alpha (., phi) phi where A is
/// multiplication by the variable on L2(mu) and phi is the constant
/// function 1. The measure is the spectral measure of A with respect to phi.
struct SelfAdjointFamily {
  Measure base_measure;
  double alpha = 0.0;
};

/// The circle family U_param = U + (param - 1)(., U* b) b on L2(mu), with
/// U multiplication by the variable, b the constant function 1 and
/// mass(mu) = 1. Unimodular param gives a unitary operator, |param| < 1 a
/// contraction.
struct UnitaryFamily {
  Measure base_measure;
  cplx param{1.0, 0.0};
};

/// The defect pieces of a contractive U_gamma: I - U* U equals
/// (1 - |gamma|^2) b1 b1* and I - U U* equals (1 - |gamma|^2) b b*, so both
/// defect operators are rank one with the same scalar factor.
struct DefectData {
  double defect_norm_factor = 1.0;  // (1 - |gamma|^2)^{1/2}
  Eigen::VectorXcd b;               // coordinates of the constant function 1
  Eigen::VectorXcd b1;              // coordinates of U* 1
};

/// Inverse of I - a b^H, which is I + a b^H / d with the perturbation
/// determinant d = 1 - b^H a. Throws SingularOperatorError when |d| < 1e-14.
Eigen::MatrixXcd rank_one_inverse(const Eigen::VectorXcd& a,
                                  const Eigen::VectorXcd& b);

/// Dense matrix of A_alpha in the orthonormal basis e_k = weight_k^{-1/2} 1_k
/// over the effective atoms of the measure (grid cells are lumped to their
/// midpoints by Measure::discretize, so a.c. parts are approximate here).
OperatorMatrix build_A_alpha(const SelfAdjointFamily& fam);

/// Dense matrix of U_param, same basis conventions as build_A_alpha.
OperatorMatrix build_U_param(const UnitaryFamily& fam);

/// Coordinates of the constant function 1 (the vector phi / b).
Eigen::VectorXcd constant_coords(const WeightedPoints& pts);

/// (A_alpha - lambda)^{-1} f via the rank-one update of the diagonal
/// resolvent; f and the result are coordinate vectors. Throws PoleError when
/// lambda hits the spectrum (vanishing 1 + alpha F(lambda), or an atom).
Eigen::VectorXcd resolvent_perturbed(const SelfAdjointFamily& fam,
                                     const Eigen::VectorXcd& f, cplx lambda);
Eigen::VectorXcd resolvent_perturbed(const UnitaryFamily& fam,
                                     const Eigen::VectorXcd& f, cplx lambda);

/// F_alpha = F / (1 + alpha F), pointwise.
cplx aronszajn_krein(cplx F, cplx alpha);
AnalyticField aronszajn_krein(const AnalyticField& F, cplx alpha);

/// Spectral measure of the perturbed operator with respect to the constant
/// vector, by dense eigendecomposition: atoms at eigenvalues, weight
/// |<phi, v_k>|^2 per unit eigenvector. Requires an atomic base measure.
/// The unitary overload requires |param| = 1 and returns atoms by angle.
Measure spectral_measure_perturbed(const SelfAdjointFamily& fam);
Measure spectral_measure_perturbed(const UnitaryFamily& fam);

/// Defect data of a contractive family (|param| <= 1; unimodular param gives
/// factor 0, returned rather than thrown).
DefectData defect_data(const UnitaryFamily& fam);

}  // namespace rankone
