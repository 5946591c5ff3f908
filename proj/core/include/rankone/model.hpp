#pragma once

#include <vector>

#include <Eigen/Dense>

#include "rankone/cauchy.hpp"
#include "rankone/grid.hpp"
#include "rankone/measure.hpp"
#include "rankone/types.hpp"

namespace rankone {

/// Characteristic value theta_gamma(lambda) of the contractive family member
/// at an interior point, computed from the R2 transform of the base measure
/// as the quotient ((1-g) R2 - (1+g)) / ((1-conj g) R2 + (1+conj g)).
/// The quotient form stays balanced when R2 blows up near an atom, where the
/// value approaches the unimodular constant (1-g)/(1-conj g).
cplx theta_from_measure(const Measure& mu, cplx gamma, cplx lambda);

/// Moebius form of the characteristic function in terms of R2 data (interior
/// values or boundary limits): ((1-g)r2 - (1+g)) / ((1-conj(g))r2 + (1+conj(g))).
cplx theta_from_r2_value(cplx r2, cplx gamma);

/// Moebius link between the gamma = 0 representative and theta_gamma,
/// theta_gamma = (theta_0 - gamma) / (1 - conj(gamma) theta_0), and its
/// inverse. Round trips are exact up to roundoff.
cplx fractional_relation(cplx theta0, cplx gamma);
cplx fractional_relation_inverse(cplx theta_gamma, cplx gamma);

/// Scalar characteristic value of a finite contraction matrix at z: the
/// operator -T + z D_{T*} (I - z T*)^{-1} D_T compressed to the defect bases
/// b1 (input side) and b (output side). The defect square roots come from
/// Hermitian eigendecompositions, so this route carries no knowledge of any
/// rank-one structure of T and serves as an independent cross-check of
/// theta_from_measure.
cplx char_function_from_contraction(const Eigen::MatrixXcd& T,
                                    const Eigen::VectorXcd& b,
                                    const Eigen::VectorXcd& b1, cplx z);

/// theta_gamma sampled on a uniform boundary grid by radial limits, together
/// with the defect delta = (1 - |theta|^2)^{1/2} clamped into [0, 1].
struct CharacteristicFunction {
  Measure mu;  // base circle probability measure
  cplx gamma{};
  BoundaryGrid grid;
  std::vector<cplx> theta;
  std::vector<double> delta;
  std::vector<bool> converged;

  int size() const { return grid.size(); }
  /// Interior evaluation straight from the measure.
  cplx at(cplx lambda) const { return theta_from_measure(mu, gamma, lambda); }
  /// Max of delta over the grid; near zero iff theta is inner on the grid.
  double inner_score() const;
};

/// Builds the boundary samples. The default schedule runs longer than the
/// RadialOptions default and never stops early: delta is the square root of
/// the cancellation 1 - |theta|^2, so |theta| needs to be resolved to about
/// 1e-13 before inner stretches read as inner.
CharacteristicFunction char_function_boundary(const Measure& mu, cplx gamma,
                                              int grid_n = 1 << 12);
CharacteristicFunction char_function_boundary(const Measure& mu, cplx gamma,
                                              int grid_n,
                                              const RadialOptions& opt);

/// Sz.-Nagy-Foias model vector: boundary samples of the analytic story g1
/// and the defect story g2 (supported where delta > 0).
struct ModelVectorSNF {
  std::vector<cplx> g1;
  std::vector<cplx> g2;
};

/// de Branges-Rovnyak pair: g_plus analytic, g_minus anti-analytic.
struct ModelVectorDBR {
  std::vector<cplx> g_plus;
  std::vector<cplx> g_minus;
};

/// The distinguished defect vectors c and c1 sampled on the grid.
struct DefectVectorsModel {
  ModelVectorSNF c;
  ModelVectorSNF c1;
};

/// Inner product (x, y) = (1/n) sum over the grid of both stories.
cplx model_inner(const BoundaryGrid& grid, const ModelVectorSNF& x,
                 const ModelVectorSNF& y);
double model_norm(const BoundaryGrid& grid, const ModelVectorSNF& x);

/// c   = (1-|g|^2)^{-1/2} (1 + conj(g) theta,       conj(g) delta)
/// c1  = (1-|g|^2)^{-1/2} (z^{-1} (theta + g),      z^{-1} delta)
/// using theta_gamma(0) = -gamma; both have unit model norm up to quadrature.
DefectVectorsModel defect_vectors_model(const CharacteristicFunction& cf);

/// Orthogonal projection of raw boundary data onto the sampled model space.
/// The analytic split handles the ambient part; the (theta, delta) H^2 range
/// is removed through its isometry W h = (theta h, delta h), whose discrete
/// adjoint is W* (a, b) = P_+(conj(theta) a + delta b) because
/// |theta|^2 + delta^2 = 1 pointwise. Exact on inputs whose products with
/// theta stay inside the sampled bandwidth; otherwise accurate to the
/// aliasing level of theta's Fourier tail.
ModelVectorSNF snf_project(const ModelVectorSNF& raw,
                           const CharacteristicFunction& cf);

/// Distance from v to its own projection, relative to max(1, |v|).
double snf_membership_residual(const ModelVectorSNF& v,
                               const CharacteristicFunction& cf);

/// Compressed shift, projection construction: project z * v.
ModelVectorSNF compressed_shift_projection(const ModelVectorSNF& v,
                                           const CharacteristicFunction& cf);
/// Compressed shift, rank-one closed form:
/// M_z v + (gamma c - z c1) (v, c1).
ModelVectorSNF compressed_shift_rank_one(const ModelVectorSNF& v,
                                         const CharacteristicFunction& cf,
                                         const DefectVectorsModel& d);

/// (g1, g2) -> (g1, conj(theta) g1 + delta g2); the second component is
/// anti-analytic exactly when the input belongs to the model space.
ModelVectorDBR transcription_map(const ModelVectorSNF& v,
                                 const CharacteristicFunction& cf);
/// Inverse on the set delta > cutoff via g2 delta = g_minus - conj(theta) g1;
/// g2 is set to zero where delta is below the cutoff.
ModelVectorSNF transcription_inverse(const ModelVectorDBR& g,
                                     const CharacteristicFunction& cf,
                                     double delta_cutoff = 1e-10);

/// Norm of a pair in the weighted space L^2(W), W the Moore-Penrose inverse
/// of [[1, theta], [conj(theta), 1]] with singular values below sv_cutoff
/// treated as zero.
double dbr_norm(const ModelVectorDBR& g, const CharacteristicFunction& cf,
                double sv_cutoff = 1e-10);

/// Max entrywise residual of
/// (1, theta; 0, delta) W^[-1] (1, 0; conj theta, delta) = I
/// over grid points with delta > delta_threshold. This is the pointwise
/// identity behind the equality of the two transcription norms.
double moore_penrose_identity_residual(const CharacteristicFunction& cf,
                                       double delta_threshold = 1e-6,
                                       double sv_cutoff = 1e-10);

/// Reproducing kernel of the model space at w, evaluated at z:
/// k_w(z) = (1 - conj(theta(w)) theta(z)) / (1 - conj(w) z).
cplx reproducing_kernel(const Measure& mu, cplx gamma, cplx w, cplx z);

/// Kernel-coordinate workspace for inner theta built from an atomic base
/// measure: the model space is spanned by the reproducing kernels at the
/// eigenvalues of the contraction, and every inner product reduces to the
/// closed-form Gram matrix G_ij = k_j(lambda_i). No quadrature enters.
struct InnerModelBasis {
  cplx gamma{};
  std::vector<cplx> eigenvalues;     // spectrum of the contraction, in the disc
  std::vector<cplx> theta_at_eigen;  // ~0; kept for the general kernel form
  Eigen::MatrixXcd gram;
};

InnerModelBasis inner_model_basis(const Measure& mu, cplx gamma);

/// Functions u_k known by their values w_k(i) = u_k(lambda_i) satisfy
/// (u_k, u_l) = w_l^H G^{-1} w_k. Columns of `values` are the w_k; the
/// returned matrix M has M(i, j) = (u_j, u_i), i.e. the Gram matrix of the
/// family. Solved through a diagonally scaled LDLT of G.
Eigen::MatrixXcd gram_from_point_values(const InnerModelBasis& basis,
                                        const Eigen::MatrixXcd& values);

/// Analytic Fourier coefficients (m = 0, 1, ...) of sampled boundary data,
/// ready for BoundaryGrid::eval_analytic.
std::vector<cplx> analytic_coefficients(const BoundaryGrid& grid,
                                        const std::vector<cplx>& samples);

}  // namespace rankone
