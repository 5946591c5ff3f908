#pragma once

#include <Eigen/Dense>

#include "rankone/cauchy.hpp"
#include "rankone/measure.hpp"

namespace rankone {

/// A bounded operator L2(mu) -> L2(nu) between discretized measures, stored
/// in the orthonormal bases e_k = weight_k^{-1/2} * indicator_k. For an
/// integral kernel K the entries are K(s_i, t_j) * sqrt(nu_i) * sqrt(mu_j).
struct OperatorMatrix {
  Eigen::MatrixXcd mat;
  WeightedPoints source;  // mu, indexes columns
  WeightedPoints target;  // nu, indexes rows

  std::size_t rows() const { return source.size() ? mat.rows() : 0; }
};

/// Largest singular value.
double operator_norm(const Eigen::MatrixXcd& m);

Eigen::VectorXcd coords_from_samples(const WeightedPoints& pts,
                                     const Samples& f);
Samples samples_from_coords(const WeightedPoints& pts,
                            const Eigen::VectorXcd& c);

/// Applies the operator to function samples on the source, returning samples
/// on the target.
Samples apply(const OperatorMatrix& op, const Samples& f);

/// Builds the weighted matrix of a pointwise kernel over the effective atoms
/// of mu (columns) and nu (rows).
OperatorMatrix kernel_matrix(const Measure& mu, const Measure& nu,
                             const std::function<cplx(cplx, cplx)>& kernel);

/// Regularized Cauchy-type operator on the line; see RegFamily for the
/// kernels. eps must be positive.
OperatorMatrix regularized_T_eps_line(const Measure& mu, const Measure& nu,
                                      RegFamily family, double eps);

/// Circle regularization 1/(1 - r conj(xi) z); any r >= 0 except r = 1.
OperatorMatrix regularized_T_r_circle(const Measure& mu, const Measure& nu,
                                      double r);

}  // namespace rankone
