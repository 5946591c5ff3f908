#include "rankone/operator_matrix.hpp"

#include <Eigen/SVD>

#include "rankone/errors.hpp"

namespace rankone {

double operator_norm(const Eigen::MatrixXcd& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

Eigen::VectorXcd coords_from_samples(const WeightedPoints& pts,
                                     const Samples& f) {
  if (f.size() != pts.size())
    throw DomainError("coords_from_samples: sample count mismatch");
  Eigen::VectorXcd c(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t k = 0; k < pts.size(); ++k)
    c(static_cast<Eigen::Index>(k)) = f[k] * std::sqrt(pts.weights[k]);
  return c;
}

Samples samples_from_coords(const WeightedPoints& pts,
                            const Eigen::VectorXcd& c) {
  if (static_cast<std::size_t>(c.size()) != pts.size())
    throw DomainError("samples_from_coords: coordinate count mismatch");
  Samples f(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k)
    f[k] = c(static_cast<Eigen::Index>(k)) / std::sqrt(pts.weights[k]);
  return f;
}

Samples apply(const OperatorMatrix& op, const Samples& f) {
  Eigen::VectorXcd c = coords_from_samples(op.source, f);
  return samples_from_coords(op.target, op.mat * c);
}

OperatorMatrix kernel_matrix(const Measure& mu, const Measure& nu,
                             const std::function<cplx(cplx, cplx)>& kernel) {
  OperatorMatrix op;
  op.source = mu.discretize();
  op.target = nu.discretize();
  const auto rows = static_cast<Eigen::Index>(op.target.size());
  const auto cols = static_cast<Eigen::Index>(op.source.size());
  op.mat.resize(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double si = std::sqrt(op.target.weights[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double sj =
          std::sqrt(op.source.weights[static_cast<std::size_t>(j)]);
      op.mat(i, j) = kernel(op.target.points[static_cast<std::size_t>(i)],
                            op.source.points[static_cast<std::size_t>(j)]) *
                     si * sj;
    }
  }
  return op;
}

OperatorMatrix regularized_T_eps_line(const Measure& mu, const Measure& nu,
                                      RegFamily family, double eps) {
  if (mu.support() != Support::line || nu.support() != Support::line)
    throw DomainError("regularized_T_eps_line: line measures required");
  if (!(eps > 0.0)) throw DomainError("regularized_T_eps_line: eps must be positive");
  std::function<cplx(cplx, cplx)> kernel;
  switch (family) {
    case RegFamily::cauchy_plus:
      kernel = [eps](cplx s, cplx t) { return 1.0 / (s - t + iu * eps); };
      break;
    case RegFamily::cauchy_minus:
      kernel = [eps](cplx s, cplx t) { return 1.0 / (s - t - iu * eps); };
      break;
    case RegFamily::truncation:
      kernel = [eps](cplx s, cplx t) {
        const cplx d = s - t;
        return std::abs(d) > eps ? 1.0 / d : cplx{0.0, 0.0};
      };
      break;
    case RegFamily::smooth:
      kernel = [eps](cplx s, cplx t) {
        const cplx d = s - t;
        const double r = std::abs(d);
        if (r == 0.0) return cplx{0.0, 0.0};
        return smooth_regularizer(r / eps) / d;
      };
      break;
  }
  return kernel_matrix(mu, nu, kernel);
}

OperatorMatrix regularized_T_r_circle(const Measure& mu, const Measure& nu,
                                      double r) {
  if (mu.support() != Support::circle || nu.support() != Support::circle)
    throw DomainError("regularized_T_r_circle: circle measures required");
  if (!(r >= 0.0) || r == 1.0)
    throw DomainError("regularized_T_r_circle: need r >= 0, r != 1");
  return kernel_matrix(mu, nu, [r](cplx z, cplx xi) {
    return 1.0 / (1.0 - r * std::conj(xi) * z);
  });
}

}  // namespace rankone
