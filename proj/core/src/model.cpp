#include "rankone/model.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "rankone/errors.hpp"
#include "rankone/perturbation.hpp"

namespace rankone {

namespace {

void require_probability_circle(const Measure& mu) {
  if (mu.support() != Support::circle)
    throw DomainError("characteristic functions live over circle measures");
  if (std::abs(mu.mass() - 1.0) > 1e-9)
    throw DomainError("base measure must be a probability measure");
}

void require_disc(cplx gamma) {
  if (std::abs(gamma) >= 1.0)
    throw DomainError("the contractive parameter needs |gamma| < 1");
}

void check_grid_sizes(const BoundaryGrid& grid, const ModelVectorSNF& v) {
  if (v.g1.size() != static_cast<std::size_t>(grid.size()) ||
      v.g2.size() != static_cast<std::size_t>(grid.size()))
    throw DomainError("model vector does not match the boundary grid");
}

}  // namespace

cplx theta_from_r2_value(cplx r2, cplx gamma) {
  cplx den = (1.0 - std::conj(gamma)) * r2 + (1.0 + std::conj(gamma));
  if (std::abs(den) < 1e-14)
    throw DomainError("characteristic function denominator degenerate");
  return ((1.0 - gamma) * r2 - (1.0 + gamma)) / den;
}

cplx theta_from_measure(const Measure& mu, cplx gamma, cplx lambda) {
  require_probability_circle(mu);
  require_disc(gamma);
  if (std::abs(lambda) >= 1.0)
    throw DomainError("characteristic function evaluated outside the open disc");
  return theta_from_r2_value(cauchy_circle_R2(mu, lambda), gamma);
}

cplx fractional_relation(cplx theta0, cplx gamma) {
  cplx den = 1.0 - std::conj(gamma) * theta0;
  if (std::abs(den) < 1e-14)
    throw DomainError("fractional relation degenerate at this point");
  return (theta0 - gamma) / den;
}

cplx fractional_relation_inverse(cplx theta_gamma, cplx gamma) {
  cplx den = 1.0 + std::conj(gamma) * theta_gamma;
  if (std::abs(den) < 1e-14)
    throw DomainError("fractional relation degenerate at this point");
  return (theta_gamma + gamma) / den;
}

cplx char_function_from_contraction(const Eigen::MatrixXcd& T,
                                    const Eigen::VectorXcd& b,
                                    const Eigen::VectorXcd& b1, cplx z) {
  const Eigen::Index n = T.rows();
  if (T.cols() != n || b.size() != n || b1.size() != n)
    throw DomainError("contraction and defect basis dimensions disagree");
  if (std::abs(z) >= 1.0)
    throw DomainError("characteristic function evaluated outside the open disc");
  {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(T);
    if (svd.singularValues()(0) > 1.0 + 1e-8)
      throw DomainError("matrix is not a contraction");
  }
  auto defect_root = [](const Eigen::MatrixXcd& G) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
    if (es.info() != Eigen::Success)
      throw SingularOperatorError("defect operator eigendecomposition failed");
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    return Eigen::MatrixXcd(es.eigenvectors() * lam.cwiseSqrt().asDiagonal() *
                            es.eigenvectors().adjoint());
  };
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd dt = defect_root(id - T.adjoint() * T);
  Eigen::MatrixXcd dts = defect_root(id - T * T.adjoint());
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(id - z * T.adjoint());
  if (!lu.isInvertible())
    throw SingularOperatorError("I - z T* is singular at this z");
  Eigen::MatrixXcd theta = -T + z * dts * lu.solve(dt);
  return b.dot(theta * b1);
}

double CharacteristicFunction::inner_score() const {
  double m = 0.0;
  for (double d : delta) m = std::max(m, d);
  return m;
}

CharacteristicFunction char_function_boundary(const Measure& mu, cplx gamma,
                                              int grid_n) {
  RadialOptions opt;
  opt.max_steps = 52;
  opt.early_stop_rel = 0.0;
  opt.early_stop_abs = 0.0;
  return char_function_boundary(mu, gamma, grid_n, opt);
}

CharacteristicFunction char_function_boundary(const Measure& mu, cplx gamma,
                                              int grid_n,
                                              const RadialOptions& opt) {
  require_probability_circle(mu);
  require_disc(gamma);
  BoundaryGrid grid(grid_n);
  // theta is a Moebius function of the boundary value of R, so the limit is
  // taken on R and transformed afterwards; the quotient form keeps the
  // near-atom blowup of R harmless.
  BoundaryField field = boundary_values_on_grid(mu, ones_samples(mu), grid,
                                                BoundarySide::plus, opt);
  const double mass = mu.mass();
  CharacteristicFunction cf{mu, gamma, grid, {}, {}, field.converged};
  cf.theta.resize(field.values.size());
  cf.delta.resize(field.values.size());
  // delta comes from the boundary density through the Fatou identity
  // 1 - |theta_0|^2 = w |1 - theta_0|^2 rather than from sqrt(1 - |theta|^2),
  // which would amplify the limit's rounding into a spurious defect wherever
  // the measure is singular and |theta| = 1.
  const double sg = std::sqrt(1.0 - std::norm(gamma));
  for (std::size_t j = 0; j < field.values.size(); ++j) {
    const cplx r2 = 2.0 * field.values[j] - mass;
    const cplx th0 = theta_from_r2_value(r2, cplx(0.0));
    cf.theta[j] = theta_from_r2_value(r2, gamma);
    const double w = mu.density_at(grid.angle(static_cast<int>(j)));
    const double d0 = std::sqrt(std::max(0.0, w)) * std::abs(1.0 - th0);
    cf.delta[j] = std::min(
        1.0, sg * d0 / std::abs(1.0 - std::conj(gamma) * th0));
  }
  return cf;
}

cplx model_inner(const BoundaryGrid& grid, const ModelVectorSNF& x,
                 const ModelVectorSNF& y) {
  check_grid_sizes(grid, x);
  check_grid_sizes(grid, y);
  return grid.inner(x.g1, y.g1) + grid.inner(x.g2, y.g2);
}

double model_norm(const BoundaryGrid& grid, const ModelVectorSNF& x) {
  return std::sqrt(std::max(0.0, model_inner(grid, x, x).real()));
}

DefectVectorsModel defect_vectors_model(const CharacteristicFunction& cf) {
  const int n = cf.size();
  const double s = 1.0 / std::sqrt(1.0 - std::norm(cf.gamma));
  const cplx g = cf.gamma;
  DefectVectorsModel d;
  d.c.g1.resize(n);
  d.c.g2.resize(n);
  d.c1.g1.resize(n);
  d.c1.g2.resize(n);
  for (int j = 0; j < n; ++j) {
    cplx z = cf.grid.point(j);
    cplx th = cf.theta[j];
    double dl = cf.delta[j];
    d.c.g1[j] = s * (1.0 + std::conj(g) * th);
    d.c.g2[j] = s * std::conj(g) * dl;
    // z^{-1} = conj(z) on the boundary
    d.c1.g1[j] = s * std::conj(z) * (th + g);
    d.c1.g2[j] = s * std::conj(z) * dl;
  }
  return d;
}

ModelVectorSNF snf_project(const ModelVectorSNF& raw,
                           const CharacteristicFunction& cf) {
  check_grid_sizes(cf.grid, raw);
  const int n = cf.size();
  std::vector<cplx> u = cf.grid.project_analytic(raw.g1);
  std::vector<cplx> v(n);
  for (int j = 0; j < n; ++j) v[j] = cf.delta[j] > 0.0 ? raw.g2[j] : cplx(0.0);
  std::vector<cplx> h_in(n);
  for (int j = 0; j < n; ++j)
    h_in[j] = std::conj(cf.theta[j]) * u[j] + cf.delta[j] * v[j];
  std::vector<cplx> h = cf.grid.project_analytic(h_in);
  ModelVectorSNF out;
  out.g1.resize(n);
  out.g2.resize(n);
  for (int j = 0; j < n; ++j) {
    out.g1[j] = u[j] - cf.theta[j] * h[j];
    out.g2[j] = v[j] - cf.delta[j] * h[j];
  }
  return out;
}

double snf_membership_residual(const ModelVectorSNF& v,
                               const CharacteristicFunction& cf) {
  ModelVectorSNF p = snf_project(v, cf);
  const int n = cf.size();
  ModelVectorSNF diff;
  diff.g1.resize(n);
  diff.g2.resize(n);
  for (int j = 0; j < n; ++j) {
    diff.g1[j] = v.g1[j] - p.g1[j];
    diff.g2[j] = v.g2[j] - p.g2[j];
  }
  return model_norm(cf.grid, diff) / std::max(1.0, model_norm(cf.grid, v));
}

ModelVectorSNF compressed_shift_projection(const ModelVectorSNF& v,
                                           const CharacteristicFunction& cf) {
  check_grid_sizes(cf.grid, v);
  const int n = cf.size();
  ModelVectorSNF zv;
  zv.g1.resize(n);
  zv.g2.resize(n);
  for (int j = 0; j < n; ++j) {
    cplx z = cf.grid.point(j);
    zv.g1[j] = z * v.g1[j];
    zv.g2[j] = z * v.g2[j];
  }
  return snf_project(zv, cf);
}

ModelVectorSNF compressed_shift_rank_one(const ModelVectorSNF& v,
                                         const CharacteristicFunction& cf,
                                         const DefectVectorsModel& d) {
  check_grid_sizes(cf.grid, v);
  const int n = cf.size();
  cplx ip = model_inner(cf.grid, v, d.c1);
  ModelVectorSNF out;
  out.g1.resize(n);
  out.g2.resize(n);
  for (int j = 0; j < n; ++j) {
    cplx z = cf.grid.point(j);
    out.g1[j] = z * v.g1[j] + (cf.gamma * d.c.g1[j] - z * d.c1.g1[j]) * ip;
    out.g2[j] = z * v.g2[j] + (cf.gamma * d.c.g2[j] - z * d.c1.g2[j]) * ip;
  }
  return out;
}

ModelVectorDBR transcription_map(const ModelVectorSNF& v,
                                 const CharacteristicFunction& cf) {
  check_grid_sizes(cf.grid, v);
  const int n = cf.size();
  ModelVectorDBR g;
  g.g_plus = v.g1;
  g.g_minus.resize(n);
  for (int j = 0; j < n; ++j)
    g.g_minus[j] = std::conj(cf.theta[j]) * v.g1[j] + cf.delta[j] * v.g2[j];
  return g;
}

ModelVectorSNF transcription_inverse(const ModelVectorDBR& g,
                                     const CharacteristicFunction& cf,
                                     double delta_cutoff) {
  const std::size_t n = static_cast<std::size_t>(cf.size());
  if (g.g_plus.size() != n || g.g_minus.size() != n)
    throw DomainError("model vector does not match the boundary grid");
  ModelVectorSNF v;
  v.g1 = g.g_plus;
  v.g2.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    v.g2[j] = cf.delta[j] > delta_cutoff
                  ? (g.g_minus[j] - std::conj(cf.theta[j]) * g.g_plus[j]) /
                        cf.delta[j]
                  : cplx(0.0);
  }
  return v;
}

double dbr_norm(const ModelVectorDBR& g, const CharacteristicFunction& cf,
                double sv_cutoff) {
  const std::size_t n = static_cast<std::size_t>(cf.size());
  if (g.g_plus.size() != n || g.g_minus.size() != n)
    throw DomainError("model vector does not match the boundary grid");
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    cplx u1 = g.g_plus[j], u2 = g.g_minus[j];
    double a = std::abs(cf.theta[j]);
    if (a == 0.0) {
      acc += std::norm(u1) + std::norm(u2);
      continue;
    }
    // W has unit eigenvectors (phi, +-1)/sqrt(2) with eigenvalues 1 +- a
    cplx phi = cf.theta[j] / a;
    cplx proj_p = (std::conj(phi) * u1 + u2) * inv_sqrt2;
    cplx proj_m = (std::conj(phi) * u1 - u2) * inv_sqrt2;
    acc += std::norm(proj_p) / (1.0 + a);
    if (1.0 - a > sv_cutoff) acc += std::norm(proj_m) / (1.0 - a);
  }
  return std::sqrt(acc / static_cast<double>(n));
}

double moore_penrose_identity_residual(const CharacteristicFunction& cf,
                                       double delta_threshold,
                                       double sv_cutoff) {
  double res = 0.0;
  for (int j = 0; j < cf.size(); ++j) {
    double dl = cf.delta[j];
    if (dl <= delta_threshold) continue;
    cplx th = cf.theta[j];
    double a = std::abs(th);
    Eigen::Matrix2cd winv;
    if (a == 0.0) {
      winv = Eigen::Matrix2cd::Identity();
    } else {
      cplx phi = th / a;
      Eigen::Vector2cd vp, vm;
      vp << phi, cplx(1.0);
      vm << phi, cplx(-1.0);
      vp *= 1.0 / std::sqrt(2.0);
      vm *= 1.0 / std::sqrt(2.0);
      winv = vp * vp.adjoint() / (1.0 + a);
      if (1.0 - a > sv_cutoff) winv += vm * vm.adjoint() / (1.0 - a);
    }
    Eigen::Matrix2cd left, right;
    left << cplx(1.0), th, cplx(0.0), cplx(dl);
    right << cplx(1.0), cplx(0.0), std::conj(th), cplx(dl);
    Eigen::Matrix2cd r = left * winv * right - Eigen::Matrix2cd::Identity();
    res = std::max(res, r.cwiseAbs().maxCoeff());
  }
  return res;
}

cplx reproducing_kernel(const Measure& mu, cplx gamma, cplx w, cplx z) {
  cplx tw = theta_from_measure(mu, gamma, w);
  cplx tz = theta_from_measure(mu, gamma, z);
  return (1.0 - std::conj(tw) * tz) / (1.0 - std::conj(w) * z);
}

InnerModelBasis inner_model_basis(const Measure& mu, cplx gamma) {
  require_probability_circle(mu);
  require_disc(gamma);
  if (!mu.is_atomic())
    throw DomainError("kernel basis needs a purely atomic base measure");
  UnitaryFamily fam{mu, gamma};
  Eigen::MatrixXcd m = build_U_param(fam).mat;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m);
  if (es.info() != Eigen::Success)
    throw SingularOperatorError("contraction eigendecomposition failed");
  InnerModelBasis basis;
  basis.gamma = gamma;
  basis.eigenvalues.assign(es.eigenvalues().data(),
                           es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(basis.eigenvalues.begin(), basis.eigenvalues.end(),
            [](cplx a, cplx b) {
              if (a.real() != b.real()) return a.real() < b.real();
              return a.imag() < b.imag();
            });
  const std::size_t n = basis.eigenvalues.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(basis.eigenvalues[i]) >= 1.0 - 1e-12)
      throw DomainError("contraction eigenvalue reaches the boundary");
    for (std::size_t k = i + 1; k < n; ++k)
      if (std::abs(basis.eigenvalues[i] - basis.eigenvalues[k]) < 1e-10)
        throw DomainError("contraction spectrum is (numerically) degenerate");
  }
  basis.theta_at_eigen.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    basis.theta_at_eigen[i] = theta_from_measure(mu, gamma, basis.eigenvalues[i]);
  basis.gram.resize(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      basis.gram(i, k) =
          (1.0 - std::conj(basis.theta_at_eigen[k]) * basis.theta_at_eigen[i]) /
          (1.0 - std::conj(basis.eigenvalues[k]) * basis.eigenvalues[i]);
  return basis;
}

Eigen::MatrixXcd gram_from_point_values(const InnerModelBasis& basis,
                                        const Eigen::MatrixXcd& values) {
  const Eigen::Index n = basis.gram.rows();
  if (values.rows() != n)
    throw DomainError("point values do not match the kernel basis dimension");
  Eigen::VectorXd scale =
      basis.gram.diagonal().real().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  Eigen::MatrixXcd gs =
      scale.asDiagonal() * basis.gram * scale.asDiagonal();
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(gs);
  if (ldlt.info() != Eigen::Success)
    throw SingularOperatorError("kernel Gram matrix is not positive definite");
  Eigen::MatrixXcd x =
      scale.asDiagonal() * ldlt.solve(scale.asDiagonal() * values);
  return values.adjoint() * x;
}

std::vector<cplx> analytic_coefficients(const BoundaryGrid& grid,
                                        const std::vector<cplx>& samples) {
  std::vector<cplx> harm = grid.harmonics(samples);
  return std::vector<cplx>(harm.begin() + grid.size() / 2, harm.end());
}

}  // namespace rankone
