#include "rankone/representation.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "rankone/errors.hpp"

namespace rankone {

namespace {

bool same_discretization(const WeightedPoints& a, const WeightedPoints& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a.coords[k] - b.coords[k]) > 1e-12) return false;
    if (std::abs(a.weights[k] - b.weights[k]) > 1e-12) return false;
  }
  return true;
}

RepresentationOperator identity_representation(const Measure& mu,
                                               const Measure& mu_alpha,
                                               cplx alpha,
                                               VConstruction construction) {
  RepresentationOperator rep;
  rep.alpha = alpha;
  rep.construction = construction;
  rep.matrix.source = mu.discretize();
  rep.matrix.target = mu_alpha.discretize();
  if (!same_discretization(rep.matrix.source, rep.matrix.target))
    throw DomainError(
        "degenerate parameter: representation is the identity, which needs "
        "mu_alpha == mu");
  const auto n = static_cast<Eigen::Index>(rep.matrix.source.size());
  rep.matrix.mat = Eigen::MatrixXcd::Identity(n, n);
  return rep;
}

}  // namespace

RepresentationOperator build_V_alpha(const Measure& mu,
                                     const Measure& mu_alpha, double alpha) {
  if (mu.support() != Support::line || mu_alpha.support() != Support::line)
    throw DomainError("build_V_alpha: line measures required");
  if (alpha == 0.0)
    return identity_representation(mu, mu_alpha, alpha, VConstruction::formula);
  RepresentationOperator rep;
  rep.alpha = alpha;
  rep.construction = VConstruction::formula;
  rep.matrix.source = mu.discretize();
  rep.matrix.target = mu_alpha.discretize();
  const auto rows = static_cast<Eigen::Index>(rep.matrix.target.size());
  const auto cols = static_cast<Eigen::Index>(rep.matrix.source.size());
  rep.matrix.mat.resize(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double s = rep.matrix.target.coords[static_cast<std::size_t>(i)];
    const double sv =
        std::sqrt(rep.matrix.target.weights[static_cast<std::size_t>(i)]);
    for (Eigen::Index k = 0; k < cols; ++k) {
      const double t = rep.matrix.source.coords[static_cast<std::size_t>(k)];
      if (s == t)
        throw DomainError(
            "build_V_alpha: supports of mu and mu_alpha collide; the "
            "construction needs the eigenvalue/atom interlacing that holds "
            "for alpha != 0");
      const double sw =
          std::sqrt(rep.matrix.source.weights[static_cast<std::size_t>(k)]);
      rep.matrix.mat(i, k) = alpha * sv * sw / (s - t);
    }
  }
  return rep;
}

RepresentationOperator build_V_gamma_circle(const Measure& mu,
                                            const Measure& mu_alpha,
                                            cplx alpha) {
  if (mu.support() != Support::circle || mu_alpha.support() != Support::circle)
    throw DomainError("build_V_gamma_circle: circle measures required");
  if (std::abs(std::abs(alpha) - 1.0) > 1e-12)
    throw DomainError("build_V_gamma_circle: unimodular parameter required");
  if (alpha == cplx(1.0, 0.0))
    return identity_representation(mu, mu_alpha, alpha, VConstruction::formula);
  RepresentationOperator rep;
  rep.alpha = alpha;
  rep.construction = VConstruction::formula;
  rep.matrix.source = mu.discretize();
  rep.matrix.target = mu_alpha.discretize();
  const auto rows = static_cast<Eigen::Index>(rep.matrix.target.size());
  const auto cols = static_cast<Eigen::Index>(rep.matrix.source.size());
  rep.matrix.mat.resize(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const cplx z = rep.matrix.target.points[static_cast<std::size_t>(i)];
    const double sv =
        std::sqrt(rep.matrix.target.weights[static_cast<std::size_t>(i)]);
    for (Eigen::Index k = 0; k < cols; ++k) {
      const cplx xi = rep.matrix.source.points[static_cast<std::size_t>(k)];
      const cplx d = 1.0 - std::conj(xi) * z;
      if (d == cplx(0.0, 0.0))
        throw DomainError(
            "build_V_gamma_circle: supports of mu and mu_alpha collide; the "
            "construction needs disjoint supports, which holds for alpha != 1");
      const double sw =
          std::sqrt(rep.matrix.source.weights[static_cast<std::size_t>(k)]);
      rep.matrix.mat(i, k) = (1.0 - alpha) * sv * sw / d;
    }
  }
  return rep;
}

RepresentationOperator alternative_representation(const Measure& mu,
                                                  const Measure& mu_alpha,
                                                  cplx alpha,
                                                  BoundarySide side,
                                                  const RadialOptions& opt) {
  if (mu.support() != mu_alpha.support())
    throw DomainError("alternative_representation: mixed supports");
  const bool line = mu.support() == Support::line;
  if ((line && alpha == cplx(0.0, 0.0)) || (!line && alpha == cplx(1.0, 0.0)))
    return identity_representation(mu, mu_alpha, alpha,
                                   VConstruction::alternative_T);
  const cplx coeff = line ? alpha : 1.0 - alpha;
  RepresentationOperator rep;
  rep.alpha = alpha;
  rep.construction = VConstruction::alternative_T;
  rep.matrix.source = mu.discretize();
  rep.matrix.target = mu_alpha.discretize();
  const auto rows = static_cast<Eigen::Index>(rep.matrix.target.size());
  const auto cols = static_cast<Eigen::Index>(rep.matrix.source.size());
  rep.matrix.mat.resize(rows, cols);
  std::vector<std::size_t> stuck;
  for (Eigen::Index k = 0; k < cols; ++k) {
    Samples f(rep.matrix.source.size(), cplx{0.0, 0.0});
    f[static_cast<std::size_t>(k)] =
        1.0 / std::sqrt(rep.matrix.source.weights[static_cast<std::size_t>(k)]);
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double p = rep.matrix.target.coords[static_cast<std::size_t>(i)];
      const RadialLimit lim = boundary_value(mu, f, side, p, opt);
      if (!lim.converged) stuck.push_back(static_cast<std::size_t>(i));
      const double sv =
          std::sqrt(rep.matrix.target.weights[static_cast<std::size_t>(i)]);
      rep.matrix.mat(i, k) = coeff * sv * lim.value;
    }
  }
  if (!stuck.empty())
    throw ConvergenceError(
        "alternative_representation: boundary values did not stabilize at "
        "some target points",
        std::move(stuck));
  return rep;
}

RigidityResult rigidity_reconstruct(const Measure& mu, const Measure& nu,
                                    cplx alpha, const OperatorMatrix& V) {
  (void)alpha;
  if (mu.discretize().size() < 2)
    throw DomainError(
        "rigidity_reconstruct: mu must be supported on at least two distinct "
        "points");
  const auto n = V.mat.rows();
  if (n != V.mat.cols())
    throw DomainError("rigidity_reconstruct: square operator required");
  if (V.target.size() != nu.discretize().size())
    throw DomainError("rigidity_reconstruct: V target does not match nu");
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(V.mat);
  if (svd.singularValues()(n - 1) < 1e-10)
    throw SingularOperatorError("rigidity_reconstruct: V has numerical kernel");
  const Eigen::MatrixXcd gram = V.mat * V.mat.adjoint();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double scale =
          std::sqrt(gram(i, i).real() * gram(j, j).real());
      if (std::abs(gram(i, j)) > 1e-8 * scale)
        throw DomainError(
            "rigidity_reconstruct: rows of V are not orthogonal; not a "
            "renormalizable representation");
    }
  }
  RigidityResult out{std::vector<double>(static_cast<std::size_t>(n)),
                     Measure(nu.support(), {{0.0, 1.0}})};
  std::vector<Atom> atoms(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    out.h[ui] = 1.0 / std::sqrt(gram(i, i).real());
    atoms[ui] = {V.target.coords[ui],
                 out.h[ui] * out.h[ui] * V.target.weights[ui]};
  }
  out.mu_alpha = Measure(nu.support(), std::move(atoms));
  return out;
}

}  // namespace rankone
