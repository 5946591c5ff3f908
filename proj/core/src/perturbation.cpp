#include "rankone/perturbation.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "rankone/errors.hpp"

namespace rankone {

namespace {

void require_line(const Measure& mu, const char* who) {
  if (mu.support() != Support::line)
    throw DomainError(std::string(who) + ": line measure required");
}

void require_circle_prob(const Measure& mu, const char* who) {
  if (mu.support() != Support::circle)
    throw DomainError(std::string(who) + ": circle measure required");
  if (std::abs(mu.mass() - 1.0) > 1e-9)
    throw DomainError(std::string(who) + ": base measure must have mass 1");
}

// Atoms-at-eigenvalues helper: merges exactly coincident positions so the
// Measure constructor (which rejects duplicates) accepts solver output.
Measure atoms_to_measure(Support support, std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& x, const Atom& y) { return x.position < y.position; });
  std::vector<Atom> merged;
  for (const auto& a : atoms) {
    if (a.weight <= 0.0) continue;
    if (!merged.empty() && merged.back().position == a.position)
      merged.back().weight += a.weight;
    else
      merged.push_back(a);
  }
  return Measure(support, merged);
}

}  // namespace

Eigen::MatrixXcd rank_one_inverse(const Eigen::VectorXcd& a,
                                  const Eigen::VectorXcd& b) {
  if (a.size() != b.size())
    throw DomainError("rank_one_inverse: dimension mismatch");
  const cplx d = 1.0 - b.dot(a);  // Eigen's dot conjugates its receiver
  if (std::abs(d) < 1e-14)
    throw SingularOperatorError("rank_one_inverse: perturbation determinant ~ 0");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(a.size(), a.size());
  m.noalias() += (a / d) * b.adjoint();
  return m;
}

Eigen::VectorXcd constant_coords(const WeightedPoints& pts) {
  Eigen::VectorXcd u(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t k = 0; k < pts.size(); ++k)
    u(static_cast<Eigen::Index>(k)) = std::sqrt(pts.weights[k]);
  return u;
}

OperatorMatrix build_A_alpha(const SelfAdjointFamily& fam) {
  require_line(fam.base_measure, "build_A_alpha");
  OperatorMatrix op;
  op.source = fam.base_measure.discretize();
  op.target = op.source;
  const auto n = static_cast<Eigen::Index>(op.source.size());
  Eigen::VectorXcd u = constant_coords(op.source);
  op.mat = fam.alpha * (u * u.transpose());
  for (Eigen::Index k = 0; k < n; ++k)
    op.mat(k, k) += op.source.points[static_cast<std::size_t>(k)];
  return op;
}

OperatorMatrix build_U_param(const UnitaryFamily& fam) {
  require_circle_prob(fam.base_measure, "build_U_param");
  if (std::abs(fam.param) > 1.0 + 1e-12)
    throw DomainError("build_U_param: |param| must be <= 1");
  OperatorMatrix op;
  op.source = fam.base_measure.discretize();
  op.target = op.source;
  const auto n = static_cast<Eigen::Index>(op.source.size());
  Eigen::VectorXcd u = constant_coords(op.source);
  Eigen::VectorXcd xi(n);
  for (Eigen::Index k = 0; k < n; ++k)
    xi(k) = op.source.points[static_cast<std::size_t>(k)];
  // U + (param - 1) b b1* with b = 1 and b1 = U* b; entries
  // xi_j delta_jk + (param - 1) sqrt(w_j w_k) xi_k.
  op.mat = (fam.param - 1.0) * (u * (u.cwiseProduct(xi)).transpose());
  for (Eigen::Index k = 0; k < n; ++k) op.mat(k, k) += xi(k);
  return op;
}

Eigen::VectorXcd resolvent_perturbed(const SelfAdjointFamily& fam,
                                     const Eigen::VectorXcd& f, cplx lambda) {
  const WeightedPoints pts = fam.base_measure.discretize();
  const auto n = static_cast<Eigen::Index>(pts.size());
  if (f.size() != n) throw DomainError("resolvent_perturbed: size mismatch");
  Eigen::VectorXcd g(n), r0u(n);
  cplx F = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const cplx d = pts.points[static_cast<std::size_t>(k)] - lambda;
    if (d == cplx(0.0, 0.0))
      throw PoleError("resolvent_perturbed: lambda is an atom of the base measure");
    g(k) = f(k) / d;
    const double sw = std::sqrt(pts.weights[static_cast<std::size_t>(k)]);
    r0u(k) = sw / d;
    F += pts.weights[static_cast<std::size_t>(k)] / d;
  }
  const cplx denom = 1.0 + fam.alpha * F;
  if (std::abs(denom) < 1e-14 * std::max(1.0, std::abs(fam.alpha * F)))
    throw PoleError("resolvent_perturbed: lambda is an eigenvalue of A_alpha");
  // u has real entries, so the conjugation in dot() is harmless here.
  Eigen::VectorXcd u = constant_coords(pts);
  return g - (fam.alpha * u.dot(g) / denom) * r0u;
}

Eigen::VectorXcd resolvent_perturbed(const UnitaryFamily& fam,
                                     const Eigen::VectorXcd& f, cplx lambda) {
  const WeightedPoints pts = fam.base_measure.discretize();
  const auto n = static_cast<Eigen::Index>(pts.size());
  if (f.size() != n) throw DomainError("resolvent_perturbed: size mismatch");
  Eigen::VectorXcd u = constant_coords(pts);
  Eigen::VectorXcd g(n), r0a(n), b1(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const cplx xi = pts.points[static_cast<std::size_t>(k)];
    const cplx d = xi - lambda;
    if (d == cplx(0.0, 0.0))
      throw PoleError("resolvent_perturbed: lambda is an atom of the base measure");
    g(k) = f(k) / d;
    r0a(k) = (fam.param - 1.0) * u(k) / d;
    b1(k) = u(k) * std::conj(xi);
  }
  const cplx denom = 1.0 + b1.dot(r0a);
  if (std::abs(denom) < 1e-14 * std::max(1.0, std::abs(b1.dot(r0a))))
    throw PoleError("resolvent_perturbed: lambda is an eigenvalue of U_param");
  return g - r0a * (b1.dot(g) / denom);
}

cplx aronszajn_krein(cplx F, cplx alpha) {
  const cplx denom = 1.0 + alpha * F;
  if (std::abs(denom) < 1e-14 * std::max(1.0, std::abs(alpha * F)))
    throw PoleError("aronszajn_krein: 1 + alpha F vanishes at an evaluation point");
  return F / denom;
}

AnalyticField aronszajn_krein(const AnalyticField& F, cplx alpha) {
  AnalyticField out;
  out.side = F.side;
  out.points = F.points;
  out.values.reserve(F.values.size());
  for (cplx v : F.values) out.values.push_back(aronszajn_krein(v, alpha));
  return out;
}

Measure spectral_measure_perturbed(const SelfAdjointFamily& fam) {
  require_line(fam.base_measure, "spectral_measure_perturbed");
  if (!fam.base_measure.is_atomic())
    throw DomainError("spectral_measure_perturbed: atomic base measure required");
  const OperatorMatrix op = build_A_alpha(fam);
  const auto n = static_cast<Eigen::Index>(op.source.size());
  Eigen::MatrixXd a = op.mat.real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("spectral_measure_perturbed: eigensolver failed");
  Eigen::VectorXd u = constant_coords(op.source).real();
  std::vector<Atom> atoms;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double ip = u.dot(es.eigenvectors().col(k));
    atoms.push_back({es.eigenvalues()(k), ip * ip});
  }
  return atoms_to_measure(Support::line, std::move(atoms));
}

Measure spectral_measure_perturbed(const UnitaryFamily& fam) {
  require_circle_prob(fam.base_measure, "spectral_measure_perturbed");
  if (!fam.base_measure.is_atomic())
    throw DomainError("spectral_measure_perturbed: atomic base measure required");
  if (std::abs(std::abs(fam.param) - 1.0) > 1e-12)
    throw DomainError(
        "spectral_measure_perturbed: unimodular parameter required (the "
        "contractive case has no spectral measure on the circle)");
  const OperatorMatrix op = build_U_param(fam);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(op.mat);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("spectral_measure_perturbed: eigensolver failed");
  Eigen::VectorXcd b = constant_coords(op.source);
  std::vector<Atom> atoms;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    Eigen::VectorXcd v = es.eigenvectors().col(k);
    v /= v.norm();
    const double w = std::norm(b.dot(v));
    double ang = std::arg(es.eigenvalues()(k));
    if (ang == -pi) ang = pi;  // arg(-1 - 0.0i) lands on the open end
    atoms.push_back({ang, w});
  }
  return atoms_to_measure(Support::circle, std::move(atoms));
}

DefectData defect_data(const UnitaryFamily& fam) {
  require_circle_prob(fam.base_measure, "defect_data");
  if (std::abs(fam.param) > 1.0 + 1e-12)
    throw DomainError("defect_data: |param| must be <= 1");
  const WeightedPoints pts = fam.base_measure.discretize();
  DefectData out;
  out.defect_norm_factor =
      std::sqrt(std::max(0.0, 1.0 - std::norm(fam.param)));
  out.b = constant_coords(pts);
  out.b1 = out.b;
  for (Eigen::Index k = 0; k < out.b1.size(); ++k)
    out.b1(k) *= std::conj(pts.points[static_cast<std::size_t>(k)]);
  return out;
}

}  // namespace rankone
