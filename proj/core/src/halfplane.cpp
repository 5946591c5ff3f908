#include "rankone/halfplane.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "rankone/errors.hpp"
#include "rankone/model.hpp"

namespace rankone {

namespace {

constexpr cplx kI{0.0, 1.0};
const double kSqrtPi = std::sqrt(pi);

void require_line(const Measure& mu, const char* who) {
  if (mu.support() != Support::line) {
    throw DomainError(std::string(who) + " needs a line measure");
  }
}

void require_atomic_line(const Measure& mu, const char* who) {
  require_line(mu, who);
  if (mu.has_ac()) {
    throw DomainError(std::string(who) +
                      " is implemented for purely atomic measures");
  }
  if (!mu.has_atoms()) {
    throw DomainError(std::string(who) + " needs a nonzero measure");
  }
}

void require_upper(cplx w, const char* who) {
  if (!(w.imag() > 0.0)) {
    throw DomainError(std::string(who) +
                      " evaluates in the open upper half plane");
  }
}

// t values of the vertical approach z = x + it, mirroring the radial
// schedule on the circle side so both routes settle identically.
std::vector<double> vertical_heights(const RadialOptions& opt) {
  std::vector<double> ts;
  ts.reserve(static_cast<size_t>(opt.max_steps));
  double t = opt.t0;
  for (int k = 0; k < opt.max_steps; ++k) {
    ts.push_back(t);
    t *= 0.5;
  }
  return ts;
}

// (1 / 2iP) sum_a f_a w_a [1/(t_a - z) - 1/(t_a + i)] at z = x_j + it for
// every height of the schedule. Dropping `subtract` gives the plain kernel
// (1 / 2iP) sum_a f_a w_a / (t_a - z).
std::vector<std::vector<cplx>> vertical_schedule(const Measure& mu,
                                                 const Samples& f,
                                                 const std::vector<double>& xs,
                                                 const RadialOptions& opt,
                                                 bool subtract) {
  const auto& atoms = mu.atoms();
  const size_t na = atoms.size();
  std::vector<cplx> fw(na);
  cplx sub = 0.0;
  for (size_t a = 0; a < na; ++a) {
    fw[a] = f[a] * atoms[a].weight;
    sub += fw[a] / cplx(atoms[a].position, 1.0);
  }
  if (!subtract) sub = 0.0;
  const double p = poisson_mass(mu);
  const cplx scale = cplx(0.0, -0.5) / p;  // 1 / (2 i P)

  const std::vector<double> heights = vertical_heights(opt);
  std::vector<std::vector<cplx>> steps(heights.size());
  for (size_t k = 0; k < heights.size(); ++k) {
    const double t = heights[k];
    std::vector<cplx>& row = steps[k];
    row.resize(xs.size());
    for (size_t j = 0; j < xs.size(); ++j) {
      const cplx z(xs[j], t);
      cplx acc = 0.0;
      for (size_t a = 0; a < na; ++a) {
        acc += fw[a] / (atoms[a].position - z);
      }
      row[j] = scale * (acc - sub);
    }
  }
  return steps;
}

// Index of the atom of mu_line sitting at x (within tol), or -1.
int atom_at(const Measure& mu_line, double x, double tol) {
  const auto& atoms = mu_line.atoms();
  for (size_t a = 0; a < atoms.size(); ++a) {
    if (std::abs(atoms[a].position - x) <= tol) return static_cast<int>(a);
  }
  return -1;
}

// sigma(k): index of the pushed-forward atom of mu_circle matching line atom
// k by angle. Throws if the match is ambiguous or missing.
std::vector<int> atom_permutation(const Measure& mu_line,
                                  const Measure& mu_circle) {
  const auto& la = mu_line.atoms();
  const auto& ca = mu_circle.atoms();
  if (la.size() != ca.size()) {
    throw DomainError("pushforward atom count mismatch");
  }
  std::vector<int> sigma(la.size(), -1);
  for (size_t k = 0; k < la.size(); ++k) {
    const double angle = std::arg(omega_map(cplx(la[k].position, 0.0)));
    int hit = -1;
    for (size_t j = 0; j < ca.size(); ++j) {
      if (std::abs(ca[j].position - angle) <= 1e-12) {
        if (hit >= 0) throw DomainError("ambiguous pushforward atom match");
        hit = static_cast<int>(j);
      }
    }
    if (hit < 0) throw DomainError("pushforward atom match not found");
    sigma[k] = hit;
  }
  return sigma;
}

void check_atom_samples(const Measure& mu, const Samples& f, const char* who) {
  if (f.size() != mu.atoms().size()) {
    throw DomainError(std::string(who) + ": sample count " +
                      std::to_string(f.size()) + " does not match the " +
                      std::to_string(mu.atoms().size()) + " atoms");
  }
}

}  // namespace

cplx omega_map(cplx z) {
  const cplx den = z + kI;
  if (std::abs(den) < 1e-300) throw DomainError("omega_map: pole at z = -i");
  return (z - kI) / den;
}

cplx omega_inverse(cplx xi) {
  const cplx den = 1.0 - xi;
  if (std::abs(den) < 1e-300) {
    throw DomainError("omega_inverse: pole at xi = 1");
  }
  return kI * (1.0 + xi) / den;
}

cplx gamma_of_alpha(const Measure& mu_line, cplx alpha) {
  require_line(mu_line, "gamma_of_alpha");
  const cplx q = cauchy_line(mu_line, ones_samples(mu_line), cplx(0.0, -1.0));
  const cplx den = 1.0 + alpha * q;
  if (std::abs(den) < 1e-14) {
    throw DomainError("gamma_of_alpha: 1 + alpha F(-i) vanishes");
  }
  return (1.0 + alpha * std::conj(q)) / den;
}

Measure pushforward_to_circle(const Measure& mu_line) {
  require_atomic_line(mu_line, "pushforward_to_circle");
  const double p = poisson_mass(mu_line);
  if (!(p > 0.0)) {
    throw DomainError("pushforward_to_circle: zero Poisson mass");
  }
  std::vector<Atom> atoms;
  atoms.reserve(mu_line.atoms().size());
  for (const Atom& a : mu_line.atoms()) {
    const double angle = std::arg(omega_map(cplx(a.position, 0.0)));
    const double weight = a.weight / (p * (1.0 + a.position * a.position));
    atoms.push_back(Atom{angle, weight});
  }
  return Measure(Support::circle, std::move(atoms), std::nullopt);
}

cplx halfplane_R(const Measure& mu_line, const Samples& f, cplx w) {
  require_line(mu_line, "halfplane_R");
  require_upper(w, "halfplane_R");
  const double p = poisson_mass(mu_line);
  const cplx c = cauchy_line(mu_line, f, w) -
                 cauchy_line(mu_line, f, cplx(0.0, -1.0));
  return cplx(0.0, -0.5) * c / p;
}

cplx halfplane_R1(const Measure& mu_line, const Samples& f, cplx w) {
  require_line(mu_line, "halfplane_R1");
  require_upper(w, "halfplane_R1");
  const double p = poisson_mass(mu_line);
  const cplx c =
      cauchy_line(mu_line, f, w) - cauchy_line(mu_line, f, cplx(0.0, 1.0));
  return cplx(0.0, -0.5) * c / p;
}

cplx halfplane_R2(const Measure& mu_line, const Samples& f, cplx w) {
  require_line(mu_line, "halfplane_R2");
  require_upper(w, "halfplane_R2");
  const double p = poisson_mass(mu_line);
  // x/(x^2+1) = (1/2)[1/(x - i) + 1/(x + i)]
  const cplx m1 = 0.5 * (cauchy_line(mu_line, f, cplx(0.0, 1.0)) +
                         cauchy_line(mu_line, f, cplx(0.0, -1.0)));
  return -kI * (cauchy_line(mu_line, f, w) - m1) / p;
}

cplx theta_halfplane(const Measure& mu_line, cplx gamma, cplx w) {
  if (!(std::abs(gamma) < 1.0)) {
    throw DomainError("theta_halfplane needs |gamma| < 1");
  }
  const cplx r2 = halfplane_R2(mu_line, ones_samples(mu_line), w);
  return theta_from_r2_value(r2, gamma);
}

HalfplaneDefects halfplane_defect_vectors(const Measure& mu_line) {
  require_line(mu_line, "halfplane_defect_vectors");
  const double p = poisson_mass(mu_line);
  if (!(p > 0.0)) {
    throw DomainError("halfplane_defect_vectors: zero Poisson mass");
  }
  const double root = std::sqrt(p);
  const WeightedPoints pts = mu_line.discretize();
  HalfplaneDefects out;
  out.b.resize(pts.coords.size());
  out.b1.resize(pts.coords.size());
  for (size_t i = 0; i < pts.coords.size(); ++i) {
    out.b[i] = 1.0 / (root * cplx(pts.coords[i], 1.0));
    out.b1[i] = 1.0 / (root * cplx(pts.coords[i], -1.0));
  }
  out.resolvent_norm = root;
  return out;
}

double cayley_identity_residual(const Measure& mu_line, cplx alpha) {
  require_atomic_line(mu_line, "cayley_identity_residual");
  const auto& atoms = mu_line.atoms();
  const int n = static_cast<int>(atoms.size());

  Eigen::VectorXd s(n);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    s(k) = std::sqrt(atoms[k].weight);
    a(k, k) = atoms[k].position;
  }
  a += alpha * (s * s.transpose()).cast<cplx>();

  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(n, n);
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(a + kI * eye);
  if (!lu.isInvertible()) {
    throw ConvergenceError("cayley_identity_residual: A + i is singular");
  }
  const Eigen::MatrixXcd direct = (a - kI * eye) * lu.solve(eye);

  const cplx gamma = gamma_of_alpha(mu_line, alpha);
  const double p = poisson_mass(mu_line);
  const double root = std::sqrt(p);
  Eigen::VectorXcd b(n), b1(n);
  Eigen::MatrixXcd formula = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    b(k) = s(k) / (root * cplx(atoms[k].position, 1.0));
    b1(k) = s(k) / (root * cplx(atoms[k].position, -1.0));
    formula(k, k) = omega_map(cplx(atoms[k].position, 0.0));
  }
  formula += (gamma - 1.0) * b * b1.adjoint();

  return (direct - formula).norm();
}

double omega_conjugation_residual(const Measure& mu_line) {
  require_atomic_line(mu_line, "omega_conjugation_residual");
  const Measure mu_circle = pushforward_to_circle(mu_line);
  const auto& la = mu_line.atoms();
  const auto& ca = mu_circle.atoms();
  const int n = static_cast<int>(la.size());
  const double p = poisson_mass(mu_line);
  const std::vector<int> sigma = atom_permutation(mu_line, mu_circle);

  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd xi = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd target = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const int j = sigma[k];
    w(k, j) = std::sqrt(la[k].weight / p) /
              (cplx(la[k].position, 1.0) * std::sqrt(ca[j].weight));
    xi(j, j) = std::polar(1.0, ca[j].position);
    target(k, k) = omega_map(cplx(la[k].position, 0.0));
  }
  return (w * xi * w.adjoint() - target).norm();
}

CayleyBridge make_cayley_bridge(const Measure& mu_line, cplx alpha) {
  require_atomic_line(mu_line, "make_cayley_bridge");
  const cplx q = cauchy_line(mu_line, ones_samples(mu_line), cplx(0.0, -1.0));
  const double p = poisson_mass(mu_line);
  const cplx gamma = gamma_of_alpha(mu_line, alpha);
  return CayleyBridge{alpha,   gamma,
                      q,       p,
                      mu_line, pushforward_to_circle(mu_line)};
}

HalfplaneClarkContext make_halfplane_context(const Measure& mu_line,
                                             cplx alpha, int grid_n) {
  RadialOptions opt;
  opt.t0 = 0.5;
  opt.max_steps = 52;
  opt.rel_tol = 1e-8;
  opt.abs_tol = 1e-12;
  opt.early_stop_rel = 0.0;
  opt.early_stop_abs = 0.0;
  return make_halfplane_context(mu_line, alpha, grid_n, opt);
}

HalfplaneClarkContext make_halfplane_context(const Measure& mu_line,
                                             cplx alpha, int grid_n,
                                             const RadialOptions& opt) {
  if (!(alpha.imag() > 0.0)) {
    throw DomainError("make_halfplane_context needs Im alpha > 0");
  }
  CayleyBridge bridge = make_cayley_bridge(mu_line, alpha);
  if (std::abs(bridge.p - 1.0) > 1e-9) {
    throw DomainError(
        "make_halfplane_context needs a Poisson normalized measure; rescale "
        "by 1/P first");
  }
  ClarkContext circle =
      make_clark_context(bridge.mu_circle, bridge.gamma, grid_n, opt);

  HalfplaneClarkContext ctx{std::move(bridge), std::move(circle),
                            {},                {},
                            {},                {},
                            {}};
  const BoundaryGrid& grid = ctx.circle.grid();
  ctx.real_points.resize(grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    ctx.real_points[j] = omega_inverse(grid.point(j)).real();
  }
  ctx.one_steps =
      vertical_schedule(ctx.bridge.mu_line, ones_samples(ctx.bridge.mu_line),
                        ctx.real_points, opt, /*subtract=*/true);
  ctx.t_plus_one = collapse_schedule(ctx.one_steps, opt.rel_tol, opt.abs_tol);

  // theta(x_j) equals the circle boundary value at the matching grid point,
  // so reuse it instead of refitting the Moebius form to the vertical limits.
  // All three phi* routes then share one (theta, delta) pair; recomputing it
  // here would let sqrt(1 - |theta|^2) amplify path dependent rounding near
  // atoms, where delta is a pure cancellation residue.
  ctx.theta = ctx.circle.cf.theta;
  ctx.delta = ctx.circle.cf.delta;
  return ctx;
}

HalfplaneModelVector phi_star_halfplane_universal(
    const HalfplaneClarkContext& ctx, const Samples& f) {
  const Measure& mu = ctx.bridge.mu_line;
  check_atom_samples(mu, f, "phi_star_halfplane_universal");
  const auto& atoms = mu.atoms();
  const int n = static_cast<int>(ctx.real_points.size());
  const cplx gamma = ctx.bridge.gamma;
  const cplx gbar = std::conj(gamma);
  const double s = 1.0 / std::sqrt(1.0 - std::norm(gamma));

  Samples ftilde(atoms.size());
  for (size_t a = 0; a < atoms.size(); ++a) {
    ftilde[a] = cplx(atoms[a].position, 1.0) * f[a];
  }

  // f~ at each grid point, zero off the support
  std::vector<cplx> fz(static_cast<size_t>(n), cplx(0.0));
  for (int j = 0; j < n; ++j) {
    const int a = atom_at(mu, ctx.real_points[j], 1e-12);
    if (a >= 0) fz[static_cast<size_t>(j)] = ftilde[static_cast<size_t>(a)];
  }

  // joint limit of R(f~ mu)(z) - f~(x) R(mu)(z), formed per height
  std::vector<std::vector<cplx>> steps = vertical_schedule(
      mu, ftilde, ctx.real_points, ctx.circle.opt, /*subtract=*/true);
  for (size_t k = 0; k < steps.size(); ++k) {
    for (int j = 0; j < n; ++j) {
      steps[k][static_cast<size_t>(j)] -=
          fz[static_cast<size_t>(j)] * ctx.one_steps[k][static_cast<size_t>(j)];
    }
  }
  const CollapsedSchedule joint =
      collapse_schedule(steps, ctx.circle.opt.rel_tol, ctx.circle.opt.abs_tol);

  HalfplaneModelVector out;
  out.points = ctx.real_points;
  out.g1.resize(static_cast<size_t>(n));
  out.g2.resize(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    const size_t sj = static_cast<size_t>(j);
    const cplx th = ctx.theta[sj];
    const double dl = ctx.delta[sj];
    const cplx zr = omega_map(cplx(ctx.real_points[sj], 0.0));
    const cplx c_g1 = s * (1.0 + gbar * th);
    const cplx c_g2 = s * gbar * dl;
    const cplx c1_g1 = s * std::conj(zr) * (th + gamma);
    const cplx c1_g2 = s * std::conj(zr) * dl;
    const cplx b_g1 = c_g1 - zr * c1_g1;
    const cplx b_g2 = c_g2 - zr * c1_g2;
    const cplx den = kSqrtPi * cplx(ctx.real_points[sj], 1.0);
    out.g1[sj] = (c_g1 * fz[sj] + b_g1 * joint.values[sj]) / den;
    out.g2[sj] = (c_g2 * fz[sj] + b_g2 * joint.values[sj]) / den;
  }
  return out;
}

HalfplaneModelVector phi_star_halfplane_snf(const HalfplaneClarkContext& ctx,
                                            const Samples& f) {
  const Measure& mu = ctx.bridge.mu_line;
  check_atom_samples(mu, f, "phi_star_halfplane_snf");
  const int n = static_cast<int>(ctx.real_points.size());
  const cplx gamma = ctx.bridge.gamma;
  const cplx gbar = std::conj(gamma);
  const double s2 = std::sqrt(1.0 - std::norm(gamma));

  // plain Cauchy kernel, no subtraction
  const std::vector<std::vector<cplx>> steps = vertical_schedule(
      mu, f, ctx.real_points, ctx.circle.opt, /*subtract=*/false);
  const CollapsedSchedule t1 =
      collapse_schedule(steps, ctx.circle.opt.rel_tol, ctx.circle.opt.abs_tol);

  HalfplaneModelVector out;
  out.points = ctx.real_points;
  out.g1.resize(static_cast<size_t>(n));
  out.g2.resize(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    const size_t sj = static_cast<size_t>(j);
    const cplx tp1 = ctx.t_plus_one.values[sj];
    if (std::abs(tp1) < 1e-12) {
      out.g1[sj] = 0.0;
      out.g2[sj] = 0.0;
      continue;
    }
    const int a = atom_at(mu, ctx.real_points[sj], 1e-12);
    const cplx fval = a >= 0 ? f[static_cast<size_t>(a)] : cplx(0.0);
    const cplx th = ctx.theta[sj];
    const double dl = ctx.delta[sj];
    out.g1[sj] =
        (1.0 + gbar * th) / tp1 * t1.values[sj] / (kSqrtPi * s2);
    out.g2[sj] = ((gbar - (gbar - 1.0) * tp1) * dl * fval +
                  (gbar - 1.0) * dl * t1.values[sj]) /
                 (kSqrtPi * s2);
  }
  return out;
}

HalfplaneModelVector phi_star_halfplane_via_circle(
    const HalfplaneClarkContext& ctx, const Samples& f) {
  const Measure& mu = ctx.bridge.mu_line;
  check_atom_samples(mu, f, "phi_star_halfplane_via_circle");
  const auto& la = mu.atoms();
  const std::vector<int> sigma = atom_permutation(mu, ctx.bridge.mu_circle);

  Samples ft(la.size());
  for (size_t k = 0; k < la.size(); ++k) {
    ft[static_cast<size_t>(sigma[k])] = cplx(la[k].position, 1.0) * f[k];
  }
  const RouteResult circle = phi_star_universal(ctx.circle, ft);

  HalfplaneModelVector out;
  out.points = ctx.real_points;
  out.g1.resize(ctx.real_points.size());
  out.g2.resize(ctx.real_points.size());
  for (size_t j = 0; j < ctx.real_points.size(); ++j) {
    const cplx den = kSqrtPi * cplx(ctx.real_points[j], 1.0);
    out.g1[j] = circle.vec.g1[j] / den;
    out.g2[j] = circle.vec.g2[j] / den;
  }
  return out;
}

double route_residual(const HalfplaneModelVector& a,
                      const HalfplaneModelVector& b) {
  if (a.g1.size() != b.g1.size() || a.g2.size() != b.g2.size()) {
    throw DomainError("route_residual: size mismatch");
  }
  double worst = 0.0;
  for (size_t j = 0; j < a.g1.size(); ++j) {
    worst = std::max(worst, std::abs(a.g1[j] - b.g1[j]));
    worst = std::max(worst, std::abs(a.g2[j] - b.g2[j]));
  }
  return worst;
}

}  // namespace rankone
