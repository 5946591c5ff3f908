#include "rankone/clark.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "rankone/errors.hpp"
#include "rankone/operator_matrix.hpp"
#include "rankone/perturbation.hpp"

namespace rankone {

namespace {

void require_clark_inputs(const Measure& mu, cplx gamma) {
  if (mu.support() != Support::circle)
    throw DomainError("the Clark operator lives over circle measures");
  if (std::abs(mu.mass() - 1.0) > 1e-9)
    throw DomainError("base measure must be a probability measure");
  if (std::abs(gamma) >= 1.0)
    throw DomainError("the contractive parameter needs |gamma| < 1");
}

std::size_t live_cell_count(const Measure& mu) {
  std::size_t live = 0;
  if (mu.grid())
    for (double d : mu.grid()->density)
      if (d > 0.0) ++live;
  return live;
}

void check_sample_size(const Measure& mu, const Samples& f) {
  if (f.size() != mu.atoms().size() + live_cell_count(mu))
    throw DomainError("sample vector does not match the measure layout");
}

// The degenerate base case: no atoms, unit density over the whole circle on a
// grid matching the boundary grid.
bool lebesgue_on_grid(const Measure& mu, const BoundaryGrid& grid) {
  if (mu.has_atoms() || !mu.grid()) return false;
  const Grid& g = *mu.grid();
  if (g.n != grid.size()) return false;
  if (std::abs(g.a + pi) > 1e-12 || std::abs(g.b - pi) > 1e-12) return false;
  for (double d : g.density)
    if (std::abs(d - 1.0) > 1e-12) return false;
  return true;
}

// gamma = 0 over the Lebesgue measure splits f into its analytic and
// anti-analytic parts and nothing else.
RouteResult trivial_phi_star(const ClarkContext& ctx,
                             const std::vector<cplx>& fz) {
  RouteResult out;
  out.vec.g1 = ctx.grid().project_analytic(fz);
  out.vec.g2.resize(fz.size());
  for (std::size_t j = 0; j < fz.size(); ++j)
    out.vec.g2[j] = fz[j] - out.vec.g1[j];
  return out;
}

}  // namespace

ClarkContext make_clark_context(const Measure& mu, cplx gamma, int grid_n) {
  RadialOptions opt;
  opt.max_steps = 52;
  opt.early_stop_rel = 0.0;
  opt.early_stop_abs = 0.0;
  return make_clark_context(mu, gamma, grid_n, opt);
}

ClarkContext make_clark_context(const Measure& mu, cplx gamma, int grid_n,
                                const RadialOptions& opt) {
  require_clark_inputs(mu, gamma);
  BoundaryGrid grid(grid_n);
  ClarkContext ctx{CharacteristicFunction{mu, gamma, grid, {}, {}, {}},
                   DefectVectorsModel{},
                   {},
                   {},
                   {},
                   {},
                   {},
                   opt};
  Samples ones = ones_samples(mu);
  ctx.one_plus = radial_schedule_on_grid(mu, ones, grid, BoundarySide::plus, opt);
  ctx.one_minus =
      radial_schedule_on_grid(mu, ones, grid, BoundarySide::minus, opt);
  ctx.t_plus_one = collapse_schedule(ctx.one_plus.steps, opt.rel_tol, opt.abs_tol);
  ctx.t_minus_one =
      collapse_schedule(ctx.one_minus.steps, opt.rel_tol, opt.abs_tol);
  const int n = grid.size();
  const double mass = mu.mass();
  ctx.cf.theta.resize(n);
  ctx.cf.delta.resize(n);
  ctx.cf.converged = ctx.t_plus_one.converged;
  ctx.theta0.resize(n);
  // density based defect, see char_function_boundary for the rationale
  const double sg = std::sqrt(1.0 - std::norm(gamma));
  for (int j = 0; j < n; ++j) {
    cplx r2 = 2.0 * ctx.t_plus_one.values[j] - mass;
    ctx.theta0[j] = theta_from_r2_value(r2, cplx(0.0));
    ctx.cf.theta[j] = theta_from_r2_value(r2, gamma);
    const double w = mu.density_at(grid.angle(j));
    const double d0 = std::sqrt(std::max(0.0, w)) * std::abs(1.0 - ctx.theta0[j]);
    ctx.cf.delta[j] = std::min(
        1.0, sg * d0 / std::abs(1.0 - std::conj(gamma) * ctx.theta0[j]));
  }
  ctx.defect = defect_vectors_model(ctx.cf);
  return ctx;
}

std::vector<cplx> samples_on_grid(const Measure& mu, const Samples& f,
                                  const BoundaryGrid& grid) {
  check_sample_size(mu, f);
  const auto& atoms = mu.atoms();
  const int n = grid.size();
  std::vector<cplx> out(n, cplx(0.0));
  if (mu.grid()) {
    const Grid& g = *mu.grid();
    std::vector<int> cell_sample(g.n, -1);
    int idx = static_cast<int>(atoms.size());
    for (int c = 0; c < g.n; ++c)
      if (g.density[c] > 0.0) cell_sample[c] = idx++;
    const double dx = g.dx();
    for (int j = 0; j < n; ++j) {
      int c = static_cast<int>(std::floor((grid.angle(j) - g.a) / dx));
      if (c >= 0 && c < g.n && cell_sample[c] >= 0) out[j] = f[cell_sample[c]];
    }
  }
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    double rel = (atoms[a].position + pi) / (2.0 * pi) * n - 0.5;
    long jn = std::lround(rel);
    if (jn >= 0 && jn < n &&
        std::abs(grid.angle(static_cast<int>(jn)) - atoms[a].position) < 1e-12)
      out[static_cast<std::size_t>(jn)] = f[a];
  }
  return out;
}

RouteResult phi_star_universal(const ClarkContext& ctx, const Samples& f) {
  const BoundaryGrid& grid = ctx.grid();
  const int n = grid.size();
  std::vector<cplx> fz = samples_on_grid(ctx.mu(), f, grid);
  if (ctx.gamma() == cplx(0.0) && lebesgue_on_grid(ctx.mu(), grid))
    return trivial_phi_star(ctx, fz);
  GridSchedule fs =
      radial_schedule_on_grid(ctx.mu(), f, grid, BoundarySide::plus, ctx.opt);
  std::vector<std::vector<cplx>> diff(fs.steps.size(), std::vector<cplx>(n));
  for (std::size_t k = 0; k < fs.steps.size(); ++k)
    for (int j = 0; j < n; ++j)
      diff[k][j] = fs.steps[k][j] - fz[j] * ctx.one_plus.steps[k][j];
  CollapsedSchedule d = collapse_schedule(diff, ctx.opt.rel_tol, ctx.opt.abs_tol);
  RouteResult out;
  out.vec.g1.resize(n);
  out.vec.g2.resize(n);
  for (int j = 0; j < n; ++j) {
    cplx z = grid.point(j);
    cplx a1 = ctx.defect.c.g1[j];
    cplx a2 = ctx.defect.c.g2[j];
    cplx b1 = a1 - z * ctx.defect.c1.g1[j];
    cplx b2 = a2 - z * ctx.defect.c1.g2[j];
    out.vec.g1[j] = a1 * fz[j] + b1 * d.values[j];
    out.vec.g2[j] = a2 * fz[j] + b2 * d.values[j];
    if (!d.converged[j]) out.unsettled.push_back(j);
  }
  return out;
}

RouteResult phi_star_snf(const ClarkContext& ctx, const Samples& f) {
  const BoundaryGrid& grid = ctx.grid();
  const int n = grid.size();
  std::vector<cplx> fz = samples_on_grid(ctx.mu(), f, grid);
  if (ctx.gamma() == cplx(0.0) && lebesgue_on_grid(ctx.mu(), grid))
    return trivial_phi_star(ctx, fz);
  GridSchedule fs =
      radial_schedule_on_grid(ctx.mu(), f, grid, BoundarySide::plus, ctx.opt);
  CollapsedSchedule tf = collapse_schedule(fs.steps, ctx.opt.rel_tol, ctx.opt.abs_tol);
  const cplx gb = std::conj(ctx.gamma());
  const double s = 1.0 / std::sqrt(1.0 - std::norm(ctx.gamma()));
  RouteResult out;
  out.vec.g1.assign(n, cplx(0.0));
  out.vec.g2.assign(n, cplx(0.0));
  for (int j = 0; j < n; ++j) {
    cplx t1 = ctx.t_plus_one.values[j];
    if (std::abs(t1) < 1e-12) {
      out.excluded.push_back(j);
      continue;
    }
    cplx tfj = tf.values[j];
    out.vec.g1[j] = s * (1.0 + gb * ctx.cf.theta[j]) / t1 * tfj;
    out.vec.g2[j] = s * ctx.cf.delta[j] *
                    ((gb - (gb - 1.0) * t1) * fz[j] + (gb - 1.0) * tfj);
    if (!tf.converged[j] || !ctx.t_plus_one.converged[j])
      out.unsettled.push_back(j);
  }
  return out;
}

ABCoefficients A_B_coefficients(const ClarkContext& ctx) {
  const BoundaryGrid& grid = ctx.grid();
  const int n = grid.size();
  const cplx g = ctx.gamma();
  const cplx gb = std::conj(g);
  const double s2 = std::sqrt(1.0 - std::norm(g));
  ABCoefficients out;
  out.a = ctx.defect.c;
  out.b.g1.resize(n);
  out.b.g2.resize(n);
  out.a_theta.g1.resize(n);
  out.a_theta.g2.resize(n);
  out.b_theta.g1.resize(n);
  out.b_theta.g2.resize(n);
  for (int j = 0; j < n; ++j) {
    cplx z = grid.point(j);
    out.b.g1[j] = ctx.defect.c.g1[j] - z * ctx.defect.c1.g1[j];
    out.b.g2[j] = ctx.defect.c.g2[j] - z * ctx.defect.c1.g2[j];
    cplx t0 = ctx.theta0[j];
    cplx den = 1.0 - gb * t0;
    double ad = std::abs(den);
    // same density based defect as the context, so both coefficient forms
    // share one delta
    const double w = ctx.mu().density_at(grid.angle(j));
    double d0 = std::sqrt(std::max(0.0, w)) * std::abs(1.0 - t0);
    out.a_theta.g1[j] = s2 / den;
    out.a_theta.g2[j] = gb * d0 / ad;
    out.b_theta.g1[j] = s2 * (1.0 - t0) / den;
    out.b_theta.g2[j] = (gb - 1.0) * d0 / ad;
  }
  double gap = 0.0;
  for (int j = 0; j < n; ++j) {
    gap = std::max(gap, std::abs(out.a.g1[j] - out.a_theta.g1[j]));
    gap = std::max(gap, std::abs(out.a.g2[j] - out.a_theta.g2[j]));
    gap = std::max(gap, std::abs(out.b.g1[j] - out.b_theta.g1[j]));
    gap = std::max(gap, std::abs(out.b.g2[j] - out.b_theta.g2[j]));
  }
  out.disagreement = gap;
  return out;
}

DbrResult dbr_components(const ClarkContext& ctx, const Samples& f,
                         double cutoff) {
  const BoundaryGrid& grid = ctx.grid();
  const int n = grid.size();
  double tminus_max = 0.0;
  for (const cplx& v : ctx.t_minus_one.values)
    tminus_max = std::max(tminus_max, std::abs(v));
  DbrResult out;
  if (tminus_max < cutoff) {
    RouteResult u = phi_star_universal(ctx, f);
    out.vec = transcription_map(u.vec, ctx.cf);
    out.unsettled = u.unsettled;
    out.lebesgue_fallback = true;
    return out;
  }
  GridSchedule fp =
      radial_schedule_on_grid(ctx.mu(), f, grid, BoundarySide::plus, ctx.opt);
  GridSchedule fm =
      radial_schedule_on_grid(ctx.mu(), f, grid, BoundarySide::minus, ctx.opt);
  std::vector<std::vector<cplx>> qp(fp.steps.size(), std::vector<cplx>(n));
  std::vector<std::vector<cplx>> qm(fm.steps.size(), std::vector<cplx>(n));
  for (std::size_t k = 0; k < fp.steps.size(); ++k)
    for (int j = 0; j < n; ++j) {
      qp[k][j] = fp.steps[k][j] / ctx.one_plus.steps[k][j];
      qm[k][j] = fm.steps[k][j] / ctx.one_minus.steps[k][j];
    }
  CollapsedSchedule cp = collapse_schedule(qp, ctx.opt.rel_tol, ctx.opt.abs_tol);
  CollapsedSchedule cm = collapse_schedule(qm, ctx.opt.rel_tol, ctx.opt.abs_tol);
  const cplx g = ctx.gamma();
  const double s2 = std::sqrt(1.0 - std::norm(g));
  out.vec.g_plus.resize(n);
  out.vec.g_minus.assign(n, cplx(0.0));
  for (int j = 0; j < n; ++j) {
    cplx t0 = ctx.theta0[j];
    out.vec.g_plus[j] = s2 / (1.0 - std::conj(g) * t0) * cp.values[j];
    if (std::abs(ctx.t_minus_one.values[j]) < cutoff) {
      out.excluded.push_back(j);
    } else {
      out.vec.g_minus[j] =
          s2 * std::conj(t0) / (1.0 - g * std::conj(t0)) * cm.values[j];
    }
    if (!cp.converged[j] || !cm.converged[j]) out.unsettled.push_back(j);
  }
  return out;
}

ForwardResult phi_forward(const ClarkContext& ctx, const ModelVectorDBR& g,
                          double w_cutoff) {
  const BoundaryGrid& grid = ctx.grid();
  const std::size_t n = static_cast<std::size_t>(grid.size());
  if (g.g_plus.size() != n || g.g_minus.size() != n)
    throw DomainError("model vector does not match the boundary grid");
  const Measure& mu = ctx.mu();
  const auto& atoms = mu.atoms();
  const cplx gam = ctx.gamma();
  const double s2 = std::sqrt(1.0 - std::norm(gam));
  ForwardResult out;
  out.atom_converged.resize(atoms.size());
  std::vector<cplx> coeffs = analytic_coefficients(grid, g.g_plus);
  const cplx pref = (1.0 - std::conj(gam)) / s2;
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    cplx xi = std::polar(1.0, atoms[a].position);
    RadialLimit lim = radial_limit(
        [&](double t) {
          return BoundaryGrid::eval_analytic(coeffs, (1.0 - t) * xi);
        },
        ctx.opt);
    out.f.push_back(pref * lim.value);
    out.atom_converged[a] = lim.converged;
  }
  if (mu.grid()) {
    const Grid& gr = *mu.grid();
    if (gr.n != grid.size() || std::abs(gr.a + pi) > 1e-12 ||
        std::abs(gr.b - pi) > 1e-12)
      throw DomainError(
          "recovering the a.c. part needs the density grid aligned with the "
          "boundary grid");
    int sample_idx = static_cast<int>(atoms.size());
    for (int c = 0; c < gr.n; ++c) {
      if (gr.density[c] <= 0.0) continue;
      double w = gr.density[c];
      cplx t0 = ctx.theta0[c];
      if (w <= w_cutoff || std::abs(1.0 - t0) < 1e-14) {
        out.f.push_back(cplx(0.0));
        out.excluded.push_back(sample_idx++);
        continue;
      }
      cplx term =
          (1.0 - std::conj(gam) * t0) / (1.0 - t0) * g.g_plus[c] +
          (1.0 - gam * std::conj(t0)) / (1.0 - std::conj(t0)) * g.g_minus[c];
      out.f.push_back(term / (s2 * w));
      ++sample_idx;
    }
  }
  return out;
}

std::vector<RadialLimit> normalized_transform_at_atoms(
    const Measure& mu, const Samples& f, const RadialOptions& opt) {
  if (mu.support() != Support::circle)
    throw DomainError("normalized transform check is a circle operation");
  check_sample_size(mu, f);
  Samples ones = ones_samples(mu);
  std::vector<RadialLimit> out;
  out.reserve(mu.atoms().size());
  for (const Atom& a : mu.atoms()) {
    cplx xi = std::polar(1.0, a.position);
    out.push_back(radial_limit(
        [&](double t) {
          cplx lambda = (1.0 - t) * xi;
          return cauchy_circle_R(mu, f, lambda) /
                 cauchy_circle_R(mu, ones, lambda);
        },
        opt));
  }
  return out;
}

AlphaClarkContext make_alpha_context(const ClarkContext& ctx, cplx alpha) {
  if (std::abs(std::abs(alpha) - 1.0) > 1e-12)
    throw DomainError("family parameter must be unimodular");
  Measure mu_alpha =
      spectral_measure_perturbed(UnitaryFamily{ctx.mu(), alpha});
  return make_alpha_context(ctx, alpha, mu_alpha);
}

AlphaClarkContext make_alpha_context(const ClarkContext& ctx, cplx alpha,
                                     const Measure& mu_alpha) {
  if (std::abs(std::abs(alpha) - 1.0) > 1e-12)
    throw DomainError("family parameter must be unimodular");
  AlphaClarkContext actx{alpha,
                         mu_alpha,
                         radial_schedule_on_grid(mu_alpha,
                                                 ones_samples(mu_alpha),
                                                 ctx.grid(), BoundarySide::plus,
                                                 ctx.opt),
                         {},
                         build_V_gamma_circle(ctx.mu(), mu_alpha, alpha)};
  actx.t_plus_one_alpha = collapse_schedule(actx.alpha_one_plus.steps,
                                            ctx.opt.rel_tol, ctx.opt.abs_tol);
  return actx;
}

RouteResult phi_star_alpha(const ClarkContext& ctx,
                           const AlphaClarkContext& actx,
                           const Samples& f_alpha) {
  const BoundaryGrid& grid = ctx.grid();
  const int n = grid.size();
  std::vector<cplx> fz = samples_on_grid(actx.mu_alpha, f_alpha, grid);
  GridSchedule fs = radial_schedule_on_grid(actx.mu_alpha, f_alpha, grid,
                                            BoundarySide::plus, ctx.opt);
  CollapsedSchedule tf = collapse_schedule(fs.steps, ctx.opt.rel_tol, ctx.opt.abs_tol);
  const cplx gb = std::conj(ctx.gamma());
  const cplx ab = std::conj(actx.alpha);
  const double s = 1.0 / std::sqrt(1.0 - std::norm(ctx.gamma()));
  RouteResult out;
  out.vec.g1.assign(n, cplx(0.0));
  out.vec.g2.assign(n, cplx(0.0));
  for (int j = 0; j < n; ++j) {
    cplx t1 = actx.t_plus_one_alpha.values[j];
    if (std::abs(t1) < 1e-12) {
      out.excluded.push_back(j);
      continue;
    }
    cplx tfj = tf.values[j];
    out.vec.g1[j] = s * (1.0 + gb * ctx.cf.theta[j]) / t1 * tfj;
    out.vec.g2[j] = s * ctx.cf.delta[j] *
                    ((gb - (gb - ab) * t1) * fz[j] + (gb - ab) * tfj);
    if (!tf.converged[j] || !actx.t_plus_one_alpha.converged[j])
      out.unsettled.push_back(j);
  }
  return out;
}

RouteResult phi_star_alpha_composed(const ClarkContext& ctx,
                                    const AlphaClarkContext& actx,
                                    const Samples& f_alpha) {
  WeightedPoints src = actx.mu_alpha.discretize();
  check_sample_size(actx.mu_alpha, f_alpha);
  Eigen::VectorXcd coords = coords_from_samples(src, f_alpha);
  Eigen::VectorXcd base_coords = actx.v_alpha.matrix.mat.adjoint() * coords;
  Samples f_mu = samples_from_coords(ctx.mu().discretize(), base_coords);
  return phi_star_universal(ctx, f_mu);
}

ModelVectorSNF alpha_transcription(const ModelVectorSNF& v, cplx alpha) {
  ModelVectorSNF out;
  out.g1 = v.g1;
  out.g2.resize(v.g2.size());
  const cplx ab = std::conj(alpha);
  for (std::size_t j = 0; j < v.g2.size(); ++j) out.g2[j] = ab * v.g2[j];
  return out;
}

InnerCaseClark inner_case_clark(const Measure& mu, cplx gamma) {
  InnerCaseClark out{inner_model_basis(mu, gamma), {}, 0.0};
  const auto& atoms = mu.atoms();
  const std::size_t n = out.basis.eigenvalues.size();
  out.w.resize(static_cast<Eigen::Index>(n),
               static_cast<Eigen::Index>(atoms.size()));
  const double s2 = std::sqrt(1.0 - std::norm(gamma));
  for (std::size_t i = 0; i < n; ++i) {
    cplx btop = ((1.0 - gamma) -
                 (1.0 - std::conj(gamma)) * out.basis.theta_at_eigen[i]) /
                s2;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      cplx xi = std::polar(1.0, atoms[k].position);
      out.w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          btop * std::sqrt(atoms[k].weight) /
          (1.0 - std::conj(xi) * out.basis.eigenvalues[i]);
    }
  }
  out.unitarity_residual =
      (out.w * out.w.adjoint() - out.basis.gram).norm() / out.basis.gram.norm();
  return out;
}

cplx b_top_interior(const Measure& mu, cplx gamma, cplx lambda) {
  cplx th = theta_from_measure(mu, gamma, lambda);
  return ((1.0 - gamma) - (1.0 - std::conj(gamma)) * th) /
         std::sqrt(1.0 - std::norm(gamma));
}

cplx phi_star_interior(const Measure& mu, cplx gamma, const Samples& f,
                       cplx lambda) {
  return b_top_interior(mu, gamma, lambda) * cauchy_circle_R(mu, f, lambda);
}

}  // namespace rankone
