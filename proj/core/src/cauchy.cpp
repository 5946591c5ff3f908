#include "rankone/cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/FFT>

#include "rankone/errors.hpp"
#include "rankone/grid.hpp"

namespace rankone {

namespace {

// integral of dt/(t - lambda) over [lo, hi]. Along a horizontal segment the
// argument of t - lambda moves monotonically, so the principal branch is
// always the continuous one as long as lambda avoids the closed segment.
cplx segment_cauchy(double lo, double hi, cplx lambda) {
  if (lambda.imag() == 0.0 && lambda.real() >= lo && lambda.real() <= hi)
    throw PoleError("Cauchy integral evaluated on its own cell");
  return std::log(cplx(hi, 0) - lambda) - std::log(cplx(lo, 0) - lambda);
}

// (1/2 pi i) * integral over the arc {e^{i t}: t in [tlo, thi]} of
// du/(u - lambda). The principal log of the endpoint ratio is only safe while
// the subtended angle stays small; near the arc the true angle approaches
// (and in the chord-arc lens exceeds) pi, so halve until the principal value
// is trustworthy. For arcs under pi/2 the winding can never reach the
// opposite principal sheet once |Im log| <= pi/2.
cplx arc_log(double tlo, double thi, cplx lambda, int depth) {
  if (depth > 64) throw PoleError("Cauchy integral evaluated on its own arc");
  cplx ulo = std::polar(1.0, tlo), uhi = std::polar(1.0, thi);
  cplx v = std::log((uhi - lambda) / (ulo - lambda));
  if (std::abs(v.imag()) <= pi / 2.0 && std::isfinite(v.real())) return v;
  double tm = 0.5 * (tlo + thi);
  return arc_log(tlo, tm, lambda, depth + 1) + arc_log(tm, thi, lambda, depth + 1);
}

cplx arc_cauchy(double tlo, double thi, cplx lambda) {
  return arc_log(tlo, thi, lambda, 0) / (2.0 * pi * iu);
}

void check_samples(const Measure& mu, const Samples& f) {
  if (f.size() != mu.discretize().size())
    throw DomainError("sample vector does not match the measure's index set");
}

struct CellRange {
  const Grid* grid = nullptr;
  std::vector<int> live;  // indices of positive-density cells, storage order
};

CellRange live_cells(const Measure& mu) {
  CellRange r;
  if (!mu.grid()) return r;
  r.grid = &*mu.grid();
  for (int j = 0; j < r.grid->n; ++j)
    if (r.grid->density[j] > 0.0) r.live.push_back(j);
  return r;
}

}  // namespace

Samples ones_samples(const Measure& mu) {
  return Samples(mu.discretize().size(), cplx(1.0, 0.0));
}

cplx integrate(const Measure& mu, const Samples& f) {
  check_samples(mu, f);
  cplx s = 0.0;
  std::size_t idx = 0;
  for (const auto& a : mu.atoms()) s += f[idx++] * a.weight;
  auto cells = live_cells(mu);
  if (cells.grid) {
    double cell_factor = mu.support() == Support::line
                             ? cells.grid->dx()
                             : cells.grid->dx() / (2.0 * pi);
    cplx c = 0.0;
    for (int j : cells.live) c += f[idx++] * cells.grid->density[j] * cell_factor;
    s += c;
  }
  return s;
}

cplx cauchy_line(const Measure& mu, const Samples& f, cplx lambda) {
  if (mu.support() != Support::line)
    throw DomainError("cauchy_line needs a line measure");
  check_samples(mu, f);
  cplx s = 0.0;
  std::size_t idx = 0;
  for (const auto& a : mu.atoms()) {
    cplx d = cplx(a.position, 0) - lambda;
    if (d == cplx(0.0, 0.0)) throw PoleError("Cauchy transform evaluated at an atom");
    s += f[idx++] * a.weight / d;
  }
  auto cells = live_cells(mu);
  if (cells.grid) {
    for (int j : cells.live) {
      s += f[idx++] * cells.grid->density[j] *
           segment_cauchy(cells.grid->cell_lo(j), cells.grid->cell_hi(j), lambda);
    }
  }
  return s;
}

cplx cauchy_line(const Measure& mu, cplx lambda) {
  return cauchy_line(mu, ones_samples(mu), lambda);
}

cplx cauchy_circle_R(const Measure& mu, const Samples& f, cplx lambda) {
  if (mu.support() != Support::circle)
    throw DomainError("circle transform needs a circle measure");
  check_samples(mu, f);
  cplx s = 0.0;
  std::size_t idx = 0;
  for (const auto& a : mu.atoms()) {
    cplx xi = std::polar(1.0, a.position);
    cplx d = 1.0 - std::conj(xi) * lambda;
    if (d == cplx(0.0, 0.0)) throw PoleError("Cauchy transform evaluated at an atom");
    s += f[idx++] * a.weight / d;
  }
  auto cells = live_cells(mu);
  if (cells.grid) {
    // 1/(1 - conj(xi) lambda) d theta/(2 pi) over an arc reduces to the
    // plain Cauchy kernel: substituting u = e^{i theta} gives
    // (1/2 pi i) du/(u - lambda).
    for (int j : cells.live) {
      s += f[idx++] * cells.grid->density[j] *
           arc_cauchy(cells.grid->cell_lo(j), cells.grid->cell_hi(j), lambda);
    }
  }
  return s;
}

cplx cauchy_circle_R(const Measure& mu, cplx lambda) {
  return cauchy_circle_R(mu, ones_samples(mu), lambda);
}

cplx cauchy_circle_R1(const Measure& mu, const Samples& f, cplx lambda) {
  return cauchy_circle_R(mu, f, lambda) - integrate(mu, f);
}

cplx cauchy_circle_R1(const Measure& mu, cplx lambda) {
  return cauchy_circle_R1(mu, ones_samples(mu), lambda);
}

cplx cauchy_circle_R2(const Measure& mu, const Samples& f, cplx lambda) {
  return 2.0 * cauchy_circle_R(mu, f, lambda) - integrate(mu, f);
}

cplx cauchy_circle_R2(const Measure& mu, cplx lambda) {
  return cauchy_circle_R2(mu, ones_samples(mu), lambda);
}

AnalyticField cauchy_field_line(const Measure& mu, const Samples& f,
                                const std::vector<cplx>& points) {
  AnalyticField out;
  out.points = points;
  out.values.reserve(points.size());
  for (cplx z : points) out.values.push_back(cauchy_line(mu, f, z));
  return out;
}

AnalyticField cauchy_field_circle(const Measure& mu, const Samples& f,
                                  const std::vector<cplx>& points) {
  AnalyticField out;
  out.points = points;
  out.values.reserve(points.size());
  for (cplx z : points) out.values.push_back(cauchy_circle_R(mu, f, z));
  return out;
}

RadialLimit radial_limit(const std::function<cplx(double)>& value_at,
                         const RadialOptions& opt) {
  auto close = [](cplx a, cplx b, double rel, double abs) {
    double d = std::abs(a - b);
    return d <= std::max(rel * std::max(std::abs(a), std::abs(b)), abs);
  };
  RadialLimit out;
  cplx v2{}, v1{};
  double t = opt.t0;
  for (int k = 0; k < opt.max_steps; ++k, t *= 0.5) {
    cplx v = value_at(t);
    out.value = v;
    out.steps = k + 1;
    if (k >= 2) {
      bool flagged = close(v, v1, opt.rel_tol, opt.abs_tol) &&
                     close(v1, v2, opt.rel_tol, opt.abs_tol);
      out.converged = out.converged || flagged;
      if (close(v, v1, opt.early_stop_rel, opt.early_stop_abs) &&
          close(v1, v2, opt.early_stop_rel, opt.early_stop_abs))
        break;
    }
    v2 = v1;
    v1 = v;
  }
  return out;
}

RadialLimit boundary_value(const Measure& mu, const Samples& f,
                           BoundarySide side, double point,
                           const RadialOptions& opt) {
  if (mu.support() == Support::line) {
    // T_+- f(s) = lim over eps of integral f dmu / (s - t +- i eps), which is
    // -R f mu at lambda = s +- i eps.
    double sgn = side == BoundarySide::plus ? 1.0 : -1.0;
    return radial_limit(
        [&](double eps) { return -cauchy_line(mu, f, cplx(point, sgn * eps)); },
        opt);
  }
  cplx z = std::polar(1.0, point);
  double sgn = side == BoundarySide::plus ? 1.0 : -1.0;
  // inside for plus (r < 1), outside for minus (r > 1)
  return radial_limit(
      [&](double t) { return cauchy_circle_R(mu, f, (1.0 - sgn * t) * z); }, opt);
}

BoundaryField boundary_values(const Measure& mu, const Samples& f,
                              BoundarySide side,
                              const std::vector<double>& points,
                              const RadialOptions& opt) {
  BoundaryField out;
  out.support = mu.support();
  out.side = side;
  out.points = points;
  out.values.reserve(points.size());
  out.converged.reserve(points.size());
  for (double p : points) {
    auto r = boundary_value(mu, f, side, p, opt);
    out.values.push_back(r.value);
    out.converged.push_back(r.converged);
  }
  return out;
}

std::string BoundaryField::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "point,re,im,converged\n";
  for (std::size_t k = 0; k < points.size(); ++k) {
    os << points[k] << ',' << values[k].real() << ',' << values[k].imag() << ','
       << (converged[k] ? 1 : 0) << '\n';
  }
  return os.str();
}

GridSchedule radial_schedule_on_grid(const Measure& mu, const Samples& f,
                                     const BoundaryGrid& grid,
                                     BoundarySide side,
                                     const RadialOptions& opt) {
  if (mu.support() != Support::circle)
    throw DomainError("grid boundary sampling is a circle-measure operation");
  check_samples(mu, f);
  const int n = grid.size();
  const double sgn = side == BoundarySide::plus ? 1.0 : -1.0;

  const auto& atoms = mu.atoms();
  auto cells = live_cells(mu);
  const bool aligned = cells.grid && cells.grid->n == n &&
                       std::abs(cells.grid->a + pi) < 1e-12 &&
                       std::abs(cells.grid->b - pi) < 1e-12;

  // atom positions as circle points, with their f-weighted masses
  std::vector<cplx> atom_xi(atoms.size()), atom_mass(atoms.size());
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    atom_xi[a] = std::polar(1.0, atoms[a].position);
    atom_mass[a] = f[a] * atoms[a].weight;
  }

  // f * density over the full cell range (zeros where the density vanishes);
  // only the convolution path needs it
  std::vector<cplx> cell_mass;
  Eigen::FFT<double> fft;
  std::vector<cplx> mass_hat;
  if (aligned) {
    cell_mass.assign(n, cplx(0.0, 0.0));
    std::size_t idx = atoms.size();
    for (int j : cells.live) cell_mass[j] = f[idx++] * cells.grid->density[j];
    fft.fwd(mass_hat, cell_mass);
  }

  GridSchedule sched;
  sched.side = side;
  sched.points = grid.angles();
  sched.rel_tol = opt.rel_tol;
  sched.abs_tol = opt.abs_tol;
  sched.radii.reserve(opt.max_steps);
  sched.steps.reserve(opt.max_steps);

  std::vector<cplx> vals(n), g(n), g_hat(n);
  double t = opt.t0;
  for (int k = 0; k < opt.max_steps; ++k, t *= 0.5) {
    double r = 1.0 - sgn * t;
    if (aligned) {
      // The cell sum is rotation invariant: the entry for (point j, cell c)
      // equals the cell-0 integral at r * z_{j-c}, so one circular
      // convolution evaluates every point at once.
      for (int d = 0; d < n; ++d)
        g[d] = arc_cauchy(cells.grid->cell_lo(0), cells.grid->cell_hi(0),
                          r * grid.point(d));
      fft.fwd(g_hat, g);
      for (int d = 0; d < n; ++d) g_hat[d] *= mass_hat[d];
      fft.inv(vals, g_hat);
      for (int j = 0; j < n; ++j) {
        cplx s = vals[j];
        for (std::size_t a = 0; a < atoms.size(); ++a)
          s += atom_mass[a] / (1.0 - std::conj(atom_xi[a]) * (r * grid.point(j)));
        vals[j] = s;
      }
    } else {
      for (int j = 0; j < n; ++j)
        vals[j] = cauchy_circle_R(mu, f, r * grid.point(j));
    }
    sched.radii.push_back(r);
    sched.steps.push_back(vals);
  }
  return sched;
}

CollapsedSchedule collapse_schedule(const std::vector<std::vector<cplx>>& steps,
                                    double rel_tol, double abs_tol) {
  if (steps.empty()) throw DomainError("cannot collapse an empty schedule");
  const std::size_t n = steps.back().size();
  CollapsedSchedule out;
  out.values = steps.back();
  out.converged.assign(n, false);
  auto close = [&](cplx a, cplx b) {
    double d = std::abs(a - b);
    return d <= std::max(rel_tol * std::max(std::abs(a), std::abs(b)), abs_tol);
  };
  for (std::size_t k = 2; k < steps.size(); ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!out.converged[j] && close(steps[k][j], steps[k - 1][j]) &&
          close(steps[k - 1][j], steps[k - 2][j]))
        out.converged[j] = true;
    }
  }
  return out;
}

BoundaryField boundary_values_on_grid(const Measure& mu, const Samples& f,
                                      const BoundaryGrid& grid,
                                      BoundarySide side,
                                      const RadialOptions& opt) {
  GridSchedule sched = radial_schedule_on_grid(mu, f, grid, side, opt);
  CollapsedSchedule col =
      collapse_schedule(sched.steps, opt.rel_tol, opt.abs_tol);
  BoundaryField out;
  out.support = Support::circle;
  out.side = side;
  out.points = std::move(sched.points);
  out.values = std::move(col.values);
  out.converged = std::move(col.converged);
  return out;
}

double smooth_regularizer(double x) {
  double u = std::abs(x) - 1.0;
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  double e0 = std::exp(-1.0 / u);
  double e1 = std::exp(-1.0 / (1.0 - u));
  return e0 / (e0 + e1);
}

}  // namespace rankone
