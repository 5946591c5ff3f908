#include "rankone/grid.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>

#include "rankone/errors.hpp"

namespace rankone {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

BoundaryGrid::BoundaryGrid(int n) : n_(n) {
  if (!is_pow2(n) || n < 8)
    throw DomainError("boundary grid size must be a power of two, >= 8");
  points_.resize(n_);
  for (int j = 0; j < n_; ++j) points_[j] = std::polar(1.0, angle(j));
}

std::vector<double> BoundaryGrid::angles() const {
  std::vector<double> out(n_);
  for (int j = 0; j < n_; ++j) out[j] = angle(j);
  return out;
}

std::vector<cplx> BoundaryGrid::harmonics(const std::vector<cplx>& samples) const {
  if (static_cast<int>(samples.size()) != n_)
    throw DomainError("sample count does not match grid size");
  // F_j = sum_m c_m exp(i m theta_j) with theta_j = -pi + (j+1/2) h. Writing
  // d_m = c_m * exp(i m (h/2 - pi)) makes this a plain inverse DFT in j, so a
  // forward FFT recovers n*d_k with k = m mod n.
  Eigen::FFT<double> fft;
  std::vector<cplx> spec(n_);
  std::vector<cplx> in = samples;
  fft.fwd(spec, in);
  const double h = 2.0 * pi / n_;
  std::vector<cplx> coeffs(n_);
  for (int idx = 0; idx < n_; ++idx) {
    int m = idx - n_ / 2;
    int k = (m % n_ + n_) % n_;
    cplx phase = std::polar(1.0, m * (h / 2.0 - pi));
    coeffs[idx] = spec[k] / (static_cast<double>(n_) * phase);
  }
  return coeffs;
}

std::vector<cplx> BoundaryGrid::synthesize(const std::vector<cplx>& coeffs) const {
  if (static_cast<int>(coeffs.size()) != n_)
    throw DomainError("coefficient count does not match grid size");
  const double h = 2.0 * pi / n_;
  std::vector<cplx> d(n_);
  for (int idx = 0; idx < n_; ++idx) {
    int m = idx - n_ / 2;
    int k = (m % n_ + n_) % n_;
    d[k] = coeffs[idx] * std::polar(1.0, m * (h / 2.0 - pi));
  }
  // F_j = sum_k d_k exp(2 pi i k j / n) = n * IDFT(d)
  Eigen::FFT<double> fft;
  std::vector<cplx> out(n_);
  fft.inv(out, d);
  for (auto& v : out) v *= static_cast<double>(n_);
  return out;
}

std::vector<cplx> BoundaryGrid::project_analytic(
    const std::vector<cplx>& samples) const {
  auto c = harmonics(samples);
  for (int idx = 0; idx < n_ / 2; ++idx) c[idx] = 0.0;  // m < 0
  return synthesize(c);
}

std::vector<cplx> BoundaryGrid::project_antianalytic(
    const std::vector<cplx>& samples) const {
  auto c = harmonics(samples);
  for (int idx = n_ / 2; idx < n_; ++idx) c[idx] = 0.0;  // m >= 0
  return synthesize(c);
}

cplx BoundaryGrid::inner(const std::vector<cplx>& f,
                         const std::vector<cplx>& g) const {
  if (f.size() != g.size() || static_cast<int>(f.size()) != n_)
    throw DomainError("inner product needs two full sample vectors");
  cplx s = 0.0;
  for (int j = 0; j < n_; ++j) s += f[j] * std::conj(g[j]);
  return s / static_cast<double>(n_);
}

double BoundaryGrid::norm(const std::vector<cplx>& f) const {
  return std::sqrt(std::max(0.0, inner(f, f).real()));
}

cplx BoundaryGrid::eval_analytic(const std::vector<cplx>& analytic_coeffs,
                                 cplx lambda) {
  // Horner in lambda; coefficients are ordered m = 0, 1, 2, ...
  cplx acc = 0.0;
  for (auto it = analytic_coeffs.rbegin(); it != analytic_coeffs.rend(); ++it)
    acc = acc * lambda + *it;
  return acc;
}

Grid BoundaryGrid::aligned_measure_grid() const {
  Grid g;
  g.a = -pi;
  g.b = pi;
  g.n = n_;
  g.density.assign(n_, 1.0);
  return g;
}

std::vector<double> interleaved_points(const Measure& mu, int per_gap) {
  if (per_gap < 1) throw DomainError("need at least one point per gap");
  const auto& atoms = mu.atoms();
  std::vector<double> out;

  auto emit_gap = [&](double lo, double hi) {
    for (int k = 1; k <= per_gap; ++k)
      out.push_back(lo + (hi - lo) * k / (per_gap + 1.0));
  };

  if (mu.support() == Support::line) {
    if (atoms.empty()) return out;
    double span = std::max(1.0, atoms.back().position - atoms.front().position);
    emit_gap(atoms.front().position - 0.5 * span, atoms.front().position);
    for (std::size_t k = 0; k + 1 < atoms.size(); ++k)
      emit_gap(atoms[k].position, atoms[k + 1].position);
    emit_gap(atoms.back().position, atoms.back().position + 0.5 * span);
  } else {
    if (atoms.empty()) return out;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      double lo = atoms[k].position;
      double hi = k + 1 < atoms.size() ? atoms[k + 1].position
                                       : atoms.front().position + 2.0 * pi;
      emit_gap(lo, hi);
    }
    for (auto& t : out) t = std::remainder(t, 2.0 * pi);
  }

  // Drop anything that landed inside a positive-density cell; boundary values
  // there are taken radially, not by direct evaluation.
  if (mu.grid()) {
    const Grid& g = *mu.grid();
    std::erase_if(out, [&](double t) {
      if (t < g.a || t > g.b) return false;
      int j = std::min(static_cast<int>((t - g.a) / g.dx()), g.n - 1);
      return g.density[j] > 0.0;
    });
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace rankone
