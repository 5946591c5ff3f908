#include "rankone/sio.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>

#include "rankone/cauchy.hpp"
#include "rankone/errors.hpp"

namespace rankone {

namespace {

cplx phase(cplx u) {
  const double a = std::abs(u);
  return a == 0.0 ? cplx{0.0, 0.0} : u / a;
}

// |u|^(q-1) * phase(u), the norming map between dual p-norms.
Eigen::VectorXcd dual_map(const Eigen::VectorXcd& u, double q) {
  Eigen::VectorXcd out(u.size());
  for (Eigen::Index k = 0; k < u.size(); ++k)
    out(k) = std::pow(std::abs(u(k)), q - 1.0) * phase(u(k));
  return out;
}

double weighted_p_norm(const Eigen::VectorXcd& f, const std::vector<double>& w,
                       const std::vector<std::size_t>& idx, double p) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < f.size(); ++k)
    s += w[idx[static_cast<std::size_t>(k)]] *
         std::pow(std::abs(f(k)), p);
  return std::pow(s, 1.0 / p);
}

struct SupportSplit {
  std::vector<std::size_t> f_idx;  // into the source points
  std::vector<std::size_t> g_idx;  // into the target points
};

double circle_distance(double a, double b) {
  return std::abs(std::remainder(a - b, 2.0 * pi));
}

// Minimal separation required between the two support sets: one grid cell
// when cells are involved, otherwise half the minimal gap between coords.
double required_gap(const Measure& mu, const Measure& nu,
                    const WeightedPoints& src, const WeightedPoints& tgt) {
  double dx = 0.0;
  if (mu.has_ac()) dx = std::max(dx, mu.grid()->dx());
  if (nu.has_ac()) dx = std::max(dx, nu.grid()->dx());
  if (dx > 0.0) return dx;
  std::vector<double> coords = src.coords;
  coords.insert(coords.end(), tgt.coords.begin(), tgt.coords.end());
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
  if (coords.size() < 2) return 0.0;
  double gap = coords[1] - coords[0];
  for (std::size_t k = 2; k < coords.size(); ++k)
    gap = std::min(gap, coords[k] - coords[k - 1]);
  return 0.5 * gap;
}

std::optional<SupportSplit> random_split(const WeightedPoints& src,
                                         const WeightedPoints& tgt,
                                         double buffer,
                                         std::mt19937_64& rng) {
  SupportSplit split;
  if (src.support == Support::line) {
    double lo = src.coords.empty() ? 0.0 : src.coords.front();
    double hi = lo;
    for (double c : src.coords) { lo = std::min(lo, c); hi = std::max(hi, c); }
    for (double c : tgt.coords) { lo = std::min(lo, c); hi = std::max(hi, c); }
    std::uniform_real_distribution<double> cut_dist(lo, hi);
    const double cut = cut_dist(rng);
    const bool f_left = (rng() & 1u) != 0;
    for (std::size_t k = 0; k < src.size(); ++k) {
      const double d = src.coords[k] - cut;
      if ((f_left && d <= -buffer / 2) || (!f_left && d >= buffer / 2))
        split.f_idx.push_back(k);
    }
    for (std::size_t k = 0; k < tgt.size(); ++k) {
      const double d = tgt.coords[k] - cut;
      if ((f_left && d >= buffer / 2) || (!f_left && d <= -buffer / 2))
        split.g_idx.push_back(k);
    }
  } else {
    std::uniform_real_distribution<double> center_dist(-pi, pi);
    std::uniform_real_distribution<double> width_dist(0.25 * pi, 0.75 * pi);
    const double center = center_dist(rng);
    const double width = width_dist(rng);
    for (std::size_t k = 0; k < src.size(); ++k)
      if (circle_distance(src.coords[k], center) <= width - buffer / 2)
        split.f_idx.push_back(k);
    for (std::size_t k = 0; k < tgt.size(); ++k)
      if (circle_distance(tgt.coords[k], center) >= width + buffer / 2)
        split.g_idx.push_back(k);
  }
  if (split.f_idx.empty() || split.g_idx.empty()) return std::nullopt;
  return split;
}

cplx eval_kernel(const KernelSpec& kernel, cplx x, cplx y) {
  const cplx v = kernel.evaluator(x, y);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw DomainError("kernel '" + kernel.name +
                      "' is not finite at a sampled off-diagonal pair");
  return v;
}

// One alternating power iteration to a local maximum of the bilinear ratio.
// Returns the explicitly evaluated |B(f,g)| with unit-norm f, g, which is a
// valid lower bound whether or not the iteration converged.
double boyd_trial(const KernelSpec& kernel, const WeightedPoints& src,
                  const WeightedPoints& tgt, const SupportSplit& split,
                  double p, std::mt19937_64& rng) {
  const auto nf = static_cast<Eigen::Index>(split.f_idx.size());
  const auto ng = static_cast<Eigen::Index>(split.g_idx.size());
  Eigen::MatrixXcd kv(ng, nf);
  for (Eigen::Index i = 0; i < ng; ++i)
    for (Eigen::Index j = 0; j < nf; ++j)
      kv(i, j) =
          eval_kernel(kernel, tgt.points[split.g_idx[static_cast<std::size_t>(i)]],
                      src.points[split.f_idx[static_cast<std::size_t>(j)]]);

  const double q = p / (p - 1.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::VectorXcd f(nf);
  for (Eigen::Index j = 0; j < nf; ++j) f(j) = cplx(unit(rng), unit(rng));
  double nrm = weighted_p_norm(f, src.weights, split.f_idx, p);
  if (nrm == 0.0) return 0.0;
  f /= nrm;

  Eigen::VectorXcd g(ng);
  double prev = -1.0;
  for (int it = 0; it < 100; ++it) {
    Eigen::VectorXcd u(ng);
    for (Eigen::Index i = 0; i < ng; ++i) {
      cplx s = 0.0;
      for (Eigen::Index j = 0; j < nf; ++j)
        s += kv(i, j) * src.weights[split.f_idx[static_cast<std::size_t>(j)]] *
             f(j);
      u(i) = s;
    }
    const double ratio = weighted_p_norm(u, tgt.weights, split.g_idx, p);
    if (ratio == 0.0) return 0.0;
    g = dual_map(u, p);
    g /= weighted_p_norm(g, tgt.weights, split.g_idx, q);
    Eigen::VectorXcd v(nf);
    for (Eigen::Index j = 0; j < nf; ++j) {
      cplx s = 0.0;
      for (Eigen::Index i = 0; i < ng; ++i)
        s += std::conj(kv(i, j)) *
             tgt.weights[split.g_idx[static_cast<std::size_t>(i)]] * g(i);
      v(j) = s;
    }
    f = dual_map(v, q);
    nrm = weighted_p_norm(f, src.weights, split.f_idx, p);
    if (nrm == 0.0) return 0.0;
    f /= nrm;
    if (prev >= 0.0 && std::abs(ratio - prev) <= 1e-12 * std::max(1.0, ratio))
      break;
    prev = ratio;
  }

  // final bilinear value with both vectors at unit norm
  cplx b = 0.0;
  for (Eigen::Index i = 0; i < ng; ++i) {
    cplx row = 0.0;
    for (Eigen::Index j = 0; j < nf; ++j)
      row += kv(i, j) * src.weights[split.f_idx[static_cast<std::size_t>(j)]] *
             f(j);
    b += tgt.weights[split.g_idx[static_cast<std::size_t>(i)]] * row *
         std::conj(g(i));
  }
  return std::abs(b);
}

}  // namespace

KernelSpec named_kernel(const std::string& name) {
  KernelSpec k;
  k.name = name;
  if (name == "hilbert" || name == "cauchy_line") {
    k.dimension = 1;
    k.evaluator = [](cplx x, cplx y) { return 1.0 / (x - y); };
  } else if (name == "cauchy_circle") {
    k.dimension = 1;
    k.evaluator = [](cplx z, cplx xi) {
      return 1.0 / (1.0 - std::conj(xi) * z);
    };
  } else if (name == "riesz") {
    k.dimension = 2;
    k.evaluator = [](cplx z, cplx w) { return 1.0 / std::conj(z - w); };
  } else if (name == "beurling") {
    k.dimension = 2;
    k.evaluator = [](cplx z, cplx w) {
      const cplx d = z - w;
      return 1.0 / (d * d);
    };
  } else {
    throw DomainError("unknown kernel name: " + name);
  }
  return k;
}

double SchurMultiplierSpec::variation() const {
  double s = 0.0;
  for (const auto& a : atoms) s += std::abs(a.weight);
  return s;
}

cplx SchurMultiplierSpec::multiplier(cplx s) const {
  cplx v = 0.0;
  for (const auto& a : atoms) v += a.weight * std::exp(-iu * a.position * s);
  return v;
}

MultiplierEvaluator SchurMultiplierSpec::evaluator() const {
  MultiplierEvaluator m;
  m.variation = variation();
  m.name = "atomic-fourier";
  auto copy = *this;
  m.value = [copy](cplx x, cplx y) { return copy.multiplier(x - y); };
  return m;
}

MultiplierEvaluator cauchy_multiplier_line(double eps, int sign) {
  if (!(eps > 0.0)) throw DomainError("cauchy_multiplier_line: eps must be positive");
  if (sign != 1 && sign != -1)
    throw DomainError("cauchy_multiplier_line: sign must be +-1");
  MultiplierEvaluator m;
  m.variation = 2.0;  // |delta_0| + L1 mass of the exponential profile
  m.name = sign > 0 ? "cauchy-eps-minus" : "cauchy-eps-plus";
  const cplx pole = iu * eps * static_cast<double>(sign);
  m.value = [pole](cplx x, cplx y) {
    const cplx s = x - y;
    return s / (s - pole);
  };
  return m;
}

MultiplierEvaluator cauchy_multiplier_circle(double r) {
  if (!(r >= 0.0) || r == 1.0)
    throw DomainError("cauchy_multiplier_circle: need r >= 0, r != 1");
  MultiplierEvaluator m;
  m.variation = r < 1.0 ? 2.0 : 2.0 / r;
  m.name = "cauchy-radial";
  m.value = [r](cplx z, cplx xi) {
    const cplx u = std::conj(xi) * z;
    return (1.0 - u) / (1.0 - r * u);
  };
  return m;
}

KernelSpec schur_apply(const KernelSpec& kernel, const MultiplierEvaluator& m) {
  KernelSpec out;
  out.dimension = kernel.dimension;
  out.name = kernel.name + "*" + m.name;
  auto base = kernel.evaluator;
  auto mult = m.value;
  out.evaluator = [base, mult](cplx x, cplx y) {
    return base(x, y) * mult(x, y);
  };
  return out;
}

double restricted_bound_estimate(const KernelSpec& kernel, const Measure& mu,
                                 const Measure& nu, double p, int trials,
                                 std::uint64_t rng_seed) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw DomainError("restricted_bound_estimate: p must lie in (1, inf)");
  if (trials < 1) throw DomainError("restricted_bound_estimate: trials >= 1");
  const WeightedPoints src = mu.discretize();
  const WeightedPoints tgt = nu.discretize();
  const double buffer = required_gap(mu, nu, src, tgt);
  std::mt19937_64 rng(rng_seed);
  double best = 0.0;
  int valid = 0;
  for (int t = 0; t < trials; ++t) {
    std::optional<SupportSplit> split;
    for (int attempt = 0; attempt < 20 && !split; ++attempt)
      split = random_split(src, tgt, buffer, rng);
    if (!split) continue;
    ++valid;
    best = std::max(best, boyd_trial(kernel, src, tgt, *split, p, rng));
  }
  if (valid == 0)
    throw DomainError(
        "restricted_bound_estimate: no separated support split exists (too "
        "few support points)");
  return best;
}

SchurBoundReport schur_bound_check(const KernelSpec& kernel,
                                   const MultiplierEvaluator& m,
                                   const Measure& mu, const Measure& nu,
                                   double p, int trials, std::uint64_t seed) {
  SchurBoundReport rep;
  rep.variation = m.variation;
  rep.km_estimate =
      restricted_bound_estimate(schur_apply(kernel, m), mu, nu, p, trials, seed);
  const WeightedPoints src = mu.discretize();
  const WeightedPoints tgt = nu.discretize();
  if (p == 2.0) {
    Eigen::MatrixXcd full(static_cast<Eigen::Index>(tgt.size()),
                          static_cast<Eigen::Index>(src.size()));
    for (Eigen::Index i = 0; i < full.rows(); ++i)
      for (Eigen::Index j = 0; j < full.cols(); ++j) {
        const cplx x = tgt.points[static_cast<std::size_t>(i)];
        const cplx y = src.points[static_cast<std::size_t>(j)];
        if (x == y)
          throw DomainError(
              "schur_bound_check: mu and nu share a support point; the full "
              "kernel matrix certificate needs disjoint supports");
        full(i, j) = eval_kernel(kernel, x, y) *
                     std::sqrt(tgt.weights[static_cast<std::size_t>(i)]) *
                     std::sqrt(src.weights[static_cast<std::size_t>(j)]);
      }
    rep.k_upper = operator_norm(full);
  } else {
    // p != 2: no cheap exact certificate; use the best full-support
    // (unrestricted) estimate from the same randomized machinery.
    SupportSplit all;
    for (std::size_t k = 0; k < src.size(); ++k) all.f_idx.push_back(k);
    for (std::size_t k = 0; k < tgt.size(); ++k) all.g_idx.push_back(k);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    double best = 0.0;
    for (int t = 0; t < std::max(8, trials / 4); ++t)
      best = std::max(best, boyd_trial(kernel, src, tgt, all, p, rng));
    rep.k_upper = best;
  }
  rep.slack = rep.variation * rep.k_upper - rep.km_estimate;
  rep.ok = rep.slack >= -1e-9 * std::max(1.0, rep.variation * rep.k_upper);
  return rep;
}

std::string NormScan::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "eps,norm\n";
  for (std::size_t k = 0; k < eps.size(); ++k)
    os << eps[k] << ',' << norms[k] << '\n';
  return os.str();
}

NormScan uniform_bound_scan(const KernelSpec& kernel, ScanFamily family,
                            const Measure& mu, const Measure& nu,
                            const std::vector<double>& eps_grid,
                            double c_target) {
  if (eps_grid.empty()) throw DomainError("uniform_bound_scan: empty grid");
  const WeightedPoints src = mu.discretize();
  const WeightedPoints tgt = nu.discretize();
  NormScan scan;
  scan.eps = eps_grid;
  scan.c_target = c_target;
  for (double eps : eps_grid) {
    if (family == ScanFamily::radial) {
      if (!(eps >= 0.0) || eps == 1.0)
        throw DomainError("uniform_bound_scan: radial entries need r >= 0, r != 1");
    } else if (!(eps > 0.0)) {
      throw DomainError("uniform_bound_scan: eps must be positive");
    }
    Eigen::MatrixXcd mat(static_cast<Eigen::Index>(tgt.size()),
                         static_cast<Eigen::Index>(src.size()));
    for (Eigen::Index i = 0; i < mat.rows(); ++i) {
      const cplx x = tgt.points[static_cast<std::size_t>(i)];
      const double sv = std::sqrt(tgt.weights[static_cast<std::size_t>(i)]);
      for (Eigen::Index j = 0; j < mat.cols(); ++j) {
        const cplx y = src.points[static_cast<std::size_t>(j)];
        if (x == y) {  // every family vanishes on the diagonal
          mat(i, j) = 0.0;
          continue;
        }
        cplx reg;
        switch (family) {
          case ScanFamily::trunc:
            reg = std::abs(x - y) > eps ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
            break;
          case ScanFamily::smooth:
            reg = smooth_regularizer(std::abs(x - y) / eps);
            break;
          case ScanFamily::cauchy: {
            const cplx s = x - y;
            reg = s / (s + iu * eps);
            break;
          }
          case ScanFamily::radial: {
            const cplx u = std::conj(y) * x;
            reg = (1.0 - u) / (1.0 - eps * u);
            break;
          }
        }
        mat(i, j) = reg == cplx{0.0, 0.0}
                        ? cplx{0.0, 0.0}
                        : eval_kernel(kernel, x, y) * reg *
                              std::sqrt(src.weights[static_cast<std::size_t>(j)]) *
                              sv;
      }
    }
    scan.norms.push_back(operator_norm(mat));
  }
  scan.max_norm = *std::max_element(scan.norms.begin(), scan.norms.end());
  scan.min_norm = *std::min_element(scan.norms.begin(), scan.norms.end());
  scan.pass = c_target <= 0.0 || scan.max_norm <= c_target;
  return scan;
}

namespace {

struct DyadicFrame {
  double a = 0.0;
  double length = 1.0;
};

// Per-cell overlap masses with every dyadic interval up to `level`:
// table[l][j] indexed by interval, each entry a running E-mass / total-mass
// pair refreshed by the caller.
double overlap(double lo1, double hi1, double lo2, double hi2) {
  return std::max(0.0, std::min(hi1, hi2) - std::max(lo1, lo2));
}

}  // namespace

WellMixedPair well_mixed_sets(const Measure& sigma, int level) {
  if (level < 0) throw DomainError("well_mixed_sets: level must be >= 0");
  const WeightedPoints pts = sigma.discretize();
  WellMixedPair pair;
  pair.level = level;

  // cells, in position order (discretize lists atoms first, then cells)
  std::vector<std::size_t> cells;
  for (std::size_t k = 0; k < pts.size(); ++k)
    if (pts.from_cell[k]) cells.push_back(k);

  DyadicFrame frame;
  if (sigma.grid()) {
    frame.a = sigma.grid()->a;
    frame.length = sigma.grid()->b - sigma.grid()->a;
  } else if (!sigma.atoms().empty()) {
    frame.a = sigma.atoms().front().position;
    const double b = sigma.atoms().back().position;
    frame.length = std::max(b - frame.a, 1.0);
  }

  // Split the cells of each finest-generation dyadic interval into two
  // halves of nearly equal sigma-mass. Coarser intervals are unions of
  // finest ones, so their halving error is a mass-weighted mean of the
  // per-interval errors and the finest generation is the binding one.
  std::vector<int> side(pts.size(), -1);  // -1 atom/none, 0 E, 1 F
  {
    // refine past the requested generation until every bucket is small
    // enough for the exhaustive split; a balanced finer generation stays
    // balanced after regrouping into coarser intervals
    int split_level = level;
    auto bucket_of = [&](std::size_t k, int g) {
      const double rel = (pts.coords[k] - frame.a) / frame.length;
      const int cnt = 1 << g;
      return static_cast<std::size_t>(
          std::clamp(static_cast<int>(std::floor(rel * cnt)), 0, cnt - 1));
    };
    for (; split_level < level + 12; ++split_level) {
      std::vector<int> cnt(std::size_t{1} << split_level, 0);
      int mx = 0;
      for (std::size_t k : cells) mx = std::max(mx, ++cnt[bucket_of(k, split_level)]);
      if (mx <= 16) break;
    }
    const int finest = 1 << split_level;
    std::vector<std::vector<std::size_t>> bucket(
        static_cast<std::size_t>(finest));
    for (std::size_t k : cells) bucket[bucket_of(k, split_level)].push_back(k);
    std::vector<double> subset_sum;
    for (auto& group : bucket) {
      const std::size_t c = group.size();
      if (c == 0) continue;
      if (c == 1) {
        side[group[0]] = 0;
        continue;
      }
      double total = 0.0;
      for (std::size_t k : group) total += pts.weights[k];
      const double half = total / 2.0;
      if (c <= 16) {
        // exhaustive bipartition via subset sums indexed by bitmask
        const std::size_t masks = std::size_t{1} << c;
        subset_sum.assign(masks, 0.0);
        std::size_t best_mask = 0;
        double best_gap = half;
        for (std::size_t mask = 1; mask < masks; ++mask) {
          const std::size_t low = mask & (mask - 1);
          const int bit = std::countr_zero(mask);
          subset_sum[mask] =
              subset_sum[low] + pts.weights[group[static_cast<std::size_t>(bit)]];
          const double gap = std::abs(subset_sum[mask] - half);
          if (gap < best_gap) {
            best_gap = gap;
            best_mask = mask;
          }
        }
        for (std::size_t b = 0; b < c; ++b)
          side[group[b]] = (best_mask >> b) & 1 ? 0 : 1;
      } else {
        // greedy largest-first, then first-improving swaps
        std::vector<std::size_t> order(c);
        for (std::size_t b = 0; b < c; ++b) order[b] = b;
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
          const double wx = pts.weights[group[x]];
          const double wy = pts.weights[group[y]];
          return wx != wy ? wx > wy : x < y;
        });
        double mass_e = 0.0;
        for (std::size_t b : order) {
          const double w = pts.weights[group[b]];
          if (mass_e + w / 2.0 <= half) {
            side[group[b]] = 0;
            mass_e += w;
          } else {
            side[group[b]] = 1;
          }
        }
        for (int pass = 0; pass < 64; ++pass) {
          double gap = mass_e - half;
          bool moved = false;
          for (std::size_t x = 0; x < c && !moved; ++x) {
            for (std::size_t y = 0; y < c && !moved; ++y) {
              if (side[group[x]] != 0 || side[group[y]] != 1) continue;
              const double shift =
                  pts.weights[group[y]] - pts.weights[group[x]];
              if (std::abs(gap + shift) + 1e-18 < std::abs(gap)) {
                side[group[x]] = 1;
                side[group[y]] = 0;
                mass_e += shift;
                moved = true;
              }
            }
          }
          if (!moved) break;
        }
      }
    }
  }

  const Grid* grid = sigma.grid() ? &*sigma.grid() : nullptr;

  // mass of cell k inside [lo, hi); cell coords are midpoints
  auto cell_mass_in = [&](std::size_t k, double lo, double hi) {
    const double dx = grid->dx();
    const double clo = pts.coords[k] - dx / 2;
    const double chi = pts.coords[k] + dx / 2;
    return pts.weights[k] * overlap(clo, chi, lo, hi) / dx;
  };

  const int nlev = level + 1;
  std::vector<std::vector<double>> e_mass(static_cast<std::size_t>(nlev));
  std::vector<std::vector<double>> cell_mass(static_cast<std::size_t>(nlev));
  std::vector<std::vector<double>> total_mass(static_cast<std::size_t>(nlev));
  auto interval = [&](int l, int j, double& lo, double& hi) {
    const double w = frame.length / std::ldexp(1.0, l);
    lo = frame.a + j * w;
    hi = lo + w;
  };
  auto rebuild = [&]() {
    for (int l = 0; l < nlev; ++l) {
      const int cnt = 1 << l;
      auto& em = e_mass[static_cast<std::size_t>(l)];
      auto& cm = cell_mass[static_cast<std::size_t>(l)];
      auto& tm = total_mass[static_cast<std::size_t>(l)];
      em.assign(static_cast<std::size_t>(cnt), 0.0);
      cm.assign(static_cast<std::size_t>(cnt), 0.0);
      tm.assign(static_cast<std::size_t>(cnt), 0.0);
      for (int j = 0; j < cnt; ++j) {
        double lo, hi;
        interval(l, j, lo, hi);
        for (std::size_t k : cells) {
          const double m = cell_mass_in(k, lo, hi);
          cm[static_cast<std::size_t>(j)] += m;
          if (side[k] == 0) em[static_cast<std::size_t>(j)] += m;
        }
        tm[static_cast<std::size_t>(j)] = cm[static_cast<std::size_t>(j)];
        for (const auto& a : sigma.atoms())
          if (a.position >= lo && a.position < hi)
            tm[static_cast<std::size_t>(j)] += a.weight;
      }
    }
  };
  auto global_error = [&](std::vector<double>* per_level) {
    double worst = 0.0;
    if (per_level) per_level->assign(static_cast<std::size_t>(nlev), 0.0);
    for (int l = 0; l < nlev; ++l) {
      double lev = 0.0;
      const auto& em = e_mass[static_cast<std::size_t>(l)];
      const auto& cm = cell_mass[static_cast<std::size_t>(l)];
      const auto& tm = total_mass[static_cast<std::size_t>(l)];
      for (std::size_t j = 0; j < em.size(); ++j) {
        if (tm[j] <= 0.0) continue;
        lev = std::max(lev, std::abs(em[j] - cm[j] / 2) / tm[j]);
      }
      if (per_level) (*per_level)[static_cast<std::size_t>(l)] = lev;
      worst = std::max(worst, lev);
    }
    return worst;
  };

  if (!cells.empty()) {
    rebuild();
    // local improvement: flip single cells while that lowers the worst error
    double err = global_error(nullptr);
    for (int sweep = 0; sweep < 2 && err > 0.0; ++sweep) {
      bool improved = false;
      for (std::size_t k : cells) {
        const double delta = side[k] == 0 ? -1.0 : 1.0;
        for (int l = 0; l < nlev; ++l) {
          double lo, hi;
          const int cnt = 1 << l;
          for (int j = 0; j < cnt; ++j) {
            interval(l, j, lo, hi);
            e_mass[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)] +=
                delta * cell_mass_in(k, lo, hi);
          }
        }
        const double trial = global_error(nullptr);
        if (trial + 1e-15 < err) {
          side[k] = 1 - side[k];
          err = trial;
          improved = true;
        } else {  // revert
          for (int l = 0; l < nlev; ++l) {
            double lo, hi;
            const int cnt = 1 << l;
            for (int j = 0; j < cnt; ++j) {
              interval(l, j, lo, hi);
              e_mass[static_cast<std::size_t>(l)]
                    [static_cast<std::size_t>(j)] -=
                  delta * cell_mass_in(k, lo, hi);
            }
          }
        }
      }
      if (!improved) break;
    }
    pair.achieved_error = global_error(&pair.level_errors);
  } else {
    pair.level_errors.assign(static_cast<std::size_t>(nlev), 0.0);
    pair.achieved_error = 0.0;
  }

  for (std::size_t k : cells)
    (side[k] == 0 ? pair.E : pair.F).push_back(k);
  pair.meets_target =
      pair.achieved_error <= std::ldexp(1.0, -level) + 1e-15;
  return pair;
}

}  // namespace rankone
