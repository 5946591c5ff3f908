#include "rankone/measure.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "rankone/errors.hpp"

namespace rankone {

namespace {

double normalize_angle(double t) {
  double r = std::remainder(t, 2.0 * pi);  // [-pi, pi]
  if (r <= -pi) r = pi;                    // fold -pi onto +pi
  return r;
}

void validate_grid(Support support, const Grid& g) {
  if (g.n <= 0) throw DomainError("grid needs at least one cell");
  if (!(g.b > g.a)) throw DomainError("grid requires b > a");
  if (static_cast<int>(g.density.size()) != g.n)
    throw DomainError("grid density size does not match cell count");
  for (double w : g.density) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw DomainError("grid density must be finite and non-negative");
  }
  if (support == Support::circle) {
    if (g.a < -pi - 1e-12 || g.b > pi + 1e-12)
      throw DomainError("circle grid angles must lie in [-pi, pi]");
    if (g.dx() > pi / 2.0)
      throw DomainError("circle grid cells must subtend less than pi/2");
  }
}

}  // namespace

double WeightedPoints::mass() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

Measure::Measure(Support support, std::vector<Atom> atoms,
                 std::optional<Grid> grid)
    : support_(support), atoms_(std::move(atoms)), grid_(std::move(grid)) {
  for (auto& a : atoms_) {
    if (!(a.weight > 0.0) || !std::isfinite(a.weight))
      throw DomainError("atom weights must be finite and strictly positive");
    if (!std::isfinite(a.position)) throw DomainError("atom position not finite");
    if (support_ == Support::circle) a.position = normalize_angle(a.position);
  }
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& x, const Atom& y) { return x.position < y.position; });
  for (std::size_t k = 1; k < atoms_.size(); ++k) {
    if (atoms_[k].position == atoms_[k - 1].position)
      throw DomainError("atoms must sit at pairwise distinct positions");
  }
  if (grid_) {
    validate_grid(support_, *grid_);
    // Atoms may not land inside (or on the edge of) a cell with positive
    // density; the two parts of the measure must stay mutually singular.
    for (const auto& a : atoms_) {
      if (a.position < grid_->a || a.position > grid_->b) continue;
      double rel = (a.position - grid_->a) / grid_->dx();
      int j = std::min(static_cast<int>(rel), grid_->n - 1);
      for (int c : {j - 1, j, j + 1}) {
        if (c < 0 || c >= grid_->n) continue;
        if (grid_->density[c] > 0.0 && a.position >= grid_->cell_lo(c) &&
            a.position <= grid_->cell_hi(c))
          throw DomainError("atom collides with a positive-density cell");
      }
    }
  }
}

Measure Measure::point_mass(Support support, double position, double weight) {
  return Measure(support, {Atom{position, weight}});
}

bool Measure::has_ac() const {
  if (!grid_) return false;
  return std::any_of(grid_->density.begin(), grid_->density.end(),
                     [](double w) { return w > 0.0; });
}

double Measure::mass() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += a.weight;
  if (grid_) {
    double cell_factor =
        support_ == Support::line ? grid_->dx() : grid_->dx() / (2.0 * pi);
    double c = 0.0;
    for (double w : grid_->density) c += w * cell_factor;
    s += c;
  }
  return s;
}

double Measure::density_at(double position) const {
  if (!grid_) return 0.0;
  const Grid& g = *grid_;
  double pos = position;
  if (support_ == Support::circle) {
    pos -= std::floor((pos - g.a) / (2.0 * pi)) * (2.0 * pi);
  }
  if (pos < g.a || pos >= g.b) return 0.0;
  const int idx =
      std::min(static_cast<int>((pos - g.a) / g.dx()), g.n - 1);
  return g.density[static_cast<std::size_t>(idx)];
}

Measure Measure::scaled(double c) const {
  if (!(c > 0.0) || !std::isfinite(c))
    throw DomainError("scale factor must be finite and positive");
  std::vector<Atom> atoms = atoms_;
  for (auto& a : atoms) a.weight *= c;
  std::optional<Grid> grid = grid_;
  if (grid)
    for (double& w : grid->density) w *= c;
  return Measure(support_, std::move(atoms), std::move(grid));
}

WeightedPoints Measure::discretize() const {
  WeightedPoints out;
  out.support = support_;
  for (const auto& a : atoms_) {
    out.coords.push_back(a.position);
    out.points.push_back(embed(a.position));
    out.weights.push_back(a.weight);
    out.from_cell.push_back(false);
  }
  if (grid_) {
    double cell_factor =
        support_ == Support::line ? grid_->dx() : grid_->dx() / (2.0 * pi);
    for (int j = 0; j < grid_->n; ++j) {
      double m = grid_->density[j] * cell_factor;
      if (m <= 0.0) continue;
      double mid = grid_->cell_mid(j);
      out.coords.push_back(mid);
      out.points.push_back(embed(mid));
      out.weights.push_back(m);
      out.from_cell.push_back(true);
    }
  }
  return out;
}

cplx Measure::embed(double coord) const {
  if (support_ == Support::line) return cplx(coord, 0.0);
  return std::polar(1.0, coord);
}

int Measure::atom_index(double coord) const {
  for (std::size_t k = 0; k < atoms_.size(); ++k)
    if (atoms_[k].position == coord) return static_cast<int>(k);
  return -1;
}

LebesgueParts lebesgue_decompose(const Measure& mu) {
  Measure ac(mu.support(), {}, mu.grid());
  Measure sing(mu.support(), mu.atoms());
  return LebesgueParts{std::move(ac), std::move(sing)};
}

double poisson_mass(const Measure& mu) {
  if (mu.support() != Support::line)
    throw DomainError("poisson_mass is defined for line measures");
  double s = 0.0;
  for (const auto& a : mu.atoms()) s += a.weight / (1.0 + a.position * a.position);
  if (mu.grid()) {
    const Grid& g = *mu.grid();
    double c = 0.0;
    // integral of 1/(1+t^2) over each cell is exact: atan(hi) - atan(lo)
    for (int j = 0; j < g.n; ++j)
      c += g.density[j] * (std::atan(g.cell_hi(j)) - std::atan(g.cell_lo(j)));
    s += c;
  }
  return s;
}

Measure poisson_normalize(const Measure& mu) {
  double p = poisson_mass(mu);
  if (!(p > 0.0)) throw DomainError("cannot normalize a null measure");
  return mu.scaled(1.0 / p);
}

AcCriterionResult ac_criterion_integral(const Measure& mu, double lo, double hi,
                                        double eps, int max_halvings) {
  if (!mu.grid()) throw DomainError("ac criterion needs a grid density");
  const Grid& g = *mu.grid();
  if (!(lo < hi)) throw DomainError("empty interval");
  if (lo < g.a - 1e-14 || hi > g.b + 1e-14)
    throw DomainError("interval must lie inside the grid span");
  double len = hi - lo;
  if (!(eps > 0.0) || eps > len)
    throw DomainError("eps must lie in (0, |I|]");
  if (max_halvings < 4 || max_halvings > 40)
    throw DomainError("halving count must be in [4, 40]");

  // Clip cells to [lo, hi] and sort by density value: the increasing
  // rearrangement is piecewise constant on (0, |I|].
  struct Piece {
    double value, width;
  };
  std::vector<Piece> pieces;
  for (int j = 0; j < g.n; ++j) {
    double l = std::max(lo, g.cell_lo(j));
    double h = std::min(hi, g.cell_hi(j));
    if (h > l) pieces.push_back({g.density[j], h - l});
  }
  std::sort(pieces.begin(), pieces.end(),
            [](const Piece& x, const Piece& y) { return x.value < y.value; });

  std::vector<double> starts(pieces.size() + 1, 0.0);
  for (std::size_t j = 0; j < pieces.size(); ++j)
    starts[j + 1] = starts[j] + pieces[j].width;

  auto integral_from = [&](double h) {
    // exact: sum of v * (1/x1 - 1/x2) over piece overlaps with [h, eps]
    double s = 0.0;
    for (std::size_t j = 0; j < pieces.size(); ++j) {
      double x1 = std::max(h, starts[j]);
      double x2 = std::min(eps, starts[j + 1]);
      if (x2 > x1) s += pieces[j].value * (1.0 / x1 - 1.0 / x2);
    }
    return s;
  };

  AcCriterionResult out;
  double h = eps;
  for (int k = 1; k <= max_halvings; ++k) {
    h *= 0.5;
    out.cutoffs.push_back(h);
    out.values.push_back(integral_from(h));
  }
  std::size_t n = out.values.size();
  out.divergent = true;
  for (std::size_t k = n - 3; k < n; ++k) {
    if (!(out.values[k] > 2.0 * out.values[k - 1])) out.divergent = false;
  }
  return out;
}

std::string Measure::to_json() const {
  nlohmann::json j;
  j["support"] = rankone::to_string(support_);
  j["atoms"] = nlohmann::json::array();
  for (const auto& a : atoms_) j["atoms"].push_back({a.position, a.weight});
  if (grid_) {
    j["grid"] = {{"a", grid_->a},
                 {"b", grid_->b},
                 {"n", grid_->n},
                 {"density", grid_->density}};
  }
  return j.dump();
}

Measure Measure::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("measure JSON parse failure: ") + e.what());
  }
  try {
    std::string support = j.at("support").get<std::string>();
    Support s;
    if (support == "line")
      s = Support::line;
    else if (support == "circle")
      s = Support::circle;
    else
      throw DomainError("support must be \"line\" or \"circle\"");
    std::vector<Atom> atoms;
    if (j.contains("atoms")) {
      for (const auto& entry : j.at("atoms")) {
        if (!entry.is_array() || entry.size() != 2)
          throw DomainError("each atom must be a [position, weight] pair");
        atoms.push_back({entry[0].get<double>(), entry[1].get<double>()});
      }
    }
    std::optional<Grid> grid;
    if (j.contains("grid")) {
      const auto& gj = j.at("grid");
      Grid g;
      g.a = gj.at("a").get<double>();
      g.b = gj.at("b").get<double>();
      g.n = gj.at("n").get<int>();
      g.density = gj.at("density").get<std::vector<double>>();
      grid = std::move(g);
    }
    return Measure(s, std::move(atoms), std::move(grid));
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("measure JSON schema violation: ") + e.what());
  }
}

}  // namespace rankone
