#include "rankone/presets.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include "rankone/errors.hpp"

namespace rankone {

namespace {

std::vector<Atom> jittered_atoms(std::mt19937_64& rng, int dim, double a,
                                 double b) {
  if (dim < 1) throw ConfigError("atomic preset needs at least one atom");
  std::uniform_real_distribution<double> jitter(-0.3, 0.3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double step = (b - a) / dim;
  std::vector<Atom> atoms(static_cast<size_t>(dim));
  double total = 0.0;
  for (int k = 0; k < dim; ++k) {
    atoms[static_cast<size_t>(k)].position =
        a + (k + 0.5 + jitter(rng)) * step;
    const double w = 0.25 + unit(rng);
    atoms[static_cast<size_t>(k)].weight = w;
    total += w;
  }
  for (Atom& at : atoms) at.weight /= total;
  return atoms;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double parse_double(const std::string& s, const char* what) {
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string("preset: cannot parse ") + what + " from '" +
                      s + "'");
  }
}

long parse_long(const std::string& s, const char* what) {
  try {
    size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string("preset: cannot parse ") + what + " from '" +
                      s + "'");
  }
}

Measure atoms_from_list(const std::string& args, Support support) {
  std::vector<Atom> atoms;
  for (const std::string& pair : split(args, ',')) {
    const auto parts = split(pair, ':');
    if (parts.size() != 2) {
      throw ConfigError("preset: atom entries look like pos:weight, got '" +
                        pair + "'");
    }
    atoms.push_back(Atom{parse_double(parts[0], "atom position"),
                         parse_double(parts[1], "atom weight")});
  }
  if (atoms.empty()) throw ConfigError("preset: empty atom list");
  return Measure(support, std::move(atoms), std::nullopt);
}

}  // namespace

Measure lebesgue_grid(int n) {
  if (n < 2) throw ConfigError("lebesgue_grid needs at least two cells");
  Grid g;
  g.a = -pi;
  g.b = pi;
  g.n = n;
  g.density.assign(static_cast<size_t>(n), 1.0);
  return Measure(Support::circle, {}, g);
}

Measure random_atomic_circle(std::mt19937_64& rng, int dim) {
  return Measure(Support::circle, jittered_atoms(rng, dim, -pi, pi),
                 std::nullopt);
}

Measure random_atomic_line(std::mt19937_64& rng, int dim,
                           bool poisson_normalized) {
  Measure mu(Support::line, jittered_atoms(rng, dim, -3.0, 3.0), std::nullopt);
  return poisson_normalized ? poisson_normalize(mu) : mu;
}

Measure random_mixed_circle(std::mt19937_64& rng, int grid_n, int n_atoms) {
  if (grid_n < 8) throw ConfigError("random_mixed_circle needs grid_n >= 8");
  if (n_atoms < 1 || n_atoms > grid_n / 8) {
    throw ConfigError("random_mixed_circle: atom count out of range");
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Grid g;
  g.a = -pi;
  g.b = pi;
  g.n = grid_n;
  g.density.resize(static_cast<size_t>(grid_n));
  for (double& d : g.density) d = 0.2 + unit(rng);

  // clear a window of cells and put the atoms inside it
  const int window = grid_n / 4;
  const int start = static_cast<int>(unit(rng) * grid_n) % grid_n;
  for (int c = 0; c < window; ++c) {
    g.density[static_cast<size_t>((start + c) % grid_n)] = 0.0;
  }
  const double dx = (g.b - g.a) / grid_n;
  std::vector<Atom> atoms(static_cast<size_t>(n_atoms));
  for (int k = 0; k < n_atoms; ++k) {
    // one atom per stride of cleared cells, inside the cell
    const int cell = (start + k * (window / n_atoms)) % grid_n;
    const double lo = g.a + cell * dx;
    atoms[static_cast<size_t>(k)].position = lo + (0.2 + 0.6 * unit(rng)) * dx;
    atoms[static_cast<size_t>(k)].weight = 0.25 + unit(rng);
  }

  Measure raw(Support::circle, std::move(atoms), g);
  return raw.scaled(1.0 / raw.mass());
}

Measure two_atom_circle() {
  return Measure(Support::circle, {Atom{-1.0, 0.5}, Atom{1.2, 0.5}},
                 std::nullopt);
}

Measure three_atom_circle() {
  return Measure(Support::circle,
                 {Atom{-2.0, 0.3}, Atom{0.4, 0.5}, Atom{2.2, 0.2}},
                 std::nullopt);
}

Measure two_atom_line() {
  return Measure(Support::line, {Atom{-1.0, 0.5}, Atom{1.0, 0.5}},
                 std::nullopt);
}

Measure three_atom_line() {
  return Measure(Support::line,
                 {Atom{-1.5, 0.3}, Atom{0.25, 0.5}, Atom{2.0, 0.2}},
                 std::nullopt);
}

Measure preset_measure(const std::string& text) {
  std::string s = text;
  s.erase(std::remove_if(s.begin(), s.end(),
                         [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s == "two_atom" || s == "two_atom_circle") return two_atom_circle();
  if (s == "three_atom" || s == "three_atom_circle") return three_atom_circle();
  if (s == "two_atom_line") return two_atom_line();
  if (s == "three_atom_line") return three_atom_line();

  const size_t open = s.find('(');
  if (open == std::string::npos || s.back() != ')') {
    throw ConfigError("unknown measure preset '" + text + "'");
  }
  const std::string name = s.substr(0, open);
  const std::string args = s.substr(open + 1, s.size() - open - 2);
  if (name == "lebesgue_grid") {
    return lebesgue_grid(static_cast<int>(parse_long(args, "cell count")));
  }
  if (name == "atoms") return atoms_from_list(args, Support::circle);
  if (name == "line_atoms") return atoms_from_list(args, Support::line);
  if (name == "mixed") {
    const auto parts = split(args, ',');
    if (parts.size() != 3) {
      throw ConfigError("preset: mixed(grid_n,n_atoms,seed)");
    }
    std::mt19937_64 rng(
        static_cast<uint64_t>(parse_long(parts[2], "seed")));
    return random_mixed_circle(
        rng, static_cast<int>(parse_long(parts[0], "grid_n")),
        static_cast<int>(parse_long(parts[1], "n_atoms")));
  }
  throw ConfigError("unknown measure preset '" + text + "'");
}

cplx random_gamma(std::mt19937_64& rng, double max_abs) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = max_abs * std::sqrt(unit(rng));
  const double phase = 2.0 * pi * unit(rng);
  return std::polar(r, phase);
}

cplx random_unimodular(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return std::polar(1.0, 2.0 * pi * unit(rng) - pi);
}

cplx random_point_in_disc(std::mt19937_64& rng, double max_abs) {
  return random_gamma(rng, max_abs);
}

Samples random_samples(std::mt19937_64& rng, const Measure& mu) {
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  const WeightedPoints pts = mu.discretize();
  Samples f(pts.coords.size());
  for (cplx& v : f) v = cplx(box(rng), box(rng));
  return f;
}

}  // namespace rankone
