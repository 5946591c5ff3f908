#pragma once

#include <random>
#include <string>

#include "rankone/cauchy.hpp"
#include "rankone/measure.hpp"
#include "rankone/types.hpp"

namespace rankone {

/// Normalized Lebesgue measure on the circle, resolved on n aligned cells
/// (density identically one, total mass one).
Measure lebesgue_grid(int n);

/// Atomic probability measure on the circle: dim atoms on a jittered
/// equispaced layout (pairwise separation at least 0.4 * 2pi/dim) with
/// weights bounded below by roughly 1/(5 dim).
Measure random_atomic_circle(std::mt19937_64& rng, int dim);

/// Same layout on [-3, 3]. With poisson_normalized the weights are rescaled
/// so the Poisson mass is one.
Measure random_atomic_line(std::mt19937_64& rng, int dim,
                           bool poisson_normalized = false);

/// Density on an aligned circle grid plus n_atoms atoms placed inside a
/// window of cells cleared to zero density. Total mass one.
Measure random_mixed_circle(std::mt19937_64& rng, int grid_n, int n_atoms);

/// Small fixed measures the command line exposes by name.
Measure two_atom_circle();
Measure three_atom_circle();
Measure two_atom_line();
Measure three_atom_line();

/// Parses a measure preset:
///   lebesgue_grid(n)
///   atoms(pos:weight,pos:weight,...)        circle, positions are angles
///   line_atoms(pos:weight,...)
///   mixed(grid_n,n_atoms,seed)
///   two_atom | three_atom | two_atom_line | three_atom_line
/// Throws ConfigError on anything else.
Measure preset_measure(const std::string& text);

/// Uniform draws shared by the tests, the acceptance suite, and the CLI.
cplx random_gamma(std::mt19937_64& rng, double max_abs = 0.9);
cplx random_unimodular(std::mt19937_64& rng);
cplx random_point_in_disc(std::mt19937_64& rng, double max_abs = 0.95);

/// One complex value per discretization point of mu, entries uniform in the
/// unit square box [-1,1] x [-1,1].
Samples random_samples(std::mt19937_64& rng, const Measure& mu);

}  // namespace rankone
