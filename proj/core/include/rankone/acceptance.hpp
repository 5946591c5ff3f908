#pragma once

#include <cstdint>

#include "rankone/report.hpp"

namespace rankone {

/// Full acceptance suite, criteria 1 through 9. Failures are collected into
/// the report, never thrown.
RunReport run_acceptance_once(uint64_t seed);

/// Runs the suite twice with the same seed and appends the byte-identical
/// determinism check to the first report.
RunReport run_acceptance(uint64_t seed);

}  // namespace rankone
