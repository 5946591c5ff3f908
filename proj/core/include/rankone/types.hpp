#pragma once

#include <complex>
#include <numbers>

namespace rankone {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx iu{0.0, 1.0};

/// Where a measure lives: the real line or the unit circle.
enum class Support { line, circle };

inline const char* to_string(Support s) {
  return s == Support::line ? "line" : "circle";
}

}  // namespace rankone
