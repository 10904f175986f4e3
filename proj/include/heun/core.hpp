#pragma once

#include <optional>
#include <utility>

#include "heun/types.hpp"

namespace heun {

// Rising factorial (x)_n for n >= 0.
double pochhammer(double x, int n);

// Exponents of the two local solutions at the origin: {0, 1 - gamma}.
std::pair<double, double> indicial_roots(const HeunParams& p);

// Radius of the common convergence domain around the origin.
double series_domain(const HeunParams& p);

// Integer within tol of v, if any.  tol = 1e-9 is the convention used for
// every integrality decision (branch exclusions, termination indices,
// exponent routing) so that parameters entered in floating point behave
// like their intended integer values.
std::optional<long long> nearest_int(double v, double tol = 1e-9);

// x^p for possibly negative x: integer p (within 1e-9) is rounded and
// applied as a signed integer power, otherwise x must be positive.
double real_power(double x, double p);

}  // namespace heun
