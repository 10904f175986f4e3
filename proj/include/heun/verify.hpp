#pragma once

#include <map>
#include <string>
#include <vector>

#include "heun/types.hpp"

namespace heun {

// Left-hand side of the equation at (x, y, y', y''); zero for an exact
// solution.  x must avoid the singular points {0, 1, a}.
double ode_residual(const HeunParams& p, double x, double y, double d1,
                    double d2);

// Normalization for residual tolerance tests: max of 1, |y|, |d1|, |d2|
// and the largest residual summand magnitude, so cancellation near roots
// does not fake failures.
double residual_scale(const HeunParams& p, double x, double y, double d1,
                      double d2);

// Integrates the equation as a first-order system from x0 (series
// initial data) to x_target with an adaptive embedded Dormand-Prince
// 5(4) pair; absolute and relative step tolerances both equal tol.
// x0 == x_target returns the series value directly.
double rk_oracle(const HeunParams& p, const Branch& branch, double x_target,
                 double x0, double tol);

enum class Method { Frobenius, Trf, Rk };

const char* method_name(Method m);

struct ComparisonReport {
    struct Point {
        double x;
        std::map<std::string, double> values;
        std::map<std::string, std::string> errors;
    };
    HeunParams params;
    Branch branch;
    std::vector<Point> points;
    double max_rel_discrepancy = 0.0;
    std::map<std::string, double> per_method_error_estimates;
};

// Evaluates each requested method at each x; per-point failures are
// recorded in the report instead of aborting the sweep.
ComparisonReport compare_methods(const HeunParams& p, const Branch& branch,
                                 const std::vector<double>& xs,
                                 const std::vector<Method>& methods);

}  // namespace heun
