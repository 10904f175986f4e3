#pragma once

#include "heun/types.hpp"

namespace heun {

// Gauss hypergeometric series sum_k (a1)_k (b1)_k / ((c1)_k k!) zz^k by
// direct summation.  Requires |zz| < 1 unless a1 or b1 is a nonpositive
// integer (1e-9 integrality), in which case the sum terminates exactly
// and tol is irrelevant.  Serves as the collapse-check oracle, not as a
// general-purpose 2F1.
double gauss_2f1(double a1, double b1, double c1, double zz,
                 double tol = 1e-14);

struct ReductionCheck {
    double heun_value;
    double f21_value;
    double abs_diff;
};

// Collapse of the first local solution at a = -1 with alpha = -2*alpha0:
// compares against gauss_2f1(-alpha0, beta/2, (1+gamma)/2, x^2).
ReductionCheck reduction_check_first(const HeunParams& p, double x,
                                     const TrfTruncation& trunc = {});

// Collapse of the second local solution at a = -1: compares the
// normalized series (leading coefficient 1, the z^{(1-gamma)/2}
// normalization that is real at a = -1) against
// x^{1-gamma} * gauss_2f1(-alpha0, (beta+1-gamma)/2, (3-gamma)/2, x^2).
ReductionCheck reduction_check_second(const HeunParams& p, double x,
                                      const TrfTruncation& trunc = {});

}  // namespace heun
