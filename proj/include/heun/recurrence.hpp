#pragma once

#include <vector>

#include "heun/detail/factors.hpp"
#include "heun/types.hpp"

namespace heun {

// Ratios of the three-term recurrence c_{n+1} = A_n c_n + B_n c_{n-1}
// for the local solution x^lambda sum c_n x^n.  The _alt variants are
// the algebraically equivalent rewritings through the epsilon
// constraint, exposed for identity testing.  A denominator
// a (n+1+lambda)(n+gamma+lambda) that vanishes exactly raises
// DomainError (resonant index).
double coeff_A(int n, double lambda, const HeunParams& p);
double coeff_A_alt(int n, double lambda, const HeunParams& p);
double coeff_B(int n, double lambda, const HeunParams& p);
double coeff_B_alt(int n, double lambda, const HeunParams& p);

// Coefficients c_0 .. c_N of the chosen branch, c_0 = branch.c0.
struct CoefficientTable {
    double lambda;
    std::vector<double> c;
};

CoefficientTable frobenius_coeffs(const HeunParams& p, const Branch& branch,
                                  int N);

// Direct power-series evaluation of value, y', y'' at x, |x| < min(1,|a|).
// x = 0 returns the limit values of the local solution.
SeriesValue frobenius_eval(const HeunParams& p, const Branch& branch, double x,
                           const SeriesControl& ctl = {});

}  // namespace heun
