#pragma once

#include <functional>
#include <vector>

#include "heun/detail/factors.hpp"
#include "heun/types.hpp"

namespace heun {

// Where the nested sums acquire exact zero factors.  zero_indices holds
// the recurrence indices n with B_n exactly zero; inner_bounds[k] is the
// first inner index of sub-series k whose running B-product vanishes,
// -1 when the sub-series never acquires a zero factor.  inner_bounds
// covers k = 0 .. default n_max.
struct TerminationReport {
    bool terminated = false;
    std::vector<long long> zero_indices;
    std::vector<long long> inner_bounds;
};

TerminationReport detect_b_termination(const HeunParams& p, const Branch& b);

// Sums the rearranged double series for arbitrary coefficient sequences
// A_n, B_n of the three-term recurrence, with c_0 = 1 and prefactor
// x^lambda.  The nested inner sums are swept column by column; a column
// is the set of states sharing one inner index, so each pass costs
// O(n_max) and exact zero factors retire their states permanently.
SeriesValue generic_trf_sum(const std::function<double(int)>& A,
                            const std::function<double(int)>& B,
                            double lambda, double x,
                            const TrfTruncation& trunc = {});

// Same rearrangement with the closed-form factors of the equation, in
// the grouping that is finite at a = -1.
SeriesValue trf_eval_infinite(const HeunParams& p, const Branch& b, double x,
                              const TrfTruncation& trunc = {});

// Requires at least one exact zero in the B sequence; sub-series whose
// B-product hits that zero become polynomials in z = -x^2/a.
SeriesValue trf_eval_poly_b(const HeunParams& p, const Branch& b, double x,
                            const TrfTruncation& trunc = {});

// Requires both termination indices, same parity, alpha-side first.
SeriesValue trf_eval_poly_ab(const HeunParams& p, const Branch& b, double x,
                             const TrfTruncation& trunc = {});

// Coefficients of x^0 .. x^M relative to the x^lambda prefactor,
// accumulated across the nested sums; index 0 carries branch.c0.  Exact
// to order M, so trunc is accepted only for interface uniformity.
std::vector<double> trf_extract_coeffs(const HeunParams& p, const Branch& b,
                                       const TrfTruncation& trunc, int M);

// Coefficients of z^0 .. z^count of the leading sub-series, normalized
// to start at 1.  Declared termination makes the tail exactly zero.
std::vector<double> leading_z_coefficients(const HeunParams& p,
                                           const Branch& b, int count);

}  // namespace heun
