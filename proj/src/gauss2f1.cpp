#include "heun/gauss2f1.hpp"

#include <cmath>
#include <sstream>

#include "heun/core.hpp"
#include "heun/trf.hpp"

namespace heun {

namespace {

// Number of nonzero terms when the parameter is a declared nonpositive
// integer, -1 otherwise.
long long term_count(double v) {
    if (auto n = nearest_int(v); n && *n <= 0) return -*n + 1;
    return -1;
}

}  // namespace

double gauss_2f1(double a1, double b1, double c1, double zz, double tol) {
    if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
    long long ka = term_count(a1);
    long long kb = term_count(b1);
    long long kterm = -1;
    if (ka >= 0) kterm = ka;
    if (kb >= 0) kterm = kterm < 0 ? kb : std::min(kterm, kb);
    auto nc = nearest_int(c1);
    bool polar = nc && *nc <= 0;
    if (kterm < 0) {
        if (!(std::fabs(zz) < 1.0))
            throw DomainError(
                "nonconvergent argument: |z| must be < 1 for a "
                "non-terminating series");
        if (polar)
            throw DomainError("polar parameter c: nonpositive integer c");
    } else if (polar && kterm - 1 > -*nc) {
        // The pole factor (c1 + k) = 0 at k = -nc enters the terms with
        // k > -nc; safe only if termination comes first.
        throw DomainError("polar parameter c: pole reached before the "
                          "series terminates");
    }
    double t = 1.0;
    double sum = 1.0;
    int small_run = 0;
    for (long long k = 0; k < 100000; ++k) {
        if (kterm >= 0 && k + 1 >= kterm) return sum;
        double fa = ka >= 0 ? static_cast<double>(k - (ka - 1)) : a1 + k;
        double fb = kb >= 0 ? static_cast<double>(k - (kb - 1)) : b1 + k;
        double den = (c1 + k) * (k + 1);
        if (den == 0.0)
            throw DomainError("polar parameter c: zero denominator in term");
        t *= fa * fb / den * zz;
        sum += t;
        small_run = std::fabs(t) <= tol * std::fabs(sum) ? small_run + 1 : 0;
        if (small_run >= 3) return sum;
    }
    throw ConvergenceError("hypergeometric series did not converge");
}

ReductionCheck reduction_check_first(const HeunParams& p, double x,
                                     const TrfTruncation& trunc) {
    if (std::fabs(p.a + 1.0) > 1e-12)
        throw DomainError("reduction requires a = -1");
    auto a0 = nearest_int(-p.alpha / 2.0);
    if (!a0 || *a0 < 0)
        throw DomainError(
            "reduction requires alpha = -2*alpha0 with alpha0 a "
            "nonnegative integer");
    Branch b = make_branch(p, BranchKind::First);
    ReductionCheck rc{};
    rc.heun_value = trf_eval_infinite(p, b, x, trunc).value;
    rc.f21_value = gauss_2f1(-static_cast<double>(*a0), p.beta / 2.0,
                             (1.0 + p.gamma) / 2.0, x * x);
    rc.abs_diff = std::fabs(rc.heun_value - rc.f21_value);
    return rc;
}

ReductionCheck reduction_check_second(const HeunParams& p, double x,
                                      const TrfTruncation& trunc) {
    if (std::fabs(p.a + 1.0) > 1e-12)
        throw DomainError("reduction requires a = -1");
    if (!(x > 0.0))
        throw DomainError("reduction comparison requires x > 0");
    if (auto n = nearest_int(p.gamma); n && *n >= 1)
        throw DomainError(
            "second local solution undefined for integer gamma >= 1");
    double lam = 1.0 - p.gamma;
    // alpha0 from the second-branch termination pattern
    // alpha = gamma - 1 - 2*alpha0.
    auto a0 = nearest_int((p.gamma - 1.0 - p.alpha) / 2.0);
    if (!a0 || *a0 < 0)
        throw DomainError(
            "reduction requires alpha = gamma - 1 - 2*alpha0 with alpha0 "
            "a nonnegative integer");
    // Normalized second solution: leading coefficient 1 instead of the
    // branch constant, matching the collapse identity's normalization
    // (and real at a = -1 where the branch constant need not be).
    Branch b{BranchKind::Second, lam, 1.0};
    ReductionCheck rc{};
    rc.heun_value = trf_eval_infinite(p, b, x, trunc).value;
    rc.f21_value =
        std::pow(x, lam) * gauss_2f1(-static_cast<double>(*a0),
                                     (p.beta + 1.0 - p.gamma) / 2.0,
                                     (3.0 - p.gamma) / 2.0, x * x);
    rc.abs_diff = std::fabs(rc.heun_value - rc.f21_value);
    return rc;
}

}  // namespace heun
