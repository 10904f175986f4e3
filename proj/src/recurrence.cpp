#include "heun/recurrence.hpp"

#include <cmath>
#include <sstream>

#include "heun/core.hpp"
#include "heun/detail/triple.hpp"

namespace heun {

TerminationRoots termination_roots(const HeunParams& p, double lambda) {
    TerminationRoots r;
    if (auto n = nearest_int(1.0 - lambda - p.alpha); n && *n >= 1)
        r.n_alpha = *n;
    if (auto n = nearest_int(1.0 - lambda - p.beta); n && *n >= 1)
        r.n_beta = *n;
    return r;
}

namespace {

double checked_denominator(int n, double lambda, const HeunParams& p) {
    detail::WideParams<double> w(p);
    double den = detail::rec_denominator(n, lambda, w);
    if (den == 0.0) {
        std::ostringstream os;
        os << "resonant index n = " << n << ": recurrence denominator vanishes";
        throw DomainError(os.str());
    }
    return den;
}

}  // namespace

double coeff_A(int n, double lambda, const HeunParams& p) {
    if (n < 0) throw DomainError("coefficient index must be nonnegative");
    double den = checked_denominator(n, lambda, p);
    detail::WideParams<double> w(p);
    return detail::rec_a_num(n, lambda, w) / den;
}

double coeff_A_alt(int n, double lambda, const HeunParams& p) {
    if (n < 0) throw DomainError("coefficient index must be nonnegative");
    double den = checked_denominator(n, lambda, p);
    detail::WideParams<double> w(p);
    return detail::rec_a_num_alt(n, lambda, w) / den;
}

double coeff_B(int n, double lambda, const HeunParams& p) {
    if (n < 1) throw DomainError("coefficient index must be at least 1");
    double den = checked_denominator(n, lambda, p);
    detail::WideParams<double> w(p);
    return detail::rec_b_num(n, lambda, w, termination_roots(p, lambda)) / den;
}

double coeff_B_alt(int n, double lambda, const HeunParams& p) {
    if (n < 1) throw DomainError("coefficient index must be at least 1");
    double den = checked_denominator(n, lambda, p);
    detail::WideParams<double> w(p);
    return detail::rec_b_num_alt(n, lambda, w) / den;
}

namespace {

// Streams c_n in extended precision.  The branch constructors exclude the
// gamma values that would make the denominator vanish at any n >= 0.
class CoeffStream {
public:
    CoeffStream(const HeunParams& p, const Branch& b)
        : w_(p),
          lam_(b.lambda),
          roots_(termination_roots(p, b.lambda)),
          prev_(0.0L),
          cur_(b.c0) {}

    long double current() const { return cur_; }

    void advance() {  // c_{n+1} from (c_n, c_{n-1})
        long double den = detail::rec_denominator(n_, lam_, w_);
        long double num = detail::rec_a_num(n_, lam_, w_) * cur_;
        if (n_ >= 1) num += detail::rec_b_num(n_, lam_, w_, roots_) * prev_;
        prev_ = cur_;
        cur_ = num / den;
        ++n_;
    }

private:
    detail::WideParams<long double> w_;
    long double lam_;
    TerminationRoots roots_;
    long double prev_, cur_;
    int n_ = 0;
};

}  // namespace

CoefficientTable frobenius_coeffs(const HeunParams& p, const Branch& branch,
                                  int N) {
    if (N < 0) throw DomainError("coefficient order must be nonnegative");
    CoefficientTable t;
    t.lambda = branch.lambda;
    t.c.reserve(static_cast<size_t>(N) + 1);
    CoeffStream cs(p, branch);
    for (int n = 0; n <= N; ++n) {
        t.c.push_back(static_cast<double>(cs.current()));
        cs.advance();
    }
    return t;
}

SeriesValue frobenius_eval(const HeunParams& p, const Branch& branch, double x,
                           const SeriesControl& ctl) {
    double radius = series_domain(p);
    if (!(std::fabs(x) < radius)) {
        std::ostringstream os;
        os << "x = " << x << " outside convergence domain |x| < " << radius;
        throw DomainError(os.str());
    }
    CoeffStream cs(p, branch);
    if (x == 0.0) {
        double c0 = static_cast<double>(cs.current());
        cs.advance();
        double c1 = static_cast<double>(cs.current());
        cs.advance();
        double c2 = static_cast<double>(cs.current());
        return detail::combine_prefactor(branch.lambda, 0.0,
                                         {c0, c1, 2.0 * c2}, 3, 0.0);
    }
    detail::Triple s{};
    double xn = 1.0;
    double last = 0.0;
    int small_run = 0;
    for (int n = 0; n <= ctl.n_max; ++n) {
        double t = static_cast<double>(cs.current()) * xn;
        double nn = static_cast<double>(n);
        detail::add(s, {t, nn * t / x, nn * (nn - 1.0) * t / (x * x)});
        last = std::fabs(t);
        small_run = last <= ctl.tol * std::fabs(s.v) ? small_run + 1 : 0;
        if (small_run >= 3 && n >= 2)
            return detail::combine_prefactor(branch.lambda, x, s, n + 1, last);
        cs.advance();
        xn *= x;
    }
    std::ostringstream os;
    os << "no convergence by N_max = " << ctl.n_max << " at x = " << x;
    throw ConvergenceError(os.str());
}

}  // namespace heun
