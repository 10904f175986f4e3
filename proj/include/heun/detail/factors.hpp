#pragma once

#include "heun/types.hpp"

namespace heun {

// Indices n at which the second numerator of the three-term B coefficient
// vanishes, declared by the 1e-9 integrality test on (1 - lambda - alpha)
// and (1 - lambda - beta).  -1 means no such index.  When a root is
// declared, the corresponding factor is recomputed from the rounded
// integer so the zero is exact in floating point.
struct TerminationRoots {
    long long n_alpha = -1;
    long long n_beta = -1;
};

TerminationRoots termination_roots(const HeunParams& p, double lambda);

namespace detail {

// Widened copy of the parameters so whole coefficient pipelines can run
// in extended precision.  Coefficient recurrences here lose up to ~8
// digits to cancellation at moderate orders; carrying the factors
// themselves in long double keeps the emitted double coefficients
// consistent between independent summation routes.
template <class T>
struct WideParams {
    T a, q, alpha, beta, gamma, delta, epsilon;
    explicit WideParams(const HeunParams& p)
        : a(p.a),
          q(p.q),
          alpha(p.alpha),
          beta(p.beta),
          gamma(p.gamma),
          delta(p.delta),
          epsilon(p.epsilon) {}
};

template <class T>
T rec_denominator(int n, T lam, const WideParams<T>& p) {
    return p.a * (T(n) + 1 + lam) * (T(n) + p.gamma + lam);
}

// Numerator of A_n, gamma/delta/epsilon form.
template <class T>
T rec_a_num(int n, T lam, const WideParams<T>& p) {
    T nn = T(n);
    return (nn + lam) * (nn - 1 + p.gamma + p.epsilon + lam +
                         p.a * (nn - 1 + p.gamma + lam + p.delta)) +
           p.q;
}

// Numerator of A_n with (n - 1 + gamma + epsilon) rewritten through the
// epsilon constraint as (n + alpha + beta - delta).
template <class T>
T rec_a_num_alt(int n, T lam, const WideParams<T>& p) {
    T nn = T(n);
    return (nn + lam) * (nn + p.alpha + p.beta - p.delta + lam +
                         p.a * (nn - 1 + p.gamma + lam + p.delta)) +
           p.q;
}

// Numerator of B_n, factored alpha/beta form.  Declared termination
// roots replace the matching factor by its exact integer distance.
template <class T>
T rec_b_num(int n, T lam, const WideParams<T>& p,
            const TerminationRoots& roots) {
    T f1 = roots.n_alpha >= 0 ? T(n - roots.n_alpha)
                              : T(n) - 1 + lam + p.alpha;
    T f2 = roots.n_beta >= 0 ? T(n - roots.n_beta)
                             : T(n) - 1 + lam + p.beta;
    return -(f1 * f2);
}

// Numerator of B_n, expanded gamma/delta/epsilon form.
template <class T>
T rec_b_num_alt(int n, T lam, const WideParams<T>& p) {
    T nn = T(n);
    return -((nn - 1 + lam) * (nn + p.gamma + p.delta + p.epsilon - 2 + lam) +
             p.alpha * p.beta);
}

// Ratio A_{2i+k} of the recurrence, in the grouping used by the
// rearranged double series.  Singularity-parameter-symmetric form: no
// division by (1 + a) appears, so a = -1 is an ordinary input.
template <class T>
T trf_a_coeff(int k, int i, T lam, const WideParams<T>& p) {
    T c = (T(k) + lam) / 2;
    T s = p.alpha + p.beta - p.delta + T(k) + lam +
          p.a * (p.delta + p.gamma + lam + T(k) - 1);
    T num = (T(i) + c) * (2 * (1 + p.a) * T(i) + s) + p.q / 2;
    T den = 2 * p.a * (T(i) + c + T(0.5)) * (T(i) + c + p.gamma / 2);
    return num / den;
}

// Ratio B_{2j+k+1} of the recurrence in the same grouping, as the
// coefficient of x^2.  Declared termination roots give exact zeros at
// (index - root)/2.
template <class T>
T trf_b_coeff(int k, int j, T lam, const WideParams<T>& p,
              const TerminationRoots& roots) {
    long long idx = 2LL * j + k + 1;
    T n1 = roots.n_alpha >= 0 ? T(idx - roots.n_alpha) / 2
                              : (p.alpha + T(k) + lam) / 2 + T(j);
    T n2 = roots.n_beta >= 0 ? T(idx - roots.n_beta) / 2
                             : (p.beta + T(k) + lam) / 2 + T(j);
    T d1 = 1 + (T(k) + lam) / 2 + T(j);
    T d2 = (1 + p.gamma + T(k) + lam) / 2 + T(j);
    return -(n1 * n2) / (p.a * d1 * d2);
}

}  // namespace detail
}  // namespace heun
