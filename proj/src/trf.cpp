#include "heun/trf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "heun/core.hpp"
#include "heun/detail/triple.hpp"

namespace heun {

namespace {

using detail::Triple;

struct EngineOut {
    Triple total;
    int columns;
    double last;
};

// Column sweep over the ladder of sub-series.  State W[k] aggregates all
// nested-index tuples currently at sub-series k with the shared inner
// index equal to the column number.  Per column: ladder switches in
// ascending k (a tuple may climb several rungs at one inner index), then
// the column's contribution is read off, then every state advances its
// inner index through its B factor.  Exact zero factors annihilate
// states, which is how terminated sub-series stop contributing.
template <class FA, class FB>
EngineOut run_columns(FA&& fa, FB&& fb, const TrfTruncation& tr) {
    if (tr.n_max < 2 || tr.inner_cap < 1 || !(tr.tol > 0.0))
        throw DomainError("invalid truncation control");
    std::vector<Triple> w(static_cast<size_t>(tr.n_max) + 1);
    w[0] = {1.0, 0.0, 0.0};
    Triple total{};
    double top_mass = 0.0;
    double last = 0.0;
    int small_run = 0;
    for (int col = 0; col < tr.inner_cap; ++col) {
        for (int k = 0; k < tr.n_max; ++k) {
            if (w[k].v != 0.0 || w[k].d1 != 0.0 || w[k].d2 != 0.0)
                detail::add(w[k + 1], detail::mul(w[k], fa(k, col)));
        }
        Triple contrib{};
        for (const Triple& t : w) detail::add(contrib, t);
        detail::add(total, contrib);
        top_mass += std::fabs(w[tr.n_max].v);
        last = std::fabs(contrib.v);
        small_run = last <= tr.tol * std::fabs(total.v) ? small_run + 1 : 0;
        if (small_run >= 3 && col >= 2) {
            if (top_mass > tr.tol * std::max(1.0, std::fabs(total.v)))
                throw ConvergenceError(
                    "no convergence by n_max: ladder truncated with "
                    "significant mass at the top sub-series");
            return {total, col + 1, last};
        }
        for (int k = 0; k <= tr.n_max; ++k) w[k] = detail::mul(w[k], fb(k, col));
    }
    std::ostringstream os;
    os << "no convergence by n_max: inner cap " << tr.inner_cap
       << " exhausted";
    throw ConvergenceError(os.str());
}

void check_domain(const HeunParams& p, const Branch& b, double x) {
    double radius = series_domain(p);
    if (!(std::fabs(x) < radius)) {
        std::ostringstream os;
        os << "x = " << x << " outside convergence domain |x| < " << radius;
        throw DomainError(os.str());
    }
    if (x < 0.0 && !nearest_int(b.lambda))
        throw DomainError("negative x requires integer exponent lambda");
}

SeriesValue eval_closed_form(const HeunParams& p, const Branch& b, double x,
                             const TrfTruncation& tr) {
    check_domain(p, b, x);
    detail::WideParams<double> w(p);
    TerminationRoots roots = termination_roots(p, b.lambda);
    double lam = b.lambda;
    auto fa = [&](int k, int i) -> Triple {
        double ca = detail::trf_a_coeff(k, i, lam, w);
        return {ca * x, ca, 0.0};
    };
    auto fb = [&](int k, int j) -> Triple {
        double cb = detail::trf_b_coeff(k, j, lam, w, roots);
        return {cb * x * x, 2.0 * cb * x, 2.0 * cb};
    };
    EngineOut out = run_columns(fa, fb, tr);
    Triple s{b.c0 * out.total.v, b.c0 * out.total.d1, b.c0 * out.total.d2};
    return detail::combine_prefactor(lam, x, s, out.columns,
                                     std::fabs(b.c0) * out.last);
}

}  // namespace

TerminationReport detect_b_termination(const HeunParams& p, const Branch& b) {
    TerminationRoots roots = termination_roots(p, b.lambda);
    TerminationReport rep;
    if (roots.n_alpha >= 1) rep.zero_indices.push_back(roots.n_alpha);
    if (roots.n_beta >= 1 && roots.n_beta != roots.n_alpha)
        rep.zero_indices.push_back(roots.n_beta);
    std::sort(rep.zero_indices.begin(), rep.zero_indices.end());
    rep.terminated = !rep.zero_indices.empty();
    int k_top = TrfTruncation{}.n_max;
    rep.inner_bounds.reserve(static_cast<size_t>(k_top) + 1);
    for (int k = 0; k <= k_top; ++k) {
        long long bound = -1;
        for (long long n0 : rep.zero_indices) {
            long long d = n0 - k - 1;
            if (d >= 0 && d % 2 == 0) {
                long long j = d / 2;
                if (bound < 0 || j < bound) bound = j;
            }
        }
        rep.inner_bounds.push_back(bound);
    }
    return rep;
}

SeriesValue generic_trf_sum(const std::function<double(int)>& A,
                            const std::function<double(int)>& B,
                            double lambda, double x,
                            const TrfTruncation& trunc) {
    auto fa = [&](int k, int i) -> Triple {
        double av = A(2 * i + k);
        return {av * x, av, 0.0};
    };
    auto fb = [&](int k, int j) -> Triple {
        double bv = B(2 * j + k + 1);
        return {bv * x * x, 2.0 * bv * x, 2.0 * bv};
    };
    EngineOut out = run_columns(fa, fb, trunc);
    return detail::combine_prefactor(lambda, x, out.total, out.columns,
                                     out.last);
}

SeriesValue trf_eval_infinite(const HeunParams& p, const Branch& b, double x,
                              const TrfTruncation& trunc) {
    return eval_closed_form(p, b, x, trunc);
}

SeriesValue trf_eval_poly_b(const HeunParams& p, const Branch& b, double x,
                            const TrfTruncation& trunc) {
    if (!detect_b_termination(p, b).terminated)
        throw DomainError(
            "not B-terminated: no index n has an exactly zero B_n");
    return eval_closed_form(p, b, x, trunc);
}

SeriesValue trf_eval_poly_ab(const HeunParams& p, const Branch& b, double x,
                             const TrfTruncation& trunc) {
    TerminationRoots roots = termination_roots(p, b.lambda);
    if (roots.n_alpha < 1 || roots.n_beta < 1)
        throw DomainError(
            "not doubly terminated: both alpha and beta must hit the "
            "termination pattern");
    if ((roots.n_alpha - roots.n_beta) % 2 != 0)
        throw DomainError(
            "not doubly terminated: termination indices differ in parity");
    if (roots.n_alpha > roots.n_beta)
        throw DomainError(
            "alpha/beta order violated: the alpha-side bound exceeds the "
            "beta-side bound; swap alpha and beta (their roles are "
            "symmetric)");
    return eval_closed_form(p, b, x, trunc);
}

std::vector<double> trf_extract_coeffs(const HeunParams& p, const Branch& b,
                                       const TrfTruncation& trunc, int M) {
    (void)trunc;
    if (M < 0) throw DomainError("coefficient order must be nonnegative");
    detail::WideParams<long double> w(p);
    TerminationRoots roots = termination_roots(p, b.lambda);
    long double lam = b.lambda;
    // Power-indexed variant of the column sweep: states carry the
    // coefficient of x^m instead of a value, switches shift m by 1 and
    // advances by 2, everything above order M is pruned.  Finite and
    // exact, no tolerance involved.
    size_t rows = static_cast<size_t>(M) + 1;
    std::vector<std::vector<long double>> wk(rows,
                                             std::vector<long double>(rows));
    std::vector<long double> total(rows);
    wk[0][0] = static_cast<long double>(b.c0);
    int cols = M / 2 + 1;
    for (int col = 0; col < cols; ++col) {
        for (int k = 0; k + 1 <= M; ++k) {
            long double ca = detail::trf_a_coeff(k, col, lam, w);
            for (int m = M - 1; m >= 0; --m)
                if (wk[k][m] != 0.0L) wk[k + 1][m + 1] += wk[k][m] * ca;
        }
        for (int k = 0; k <= M; ++k)
            for (int m = 0; m <= M; ++m) total[m] += wk[k][m];
        for (int k = 0; k <= M; ++k) {
            long double cb = detail::trf_b_coeff(k, col, lam, w, roots);
            for (int m = M; m >= 0; --m)
                wk[k][m] = m >= 2 ? wk[k][m - 2] * cb : 0.0L;
        }
    }
    std::vector<double> out(rows);
    for (size_t m = 0; m < rows; ++m) out[m] = static_cast<double>(total[m]);
    return out;
}

std::vector<double> leading_z_coefficients(const HeunParams& p,
                                           const Branch& b, int count) {
    if (count < 0) throw DomainError("coefficient count must be nonnegative");
    detail::WideParams<double> w(p);
    TerminationRoots roots = termination_roots(p, b.lambda);
    std::vector<double> out;
    out.reserve(static_cast<size_t>(count) + 1);
    double c = 1.0;
    out.push_back(c);
    for (int j = 0; j < count; ++j) {
        c *= -p.a * detail::trf_b_coeff(0, j, b.lambda, w, roots);
        out.push_back(c);
    }
    return out;
}

}  // namespace heun
