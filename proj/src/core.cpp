#include "heun/core.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace heun {

namespace {

bool all_finite(std::initializer_list<double> vs) {
    for (double v : vs)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace

HeunParams validate_params(double a, double q, double alpha, double beta,
                           double gamma, double delta) {
    if (!all_finite({a, q, alpha, beta, gamma, delta}))
        throw DomainError("parameters must be finite");
    if (a == 0.0)
        throw DomainError(
            "singular parameter: a = 0 collides with the origin");
    if (a == 1.0)
        throw DomainError(
            "singular parameter: a = 1 collides with the singular point 1");
    HeunParams p{};
    p.a = a;
    p.q = q;
    p.alpha = alpha;
    p.beta = beta;
    p.gamma = gamma;
    p.delta = delta;
    p.epsilon = alpha + beta - gamma - delta + 1.0;
    return p;
}

double pochhammer(double x, int n) {
    if (n < 0) throw DomainError("pochhammer order must be nonnegative");
    double r = 1.0;
    for (int k = 0; k < n; ++k) r *= x + k;
    return r;
}

std::pair<double, double> indicial_roots(const HeunParams& p) {
    return {0.0, 1.0 - p.gamma};
}

double series_domain(const HeunParams& p) {
    return std::min(1.0, std::fabs(p.a));
}

std::optional<long long> nearest_int(double v, double tol) {
    double r = std::nearbyint(v);
    if (std::fabs(v - r) <= tol && std::fabs(r) < 9.0e15)
        return static_cast<long long>(r);
    return std::nullopt;
}

double real_power(double x, double p) {
    if (auto n = nearest_int(p)) {
        if (x == 0.0) {
            if (*n < 0) throw DomainError("zero base with negative exponent");
            return *n == 0 ? 1.0 : 0.0;
        }
        double ax = std::fabs(x);
        double r = std::pow(ax, static_cast<double>(*n));
        if (x < 0.0 && (*n % 2 != 0)) r = -r;
        return r;
    }
    if (x <= 0.0)
        throw DomainError("negative base with non-integer exponent");
    return std::pow(x, p);
}

Branch make_branch(const HeunParams& p, BranchKind kind) {
    Branch b{};
    b.kind = kind;
    if (kind == BranchKind::First) {
        if (auto n = nearest_int(p.gamma); n && *n <= 0) {
            std::ostringstream os;
            os << "first branch undefined: gamma = " << p.gamma
               << " is a nonpositive integer";
            throw DomainError(os.str());
        }
        b.lambda = 0.0;
        b.c0 = 1.0;
        return b;
    }
    if (auto n = nearest_int(p.gamma)) {
        if (*n == 1)
            throw DomainError(
                "second branch degenerate: gamma = 1 repeats the first");
        if (*n >= 2) {
            std::ostringstream os;
            os << "second branch undefined: gamma = " << p.gamma
               << " is an integer >= 2";
            throw DomainError(os.str());
        }
    }
    b.lambda = 1.0 - p.gamma;
    // c0 = a^{-(1-gamma)/2}.  For a < 0 this is real only when the
    // exponent is an integer; real_power enforces exactly that.
    b.c0 = real_power(p.a, -(1.0 - p.gamma) / 2.0);
    return b;
}

TrfVariables trf_variables(const HeunParams& p, double x) {
    TrfVariables v{};
    v.z = -x * x / p.a;
    v.eta = (1.0 + p.a) * x / p.a;
    return v;
}

}  // namespace heun
