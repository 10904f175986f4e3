#include "heun/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "heun/core.hpp"
#include "heun/recurrence.hpp"
#include "heun/trf.hpp"

namespace heun {

namespace {

void check_nonsingular(const HeunParams& p, double x) {
    if (x == 0.0 || x == 1.0 || x == p.a) {
        std::ostringstream os;
        os << "residual undefined at singular point x = " << x;
        throw DomainError(os.str());
    }
}

double p_coeff(const HeunParams& p, double x) {
    return p.gamma / x + p.delta / (x - 1.0) + p.epsilon / (x - p.a);
}

double r_coeff(const HeunParams& p, double x) {
    return (p.alpha * p.beta * x - p.q) / (x * (x - 1.0) * (x - p.a));
}

}  // namespace

double ode_residual(const HeunParams& p, double x, double y, double d1,
                    double d2) {
    check_nonsingular(p, x);
    return d2 + p_coeff(p, x) * d1 + r_coeff(p, x) * y;
}

double residual_scale(const HeunParams& p, double x, double y, double d1,
                      double d2) {
    check_nonsingular(p, x);
    double s = std::max({1.0, std::fabs(y), std::fabs(d1), std::fabs(d2)});
    s = std::max(s, std::fabs(p_coeff(p, x) * d1));
    s = std::max(s, std::fabs(r_coeff(p, x) * y));
    return s;
}

namespace {

struct State {
    double y;
    double v;
};

State rhs(const HeunParams& p, double x, const State& s) {
    return {s.v, -p_coeff(p, x) * s.v - r_coeff(p, x) * s.y};
}

}  // namespace

double rk_oracle(const HeunParams& p, const Branch& branch, double x_target,
                 double x0, double tol) {
    if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
    if (x0 == x_target) return frobenius_eval(p, branch, x0).value;
    double limit = p.a > 0.0 ? std::min(1.0, p.a) : 1.0;
    if (!(0.0 < x0 && x0 < x_target && x_target < limit)) {
        std::ostringstream os;
        os << "invalid path: need 0 < x0 < x_target < " << limit;
        throw DomainError(os.str());
    }
    SeriesValue init = frobenius_eval(p, branch, x0);
    State s{init.value, init.d1};
    // Dormand-Prince 5(4) embedded pair.
    static constexpr std::array<double, 6> kC = {1.0 / 5, 3.0 / 10, 4.0 / 5,
                                                 8.0 / 9, 1.0,      1.0};
    static constexpr std::array<std::array<double, 6>, 6> kA = {{
        {1.0 / 5, 0, 0, 0, 0, 0},
        {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
        {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
         -5103.0 / 18656, 0},
        {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
    }};
    static constexpr std::array<double, 7> kB5 = {
        35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84,
        0};
    static constexpr std::array<double, 7> kB4 = {
        5179.0 / 57600,    0, 7571.0 / 16695, 393.0 / 640,
        -92097.0 / 339200, 187.0 / 2100,     1.0 / 40};
    double span = x_target - x0;
    double x = x0;
    double h = span / 100.0;
    while (x < x_target) {
        h = std::min(h, x_target - x);
        if (h < 1e-14 * span)
            throw ConvergenceError(
                "step-size underflow near singular point during "
                "integration");
        std::array<State, 7> k;
        k[0] = rhs(p, x, s);
        for (int i = 0; i < 6; ++i) {
            State si = s;
            for (int j = 0; j <= i; ++j) {
                si.y += h * kA[i][j] * k[j].y;
                si.v += h * kA[i][j] * k[j].v;
            }
            k[i + 1] = rhs(p, x + kC[i] * h, si);
        }
        State s5 = s, s4 = s;
        for (int i = 0; i < 7; ++i) {
            s5.y += h * kB5[i] * k[i].y;
            s5.v += h * kB5[i] * k[i].v;
            s4.y += h * kB4[i] * k[i].y;
            s4.v += h * kB4[i] * k[i].v;
        }
        double sc_y = tol + tol * std::max(std::fabs(s.y), std::fabs(s5.y));
        double sc_v = tol + tol * std::max(std::fabs(s.v), std::fabs(s5.v));
        double ey = (s5.y - s4.y) / sc_y;
        double ev = (s5.v - s4.v) / sc_v;
        double err = std::sqrt(0.5 * (ey * ey + ev * ev));
        if (err <= 1.0) {
            x += h;
            s = s5;
        }
        double factor = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
    }
    return s.y;
}

const char* method_name(Method m) {
    switch (m) {
        case Method::Frobenius:
            return "frobenius";
        case Method::Trf:
            return "trf";
        case Method::Rk:
            return "rk";
    }
    return "?";
}

ComparisonReport compare_methods(const HeunParams& p, const Branch& branch,
                                 const std::vector<double>& xs,
                                 const std::vector<Method>& methods) {
    constexpr double kRkTol = 1e-10;
    ComparisonReport rep;
    rep.params = p;
    rep.branch = branch;
    std::vector<Method> wanted;
    for (Method m : methods)
        if (std::find(wanted.begin(), wanted.end(), m) == wanted.end())
            wanted.push_back(m);
    double min_positive = 0.0;
    for (double x : xs)
        if (x > 0.0 && (min_positive == 0.0 || x < min_positive))
            min_positive = x;
    double rk_x0 = std::min(0.5 * min_positive, 0.25 * series_domain(p));
    for (double x : xs) {
        ComparisonReport::Point pt;
        pt.x = x;
        for (Method m : wanted) {
            try {
                switch (m) {
                    case Method::Frobenius: {
                        SeriesValue sv = frobenius_eval(p, branch, x);
                        pt.values["frobenius"] = sv.value;
                        auto& est =
                            rep.per_method_error_estimates["frobenius"];
                        est = std::max(est, sv.error_estimate);
                        break;
                    }
                    case Method::Trf: {
                        SeriesValue sv = trf_eval_infinite(p, branch, x);
                        pt.values["trf"] = sv.value;
                        auto& est = rep.per_method_error_estimates["trf"];
                        est = std::max(est, sv.error_estimate);
                        break;
                    }
                    case Method::Rk: {
                        pt.values["rk"] = rk_oracle(p, branch, x, rk_x0,
                                                    kRkTol);
                        rep.per_method_error_estimates["rk"] = kRkTol;
                        break;
                    }
                }
            } catch (const std::runtime_error& e) {
                pt.errors[method_name(m)] = e.what();
            }
        }
        for (auto i = pt.values.begin(); i != pt.values.end(); ++i)
            for (auto j = std::next(i); j != pt.values.end(); ++j) {
                double den = std::max(std::fabs(i->second),
                                      std::fabs(j->second));
                if (den == 0.0) continue;
                rep.max_rel_discrepancy =
                    std::max(rep.max_rel_discrepancy,
                             std::fabs(i->second - j->second) / den);
            }
        rep.points.push_back(std::move(pt));
    }
    return rep;
}

}  // namespace heun
