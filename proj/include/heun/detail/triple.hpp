#pragma once

#include <cmath>
#include <limits>

#include "heun/core.hpp"
#include "heun/types.hpp"

namespace heun::detail {

// Value and first two x-derivatives carried together so series terms can
// be multiplied by the product rule.
struct Triple {
    double v = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

inline Triple mul(const Triple& l, const Triple& r) {
    return {l.v * r.v, l.d1 * r.v + l.v * r.d1,
            l.d2 * r.v + 2.0 * l.d1 * r.d1 + l.v * r.d2};
}

inline void add(Triple& acc, const Triple& t) {
    acc.v += t.v;
    acc.d1 += t.d1;
    acc.d2 += t.d2;
}

// Applies the x^lambda prefactor to an accumulated series triple S(x) =
// sum c_n x^n.  At x = 0 the one-sided limits are taken: S there must
// hold (c_0, c_1, 2 c_2).  Integer lambda is recognized by the 1e-9
// integrality convention; negative x requires integer lambda.
inline SeriesValue combine_prefactor(double lambda, double x, const Triple& s,
                                     int terms_used, double err) {
    SeriesValue out{};
    out.terms_used = terms_used;
    out.error_estimate = err;
    if (x != 0.0) {
        if (x < 0.0 && !nearest_int(lambda))
            throw DomainError("negative x requires integer exponent lambda");
        double pw = real_power(x, lambda);
        out.value = pw * s.v;
        out.d1 = pw * (lambda / x * s.v + s.d1);
        out.d2 = pw * (lambda * (lambda - 1.0) / (x * x) * s.v +
                       2.0 * lambda / x * s.d1 + s.d2);
        return out;
    }
    auto li = nearest_int(lambda);
    if (lambda < 0.0 && !(li && *li >= 0))
        throw DomainError("x = 0 outside domain for negative exponent lambda");
    double inf = std::numeric_limits<double>::infinity();
    auto signed_inf = [&](double w) {
        return w == 0.0 ? 0.0 : (w > 0.0 ? inf : -inf);
    };
    if (li && *li == 0) {
        out.value = s.v;
        out.d1 = s.d1;
        out.d2 = s.d2;
        return out;
    }
    out.value = 0.0;
    if (li && *li == 1)
        out.d1 = s.v;
    else if (lambda > 1.0)
        out.d1 = 0.0;
    else
        out.d1 = signed_inf(s.v);
    if (li && *li == 1)
        out.d2 = 2.0 * s.d1;
    else if (li && *li == 2)
        out.d2 = 2.0 * s.v;
    else if (lambda > 2.0)
        out.d2 = 0.0;
    else
        out.d2 = signed_inf(s.v * (lambda - 1.0));
    return out;
}

}  // namespace heun::detail
