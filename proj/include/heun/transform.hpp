#pragma once

#include <functional>
#include <string>
#include <vector>

#include "heun/expr.hpp"
#include "heun/types.hpp"

namespace heun {

// Prefactor bases are a closed set so derivative propagation stays
// exact; exponents are expressions in the original parameters.
enum class PrefactorBase { X, OneMinusX, AMinusX, OneMinusXOverA };

struct PrefactorTerm {
    PrefactorBase base;
    ParamExpr exponent;
};

// x maps to (p*x + r)/(s*x + t); determinant p*t - r*s must not vanish
// for the binding in use.
struct MoebiusMap {
    ParamExpr p, r, s, t;
};

struct TransformationRecord {
    std::string name;
    std::vector<PrefactorTerm> prefactor;
    MoebiusMap arg_map;
    ParamExpr new_a, new_q, new_alpha, new_beta, new_gamma, new_delta;
    std::string warning;  // attached by the table loader, empty otherwise
};

TransformationRecord identity_record();

// The delta-flip solution: prefactor (1-x)^{1-delta}, parameters
// (a, q-(delta-1)*gamma*a, beta-delta+1, alpha-delta+1, gamma, 2-delta),
// argument unchanged.  Involution; epsilon is preserved.
TransformationRecord eq61_record();

struct ValueDerivs {
    double value;
    double d1;
    double d2;
};

// A record bound to one concrete parameter set: the mapped parameters
// plus evaluators (with exact x-derivatives) for the prefactor and the
// mapped argument.
struct AppliedTransformation {
    HeunParams params;
    std::function<ValueDerivs(double)> prefactor;
    std::function<ValueDerivs(double)> argument;
};

AppliedTransformation apply_transformation(const TransformationRecord& rec,
                                           const HeunParams& p);

// prefactor(x) times the mapped-parameter solution at the mapped
// argument; derivatives by product and chain rule.  The inner local
// solution is rebuilt from the mapped parameters for the given kind.
SeriesValue transformed_eval(const TransformationRecord& rec,
                             const HeunParams& p, BranchKind kind, double x,
                             const TrfTruncation& trunc = {});

// JSON array of records; duplicate names rejected, format errors name
// the record index and field.  Records whose argument-map determinant
// vanishes for a test binding get a warning attached.
std::vector<TransformationRecord> load_transformation_table(
    const std::string& path);

}  // namespace heun
