#pragma once

#include <stdexcept>
#include <string>

namespace heun {

// Parameter or argument outside the range the routines are defined on.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A series or integration failed to meet its tolerance within its caps.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed text input: expressions, table files, CLI payloads.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Equation parameters.  epsilon is never free; validate_params derives it
// as alpha + beta - gamma - delta + 1 and nothing else ever writes it.
struct HeunParams {
    double a;
    double q;
    double alpha;
    double beta;
    double gamma;
    double delta;
    double epsilon;
};

HeunParams validate_params(double a, double q, double alpha, double beta,
                           double gamma, double delta);

enum class BranchKind { First, Second };

// Local solution data at the origin: exponent lambda and the leading
// coefficient c0 fixed by the normalization a^{-(1-gamma)/2} on the
// second branch (c0 = 1 on the first).
struct Branch {
    BranchKind kind;
    double lambda;
    double c0;
};

Branch make_branch(const HeunParams& p, BranchKind kind);

// Value and first two derivatives at a point, with bookkeeping from the
// series that produced them.
struct SeriesValue {
    double value;
    double d1;
    double d2;
    int terms_used;
    double error_estimate;
};

// Variables of the rearranged double series: z = -x^2/a, eta = (1+a)x/a.
struct TrfVariables {
    double z;
    double eta;
};

TrfVariables trf_variables(const HeunParams& p, double x);

// Truncation controls for the plain power series.
struct SeriesControl {
    double tol = 1e-14;
    int n_max = 500;
};

// Truncation controls for the rearranged double series: n_max caps the
// eta ladder, inner_cap the z direction.
struct TrfTruncation {
    int n_max = 60;
    int inner_cap = 400;
    double tol = 1e-12;
};

}  // namespace heun
