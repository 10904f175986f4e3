#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "heun/core.hpp"
#include "heun/gauss2f1.hpp"
#include "heun/recurrence.hpp"
#include "heun/transform.hpp"
#include "heun/trf.hpp"
#include "heun/types.hpp"
#include "heun/verify.hpp"

namespace {

using namespace heun;

std::string fmt(double v, int digits) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

// JSON number or null; NaN and infinities have no JSON representation.
std::string jnum(double v) {
    if (!std::isfinite(v)) return "null";
    return fmt(v, 17);
}

std::string jnum(std::optional<double> v) {
    return v ? jnum(*v) : std::string("null");
}

std::string jesc(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
    return out;
}

std::string params_json(const HeunParams& p) {
    std::ostringstream os;
    os << "{\"a\":" << jnum(p.a) << ",\"q\":" << jnum(p.q)
       << ",\"alpha\":" << jnum(p.alpha) << ",\"beta\":" << jnum(p.beta)
       << ",\"gamma\":" << jnum(p.gamma) << ",\"delta\":" << jnum(p.delta)
       << ",\"epsilon\":" << jnum(p.epsilon) << "}";
    return os.str();
}

// One fixed key set for every method; what a method does not produce is
// null, never omitted.
void print_output_record(const HeunParams& p, const std::string& branch,
                         const std::string& method, double x,
                         std::optional<double> value,
                         std::optional<double> d1,
                         std::optional<double> error_estimate,
                         std::optional<int> terms_used) {
    std::ostringstream os;
    os << "{\"params\":" << params_json(p) << ",\"branch\":" << jesc(branch)
       << ",\"method\":" << jesc(method) << ",\"x\":" << jnum(x)
       << ",\"value\":" << jnum(value) << ",\"d1\":" << jnum(d1)
       << ",\"error_estimate\":" << jnum(error_estimate) << ",\"terms_used\":";
    if (terms_used)
        os << *terms_used;
    else
        os << "null";
    os << "}";
    std::puts(os.str().c_str());
}

int emit_error(int code, const std::string& kind, const std::string& msg) {
    std::ostringstream os;
    os << "{\"error\":{\"exit_code\":" << code << ",\"kind\":" << jesc(kind)
       << ",\"message\":" << jesc(msg) << "}}";
    std::puts(os.str().c_str());
    return code;
}

void warn_domain(const HeunParams& p, double x) {
    double r = 0.5 * series_domain(p);
    if (std::fabs(x) > r)
        std::fprintf(stderr,
                     "warning: |x| = %g exceeds 0.5*min(1,|a|) = %g; "
                     "truncation error may grow near the domain edge\n",
                     std::fabs(x), r);
}

struct CommonFlags {
    double a = 0, q = 0, alpha = 0, beta = 0, gamma = 0, delta = 0;
    std::string branch = "first";
    double tol = 0;
    int n_max = 0;
    bool has_tol = false, has_n_max = false;
};

void add_param_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--a", f.a, "Singular point location")->required();
    cmd->add_option("--q", f.q, "Accessory parameter")->required();
    cmd->add_option("--alpha", f.alpha, "Exponent parameter alpha")
        ->required();
    cmd->add_option("--beta", f.beta, "Exponent parameter beta")->required();
    cmd->add_option("--gamma", f.gamma, "Exponent parameter gamma")
        ->required();
    cmd->add_option("--delta", f.delta, "Exponent parameter delta")
        ->required();
    cmd->add_option("--branch", f.branch, "Local solution branch")
        ->check(CLI::IsMember({"first", "second"}))
        ->capture_default_str();
    cmd->add_option("--tol", f.tol, "Truncation tolerance")
        ->each([&f](const std::string&) { f.has_tol = true; });
    cmd->add_option("--n-max", f.n_max, "Outer truncation cap")
        ->each([&f](const std::string&) { f.has_n_max = true; });
}

BranchKind branch_kind(const CommonFlags& f) {
    return f.branch == "second" ? BranchKind::Second : BranchKind::First;
}

SeriesControl series_control(const CommonFlags& f) {
    SeriesControl c;
    if (f.has_tol) c.tol = f.tol;
    if (f.has_n_max) c.n_max = f.n_max;
    return c;
}

TrfTruncation trf_truncation(const CommonFlags& f) {
    TrfTruncation t;
    if (f.has_tol) t.tol = f.tol;
    if (f.has_n_max) t.n_max = f.n_max;
    return t;
}

double rk_start(const HeunParams& p, double x) {
    return std::min({0.05, x / 2.0, 0.25 * series_domain(p)});
}

std::vector<double> parse_number_list(const std::string& text,
                                      const std::string& flag) {
    std::vector<double> out;
    if (text.empty()) return out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        size_t used = 0;
        double v = 0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            throw FormatError("bad number '" + tok + "' in " + flag);
        }
        if (used != tok.size())
            throw FormatError("bad number '" + tok + "' in " + flag);
        out.push_back(v);
    }
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

void write_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw FormatError("cannot open output file '" + out_path + "'");
    out << text;
}

int run_eval(const CommonFlags& f, double x, const std::string& method) {
    HeunParams p = validate_params(f.a, f.q, f.alpha, f.beta, f.gamma,
                                   f.delta);
    Branch b = make_branch(p, branch_kind(f));
    warn_domain(p, x);
    if (method == "rk") {
        double tol = f.has_tol ? f.tol : 1e-10;
        double v = rk_oracle(p, b, x, rk_start(p, x), tol);
        print_output_record(p, f.branch, method, x, v, std::nullopt, tol,
                            std::nullopt);
        return 0;
    }
    SeriesValue sv = method == "frobenius"
                         ? frobenius_eval(p, b, x, series_control(f))
                         : trf_eval_infinite(p, b, x, trf_truncation(f));
    print_output_record(p, f.branch, method, x, sv.value, sv.d1,
                        sv.error_estimate, sv.terms_used);
    return 0;
}

int run_coeffs(const CommonFlags& f, int order, const std::string& method,
               const std::string& out_path) {
    HeunParams p = validate_params(f.a, f.q, f.alpha, f.beta, f.gamma,
                                   f.delta);
    Branch b = make_branch(p, branch_kind(f));
    std::vector<double> c = method == "frobenius"
                                ? frobenius_coeffs(p, b, order).c
                                : trf_extract_coeffs(p, b, trf_truncation(f),
                                                     order);
    std::ostringstream os;
    os << "k,c_k\n";
    for (size_t k = 0; k < c.size(); ++k)
        os << k << "," << fmt(c[k], 15) << "\n";
    write_text(os.str(), out_path);
    return 0;
}

int run_compare(const CommonFlags& f, const std::string& xs_text,
                const std::string& methods_text) {
    HeunParams p = validate_params(f.a, f.q, f.alpha, f.beta, f.gamma,
                                   f.delta);
    Branch b = make_branch(p, branch_kind(f));
    std::vector<double> xs = parse_number_list(xs_text, "--xs");
    std::vector<Method> methods;
    std::stringstream ss(methods_text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok == "frobenius") methods.push_back(Method::Frobenius);
        else if (tok == "trf") methods.push_back(Method::Trf);
        else if (tok == "rk") methods.push_back(Method::Rk);
        else throw FormatError("unknown method '" + tok + "' in --methods");
    }
    for (double x : xs) warn_domain(p, x);
    ComparisonReport rep = compare_methods(p, b, xs, methods);
    std::ostringstream os;
    os << "{\"params\":" << params_json(p) << ",\"branch\":" << jesc(f.branch)
       << ",\"points\":[";
    for (size_t i = 0; i < rep.points.size(); ++i) {
        const auto& pt = rep.points[i];
        if (i) os << ",";
        os << "{\"x\":" << jnum(pt.x) << ",\"values\":{";
        bool first = true;
        for (const auto& [name, v] : pt.values) {
            if (!first) os << ",";
            first = false;
            os << jesc(name) << ":" << jnum(v);
        }
        os << "},\"errors\":{";
        first = true;
        for (const auto& [name, msg] : pt.errors) {
            if (!first) os << ",";
            first = false;
            os << jesc(name) << ":" << jesc(msg);
        }
        os << "}}";
    }
    os << "],\"max_rel_discrepancy\":" << jnum(rep.max_rel_discrepancy)
       << ",\"per_method_error_estimates\":{";
    bool first = true;
    for (const auto& [name, est] : rep.per_method_error_estimates) {
        if (!first) os << ",";
        first = false;
        os << jesc(name) << ":" << jnum(est);
    }
    os << "}}";
    std::puts(os.str().c_str());
    return 0;
}

int run_transform(const CommonFlags& f, double x, const std::string& builtin,
                  const std::string& table, const std::string& record_name,
                  const std::string& method) {
    HeunParams p = validate_params(f.a, f.q, f.alpha, f.beta, f.gamma,
                                   f.delta);
    if (builtin.empty() == table.empty())
        throw FormatError(
            "exactly one of --builtin or --table must be given");
    TransformationRecord rec;
    if (!builtin.empty()) {
        if (builtin == "identity") rec = identity_record();
        else if (builtin == "eq61") rec = eq61_record();
        else
            throw FormatError("unknown builtin transformation '" + builtin +
                              "' (available: identity, eq61)");
    } else {
        if (record_name.empty())
            throw FormatError("--record is required with --table");
        bool found = false;
        for (TransformationRecord& r : load_transformation_table(table)) {
            if (r.name == record_name) {
                rec = std::move(r);
                found = true;
                break;
            }
        }
        if (!found)
            throw FormatError("record '" + record_name +
                              "' not found in table '" + table + "'");
    }
    if (!rec.warning.empty())
        std::fprintf(stderr, "warning: record '%s': %s\n", rec.name.c_str(),
                     rec.warning.c_str());
    warn_domain(p, x);
    (void)method;
    SeriesValue sv = transformed_eval(rec, p, branch_kind(f), x,
                                      trf_truncation(f));
    print_output_record(p, f.branch, "transform:" + rec.name, x, sv.value,
                        sv.d1, sv.error_estimate, sv.terms_used);
    return 0;
}

struct SweepGrid {
    std::string sym;
    double lo = 0, hi = 0;
    int n = 0;
};

SweepGrid parse_sweep(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(tok);
    if (parts.size() != 4)
        throw FormatError("--sweep expects sym:lo:hi:n, got '" + text + "'");
    SweepGrid s;
    s.sym = parts[0];
    static const std::vector<std::string> kSyms = {
        "a", "q", "alpha", "beta", "gamma", "delta", "x"};
    bool known = false;
    for (const auto& k : kSyms) known = known || k == s.sym;
    if (!known)
        throw FormatError("unknown sweep symbol '" + s.sym + "'");
    try {
        s.lo = std::stod(parts[1]);
        s.hi = std::stod(parts[2]);
        s.n = std::stoi(parts[3]);
    } catch (const std::exception&) {
        throw FormatError("bad sweep range '" + text + "'");
    }
    if (s.n < 2) throw FormatError("sweep needs at least 2 points");
    if (s.lo == s.hi)
        throw FormatError("degenerate sweep range: lo equals hi");
    return s;
}

int run_sweep(const CommonFlags& f, const std::string& sweep_text,
              std::optional<double> x_flag, const std::string& method,
              const std::string& out_path) {
    SweepGrid grid = parse_sweep(sweep_text);
    if (grid.sym != "x" && !x_flag)
        throw FormatError("--x is required unless sweeping x");
    std::ostringstream os;
    os << "sym,value,error_estimate,note\n";
    for (int i = 0; i < grid.n; ++i) {
        double v = grid.lo + (grid.hi - grid.lo) * i / (grid.n - 1);
        double a = f.a, q = f.q, alpha = f.alpha, beta = f.beta,
               gamma = f.gamma, delta = f.delta;
        double x = x_flag.value_or(0.0);
        if (grid.sym == "a") a = v;
        else if (grid.sym == "q") q = v;
        else if (grid.sym == "alpha") alpha = v;
        else if (grid.sym == "beta") beta = v;
        else if (grid.sym == "gamma") gamma = v;
        else if (grid.sym == "delta") delta = v;
        else x = v;
        os << fmt(v, 15) << ",";
        try {
            HeunParams p = validate_params(a, q, alpha, beta, gamma, delta);
            Branch b = make_branch(p, branch_kind(f));
            warn_domain(p, x);
            if (method == "rk") {
                double tol = f.has_tol ? f.tol : 1e-10;
                double y = rk_oracle(p, b, x, rk_start(p, x), tol);
                os << fmt(y, 15) << "," << fmt(tol, 15) << ",\n";
            } else {
                SeriesValue sv =
                    method == "frobenius"
                        ? frobenius_eval(p, b, x, series_control(f))
                        : trf_eval_infinite(p, b, x, trf_truncation(f));
                os << fmt(sv.value, 15) << "," << fmt(sv.error_estimate, 15)
                   << ",\n";
            }
        } catch (const std::runtime_error& e) {
            os << "nan,nan," << csv_field(e.what()) << "\n";
        }
    }
    write_text(os.str(), out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--epsilon" || arg.rfind("--epsilon=", 0) == 0)
            return emit_error(1, "usage",
                              "epsilon is not a free parameter: it is always "
                              "derived as alpha + beta - gamma - delta + 1");
    }
    CLI::App app{"Heun local-solution evaluator"};
    app.require_subcommand(1);

    CommonFlags f;
    double x = 0.0;
    int order = 0;
    std::string method_eval = "trf", method_coeffs = "frobenius",
                method_sweep = "trf";
    std::string xs_text, methods_text = "frobenius,trf,rk";
    std::string builtin, table, record_name, out_path, sweep_text;
    std::optional<double> sweep_x;

    CLI::App* eval = app.add_subcommand("eval", "Evaluate at a point");
    add_param_flags(eval, f);
    eval->add_option("--x", x, "Evaluation point")->required();
    eval->add_option("--method", method_eval, "Evaluation method")
        ->check(CLI::IsMember({"frobenius", "trf", "rk"}))
        ->capture_default_str();

    CLI::App* coeffs = app.add_subcommand("coeffs", "Series coefficients");
    add_param_flags(coeffs, f);
    coeffs->add_option("--order", order, "Highest coefficient order")
        ->required()
        ->check(CLI::NonNegativeNumber);
    coeffs->add_option("--method", method_coeffs, "Coefficient route")
        ->check(CLI::IsMember({"frobenius", "trf"}))
        ->capture_default_str();
    coeffs->add_option("--out", out_path, "Write CSV here instead of stdout");

    CLI::App* compare = app.add_subcommand("compare", "Cross-check methods");
    add_param_flags(compare, f);
    compare->add_option("--xs", xs_text, "Comma-separated sample points");
    compare->add_option("--methods", methods_text, "Comma-separated methods")
        ->capture_default_str();

    CLI::App* transform =
        app.add_subcommand("transform", "Evaluate a transformed solution");
    add_param_flags(transform, f);
    transform->add_option("--x", x, "Evaluation point")->required();
    transform->add_option("--builtin", builtin,
                          "Built-in record: identity or eq61");
    transform->add_option("--table", table, "Transformation table file");
    transform->add_option("--record", record_name,
                          "Record name within --table");
    transform->add_option("--method", method_eval, "Inner evaluation method");

    CLI::App* sweep = app.add_subcommand("sweep", "Sweep one symbol");
    add_param_flags(sweep, f);
    sweep->add_option("--sweep", sweep_text, "sym:lo:hi:n grid")->required();
    sweep->add_option("--x", sweep_x, "Evaluation point");
    sweep->add_option("--method", method_sweep, "Evaluation method")
        ->check(CLI::IsMember({"frobenius", "trf", "rk"}))
        ->capture_default_str();
    sweep->add_option("--out", out_path, "Write CSV here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return emit_error(1, "usage", e.what());
    }

    try {
        if (eval->parsed()) return run_eval(f, x, method_eval);
        if (coeffs->parsed())
            return run_coeffs(f, order, method_coeffs, out_path);
        if (compare->parsed()) return run_compare(f, xs_text, methods_text);
        if (transform->parsed())
            return run_transform(f, x, builtin, table, record_name,
                                 method_eval);
        if (sweep->parsed())
            return run_sweep(f, sweep_text, sweep_x, method_sweep, out_path);
        return emit_error(1, "usage", "no subcommand given");
    } catch (const FormatError& e) {
        return emit_error(1, "usage", e.what());
    } catch (const DomainError& e) {
        return emit_error(2, "domain", e.what());
    } catch (const ConvergenceError& e) {
        return emit_error(3, "convergence", e.what());
    } catch (const std::exception& e) {
        return emit_error(1, "usage", e.what());
    }
}
