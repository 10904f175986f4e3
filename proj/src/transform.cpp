#include "heun/transform.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "heun/core.hpp"
#include "heun/detail/triple.hpp"
#include "heun/trf.hpp"

namespace heun {

namespace {

using detail::Triple;

// Base value and x-derivative (second derivative of every base is 0).
std::pair<double, double> base_value(PrefactorBase base, double x, double a) {
    switch (base) {
        case PrefactorBase::X:
            return {x, 1.0};
        case PrefactorBase::OneMinusX:
            return {1.0 - x, -1.0};
        case PrefactorBase::AMinusX:
            return {a - x, -1.0};
        case PrefactorBase::OneMinusXOverA:
            return {1.0 - x / a, -1.0 / a};
    }
    throw DomainError("corrupt prefactor base");
}

Triple power_triple(double b, double bp, double e) {
    if (b > 0.0) {
        double v = std::pow(b, e);
        double w1 = e * std::pow(b, e - 1.0) * bp;
        double w2 = e * (e - 1.0) * std::pow(b, e - 2.0) * bp * bp;
        return {v, w1, w2};
    }
    auto n = nearest_int(e);
    if (!n)
        throw DomainError(
            "prefactor base not positive with non-integer exponent");
    long long ie = *n;
    if (b == 0.0) {
        if (ie < 0)
            throw DomainError("prefactor base zero with negative exponent");
        if (ie == 0) return {1.0, 0.0, 0.0};
        if (ie == 1) return {0.0, bp, 0.0};
        if (ie == 2) return {0.0, 0.0, 2.0 * bp * bp};
        return {0.0, 0.0, 0.0};
    }
    double ee = static_cast<double>(ie);
    double v = real_power(b, ee);
    double w1 = ee * real_power(b, ee - 1.0) * bp;
    double w2 = ee * (ee - 1.0) * real_power(b, ee - 2.0) * bp * bp;
    return {v, w1, w2};
}

}  // namespace

TransformationRecord identity_record() {
    TransformationRecord r;
    r.name = "identity";
    r.arg_map = {parse_param_expr("1"), parse_param_expr("0"),
                 parse_param_expr("0"), parse_param_expr("1")};
    r.new_a = parse_param_expr("a");
    r.new_q = parse_param_expr("q");
    r.new_alpha = parse_param_expr("alpha");
    r.new_beta = parse_param_expr("beta");
    r.new_gamma = parse_param_expr("gamma");
    r.new_delta = parse_param_expr("delta");
    return r;
}

TransformationRecord eq61_record() {
    TransformationRecord r;
    r.name = "eq61";
    r.prefactor.push_back({PrefactorBase::OneMinusX,
                           parse_param_expr("1 - delta")});
    r.arg_map = {parse_param_expr("1"), parse_param_expr("0"),
                 parse_param_expr("0"), parse_param_expr("1")};
    r.new_a = parse_param_expr("a");
    r.new_q = parse_param_expr("q - (delta - 1)*gamma*a");
    r.new_alpha = parse_param_expr("beta - delta + 1");
    r.new_beta = parse_param_expr("alpha - delta + 1");
    r.new_gamma = parse_param_expr("gamma");
    r.new_delta = parse_param_expr("2 - delta");
    return r;
}

AppliedTransformation apply_transformation(const TransformationRecord& rec,
                                           const HeunParams& p) {
    AppliedTransformation out;
    out.params = validate_params(rec.new_a.eval(p), rec.new_q.eval(p),
                                 rec.new_alpha.eval(p), rec.new_beta.eval(p),
                                 rec.new_gamma.eval(p), rec.new_delta.eval(p));
    double mp = rec.arg_map.p.eval(p);
    double mr = rec.arg_map.r.eval(p);
    double ms = rec.arg_map.s.eval(p);
    double mt = rec.arg_map.t.eval(p);
    double det = mp * mt - mr * ms;
    if (det == 0.0)
        throw DomainError("degenerate argument map: determinant is zero");
    std::vector<std::pair<PrefactorBase, double>> terms;
    terms.reserve(rec.prefactor.size());
    for (const PrefactorTerm& t : rec.prefactor)
        terms.emplace_back(t.base, t.exponent.eval(p));
    double a_orig = p.a;
    out.prefactor = [terms, a_orig](double x) -> ValueDerivs {
        Triple acc{1.0, 0.0, 0.0};
        for (const auto& [base, e] : terms) {
            auto [b, bp] = base_value(base, x, a_orig);
            acc = detail::mul(acc, power_triple(b, bp, e));
        }
        return {acc.v, acc.d1, acc.d2};
    };
    out.argument = [mp, mr, ms, mt, det](double x) -> ValueDerivs {
        double den = ms * x + mt;
        if (den == 0.0)
            throw DomainError("argument map singular at this x");
        double m = (mp * x + mr) / den;
        double m1 = det / (den * den);
        double m2 = -2.0 * ms * det / (den * den * den);
        return {m, m1, m2};
    };
    return out;
}

SeriesValue transformed_eval(const TransformationRecord& rec,
                             const HeunParams& p, BranchKind kind, double x,
                             const TrfTruncation& trunc) {
    AppliedTransformation ap = apply_transformation(rec, p);
    Branch inner = make_branch(ap.params, kind);
    ValueDerivs arg = ap.argument(x);
    SeriesValue g = trf_eval_infinite(ap.params, inner, arg.value, trunc);
    ValueDerivs pf = ap.prefactor(x);
    SeriesValue out{};
    out.value = pf.value * g.value;
    out.d1 = pf.d1 * g.value + pf.value * g.d1 * arg.d1;
    out.d2 = pf.d2 * g.value + 2.0 * pf.d1 * g.d1 * arg.d1 +
             pf.value * (g.d2 * arg.d1 * arg.d1 + g.d1 * arg.d2);
    out.terms_used = g.terms_used;
    out.error_estimate = std::fabs(pf.value) * g.error_estimate;
    return out;
}

namespace {

using nlohmann::json;

[[noreturn]] void table_fail(size_t idx, const std::string& field,
                             const std::string& what) {
    std::ostringstream os;
    os << "record " << idx << ", field '" << field << "': " << what;
    throw FormatError(os.str());
}

ParamExpr field_expr(const json& obj, size_t idx, const std::string& field) {
    if (!obj.is_string())
        table_fail(idx, field, "expected an expression string");
    try {
        return parse_param_expr(obj.get<std::string>());
    } catch (const FormatError& e) {
        table_fail(idx, field, e.what());
    }
}

PrefactorBase parse_base(const std::string& s, size_t idx,
                         const std::string& field) {
    static const std::map<std::string, PrefactorBase> kBases = {
        {"x", PrefactorBase::X},
        {"one_minus_x", PrefactorBase::OneMinusX},
        {"a_minus_x", PrefactorBase::AMinusX},
        {"one_minus_x_over_a", PrefactorBase::OneMinusXOverA}};
    auto it = kBases.find(s);
    if (it == kBases.end())
        table_fail(idx, field, "unknown prefactor base '" + s + "'");
    return it->second;
}

const json& need(const json& obj, size_t idx, const std::string& field) {
    if (!obj.is_object()) table_fail(idx, field, "expected an object");
    std::string key = field;
    if (auto pos = key.rfind('.'); pos != std::string::npos)
        key = key.substr(pos + 1);
    auto it = obj.find(key);
    if (it == obj.end()) table_fail(idx, field, "missing");
    return *it;
}

}  // namespace

std::vector<TransformationRecord> load_transformation_table(
    const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot open transformation table '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("transformation table parse error: ") +
                          e.what());
    }
    if (!doc.is_array())
        throw FormatError("transformation table must be a JSON array");
    std::vector<TransformationRecord> records;
    records.reserve(doc.size());
    for (size_t i = 0; i < doc.size(); ++i) {
        const json& r = doc[i];
        if (!r.is_object()) table_fail(i, "(record)", "expected an object");
        TransformationRecord rec;
        const json& name = need(r, i, "name");
        if (!name.is_string()) table_fail(i, "name", "expected a string");
        rec.name = name.get<std::string>();
        const json& pf = need(r, i, "prefactor");
        if (!pf.is_array()) table_fail(i, "prefactor", "expected an array");
        for (size_t j = 0; j < pf.size(); ++j) {
            std::string fld = "prefactor[" + std::to_string(j) + "]";
            const json& term = pf[j];
            if (!term.is_object()) table_fail(i, fld, "expected an object");
            const json& base = need(term, i, fld + ".base");
            if (!base.is_string())
                table_fail(i, fld + ".base", "expected a string");
            PrefactorTerm t;
            t.base = parse_base(base.get<std::string>(), i, fld + ".base");
            t.exponent =
                field_expr(need(term, i, fld + ".exponent"), i,
                           fld + ".exponent");
            rec.prefactor.push_back(std::move(t));
        }
        const json& am = need(r, i, "arg_map");
        rec.arg_map.p = field_expr(need(am, i, "arg_map.p"), i, "arg_map.p");
        rec.arg_map.r = field_expr(need(am, i, "arg_map.r"), i, "arg_map.r");
        rec.arg_map.s = field_expr(need(am, i, "arg_map.s"), i, "arg_map.s");
        rec.arg_map.t = field_expr(need(am, i, "arg_map.t"), i, "arg_map.t");
        const json& np = need(r, i, "params");
        rec.new_a = field_expr(need(np, i, "params.a"), i, "params.a");
        rec.new_q = field_expr(need(np, i, "params.q"), i, "params.q");
        rec.new_alpha =
            field_expr(need(np, i, "params.alpha"), i, "params.alpha");
        rec.new_beta =
            field_expr(need(np, i, "params.beta"), i, "params.beta");
        rec.new_gamma =
            field_expr(need(np, i, "params.gamma"), i, "params.gamma");
        rec.new_delta =
            field_expr(need(np, i, "params.delta"), i, "params.delta");
        for (const TransformationRecord& prev : records)
            if (prev.name == rec.name)
                throw FormatError("duplicate record name '" + rec.name + "'");
        // Degeneracy probe on a fixed generic binding.
        HeunParams test = validate_params(2.0, 1.0, 1.0, 2.0, 1.0, 1.0);
        try {
            double det = rec.arg_map.p.eval(test) * rec.arg_map.t.eval(test) -
                         rec.arg_map.r.eval(test) * rec.arg_map.s.eval(test);
            if (std::fabs(det) < 1e-12)
                rec.warning =
                    "argument map determinant vanishes for the test binding";
        } catch (const DomainError& e) {
            rec.warning = std::string(
                              "argument map could not be probed on the test "
                              "binding: ") +
                          e.what();
        }
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace heun
