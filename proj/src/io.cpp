#include "qgrade/io.hpp"

#include <algorithm>
#include <cstdio>

namespace qgrade::io {

namespace {

[[noreturn]] void fail(const std::string &what) { throw ParseError(what); }

const json &field_of(const json &obj, const char *key, const std::string &where)
{
    auto it = obj.find(key);
    if (it == obj.end()) fail(where + ": missing \"" + key + "\"");
    return *it;
}

long parse_long(const json &j, const std::string &where)
{
    if (!j.is_number_integer()) fail(where + ": expected an integer");
    return j.get<long>();
}

std::uint32_t parse_order(std::string_view text)
{
    if (text.size() < 5 || text.substr(0, 3) != "GF(" || text.back() != ')') fail("unknown field '" + std::string(text) + "'");
    std::string digits(text.substr(3, text.size() - 4));
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 6)
        fail("unknown field '" + std::string(text) + "'");
    return static_cast<std::uint32_t>(std::stoul(digits));
}

FieldPtr parse_base(const json &j)
{
    if (!j.is_string()) fail("field: expected \"Q\" or \"GF(q)\"");
    std::string s = j.get<std::string>();
    if (s == "Q") return FieldDescriptor::rationals();
    return FieldDescriptor::prime_field(parse_order(s));
}

json scalar_to_json(const Scalar &s)
{
    if (s.field()) return s.residue();
    return to_json(s.rational());
}

Scalar parse_scalar(const json &j, const FiniteField *ff)
{
    if (ff) {
        if (j.is_number_integer()) {
            long r = j.get<long>();
            if (r < 0 || r >= static_cast<long>(ff->order())) fail("residue out of range");
            return Scalar(static_cast<std::uint32_t>(r), ff);
        }
        Rational q = parse_rational_json(j);
        Scalar num(ff->from_integer(q.get_num()), ff), den(ff->from_integer(q.get_den()), ff);
        if (den.is_zero()) fail("denominator vanishes in GF(" + std::to_string(ff->order()) + ")");
        return num / den;
    }
    return Scalar(parse_rational_json(j));
}

json exps_to_json(const Exponents &e)
{
    json out = json::object();
    for (const auto &[v, n] : e) out[v.str()] = n;
    return out;
}

Exponents parse_exps(const json &j, const FieldPtr &f)
{
    if (!j.is_object()) fail("exponents: expected an object");
    Exponents e;
    for (const auto &[k, v] : j.items()) {
        Var var = Var::parse(k);
        if (!f->has_variable(var)) fail("variable " + k + " is not in " + f->str());
        e.emplace_back(var, parse_long(v, "exponent of " + k));
    }
    return canonical_exponents(e);
}

json poly_to_json(const Polynomial &p)
{
    json out = json::array();
    for (const auto &[e, c] : p.terms()) out.push_back(json::array({scalar_to_json(c), exps_to_json(e)}));
    return out;
}

Polynomial parse_poly(const json &j, const FieldPtr &f)
{
    if (!j.is_array()) fail("polynomial: expected [[coef, {var: exp}], ...]");
    Polynomial out(f->finite_field());
    for (const auto &t : j) {
        if (!t.is_array() || t.size() != 2) fail("polynomial term: expected [coef, {var: exp}]");
        Exponents e = parse_exps(t[1], f);
        for (const auto &[v, n] : e)
            if (n < 0) fail("polynomial exponents must be nonnegative");
        out = out + Polynomial::term(parse_scalar(t[0], f->finite_field()), e);
    }
    return out;
}

} // namespace

void expect_fields(const json &obj, std::initializer_list<const char *> allowed, const std::string &where)
{
    if (!obj.is_object()) fail(where + ": expected an object");
    for (const auto &[k, v] : obj.items()) {
        bool known = false;
        for (const char *a : allowed) known = known || k == a;
        if (!known) fail(where + ": unknown field \"" + k + "\"");
    }
}

// ---- scalars and vectors ----

json to_json(const Rational &q) { return to_string(q); }

json to_json(const Integer &z)
{
    if (z.fits_slong_p()) return z.get_si();
    return z.get_str();
}

json to_json(const RationalVector &v)
{
    json out = json::array();
    for (const auto &x : v.entries()) out.push_back(to_json(x));
    return out;
}

json to_json(const IntegerMatrix &m)
{
    json out = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
        out.push_back(row);
    }
    return out;
}

json to_json(const std::vector<RationalVector> &vs)
{
    json out = json::array();
    for (const auto &v : vs) out.push_back(to_json(v));
    return out;
}

Rational parse_rational_json(const json &j)
{
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (!j.is_string()) fail("expected a rational \"p/q\"");
    try {
        return parse_rational(j.get<std::string>());
    } catch (const PreconditionError &e) {
        fail(e.what());
    }
}

Integer parse_integer_json(const json &j)
{
    if (j.is_number_integer()) return Integer(j.get<long>());
    Rational q = parse_rational_json(j);
    if (!is_integer(q)) fail("expected an integer, got " + to_string(q));
    return q.get_num();
}

RationalVector parse_vector(const json &j, std::optional<std::size_t> dim)
{
    if (!j.is_array()) fail("expected a vector");
    std::vector<Rational> out;
    for (const auto &x : j) out.push_back(parse_rational_json(x));
    if (dim && out.size() != *dim) fail("vector has dimension " + std::to_string(out.size()) + ", expected " + std::to_string(*dim));
    return RationalVector(std::move(out));
}

std::vector<RationalVector> parse_vectors(const json &j, std::optional<std::size_t> dim)
{
    if (!j.is_array()) fail("expected a list of vectors");
    std::vector<RationalVector> out;
    for (const auto &v : j) {
        out.push_back(parse_vector(v, dim));
        dim = out.back().dim();
    }
    return out;
}

IntegerMatrix parse_integer_matrix(const json &j)
{
    if (!j.is_array() || j.empty()) fail("expected a nonempty matrix");
    std::size_t rows = j.size(), cols = j[0].is_array() ? j[0].size() : 0;
    IntegerMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols) fail("matrix rows differ in length");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = parse_integer_json(j[r][c]);
    }
    return m;
}

// ---- fields ----

json field_to_json(const FieldPtr &f)
{
    if (f->kind() != FieldDescriptor::Kind::function_field) return f->str();
    json vars = json::array();
    for (const auto &v : f->variables()) vars.push_back(v.str());
    return {{"base", f->base()->str()}, {"vars", vars}};
}

FieldPtr parse_field(const json &j)
{
    try {
        if (j.is_string()) return parse_base(j);
        expect_fields(j, {"base", "vars"}, "field");
        std::vector<Var> vars;
        const json &vs = field_of(j, "vars", "field");
        if (!vs.is_array()) fail("field: \"vars\" must be a list");
        for (const auto &v : vs) {
            if (!v.is_string()) fail("field: variable names are strings");
            vars.push_back(Var::parse(v.get<std::string>()));
        }
        return FieldDescriptor::function_field(parse_base(field_of(j, "base", "field")), vars);
    } catch (const ParseError &) {
        throw;
    } catch (const PreconditionError &e) {
        fail(std::string("field: ") + e.what());
    }
}

json to_json(const FieldElement &x)
{
    const FieldPtr &f = x.field();
    if (f->kind() != FieldDescriptor::Kind::function_field) return scalar_to_json(x.scalar());
    if (auto m = x.as_monomial()) return {{"unit", to_json(m->unit())}, {"exps", exps_to_json(m->exponents())}};
    return {{"num", poly_to_json(x.numerator())}, {"den", poly_to_json(x.denominator())}};
}

FieldElement parse_element(const json &j, const FieldPtr &f)
{
    try {
        if (!j.is_object()) return FieldElement::from_scalar(f, parse_scalar(j, f->finite_field()));
        if (f->kind() != FieldDescriptor::Kind::function_field) fail("element of " + f->str() + " must be a constant");
        if (j.contains("unit")) {
            expect_fields(j, {"unit", "exps"}, "monomial");
            FieldElement unit = parse_element(j["unit"], f->base());
            if (unit.is_zero()) fail("monomial unit is zero");
            Exponents e = j.contains("exps") ? parse_exps(j["exps"], f) : Exponents{};
            return embed_monomial(LaurentMonomial(unit, e), f);
        }
        expect_fields(j, {"num", "den"}, "fraction");
        Polynomial num = parse_poly(field_of(j, "num", "fraction"), f);
        Polynomial den = j.contains("den") ? parse_poly(j["den"], f) : Polynomial::constant(Scalar::one(f->finite_field()));
        if (den.is_zero()) fail("fraction has a zero denominator");
        return FieldElement::from_fraction(f, num, den);
    } catch (const ParseError &) {
        throw;
    } catch (const PreconditionError &e) {
        fail(std::string("element: ") + e.what());
    }
}

// ---- reports ----

json to_json(const CheckReport &r)
{
    json failures = json::array();
    for (const auto &c : r.failures) failures.push_back({{"points", to_json(c.points)}, {"detail", c.detail}});
    return {{"pass", r.pass()}, {"trials", r.trials}, {"failure_count", r.failure_count}, {"failures", failures}};
}

CheckReport parse_report(const json &j)
{
    expect_fields(j, {"pass", "trials", "failure_count", "failures"}, "report");
    CheckReport r;
    r.trials = parse_long(field_of(j, "trials", "report"), "trials");
    r.failure_count = parse_long(field_of(j, "failure_count", "report"), "failure_count");
    for (const auto &f : field_of(j, "failures", "report")) {
        expect_fields(f, {"points", "detail"}, "failure");
        r.failures.push_back({parse_vectors(field_of(f, "points", "failure")), field_of(f, "detail", "failure").get<std::string>()});
    }
    return r;
}

// ---- algebra elements ----

json to_json(const TwistedElement &a)
{
    json terms = json::array();
    for (const auto &[g, c] : a.terms()) terms.push_back({{"deg", to_json(g)}, {"coef", to_json(c)}});
    return {{"terms", terms}};
}

TwistedElement parse_twisted(const json &j, const ContextPtr &ctx)
{
    expect_fields(j, {"terms"}, "element");
    TwistedElement out(ctx);
    const json &terms = field_of(j, "terms", "element");
    if (!terms.is_array()) fail("element: \"terms\" must be a list");
    for (const auto &t : terms) {
        expect_fields(t, {"deg", "coef"}, "term");
        RationalVector g = parse_vector(field_of(t, "deg", "term"), ctx->dim());
        try {
            out = out + TwistedElement::monomial(ctx, g, parse_element(field_of(t, "coef", "term"), ctx->field()));
        } catch (const ParseError &) {
            throw;
        } catch (const PreconditionError &e) {
            fail(std::string("term: ") + e.what());
        }
    }
    return out;
}

json to_json(const GroupRingElement &k)
{
    json out = json::array();
    for (const auto &[g, c] : k.terms()) out.push_back({{"deg", to_json(g)}, {"coef", to_json(c)}});
    return out;
}

GroupRingElement parse_group_ring(const json &j)
{
    if (!j.is_array()) fail("expected a list of terms");
    GroupRingElement out;
    for (const auto &t : j) {
        expect_fields(t, {"deg", "coef"}, "term");
        out.add_term(parse_vector(field_of(t, "deg", "term")), parse_integer_json(field_of(t, "coef", "term")));
    }
    return out;
}

json to_json(const HilbertSeriesForm &form)
{
    return {{"numerator", to_json(form.numerator)}, {"denominator", to_json(form.denominator)}, {"group", to_json(form.group.basis())}};
}

HilbertSeriesForm parse_series(const json &j)
{
    expect_fields(j, {"numerator", "denominator", "group"}, "series");
    HilbertSeriesForm form;
    form.numerator = parse_group_ring(field_of(j, "numerator", "series"));
    form.denominator = parse_vectors(field_of(j, "denominator", "series"));
    std::vector<RationalVector> group = parse_vectors(field_of(j, "group", "series"));
    std::size_t d = !form.denominator.empty() ? form.denominator[0].dim()
                    : !group.empty()         ? group[0].dim()
                    : !form.numerator.is_zero() ? form.numerator.terms().begin()->first.dim()
                                                : 0;
    form.group = subgroup_basis(d, group);
    return form;
}

// ---- problem specs ----

HilbertInput parse_hilbert(const json &j, std::initializer_list<const char *> extra)
{
    std::vector<const char *> allowed{"grading", "ideal", "allow_zero"};
    allowed.insert(allowed.end(), extra.begin(), extra.end());
    if (!j.is_object()) fail("hilbert spec: expected an object");
    for (const auto &[k, v] : j.items())
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) fail("hilbert spec: unknown field \"" + k + "\"");

    const json &g = field_of(j, "grading", "hilbert spec");
    if (!g.is_array() || g.empty()) fail("grading: expected a d x n matrix");
    std::size_t d = g.size(), n = g[0].is_array() ? g[0].size() : 0;
    std::vector<RationalVector> cols(n, RationalVector(d));
    for (std::size_t r = 0; r < d; ++r) {
        if (!g[r].is_array() || g[r].size() != n) fail("grading: rows differ in length");
        for (std::size_t c = 0; c < n; ++c) cols[c][r] = parse_rational_json(g[r][c]);
    }
    bool allow_zero = j.contains("allow_zero") && j["allow_zero"].get<bool>();
    std::vector<std::vector<long>> gens;
    if (j.contains("ideal")) {
        if (!j["ideal"].is_array()) fail("ideal: expected a list of exponent vectors");
        for (const auto &m : j["ideal"]) {
            if (!m.is_array() || m.size() != n) fail("ideal: generator needs " + std::to_string(n) + " exponents");
            std::vector<long> u;
            for (const auto &e : m) {
                long x = parse_long(e, "ideal exponent");
                if (x < 0) fail("ideal: negative exponent");
                u.push_back(x);
            }
            gens.push_back(u);
        }
    }
    try {
        return {GradedRingSpec(d, cols, allow_zero), MonomialIdeal(n, gens)};
    } catch (const PreconditionError &e) {
        fail(std::string("hilbert spec: ") + e.what());
    }
}

json hilbert_to_json(const GradedRingSpec &spec, const MonomialIdeal &ideal)
{
    json grading = json::array();
    for (std::size_t r = 0; r < spec.d; ++r) {
        json row = json::array();
        for (const auto &c : spec.columns) row.push_back(to_json(c[r]));
        grading.push_back(row);
    }
    json gens = json::array();
    for (const auto &g : ideal.generators()) gens.push_back(g);
    json out = {{"grading", grading}, {"ideal", gens}};
    if (spec.allow_zero) out["allow_zero"] = true;
    return out;
}

Rkd parse_rkd(const json &j, std::initializer_list<const char *> extra)
{
    std::vector<const char *> allowed{"type", "d", "char", "schedule", "max_level"};
    allowed.insert(allowed.end(), extra.begin(), extra.end());
    if (!j.is_object()) fail("rkd spec: expected an object");
    for (const auto &[k, v] : j.items())
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) fail("rkd spec: unknown field \"" + k + "\"");
    long d = parse_long(field_of(j, "d", "rkd spec"), "d");
    if (d < 1) fail("rkd spec: d must be positive");
    long ch = j.contains("char") ? parse_long(j["char"], "char") : 0;
    PrimeSchedule schedule = PrimeSchedule::diagonal();
    if (j.contains("schedule")) {
        const json &s = j["schedule"];
        if (s.is_string()) {
            if (s.get<std::string>() != "diagonal") fail("rkd spec: unknown schedule " + s.dump());
        } else {
            expect_fields(s, {"constant"}, "schedule");
            schedule = PrimeSchedule::constant(parse_long(field_of(s, "constant", "schedule"), "constant"));
        }
    }
    long level = j.contains("max_level") ? parse_long(j["max_level"], "max_level") : 6;
    if (level < 1 || level > 12) fail("rkd spec: max_level must lie in [1, 12]");
    try {
        FieldPtr base = ch == 0 ? FieldDescriptor::rationals() : FieldDescriptor::prime_field(static_cast<std::uint32_t>(ch));
        if (ch != 0 && base->order() != static_cast<std::uint32_t>(ch)) fail("rkd spec: char must be 0 or a prime");
        return Rkd(static_cast<std::size_t>(d), schedule, base, static_cast<std::size_t>(level));
    } catch (const ParseError &) {
        throw;
    } catch (const PreconditionError &e) {
        fail(std::string("rkd spec: ") + e.what());
    }
}

ParsedCocycle parse_cocycle(const json &j)
{
    if (!j.is_object()) fail("cocycle: expected an object");
    const json &t = field_of(j, "type", "cocycle");
    if (!t.is_string()) fail("cocycle: \"type\" must be a string");
    std::string type = t.get<std::string>();
    try {
        if (type == "trivial") {
            expect_fields(j, {"type", "field", "dim", "basis"}, "trivial cocycle");
            FieldPtr f = j.contains("field") ? parse_field(j["field"]) : FieldDescriptor::rationals();
            SubgroupBasis g;
            if (j.contains("basis")) {
                auto basis = parse_vectors(j["basis"]);
                if (basis.empty()) fail("trivial cocycle: empty basis");
                g = subgroup_basis(basis[0].dim(), basis);
            } else {
                g = SubgroupBasis::standard(static_cast<std::size_t>(parse_long(field_of(j, "dim", "trivial cocycle"), "dim")));
            }
            return {trivial_cocycle(Domain::lattice(g), f), std::nullopt};
        }
        if (type == "bilinear") {
            expect_fields(j, {"type", "A", "lambda", "basis", "field"}, "bilinear cocycle");
            IntegerMatrix a = parse_integer_matrix(field_of(j, "A", "bilinear cocycle"));
            FieldPtr f = j.contains("field") ? parse_field(j["field"]) : FieldDescriptor::rationals();
            FieldElement lambda = parse_element(field_of(j, "lambda", "bilinear cocycle"), f);
            std::vector<RationalVector> basis;
            if (j.contains("basis")) basis = parse_vectors(j["basis"]);
            else
                for (std::size_t i = 0; i < a.rows(); ++i) basis.push_back(RationalVector::unit(a.rows(), i));
            return {bilinear_cocycle(a, lambda, basis), std::nullopt};
        }
        if (type == "rkd") {
            Rkd r = parse_rkd(j);
            return {r.limit_cocycle(), r};
        }
        if (type == "sum") {
            expect_fields(j, {"type", "of"}, "sum");
            const json &of = field_of(j, "of", "sum");
            if (!of.is_array() || of.size() != 2) fail("sum: \"of\" must hold two cocycles");
            ParsedCocycle a = parse_cocycle(of[0]), b = parse_cocycle(of[1]);
            return {segre(a.cocycle, b.cocycle), a.rkd ? a.rkd : b.rkd};
        }
        if (type == "power") {
            expect_fields(j, {"type", "of", "r"}, "power");
            ParsedCocycle a = parse_cocycle(field_of(j, "of", "power"));
            return {veronese(a.cocycle, parse_long(field_of(j, "r", "power"), "r")), a.rkd};
        }
        if (type == "inverse") {
            expect_fields(j, {"type", "of"}, "inverse");
            ParsedCocycle a = parse_cocycle(field_of(j, "of", "inverse"));
            return {inverse(a.cocycle), a.rkd};
        }
        if (type == "restrict") {
            expect_fields(j, {"type", "of", "basis"}, "restrict");
            ParsedCocycle a = parse_cocycle(field_of(j, "of", "restrict"));
            auto basis = parse_vectors(field_of(j, "basis", "restrict"), a.cocycle.domain().dim());
            return {restrict(a.cocycle, subgroup_basis(a.cocycle.domain().dim(), basis)), std::nullopt};
        }
        if (type == "extend") {
            expect_fields(j, {"type", "of", "e", "p", "y"}, "extend");
            ParsedCocycle a = parse_cocycle(field_of(j, "of", "extend"));
            RationalVector e = parse_vector(field_of(j, "e", "extend"), a.cocycle.domain().dim());
            long p = parse_long(field_of(j, "p", "extend"), "p");
            FieldElement y = j.contains("y") ? parse_element(j["y"], a.cocycle.field()) : FieldElement::one(a.cocycle.field());
            return {extend_root(a.cocycle, e, p, y), std::nullopt};
        }
    } catch (const ParseError &) {
        throw;
    } catch (const PreconditionError &e) {
        fail(type + " cocycle: " + e.what());
    }
    fail("cocycle: unknown type \"" + type + "\"");
}

json beta_table(const Beta &beta, const std::vector<RationalVector> &window)
{
    json out = json::array();
    for (const auto &g : window) out.push_back({{"deg", to_json(g)}, {"value", to_json(beta(g))}});
    return out;
}

std::string input_hash(const json &j)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : j.dump()) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace qgrade::io
