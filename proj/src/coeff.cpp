#include "qgrade/coeff.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace qgrade {

// ---- variables and exponent vectors ----

std::string Var::str() const
{
    return std::string(1, family) + "[" + std::to_string(j) + "," + std::to_string(i) + "]";
}

Var Var::parse(std::string_view text)
{
    auto fail = [&]() -> Var { throw PreconditionError("malformed variable '" + std::string(text) + "'"); };
    if (text.size() < 6 || text[1] != '[' || text.back() != ']') return fail();
    if (text[0] < 'a' || text[0] > 'z') return fail();
    auto comma = text.find(',');
    if (comma == std::string_view::npos) return fail();
    Var v;
    v.family = text[0];
    auto body_j = text.substr(2, comma - 2);
    auto body_i = text.substr(comma + 1, text.size() - comma - 2);
    auto rj = std::from_chars(body_j.data(), body_j.data() + body_j.size(), v.j);
    auto ri = std::from_chars(body_i.data(), body_i.data() + body_i.size(), v.i);
    if (rj.ec != std::errc() || rj.ptr != body_j.data() + body_j.size()) return fail();
    if (ri.ec != std::errc() || ri.ptr != body_i.data() + body_i.size()) return fail();
    if (v.j < 1 || v.i < 0) return fail();
    return v;
}

Exponents exponents_mul(const Exponents &a, const Exponents &b)
{
    Exponents out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, k = 0;
    while (i < a.size() || k < b.size()) {
        if (k == b.size() || (i < a.size() && a[i].first < b[k].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[k].first < a[i].first) {
            out.push_back(b[k++]);
        } else {
            long e = a[i].second + b[k].second;
            if (e != 0) out.emplace_back(a[i].first, e);
            ++i;
            ++k;
        }
    }
    return out;
}

Exponents exponents_pow(const Exponents &a, long n)
{
    if (n == 0) return {};
    Exponents out = a;
    for (auto &[v, e] : out) e *= n;
    return out;
}

Exponents canonical_exponents(Exponents e)
{
    std::sort(e.begin(), e.end(), [](const auto &x, const auto &y) { return x.first < y.first; });
    Exponents out;
    for (const auto &p : e) {
        if (!out.empty() && out.back().first == p.first)
            out.back().second += p.second;
        else
            out.push_back(p);
        if (out.back().second == 0) out.pop_back();
    }
    return out;
}

long exponents_degree(const Exponents &a)
{
    long d = 0;
    for (const auto &[v, e] : a) d += e;
    return d;
}

long exponent_of(const Exponents &a, const Var &v)
{
    auto it = std::lower_bound(a.begin(), a.end(), v, [](const auto &p, const Var &x) { return p.first < x; });
    return it != a.end() && it->first == v ? it->second : 0;
}

std::string exponents_str(const Exponents &a)
{
    if (a.empty()) return "1";
    std::string out;
    for (const auto &[v, e] : a) {
        if (!out.empty()) out += " * ";
        out += v.str();
        if (e != 1) out += "^" + std::to_string(e);
    }
    return out;
}

bool GrlexLess::operator()(const Exponents &a, const Exponents &b) const
{
    long da = exponents_degree(a), db = exponents_degree(b);
    if (da != db) return da < db;
    std::size_t i = 0, k = 0;
    while (i < a.size() || k < b.size()) {
        if (k == b.size() || (i < a.size() && a[i].first < b[k].first)) return false;
        if (i == a.size() || b[k].first < a[i].first) return true;
        if (a[i].second != b[k].second) return a[i].second < b[k].second;
        ++i;
        ++k;
    }
    return false;
}

namespace {

// a / b when b divides a as monomials (nonnegative result).
std::optional<Exponents> exponents_divide(const Exponents &a, const Exponents &b)
{
    Exponents out = exponents_mul(a, exponents_pow(b, -1));
    for (const auto &[v, e] : out)
        if (e < 0) return std::nullopt;
    return out;
}

} // namespace

// ---- scalars ----

bool Scalar::is_zero() const
{
    return ff_ ? residue() == 0 : sgn(rational()) == 0;
}

bool Scalar::is_one() const
{
    return ff_ ? residue() == 1 : rational() == 1;
}

Scalar Scalar::operator+(const Scalar &o) const
{
    if (ff_) return Scalar(ff_->add(residue(), o.residue()), ff_);
    return Scalar(Rational(rational() + o.rational()));
}

Scalar Scalar::operator-(const Scalar &o) const
{
    if (ff_) return Scalar(ff_->sub(residue(), o.residue()), ff_);
    return Scalar(Rational(rational() - o.rational()));
}

Scalar Scalar::operator*(const Scalar &o) const
{
    if (ff_) return Scalar(ff_->mul(residue(), o.residue()), ff_);
    return Scalar(Rational(rational() * o.rational()));
}

Scalar Scalar::operator/(const Scalar &o) const { return *this * o.inverse(); }

Scalar Scalar::operator-() const
{
    if (ff_) return Scalar(ff_->neg(residue()), ff_);
    return Scalar(Rational(-rational()));
}

Scalar Scalar::inverse() const
{
    if (is_zero()) throw PreconditionError("division by zero");
    if (ff_) return Scalar(ff_->inv(residue()), ff_);
    return Scalar(Rational(1 / rational()));
}

Scalar Scalar::pow(long e) const
{
    if (ff_) return Scalar(ff_->pow(residue(), e), ff_);
    if (e < 0) return inverse().pow(-e);
    Rational out;
    mpz_pow_ui(out.get_num_mpz_t(), rational().get_num_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(out.get_den_mpz_t(), rational().get_den_mpz_t(), static_cast<unsigned long>(e));
    return Scalar(out);
}

std::string Scalar::str() const
{
    if (ff_) return std::to_string(residue());
    return rational().get_str();
}

// ---- polynomials ----

Polynomial Polynomial::constant(const Scalar &s)
{
    Polynomial p(s.field());
    p.add_term({}, s);
    return p;
}

Polynomial Polynomial::term(const Scalar &s, Exponents e)
{
    Polynomial p(s.field());
    for (const auto &[v, k] : e)
        if (k < 0) throw PreconditionError("negative exponent in a polynomial term");
    p.add_term(canonical_exponents(std::move(e)), s);
    return p;
}

Polynomial Polynomial::variable(const Var &v, const FiniteField *f)
{
    return term(Scalar::one(f), {{v, 1}});
}

void Polynomial::add_term(const Exponents &e, const Scalar &s)
{
    if (s.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(e, s);
    if (!inserted) {
        it->second = it->second + s;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

bool Polynomial::is_constant() const
{
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

bool Polynomial::is_one() const
{
    return terms_.size() == 1 && terms_.begin()->first.empty() && terms_.begin()->second.is_one();
}

long Polynomial::degree_in(const Var &v) const
{
    long d = 0;
    for (const auto &[e, c] : terms_) d = std::max(d, exponent_of(e, v));
    return d;
}

std::map<long, Polynomial> Polynomial::coefficients_in(const Var &v) const
{
    std::map<long, Polynomial> out;
    for (const auto &[e, c] : terms_) {
        long k = 0;
        Exponents rest;
        rest.reserve(e.size());
        for (const auto &p : e) {
            if (p.first == v)
                k = p.second;
            else
                rest.push_back(p);
        }
        auto it = out.try_emplace(k, Polynomial(ff_)).first;
        it->second.add_term(rest, c);
    }
    return out;
}

std::vector<Var> Polynomial::variables() const
{
    std::vector<Var> out;
    for (const auto &[e, c] : terms_)
        for (const auto &p : e) out.push_back(p.first);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Polynomial Polynomial::operator+(const Polynomial &o) const
{
    Polynomial out = *this;
    for (const auto &[e, c] : o.terms_) out.add_term(e, c);
    return out;
}

Polynomial Polynomial::operator-(const Polynomial &o) const
{
    Polynomial out = *this;
    for (const auto &[e, c] : o.terms_) out.add_term(e, -c);
    return out;
}

Polynomial Polynomial::operator*(const Polynomial &o) const
{
    Polynomial out(ff_);
    for (const auto &[e1, c1] : terms_)
        for (const auto &[e2, c2] : o.terms_) out.add_term(exponents_mul(e1, e2), c1 * c2);
    return out;
}

Polynomial Polynomial::operator-() const
{
    Polynomial out(ff_);
    for (const auto &[e, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), e, -c);
    return out;
}

Polynomial Polynomial::scaled(const Scalar &s) const
{
    Polynomial out(ff_);
    if (s.is_zero()) return out;
    for (const auto &[e, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), e, c * s);
    return out;
}

Polynomial Polynomial::shifted(const Exponents &m) const
{
    Polynomial out(ff_);
    for (const auto &[e, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), exponents_mul(e, m), c);
    return out;
}

Polynomial Polynomial::pow(unsigned long e) const
{
    Polynomial result = constant(Scalar::one(ff_));
    Polynomial base = *this;
    while (e) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

std::optional<Polynomial> Polynomial::exact_div(const Polynomial &o) const
{
    if (o.is_zero()) throw PreconditionError("polynomial division by zero");
    Polynomial q(ff_), r = *this;
    const auto &[le, lc] = o.leading();
    Scalar lc_inv = lc.inverse();
    while (!r.is_zero()) {
        const auto &[re, rc] = r.leading();
        auto shift = exponents_divide(re, le);
        if (!shift) return std::nullopt;
        Scalar factor = rc * lc_inv;
        q.add_term(*shift, factor);
        r = r - o.shifted(*shift).scaled(factor);
    }
    return q;
}

Polynomial Polynomial::monic() const
{
    if (is_zero()) return *this;
    return scaled(leading().second.inverse());
}

std::string Polynomial::str() const
{
    if (terms_.empty()) return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto &[e, c] = *it;
        std::string coef = c.str();
        bool negative = !ff_ && sgn(c.rational()) < 0;
        if (negative) coef = Rational(-c.rational()).get_str();
        if (!out.empty())
            out += negative ? " - " : " + ";
        else if (negative)
            out += "-";
        if (e.empty())
            out += coef;
        else if (coef == "1")
            out += exponents_str(e);
        else
            out += coef + " * " + exponents_str(e);
    }
    return out;
}

namespace {

Polynomial one_like(const Polynomial &p) { return Polynomial::constant(Scalar::one(p.field())); }

Polynomial content_in(const Polynomial &p, const Var &x)
{
    auto coeffs = p.coefficients_in(x);
    Polynomial g(p.field());
    for (const auto &[k, c] : coeffs) {
        g = gcd(g, c);
        if (g.is_one()) break;
    }
    return g;
}

Polynomial primitive_in(const Polynomial &p, const Var &x)
{
    Polynomial c = content_in(p, x);
    if (c.is_one()) return p.monic();
    return p.exact_div(c)->monic();
}

Polynomial leading_in(const Polynomial &p, const Var &x) { return p.coefficients_in(x).rbegin()->second; }

// lc(q)^(deg p - deg q + 1) * p mod q with respect to x.
Polynomial pseudo_rem(Polynomial p, const Polynomial &q, const Var &x)
{
    long n = q.degree_in(x);
    long steps = p.degree_in(x) - n + 1;
    Polynomial lc = leading_in(q, x);
    while (!p.is_zero()) {
        long m = p.degree_in(x);
        if (m < n) break;
        Polynomial lp = leading_in(p, x);
        Exponents shift;
        if (m > n) shift.emplace_back(x, m - n);
        p = lc * p - (lp * q).shifted(shift);
        --steps;
    }
    if (steps > 0 && !p.is_zero()) p = p * lc.pow(static_cast<unsigned long>(steps));
    return p;
}

// Largest monomial dividing every term of p.
Exponents monomial_content(const Polynomial &p)
{
    Exponents out = p.terms().begin()->first;
    for (const auto &[pe, c] : p.terms()) {
        Exponents next;
        for (const auto &[v, k] : out) {
            long m = std::min(k, exponent_of(pe, v));
            if (m > 0) next.emplace_back(v, m);
        }
        out = std::move(next);
        if (out.empty()) break;
    }
    return out;
}

Exponents exponents_min(const Exponents &a, const Exponents &b)
{
    Exponents out;
    for (const auto &[v, k] : a) {
        long m = std::min(k, exponent_of(b, v));
        if (m > 0) out.emplace_back(v, m);
    }
    return out;
}

Polynomial strip(const Polynomial &p, const Exponents &m)
{
    return m.empty() ? p : p.shifted(exponents_pow(m, -1));
}

} // namespace

Polynomial gcd(const Polynomial &a0, const Polynomial &b0)
{
    if (a0.is_zero()) return b0.monic();
    if (b0.is_zero()) return a0.monic();
    if (a0.is_constant() || b0.is_constant()) return one_like(a0);

    Exponents ma = monomial_content(a0), mb = monomial_content(b0);
    Polynomial mono = Polynomial::term(Scalar::one(a0.field()), exponents_min(ma, mb));
    Polynomial a = strip(a0, ma), b = strip(b0, mb);
    if (a.is_constant() || b.is_constant()) return mono;

    // Main variable: shared by both, of least degree. A variable present in
    // only one side just contributes through that side's content.
    auto va = a.variables(), vb = b.variables();
    std::optional<Var> x;
    long best = 0;
    for (const auto &v : va) {
        if (!std::binary_search(vb.begin(), vb.end(), v)) return mono * gcd(content_in(a, v), b);
        long d = std::max(a.degree_in(v), b.degree_in(v));
        if (!x || d < best) {
            x = v;
            best = d;
        }
    }
    for (const auto &v : vb)
        if (!std::binary_search(va.begin(), va.end(), v)) return mono * gcd(a, content_in(b, v));

    Polynomial ca = content_in(a, *x), cb = content_in(b, *x);
    Polynomial c = gcd(ca, cb);
    Polynomial p = ca.is_one() ? a : *a.exact_div(ca);
    Polynomial q = cb.is_one() ? b : *b.exact_div(cb);
    if (p.degree_in(*x) < q.degree_in(*x)) std::swap(p, q);

    // Subresultant remainder sequence: every division below is exact.
    Polynomial g = one_like(a), h = one_like(a);
    for (;;) {
        long delta = p.degree_in(*x) - q.degree_in(*x);
        Polynomial r = pseudo_rem(p, q, *x);
        if (r.is_zero()) break;
        if (r.degree_in(*x) == 0) {
            q = one_like(a);
            break;
        }
        p = std::move(q);
        q = *r.exact_div(g * h.pow(static_cast<unsigned long>(delta)));
        g = leading_in(p, *x);
        if (delta > 0) h = *g.pow(static_cast<unsigned long>(delta)).exact_div(h.pow(static_cast<unsigned long>(delta - 1)));
    }
    return (primitive_in(q, *x) * c * mono).monic();
}

// ---- field descriptors ----

FieldPtr FieldDescriptor::rationals()
{
    static const FieldPtr q = [] {
        auto f = std::make_shared<FieldDescriptor>(Kind::rationals, nullptr, nullptr, std::vector<Var>{});
        return f;
    }();
    return q;
}

FieldPtr FieldDescriptor::prime_field(std::uint32_t q)
{
    auto f = std::make_shared<FieldDescriptor>(Kind::prime_field, FiniteField::get(q), nullptr, std::vector<Var>{});
    return f;
}

FieldPtr FieldDescriptor::function_field(FieldPtr base, std::vector<Var> variables)
{
    if (!base || base->kind() == Kind::function_field)
        throw PreconditionError("function field base must be Q or a finite field");
    std::sort(variables.begin(), variables.end());
    if (std::adjacent_find(variables.begin(), variables.end()) != variables.end())
        throw PreconditionError("function field variables must be distinct");
    auto ff = base->kind() == Kind::prime_field ? FiniteField::get(base->order()) : nullptr;
    return std::make_shared<FieldDescriptor>(Kind::function_field, ff, std::move(base), std::move(variables));
}

bool FieldDescriptor::has_variable(const Var &v) const
{
    return std::binary_search(vars_.begin(), vars_.end(), v);
}

std::string FieldDescriptor::str() const
{
    switch (kind_) {
    case Kind::rationals: return "Q";
    case Kind::prime_field: return "GF(" + std::to_string(order()) + ")";
    case Kind::function_field: break;
    }
    std::string out = base_->str() + "(";
    for (std::size_t i = 0; i < vars_.size(); ++i) out += (i ? "," : "") + vars_[i].str();
    return out + ")";
}

bool operator==(const FieldDescriptor &a, const FieldDescriptor &b)
{
    if (&a == &b) return true;
    if (a.kind_ != b.kind_ || a.order() != b.order()) return false;
    return a.vars_ == b.vars_;
}

bool same_field(const FieldPtr &a, const FieldPtr &b) { return a == b || *a == *b; }

// ---- field elements ----

namespace {

// The base kinds store their value as a constant numerator over 1.
const FieldPtr &base_of(const FieldPtr &f)
{
    return f->kind() == FieldDescriptor::Kind::function_field ? f->base() : f;
}

} // namespace

FieldElement::FieldElement() : FieldElement(FieldDescriptor::rationals(), Polynomial(), Polynomial::constant(Scalar::one(nullptr)))
{
}

FieldElement FieldElement::zero(const FieldPtr &f)
{
    return FieldElement(f, Polynomial(f->finite_field()), Polynomial::constant(Scalar::one(f->finite_field())));
}

FieldElement FieldElement::one(const FieldPtr &f)
{
    return from_scalar(f, Scalar::one(f->finite_field()));
}

FieldElement FieldElement::from_scalar(const FieldPtr &f, const Scalar &s)
{
    if (s.field() != f->finite_field()) throw PreconditionError("scalar does not belong to " + f->str());
    return FieldElement(f, Polynomial::constant(s), Polynomial::constant(Scalar::one(f->finite_field())));
}

FieldElement FieldElement::from_rational(const FieldPtr &f, const Rational &q)
{
    const FiniteField *ff = f->finite_field();
    if (!ff) return from_scalar(f, Scalar(q));
    std::uint32_t den = ff->from_integer(q.get_den());
    if (den == 0) throw PreconditionError(to_string(q) + " has no image in characteristic " + std::to_string(ff->characteristic()));
    return from_scalar(f, Scalar(ff->mul(ff->from_integer(q.get_num()), ff->inv(den)), ff));
}

FieldElement FieldElement::variable(const FieldPtr &f, const Var &v)
{
    if (!f->has_variable(v)) throw PreconditionError("unknown variable " + v.str() + " in " + f->str());
    return FieldElement(f, Polynomial::variable(v, f->finite_field()), Polynomial::constant(Scalar::one(f->finite_field())));
}

FieldElement FieldElement::from_fraction(const FieldPtr &f, Polynomial num, Polynomial den)
{
    if (num.field() != f->finite_field() || den.field() != f->finite_field())
        throw PreconditionError("polynomial coefficients do not belong to " + f->str());
    for (const Polynomial *p : {&num, &den})
        for (const auto &v : p->variables())
            if (!f->has_variable(v)) throw PreconditionError("unknown variable " + v.str() + " in " + f->str());
    return normalized(f, std::move(num), std::move(den));
}

FieldElement FieldElement::normalized(const FieldPtr &f, Polynomial num, Polynomial den)
{
    if (den.is_zero()) throw PreconditionError("division by zero");
    if (num.is_zero()) return zero(f);
    if (!num.is_constant() && !den.is_constant()) {
        Polynomial g = gcd(num, den);
        if (!g.is_one()) {
            num = *num.exact_div(g);
            den = *den.exact_div(g);
        }
    }
    Scalar lc = den.leading().second;
    if (!lc.is_one()) {
        Scalar inv = lc.inverse();
        num = num.scaled(inv);
        den = den.scaled(inv);
    }
    return FieldElement(f, std::move(num), std::move(den));
}

FieldElement FieldElement::reduced(const FieldPtr &f, Polynomial num, Polynomial den)
{
    Scalar lc = den.leading().second;
    if (!lc.is_one()) {
        Scalar inv = lc.inverse();
        num = num.scaled(inv);
        den = den.scaled(inv);
    }
    return FieldElement(f, std::move(num), std::move(den));
}

void FieldElement::check_same(const FieldElement &o) const
{
    if (!same_field(field_, o.field_))
        throw PreconditionError("field mismatch: " + field_->str() + " vs " + o.field_->str());
}

bool FieldElement::is_zero() const { return num_.is_zero(); }

bool FieldElement::is_one() const { return num_.is_one() && den_.is_one(); }

Scalar FieldElement::scalar() const
{
    if (num_.is_zero()) return Scalar::zero(field_->finite_field());
    if (!num_.is_constant() || !den_.is_constant()) throw PreconditionError("element " + str() + " is not a constant");
    return num_.leading().second;
}

FieldElement FieldElement::operator+(const FieldElement &o) const
{
    check_same(o);
    if (field_->kind() != FieldDescriptor::Kind::function_field) {
        Polynomial s = num_ + o.num_;
        return FieldElement(field_, std::move(s), den_);
    }
    // Henrici: only gcds of the denominators and of a short cofactor.
    Polynomial g = gcd(den_, o.den_);
    if (g.is_one()) return reduced(field_, num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    Polynomial b1 = *den_.exact_div(g), d1 = *o.den_.exact_div(g);
    Polynomial t = num_ * d1 + o.num_ * b1;
    if (t.is_zero()) return zero(field_);
    Polynomial g2 = gcd(t, g);
    return reduced(field_, *t.exact_div(g2), b1 * *o.den_.exact_div(g2));
}

FieldElement FieldElement::operator-() const { return FieldElement(field_, -num_, den_); }

FieldElement FieldElement::operator-(const FieldElement &o) const { return *this + (-o); }

FieldElement FieldElement::operator*(const FieldElement &o) const
{
    check_same(o);
    if (field_->kind() != FieldDescriptor::Kind::function_field) return FieldElement(field_, num_ * o.num_, den_);
    if (is_zero() || o.is_zero()) return zero(field_);
    Polynomial g1 = gcd(num_, o.den_), g2 = gcd(o.num_, den_);
    return reduced(field_, *num_.exact_div(g1) * *o.num_.exact_div(g2), *den_.exact_div(g2) * *o.den_.exact_div(g1));
}

FieldElement FieldElement::inverse() const
{
    if (is_zero()) throw PreconditionError("division by zero");
    if (field_->kind() != FieldDescriptor::Kind::function_field)
        return FieldElement(field_, Polynomial::constant(scalar().inverse()), den_);
    return reduced(field_, den_, num_);
}

FieldElement FieldElement::operator/(const FieldElement &o) const
{
    check_same(o);
    return *this * o.inverse();
}

FieldElement FieldElement::pow(long e) const
{
    if (e < 0) return inverse().pow(-e);
    if (field_->kind() != FieldDescriptor::Kind::function_field) {
        if (is_zero()) return e == 0 ? one(field_) : *this;
        return FieldElement(field_, Polynomial::constant(scalar().pow(e)), den_);
    }
    // num and den stay coprime under powers.
    return FieldElement(field_, num_.pow(static_cast<unsigned long>(e)), den_.pow(static_cast<unsigned long>(e)));
}

bool operator==(const FieldElement &a, const FieldElement &b)
{
    return same_field(a.field_, b.field_) && a.num_ == b.num_ && a.den_ == b.den_;
}

std::optional<LaurentMonomial> FieldElement::as_monomial() const
{
    if (is_zero()) return std::nullopt;
    if (field_->kind() != FieldDescriptor::Kind::function_field) return LaurentMonomial(*this, {});
    if (!num_.is_term() || !den_.is_term()) return std::nullopt;
    FieldElement unit = from_scalar(field_->base(), num_.leading().second);
    return LaurentMonomial(unit, exponents_mul(num_.leading().first, exponents_pow(den_.leading().first, -1)));
}

std::string FieldElement::str() const
{
    switch (field_->kind()) {
    case FieldDescriptor::Kind::rationals: return to_string(scalar().rational());
    case FieldDescriptor::Kind::prime_field: return scalar().str();
    case FieldDescriptor::Kind::function_field: break;
    }
    if (den_.is_one()) return num_.str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
}

std::ostream &operator<<(std::ostream &os, const FieldElement &x) { return os << x.str(); }

// ---- Laurent monomials ----

LaurentMonomial::LaurentMonomial(FieldElement unit, Exponents exps) : unit_(std::move(unit)), exps_(std::move(exps))
{
    if (unit_.is_zero()) throw PreconditionError("monomial unit must be nonzero");
    if (unit_.field()->kind() == FieldDescriptor::Kind::function_field)
        throw PreconditionError("monomial unit must lie in Q or a finite field");
    exps_ = canonical_exponents(std::move(exps_));
}

LaurentMonomial LaurentMonomial::operator*(const LaurentMonomial &o) const
{
    return LaurentMonomial(unit_ * o.unit_, exponents_mul(exps_, o.exps_));
}

LaurentMonomial LaurentMonomial::inverse() const { return LaurentMonomial(unit_.inverse(), exponents_pow(exps_, -1)); }

LaurentMonomial LaurentMonomial::pow(long e) const { return LaurentMonomial(unit_.pow(e), exponents_pow(exps_, e)); }

std::string LaurentMonomial::str() const
{
    if (exps_.empty()) return unit_.str();
    if (unit_.is_one()) return exponents_str(exps_);
    return unit_.str() + " * " + exponents_str(exps_);
}

// ---- roots, logs, embedding ----

namespace {

RootResult base_root(const FieldElement &a, long n)
{
    RootResult out;
    const FiniteField *ff = a.field()->finite_field();
    if (!ff) {
        const Rational q = a.scalar().rational();
        if (sgn(q) < 0 && n % 2 == 0) return out;
        Integer num = abs(q.get_num()), rn, rd;
        bool exact_num = mpz_root(rn.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(n)) != 0;
        bool exact_den = mpz_root(rd.get_mpz_t(), q.get_den_mpz_t(), static_cast<unsigned long>(n)) != 0;
        if (!exact_num || !exact_den) return out;
        Rational r(sgn(q) < 0 ? Integer(-rn) : rn, rd);
        r.canonicalize();
        out.status = RootResult::Status::root;
        out.value = FieldElement::from_rational(a.field(), r);
        return out;
    }
    std::uint32_t target = a.scalar().residue();
    for (std::uint32_t x = 1; x < ff->order(); ++x)
        if (ff->pow(x, n) == target) {
            out.status = RootResult::Status::root;
            out.value = FieldElement::from_scalar(a.field(), Scalar(x, ff));
            return out;
        }
    return out;
}

} // namespace

RootResult nth_root(const FieldElement &a, long n)
{
    if (n < 1) throw PreconditionError("root index must be positive");
    if (a.is_zero()) throw PreconditionError("root of zero requested");
    if (a.field()->kind() != FieldDescriptor::Kind::function_field) return base_root(a, n);
    auto m = a.as_monomial();
    RootResult out;
    if (!m) {
        out.status = RootResult::Status::unsupported;
        return out;
    }
    if (auto r = monomial_nth_root(*m, n)) {
        out.status = RootResult::Status::root;
        out.value = embed_monomial(*r, a.field());
    }
    return out;
}

std::optional<LaurentMonomial> monomial_nth_root(const LaurentMonomial &m, long n)
{
    if (n < 1) throw PreconditionError("root index must be positive");
    Exponents exps;
    for (const auto &[v, e] : m.exponents()) {
        if (e % n != 0) return std::nullopt;
        exps.emplace_back(v, e / n);
    }
    RootResult u = base_root(m.unit(), n);
    if (!u.found()) return std::nullopt;
    return LaurentMonomial(*u.value, std::move(exps));
}

std::shared_ptr<const FiniteField> dlog_table(std::uint32_t q) { return FiniteField::get(q); }

FieldElement embed_monomial(const LaurentMonomial &m, const FieldPtr &target)
{
    if (!same_field(m.unit().field(), base_of(target)))
        throw PreconditionError("monomial unit over " + m.unit().field()->str() + " does not embed in " + target->str());
    if (target->kind() != FieldDescriptor::Kind::function_field) {
        if (!m.exponents().empty()) throw PreconditionError("monomial has variables but " + target->str() + " has none");
        return m.unit();
    }
    Exponents pos, neg;
    for (const auto &[v, e] : m.exponents()) {
        if (!target->has_variable(v)) throw PreconditionError("unknown variable " + v.str() + " in " + target->str());
        if (e > 0)
            pos.emplace_back(v, e);
        else
            neg.emplace_back(v, -e);
    }
    const FiniteField *ff = target->finite_field();
    return FieldElement::from_fraction(target, Polynomial::term(m.unit().scalar(), pos), Polynomial::term(Scalar::one(ff), neg));
}

namespace {

FieldElement map_scalar(const Scalar &s, const FieldPtr &target)
{
    if (!s.field()) return FieldElement::from_rational(target, s.rational());
    if (s.field() != target->finite_field()) throw PreconditionError("no map from GF(" + std::to_string(s.field()->order()) + ") to " + target->str());
    return FieldElement::from_scalar(target, s);
}

FieldElement map_polynomial(const Polynomial &p, const FieldPtr &target,
                            const std::function<FieldElement(const Var &)> &value)
{
    FieldElement out = FieldElement::zero(target);
    for (const auto &[e, c] : p.terms()) {
        FieldElement t = map_scalar(c, target);
        for (const auto &[v, k] : e) t *= value(v).pow(k);
        out = out + t;
    }
    return out;
}

} // namespace

FieldElement substitute(const FieldElement &x, const FieldPtr &target,
                        const std::function<FieldElement(const Var &)> &value)
{
    FieldElement den = map_polynomial(x.denominator(), target, value);
    if (den.is_zero()) throw PreconditionError("substitution sends the denominator of " + x.str() + " to zero");
    return map_polynomial(x.numerator(), target, value) / den;
}

} // namespace qgrade
