#pragma once

// Coefficient fields: Q, GF(q), and rational-function fields over either.

#include <compare>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qgrade/finite_field.hpp"
#include "qgrade/rational.hpp"

namespace qgrade {

/// Symbol such as a[j,i] (the alpha variables) or t[j,i]. Variables are
/// ordered by (family, i, j), which fixes the graded-lex order.
struct Var {
    char family = 'a';
    int j = 1;
    int i = 1;

    std::string str() const;
    static Var parse(std::string_view text);

    friend auto operator<=>(const Var &a, const Var &b)
    {
        if (auto c = a.family <=> b.family; c != 0) return c;
        if (auto c = a.i <=> b.i; c != 0) return c;
        return a.j <=> b.j;
    }
    friend bool operator==(const Var &, const Var &) = default;
};

/// Sparse exponent vector, sorted by variable, zero exponents omitted.
/// Negative exponents are allowed for Laurent monomials only.
using Exponents = std::vector<std::pair<Var, long>>;

/// Sorts, merges repeated variables and drops zero exponents.
Exponents canonical_exponents(Exponents e);
Exponents exponents_mul(const Exponents &a, const Exponents &b);
Exponents exponents_pow(const Exponents &a, long n);
long exponents_degree(const Exponents &a);
long exponent_of(const Exponents &a, const Var &v);
std::string exponents_str(const Exponents &a);

/// Graded lex: total degree first, then the earliest variable with a
/// larger exponent wins.
struct GrlexLess {
    bool operator()(const Exponents &a, const Exponents &b) const;
};

/// Element of Q (field() == nullptr) or of GF(q).
class Scalar {
public:
    Scalar() : v_(Rational(0)) {}
    explicit Scalar(const Rational &q) : v_(q) {}
    Scalar(std::uint32_t residue, const FiniteField *f) : v_(residue), ff_(f) {}

    static Scalar zero(const FiniteField *f) { return f ? Scalar(0u, f) : Scalar(); }
    static Scalar one(const FiniteField *f) { return f ? Scalar(1u, f) : Scalar(Rational(1)); }

    const FiniteField *field() const { return ff_; }
    const Rational &rational() const { return std::get<Rational>(v_); }
    std::uint32_t residue() const { return std::get<std::uint32_t>(v_); }

    bool is_zero() const;
    bool is_one() const;

    Scalar operator+(const Scalar &o) const;
    Scalar operator-(const Scalar &o) const;
    Scalar operator*(const Scalar &o) const;
    Scalar operator/(const Scalar &o) const;
    Scalar operator-() const;
    Scalar inverse() const;
    Scalar pow(long e) const;

    friend bool operator==(const Scalar &a, const Scalar &b) { return a.v_ == b.v_; }

    std::string str() const;

private:
    std::variant<Rational, std::uint32_t> v_;
    const FiniteField *ff_ = nullptr;
};

/// Sparse polynomial with Scalar coefficients, terms kept in graded-lex order.
class Polynomial {
public:
    using Terms = std::map<Exponents, Scalar, GrlexLess>;

    explicit Polynomial(const FiniteField *f = nullptr) : ff_(f) {}
    static Polynomial constant(const Scalar &s);
    static Polynomial term(const Scalar &s, Exponents e);
    static Polynomial variable(const Var &v, const FiniteField *f);

    const FiniteField *field() const { return ff_; }
    const Terms &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    bool is_one() const;
    bool is_term() const { return terms_.size() == 1; }
    /// Leading term under graded lex; polynomial must be nonzero.
    const std::pair<const Exponents, Scalar> &leading() const { return *terms_.rbegin(); }

    long degree_in(const Var &v) const;
    /// Coefficients with respect to v, keyed by the power of v.
    std::map<long, Polynomial> coefficients_in(const Var &v) const;
    std::vector<Var> variables() const;

    Polynomial operator+(const Polynomial &o) const;
    Polynomial operator-(const Polynomial &o) const;
    Polynomial operator*(const Polynomial &o) const;
    Polynomial operator-() const;
    Polynomial scaled(const Scalar &s) const;
    Polynomial shifted(const Exponents &e) const;
    Polynomial pow(unsigned long e) const;
    /// Quotient if o divides this exactly.
    std::optional<Polynomial> exact_div(const Polynomial &o) const;
    /// Divided by its leading coefficient.
    Polynomial monic() const;

    friend bool operator==(const Polynomial &a, const Polynomial &b) { return a.terms_ == b.terms_; }

    std::string str() const;

private:
    void add_term(const Exponents &e, const Scalar &s);

    const FiniteField *ff_ = nullptr;
    Terms terms_;
};

/// Monic greatest common divisor (zero only if both inputs are zero).
Polynomial gcd(const Polynomial &a, const Polynomial &b);

class FieldDescriptor;
using FieldPtr = std::shared_ptr<const FieldDescriptor>;

class FieldDescriptor {
public:
    enum class Kind { rationals, prime_field, function_field };

    static FieldPtr rationals();
    /// GF(q) for a prime power q <= 2^16.
    static FieldPtr prime_field(std::uint32_t q);
    /// base(variables); base must be Q or GF(q), variables distinct.
    static FieldPtr function_field(FieldPtr base, std::vector<Var> variables);

    Kind kind() const { return kind_; }
    std::uint32_t order() const { return ff_ ? ff_->order() : 0; }
    std::uint32_t characteristic() const { return ff_ ? ff_->characteristic() : 0; }
    /// Coefficient field of the scalars (nullptr means Q).
    const FiniteField *finite_field() const { return ff_.get(); }
    /// The field itself for Q and GF(q); the constants for function fields.
    const FieldPtr &base() const { return base_; }
    const std::vector<Var> &variables() const { return vars_; }
    bool has_variable(const Var &v) const;

    std::string str() const;

    friend bool operator==(const FieldDescriptor &a, const FieldDescriptor &b);

    FieldDescriptor(Kind kind, std::shared_ptr<const FiniteField> ff, FieldPtr base, std::vector<Var> vars)
        : kind_(kind), ff_(std::move(ff)), base_(std::move(base)), vars_(std::move(vars))
    {
    }

private:
    Kind kind_;
    std::shared_ptr<const FiniteField> ff_;
    FieldPtr base_;
    std::vector<Var> vars_;
};

bool same_field(const FieldPtr &a, const FieldPtr &b);

class LaurentMonomial;

/// Canonical element of a FieldDescriptor. Function-field elements are
/// num/den with gcd 1 and the denominator's leading coefficient 1.
class FieldElement {
public:
    /// Rational zero.
    FieldElement();

    static FieldElement zero(const FieldPtr &f);
    static FieldElement one(const FieldPtr &f);
    static FieldElement from_rational(const FieldPtr &f, const Rational &q);
    static FieldElement from_integer(const FieldPtr &f, long n) { return from_rational(f, Rational(n)); }
    static FieldElement from_scalar(const FieldPtr &f, const Scalar &s);
    static FieldElement variable(const FieldPtr &f, const Var &v);
    static FieldElement from_fraction(const FieldPtr &f, Polynomial num, Polynomial den);

    const FieldPtr &field() const { return field_; }
    bool is_zero() const;
    bool is_one() const;

    /// Value in Q or GF(q); for function fields only when constant.
    Scalar scalar() const;
    const Polynomial &numerator() const { return num_; }
    const Polynomial &denominator() const { return den_; }

    FieldElement operator+(const FieldElement &o) const;
    FieldElement operator-(const FieldElement &o) const;
    FieldElement operator*(const FieldElement &o) const;
    FieldElement operator/(const FieldElement &o) const;
    FieldElement operator-() const;
    FieldElement &operator*=(const FieldElement &o) { return *this = *this * o; }
    FieldElement inverse() const;
    FieldElement pow(long e) const;

    /// Some when the element is unit * monomial (function fields), or a
    /// nonzero constant.
    std::optional<LaurentMonomial> as_monomial() const;

    friend bool operator==(const FieldElement &a, const FieldElement &b);
    friend bool operator!=(const FieldElement &a, const FieldElement &b) { return !(a == b); }

    std::string str() const;

private:
    FieldElement(FieldPtr f, Polynomial num, Polynomial den)
        : field_(std::move(f)), num_(std::move(num)), den_(std::move(den))
    {
    }
    void check_same(const FieldElement &o) const;
    static FieldElement normalized(const FieldPtr &f, Polynomial num, Polynomial den);
    // Like normalized() for a num/den pair already known to be coprime.
    static FieldElement reduced(const FieldPtr &f, Polynomial num, Polynomial den);

    // For Q and GF(q) the value is the constant term of num_ and den_ is 1.
    FieldPtr field_;
    Polynomial num_;
    Polynomial den_;
};

std::ostream &operator<<(std::ostream &os, const FieldElement &x);

/// unit * prod v^e with the unit a nonzero element of the base field.
class LaurentMonomial {
public:
    LaurentMonomial(FieldElement unit, Exponents exps);
    static LaurentMonomial one(const FieldPtr &base) { return {FieldElement::one(base), {}}; }

    const FieldElement &unit() const { return unit_; }
    const Exponents &exponents() const { return exps_; }
    long exponent(const Var &v) const { return exponent_of(exps_, v); }

    LaurentMonomial operator*(const LaurentMonomial &o) const;
    LaurentMonomial inverse() const;
    LaurentMonomial pow(long e) const;

    friend bool operator==(const LaurentMonomial &a, const LaurentMonomial &b)
    {
        return a.unit_ == b.unit_ && a.exps_ == b.exps_;
    }

    /// "a[1,2]^-1 * t[1,2]^4", with a leading unit when it is not 1.
    std::string str() const;

private:
    FieldElement unit_;
    Exponents exps_;
};

struct RootResult {
    enum class Status { root, none, unsupported };
    Status status = Status::none;
    std::optional<FieldElement> value;

    bool found() const { return status == Status::root; }
};

/// An n-th root of a != 0 when one exists. Over Q the search is exact, over
/// GF(q) exhaustive; in function fields only Laurent monomials are handled
/// and anything else is Status::unsupported.
RootResult nth_root(const FieldElement &a, long n);

/// Some iff every exponent is divisible by n and the unit has an n-th root.
std::optional<LaurentMonomial> monomial_nth_root(const LaurentMonomial &m, long n);

/// Shared log/exp tables of GF(q) relative to its smallest primitive element.
std::shared_ptr<const FiniteField> dlog_table(std::uint32_t q);

/// m as an element of the function field `target`; every variable of m
/// must belong to target and the unit to its base.
FieldElement embed_monomial(const LaurentMonomial &m, const FieldPtr &target);

/// Image of x under the homomorphism that sends each variable v to
/// value(v) in `target` and maps base scalars (Q or the same GF(q)) to
/// `target`. Throws PreconditionError if a denominator maps to zero.
FieldElement substitute(const FieldElement &x, const FieldPtr &target,
                        const std::function<FieldElement(const Var &)> &value);

} // namespace qgrade
