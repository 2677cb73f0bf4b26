#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qgrade/coeff.hpp"
#include "test_util.hpp"

using namespace qgrade;
using qgrade::test::Q;

namespace {

const Var A1{'a', 1, 1};
const Var A2{'a', 1, 2};
const Var A3{'a', 2, 1};

FieldPtr qa() { return FieldDescriptor::function_field(FieldDescriptor::rationals(), {A1, A2, A3}); }

Polynomial random_poly(Rng &rng, const FiniteField *ff, int max_terms)
{
    Polynomial p(ff);
    const std::vector<Var> vars{A1, A2, A3};
    int terms = static_cast<int>(rng.uniform(1, max_terms));
    for (int t = 0; t < terms; ++t) {
        Exponents e;
        for (const auto &v : vars) {
            long k = rng.uniform(0, 2);
            if (k) e.emplace_back(v, k);
        }
        Scalar c = ff ? Scalar(static_cast<std::uint32_t>(rng.uniform(0, ff->order() - 1)), ff)
                      : Scalar(Rational(rng.uniform(-4, 4)));
        p = p + Polynomial::term(c, e);
    }
    return p;
}

FieldElement random_element(Rng &rng, const FieldPtr &f)
{
    switch (f->kind()) {
    case FieldDescriptor::Kind::rationals: return FieldElement::from_rational(f, test::random_rational(rng, 30, 12));
    case FieldDescriptor::Kind::prime_field:
        return FieldElement::from_scalar(f, Scalar(static_cast<std::uint32_t>(rng.uniform(0, f->order() - 1)), f->finite_field()));
    case FieldDescriptor::Kind::function_field: break;
    }
    Polynomial den = random_poly(rng, f->finite_field(), 2);
    while (den.is_zero()) den = random_poly(rng, f->finite_field(), 2);
    return FieldElement::from_fraction(f, random_poly(rng, f->finite_field(), 3), den);
}

void check_axioms(const FieldPtr &f, int samples, std::uint64_t seed)
{
    Rng rng(seed);
    FieldElement zero = FieldElement::zero(f), one = FieldElement::one(f);
    int failures = 0;
    for (int s = 0; s < samples; ++s) {
        FieldElement a = random_element(rng, f), b = random_element(rng, f), c = random_element(rng, f);
        bool ok = (a + b) + c == a + (b + c) && (a * b) * c == a * (b * c) && a * (b + c) == a * b + a * c &&
                  a + b == b + a && a * b == b * a && a + zero == a && a * one == a && a - a == zero;
        if (!a.is_zero()) ok = ok && a * a.inverse() == one && (b / a) * a == b;
        if (!ok) {
            ++failures;
            if (failures < 3) MESSAGE("axiom failure at a=", a.str(), " b=", b.str(), " c=", c.str());
        }
    }
    CHECK(failures == 0);
}

} // namespace

TEST_CASE("variables parse and print")
{
    CHECK(Var::parse("a[1,2]") == A2);
    CHECK(Var::parse("t[3,10]").str() == "t[3,10]");
    CHECK_THROWS_AS(Var::parse("a[1]"), PreconditionError);
    CHECK_THROWS_AS(Var::parse("a[x,1]"), PreconditionError);
    // Variables are ordered by level first.
    CHECK(Var{'a', 2, 1} < Var{'a', 1, 2});
}

TEST_CASE("arithmetic worked examples")
{
    auto q = FieldDescriptor::rationals();
    CHECK(FieldElement::from_rational(q, Q("1/2")) + FieldElement::from_rational(q, Q("1/3")) ==
          FieldElement::from_rational(q, Q("5/6")));

    auto f5 = FieldDescriptor::prime_field(5);
    CHECK((FieldElement::from_integer(f5, 2) * FieldElement::from_integer(f5, 3)).is_one());

    auto f = qa();
    FieldElement a = FieldElement::variable(f, A1), one = FieldElement::one(f);
    FieldElement r = (a * a - one) / (a - one);
    CHECK(r == a + one);
    CHECK(r.denominator().is_one());
    CHECK(r.str() == "a[1,1] + 1");

    CHECK_THROWS_AS(one / FieldElement::zero(f), PreconditionError);
    CHECK_THROWS_AS(one + FieldElement::one(q), PreconditionError);
    CHECK_THROWS_AS(FieldElement::from_rational(f5, Q("1/5")), PreconditionError);
}

TEST_CASE("field axioms hold on random samples for every kind")
{
    check_axioms(FieldDescriptor::rationals(), 10000, 1);
    check_axioms(FieldDescriptor::prime_field(5), 10000, 2);
    check_axioms(FieldDescriptor::prime_field(13), 10000, 3);
    check_axioms(FieldDescriptor::prime_field(8), 10000, 4);
    check_axioms(FieldDescriptor::prime_field(49), 10000, 5);
    check_axioms(qa(), 10000, 6);
    check_axioms(FieldDescriptor::function_field(FieldDescriptor::prime_field(5), {A1, A2, A3}), 10000, 7);
}

TEST_CASE("canonical forms are unique")
{
    Rng rng(21);
    auto f = qa();
    for (int s = 0; s < 2000; ++s) {
        FieldElement a = random_element(rng, f), b = random_element(rng, f);
        CHECK(((a - b).is_zero()) == (a == b));
        // A detour through a common factor lands on the same payload.
        Polynomial k = random_poly(rng, nullptr, 2);
        if (k.is_zero()) continue;
        FieldElement kk = FieldElement::from_fraction(f, k, Polynomial::constant(Scalar(Rational(1))));
        FieldElement detour = FieldElement::from_fraction(f, a.numerator() * k, a.denominator() * k);
        CHECK(detour == a);
        CHECK((a * kk) / kk == a);
        if (!a.is_zero()) CHECK(a.denominator().leading().second.is_one());
    }
}

TEST_CASE("polynomial gcd divides both inputs and captures common factors")
{
    Rng rng(5);
    for (const FiniteField *ff : {static_cast<const FiniteField *>(nullptr), FiniteField::get(7).get()}) {
        for (int s = 0; s < 300; ++s) {
            Polynomial a = random_poly(rng, ff, 3), b = random_poly(rng, ff, 3), c = random_poly(rng, ff, 2);
            if (a.is_zero() || b.is_zero() || c.is_zero()) continue;
            Polynomial g = gcd(a * c, b * c);
            CHECK((a * c).exact_div(g).has_value());
            CHECK((b * c).exact_div(g).has_value());
            CHECK(g.exact_div(c.monic()).has_value());
        }
    }
}

TEST_CASE("nth_root examples and soundness")
{
    auto q = FieldDescriptor::rationals();
    auto r4 = nth_root(FieldElement::from_integer(q, 4), 2);
    REQUIRE(r4.found());
    CHECK(*r4.value == FieldElement::from_integer(q, 2));
    CHECK(nth_root(FieldElement::from_integer(q, 2), 2).status == RootResult::Status::none);
    CHECK(nth_root(FieldElement::from_rational(q, Q("-8/27")), 3).value == FieldElement::from_rational(q, Q("-2/3")));
    CHECK(nth_root(FieldElement::from_integer(q, -4), 2).status == RootResult::Status::none);

    auto f = qa();
    FieldElement a1 = FieldElement::variable(f, A1), a2 = FieldElement::variable(f, A2);
    auto m = nth_root(a1.pow(2) * a2.pow(-4), 2);
    REQUIRE(m.found());
    CHECK(*m.value == a1 * a2.pow(-2));
    CHECK(nth_root(a1 + FieldElement::one(f), 2).status == RootResult::Status::unsupported);
    CHECK(nth_root(a1, 2).status == RootResult::Status::none);

    auto f7 = FieldDescriptor::prime_field(7);
    // Squares in GF(7) are 1, 2, 4.
    CHECK(nth_root(FieldElement::from_integer(f7, 2), 2).found());
    CHECK_FALSE(nth_root(FieldElement::from_integer(f7, 3), 2).found());
    // gcd(3, 6) = 3, so cubes are {1, 6}.
    CHECK(nth_root(FieldElement::from_integer(f7, 6), 3).found());
    CHECK_FALSE(nth_root(FieldElement::from_integer(f7, 2), 3).found());

    Rng rng(8);
    for (auto field : {q, f7, FieldDescriptor::prime_field(9), f}) {
        for (int s = 0; s < 300; ++s) {
            FieldElement x = random_element(rng, field);
            if (x.is_zero()) continue;
            long n = rng.uniform(1, 4);
            auto r = nth_root(x, n);
            if (r.found()) CHECK(r.value->pow(n) == x);
            // Every n-th power has a root.
            auto r2 = nth_root(x.pow(n), n);
            if (r2.status != RootResult::Status::unsupported) CHECK(r2.found());
        }
    }
}

TEST_CASE("monomial_nth_root examples and completeness")
{
    auto q = FieldDescriptor::rationals();
    LaurentMonomial cube(FieldElement::one(q), {{A1, 3}});
    CHECK(monomial_nth_root(cube, 3) == LaurentMonomial(FieldElement::one(q), {{A1, 1}}));
    CHECK_FALSE(monomial_nth_root(LaurentMonomial(FieldElement::one(q), {{A1, 1}}), 2).has_value());
    LaurentMonomial four(FieldElement::from_integer(q, 4), {{A1, 2}});
    CHECK(monomial_nth_root(four, 2) == LaurentMonomial(FieldElement::from_integer(q, 2), {{A1, 1}}));
    CHECK(LaurentMonomial(FieldElement::one(q), {{A2, -1}, {A1, 2}}).str() == "a[1,1]^2 * a[1,2]^-1");

    // Brute-force oracle over small exponents and units.
    Rng rng(13);
    const std::vector<long> square_units{1, 4, 9, 16};
    for (int s = 0; s < 2000; ++s) {
        long n = rng.uniform(1, 4);
        long u = rng.uniform(1, 16);
        Exponents e{{A1, rng.uniform(-6, 6)}, {A2, rng.uniform(-6, 6)}};
        LaurentMonomial m(FieldElement::from_integer(q, u), e);
        bool divisible = e[0].second % n == 0 && e[1].second % n == 0;
        bool unit_root = false;
        for (long r = 1; r <= 16; ++r) {
            long p = 1;
            for (long k = 0; k < n; ++k) p *= r;
            unit_root = unit_root || p == u;
        }
        auto root = monomial_nth_root(m, n);
        CHECK(root.has_value() == (divisible && unit_root));
        if (root) CHECK(root->pow(n) == m);
    }
}

TEST_CASE("dlog tables")
{
    auto t5 = dlog_table(5);
    CHECK(t5->generator() == 2);
    CHECK(t5->log(4) == 2);
    CHECK(t5->log(1) == 0);
    auto t7 = dlog_table(7);
    CHECK(t7->generator() == 3);
    CHECK(t7->log(6) == 3);
    CHECK_THROWS_AS(dlog_table(12), PreconditionError);
    CHECK_THROWS_AS(dlog_table(1), PreconditionError);

    for (std::uint32_t q : {2u, 3u, 4u, 8u, 9u, 25u, 49u, 64u, 243u, 1024u, 65521u}) {
        auto t = dlog_table(q);
        bool round_trip = true;
        for (std::uint32_t x = 1; x < q; ++x) round_trip = round_trip && t->exp(t->log(x)) == x;
        CHECK(round_trip);
        // log is a homomorphism.
        Rng rng(q);
        for (int s = 0; s < 200; ++s) {
            auto a = static_cast<std::uint32_t>(rng.uniform(1, q - 1)), b = static_cast<std::uint32_t>(rng.uniform(1, q - 1));
            CHECK(t->log(t->mul(a, b)) == (t->log(a) + t->log(b)) % (q - 1));
        }
    }
}

TEST_CASE("embed_monomial")
{
    auto f = qa();
    auto q = FieldDescriptor::rationals();
    CHECK(embed_monomial(LaurentMonomial::one(q), f).is_one());
    FieldElement a1 = FieldElement::variable(f, A1), a2 = FieldElement::variable(f, A2);
    CHECK(embed_monomial(LaurentMonomial(FieldElement::one(q), {{A1, 1}, {A2, -1}}), f) == a1 / a2);
    CHECK(embed_monomial(LaurentMonomial(FieldElement::from_integer(q, 3), {{A1, -2}}), f) ==
          FieldElement::from_integer(f, 3) / (a1 * a1));
    CHECK_THROWS_AS(embed_monomial(LaurentMonomial(FieldElement::one(q), {{Var{'a', 9, 9}, 1}}), f), PreconditionError);

    Rng rng(3);
    for (int s = 0; s < 200; ++s) {
        LaurentMonomial m1(FieldElement::from_integer(q, rng.uniform(1, 5)), {{A1, rng.uniform(-3, 3)}, {A3, rng.uniform(-3, 3)}});
        LaurentMonomial m2(FieldElement::from_integer(q, rng.uniform(-5, -1)), {{A1, rng.uniform(-3, 3)}, {A2, rng.uniform(-3, 3)}});
        CHECK(embed_monomial(m1 * m2, f) == embed_monomial(m1, f) * embed_monomial(m2, f));
        CHECK(embed_monomial(m1, f).as_monomial() == m1);
    }
}
