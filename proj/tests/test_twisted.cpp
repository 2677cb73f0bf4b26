#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qgrade/rkd.hpp"
#include "qgrade/twisted.hpp"
#include "test_util.hpp"

using namespace qgrade;
using qgrade::test::V;

namespace {

const Var A1{'a', 1, 1};

FieldPtr qq() { return FieldDescriptor::rationals(); }
FieldPtr qa() { return FieldDescriptor::function_field(qq(), {A1}); }
FieldElement lam() { return FieldElement::variable(qa(), A1); }
FieldElement num(const FieldPtr &f, long n) { return FieldElement::from_integer(f, n); }

ContextPtr trivial_z(const FieldPtr &f = qq())
{
    return AlgebraContext::make(trivial_cocycle(Domain::lattice(SubgroupBasis::standard(1)), f));
}
ContextPtr bilinear_z() { return AlgebraContext::make(bilinear_cocycle(IntegerMatrix(1, 1, {1}), lam(), {V({"1"})})); }

TwistedElement x(const ContextPtr &ctx, const char *g) { return TwistedElement::monomial(ctx, V({g})); }

TwistedElement random_element(Rng &rng, const ContextPtr &ctx, const std::vector<RationalVector> &degrees)
{
    TwistedElement out(ctx);
    int terms = static_cast<int>(rng.uniform(1, 3));
    for (int t = 0; t < terms; ++t) {
        FieldElement c = num(ctx->field(), rng.uniform(-4, 4));
        if (c.is_zero()) c = FieldElement::one(ctx->field());
        out = out + TwistedElement::monomial(ctx, rng.pick(degrees), c);
    }
    return out;
}

struct Named {
    const char *name;
    ContextPtr ctx;
    std::vector<RationalVector> degrees;
};

std::vector<Named> contexts()
{
    std::vector<Named> out;
    out.push_back({"trivial", trivial_z(), lattice_box({V({"1"})}, 4, 1)});
    out.push_back({"bilinear", bilinear_z(), lattice_box({V({"1"})}, 4, 1)});
    std::vector<RationalVector> basis{V({"1", "0"}), V({"1/2", "1/3"})};
    out.push_back({"bilinear-2d",
                   AlgebraContext::make(bilinear_cocycle(IntegerMatrix(2, 2, {1, -1, -1, 2}), num(FieldDescriptor::prime_field(7), 3), basis)),
                   lattice_box(basis, 2, 2)});
    Rkd r(1, PrimeSchedule::diagonal(), qq(), 3);
    Cocycle rc = restrict_to_subgroup(r.limit_cocycle(), subgroup_basis(1, {V({"1/12"})}));
    out.push_back({"rkd-restricted", AlgebraContext::make(rc), r.window(12, 3)});
    return out;
}

} // namespace

TEST_CASE("multiplication examples")
{
    ContextPtr t = trivial_z();
    CHECK((x(t, "1") + x(t, "2")) * x(t, "3") == x(t, "4") + x(t, "5"));

    ContextPtr b = bilinear_z();
    CHECK(x(b, "1") * x(b, "1") == TwistedElement::monomial(b, V({"2"}), lam()));
    TwistedElement a = x(b, "1") + TwistedElement::monomial(b, V({"-3"}), num(qa(), 5));
    CHECK(a * TwistedElement::one(b) == a);
    CHECK(TwistedElement::one(b) * a == a);
    CHECK_THROWS_AS(x(b, "1/2"), PreconditionError);
    CHECK_THROWS_AS(x(t, "1") * x(b, "1"), PreconditionError);
    CHECK((x(t, "1") - x(t, "1")).is_zero());
    CHECK(x(b, "2").str() == "1 x(2)");
}

TEST_CASE("homogeneous inversion")
{
    ContextPtr t = trivial_z();
    CHECK(invert_homogeneous(TwistedElement::one(t)) == TwistedElement::one(t));
    CHECK(invert_homogeneous(TwistedElement::monomial(t, V({"3"}), num(qq(), 2))) ==
          TwistedElement::monomial(t, V({"-3"}), FieldElement::from_rational(qq(), make_rational(1, 2))));
    ContextPtr b = bilinear_z();
    CHECK(invert_homogeneous(x(b, "1")) == TwistedElement::monomial(b, V({"-1"}), lam()));
    CHECK_THROWS_AS(invert_homogeneous(x(b, "1") + x(b, "2")), PreconditionError);
    CHECK_THROWS_AS(invert_homogeneous(TwistedElement(b)), PreconditionError);

    Rng rng(4);
    for (const auto &n : contexts())
        for (int i = 0; i < 25; ++i) {
            FieldElement c = num(n.ctx->field(), rng.uniform(1, 6));
            TwistedElement a = TwistedElement::monomial(n.ctx, rng.pick(n.degrees), c);
            CHECK(a * invert_homogeneous(a) == TwistedElement::one(n.ctx));
        }
}

TEST_CASE("ring axioms on random elements")
{
    Rng rng(9);
    for (const auto &n : contexts()) {
        INFO(n.name);
        int failures = 0;
        for (int t = 0; t < 1000; ++t) {
            TwistedElement a = random_element(rng, n.ctx, n.degrees), b = random_element(rng, n.ctx, n.degrees),
                           c = random_element(rng, n.ctx, n.degrees);
            TwistedElement ab = a * b;
            bool ok = ab == b * a && ab * c == a * (b * c) && a * (b + c) == ab + a * c;
            // supp(ab) within supp(a) + supp(b).
            for (const auto &[g, v] : ab.terms()) {
                bool found = false;
                for (const auto &[u, p] : a.terms())
                    for (const auto &[w, q] : b.terms()) found = found || u + w == g;
                ok = ok && found;
            }
            if (!ok) ++failures;
        }
        CHECK(failures == 0);
    }
}

TEST_CASE("associativity agrees with the cocycle check")
{
    auto w = lattice_box({V({"1"})}, 3, 1);
    ContextPtr t = trivial_z();
    CHECK(is_associative_window(t, w, 1000).pass());
    Rkd r(1, PrimeSchedule::diagonal(), qq(), 3);
    ContextPtr rk = AlgebraContext::make(r.limit_cocycle());
    CHECK(is_associative_window(rk, r.window(6, 3), 3000).pass());

    Domain z = Domain::lattice(SubgroupBasis::standard(1));
    Cocycle bad = custom_cocycle(z, qq(), "bad", [](const RationalVector &g, const RationalVector &h) {
        return g[0] == 1 && h[0] == 1 ? num(qq(), 3) : num(qq(), 1);
    });
    CheckReport assoc = is_associative_window(AlgebraContext::make(bad), w, 1000);
    CheckReport coc = check_cocycle(bad, w, 1000);
    CHECK_FALSE(assoc.pass());
    CHECK_FALSE(coc.pass());
    std::vector<std::vector<RationalVector>> triples;
    for (const auto &f : coc.failures)
        if (f.points.size() == 3) triples.push_back(f.points);
    REQUIRE(!triples.empty());
    CHECK(assoc.failures.front().points == triples.front());
    CHECK(assoc.failure_count == coc.failure_count);
}

TEST_CASE("segre and veronese of elements")
{
    ContextPtr b = bilinear_z();
    ContextPtr t = trivial_z(qa());
    TwistedElement s = segre_element(x(b, "1"), x(t, "1"));
    CHECK(s.coefficient(V({"1"})).is_one());
    CHECK(segre_element(x(b, "1"), x(t, "2")).is_zero());
    CHECK(segre_element(x(b, "1") + x(b, "2"), x(t, "1")).terms().size() == 1);
    CHECK(s.context()->cocycle()(V({"1"}), V({"1"})) == lam());

    TwistedElement a = x(b, "1") + x(b, "3");
    CHECK(veronese_element(a, 1).terms() == a.terms());
    ContextPtr tq = trivial_z();
    CHECK(veronese_element(x(tq, "2"), 2).coefficient(V({"1"})).is_one());
    TwistedElement v = veronese_element(x(b, "4"), 2);
    CHECK(v.coefficient(V({"2"})) == lam().pow(-4));
    CHECK_THROWS_AS(veronese_element(x(b, "3"), 2), PreconditionError);

    // Veronese of elements is multiplicative into k[G, c^r].
    Rng rng(1);
    ContextPtr target = AlgebraContext::make(veronese(b->cocycle(), 3));
    auto degs = lattice_box({V({"3"})}, 3, 1);
    for (int i = 0; i < 50; ++i) {
        TwistedElement p = random_element(rng, b, degs), q = random_element(rng, b, degs);
        CHECK(veronese_element(p * q, 3, target) == veronese_element(p, 3, target) * veronese_element(q, 3, target));
    }
}

TEST_CASE("regrading")
{
    ContextPtr b = bilinear_z();
    TwistedElement a = x(b, "1") + TwistedElement::monomial(b, V({"-2"}), num(qa(), 3));
    CHECK(regrade(a, RationalMatrix::identity(1)).terms() == a.terms());

    TwistedElement zero_map = regrade(a, RationalMatrix::from_columns({V({"0"})}, 1));
    CHECK(zero_map.terms().size() == 1);
    CHECK(zero_map.coefficient(V({"0"})) == num(qa(), 4));
    CHECK_FALSE(zero_map.context()->has_product());
    CHECK_THROWS_AS(zero_map * zero_map, PreconditionError);

    std::vector<RationalVector> basis{V({"1", "0"}), V({"0", "1"})};
    ContextPtr t2 = AlgebraContext::make(trivial_cocycle(Domain::lattice(SubgroupBasis::standard(2)), qq()));
    TwistedElement m = TwistedElement::monomial(t2, V({"1", "0"})) + TwistedElement::monomial(t2, V({"1", "5"}), num(qq(), 2));
    TwistedElement proj = regrade(m, RationalMatrix::from_rows({V({"1", "0"})}, 2));
    CHECK(proj.terms().size() == 1);
    CHECK(proj.coefficient(V({"1"})) == num(qq(), 3));
    CHECK(proj.context()->has_product());

    // Injective maps are ring maps into the pushforward algebra.
    ContextPtr c2 = AlgebraContext::make(bilinear_cocycle(IntegerMatrix(2, 2, {1, 1, 1, 0}), lam(), basis));
    RationalMatrix pi = RationalMatrix::from_rows({V({"1", "1/2"}), V({"0", "2"}), V({"3", "0"})}, 2);
    ContextPtr target = regrade_context(c2, pi);
    Rng rng(6);
    auto degs = lattice_box(basis, 2, 2);
    for (int i = 0; i < 100; ++i) {
        TwistedElement p = random_element(rng, c2, degs), q = random_element(rng, c2, degs);
        CHECK(regrade(p * q, pi, target) == regrade(p, pi, target) * regrade(q, pi, target));
    }
}
