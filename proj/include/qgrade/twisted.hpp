#pragma once

// Twisted group algebras k[G,c]: finite sums of c-twisted basis elements
// x_g with x_g x_h = c(g,h) x_{g+h}.

#include <map>
#include <memory>
#include <optional>

#include "qgrade/cocycle.hpp"

namespace qgrade {

class AlgebraContext;
using ContextPtr = std::shared_ptr<const AlgebraContext>;

class AlgebraContext {
public:
    static ContextPtr make(Cocycle c);
    /// Only the additive graded structure; products throw. Produced by
    /// regrading a nontrivial cocycle along a non-injective map.
    static ContextPtr graded_only(Domain domain, FieldPtr field);

    bool has_product() const { return product_; }
    const Cocycle &cocycle() const;
    const Domain &domain() const { return domain_; }
    const FieldPtr &field() const { return field_; }
    std::size_t dim() const { return domain_.dim(); }

private:
    AlgebraContext(Domain d, FieldPtr f, std::optional<Cocycle> c)
        : domain_(std::move(d)), field_(std::move(f)), cocycle_(std::move(c)), product_(cocycle_.has_value())
    {
    }
    Domain domain_;
    FieldPtr field_;
    std::optional<Cocycle> cocycle_;
    bool product_;
};

class TwistedElement {
public:
    using Terms = std::map<RationalVector, FieldElement>;

    explicit TwistedElement(ContextPtr ctx) : ctx_(std::move(ctx)) {}
    static TwistedElement one(const ContextPtr &ctx);
    /// coeff * x_g; throws if g is outside the grading domain.
    static TwistedElement monomial(const ContextPtr &ctx, const RationalVector &g, const FieldElement &coeff);
    static TwistedElement monomial(const ContextPtr &ctx, const RationalVector &g);

    const ContextPtr &context() const { return ctx_; }
    const Terms &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_homogeneous() const { return terms_.size() == 1; }
    FieldElement coefficient(const RationalVector &g) const;

    TwistedElement operator+(const TwistedElement &o) const;
    TwistedElement operator-(const TwistedElement &o) const;
    TwistedElement operator*(const TwistedElement &o) const;
    TwistedElement scaled(const FieldElement &s) const;

    friend bool operator==(const TwistedElement &a, const TwistedElement &b) { return a.terms_ == b.terms_; }

    /// "2/1 x(1) + a[1,1] x(-1/2)" in lexicographic degree order.
    std::string str() const;

    /// Adds coeff * x_g (no domain check; callers validate).
    void add_term(const RationalVector &g, const FieldElement &coeff);

private:
    void check_same(const TwistedElement &o) const;
    ContextPtr ctx_;
    Terms terms_;
};

inline TwistedElement mul(const TwistedElement &a, const TwistedElement &b) { return a * b; }

/// (lambda x_g)^-1 = lambda^-1 c(g,-g)^-1 x_{-g}.
TwistedElement invert_homogeneous(const TwistedElement &a);

/// (x_f x_g) x_h == x_f (x_g x_h) on the same triples check_cocycle visits.
CheckReport is_associative_window(const ContextPtr &ctx, const std::vector<RationalVector> &window, long trials,
                                  std::uint64_t seed = 0);

/// Diagonal part of a (x) b inside k[G, segre(c1, c2)].
TwistedElement segre_element(const TwistedElement &a, const TwistedElement &b, const ContextPtr &target);
TwistedElement segre_element(const TwistedElement &a, const TwistedElement &b);

/// a in k[rG, c] rewritten in the basis x_h^r, h = g / r, of k[G, c^r]; r >= 1.
TwistedElement veronese_element(const TwistedElement &a, long r, const ContextPtr &target);
TwistedElement veronese_element(const TwistedElement &a, long r);

/// Terms re-keyed by pi(g). The target context is the pushforward when pi
/// is injective on a lattice domain, trivial when c is trivial, and
/// graded-only otherwise.
ContextPtr regrade_context(const ContextPtr &ctx, const RationalMatrix &pi);
TwistedElement regrade(const TwistedElement &a, const RationalMatrix &pi, const ContextPtr &target);
TwistedElement regrade(const TwistedElement &a, const RationalMatrix &pi);

} // namespace qgrade
