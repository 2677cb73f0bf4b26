#include "qgrade/twisted.hpp"

namespace qgrade {

ContextPtr AlgebraContext::make(Cocycle c)
{
    Domain d = c.domain();
    FieldPtr f = c.field();
    return ContextPtr(new AlgebraContext(std::move(d), std::move(f), std::move(c)));
}

ContextPtr AlgebraContext::graded_only(Domain domain, FieldPtr field)
{
    return ContextPtr(new AlgebraContext(std::move(domain), std::move(field), std::nullopt));
}

const Cocycle &AlgebraContext::cocycle() const
{
    if (!cocycle_) throw PreconditionError("this graded structure carries no product");
    return *cocycle_;
}

// ---- elements ----

TwistedElement TwistedElement::one(const ContextPtr &ctx) { return monomial(ctx, RationalVector(ctx->dim())); }

TwistedElement TwistedElement::monomial(const ContextPtr &ctx, const RationalVector &g, const FieldElement &coeff)
{
    if (!ctx->domain().contains(g)) throw PreconditionError(g.str() + " is outside the grading group");
    if (!same_field(coeff.field(), ctx->field())) throw PreconditionError("coefficient from a different field");
    TwistedElement out(ctx);
    out.add_term(g, coeff);
    return out;
}

TwistedElement TwistedElement::monomial(const ContextPtr &ctx, const RationalVector &g)
{
    return monomial(ctx, g, FieldElement::one(ctx->field()));
}

FieldElement TwistedElement::coefficient(const RationalVector &g) const
{
    auto it = terms_.find(g);
    return it == terms_.end() ? FieldElement::zero(ctx_->field()) : it->second;
}

void TwistedElement::add_term(const RationalVector &g, const FieldElement &coeff)
{
    if (coeff.is_zero()) return;
    auto it = terms_.find(g);
    if (it == terms_.end()) {
        terms_.emplace(g, coeff);
        return;
    }
    it->second = it->second + coeff;
    if (it->second.is_zero()) terms_.erase(it);
}

void TwistedElement::check_same(const TwistedElement &o) const
{
    if (ctx_ == o.ctx_) return;
    bool same = ctx_->has_product() && o.ctx_->has_product() ? &ctx_->cocycle().rule() == &o.ctx_->cocycle().rule()
                                                             : !ctx_->has_product() && !o.ctx_->has_product() &&
                                                                   ctx_->domain() == o.ctx_->domain();
    if (!same || !same_field(ctx_->field(), o.ctx_->field()))
        throw PreconditionError("elements of different algebras");
}

TwistedElement TwistedElement::operator+(const TwistedElement &o) const
{
    check_same(o);
    TwistedElement out = *this;
    for (const auto &[g, c] : o.terms_) out.add_term(g, c);
    return out;
}

TwistedElement TwistedElement::operator-(const TwistedElement &o) const
{
    check_same(o);
    TwistedElement out = *this;
    for (const auto &[g, c] : o.terms_) out.add_term(g, -c);
    return out;
}

TwistedElement TwistedElement::operator*(const TwistedElement &o) const
{
    check_same(o);
    const Cocycle &c = ctx_->cocycle();
    TwistedElement out(ctx_);
    for (const auto &[g, a] : terms_)
        for (const auto &[h, b] : o.terms_) out.add_term(g + h, a * b * c(g, h));
    return out;
}

TwistedElement TwistedElement::scaled(const FieldElement &s) const
{
    TwistedElement out(ctx_);
    for (const auto &[g, c] : terms_) out.add_term(g, c * s);
    return out;
}

std::string TwistedElement::str() const
{
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto &[g, c] : terms_) {
        if (!out.empty()) out += " + ";
        out += c.str() + " x" + g.str();
    }
    return out;
}

TwistedElement invert_homogeneous(const TwistedElement &a)
{
    if (!a.is_homogeneous()) throw PreconditionError("only nonzero homogeneous elements are inverted here");
    const auto &[g, lambda] = *a.terms().begin();
    RationalVector minus = -g;
    FieldElement coeff = (lambda * a.context()->cocycle()(g, minus)).inverse();
    return TwistedElement::monomial(a.context(), minus, coeff);
}

CheckReport is_associative_window(const ContextPtr &ctx, const std::vector<RationalVector> &window, long trials,
                                  std::uint64_t seed)
{
    CheckReport report;
    std::vector<TwistedElement> x;
    x.reserve(window.size());
    for (const auto &g : window) x.push_back(TwistedElement::monomial(ctx, g));
    report.trials = for_each_triple(window.size(), trials, seed, [&](std::size_t i, std::size_t j, std::size_t k) {
        TwistedElement left = (x[i] * x[j]) * x[k];
        TwistedElement right = x[i] * (x[j] * x[k]);
        if (!(left == right)) report.record({{window[i], window[j], window[k]}, left.str() + " != " + right.str()});
    });
    return report;
}

TwistedElement segre_element(const TwistedElement &a, const TwistedElement &b, const ContextPtr &target)
{
    if (!(a.context()->domain() == b.context()->domain()) || !(target->domain() == a.context()->domain()))
        throw PreconditionError("segre needs a common grading group");
    if (!same_field(target->field(), a.context()->field()) || !same_field(target->field(), b.context()->field()))
        throw PreconditionError("segre needs a common coefficient field");
    TwistedElement out(target);
    for (const auto &[g, x] : a.terms()) {
        auto it = b.terms().find(g);
        if (it != b.terms().end()) out.add_term(g, x * it->second);
    }
    return out;
}

TwistedElement segre_element(const TwistedElement &a, const TwistedElement &b)
{
    return segre_element(a, b, AlgebraContext::make(segre(a.context()->cocycle(), b.context()->cocycle())));
}

TwistedElement veronese_element(const TwistedElement &a, long r, const ContextPtr &target)
{
    if (r < 1) throw PreconditionError("veronese of elements needs r >= 1");
    const Cocycle &c = a.context()->cocycle();
    const Rational inv = make_rational(1, r);
    TwistedElement out(target);
    for (const auto &[g, lambda] : a.terms()) {
        RationalVector h = inv * g;
        if (!c.domain().contains(h)) throw PreconditionError(g.str() + " is not divisible by " + std::to_string(r));
        // x_h^r = P x_{rh} with P = prod_{k<r} c(kh, h).
        FieldElement p = FieldElement::one(c.field());
        RationalVector acc = h;
        for (long k = 1; k < r; ++k) {
            p = p * c(acc, h);
            acc += h;
        }
        out.add_term(h, lambda / p);
    }
    return out;
}

TwistedElement veronese_element(const TwistedElement &a, long r)
{
    return veronese_element(a, r, AlgebraContext::make(veronese(a.context()->cocycle(), r)));
}

namespace {

bool injective_on(const Domain &d, const RationalMatrix &pi)
{
    const auto &basis = d.lattice().basis();
    std::vector<RationalVector> images;
    for (const auto &b : basis) images.push_back(pi.apply(b));
    return basis.empty() || RationalMatrix::from_columns(images, pi.rows()).rank() == basis.size();
}

} // namespace

ContextPtr regrade_context(const ContextPtr &ctx, const RationalMatrix &pi)
{
    if (pi.cols() != ctx->dim()) throw PreconditionError("map does not match the grading dimension");
    const Domain &d = ctx->domain();
    Domain image = Domain::admissible(pi.rows(), "Q^" + std::to_string(pi.rows()), [](const RationalVector &) { return true; });
    if (d.is_lattice()) {
        std::vector<RationalVector> images;
        for (const auto &b : d.lattice().basis()) images.push_back(pi.apply(b));
        image = Domain::lattice(images.empty() ? SubgroupBasis(pi.rows()) : subgroup_basis(pi.rows(), images));
    }
    if (!ctx->has_product()) return AlgebraContext::graded_only(image, ctx->field());
    const Cocycle &c = ctx->cocycle();
    if (c.kind() == "trivial") return AlgebraContext::make(trivial_cocycle(image, ctx->field()));
    if (d.is_lattice() && injective_on(d, pi)) return AlgebraContext::make(pushforward(c, pi));
    return AlgebraContext::graded_only(image, ctx->field());
}

TwistedElement regrade(const TwistedElement &a, const RationalMatrix &pi, const ContextPtr &target)
{
    if (pi.cols() != a.context()->dim() || pi.rows() != target->dim()) throw PreconditionError("map does not match the gradings");
    TwistedElement out(target);
    for (const auto &[g, c] : a.terms()) {
        RationalVector u = pi.apply(g);
        if (!target->domain().contains(u)) throw PreconditionError(u.str() + " is outside the target grading");
        out.add_term(u, c);
    }
    return out;
}

TwistedElement regrade(const TwistedElement &a, const RationalMatrix &pi)
{
    return regrade(a, pi, regrade_context(a.context(), pi));
}

} // namespace qgrade
