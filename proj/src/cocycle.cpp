#include "qgrade/cocycle.hpp"

#include <algorithm>
#include <numeric>

namespace qgrade {

// ---- domains ----

Domain Domain::lattice(SubgroupBasis g)
{
    Domain d;
    d.dim_ = g.ambient_dim();
    d.lattice_ = std::move(g);
    d.name_ = "lattice";
    return d;
}

Domain Domain::admissible(std::size_t dim, std::string name, std::function<bool(const RationalVector &)> test)
{
    Domain d;
    d.dim_ = dim;
    d.name_ = std::move(name);
    d.test_ = std::move(test);
    return d;
}

const SubgroupBasis &Domain::lattice() const
{
    if (!is_lattice()) throw PreconditionError("domain '" + name_ + "' is not a finitely generated lattice");
    return lattice_;
}

bool Domain::contains(const RationalVector &g) const
{
    if (g.dim() != dim_) return false;
    return is_lattice() ? lattice_.contains(g) : test_(g);
}

bool Domain::contains(const SubgroupBasis &h) const
{
    if (h.ambient_dim() != dim_) return false;
    if (is_lattice()) return h.is_subgroup_of(lattice_);
    return std::all_of(h.basis().begin(), h.basis().end(), [&](const RationalVector &b) { return test_(b); });
}

bool operator==(const Domain &a, const Domain &b)
{
    if (a.dim_ != b.dim_ || a.is_lattice() != b.is_lattice()) return false;
    return a.is_lattice() ? a.lattice_ == b.lattice_ : a.name_ == b.name_;
}

// ---- evaluation ----

FieldElement Cocycle::evaluate(const RationalVector &g, const RationalVector &h) const
{
    if (!rule_) throw PreconditionError("empty cocycle");
    if (!domain().contains(g)) throw PreconditionError(g.str() + " is outside the cocycle domain");
    if (!domain().contains(h)) throw PreconditionError(h.str() + " is outside the cocycle domain");
    return rule_->value(g, h);
}

Beta::Beta(SubgroupBasis domain, FieldPtr field, std::function<FieldElement(const RationalVector &)> fn)
    : domain_(std::move(domain)), field_(std::move(field)), fn_(std::move(fn))
{
}

namespace {

// Mixed-radix indexing of the box sum a_i b_i, |a_i| <= bound, matching
// the order of lattice_box (last coefficient fastest).
struct Box {
    std::vector<RationalVector> basis;
    long bound = 0;
    std::size_t dim = 0;
    std::size_t side = 1;
    std::size_t size = 1;
    std::shared_ptr<const LatticeCoordinates> coords;
    std::vector<RationalVector> points;

    Box(std::vector<RationalVector> b, long bound_, std::size_t dim_) : basis(std::move(b)), bound(bound_), dim(dim_)
    {
        if (bound < 0) throw PreconditionError("negative window bound");
        RationalMatrix m = RationalMatrix::from_columns(basis, dim);
        if (m.rank() != basis.size()) throw PreconditionError("window basis is not linearly independent");
        side = static_cast<std::size_t>(2 * bound + 1);
        for (std::size_t i = 0; i < basis.size(); ++i) size *= side;
        coords = std::make_shared<LatticeCoordinates>(dim, basis);
        points = lattice_box(basis, bound, dim);
    }

    std::vector<long> coeffs(std::size_t index) const
    {
        std::vector<long> a(basis.size());
        for (std::size_t i = basis.size(); i-- > 0;) {
            a[i] = static_cast<long>(index % side) - bound;
            index /= side;
        }
        return a;
    }

    std::optional<std::size_t> index(const std::vector<long> &a) const
    {
        std::size_t idx = 0;
        for (long x : a) {
            if (x < -bound || x > bound) return std::nullopt;
            idx = idx * side + static_cast<std::size_t>(x + bound);
        }
        return idx;
    }

    std::optional<std::size_t> index_of(const RationalVector &g) const
    {
        auto z = coords->integral(g);
        if (!z) return std::nullopt;
        std::vector<long> a;
        for (const auto &x : *z) {
            if (!x.fits_slong_p()) return std::nullopt;
            a.push_back(x.get_si());
        }
        return index(a);
    }

    std::optional<std::size_t> sum_index(std::size_t i, std::size_t j) const
    {
        auto a = coeffs(i), b = coeffs(j);
        for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
        return index(a);
    }
};

// mu over the box for the homomorphism x'_g = prod y_k^{a_k}, y_k = nu_k x_{b_k}:
// x'_g = mu(g) x_g. Points are reached along the path that uses b_1 first.
std::vector<FieldElement> telescope(const Cocycle &c, const Box &box, const std::vector<FieldElement> &nu)
{
    const std::size_t n = box.basis.size();
    std::vector<FieldElement> mu(box.size);
    std::vector<FieldElement> back(n); // nu_k * c(b_k, -b_k)
    for (std::size_t k = 0; k < n; ++k) back[k] = nu[k] * c(box.basis[k], -box.basis[k]);
    std::vector<std::size_t> order(box.size);
    std::iota(order.begin(), order.end(), 0);
    std::vector<long> norm(box.size);
    for (std::size_t i = 0; i < box.size; ++i) {
        auto a = box.coeffs(i);
        long s = 0;
        for (long x : a) s += std::abs(x);
        norm[i] = s;
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return norm[x] < norm[y]; });
    for (std::size_t idx : order) {
        auto a = box.coeffs(idx);
        std::size_t k = n;
        for (std::size_t t = n; t-- > 0;)
            if (a[t] != 0) {
                k = t;
                break;
            }
        if (k == n) {
            mu[idx] = FieldElement::one(c.field());
            continue;
        }
        const RationalVector &bk = box.basis[k];
        if (a[k] > 0) {
            a[k] -= 1;
            std::size_t prev = *box.index(a);
            mu[idx] = mu[prev] * nu[k] * c(box.points[prev], bk);
        } else {
            a[k] += 1;
            std::size_t prev = *box.index(a);
            mu[idx] = mu[prev] * c(box.points[prev], -bk) / back[k];
        }
    }
    return mu;
}

// mu at a single point by walking the same path.
FieldElement mu_at(const Cocycle &c, const std::vector<RationalVector> &basis, const std::vector<FieldElement> &nu,
                   const std::vector<Integer> &a)
{
    FieldElement mu = FieldElement::one(c.field());
    RationalVector p(c.domain().dim());
    for (std::size_t k = 0; k < basis.size(); ++k) {
        long steps = to_long(a[k]);
        const RationalVector &bk = basis[k];
        if (steps > 0) {
            for (long s = 0; s < steps; ++s) {
                mu = mu * nu[k] * c(p, bk);
                p += bk;
            }
        } else if (steps < 0) {
            FieldElement back = nu[k] * c(bk, -bk);
            for (long s = 0; s < -steps; ++s) {
                mu = mu * c(p, -bk) / back;
                p -= bk;
            }
        }
    }
    return mu;
}

// Exhaustive d beta = c over pairs whose sum stays in the box.
void verify_trivializer(const Cocycle &c, const Box &box, const std::vector<FieldElement> &beta)
{
    for (std::size_t i = 0; i < box.size; ++i)
        for (std::size_t j = 0; j < box.size; ++j) {
            auto k = box.sum_index(i, j);
            if (!k) continue;
            FieldElement lhs = c(box.points[i], box.points[j]);
            if (lhs != beta[i] * beta[j] / beta[*k]) {
                Counterexample ce{{box.points[i], box.points[j]}, "c = " + lhs.str() + " but d beta differs"};
                throw TrivializationError("trivializer check failed at " + box.points[i].str() + ", " + box.points[j].str(), ce);
            }
        }
}

} // namespace

Beta Beta::table(const std::vector<RationalVector> &basis, long bound, FieldPtr field, std::vector<FieldElement> values)
{
    std::size_t dim = basis.empty() ? 0 : basis.front().dim();
    auto box = std::make_shared<Box>(basis, bound, dim);
    if (values.size() != box->size) throw PreconditionError("beta table size does not match its box");
    auto data = std::make_shared<std::vector<FieldElement>>(std::move(values));
    return Beta(subgroup_basis(dim, basis), std::move(field), [box, data](const RationalVector &g) {
        auto idx = box->index_of(g);
        if (!idx) throw PreconditionError(g.str() + " is outside the tabulated window");
        return (*data)[*idx];
    });
}

FieldElement Beta::operator()(const RationalVector &g) const
{
    if (!fn_) throw PreconditionError("empty cochain");
    if (!domain_.contains(g)) throw PreconditionError(g.str() + " is outside the cochain domain");
    return fn_(g);
}

void CheckReport::record(Counterexample c)
{
    ++failure_count;
    if (failures.size() < max_recorded) failures.push_back(std::move(c));
}

long for_each_triple(std::size_t n, long trials, std::uint64_t seed,
                     const std::function<void(std::size_t, std::size_t, std::size_t)> &fn)
{
    if (n == 0) return 0;
    const double cube = static_cast<double>(n) * static_cast<double>(n) * static_cast<double>(n);
    if (cube <= static_cast<double>(trials)) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) fn(i, j, k);
        return static_cast<long>(n * n * n);
    }
    Rng rng(seed);
    const long hi = static_cast<long>(n) - 1;
    for (long t = 0; t < trials; ++t) {
        auto i = static_cast<std::size_t>(rng.uniform(0, hi));
        auto j = static_cast<std::size_t>(rng.uniform(0, hi));
        auto k = static_cast<std::size_t>(rng.uniform(0, hi));
        fn(i, j, k);
    }
    return trials;
}

long for_each_pair(std::size_t n, long trials, std::uint64_t seed, const std::function<void(std::size_t, std::size_t)> &fn)
{
    if (n == 0) return 0;
    if (static_cast<double>(n) * static_cast<double>(n) <= static_cast<double>(trials)) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) fn(i, j);
        return static_cast<long>(n * n);
    }
    Rng rng(seed);
    const long hi = static_cast<long>(n) - 1;
    for (long t = 0; t < trials; ++t) {
        auto i = static_cast<std::size_t>(rng.uniform(0, hi));
        auto j = static_cast<std::size_t>(rng.uniform(0, hi));
        fn(i, j);
    }
    return trials;
}

// ---- rules ----

namespace {

std::size_t dim_of(const std::vector<RationalVector> &basis) { return basis.front().dim(); }

class TrivialRule : public CocycleRule {
public:
    using CocycleRule::CocycleRule;
    std::string kind() const override { return "trivial"; }
    FieldElement value(const RationalVector &, const RationalVector &) const override { return FieldElement::one(field()); }
};

class BilinearRule : public CocycleRule {
public:
    BilinearRule(Domain d, IntegerMatrix a, FieldElement lambda, std::vector<RationalVector> basis)
        : CocycleRule(std::move(d), lambda.field()), a_(std::move(a)), lambda_(std::move(lambda)),
          coords_(dim_of(basis), basis)
    {
    }
    std::string kind() const override { return "bilinear"; }
    FieldElement value(const RationalVector &g, const RationalVector &h) const override
    {
        auto x = *coords_.integral(g), y = *coords_.integral(h);
        Integer e = 0;
        for (std::size_t r = 0; r < x.size(); ++r)
            for (std::size_t c = 0; c < y.size(); ++c) e += x[r] * a_(r, c) * y[c];
        return lambda_.pow(to_long(e));
    }

private:
    IntegerMatrix a_;
    FieldElement lambda_;
    LatticeCoordinates coords_;
};

class CustomRule : public CocycleRule {
public:
    CustomRule(Domain d, FieldPtr f, std::string name, std::function<FieldElement(const RationalVector &, const RationalVector &)> fn)
        : CocycleRule(std::move(d), std::move(f)), name_(std::move(name)), fn_(std::move(fn))
    {
        RationalVector zero(domain().dim());
        unit_ = fn_(zero, zero);
        if (unit_.is_zero()) throw PreconditionError("cocycle rule vanishes at (0,0)");
        unit_ = unit_.inverse();
    }
    std::string kind() const override { return name_; }
    FieldElement value(const RationalVector &g, const RationalVector &h) const override { return fn_(g, h) * unit_; }

private:
    std::string name_;
    std::function<FieldElement(const RationalVector &, const RationalVector &)> fn_;
    FieldElement unit_;
};

class CoboundaryRule : public CocycleRule {
public:
    explicit CoboundaryRule(Beta beta) : CocycleRule(Domain::lattice(beta.domain()), beta.field()), beta_(std::move(beta)) {}
    std::string kind() const override { return "coboundary"; }
    FieldElement value(const RationalVector &g, const RationalVector &h) const override
    {
        return beta_(g) * beta_(h) / beta_(g + h);
    }

private:
    Beta beta_;
};

class SpecializeRule : public CocycleRule {
public:
    SpecializeRule(Cocycle c, FieldPtr target, std::function<FieldElement(const Var &)> value)
        : CocycleRule(c.domain(), std::move(target)), c_(std::move(c)), value_(std::move(value))
    {
    }
    std::string kind() const override { return "specialize"; }
    FieldElement value(const RationalVector &g, const RationalVector &h) const override
    {
        FieldElement v = substitute(c_.rule().value(g, h), field(), value_);
        if (v.is_zero()) throw PreconditionError("specialization sends a cocycle value to zero");
        return v;
    }

private:
    Cocycle c_;
    std::function<FieldElement(const Var &)> value_;
};

class SumRule : public CocycleRule {
public:
    SumRule(Cocycle a, Cocycle b) : CocycleRule(a.domain(), a.field()), a_(std::move(a)), b_(std::move(b)) {}
    std::string kind() const override { return "sum"; }
    FieldElement value(const RationalVector &g, const RationalVector &h) const override
    {
        return a_.rule().value(g, h) * b_.rule().value(g, h);
    }

private:
    Cocycle a_, b_;
};

class PowerRule : public CocycleRule {
public:
    PowerRule(Cocycle c, long r) : CocycleRule(c.domain(), c.field()), c_(std::move(c)), r_(r) {}
    std::string kind() const override { return "power"; }
    FieldElement value(const RationalVector &g, const RationalVector &h) const override { return c_.rule().value(g, h).pow(r_); }

private:
    Cocycle c_;
    long r_;
};

class RestrictionRule : public CocycleRule {
public:
    RestrictionRule(Cocycle c, SubgroupBasis h) : CocycleRule(Domain::lattice(std::move(h)), c.field()), c_(std::move(c)) {}
    std::string kind() const override { return "restriction"; }
    FieldElement value(const RationalVector &g, const RationalVector &h) const override { return c_.rule().value(g, h); }

private:
    Cocycle c_;
};

class PushforwardRule : public CocycleRule {
public:
    PushforwardRule(Cocycle c, SubgroupBasis image, std::vector<RationalVector> image_basis)
        : CocycleRule(Domain::lattice(std::move(image)), c.field()), c_(std::move(c)),
          coords_(dim_of(image_basis), image_basis)
    {
    }
    std::string kind() const override { return "pushforward"; }
    FieldElement value(const RationalVector &u, const RationalVector &v) const override
    {
        const auto &basis = c_.domain().lattice().basis();
        return c_.rule().value(preimage(u, basis), preimage(v, basis));
    }

private:
    RationalVector preimage(const RationalVector &u, const std::vector<RationalVector> &basis) const
    {
        auto a = *coords_.integral(u);
        RationalVector g(c_.domain().dim());
        for (std::size_t i = 0; i < a.size(); ++i) g += Rational(a[i]) * basis[i];
        return g;
    }
    Cocycle c_;
    LatticeCoordinates coords_;
};

class RescaleRule : public CocycleRule {
public:
    RescaleRule(Cocycle c, const Integer &r)
        : CocycleRule(Domain::lattice(c.domain().lattice().scaled(Rational(r))), c.field()), c_(std::move(c)), inv_(1)
    {
        inv_ /= Rational(r);
    }
    std::string kind() const override { return "rescale"; }
    FieldElement value(const RationalVector &g, const RationalVector &h) const override
    {
        return c_.rule().value(inv_ * g, inv_ * h);
    }

private:
    Cocycle c_;
    Rational inv_;
};

class RootExtensionRule : public CocycleRule {
public:
    RootExtensionRule(Cocycle c, SubgroupBasis extended, RationalVector e, long p, FieldElement y)
        : CocycleRule(Domain::lattice(std::move(extended)), c.field()), c_(std::move(c)), e_(std::move(e)), pe_(Rational(p) * e_),
          p_(p), y_(std::move(y))
    {
    }
    std::string kind() const override { return "root_extension"; }
    FieldElement value(const RationalVector &u, const RationalVector &v) const override
    {
        auto [g, a] = split(u);
        auto [h, b] = split(v);
        FieldElement out = c_.rule().value(g, h);
        if (a + b >= p_) out = out * y_ * c_.rule().value(g + h, pe_);
        return out;
    }

private:
    // u = g + a e with g in G and 0 <= a < p.
    std::pair<RationalVector, long> split(const RationalVector &u) const
    {
        const SubgroupBasis &g = c_.domain().lattice();
        RationalVector rest = u;
        for (long a = 0; a < p_; ++a) {
            if (g.contains(rest)) return {rest, a};
            rest -= e_;
        }
        throw PreconditionError(u.str() + " is outside the extended lattice");
    }
    Cocycle c_;
    RationalVector e_, pe_;
    long p_;
    FieldElement y_;
};

void require_lattice(const Cocycle &c, const char *what)
{
    if (!c.domain().is_lattice()) throw PreconditionError(std::string(what) + " needs a cocycle on a finitely generated lattice");
}

} // namespace

Cocycle trivial_cocycle(const Domain &domain, FieldPtr field)
{
    return Cocycle(std::make_shared<TrivialRule>(domain, std::move(field)));
}

Cocycle bilinear_cocycle(const IntegerMatrix &a, const FieldElement &lambda, const std::vector<RationalVector> &basis)
{
    if (basis.empty()) throw PreconditionError("bilinear cocycle needs a nonempty basis");
    if (a.rows() != basis.size() || a.cols() != basis.size())
        throw PreconditionError("bilinear form size does not match the basis");
    if (!(a == a.transpose())) throw PreconditionError("bilinear form must be symmetric");
    if (lambda.is_zero()) throw PreconditionError("bilinear cocycle needs a nonzero scalar");
    std::size_t dim = basis.front().dim();
    if (RationalMatrix::from_columns(basis, dim).rank() != basis.size())
        throw PreconditionError("bilinear cocycle basis is not linearly independent");
    return Cocycle(std::make_shared<BilinearRule>(Domain::lattice(subgroup_basis(dim, basis)), a, lambda, basis));
}

Cocycle custom_cocycle(const Domain &domain, FieldPtr field, std::string name,
                       std::function<FieldElement(const RationalVector &, const RationalVector &)> fn)
{
    return Cocycle(std::make_shared<CustomRule>(domain, std::move(field), std::move(name), std::move(fn)));
}

Cocycle coboundary(const Beta &beta)
{
    RationalVector zero(beta.domain().ambient_dim());
    if (!beta(zero).is_one()) throw PreconditionError("cochain must satisfy beta(0) = 1");
    return Cocycle(std::make_shared<CoboundaryRule>(beta));
}

Cocycle specialize(const Cocycle &c, const FieldPtr &target, std::function<FieldElement(const Var &)> value)
{
    return Cocycle(std::make_shared<SpecializeRule>(c, target, std::move(value)));
}

Cocycle segre(const Cocycle &c1, const Cocycle &c2)
{
    if (!(c1.domain() == c2.domain())) throw PreconditionError("segre needs cocycles on the same domain");
    if (!same_field(c1.field(), c2.field())) throw PreconditionError("segre needs cocycles over the same field");
    return Cocycle(std::make_shared<SumRule>(c1, c2));
}

Cocycle veronese(const Cocycle &c, long r)
{
    if (r == 0) throw PreconditionError("veronese exponent must be nonzero");
    if (r == 1) return c;
    return Cocycle(std::make_shared<PowerRule>(c, r));
}

Cocycle inverse(const Cocycle &c) { return veronese(c, -1); }

Cocycle restrict(const Cocycle &c, const SubgroupBasis &h)
{
    if (!c.domain().contains(h)) throw PreconditionError("restriction target is not contained in the domain");
    return Cocycle(std::make_shared<RestrictionRule>(c, h));
}

Cocycle pushforward(const Cocycle &c, const RationalMatrix &pi)
{
    require_lattice(c, "pushforward");
    const auto &basis = c.domain().lattice().basis();
    if (pi.cols() != c.domain().dim()) throw PreconditionError("map does not match the grading dimension");
    std::vector<RationalVector> images;
    for (const auto &b : basis) images.push_back(pi.apply(b));
    if (basis.empty()) return trivial_cocycle(Domain::lattice(SubgroupBasis(pi.rows())), c.field());
    if (RationalMatrix::from_columns(images, pi.rows()).rank() != basis.size())
        throw PreconditionError("map is not injective on the cocycle domain");
    return Cocycle(std::make_shared<PushforwardRule>(c, subgroup_basis(pi.rows(), images), images));
}

Cocycle rescale(const Cocycle &c, const Integer &r)
{
    require_lattice(c, "rescale");
    if (r <= 0) throw PreconditionError("rescale factor must be positive");
    return Cocycle(std::make_shared<RescaleRule>(c, r));
}

Cocycle extend_root(const Cocycle &c, const RationalVector &e, long p, const FieldElement &y)
{
    require_lattice(c, "extend_root");
    if (p < 2 || !is_prime(static_cast<std::uint64_t>(p))) throw PreconditionError("extend_root needs a prime");
    if (!same_field(y.field(), c.field()) || y.is_zero()) throw PreconditionError("extend_root needs a nonzero scalar of the cocycle field");
    const SubgroupBasis &g = c.domain().lattice();
    if (g.contains(e)) throw PreconditionError(e.str() + " already lies in the lattice");
    if (!g.contains(Rational(p) * e)) throw PreconditionError("p * e is not in the lattice");
    std::vector<RationalVector> gens = g.basis();
    gens.push_back(e);
    return Cocycle(std::make_shared<RootExtensionRule>(c, subgroup_basis(g.ambient_dim(), gens), e, p, y));
}

// ---- checks ----

CheckReport check_cocycle(const Cocycle &c, const std::vector<RationalVector> &window, long trials, std::uint64_t seed)
{
    CheckReport report;
    RationalVector zero(c.domain().dim());
    for (const auto &w : window) {
        ++report.trials;
        if (!c(zero, w).is_one() || !c(w, zero).is_one()) report.record({{w}, "not normalized"});
    }
    report.trials += for_each_triple(window.size(), trials, seed, [&](std::size_t i, std::size_t j, std::size_t k) {
        const auto &f = window[i], &g = window[j], &h = window[k];
        FieldElement lhs = c(g, h) * c(f, g + h);
        FieldElement rhs = c(f + g, h) * c(f, g);
        if (lhs != rhs) report.record({{f, g, h}, "c(g,h)c(f,g+h) = " + lhs.str() + " but c(f+g,h)c(f,g) = " + rhs.str()});
    });
    return report;
}

CheckReport check_symmetric(const Cocycle &c, const std::vector<RationalVector> &window, long trials, std::uint64_t seed)
{
    CheckReport report;
    report.trials = for_each_pair(window.size(), trials, seed, [&](std::size_t i, std::size_t j) {
        FieldElement a = c(window[i], window[j]), b = c(window[j], window[i]);
        if (a != b) report.record({{window[i], window[j]}, a.str() + " != " + b.str()});
    });
    return report;
}

CheckReport check_equal(const Cocycle &a, const Cocycle &b, const std::vector<RationalVector> &window, long trials,
                        std::uint64_t seed)
{
    CheckReport report;
    report.trials = for_each_pair(window.size(), trials, seed, [&](std::size_t i, std::size_t j) {
        FieldElement x = a(window[i], window[j]), y = b(window[i], window[j]);
        if (x != y) report.record({{window[i], window[j]}, x.str() + " != " + y.str()});
    });
    return report;
}

CheckReport check_differs_by(const Cocycle &a, const Cocycle &b, const Beta &beta, const std::vector<RationalVector> &window)
{
    CheckReport report;
    for (const auto &g : window)
        for (const auto &h : window) {
            RationalVector s = g + h;
            if (!beta.domain().contains(s)) continue;
            ++report.trials;
            FieldElement lhs = a(g, h), rhs = b(g, h) * beta(g) * beta(h) / beta(s);
            if (lhs != rhs) report.record({{g, h}, lhs.str() + " != " + rhs.str()});
        }
    return report;
}

std::vector<RationalVector> window(const Cocycle &c, long bound)
{
    const auto &g = c.domain().lattice();
    return lattice_box(g.basis(), bound, g.ambient_dim());
}

// ---- trivialization ----

Beta trivialize_on_lattice(const Cocycle &c, const std::vector<RationalVector> &basis, long bound)
{
    Box box(basis, bound, c.domain().dim());
    for (const auto &b : basis)
        if (!c.domain().contains(b)) throw PreconditionError(b.str() + " is outside the cocycle domain");
    std::vector<FieldElement> nu(basis.size(), FieldElement::one(c.field()));
    std::vector<FieldElement> mu = telescope(c, box, nu);
    std::vector<FieldElement> beta;
    beta.reserve(mu.size());
    for (const auto &m : mu) beta.push_back(m.inverse());
    verify_trivializer(c, box, beta);
    return Beta::table(basis, bound, c.field(), std::move(beta));
}

std::variant<Beta, RootUnavailable> trivialize_via_roots(const Cocycle &c, const std::vector<FiltrationStep> &filtration,
                                                         long bound, const RootOracle &oracle)
{
    if (filtration.empty()) throw PreconditionError("empty filtration");
    std::vector<RationalVector> basis = filtration.front().e_basis;
    std::vector<FieldElement> nu(basis.size(), FieldElement::one(c.field()));
    for (std::size_t s = 0; s < filtration.size(); ++s) {
        const FiltrationStep &step = filtration[s];
        if (step.e_basis.size() != basis.size()) throw PreconditionError("filtration step has the wrong rank");
        if (step.n < 1 || Rational(step.n) * step.f != step.e_basis.back())
            throw PreconditionError("filtration step violates e_d = n f");
        // Re-express the good basis along this step's basis of the same group.
        LatticeCoordinates coords(c.domain().dim(), basis);
        std::vector<FieldElement> mu_e;
        for (const auto &e : step.e_basis) {
            auto a = coords.integral(e);
            if (!a) throw PreconditionError("filtration step basis leaves the previous group");
            mu_e.push_back(mu_at(c, basis, nu, *a));
        }
        const long n = to_long(step.n);
        FieldElement carry = FieldElement::one(c.field());
        for (long k = 1; k < n; ++k) carry = carry * c(Rational(k) * step.f, step.f);
        FieldElement target = mu_e.back() / carry;
        RootResult root = n == 1 ? RootResult{RootResult::Status::root, target} : oracle(target, n);
        if (!root.found()) return RootUnavailable{s, target, n, root.status};
        basis = step.e_basis;
        basis.back() = step.f;
        nu = mu_e;
        nu.back() = *root.value;
    }
    Box box(basis, bound, c.domain().dim());
    std::vector<FieldElement> mu = telescope(c, box, nu);
    std::vector<FieldElement> beta;
    beta.reserve(mu.size());
    for (const auto &m : mu) beta.push_back(m.inverse());
    verify_trivializer(c, box, beta);
    return Beta::table(basis, bound, c.field(), std::move(beta));
}

namespace {

using Row = std::vector<std::int64_t>;

std::int64_t mod(std::int64_t a, std::int64_t m)
{
    a %= m;
    return a < 0 ? a + m : a;
}

std::int64_t egcd(std::int64_t a, std::int64_t b, std::int64_t &s, std::int64_t &t)
{
    std::int64_t s0 = 1, t0 = 0, s1 = 0, t1 = 1;
    while (b != 0) {
        std::int64_t q = a / b;
        std::tie(a, b) = std::make_pair(b, a - q * b);
        std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
        std::tie(t0, t1) = std::make_pair(t1, t0 - q * t1);
    }
    s = s0;
    t = t1 == 0 && t0 == 0 ? 0 : t0;
    return a;
}

// Solves A x = b over Z/m by diagonalizing A with unimodular row and column
// operations. Returns nullopt when the system is inconsistent.
std::optional<std::vector<std::int64_t>> solve_mod(std::vector<Row> a, Row b, std::size_t cols, std::int64_t m)
{
    const std::size_t rows = a.size();
    std::vector<Row> v(cols, Row(cols, 0));
    for (std::size_t i = 0; i < cols; ++i) v[i][i] = 1 % m;

    // Row op: (row_p, row_r) <- (s row_p + t row_r, -y row_p + x row_r) with
    // x = a_p / g, y = a_r / g, determinant 1.
    auto row_combine = [&](std::size_t p, std::size_t r, std::int64_t s, std::int64_t t, std::int64_t x, std::int64_t y) {
        for (std::size_t c = 0; c < cols; ++c) {
            std::int64_t up = a[p][c], ur = a[r][c];
            a[p][c] = mod(s * up + t * ur, m);
            a[r][c] = mod(-y * up + x * ur, m);
        }
        std::int64_t bp = b[p], br = b[r];
        b[p] = mod(s * bp + t * br, m);
        b[r] = mod(-y * bp + x * br, m);
    };
    auto col_combine = [&](std::size_t p, std::size_t r, std::int64_t s, std::int64_t t, std::int64_t x, std::int64_t y) {
        for (std::size_t i = 0; i < rows; ++i) {
            std::int64_t up = a[i][p], ur = a[i][r];
            a[i][p] = mod(s * up + t * ur, m);
            a[i][r] = mod(-y * up + x * ur, m);
        }
        for (std::size_t i = 0; i < cols; ++i) {
            std::int64_t up = v[i][p], ur = v[i][r];
            v[i][p] = mod(s * up + t * ur, m);
            v[i][r] = mod(-y * up + x * ur, m);
        }
    };

    std::size_t rank = 0;
    for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
        // Bring some nonzero entry of the trailing block to (t, t).
        bool found = false;
        for (std::size_t r = t; r < rows && !found; ++r)
            for (std::size_t c = t; c < cols && !found; ++c)
                if (a[r][c] != 0) {
                    std::swap(a[t], a[r]);
                    std::swap(b[t], b[r]);
                    if (c != t)
                        for (std::size_t i = 0; i < rows; ++i) std::swap(a[i][t], a[i][c]);
                    if (c != t)
                        for (std::size_t i = 0; i < cols; ++i) std::swap(v[i][t], v[i][c]);
                    found = true;
                }
        if (!found) break;
        for (bool dirty = true; dirty;) {
            dirty = false;
            for (std::size_t r = t + 1; r < rows; ++r) {
                if (a[r][t] == 0) continue;
                if (a[r][t] % a[t][t] == 0) {
                    row_combine(t, r, 1, 0, 1, a[r][t] / a[t][t]);
                    continue;
                }
                std::int64_t s, u;
                std::int64_t g = egcd(a[t][t], a[r][t], s, u);
                row_combine(t, r, s, u, a[t][t] / g, a[r][t] / g);
            }
            for (std::size_t c = t + 1; c < cols; ++c) {
                if (a[t][c] == 0) continue;
                if (a[t][c] % a[t][t] == 0) {
                    col_combine(t, c, 1, 0, 1, a[t][c] / a[t][t]);
                    continue;
                }
                std::int64_t s, u;
                std::int64_t g = egcd(a[t][t], a[t][c], s, u);
                col_combine(t, c, s, u, a[t][t] / g, a[t][c] / g);
                dirty = true;
            }
            if (dirty) {
                dirty = false;
                for (std::size_t r = t + 1; r < rows; ++r) dirty = dirty || a[r][t] != 0;
            }
        }
        if (a[t][t] == 0) break;
        rank = t + 1;
    }

    Row z(cols, 0);
    for (std::size_t i = 0; i < rows; ++i) {
        if (i >= rank) {
            if (b[i] != 0) return std::nullopt;
            continue;
        }
        std::int64_t s, u;
        std::int64_t g = egcd(a[i][i], m, s, u);
        if (b[i] % g != 0) return std::nullopt;
        std::int64_t mg = m / g;
        z[i] = mod((b[i] / g) % mg * mod(s, mg), mg);
    }
    Row x(cols, 0);
    for (std::size_t i = 0; i < cols; ++i) {
        std::int64_t acc = 0;
        for (std::size_t k = 0; k < cols; ++k) acc = mod(acc + v[i][k] * z[k], m);
        x[i] = acc;
    }
    return x;
}

} // namespace

std::optional<Beta> coboundary_solve_finite_field(const Cocycle &c, const std::vector<RationalVector> &basis, long bound)
{
    if (c.field()->kind() != FieldDescriptor::Kind::prime_field)
        throw PreconditionError("coboundary_solve_finite_field needs a cocycle over GF(q)");
    const FiniteField &ff = *c.field()->finite_field();
    const std::int64_t m = static_cast<std::int64_t>(ff.order()) - 1;
    Box box(basis, bound, c.domain().dim());

    std::vector<Row> a;
    Row rhs;
    for (std::size_t i = 0; i < box.size; ++i)
        for (std::size_t j = 0; j < box.size; ++j) {
            auto k = box.sum_index(i, j);
            if (!k) continue;
            Row row(box.size, 0);
            row[i] += 1;
            row[j] += 1;
            row[*k] -= 1;
            for (auto &x : row) x = mod(x, m == 0 ? 1 : m);
            a.push_back(std::move(row));
            rhs.push_back(static_cast<std::int64_t>(ff.log(c(box.points[i], box.points[j]).scalar().residue())));
        }
    std::vector<std::int64_t> x(box.size, 0);
    if (m > 1) {
        auto sol = solve_mod(std::move(a), std::move(rhs), box.size, m);
        if (!sol) return std::nullopt;
        x = *sol;
        // Remove the character g -> prod beta(e_i)^{a_i} so that beta(e_i) = 1.
        std::vector<std::int64_t> unit_logs;
        for (std::size_t k = 0; k < basis.size(); ++k) {
            std::vector<long> a(basis.size(), 0);
            a[k] = 1;
            unit_logs.push_back(bound >= 1 ? x[*box.index(a)] : 0);
        }
        for (std::size_t i = 0; i < box.size; ++i) {
            auto a = box.coeffs(i);
            std::int64_t shift = 0;
            for (std::size_t k = 0; k < a.size(); ++k) shift = mod(shift + mod(a[k], m) * unit_logs[k], m);
            x[i] = mod(x[i] - shift, m);
        }
    }
    std::vector<FieldElement> beta;
    beta.reserve(box.size);
    for (auto e : x) beta.push_back(FieldElement::from_scalar(c.field(), Scalar(ff.exp(static_cast<std::uint32_t>(e)), &ff)));
    verify_trivializer(c, box, beta);
    return Beta::table(basis, bound, c.field(), std::move(beta));
}

DivideResult divide_class(const Cocycle &c, long r, long bound)
{
    require_lattice(c, "divide_class");
    if (r < 1) throw PreconditionError("divide_class needs r >= 1");
    const SubgroupBasis &g = c.domain().lattice();
    const std::size_t dim = g.ambient_dim();
    if (r == 1) return {c, Beta(g, c.field(), [f = c.field()](const RationalVector &) { return FieldElement::one(f); })};

    std::vector<long> primes;
    for (long n = r, d = 2; n > 1; ++d)
        while (n % d == 0) {
            primes.push_back(d);
            n /= d;
        }
    // Extend along G -> (1/p1) G -> (1/(p1 p2)) G -> ... one basis vector at a time.
    Cocycle ext = c;
    long scale = 1;
    const FieldElement one = FieldElement::one(c.field());
    for (long p : primes) {
        for (const auto &b : g.basis()) ext = extend_root(ext, make_rational(1, scale * p) * b, p, one);
        scale *= p;
    }
    Cocycle c_prime = rescale(ext, Integer(r));
    // x_{g/r}^r = beta(g) x_g inside k[(1/r)G, ext].
    Rational inv = make_rational(1, r);
    Beta beta(g, c.field(), [ext, r, inv](const RationalVector &x) {
        RationalVector step = inv * x;
        FieldElement out = FieldElement::one(ext.field());
        RationalVector acc = step;
        for (long k = 1; k < r; ++k) {
            out = out * ext(acc, step);
            acc += step;
        }
        return out;
    });
    auto win = lattice_box(g.basis(), bound, dim);
    CheckReport report = check_differs_by(veronese(c_prime, r), c, beta, win);
    if (!report.pass()) throw TrivializationError("divided class does not match on the window", report.failures.front());
    return {c_prime, beta};
}

} // namespace qgrade
