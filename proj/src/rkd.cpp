#include "qgrade/rkd.hpp"

#include <mutex>

namespace qgrade {

// ---- prime schedules ----

struct PrimeSchedule::Cache {
    std::mutex mutex;
    std::vector<long> primes{0};   // primes[k] = k-th prime, 1-based
    std::vector<long> schedule{0}; // schedule[i] = p_i
    std::vector<Integer> moduli{Integer(1)};
};

PrimeSchedule::PrimeSchedule(long p) : p_(p), cache_(std::make_shared<Cache>()) {}

PrimeSchedule PrimeSchedule::diagonal() { return PrimeSchedule(0); }

PrimeSchedule PrimeSchedule::constant(long p)
{
    if (p < 2 || !is_prime(static_cast<std::uint64_t>(p))) throw PreconditionError("constant schedule needs a prime");
    return PrimeSchedule(p);
}

namespace {

long kth_prime(std::vector<long> &primes, std::size_t k)
{
    while (primes.size() <= k) {
        long c = primes.size() == 1 ? 2 : primes.back() + 1;
        while (!is_prime(static_cast<std::uint64_t>(c))) ++c;
        primes.push_back(c);
    }
    return primes[k];
}

} // namespace

long PrimeSchedule::prime(std::size_t i) const
{
    if (i == 0) throw PreconditionError("schedule positions start at 1");
    if (!is_diagonal()) return p_;
    std::lock_guard lock(cache_->mutex);
    auto &s = cache_->schedule;
    while (s.size() <= i) {
        // Position n lies on anti-diagonal m, which lists q_m, q_{m-1}, ..., q_1.
        std::size_t n = s.size(), m = 1;
        while (m * (m + 1) / 2 < n) ++m;
        std::size_t k = n - m * (m - 1) / 2;
        s.push_back(kth_prime(cache_->primes, m - k + 1));
    }
    return s[i];
}

Integer PrimeSchedule::modulus(std::size_t i) const
{
    {
        std::lock_guard lock(cache_->mutex);
        if (i < cache_->moduli.size()) return cache_->moduli[i];
    }
    std::vector<long> ps;
    for (std::size_t k = 1; k <= i; ++k) ps.push_back(prime(k));
    std::lock_guard lock(cache_->mutex);
    auto &m = cache_->moduli;
    while (m.size() <= i) m.push_back(m.back() * ps[m.size() - 1]);
    return m[i];
}

std::string PrimeSchedule::str() const { return is_diagonal() ? "diagonal" : "constant(" + std::to_string(p_) + ")"; }

std::vector<long> prime_seq(const PrimeSchedule &s, std::size_t n)
{
    std::vector<long> out;
    for (std::size_t i = 1; i <= n; ++i) out.push_back(s.prime(i));
    return out;
}

// ---- level elements ----

LevelElement LevelElement::monomial(std::size_t level, const FieldElement &coeff, std::vector<long> exps)
{
    LevelElement out(level, exps.size(), coeff.field());
    out.add_term(exps, coeff);
    return out;
}

void LevelElement::check_same(const LevelElement &o) const
{
    if (level_ != o.level_ || d_ != o.d_) throw PreconditionError("level elements live in different rings");
}

void LevelElement::add_term(const std::vector<long> &e, const FieldElement &c)
{
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
        return;
    }
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
}

LevelElement LevelElement::operator+(const LevelElement &o) const
{
    check_same(o);
    LevelElement out = *this;
    for (const auto &[e, c] : o.terms_) out.add_term(e, c);
    return out;
}

LevelElement LevelElement::operator*(const LevelElement &o) const
{
    check_same(o);
    LevelElement out(level_, d_, field_);
    for (const auto &[e1, c1] : terms_)
        for (const auto &[e2, c2] : o.terms_) {
            std::vector<long> e(d_);
            for (std::size_t j = 0; j < d_; ++j) e[j] = e1[j] + e2[j];
            out.add_term(e, c1 * c2);
        }
    return out;
}

LevelElement LevelElement::scaled(const FieldElement &s) const
{
    LevelElement out(level_, d_, field_);
    for (const auto &[e, c] : terms_) out.add_term(e, c * s);
    return out;
}

std::string LevelElement::str() const
{
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto &[e, c] : terms_) {
        Exponents t;
        for (std::size_t j = 0; j < d_; ++j) t.emplace_back(Var{'t', static_cast<int>(j + 1), static_cast<int>(level_)}, e[j]);
        t = canonical_exponents(t);
        if (!out.empty()) out += " + ";
        if (auto m = c.as_monomial()) {
            LaurentMonomial full(m->unit(), exponents_mul(m->exponents(), t));
            out += full.exponents().empty() && full.unit().is_one() ? "1" : full.str();
        } else {
            out += "(" + c.str() + ")";
            if (!t.empty()) out += " * " + LaurentMonomial(FieldElement::one(field_->base()), t).str();
        }
    }
    return out;
}

// ---- the construction ----

namespace {

Var alpha(std::size_t j, std::size_t i) { return Var{'a', static_cast<int>(j), static_cast<int>(i)}; }
Var tvar(std::size_t j, std::size_t i) { return Var{'t', static_cast<int>(j), static_cast<int>(i)}; }

} // namespace

Rkd::Rkd(std::size_t d, PrimeSchedule schedule, FieldPtr base, std::size_t max_level, LiftConvention convention)
    : d_(d), schedule_(std::move(schedule)), base_(std::move(base)), max_level_(max_level), convention_(convention)
{
    if (d_ == 0) throw PreconditionError("R(k,d) needs d >= 1");
    if (max_level_ == 0) throw PreconditionError("max_level must be at least 1");
    if (base_->kind() == FieldDescriptor::Kind::function_field) throw PreconditionError("base must be Q or GF(q)");
    const long ch = base_->characteristic();
    if (schedule_.is_diagonal() && ch != 0) throw PreconditionError("the diagonal schedule needs characteristic 0");
    if (!schedule_.is_diagonal() && ch != 0 && ch != schedule_.constant_prime())
        throw PreconditionError("constant(q) schedule over characteristic p != q");
    std::vector<Var> vars;
    for (std::size_t i = 1; i <= max_level_; ++i) {
        for (std::size_t j = 1; j <= d_; ++j) vars.push_back(alpha(j, i));
        fields_.push_back(FieldDescriptor::function_field(base_, vars));
    }
}

const FieldPtr &Rkd::level_field(std::size_t i) const
{
    if (i < 1 || i > max_level_) throw PreconditionError("level " + std::to_string(i) + " is outside 1.." + std::to_string(max_level_));
    return fields_[i - 1];
}

std::size_t Rkd::level_of(const RationalVector &g) const
{
    if (g.dim() != d_) throw PreconditionError("degree has the wrong dimension");
    Integer den = g.common_denominator();
    if (!schedule_.is_diagonal()) {
        Integer rest = den;
        while (rest % schedule_.constant_prime() == 0) rest /= schedule_.constant_prime();
        if (rest != 1) throw PreconditionError(g.str() + " has a denominator outside the schedule");
    }
    // Every prime recurs on later anti-diagonals, so this terminates; the
    // cap only guards against absurd denominators.
    for (std::size_t i = 1; i <= 200000; ++i)
        if (schedule_.modulus(i) % den == 0) return i;
    throw PreconditionError(g.str() + " needs an impractically deep level");
}

bool Rkd::admissible(const RationalVector &g) const
{
    try {
        return level_of(g) <= max_level_;
    } catch (const PreconditionError &) {
        return false;
    }
}

CanonicalBasis Rkd::canonical_basis(const RationalVector &g) const
{
    CanonicalBasis out{g, level_of(g), {}};
    Integer n = schedule_.modulus(out.level);
    for (std::size_t j = 0; j < d_; ++j) out.exponents.push_back(to_long(Integer(Rational(n * g[j]))));
    return out;
}

LevelElement Rkd::basis_element(const RationalVector &g) const
{
    CanonicalBasis b = canonical_basis(g);
    return LevelElement::monomial(b.level, FieldElement::one(level_field(b.level)), b.exponents);
}

LevelElement Rkd::phi_lift(const LevelElement &a) const
{
    const std::size_t i = a.level();
    const FieldPtr &next = level_field(i + 1);
    const long p = convention_ == LiftConvention::graded ? schedule_.prime(i + 1) : schedule_.prime(i);
    LevelElement out(i + 1, d_, next);
    for (const auto &[e, c] : a.terms()) {
        Exponents shift;
        std::vector<long> exps(d_);
        for (std::size_t j = 0; j < d_; ++j) {
            shift.emplace_back(alpha(j + 1, i + 1), -e[j]);
            exps[j] = p * e[j];
        }
        FieldElement coeff = FieldElement::from_fraction(next, c.numerator(), c.denominator());
        coeff = coeff * embed_monomial(LaurentMonomial(FieldElement::one(base_), shift), next);
        out = out + LevelElement::monomial(i + 1, coeff, exps);
    }
    return out;
}

LevelElement Rkd::lift_to(LevelElement a, std::size_t level) const
{
    if (level < a.level()) throw PreconditionError("cannot lift to a lower level");
    while (a.level() < level) a = phi_lift(a);
    return a;
}

RationalVector Rkd::degree(std::size_t level, const std::vector<long> &exps) const
{
    Integer n = schedule_.modulus(level);
    RationalVector out(d_);
    for (std::size_t j = 0; j < d_; ++j) out[j] = Rational(Integer(exps[j]), n);
    for (std::size_t j = 0; j < d_; ++j) out[j].canonicalize();
    return out;
}

FieldElement Rkd::limit_value(const RationalVector &g, const RationalVector &h) const
{
    if (convention_ != LiftConvention::graded) throw PreconditionError("the literal lift does not define a graded limit");
    const RationalVector s = g + h;
    const std::size_t ig = level_of(g), ih = level_of(h), is = level_of(s);
    const std::size_t top = std::max(ig, ih);
    if (top > max_level_) throw PreconditionError("degree beyond the representable levels");
    Exponents e;
    for (std::size_t l = 2; l <= top; ++l) {
        const Integer n = schedule_.modulus(l - 1);
        for (std::size_t j = 0; j < d_; ++j) {
            Rational x(0);
            if (l > ig) x -= g[j] * n;
            if (l > ih) x -= h[j] * n;
            if (l > is) x += s[j] * n;
            if (x != 0) e.emplace_back(alpha(j + 1, l), to_long(Integer(x)));
        }
    }
    return embed_monomial(LaurentMonomial(FieldElement::one(base_), std::move(e)), level_field(max_level_));
}

namespace {

class RkdLimitRule : public CocycleRule {
public:
    RkdLimitRule(Domain d, std::shared_ptr<const Rkd> r) : CocycleRule(std::move(d), r->level_field(r->max_level())), r_(std::move(r)) {}
    std::string kind() const override { return "rkd"; }
    FieldElement value(const RationalVector &g, const RationalVector &h) const override { return r_->limit_value(g, h); }

private:
    std::shared_ptr<const Rkd> r_;
};

} // namespace

Cocycle Rkd::limit_cocycle() const
{
    if (convention_ != LiftConvention::graded) throw PreconditionError("the literal lift does not define a graded limit");
    auto self = std::make_shared<const Rkd>(*this);
    std::string name = "rkd(d=" + std::to_string(d_) + "," + schedule_.str() + "," + base_->str() + ",L=" + std::to_string(max_level_) + ")";
    Domain dom = Domain::admissible(d_, name, [self](const RationalVector &g) { return self->admissible(g); });
    return Cocycle(std::make_shared<RkdLimitRule>(dom, self));
}

std::vector<RationalVector> Rkd::window(long bound, std::size_t level) const
{
    const Integer n = schedule_.modulus(level);
    std::vector<RationalVector> out;
    std::vector<long> a(d_, -bound);
    while (true) {
        RationalVector g(d_);
        for (std::size_t j = 0; j < d_; ++j) {
            g[j] = Rational(Integer(a[j]), n);
            g[j].canonicalize();
        }
        out.push_back(g);
        std::size_t k = d_;
        while (k > 0 && a[k - 1] == bound) a[--k] = -bound;
        if (k == 0) break;
        ++a[k - 1];
    }
    return out;
}

CheckReport verify_monomial_irreducible(const LaurentMonomial &m, long p)
{
    CheckReport report;
    report.trials = 1;
    if (auto root = monomial_nth_root(m, p))
        report.record({{}, m.str() + " is a " + std::to_string(p) + "-th power of " + root->str()});
    return report;
}

CheckReport verify_level_irreducible(const Rkd &r, std::size_t i, std::size_t j)
{
    if (i < 1 || j < 1 || j > r.d()) throw PreconditionError("level irreducibility needs i >= 1 and 1 <= j <= d");
    LaurentMonomial m(FieldElement::one(r.base()), {{alpha(j, i + 1), 1}, {tvar(j, i), 1}});
    return verify_monomial_irreducible(m, r.schedule().prime(i + 1));
}

Cocycle restrict_to_subgroup(const Cocycle &c, const SubgroupBasis &g)
{
    for (const auto &b : g.basis())
        if (!c.domain().contains(b)) throw PreconditionError(b.str() + " is not an admissible degree");
    return restrict(c, g);
}

} // namespace qgrade
