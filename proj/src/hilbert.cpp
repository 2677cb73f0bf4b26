#include "qgrade/hilbert.hpp"

#include <algorithm>
#include <functional>

namespace qgrade {

namespace {

bool divides(const std::vector<long> &a, const std::vector<long> &b)
{
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

std::vector<long> lcm(const std::vector<long> &a, const std::vector<long> &b)
{
    std::vector<long> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::max(a[i], b[i]);
    return out;
}

void add_fine(FineNumerator &k, const std::vector<long> &u, const Integer &c)
{
    if (c == 0) return;
    auto [it, fresh] = k.emplace(u, c);
    if (fresh) return;
    it->second += c;
    if (it->second == 0) k.erase(it);
}

Integer floor_of(const Rational &q)
{
    Integer out;
    mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return out;
}

/// Exponent bound for a zero-degree variable: it must be nilpotent.
long nilpotency_bound(const MonomialIdeal &ideal, std::size_t i)
{
    long best = -1;
    for (const auto &g : ideal.generators()) {
        bool pure = true;
        for (std::size_t j = 0; j < g.size(); ++j)
            if (j != i && g[j] != 0) pure = false;
        if (pure && (best < 0 || g[i] < best)) best = g[i];
    }
    if (best < 0) throw PreconditionError("variable " + std::to_string(i + 1) + " has degree 0 and is not nilpotent");
    return best - 1;
}

/// Depth-first walk over standard monomials with sum u_i w_i <= budget,
/// exponent i capped by caps[i] when caps[i] >= 0.
template <class Visit>
void walk_standard(const MonomialIdeal &ideal, const std::vector<Rational> &w, const std::vector<long> &caps,
                   const Rational &budget, Visit &&visit)
{
    std::size_t n = w.size();
    std::vector<long> u(n, 0);
    std::function<void(std::size_t, const Rational &)> rec = [&](std::size_t i, const Rational &left) {
        if (i == n) {
            visit(u);
            return;
        }
        long top = caps[i];
        if (w[i] > 0) {
            long by_weight = to_long(floor_of(Rational(left / w[i])));
            top = top < 0 ? by_weight : std::min(top, by_weight);
        }
        for (long e = 0; e <= top; ++e) {
            u[i] = e;
            // Anything divisible by a monomial already in I stays in I.
            if (e > 0 && ideal.contains(u)) break;
            rec(i + 1, Rational(left - e * w[i]));
        }
        u[i] = 0;
    };
    if (budget >= 0 && !ideal.contains(u)) rec(0, budget);
}

} // namespace

// ---- ring data ----

GradedRingSpec::GradedRingSpec(std::size_t d_, std::vector<RationalVector> columns_, bool allow_zero_)
    : d(d_), columns(std::move(columns_)), allow_zero(allow_zero_)
{
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i].dim() != d) throw PreconditionError("degree of variable " + std::to_string(i + 1) + " has the wrong dimension");
        if (columns[i].is_zero() && !allow_zero) throw PreconditionError("variable " + std::to_string(i + 1) + " has degree 0");
    }
}

RationalVector GradedRingSpec::degree(const std::vector<long> &u) const
{
    if (u.size() != columns.size()) throw PreconditionError("exponent vector has the wrong length");
    RationalVector out(d);
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] != 0) out += Rational(u[i]) * columns[i];
    return out;
}

SubgroupBasis GradedRingSpec::group() const { return subgroup_basis(d, columns); }

MonomialIdeal::MonomialIdeal(std::size_t n, std::vector<std::vector<long>> generators) : n_(n)
{
    for (const auto &g : generators) {
        if (g.size() != n) throw PreconditionError("generator has the wrong number of exponents");
        for (long e : g)
            if (e < 0) throw PreconditionError("negative exponent in a generator");
    }
    std::sort(generators.begin(), generators.end());
    generators.erase(std::unique(generators.begin(), generators.end()), generators.end());
    for (std::size_t i = 0; i < generators.size(); ++i) {
        bool redundant = false;
        for (std::size_t j = 0; j < generators.size() && !redundant; ++j)
            redundant = j != i && divides(generators[j], generators[i]);
        if (!redundant) gens_.push_back(generators[i]);
    }
}

bool MonomialIdeal::contains(const std::vector<long> &u) const
{
    for (const auto &g : gens_)
        if (divides(g, u)) return true;
    return false;
}

MonomialIdeal ideal_sum(const MonomialIdeal &a, const MonomialIdeal &b)
{
    if (a.n() != b.n()) throw PreconditionError("ideals in different rings");
    auto gens = a.generators();
    gens.insert(gens.end(), b.generators().begin(), b.generators().end());
    return MonomialIdeal(a.n(), gens);
}

MonomialIdeal ideal_intersection(const MonomialIdeal &a, const MonomialIdeal &b)
{
    if (a.n() != b.n()) throw PreconditionError("ideals in different rings");
    std::vector<std::vector<long>> gens;
    for (const auto &g : a.generators())
        for (const auto &h : b.generators()) gens.push_back(lcm(g, h));
    return MonomialIdeal(a.n(), gens);
}

// ---- Z[Q^d] ----

GroupRingElement GroupRingElement::monomial(const RationalVector &g, const Integer &c)
{
    GroupRingElement out;
    out.add_term(g, c);
    return out;
}

Integer GroupRingElement::coefficient(const RationalVector &g) const
{
    auto it = terms_.find(g);
    return it == terms_.end() ? Integer(0) : it->second;
}

void GroupRingElement::add_term(const RationalVector &g, const Integer &c)
{
    if (c == 0) return;
    auto [it, fresh] = terms_.emplace(g, c);
    if (fresh) return;
    it->second += c;
    if (it->second == 0) terms_.erase(it);
}

GroupRingElement GroupRingElement::operator+(const GroupRingElement &o) const
{
    GroupRingElement out = *this;
    for (const auto &[g, c] : o.terms_) out.add_term(g, c);
    return out;
}

GroupRingElement GroupRingElement::operator-(const GroupRingElement &o) const
{
    GroupRingElement out = *this;
    for (const auto &[g, c] : o.terms_) out.add_term(g, Integer(-c));
    return out;
}

GroupRingElement GroupRingElement::operator*(const GroupRingElement &o) const
{
    GroupRingElement out;
    for (const auto &[g, a] : terms_)
        for (const auto &[h, b] : o.terms_) out.add_term(g + h, Integer(a * b));
    return out;
}

std::string GroupRingElement::str() const
{
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto &[g, c] : terms_) {
        Integer mag = abs(c);
        if (out.empty()) out += c < 0 ? "-" : "";
        else out += c < 0 ? " - " : " + ";
        if (g.is_zero()) {
            out += mag.get_str();
            continue;
        }
        if (mag != 1) out += mag.get_str() + " ";
        out += "z^" + g.str();
    }
    return out;
}

// ---- numerators ----

FineNumerator numerator_inclusion_exclusion(const MonomialIdeal &ideal)
{
    const auto &gens = ideal.generators();
    if (gens.size() > 20) throw PreconditionError("inclusion-exclusion is limited to 20 generators");
    FineNumerator k;
    std::function<void(std::size_t, const std::vector<long> &, bool)> rec = [&](std::size_t i, const std::vector<long> &l,
                                                                                bool odd) {
        if (i == gens.size()) {
            add_fine(k, l, odd ? Integer(-1) : Integer(1));
            return;
        }
        rec(i + 1, l, odd);
        rec(i + 1, lcm(l, gens[i]), !odd);
    };
    rec(0, std::vector<long>(ideal.n(), 0), false);
    return k;
}

FineNumerator numerator_recursive(const MonomialIdeal &ideal)
{
    // K(I' + (m)) = K(I') - x^m K(I' : m).
    const auto &gens = ideal.generators();
    FineNumerator k;
    if (gens.empty()) {
        k.emplace(std::vector<long>(ideal.n(), 0), Integer(1));
        return k;
    }
    std::vector<long> m = gens.back();
    std::vector<std::vector<long>> rest(gens.begin(), gens.end() - 1), colon;
    for (const auto &g : rest) {
        std::vector<long> q(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) q[i] = std::max(g[i] - m[i], 0L);
        colon.push_back(q);
    }
    k = numerator_recursive(MonomialIdeal(ideal.n(), rest));
    for (const auto &[u, c] : numerator_recursive(MonomialIdeal(ideal.n(), colon))) {
        std::vector<long> shifted(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) shifted[i] = u[i] + m[i];
        add_fine(k, shifted, Integer(-c));
    }
    return k;
}

namespace {

FineNumerator fine_numerator(const MonomialIdeal &ideal)
{
    return ideal.generators().size() <= 20 ? numerator_inclusion_exclusion(ideal) : numerator_recursive(ideal);
}

GroupRingElement push(const GradedRingSpec &spec, const FineNumerator &k)
{
    GroupRingElement out;
    for (const auto &[u, c] : k) out.add_term(spec.degree(u), c);
    return out;
}

/// Exact division by (1 - x_i); throws if it does not divide.
FineNumerator divide_one_minus(const FineNumerator &k, std::size_t i)
{
    // Group by the other exponents; q_e = sum_{j <= e} k_j.
    std::map<std::vector<long>, std::map<long, Integer>> fibres;
    for (const auto &[u, c] : k) {
        std::vector<long> rest = u;
        rest[i] = 0;
        fibres[rest][u[i]] += c;
    }
    FineNumerator out;
    for (const auto &[rest, poly] : fibres) {
        Integer acc = 0;
        long top = poly.rbegin()->first;
        for (long e = 0; e <= top; ++e) {
            auto it = poly.find(e);
            if (it != poly.end()) acc += it->second;
            if (e == top) {
                if (acc != 0) throw PreconditionError("numerator not divisible by 1 - x_" + std::to_string(i + 1));
                break;
            }
            std::vector<long> u = rest;
            u[i] = e;
            add_fine(out, u, acc);
        }
    }
    return out;
}

} // namespace

GroupRingElement hilbert_numerator(const GradedRingSpec &spec, const MonomialIdeal &ideal)
{
    if (spec.n() != ideal.n()) throw PreconditionError("ideal and grading have different numbers of variables");
    return push(spec, fine_numerator(ideal));
}

// ---- modestness ----

ModestResult modest_check(const GradedRingSpec &spec, const MonomialIdeal &ideal, long bound)
{
    if (spec.n() != ideal.n()) throw PreconditionError("ideal and grading have different numbers of variables");
    ModestResult out;
    std::size_t n = spec.n();
    if (n > 20) return out;
    out.status = ModestResult::Status::modest;
    std::vector<std::uint32_t> supports;
    for (const auto &g : ideal.generators()) {
        std::uint32_t s = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (g[i] > 0) s |= 1u << i;
        if (s == 0) return out; // unit ideal: the zero ring
        supports.push_back(s);
    }
    auto standard = [&](std::uint32_t face) {
        for (auto s : supports)
            if ((s & ~face) == 0) return false;
        return true;
    };
    // Infinitely many standard monomials in one degree means a standard
    // face whose columns admit a nonnegative dependency, and conversely.
    std::uint32_t all = n == 0 ? 0 : static_cast<std::uint32_t>((std::uint64_t(1) << n) - 1);
    for (std::uint64_t f = 0; f <= all; ++f) {
        auto face = static_cast<std::uint32_t>(f);
        if (!standard(face)) continue;
        bool maximal = true;
        for (std::size_t i = 0; i < n && maximal; ++i)
            if (!(face >> i & 1) && standard(face | 1u << i)) maximal = false;
        if (!maximal) continue;

        std::vector<std::size_t> idx;
        std::vector<RationalVector> cols;
        for (std::size_t i = 0; i < n; ++i)
            if (face >> i & 1) {
                idx.push_back(i);
                cols.push_back(spec.columns[i]);
            }
        std::vector<long> u(n, 0);
        bool found = false;
        for (std::size_t j = 0; j < idx.size() && !found; ++j)
            if (cols[j].is_zero()) {
                u[idx[j]] = 1;
                found = true;
            }
        if (!found && !cols.empty()) {
            if (auto dep = nonnegative_dependency(spec.d, cols)) {
                for (std::size_t j = 0; j < idx.size(); ++j) u[idx[j]] = to_long((*dep)[j]);
                found = true;
            }
        }
        if (!found) continue;
        if (!spec.degree(u).is_zero()) throw Error("dependency does not have degree 0");
        std::vector<long> power(n);
        for (long k = 1; k <= bound; ++k) {
            for (std::size_t i = 0; i < n; ++i) power[i] = k * u[i];
            if (ideal.contains(power)) throw Error("witness power lies in the ideal");
        }
        out.status = ModestResult::Status::not_modest;
        out.witness = u;
        out.face = idx;
        return out;
    }
    return out;
}

// ---- series ----

HilbertSeriesForm hilbert_series(const GradedRingSpec &spec, const MonomialIdeal &ideal)
{
    ModestResult m = modest_check(spec, ideal);
    if (m.status == ModestResult::Status::not_modest) throw PreconditionError("grading is not modest on this quotient");
    FineNumerator k = fine_numerator(ideal);
    HilbertSeriesForm form;
    for (std::size_t i = 0; i < spec.n(); ++i) {
        if (spec.columns[i].is_zero()) k = divide_one_minus(k, i);
        else form.denominator.push_back(spec.columns[i]);
    }
    form.numerator = push(spec, k);
    form.group = spec.group();
    return form;
}

Integer hilbert_function(const GradedRingSpec &spec, const MonomialIdeal &ideal, const RationalVector &t, long bound)
{
    if (spec.n() != ideal.n()) throw PreconditionError("ideal and grading have different numbers of variables");
    if (t.dim() != spec.d) throw PreconditionError("degree has the wrong dimension");
    std::size_t n = spec.n();
    std::vector<RationalVector> nonzero;
    std::vector<long> caps(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (spec.columns[i].is_zero()) caps[i] = nilpotency_bound(ideal, i);
        else nonzero.push_back(spec.columns[i]);
    }
    PointednessCertificate cert = is_pointed(spec.d, nonzero);
    Integer count = 0;
    if (cert.pointed()) {
        const RationalVector &h = *cert.functional;
        std::vector<Rational> w(n);
        for (std::size_t i = 0; i < n; ++i) w[i] = h.dot(spec.columns[i]);
        walk_standard(ideal, w, caps, h.dot(t), [&](const std::vector<long> &u) {
            if (spec.degree(u) == t) ++count;
        });
        return count;
    }
    if (bound < 0) throw PreconditionError("negative enumeration bound");
    for (std::size_t i = 0; i < n; ++i)
        if (caps[i] < 0) caps[i] = bound;
    walk_standard(ideal, std::vector<Rational>(n), caps, Rational(0), [&](const std::vector<long> &u) {
        if (spec.degree(u) != t) return;
        for (std::size_t i = 0; i < n; ++i)
            if (u[i] == bound && !spec.columns[i].is_zero())
                throw PreconditionError("enumeration bound reached without a pointedness certificate");
        ++count;
    });
    return count;
}

Integer TruncatedSeries::count(const RationalVector &t) const
{
    auto it = counts.find(t);
    return it == counts.end() ? Integer(0) : it->second;
}

TruncatedSeries expand_truncated(const HilbertSeriesForm &form, const RationalVector &h, const Rational &bound)
{
    for (const auto &v : form.denominator) {
        if (v.dim() != h.dim()) throw PreconditionError("functional has the wrong dimension");
        if (h.dot(v) < 1) throw PreconditionError("functional does not separate " + v.str());
    }
    std::map<RationalVector, Integer> s;
    for (const auto &[g, c] : form.numerator.terms())
        if (h.dot(g) <= bound) s[g] += c;
    for (const auto &v : form.denominator) {
        Rational step = h.dot(v);
        std::map<RationalVector, Integer> next;
        for (const auto &[g, c] : s) {
            RationalVector at = g;
            for (Rational weight = h.dot(g); weight <= bound; weight += step) {
                next[at] += c;
                at += v;
            }
        }
        s = std::move(next);
    }
    TruncatedSeries out{h, bound, {}};
    for (auto &[g, c] : s)
        if (c != 0) out.counts.emplace(g, c);
    return out;
}

TruncatedSeries enumerate_standard(const GradedRingSpec &spec, const MonomialIdeal &ideal, const RationalVector &h,
                                   const Rational &bound)
{
    if (spec.n() != ideal.n()) throw PreconditionError("ideal and grading have different numbers of variables");
    if (h.dim() != spec.d) throw PreconditionError("functional has the wrong dimension");
    std::size_t n = spec.n();
    std::vector<Rational> w(n);
    std::vector<long> caps(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (spec.columns[i].is_zero()) {
            caps[i] = nilpotency_bound(ideal, i);
            continue;
        }
        w[i] = h.dot(spec.columns[i]);
        if (w[i] < 1) throw PreconditionError("functional does not separate " + spec.columns[i].str());
    }
    TruncatedSeries out{h, bound, {}};
    walk_standard(ideal, w, caps, bound, [&](const std::vector<long> &u) { out.counts[spec.degree(u)] += 1; });
    return out;
}

CheckReport verify_summable(const GradedRingSpec &spec, const MonomialIdeal &ideal, const HilbertSeriesForm &form,
                            const RationalVector &h, const Rational &bound)
{
    TruncatedSeries t = enumerate_standard(spec, ideal, h, bound);
    Rational shell = 0;
    for (const auto &v : form.denominator) shell = std::max(shell, Rational(h.dot(v)));
    Rational inner = bound - shell;

    std::map<RationalVector, Integer> prod = t.counts;
    for (const auto &v : form.denominator) {
        std::map<RationalVector, Integer> next = prod;
        for (const auto &[g, c] : prod) {
            RationalVector up = g + v;
            if (h.dot(up) <= bound) next[up] -= c;
        }
        prod = std::move(next);
    }
    std::map<RationalVector, std::pair<Integer, Integer>> compare;
    for (const auto &[g, c] : prod)
        if (h.dot(g) <= inner) compare[g].first = c;
    for (const auto &[g, c] : form.numerator.terms())
        if (h.dot(g) <= inner) compare[g].second = c;

    CheckReport report;
    for (const auto &[g, pair] : compare) {
        ++report.trials;
        if (pair.first != pair.second)
            report.record({{g}, "series times denominator gives " + pair.first.get_str() + ", numerator has " + pair.second.get_str()});
    }
    return report;
}

CheckReport verify_summable(const GradedRingSpec &spec, const MonomialIdeal &ideal, const RationalVector &h, const Rational &bound)
{
    return verify_summable(spec, ideal, hilbert_series(spec, ideal), h, bound);
}

CheckReport units_annihilate(const RationalVector &g_unit, const SubgroupBasis &g, long bound)
{
    if (g_unit.dim() != g.ambient_dim() || !g.contains(g_unit))
        throw PreconditionError(g_unit.str() + " is not in the window subgroup");
    // HF = 1 on every degree of the window.
    std::map<RationalVector, Integer> hf;
    for (const auto &t : lattice_box(g.basis(), bound, g.ambient_dim())) hf.emplace(t, 1);
    CheckReport report;
    for (const auto &[t, value] : hf) {
        auto prev = hf.find(t - g_unit);
        if (prev == hf.end()) continue;
        ++report.trials;
        Integer conv = value - prev->second;
        if (conv != 0) report.record({{t}, "convolution is " + conv.get_str()});
    }
    return report;
}

} // namespace qgrade
