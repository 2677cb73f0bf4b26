#pragma once

// Hilbert functions and series of monomial quotients k[x_1..x_n]/I graded
// by deg x_i = a_i in Q^d.

#include <map>
#include <optional>
#include <vector>

#include "qgrade/cocycle.hpp"
#include "qgrade/lattice.hpp"

namespace qgrade {

struct GradedRingSpec {
    std::size_t d = 1;
    std::vector<RationalVector> columns; ///< deg x_i
    bool allow_zero = false;

    GradedRingSpec() = default;
    /// Throws on dimension mismatch, or on a zero column unless allowed.
    GradedRingSpec(std::size_t d, std::vector<RationalVector> columns, bool allow_zero = false);

    std::size_t n() const { return columns.size(); }
    RationalVector degree(const std::vector<long> &u) const;
    /// The subgroup generated by the column degrees.
    SubgroupBasis group() const;
};

class MonomialIdeal {
public:
    MonomialIdeal() = default;
    /// Minimalizes and sorts the generators; all must have length n.
    MonomialIdeal(std::size_t n, std::vector<std::vector<long>> generators);

    std::size_t n() const { return n_; }
    const std::vector<std::vector<long>> &generators() const { return gens_; }
    bool contains(const std::vector<long> &u) const;

    friend bool operator==(const MonomialIdeal &a, const MonomialIdeal &b) { return a.n_ == b.n_ && a.gens_ == b.gens_; }

private:
    std::size_t n_ = 0;
    std::vector<std::vector<long>> gens_;
};

MonomialIdeal ideal_sum(const MonomialIdeal &a, const MonomialIdeal &b);
MonomialIdeal ideal_intersection(const MonomialIdeal &a, const MonomialIdeal &b);

/// Element of Z[Q^d] with exact rational exponents.
class GroupRingElement {
public:
    using Terms = std::map<RationalVector, Integer>;

    GroupRingElement() = default;
    static GroupRingElement monomial(const RationalVector &g, const Integer &c = 1);

    const Terms &terms() const { return terms_; }
    Integer coefficient(const RationalVector &g) const;
    bool is_zero() const { return terms_.empty(); }
    void add_term(const RationalVector &g, const Integer &c);

    GroupRingElement operator+(const GroupRingElement &o) const;
    GroupRingElement operator-(const GroupRingElement &o) const;
    GroupRingElement operator*(const GroupRingElement &o) const;

    friend bool operator==(const GroupRingElement &a, const GroupRingElement &b) { return a.terms_ == b.terms_; }

    /// "1 - 2 z^(2) + z^(3)".
    std::string str() const;

private:
    Terms terms_;
};

/// Numerator over N^n, keyed by exponent vectors.
using FineNumerator = std::map<std::vector<long>, Integer>;

FineNumerator numerator_inclusion_exclusion(const MonomialIdeal &ideal);
FineNumerator numerator_recursive(const MonomialIdeal &ideal);

struct ModestResult {
    enum class Status { modest, not_modest, undetermined };
    Status status = Status::undetermined;
    std::optional<std::vector<long>> witness; ///< degree-0 monomial whose powers are all standard
    std::optional<std::vector<std::size_t>> face; ///< the standard face carrying the witness
};

/// Exact for n <= 20 via the maximal standard faces; `bound` is how many
/// powers of a witness are re-checked against the ideal.
ModestResult modest_check(const GradedRingSpec &spec, const MonomialIdeal &ideal, long bound = 20);

/// K(z) = sum over subsets S of the generators of (-1)^|S| z^deg(lcm S).
GroupRingElement hilbert_numerator(const GradedRingSpec &spec, const MonomialIdeal &ideal);

struct HilbertSeriesForm {
    GroupRingElement numerator;
    std::vector<RationalVector> denominator; ///< factors (1 - z^v)
    SubgroupBasis group;                     ///< HF vanishes outside it
};

/// HS(z) prod (1 - z^{a_i}) = K(z) over the nonzero columns; zero-degree
/// (necessarily nilpotent) variables are divided out of the fine numerator.
HilbertSeriesForm hilbert_series(const GradedRingSpec &spec, const MonomialIdeal &ideal);

/// Number of standard monomials of degree t. Exact when the columns are
/// pointed; otherwise exponents are searched up to `bound` and a standard
/// solution touching the bound is an error.
Integer hilbert_function(const GradedRingSpec &spec, const MonomialIdeal &ideal, const RationalVector &t, long bound = 64);

struct TruncatedSeries {
    RationalVector h;
    Rational bound;
    std::map<RationalVector, Integer> counts; ///< nonzero values with h.t <= bound

    Integer count(const RationalVector &t) const;
};

/// The form expanded as a power series, keeping degrees with h.t <= B;
/// requires h.v >= 1 on every denominator factor.
TruncatedSeries expand_truncated(const HilbertSeriesForm &form, const RationalVector &h, const Rational &bound);

/// Standard-monomial counts with h.t <= B by direct enumeration.
TruncatedSeries enumerate_standard(const GradedRingSpec &spec, const MonomialIdeal &ideal, const RationalVector &h,
                                   const Rational &bound);

/// Enumerated counts times prod (1 - z^v) agree with the numerator on
/// h.t <= B - max h.v.
CheckReport verify_summable(const GradedRingSpec &spec, const MonomialIdeal &ideal, const HilbertSeriesForm &form,
                            const RationalVector &h, const Rational &bound);
CheckReport verify_summable(const GradedRingSpec &spec, const MonomialIdeal &ideal, const RationalVector &h, const Rational &bound);

/// HF = 1 on the box |a_i| <= B of G: (1 - z^g) HF vanishes wherever both
/// t and t - g lie in the box.
CheckReport units_annihilate(const RationalVector &g_unit, const SubgroupBasis &g, long bound);

} // namespace qgrade
