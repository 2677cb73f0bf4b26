#pragma once

// The Noetherian Q^d-graded field R(k,d): level rings
//   R_i = K_i[t_{1,i}^{+-1}, ..., t_{d,i}^{+-1}],  deg t_{j,i} = e_j / N_i,
//   N_i = p_1 ... p_i,  K_i = k(a[j,i'] : i' <= i),
// glued by t_{j,i} -> a[j,i+1]^-1 t_{j,i+1}^{p_{i+1}}, and the limit cocycle
// relative to the basis x_g = prod_j t_{j,i(g)}^{N_{i(g)} g_j}.

#include <map>
#include <memory>
#include <vector>

#include "qgrade/cocycle.hpp"

namespace qgrade {

class PrimeSchedule {
public:
    /// Anti-diagonal enumeration 2 | 3 2 | 5 3 2 | 7 5 3 2 | ...
    static PrimeSchedule diagonal();
    static PrimeSchedule constant(long p);

    bool is_diagonal() const { return p_ == 0; }
    long constant_prime() const { return p_; }

    /// p_i for i >= 1.
    long prime(std::size_t i) const;
    /// N_i = p_1 ... p_i, N_0 = 1.
    Integer modulus(std::size_t i) const;
    std::string str() const;

    friend bool operator==(const PrimeSchedule &a, const PrimeSchedule &b) { return a.p_ == b.p_; }

private:
    struct Cache;
    explicit PrimeSchedule(long p);
    long p_ = 0;
    std::shared_ptr<Cache> cache_;
};

std::vector<long> prime_seq(const PrimeSchedule &s, std::size_t n);

/// Graded: t_{j,i} -> a^-1 t^{p_{i+1}}. Literal: exponent p_i, which breaks
/// degree preservation and exists only to show that.
enum class LiftConvention { graded, literal };

/// Laurent polynomial in t_{1,i}..t_{d,i} over K_i.
class LevelElement {
public:
    using Terms = std::map<std::vector<long>, FieldElement>;

    LevelElement() = default;
    LevelElement(std::size_t level, std::size_t d, FieldPtr field) : level_(level), d_(d), field_(std::move(field)) {}
    static LevelElement monomial(std::size_t level, const FieldElement &coeff, std::vector<long> exps);

    std::size_t level() const { return level_; }
    std::size_t d() const { return d_; }
    const FieldPtr &field() const { return field_; }
    const Terms &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    LevelElement operator+(const LevelElement &o) const;
    LevelElement operator*(const LevelElement &o) const;
    LevelElement scaled(const FieldElement &s) const;

    friend bool operator==(const LevelElement &a, const LevelElement &b)
    {
        return a.level_ == b.level_ && a.d_ == b.d_ && a.terms_ == b.terms_;
    }

    /// "a[1,2]^-1 * t[1,2]^4"; sums joined by " + ".
    std::string str() const;

private:
    void check_same(const LevelElement &o) const;
    void add_term(const std::vector<long> &e, const FieldElement &c);

    std::size_t level_ = 1;
    std::size_t d_ = 1;
    FieldPtr field_;
    Terms terms_;
};

struct CanonicalBasis {
    RationalVector g;
    std::size_t level = 1;
    std::vector<long> exponents; ///< N_{level} g
};

class Rkd {
public:
    /// Elements of level up to max_level are representable; the limit
    /// cocycle takes values in K_{max_level}.
    Rkd(std::size_t d, PrimeSchedule schedule, FieldPtr base, std::size_t max_level = 6,
        LiftConvention convention = LiftConvention::graded);

    std::size_t d() const { return d_; }
    const PrimeSchedule &schedule() const { return schedule_; }
    const FieldPtr &base() const { return base_; }
    std::size_t max_level() const { return max_level_; }
    LiftConvention convention() const { return convention_; }

    /// K_i, i <= max_level.
    const FieldPtr &level_field(std::size_t i) const;

    /// Minimal i >= 1 with N_i g integral. Throws when g is inadmissible.
    std::size_t level_of(const RationalVector &g) const;
    bool admissible(const RationalVector &g) const;
    CanonicalBasis canonical_basis(const RationalVector &g) const;
    LevelElement basis_element(const RationalVector &g) const;

    LevelElement phi_lift(const LevelElement &a) const;
    LevelElement lift_to(LevelElement a, std::size_t level) const;
    /// Degree of the t-monomial with these exponents at `level`.
    RationalVector degree(std::size_t level, const std::vector<long> &exps) const;

    /// Closed form of c(g,h) = x_g x_h / x_{g+h} after lifting to a common level.
    FieldElement limit_value(const RationalVector &g, const RationalVector &h) const;
    Cocycle limit_cocycle() const;

    /// {a / N_level : |a_j| <= bound}^d.
    std::vector<RationalVector> window(long bound, std::size_t level) const;

private:
    std::size_t d_;
    PrimeSchedule schedule_;
    FieldPtr base_;
    std::size_t max_level_;
    LiftConvention convention_;
    std::vector<FieldPtr> fields_; // fields_[i-1] = K_i
};

/// Passes when m is not a p-th power in its Laurent monomial group.
CheckReport verify_monomial_irreducible(const LaurentMonomial &m, long p);
/// T^{p_{i+1}} - a[j,i+1] t_{j,i} has no root: a[j,i+1] t_{j,i} is not a
/// p_{i+1}-th power among Laurent monomials of level i+1.
CheckReport verify_level_irreducible(const Rkd &r, std::size_t i, std::size_t j);

/// The limit cocycle restricted to a lattice of admissible degrees.
Cocycle restrict_to_subgroup(const Cocycle &c, const SubgroupBasis &g);

} // namespace qgrade
