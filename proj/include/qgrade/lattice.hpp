#pragma once

// Finitely generated subgroups and sub-semigroups of Q^d: normal forms,
// filtrations, quotients and pointedness certificates.

#include <memory>
#include <optional>
#include <vector>

#include "qgrade/rational.hpp"

namespace qgrade {

/// Dense row-major integer matrix.
class IntegerMatrix {
public:
    IntegerMatrix() = default;
    IntegerMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    IntegerMatrix(std::size_t rows, std::size_t cols, std::initializer_list<long> entries);
    static IntegerMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const Integer &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    Integer &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

    IntegerMatrix transpose() const;
    /// Determinant by fraction-free elimination; square matrices only.
    Integer determinant() const;
    /// Exact inverse of a unimodular matrix; throws if |det| != 1.
    IntegerMatrix unimodular_inverse() const;

    friend bool operator==(const IntegerMatrix &a, const IntegerMatrix &b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend IntegerMatrix operator*(const IntegerMatrix &a, const IntegerMatrix &b);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Integer> data_;
};

std::ostream &operator<<(std::ostream &os, const IntegerMatrix &m);

struct HnfResult {
    IntegerMatrix h; ///< column-style Hermite normal form
    IntegerMatrix u; ///< unimodular with h = m * u
};

/// Column-style Hermite normal form. Pivots are positive, the pivot column
/// index strictly increases with the pivot row, entries to the right of a
/// pivot vanish and entries to its left lie in [0, pivot).
HnfResult hnf(const IntegerMatrix &m);

struct SnfResult {
    IntegerMatrix d; ///< diagonal, d_i | d_{i+1}, nonnegative
    IntegerMatrix u; ///< unimodular (rows x rows)
    IntegerMatrix v; ///< unimodular (cols x cols), d = u * m * v
};

SnfResult snf(const IntegerMatrix &m);

/// Solves coordinates against a fixed list of Q-independent vectors.
class LatticeCoordinates {
public:
    LatticeCoordinates() = default;
    LatticeCoordinates(std::size_t ambient_dim, std::vector<RationalVector> vectors);

    /// Rational coefficients a with sum a_i v_i = g, if g lies in the Q-span.
    std::optional<std::vector<Rational>> rational(const RationalVector &g) const;
    /// Integer coefficients, if g lies in the Z-span.
    std::optional<std::vector<Integer>> integral(const RationalVector &g) const;

    const std::vector<RationalVector> &vectors() const { return vectors_; }
    RationalVector combine(const std::vector<Integer> &coeffs) const;

private:
    std::size_t dim_ = 0;
    std::vector<RationalVector> vectors_;
    RationalMatrix left_inverse_; // r x d with left_inverse_ * V = I
};

/// Canonical Z-basis of a finitely generated subgroup of Q^d.
class SubgroupBasis {
public:
    SubgroupBasis() = default;
    /// The zero subgroup of Q^d.
    explicit SubgroupBasis(std::size_t ambient_dim);

    /// Z^d with the standard basis.
    static SubgroupBasis standard(std::size_t ambient_dim);

    std::size_t ambient_dim() const { return dim_; }
    std::size_t rank() const { return basis_.size(); }
    const std::vector<RationalVector> &basis() const { return basis_; }

    bool contains(const RationalVector &g) const;
    std::optional<std::vector<Integer>> coordinates(const RationalVector &g) const;
    RationalVector combine(const std::vector<Integer> &coeffs) const { return coords_->combine(coeffs); }
    bool is_subgroup_of(const SubgroupBasis &other) const;
    /// r * G as a subgroup.
    SubgroupBasis scaled(const Rational &r) const;

    friend bool operator==(const SubgroupBasis &a, const SubgroupBasis &b)
    {
        return a.dim_ == b.dim_ && a.basis_ == b.basis_;
    }
    friend bool operator!=(const SubgroupBasis &a, const SubgroupBasis &b) { return !(a == b); }

private:
    friend SubgroupBasis subgroup_basis(std::size_t, const std::vector<RationalVector> &);
    SubgroupBasis(std::size_t ambient_dim, std::vector<RationalVector> canonical_basis);

    std::size_t dim_ = 0;
    std::vector<RationalVector> basis_;
    std::shared_ptr<const LatticeCoordinates> coords_;
};

/// Canonical basis of the subgroup generated by `generators`. An empty
/// list gives the zero subgroup.
SubgroupBasis subgroup_basis(std::size_t ambient_dim, const std::vector<RationalVector> &generators);

/// All points sum a_i b_i with |a_i| <= bound, in lexicographic coefficient
/// order.
std::vector<RationalVector> lattice_box(const std::vector<RationalVector> &basis, long bound, std::size_t ambient_dim);

struct FiltrationStep {
    std::vector<RationalVector> e_basis; ///< basis of the smaller group
    RationalVector f;
    Integer n; ///< e_basis.back() == n * f
};

struct FiltrationResult {
    SubgroupBasis next;
    FiltrationStep step;
};

/// One step current -> current + Z a of a filtration by free groups of full
/// rank: returns a basis e_1..e_d of current and f with e_d = n f such that
/// the next group is spanned by e_1..e_{d-1}, f.
FiltrationResult filtration_step(const SubgroupBasis &current, const RationalVector &a);

struct QuotientResult {
    std::vector<RationalVector> reps;   ///< one representative per coset
    std::vector<Integer> cyclic_factors; ///< invariant factors > 1
};

/// Transversal of outer / inner for a finite-index inclusion of equal rank.
QuotientResult lattice_quotient(const SubgroupBasis &outer, const SubgroupBasis &inner);

/// Transversal of G / rG computed from the Smith form of the inclusion.
QuotientResult quotient_by_scaling(const SubgroupBasis &g, const Integer &r);

struct PointednessCertificate {
    enum class Verdict { pointed, not_pointed };
    Verdict verdict = Verdict::pointed;
    /// pointed: h with h.a >= 1 for every nonzero generator a.
    std::optional<RationalVector> functional;
    /// not_pointed: nonzero w with w and -w in the semigroup.
    std::optional<RationalVector> witness;
    /// not_pointed: nonnegative integer coefficients of w and of -w.
    std::vector<Integer> witness_combination;
    std::vector<Integer> negation_combination;

    bool pointed() const { return verdict == Verdict::pointed; }
    /// Re-checks the certificate against the generators exactly.
    bool verify(const std::vector<RationalVector> &generators) const;
};

/// Decides whether the semigroup generated by `generators` is pointed.
/// Zero generators are ignored.
PointednessCertificate is_pointed(std::size_t ambient_dim, const std::vector<RationalVector> &generators);

/// Nonzero nonnegative integer vector u with sum u_i a_i = 0, if any.
std::optional<std::vector<Integer>> nonnegative_dependency(std::size_t ambient_dim,
                                                           const std::vector<RationalVector> &generators);

/// Basis of the unit subgroup N cap -N of the generated semigroup N.
SubgroupBasis support_units(std::size_t ambient_dim, const std::vector<RationalVector> &generators);

/// Surjection Q^d -> Q^c whose kernel is the Q-span of `units`.
RationalMatrix projection_mod(const SubgroupBasis &units, std::size_t ambient_dim);

} // namespace qgrade
