#include "qgrade/lattice.hpp"

#include <algorithm>
#include <sstream>

#include "qgrade/exact_lp.hpp"

namespace qgrade {

// ---------------------------------------------------------------------------
// IntegerMatrix

IntegerMatrix::IntegerMatrix(std::size_t rows, std::size_t cols, std::initializer_list<long> entries)
    : IntegerMatrix(rows, cols)
{
    if (entries.size() != rows * cols) throw PreconditionError("entry count does not match matrix shape");
    std::size_t i = 0;
    for (long e : entries) data_[i++] = e;
}

IntegerMatrix IntegerMatrix::identity(std::size_t n)
{
    IntegerMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntegerMatrix IntegerMatrix::transpose() const
{
    IntegerMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

Integer IntegerMatrix::determinant() const
{
    if (rows_ != cols_) throw PreconditionError("determinant of a non-square matrix");
    const std::size_t n = rows_;
    if (n == 0) return 1;
    // Bareiss fraction-free elimination.
    IntegerMatrix a = *this;
    Integer sign = 1;
    Integer prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && a(p, k) == 0) ++p;
            if (p == n) return 0;
            for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(p, c));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Integer num = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                mpz_divexact(a(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
            a(i, k) = 0;
        }
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

IntegerMatrix IntegerMatrix::unimodular_inverse() const
{
    if (rows_ != cols_) throw PreconditionError("inverse of a non-square matrix");
    const std::size_t n = rows_;
    RationalMatrix a(n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) a(r, c) = Rational((*this)(r, c));
        a(r, n + r) = 1;
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a(p, c) == 0) ++p;
        if (p == n) throw PreconditionError("matrix is singular");
        if (p != c)
            for (std::size_t k = 0; k < 2 * n; ++k) std::swap(a(p, k), a(c, k));
        Rational piv = a(c, c);
        for (std::size_t k = 0; k < 2 * n; ++k) a(c, k) /= piv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a(r, c) == 0) continue;
            Rational f = a(r, c);
            for (std::size_t k = 0; k < 2 * n; ++k) a(r, k) -= f * a(c, k);
        }
    }
    IntegerMatrix inv(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            const Rational &x = a(r, n + c);
            if (!is_integer(x)) throw PreconditionError("matrix is not unimodular");
            inv(r, c) = x.get_num();
        }
    return inv;
}

IntegerMatrix operator*(const IntegerMatrix &a, const IntegerMatrix &b)
{
    if (a.cols() != b.rows()) throw PreconditionError("matrix product dimension mismatch");
    IntegerMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k) == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += a(i, k) * b(k, j);
        }
    return out;
}

std::ostream &operator<<(std::ostream &os, const IntegerMatrix &m)
{
    os << '[';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (r) os << ',';
        os << '[';
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) os << ',';
            os << m(r, c);
        }
        os << ']';
    }
    return os << ']';
}

// ---------------------------------------------------------------------------
// Normal forms

namespace {

// Replaces columns (i, j) by (s Ci + t Cj, -b/g Ci + a/g Cj) where a, b are
// the entries in `row`; the transform has determinant 1.
void column_gcd_step(IntegerMatrix &h, IntegerMatrix &u, std::size_t row, std::size_t i, std::size_t j)
{
    Integer a = h(row, i), b = h(row, j), s, t;
    // Plain elimination when a | b: the pivot stays put. The gcd combination
    // may swap instead (a = -b), and row/column passes in snf then cycle.
    if (a != 0 && mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t())) {
        Integer q = b / a;
        for (IntegerMatrix *m : {&h, &u})
            for (std::size_t r = 0; r < m->rows(); ++r) (*m)(r, j) -= q * (*m)(r, i);
        return;
    }
    Integer g = ext_gcd(a, b, s, t);
    Integer a_g = a / g, b_g = b / g;
    for (IntegerMatrix *m : {&h, &u}) {
        for (std::size_t r = 0; r < m->rows(); ++r) {
            Integer ci = (*m)(r, i), cj = (*m)(r, j);
            (*m)(r, i) = s * ci + t * cj;
            (*m)(r, j) = a_g * cj - b_g * ci;
        }
    }
}

void row_gcd_step(IntegerMatrix &d, IntegerMatrix &u, std::size_t col, std::size_t i, std::size_t j)
{
    Integer a = d(i, col), b = d(j, col), s, t;
    if (a != 0 && mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t())) {
        Integer q = b / a;
        for (IntegerMatrix *m : {&d, &u})
            for (std::size_t c = 0; c < m->cols(); ++c) (*m)(j, c) -= q * (*m)(i, c);
        return;
    }
    Integer g = ext_gcd(a, b, s, t);
    Integer a_g = a / g, b_g = b / g;
    for (IntegerMatrix *m : {&d, &u}) {
        for (std::size_t c = 0; c < m->cols(); ++c) {
            Integer ri = (*m)(i, c), rj = (*m)(j, c);
            (*m)(i, c) = s * ri + t * rj;
            (*m)(j, c) = a_g * rj - b_g * ri;
        }
    }
}

void swap_columns(IntegerMatrix &m, std::size_t i, std::size_t j)
{
    for (std::size_t r = 0; r < m.rows(); ++r) std::swap(m(r, i), m(r, j));
}

void swap_rows(IntegerMatrix &m, std::size_t i, std::size_t j)
{
    for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(i, c), m(j, c));
}

} // namespace

HnfResult hnf(const IntegerMatrix &m)
{
    IntegerMatrix h = m;
    IntegerMatrix u = IntegerMatrix::identity(m.cols());
    std::size_t col = 0;
    for (std::size_t row = 0; row < h.rows() && col < h.cols(); ++row) {
        for (std::size_t k = col + 1; k < h.cols(); ++k) {
            if (h(row, k) != 0) column_gcd_step(h, u, row, col, k);
        }
        if (h(row, col) == 0) continue;
        if (h(row, col) < 0) {
            for (std::size_t r = 0; r < h.rows(); ++r) h(r, col) = -h(r, col);
            for (std::size_t r = 0; r < u.rows(); ++r) u(r, col) = -u(r, col);
        }
        const Integer piv = h(row, col);
        for (std::size_t j = 0; j < col; ++j) {
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), h(row, j).get_mpz_t(), piv.get_mpz_t());
            if (q == 0) continue;
            for (std::size_t r = 0; r < h.rows(); ++r) h(r, j) -= q * h(r, col);
            for (std::size_t r = 0; r < u.rows(); ++r) u(r, j) -= q * u(r, col);
        }
        ++col;
    }
    return {std::move(h), std::move(u)};
}

SnfResult snf(const IntegerMatrix &m)
{
    IntegerMatrix d = m;
    IntegerMatrix u = IntegerMatrix::identity(m.rows());
    IntegerMatrix v = IntegerMatrix::identity(m.cols());
    const std::size_t diag = std::min(m.rows(), m.cols());
    for (std::size_t t = 0; t < diag; ++t) {
        for (;;) {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            std::size_t pr = d.rows(), pc = d.cols();
            for (std::size_t r = t; r < d.rows(); ++r)
                for (std::size_t c = t; c < d.cols(); ++c)
                    if (d(r, c) != 0 && (pr == d.rows() || abs(d(r, c)) < abs(d(pr, pc)))) {
                        pr = r;
                        pc = c;
                    }
            if (pr == d.rows()) return {std::move(d), std::move(u), std::move(v)};
            if (pr != t) {
                swap_rows(d, pr, t);
                swap_rows(u, pr, t);
            }
            if (pc != t) {
                swap_columns(d, pc, t);
                swap_columns(v, pc, t);
            }
            bool clean;
            do {
                for (std::size_t r = t + 1; r < d.rows(); ++r)
                    if (d(r, t) != 0) row_gcd_step(d, u, t, t, r);
                for (std::size_t c = t + 1; c < d.cols(); ++c)
                    if (d(t, c) != 0) column_gcd_step(d, v, t, t, c);
                clean = true;
                for (std::size_t r = t + 1; r < d.rows(); ++r)
                    if (d(r, t) != 0) clean = false;
            } while (!clean);
            // The pivot must divide the whole trailing block.
            std::size_t bad = d.rows();
            for (std::size_t r = t + 1; r < d.rows() && bad == d.rows(); ++r)
                for (std::size_t c = t + 1; c < d.cols(); ++c)
                    if (!mpz_divisible_p(d(r, c).get_mpz_t(), d(t, t).get_mpz_t())) {
                        bad = r;
                        break;
                    }
            if (bad == d.rows()) break;
            for (std::size_t c = 0; c < d.cols(); ++c) d(t, c) += d(bad, c);
            for (std::size_t c = 0; c < u.cols(); ++c) u(t, c) += u(bad, c);
        }
        if (d(t, t) < 0) {
            for (std::size_t c = 0; c < d.cols(); ++c) d(t, c) = -d(t, c);
            for (std::size_t c = 0; c < u.cols(); ++c) u(t, c) = -u(t, c);
        }
    }
    return {std::move(d), std::move(u), std::move(v)};
}

// ---------------------------------------------------------------------------
// Coordinates and subgroups

LatticeCoordinates::LatticeCoordinates(std::size_t ambient_dim, std::vector<RationalVector> vectors)
    : dim_(ambient_dim), vectors_(std::move(vectors))
{
    const std::size_t r = vectors_.size();
    for (const auto &v : vectors_)
        if (v.dim() != dim_) throw PreconditionError("vector dimension does not match ambient dimension");
    RationalMatrix vm = RationalMatrix::from_columns(vectors_, dim_);
    RationalMatrix gram = vm.transpose() * vm;
    // Gauss-Jordan on [gram | V^T].
    RationalMatrix aug(r, r + dim_);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) aug(i, j) = gram(i, j);
        for (std::size_t j = 0; j < dim_; ++j) aug(i, r + j) = vm(j, i);
    }
    for (std::size_t c = 0; c < r; ++c) {
        std::size_t p = c;
        while (p < r && aug(p, c) == 0) ++p;
        if (p == r) throw PreconditionError("vectors are not linearly independent");
        if (p != c)
            for (std::size_t k = 0; k < aug.cols(); ++k) std::swap(aug(p, k), aug(c, k));
        Rational piv = aug(c, c);
        for (std::size_t k = 0; k < aug.cols(); ++k) aug(c, k) /= piv;
        for (std::size_t i = 0; i < r; ++i) {
            if (i == c || aug(i, c) == 0) continue;
            Rational f = aug(i, c);
            for (std::size_t k = 0; k < aug.cols(); ++k) aug(i, k) -= f * aug(c, k);
        }
    }
    left_inverse_ = RationalMatrix(r, dim_);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < dim_; ++j) left_inverse_(i, j) = aug(i, r + j);
}

std::optional<std::vector<Rational>> LatticeCoordinates::rational(const RationalVector &g) const
{
    if (g.dim() != dim_) throw PreconditionError("vector dimension does not match ambient dimension");
    std::vector<Rational> a(vectors_.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        Rational s = 0;
        for (std::size_t j = 0; j < dim_; ++j)
            if (sgn(left_inverse_(i, j)) != 0 && sgn(g[j]) != 0) s += left_inverse_(i, j) * g[j];
        a[i] = s;
    }
    // Bases are usually sparse; skipping zeros is most of the cost here.
    for (std::size_t j = 0; j < dim_; ++j) {
        Rational s = 0;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (sgn(a[i]) != 0 && sgn(vectors_[i][j]) != 0) s += a[i] * vectors_[i][j];
        if (s != g[j]) return std::nullopt;
    }
    return a;
}

std::optional<std::vector<Integer>> LatticeCoordinates::integral(const RationalVector &g) const
{
    auto a = rational(g);
    if (!a) return std::nullopt;
    std::vector<Integer> out(a->size());
    for (std::size_t i = 0; i < a->size(); ++i) {
        if (!is_integer((*a)[i])) return std::nullopt;
        out[i] = (*a)[i].get_num();
    }
    return out;
}

RationalVector LatticeCoordinates::combine(const std::vector<Integer> &coeffs) const
{
    if (coeffs.size() != vectors_.size()) throw PreconditionError("coefficient count does not match basis size");
    RationalVector out(dim_);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] == 0) continue;
        for (std::size_t j = 0; j < dim_; ++j) out[j] += Rational(coeffs[i]) * vectors_[i][j];
    }
    return out;
}

SubgroupBasis::SubgroupBasis(std::size_t ambient_dim)
    : dim_(ambient_dim), coords_(std::make_shared<LatticeCoordinates>(ambient_dim, std::vector<RationalVector>{}))
{
}

SubgroupBasis::SubgroupBasis(std::size_t ambient_dim, std::vector<RationalVector> canonical_basis)
    : dim_(ambient_dim), basis_(std::move(canonical_basis)),
      coords_(std::make_shared<LatticeCoordinates>(ambient_dim, basis_))
{
}

SubgroupBasis SubgroupBasis::standard(std::size_t ambient_dim)
{
    std::vector<RationalVector> gens;
    for (std::size_t i = 0; i < ambient_dim; ++i) gens.push_back(RationalVector::unit(ambient_dim, i));
    return subgroup_basis(ambient_dim, gens);
}

bool SubgroupBasis::contains(const RationalVector &g) const { return coordinates(g).has_value(); }

std::optional<std::vector<Integer>> SubgroupBasis::coordinates(const RationalVector &g) const
{
    return coords_->integral(g);
}

bool SubgroupBasis::is_subgroup_of(const SubgroupBasis &other) const
{
    if (other.dim_ != dim_) return false;
    return std::all_of(basis_.begin(), basis_.end(), [&](const RationalVector &b) { return other.contains(b); });
}

SubgroupBasis SubgroupBasis::scaled(const Rational &r) const
{
    if (r == 0) throw PreconditionError("scaling a subgroup by zero");
    std::vector<RationalVector> gens;
    for (const auto &b : basis_) gens.push_back(r * b);
    return subgroup_basis(dim_, gens);
}

SubgroupBasis subgroup_basis(std::size_t ambient_dim, const std::vector<RationalVector> &generators)
{
    Integer scale = 1;
    for (const auto &g : generators) {
        if (g.dim() != ambient_dim) throw PreconditionError("generator dimension does not match ambient dimension");
        scale = lcm(scale, g.common_denominator());
    }
    IntegerMatrix m(ambient_dim, generators.size());
    for (std::size_t c = 0; c < generators.size(); ++c)
        for (std::size_t r = 0; r < ambient_dim; ++r) {
            Rational x = generators[c][r] * scale;
            m(r, c) = x.get_num();
        }
    IntegerMatrix h = hnf(m).h;
    std::vector<RationalVector> basis;
    for (std::size_t c = 0; c < h.cols(); ++c) {
        RationalVector v(ambient_dim);
        bool nonzero = false;
        for (std::size_t r = 0; r < ambient_dim; ++r) {
            v[r] = Rational(h(r, c), scale);
            v[r].canonicalize();
            nonzero = nonzero || h(r, c) != 0;
        }
        if (!nonzero) break;
        basis.push_back(std::move(v));
    }
    return SubgroupBasis(ambient_dim, std::move(basis));
}

std::vector<RationalVector> lattice_box(const std::vector<RationalVector> &basis, long bound, std::size_t ambient_dim)
{
    if (bound < 0) throw PreconditionError("negative box bound");
    std::vector<RationalVector> out;
    std::vector<long> a(basis.size(), -bound);
    for (;;) {
        RationalVector v(ambient_dim);
        for (std::size_t i = 0; i < basis.size(); ++i)
            if (a[i] != 0) v += Rational(a[i]) * basis[i];
        out.push_back(std::move(v));
        std::size_t k = basis.size();
        while (k > 0) {
            --k;
            if (a[k] < bound) {
                ++a[k];
                break;
            }
            a[k] = -bound;
            if (k == 0) return out;
        }
        if (basis.empty()) return out;
    }
}

// ---------------------------------------------------------------------------
// Filtrations and quotients

FiltrationResult filtration_step(const SubgroupBasis &current, const RationalVector &a)
{
    const std::size_t d = current.ambient_dim();
    if (current.rank() != d || d == 0) throw PreconditionError("filtration step needs a subgroup of full rank");
    if (a.dim() != d) throw PreconditionError("vector dimension does not match ambient dimension");

    LatticeCoordinates coords(d, current.basis());
    std::vector<Rational> q = *coords.rational(a);
    Integer den = 1;
    for (const auto &x : q) den = lcm(den, x.get_den());
    if (den == 1) {
        FiltrationStep step{current.basis(), current.basis().back(), Integer(1)};
        return {current, std::move(step)};
    }

    std::vector<Integer> v(d);
    Integer content = 0;
    for (std::size_t i = 0; i < d; ++i) {
        Rational x = q[i] * den;
        v[i] = x.get_num();
        content = gcd(content, v[i]);
    }
    IntegerMatrix row(1, d);
    for (std::size_t i = 0; i < d; ++i) row(0, i) = v[i] / content;

    // Unimodular completion: the first row of u^{-1} is the primitive vector,
    // so the columns of (u^{-1})^T form a basis starting with it.
    IntegerMatrix completion = hnf(row).u.unimodular_inverse().transpose();
    std::vector<RationalVector> e_basis;
    for (std::size_t k = 1; k <= d; ++k) {
        std::size_t col = k % d; // primitive vector last
        std::vector<Integer> c(d);
        for (std::size_t l = 0; l < d; ++l) c[l] = completion(l, col);
        e_basis.push_back(current.combine(c));
    }
    Rational inv_den(1);
    inv_den /= den;
    RationalVector f = inv_den * e_basis.back();
    std::vector<RationalVector> gens = current.basis();
    gens.push_back(a);
    FiltrationStep step{std::move(e_basis), std::move(f), den};
    return {subgroup_basis(d, gens), std::move(step)};
}

QuotientResult lattice_quotient(const SubgroupBasis &outer, const SubgroupBasis &inner)
{
    const std::size_t r = outer.rank();
    if (inner.rank() != r || !inner.is_subgroup_of(outer))
        throw PreconditionError("quotient needs a finite-index subgroup of equal rank");
    IntegerMatrix a(r, r);
    for (std::size_t c = 0; c < r; ++c) {
        auto x = *outer.coordinates(inner.basis()[c]);
        for (std::size_t i = 0; i < r; ++i) a(i, c) = x[i];
    }
    SnfResult s = snf(a);
    IntegerMatrix u_inv = s.u.unimodular_inverse();
    QuotientResult out;
    std::vector<Integer> diag(r);
    for (std::size_t i = 0; i < r; ++i) {
        diag[i] = s.d(i, i);
        if (diag[i] == 0) throw PreconditionError("subgroup has infinite index");
        if (diag[i] > 1) out.cyclic_factors.push_back(diag[i]);
    }
    std::vector<Integer> y(r, Integer(0));
    for (;;) {
        std::vector<Integer> x(r, Integer(0));
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) x[i] += u_inv(i, j) * y[j];
        out.reps.push_back(outer.combine(x));
        std::size_t k = r;
        bool done = true;
        while (k > 0) {
            --k;
            if (y[k] + 1 < diag[k]) {
                ++y[k];
                done = false;
                break;
            }
            y[k] = 0;
        }
        if (done) break;
    }
    return out;
}

QuotientResult quotient_by_scaling(const SubgroupBasis &g, const Integer &r)
{
    if (r <= 0) throw PreconditionError("scaling factor must be a positive integer");
    return lattice_quotient(g, g.scaled(Rational(r)));
}

// ---------------------------------------------------------------------------
// Semigroups

namespace {

std::vector<std::size_t> nonzero_indices(const std::vector<RationalVector> &gens)
{
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < gens.size(); ++i)
        if (!gens[i].is_zero()) idx.push_back(i);
    return idx;
}

// lambda >= 0 with sum lambda_i a_i = target (over the selected generators).
std::optional<std::vector<Rational>> cone_combination(std::size_t d, const std::vector<RationalVector> &gens,
                                                      const std::vector<std::size_t> &idx,
                                                      const RationalVector &target, bool normalize)
{
    RationalMatrix m(d + (normalize ? 1 : 0), idx.size());
    RationalVector b(m.rows());
    for (std::size_t k = 0; k < idx.size(); ++k) {
        for (std::size_t r = 0; r < d; ++r) m(r, k) = gens[idx[k]][r];
        if (normalize) m(d, k) = 1;
    }
    for (std::size_t r = 0; r < d; ++r) b[r] = target[r];
    if (normalize) b[d] = 1;
    return find_nonnegative_solution(m, b);
}

} // namespace

std::optional<std::vector<Integer>> nonnegative_dependency(std::size_t ambient_dim,
                                                           const std::vector<RationalVector> &generators)
{
    for (const auto &g : generators)
        if (g.dim() != ambient_dim) throw PreconditionError("generator dimension does not match ambient dimension");
    std::vector<Integer> u(generators.size(), Integer(0));
    // A zero generator is itself a dependency.
    for (std::size_t i = 0; i < generators.size(); ++i)
        if (generators[i].is_zero()) {
            u[i] = 1;
            return u;
        }
    std::vector<std::size_t> idx = nonzero_indices(generators);
    if (idx.empty()) return std::nullopt;
    auto lambda = cone_combination(ambient_dim, generators, idx, RationalVector(ambient_dim), true);
    if (!lambda) return std::nullopt;
    Integer scale = 1;
    for (const auto &x : *lambda) scale = lcm(scale, x.get_den());
    for (std::size_t k = 0; k < idx.size(); ++k) u[idx[k]] = Rational((*lambda)[k] * scale).get_num();
    return u;
}

PointednessCertificate is_pointed(std::size_t ambient_dim, const std::vector<RationalVector> &generators)
{
    for (const auto &g : generators)
        if (g.dim() != ambient_dim) throw PreconditionError("generator dimension does not match ambient dimension");
    std::vector<std::size_t> idx = nonzero_indices(generators);
    PointednessCertificate cert;
    if (idx.empty()) {
        cert.functional = RationalVector(ambient_dim);
        return cert;
    }

    if (auto lambda = cone_combination(ambient_dim, generators, idx, RationalVector(ambient_dim), true)) {
        Integer scale = 1;
        for (const auto &x : *lambda) scale = lcm(scale, x.get_den());
        std::vector<Integer> u(generators.size(), Integer(0));
        for (std::size_t k = 0; k < idx.size(); ++k) u[idx[k]] = Rational((*lambda)[k] * scale).get_num();
        std::size_t pick = *std::find_if(idx.begin(), idx.end(), [&](std::size_t i) { return u[i] > 0; });
        cert.verdict = PointednessCertificate::Verdict::not_pointed;
        cert.witness = generators[pick];
        cert.witness_combination.assign(generators.size(), Integer(0));
        cert.witness_combination[pick] = 1;
        cert.negation_combination = u;
        cert.negation_combination[pick] -= 1;
        return cert;
    }

    // Gordan: no dependency, so h.a_i >= 1 is feasible. Split h = h+ - h-
    // and add a surplus variable per generator.
    const std::size_t k = idx.size();
    RationalMatrix m(k, 2 * ambient_dim + k);
    RationalVector b(k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < ambient_dim; ++j) {
            m(i, j) = generators[idx[i]][j];
            m(i, ambient_dim + j) = -generators[idx[i]][j];
        }
        m(i, 2 * ambient_dim + i) = -1;
        b[i] = 1;
    }
    auto x = find_nonnegative_solution(m, b);
    if (!x) throw Error("separating functional LP infeasible for a pointed semigroup");
    RationalVector h(ambient_dim);
    for (std::size_t j = 0; j < ambient_dim; ++j) h[j] = (*x)[j] - (*x)[ambient_dim + j];
    cert.functional = std::move(h);
    return cert;
}

bool PointednessCertificate::verify(const std::vector<RationalVector> &generators) const
{
    if (pointed()) {
        if (!functional) return false;
        for (const auto &g : generators)
            if (!g.is_zero() && functional->dot(g) < 1) return false;
        return true;
    }
    if (!witness || witness->is_zero()) return false;
    if (witness_combination.size() != generators.size() || negation_combination.size() != generators.size())
        return false;
    RationalVector pos(witness->dim()), neg(witness->dim());
    for (std::size_t i = 0; i < generators.size(); ++i) {
        if (witness_combination[i] < 0 || negation_combination[i] < 0) return false;
        pos += Rational(witness_combination[i]) * generators[i];
        neg += Rational(negation_combination[i]) * generators[i];
    }
    return pos == *witness && neg == -*witness;
}

SubgroupBasis support_units(std::size_t ambient_dim, const std::vector<RationalVector> &generators)
{
    for (const auto &g : generators)
        if (g.dim() != ambient_dim) throw PreconditionError("generator dimension does not match ambient dimension");
    std::vector<std::size_t> idx = nonzero_indices(generators);
    std::vector<RationalVector> units;
    for (std::size_t i : idx) {
        if (cone_combination(ambient_dim, generators, idx, -generators[i], false)) units.push_back(generators[i]);
    }
    return subgroup_basis(ambient_dim, units);
}

RationalMatrix projection_mod(const SubgroupBasis &units, std::size_t ambient_dim)
{
    if (units.ambient_dim() != ambient_dim) throw PreconditionError("unit subgroup lives in another dimension");
    const std::size_t r = units.rank();
    RationalMatrix a = RationalMatrix::from_rows(units.basis(), ambient_dim);
    // Reduced row echelon form of the r x d matrix of unit rows.
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t c = 0; c < ambient_dim && row < r; ++c) {
        std::size_t p = row;
        while (p < r && a(p, c) == 0) ++p;
        if (p == r) continue;
        if (p != row)
            for (std::size_t k = 0; k < ambient_dim; ++k) std::swap(a(p, k), a(row, k));
        Rational piv = a(row, c);
        for (std::size_t k = 0; k < ambient_dim; ++k) a(row, k) /= piv;
        for (std::size_t i = 0; i < r; ++i) {
            if (i == row || a(i, c) == 0) continue;
            Rational f = a(i, c);
            for (std::size_t k = 0; k < ambient_dim; ++k) a(i, k) -= f * a(row, k);
        }
        pivots.push_back(c);
        ++row;
    }
    std::vector<RationalVector> kernel_rows;
    for (std::size_t free = 0; free < ambient_dim; ++free) {
        if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
        RationalVector y(ambient_dim);
        y[free] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) y[pivots[i]] = -a(i, free);
        // Primitive integer row with a positive leading entry.
        Integer den = y.common_denominator();
        y *= Rational(den);
        Integer g = 0;
        for (std::size_t k = 0; k < ambient_dim; ++k) g = gcd(g, y[k].get_num());
        y *= Rational(1) / Rational(g);
        auto lead = std::find_if(y.entries().begin(), y.entries().end(), [](const Rational &q) { return q != 0; });
        if (*lead < 0) y = -y;
        kernel_rows.push_back(std::move(y));
    }
    return RationalMatrix::from_rows(kernel_rows, ambient_dim);
}

} // namespace qgrade
