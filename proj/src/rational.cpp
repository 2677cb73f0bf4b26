#include "qgrade/rational.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <sstream>

namespace qgrade {

namespace {

bool valid_integer_text(std::string_view s)
{
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

Integer parse_integer(std::string_view s)
{
    if (s[0] == '+') s.remove_prefix(1);
    return Integer(std::string(s), 10);
}

} // namespace

Rational parse_rational(std::string_view text)
{
    auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!valid_integer_text(num) || !valid_integer_text(den) || den[0] == '-' || den[0] == '+') {
        throw PreconditionError("malformed rational: '" + std::string(text) + "'");
    }
    Integer d = parse_integer(den);
    if (d == 0) throw PreconditionError("zero denominator in '" + std::string(text) + "'");
    Rational q(parse_integer(num), d);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational &q)
{
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_string(const Integer &z) { return z.get_str(); }

Rational make_rational(long num, long den)
{
    if (den == 0) throw PreconditionError("zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

bool is_integer(const Rational &q) { return q.get_den() == 1; }

long to_long(const Integer &z)
{
    if (!z.fits_slong_p()) throw PreconditionError("integer " + z.get_str() + " exceeds machine range");
    return z.get_si();
}

Integer gcd(const Integer &a, const Integer &b)
{
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

Integer lcm(const Integer &a, const Integer &b)
{
    Integer l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

Integer ext_gcd(const Integer &a, const Integer &b, Integer &s, Integer &t)
{
    Integer g;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

RationalVector RationalVector::from_ints(std::initializer_list<long> values)
{
    RationalVector v(values.size());
    std::size_t i = 0;
    for (long x : values) v[i++] = x;
    return v;
}

RationalVector RationalVector::unit(std::size_t dim, std::size_t axis)
{
    RationalVector v(dim);
    v[axis] = 1;
    return v;
}

bool RationalVector::is_zero() const
{
    return std::all_of(entries_.begin(), entries_.end(), [](const Rational &q) { return q == 0; });
}

bool RationalVector::is_integral() const
{
    return std::all_of(entries_.begin(), entries_.end(), [](const Rational &q) { return is_integer(q); });
}

Integer RationalVector::common_denominator() const
{
    Integer l = 1;
    for (const auto &e : entries_) l = lcm(l, e.get_den());
    return l;
}

RationalVector &RationalVector::operator+=(const RationalVector &o)
{
    if (o.dim() != dim()) throw PreconditionError("dimension mismatch in vector addition");
    for (std::size_t i = 0; i < dim(); ++i) entries_[i] += o.entries_[i];
    return *this;
}

RationalVector &RationalVector::operator-=(const RationalVector &o)
{
    if (o.dim() != dim()) throw PreconditionError("dimension mismatch in vector subtraction");
    for (std::size_t i = 0; i < dim(); ++i) entries_[i] -= o.entries_[i];
    return *this;
}

RationalVector &RationalVector::operator*=(const Rational &s)
{
    for (auto &e : entries_) e *= s;
    return *this;
}

bool operator<(const RationalVector &a, const RationalVector &b)
{
    if (a.dim() != b.dim()) return a.dim() < b.dim();
    for (std::size_t i = 0; i < a.dim(); ++i) {
        int c = cmp(a[i], b[i]);
        if (c != 0) return c < 0;
    }
    return false;
}

Rational RationalVector::dot(const RationalVector &o) const
{
    if (o.dim() != dim()) throw PreconditionError("dimension mismatch in dot product");
    Rational s = 0;
    for (std::size_t i = 0; i < dim(); ++i) s += entries_[i] * o.entries_[i];
    return s;
}

std::string RationalVector::str() const
{
    std::ostringstream os;
    os << *this;
    return os.str();
}

std::ostream &operator<<(std::ostream &os, const RationalVector &v)
{
    os << '(';
    for (std::size_t i = 0; i < v.dim(); ++i) {
        if (i) os << ',';
        os << v[i];
    }
    return os << ')';
}

RationalMatrix RationalMatrix::identity(std::size_t n)
{
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

RationalMatrix RationalMatrix::from_rows(const std::vector<RationalVector> &rows, std::size_t cols)
{
    RationalMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].dim() != cols) throw PreconditionError("ragged matrix rows");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
    }
    return m;
}

RationalMatrix RationalMatrix::from_columns(const std::vector<RationalVector> &cols, std::size_t rows)
{
    RationalMatrix m(rows, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (cols[c].dim() != rows) throw PreconditionError("ragged matrix columns");
        for (std::size_t r = 0; r < rows; ++r) m(r, c) = cols[c][r];
    }
    return m;
}

RationalVector RationalMatrix::apply(const RationalVector &v) const
{
    if (v.dim() != cols_) throw PreconditionError("matrix-vector dimension mismatch");
    RationalVector out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        Rational s = 0;
        for (std::size_t c = 0; c < cols_; ++c) s += (*this)(r, c) * v[c];
        out[r] = s;
    }
    return out;
}

RationalVector RationalMatrix::row(std::size_t r) const
{
    RationalVector v(cols_);
    for (std::size_t c = 0; c < cols_; ++c) v[c] = (*this)(r, c);
    return v;
}

RationalVector RationalMatrix::column(std::size_t c) const
{
    RationalVector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
}

RationalMatrix RationalMatrix::transpose() const
{
    RationalMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

std::size_t RationalMatrix::rank() const
{
    RationalMatrix m = *this;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols_ && rank < rows_; ++c) {
        std::size_t piv = rank;
        while (piv < rows_ && m(piv, c) == 0) ++piv;
        if (piv == rows_) continue;
        for (std::size_t k = 0; k < cols_; ++k) std::swap(m(piv, k), m(rank, k));
        for (std::size_t r = rank + 1; r < rows_; ++r) {
            if (m(r, c) == 0) continue;
            Rational f = m(r, c) / m(rank, c);
            for (std::size_t k = c; k < cols_; ++k) m(r, k) -= f * m(rank, k);
        }
        ++rank;
    }
    return rank;
}

RationalMatrix operator*(const RationalMatrix &a, const RationalMatrix &b)
{
    if (a.cols() != b.rows()) throw PreconditionError("matrix product dimension mismatch");
    RationalMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k) == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += a(i, k) * b(k, j);
        }
    return out;
}

long Rng::uniform(long lo, long hi)
{
    if (hi < lo) throw PreconditionError("empty range in Rng::uniform");
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<long>(engine_());
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return lo + static_cast<long>(x % span);
}

} // namespace qgrade
