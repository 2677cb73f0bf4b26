#pragma once

// Exact scalars and vectors over Z and Q, backed by GMP.

#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace qgrade {

using Integer = mpz_class;
using Rational = mpq_class;

/// Base class for every error raised by the kernel.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violates an operation's precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Parses "p/q", "p" or "-p/q". Throws PreconditionError on malformed text
/// or a zero denominator. The result is canonicalized.
Rational parse_rational(std::string_view text);

/// Always "p/q" with q > 0 (so 2 prints as "2/1").
std::string to_string(const Rational &q);
std::string to_string(const Integer &z);

Rational make_rational(long num, long den = 1);

bool is_integer(const Rational &q);

/// Lossless narrowing; throws PreconditionError if out of range.
long to_long(const Integer &z);

Integer gcd(const Integer &a, const Integer &b);
Integer lcm(const Integer &a, const Integer &b);

/// Extended gcd: returns g = gcd(a,b) >= 0 and sets s,t with s*a + t*b = g.
Integer ext_gcd(const Integer &a, const Integer &b, Integer &s, Integer &t);

/// A point of Q^d with canonical entries.
class RationalVector {
public:
    RationalVector() = default;
    explicit RationalVector(std::size_t dim) : entries_(dim) {}
    explicit RationalVector(std::vector<Rational> entries) : entries_(std::move(entries)) {}
    RationalVector(std::initializer_list<Rational> entries) : entries_(entries) {}

    /// Convenience for tests and literals: integer entries.
    static RationalVector from_ints(std::initializer_list<long> values);
    static RationalVector zero(std::size_t dim) { return RationalVector(dim); }
    static RationalVector unit(std::size_t dim, std::size_t axis);

    std::size_t dim() const { return entries_.size(); }
    const Rational &operator[](std::size_t i) const { return entries_[i]; }
    Rational &operator[](std::size_t i) { return entries_[i]; }
    const std::vector<Rational> &entries() const { return entries_; }

    bool is_zero() const;
    /// True when every entry is an integer.
    bool is_integral() const;
    /// LCM of the entry denominators (1 for the empty vector).
    Integer common_denominator() const;

    RationalVector &operator+=(const RationalVector &o);
    RationalVector &operator-=(const RationalVector &o);
    RationalVector &operator*=(const Rational &s);

    friend RationalVector operator+(RationalVector a, const RationalVector &b) { return a += b; }
    friend RationalVector operator-(RationalVector a, const RationalVector &b) { return a -= b; }
    friend RationalVector operator*(const Rational &s, RationalVector a) { return a *= s; }
    friend RationalVector operator-(RationalVector a)
    {
        for (auto &e : a.entries_) e = -e;
        return a;
    }

    friend bool operator==(const RationalVector &a, const RationalVector &b) { return a.entries_ == b.entries_; }
    friend bool operator!=(const RationalVector &a, const RationalVector &b) { return !(a == b); }
    /// Lexicographic; dimension compared first.
    friend bool operator<(const RationalVector &a, const RationalVector &b);

    Rational dot(const RationalVector &o) const;

    std::string str() const;

private:
    std::vector<Rational> entries_;
};

std::ostream &operator<<(std::ostream &os, const RationalVector &v);

/// Dense row-major matrix of rationals.
class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    static RationalMatrix identity(std::size_t n);
    static RationalMatrix from_rows(const std::vector<RationalVector> &rows, std::size_t cols);
    static RationalMatrix from_columns(const std::vector<RationalVector> &cols, std::size_t rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const Rational &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    Rational &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

    RationalVector apply(const RationalVector &v) const;
    RationalVector row(std::size_t r) const;
    RationalVector column(std::size_t c) const;
    RationalMatrix transpose() const;
    std::size_t rank() const;

    friend bool operator==(const RationalMatrix &a, const RationalMatrix &b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend RationalMatrix operator*(const RationalMatrix &a, const RationalMatrix &b);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

/// Seeded generator shared by randomized checks and test corpora.
/// Uniform draws avoid std distributions so streams are identical across
/// standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    std::uint64_t next() { return engine_(); }
    /// Uniform in [lo, hi].
    long uniform(long lo, long hi);
    bool coin() { return (engine_() >> 63) != 0; }
    template <typename T>
    const T &pick(const std::vector<T> &items)
    {
        return items[static_cast<std::size_t>(uniform(0, static_cast<long>(items.size()) - 1))];
    }

private:
    std::mt19937_64 engine_;
};

} // namespace qgrade
