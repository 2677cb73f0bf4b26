#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "qgrade/rational.hpp"

namespace qgrade {

/// GF(q) for a prime power q <= 2^16. Elements are encoded as integers in
/// [0, q): the base-p digits are the coefficients of a polynomial residue
/// modulo a fixed irreducible polynomial (for prime q, the residue itself).
/// Multiplication goes through discrete-log tables over the smallest
/// primitive element.
class FiniteField {
public:
    static constexpr std::uint32_t max_order = 1u << 16;

    /// Shared instance for GF(q); throws PreconditionError unless q is a
    /// prime power in [2, 2^16].
    static std::shared_ptr<const FiniteField> get(std::uint32_t q);

    std::uint32_t order() const { return q_; }
    std::uint32_t characteristic() const { return p_; }
    std::uint32_t degree() const { return k_; }
    std::uint32_t generator() const { return gen_; }

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const;
    std::uint32_t neg(std::uint32_t a) const;
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
    std::uint32_t inv(std::uint32_t a) const;
    std::uint32_t pow(std::uint32_t a, long e) const;
    /// Image of an integer under Z -> GF(q).
    std::uint32_t from_integer(const Integer &z) const;

    /// Discrete logarithm to base generator(); a must be nonzero.
    std::uint32_t log(std::uint32_t a) const;
    /// generator()^e for e in [0, q-1).
    std::uint32_t exp(std::uint32_t e) const { return exp_[e]; }

    explicit FiniteField(std::uint32_t q);

private:
    std::uint32_t slow_mul(std::uint32_t a, std::uint32_t b) const;

    std::uint32_t q_ = 0, p_ = 0, k_ = 0, gen_ = 0;
    std::vector<std::uint32_t> modulus_; // monic irreducible, degree k, low digit first
    std::vector<std::uint32_t> log_;
    std::vector<std::uint32_t> exp_;
};

/// True when q is a prime power p^k; sets p and k.
bool prime_power(std::uint32_t q, std::uint32_t &p, std::uint32_t &k);

bool is_prime(std::uint64_t n);

} // namespace qgrade
