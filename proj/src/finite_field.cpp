#include "qgrade/finite_field.hpp"

#include <map>
#include <mutex>

namespace qgrade {

bool is_prime(std::uint64_t n)
{
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

bool prime_power(std::uint32_t q, std::uint32_t &p, std::uint32_t &k)
{
    if (q < 2) return false;
    std::uint32_t d = 2;
    while (q % d != 0) ++d;
    p = d;
    k = 0;
    while (q % d == 0) {
        q /= d;
        ++k;
    }
    return q == 1;
}

namespace {

using Digits = std::vector<std::uint32_t>;

Digits decode(std::uint32_t a, std::uint32_t p, std::uint32_t k)
{
    Digits out(k);
    for (std::uint32_t i = 0; i < k; ++i) {
        out[i] = a % p;
        a /= p;
    }
    return out;
}

std::uint32_t encode(const Digits &d, std::uint32_t p)
{
    std::uint32_t a = 0;
    for (std::size_t i = d.size(); i-- > 0;) a = a * p + d[i];
    return a;
}

// Remainder of a polynomial (low digit first) modulo a monic polynomial.
Digits poly_mod(Digits a, const Digits &m, std::uint32_t p)
{
    const std::size_t deg = m.size() - 1;
    for (std::size_t i = a.size(); i-- > deg;) {
        std::uint32_t c = a[i] % p;
        if (c == 0) continue;
        for (std::size_t j = 0; j <= deg; ++j) {
            std::uint32_t sub = static_cast<std::uint32_t>((static_cast<std::uint64_t>(c) * m[j]) % p);
            a[i - deg + j] = (a[i - deg + j] + p - sub) % p;
        }
    }
    a.resize(std::min(a.size(), deg));
    return a;
}

bool is_irreducible(const Digits &f, std::uint32_t p)
{
    const std::size_t deg = f.size() - 1;
    // Any factorization has a monic factor of degree <= deg/2.
    for (std::size_t dd = 1; dd <= deg / 2; ++dd) {
        std::uint32_t count = 1;
        for (std::size_t i = 0; i < dd; ++i) count *= p;
        for (std::uint32_t code = 0; code < count; ++code) {
            Digits g = decode(code, p, static_cast<std::uint32_t>(dd));
            g.push_back(1);
            Digits r = poly_mod(f, g, p);
            bool zero = true;
            for (auto x : r) zero = zero && x == 0;
            if (zero) return false;
        }
    }
    return true;
}

} // namespace

FiniteField::FiniteField(std::uint32_t q) : q_(q)
{
    if (q > max_order || !prime_power(q, p_, k_))
        throw PreconditionError("field order " + std::to_string(q) + " is not a prime power <= 2^16");
    if (k_ > 1) {
        std::uint32_t count = q_;
        for (std::uint32_t code = 0; code < count; ++code) {
            Digits f = decode(code, p_, k_);
            f.push_back(1);
            if (f[0] != 0 && is_irreducible(f, p_)) {
                modulus_ = f;
                break;
            }
        }
    }
    // Smallest element of multiplicative order q - 1.
    std::vector<std::uint32_t> prime_factors;
    std::uint32_t m = q_ - 1;
    for (std::uint32_t d = 2; d * d <= m; ++d)
        if (m % d == 0) {
            prime_factors.push_back(d);
            while (m % d == 0) m /= d;
        }
    if (m > 1) prime_factors.push_back(m);
    auto slow_pow = [&](std::uint32_t a, std::uint32_t e) {
        std::uint32_t r = 1;
        while (e) {
            if (e & 1) r = slow_mul(r, a);
            a = slow_mul(a, a);
            e >>= 1;
        }
        return r;
    };
    for (std::uint32_t g = 1; g < q_; ++g) {
        bool primitive = true;
        for (auto r : prime_factors)
            if (slow_pow(g, (q_ - 1) / r) == 1) primitive = false;
        if (primitive) {
            gen_ = g;
            break;
        }
    }
    exp_.resize(q_ - 1);
    log_.assign(q_, 0);
    std::uint32_t x = 1;
    for (std::uint32_t e = 0; e + 1 < q_; ++e) {
        exp_[e] = x;
        log_[x] = e;
        x = slow_mul(x, gen_);
    }
}

std::uint32_t FiniteField::slow_mul(std::uint32_t a, std::uint32_t b) const
{
    if (k_ == 1) return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) % p_);
    Digits da = decode(a, p_, k_), db = decode(b, p_, k_);
    Digits prod(2 * k_ - 1, 0);
    for (std::uint32_t i = 0; i < k_; ++i)
        for (std::uint32_t j = 0; j < k_; ++j)
            prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + static_cast<std::uint64_t>(da[i]) * db[j]) % p_);
    return encode(poly_mod(prod, modulus_, p_), p_);
}

std::shared_ptr<const FiniteField> FiniteField::get(std::uint32_t q)
{
    static std::mutex mutex;
    static std::map<std::uint32_t, std::shared_ptr<const FiniteField>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(q);
    if (it != cache.end()) return it->second;
    auto field = std::make_shared<const FiniteField>(q);
    cache.emplace(q, field);
    return field;
}

std::uint32_t FiniteField::add(std::uint32_t a, std::uint32_t b) const
{
    if (k_ == 1) return (a + b) % p_;
    std::uint32_t out = 0, place = 1;
    for (std::uint32_t i = 0; i < k_; ++i) {
        out += ((a % p_ + b % p_) % p_) * place;
        a /= p_;
        b /= p_;
        place *= p_;
    }
    return out;
}

std::uint32_t FiniteField::neg(std::uint32_t a) const
{
    if (k_ == 1) return a == 0 ? 0 : p_ - a;
    std::uint32_t out = 0, place = 1;
    for (std::uint32_t i = 0; i < k_; ++i) {
        out += ((p_ - a % p_) % p_) * place;
        a /= p_;
        place *= p_;
    }
    return out;
}

std::uint32_t FiniteField::sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }

std::uint32_t FiniteField::mul(std::uint32_t a, std::uint32_t b) const
{
    if (a == 0 || b == 0) return 0;
    return exp_[(log_[a] + log_[b]) % (q_ - 1)];
}

std::uint32_t FiniteField::inv(std::uint32_t a) const
{
    if (a == 0) throw PreconditionError("division by zero in GF(" + std::to_string(q_) + ")");
    return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

std::uint32_t FiniteField::pow(std::uint32_t a, long e) const
{
    if (a == 0) {
        if (e < 0) throw PreconditionError("negative power of zero");
        return e == 0 ? 1 : 0;
    }
    long m = static_cast<long>(q_) - 1;
    long r = (static_cast<long>(log_[a]) * (e % m)) % m;
    if (r < 0) r += m;
    return exp_[static_cast<std::size_t>(r)];
}

std::uint32_t FiniteField::from_integer(const Integer &z) const
{
    Integer r;
    mpz_fdiv_r_ui(r.get_mpz_t(), z.get_mpz_t(), p_);
    return static_cast<std::uint32_t>(r.get_ui());
}

std::uint32_t FiniteField::log(std::uint32_t a) const
{
    if (a == 0 || a >= q_) throw PreconditionError("discrete log of zero or out-of-range element");
    return log_[a];
}

} // namespace qgrade
