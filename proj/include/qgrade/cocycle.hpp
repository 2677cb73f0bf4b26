#pragma once

// Symmetric normalized 2-cocycles c: G x G -> k* and their classes.
// Multiplicative conventions throughout:
//   cocycle identity  c(g,h) c(f,g+h) = c(f+g,h) c(f,g)
//   coboundary        (d beta)(f,g) = beta(f) beta(g) / beta(f+g)

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "qgrade/coeff.hpp"
#include "qgrade/lattice.hpp"

namespace qgrade {

/// Where a cocycle is defined: a finitely generated lattice, or a named
/// admissible set (a subgroup of Q^d given by a membership test).
class Domain {
public:
    Domain() = default;
    static Domain lattice(SubgroupBasis g);
    static Domain admissible(std::size_t dim, std::string name, std::function<bool(const RationalVector &)> test);

    bool is_lattice() const { return !test_; }
    const SubgroupBasis &lattice() const;
    std::size_t dim() const { return dim_; }
    const std::string &name() const { return name_; }

    bool contains(const RationalVector &g) const;
    bool contains(const SubgroupBasis &h) const;

    friend bool operator==(const Domain &a, const Domain &b);

private:
    std::size_t dim_ = 0;
    SubgroupBasis lattice_;
    std::string name_;
    std::function<bool(const RationalVector &)> test_;
};

/// Evaluable rule behind a Cocycle. Subclasses implement value() without
/// domain checks; Cocycle::evaluate performs them.
class CocycleRule {
public:
    CocycleRule(Domain domain, FieldPtr field) : domain_(std::move(domain)), field_(std::move(field)) {}
    virtual ~CocycleRule() = default;

    virtual std::string kind() const = 0;
    virtual FieldElement value(const RationalVector &g, const RationalVector &h) const = 0;

    const Domain &domain() const { return domain_; }
    const FieldPtr &field() const { return field_; }

private:
    Domain domain_;
    FieldPtr field_;
};

class Cocycle {
public:
    Cocycle() = default;
    explicit Cocycle(std::shared_ptr<const CocycleRule> rule) : rule_(std::move(rule)) {}

    /// Throws PreconditionError when g or h is outside the domain.
    FieldElement evaluate(const RationalVector &g, const RationalVector &h) const;
    FieldElement operator()(const RationalVector &g, const RationalVector &h) const { return evaluate(g, h); }

    const Domain &domain() const { return rule_->domain(); }
    const FieldPtr &field() const { return rule_->field(); }
    std::string kind() const { return rule_->kind(); }
    const CocycleRule &rule() const { return *rule_; }

private:
    std::shared_ptr<const CocycleRule> rule_;
};

/// A 1-cochain beta: G -> k* with beta(0) = 1.
class Beta {
public:
    Beta() = default;
    Beta(SubgroupBasis domain, FieldPtr field, std::function<FieldElement(const RationalVector &)> fn);
    /// Values on the box sum a_i b_i, |a_i| <= bound, listed in lattice_box order.
    static Beta table(const std::vector<RationalVector> &basis, long bound, FieldPtr field, std::vector<FieldElement> values);

    FieldElement operator()(const RationalVector &g) const;
    const SubgroupBasis &domain() const { return domain_; }
    const FieldPtr &field() const { return field_; }

private:
    SubgroupBasis domain_;
    FieldPtr field_;
    std::function<FieldElement(const RationalVector &)> fn_;
};

struct Counterexample {
    std::vector<RationalVector> points;
    std::string detail;
};

struct CheckReport {
    static constexpr std::size_t max_recorded = 20;

    long trials = 0;
    long failure_count = 0;
    std::vector<Counterexample> failures; ///< first max_recorded failures
    bool pass() const { return failure_count == 0; }

    void record(Counterexample c);
};

/// Calls fn(i, j, k) for index triples into a window of size n: every triple
/// in lexicographic order when n^3 <= trials, else `trials` seeded random
/// triples. Returns the number of triples visited.
long for_each_triple(std::size_t n, long trials, std::uint64_t seed,
                     const std::function<void(std::size_t, std::size_t, std::size_t)> &fn);
/// Same for pairs (exhaustive when n^2 <= trials).
long for_each_pair(std::size_t n, long trials, std::uint64_t seed, const std::function<void(std::size_t, std::size_t)> &fn);

// ---- construction ----

Cocycle trivial_cocycle(const Domain &domain, FieldPtr field);
/// c(g,h) = lambda^(a(g)^T A a(h)) with a(.) the coordinates in `basis`.
/// A must be square, symmetric and match the basis size.
Cocycle bilinear_cocycle(const IntegerMatrix &a, const FieldElement &lambda, const std::vector<RationalVector> &basis);
/// Arbitrary rule, normalized by dividing by its value at (0,0).
Cocycle custom_cocycle(const Domain &domain, FieldPtr field, std::string name,
                       std::function<FieldElement(const RationalVector &, const RationalVector &)> fn);
Cocycle coboundary(const Beta &beta);
/// Values of c pushed through a specialization of its function-field
/// variables into `target`.
Cocycle specialize(const Cocycle &c, const FieldPtr &target, std::function<FieldElement(const Var &)> value);

// ---- class operations ----

Cocycle segre(const Cocycle &c1, const Cocycle &c2);
/// c^r pointwise; r != 0.
Cocycle veronese(const Cocycle &c, long r);
Cocycle inverse(const Cocycle &c);
Cocycle restrict(const Cocycle &c, const SubgroupBasis &h);
/// c'(pi g, pi h) = c(g, h) on pi(G); pi must be injective on the lattice G.
Cocycle pushforward(const Cocycle &c, const RationalMatrix &pi);
/// c'(g, h) = c(g / r, h / r) on r * domain, for a cocycle on a lattice.
Cocycle rescale(const Cocycle &c, const Integer &r);

/// Adjoins x_e with x_e^p = y * x_{pe} to k[G,c]; see extend_root().
Cocycle extend_root(const Cocycle &c, const RationalVector &e, long p, const FieldElement &y);

// ---- checks ----

CheckReport check_cocycle(const Cocycle &c, const std::vector<RationalVector> &window, long trials, std::uint64_t seed = 0);
CheckReport check_symmetric(const Cocycle &c, const std::vector<RationalVector> &window, long trials, std::uint64_t seed = 0);
/// Pointwise equality of two cocycles on sampled window pairs.
CheckReport check_equal(const Cocycle &a, const Cocycle &b, const std::vector<RationalVector> &window, long trials,
                        std::uint64_t seed = 0);
/// a(g,h) == b(g,h) * (d beta)(g,h) on every pair of the window whose sum is
/// in the domain of beta.
CheckReport check_differs_by(const Cocycle &a, const Cocycle &b, const Beta &beta, const std::vector<RationalVector> &window);

/// The box sum a_i b_i, |a_i| <= bound, over the lattice basis of the domain.
std::vector<RationalVector> window(const Cocycle &c, long bound);

// ---- trivialization ----

class TrivializationError : public Error {
public:
    TrivializationError(const std::string &what, Counterexample c) : Error(what), counterexample(std::move(c)) {}
    Counterexample counterexample;
};

/// beta with d beta = c on every f, g, f+g in the box |a_i| <= bound over
/// `basis`, built by declaring x'_g = prod x_{e_i}^{a_i}. Verified
/// exhaustively; TrivializationError otherwise.
Beta trivialize_on_lattice(const Cocycle &c, const std::vector<RationalVector> &basis, long bound);

using RootOracle = std::function<RootResult(const FieldElement &, long)>;

struct RootUnavailable {
    std::size_t step = 0;  ///< index into the filtration
    FieldElement element;  ///< the value whose n-th root was needed
    long n = 0;
    RootResult::Status status = RootResult::Status::none;
};

/// Extends a good basis along the filtration, taking n-th roots through the
/// oracle. On success beta trivializes c on the bound box of the final group.
std::variant<Beta, RootUnavailable> trivialize_via_roots(const Cocycle &c, const std::vector<FiltrationStep> &filtration,
                                                         long bound, const RootOracle &oracle = nth_root);

/// Discrete-log reduction to a linear system over Z/(q-1) on the bound box
/// over `basis`; c must take values in GF(q). Returns beta iff solvable.
std::optional<Beta> coboundary_solve_finite_field(const Cocycle &c, const std::vector<RationalVector> &basis, long bound);

struct DivideResult {
    Cocycle c_prime; ///< on the same lattice as c
    Beta beta;       ///< veronese(c_prime, r) = c * d beta
};

/// A class c' with r [c'] = [c], realized by extending c to (1/r) G through
/// root adjunctions with y = 1 and pulling back along g -> g / r. Verified
/// on the bound box; TrivializationError if the identity fails.
DivideResult divide_class(const Cocycle &c, long r, long bound);

} // namespace qgrade
