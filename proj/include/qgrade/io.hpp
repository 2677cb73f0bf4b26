#pragma once

// JSON encodings of kernel values. Rationals are "p/q" strings, vectors
// arrays, matrices row-major arrays of arrays. Every object parser rejects
// fields it does not know.

#include <optional>
#include <string>

#include <json.hpp>

#include "qgrade/hilbert.hpp"
#include "qgrade/rkd.hpp"
#include "qgrade/twisted.hpp"

namespace qgrade::io {

using json = nlohmann::json;

/// Malformed or unexpected input.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Throws ParseError if `obj` is not an object or has a key outside `allowed`.
void expect_fields(const json &obj, std::initializer_list<const char *> allowed, const std::string &where);

json to_json(const Rational &q);
json to_json(const Integer &z);
json to_json(const RationalVector &v);
json to_json(const IntegerMatrix &m);
json to_json(const std::vector<RationalVector> &vs);

Rational parse_rational_json(const json &j);
Integer parse_integer_json(const json &j);
RationalVector parse_vector(const json &j, std::optional<std::size_t> dim = std::nullopt);
std::vector<RationalVector> parse_vectors(const json &j, std::optional<std::size_t> dim = std::nullopt);
IntegerMatrix parse_integer_matrix(const json &j);

/// "Q", "GF(q)", or {"base": "Q"|"GF(q)", "vars": ["a[1,1]", ...]}.
json field_to_json(const FieldPtr &f);
FieldPtr parse_field(const json &j);

/// Constants are "p/q" over Q and residues over GF(q); function-field
/// elements are {"unit", "exps"} monomials or {"num", "den"} fractions of
/// polynomials written as [[coef, {var: exp}], ...].
json to_json(const FieldElement &x);
FieldElement parse_element(const json &j, const FieldPtr &f);

json to_json(const CheckReport &r);
CheckReport parse_report(const json &j);

/// {"terms": [{"deg": [...], "coef": <elt>}, ...]}
json to_json(const TwistedElement &a);
TwistedElement parse_twisted(const json &j, const ContextPtr &ctx);

json to_json(const GroupRingElement &k);
GroupRingElement parse_group_ring(const json &j);
json to_json(const HilbertSeriesForm &form);
HilbertSeriesForm parse_series(const json &j);

/// {"grading": d x n matrix (column i = deg x_i), "ideal": [[exps]], "allow_zero": bool}
struct HilbertInput {
    GradedRingSpec spec;
    MonomialIdeal ideal;
};
HilbertInput parse_hilbert(const json &j, std::initializer_list<const char *> extra = {});
json hilbert_to_json(const GradedRingSpec &spec, const MonomialIdeal &ideal);

/// {"type": "rkd", "d": 1, "char": 0, "schedule": "diagonal"|{"constant": p}, "max_level": 6}
Rkd parse_rkd(const json &j, std::initializer_list<const char *> extra = {});

/// A cocycle together with the R(k,d) it came from, if any.
struct ParsedCocycle {
    Cocycle cocycle;
    std::optional<Rkd> rkd;
};

/// Tagged union: trivial, bilinear, rkd, sum, power, inverse, restrict,
/// extend.
ParsedCocycle parse_cocycle(const json &j);

/// Lists beta on a window as [{"deg": g, "value": beta(g)}].
json beta_table(const Beta &beta, const std::vector<RationalVector> &window);

/// FNV-1a of the canonical dump, as 16 hex digits.
std::string input_hash(const json &j);

} // namespace qgrade::io
