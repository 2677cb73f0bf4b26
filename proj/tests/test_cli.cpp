#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "qgrade/cli.hpp"
#include "test_util.hpp"

using namespace qgrade;
using qgrade::io::json;
using qgrade::test::V;

namespace {

struct Run {
    int code;
    json report;
    std::string out, err;
};

Run raw(std::vector<std::string> args, const std::string &input = "")
{
    std::istringstream in(input);
    std::ostringstream out, err;
    int code = cli::run(args, in, out, err);
    json report;
    if (code != 2 && !out.str().empty() && out.str()[0] == '{') report = json::parse(out.str());
    return {code, report, out.str(), err.str()};
}

Run call(const std::string &verb, const json &input, std::vector<std::string> extra = {})
{
    std::vector<std::string> args{verb};
    args.insert(args.end(), extra.begin(), extra.end());
    return raw(args, input.dump());
}

json J(const char *text) { return json::parse(text); }

const json bigraded = J(R"({"grading": [["1/1", "0/1"], ["0/1", "1/1"]], "ideal": [[1, 1]]})");

} // namespace

TEST_CASE("usage errors exit 2")
{
    CHECK(raw({"nope"}).code == 2);
    CHECK(raw({}).code == 2);
    Run bad_json = raw({"cocycle.check"}, "{not json");
    CHECK(bad_json.code == 2);
    CHECK(bad_json.err.find("input error") != std::string::npos);
    CHECK(call("cocycle.check", {{"cocycle", {{"type", "trivial"}, {"dim", 1}}}, {"extra", 1}}).code == 2);
    CHECK(call("cocycle.check", {{"cocycle", {{"type", "trivial"}, {"dim", 1}, {"colour", "red"}}}}).code == 2);
    CHECK(call("cocycle.check", {{"cocycle", {{"type", "mystery"}}}}).code == 2);
    CHECK(call("hilbert.series", {{"grading", {{"1/0"}}}}).code == 2);
    CHECK(raw({"rkd.primes", "--format", "xml"}).code == 2);
    CHECK(raw({"--help"}).code == 0);
}

TEST_CASE("spec examples")
{
    Run primes = raw({"rkd.primes", "--n", "7"});
    CHECK(primes.code == 0);
    CHECK(primes.report["payload"]["primes"] == json({2, 3, 2, 5, 3, 2, 7}));
    CHECK(primes.report["status"] == "ok");

    Run trivial = call("cocycle.check", {{"cocycle", {{"type", "trivial"}, {"dim", 1}}}});
    CHECK(trivial.code == 0);
    CHECK(trivial.report["payload"]["cocycle"]["failure_count"] == 0);

    Run series = call("hilbert.series", bigraded);
    CHECK(series.code == 0);
    json expect = J(R"([{"deg": ["0/1", "0/1"], "coef": 1}, {"deg": ["1/1", "1/1"], "coef": -1}])");
    CHECK(series.report["payload"]["numerator"] == expect);
}

TEST_CASE("lattice verbs")
{
    Run h = call("lattice.hnf", {{"matrix", {{2, 4}, {0, 6}}}});
    CHECK(h.code == 0);
    CHECK(h.report["payload"]["h"] == json({{2, 0}, {0, 6}}));

    Run f = call("lattice.filtration", {{"basis", {{"1/1"}}}, {"add", {"1/2"}}});
    CHECK(f.code == 0);
    CHECK(f.report["payload"]["n"] == 2);
    CHECK(f.report["payload"]["next"] == json({{"1/2"}}));

    Run q = call("lattice.quotient", J(R"({"basis": [["1/1", "0/1"], ["0/1", "1/2"]], "r": 3})"));
    CHECK(q.report["payload"]["size"] == 9);
    Run q2 = call("lattice.quotient", {{"outer", {{"1/6"}}}, {"inner", {{"1/1"}}}});
    CHECK(q2.report["payload"]["size"] == 6);

    Run p = call("lattice.pointed", {{"generators", {{"1/1"}, {"-1/2"}}}});
    CHECK(p.code == 0);
    CHECK(p.report["payload"]["pointed"] == false);
    CHECK(p.report["payload"]["verified"] == true);
    Run p2 = call("lattice.pointed", J(R"({"generators": [["1/1", "0/1"], ["1/1", "1/3"]]})"));
    CHECK(p2.report["payload"]["pointed"] == true);
    CHECK(p2.report["payload"].contains("functional"));
}

TEST_CASE("cocycle verbs")
{
    json bil = {{"type", "bilinear"}, {"A", {{1}}}, {"lambda", "2/1"}, {"basis", {{"1/1"}}}};
    Run t = call("cocycle.trivialize", {{"cocycle", bil}, {"bound", 3}});
    CHECK(t.code == 0);
    // beta(a) = 2^{-a(a-1)/2}
    for (const auto &row : t.report["payload"]["beta"])
        if (row["deg"] == json({"3/1"})) CHECK(row["value"] == "1/8");

    Run s = call("cocycle.segre", {{"a", bil}, {"b", {{"type", "inverse"}, {"of", bil}}}});
    CHECK(s.code == 0);
    for (const auto &row : s.report["payload"]["values"]) CHECK(row["value"] == "1/1");

    Run v = call("cocycle.veronese", {{"cocycle", bil}, {"r", 2}}, {"--window", "1"});
    CHECK(v.code == 0);
    CHECK(v.report["payload"]["values"].size() == 9);

    json fq = {{"type", "bilinear"}, {"A", {{1}}}, {"lambda", 2}, {"field", "GF(5)"}};
    Run e = call("cocycle.extend", {{"cocycle", fq}, {"e", {"1/3"}}, {"p", 3}, {"y", 3}}, {"--window", "4"});
    CHECK(e.code == 0);
    CHECK(e.report["payload"]["domain"] == json({{"1/3"}}));

    Run d = call("cocycle.divide", {{"cocycle", fq}, {"r", 2}, {"bound", 3}});
    CHECK(d.code == 0);
    CHECK(d.report["payload"]["verified"]["pass"] == true);

    Run solved = call("cocycle.solve-fq", {{"cocycle", fq}, {"bound", 3}});
    CHECK(solved.code == 0);
    CHECK(solved.report["payload"]["solvable"] == true);

    // Non-symmetric forms are rejected when the cocycle is built.
    json bad = {{"type", "bilinear"}, {"A", {{1, 2}, {3, 1}}}, {"lambda", 2}, {"field", "GF(7)"}};
    CHECK(call("cocycle.check", {{"cocycle", bad}}).code == 2);

    json rk = {{"type", "rkd"}, {"d", 1}, {"char", 0}, {"schedule", "diagonal"}, {"max_level", 3}};
    Run rc = call("cocycle.check", {{"cocycle", rk}, {"level", 2}}, {"--window", "3"});
    CHECK(rc.code == 0);
    CHECK(rc.report["payload"]["window_size"] == 7);
}

TEST_CASE("failing checks exit 1 with a report")
{
    json rk = {{"type", "rkd"}, {"d", 1}, {"max_level", 3}};
    json sum = {{"type", "sum"}, {"of", {rk, {{"type", "inverse"}, {"of", rk}}}}};
    CHECK(call("cocycle.check", {{"cocycle", sum}, {"points", {{"1/2"}, {"1/6"}, {"0/1"}}}}).code == 0);

    json grading = J(R"({"grading": [["1/1", "-1/1"]]})");
    Run not_modest = call("hilbert.series", grading);
    CHECK(not_modest.code == 1);
    CHECK(not_modest.report["status"] == "fail");
    CHECK(not_modest.report["payload"]["modest"]["witness"] == json({1, 1}));
    CHECK(call("hilbert.verify", grading).code == 1);
}

TEST_CASE("algebra verbs")
{
    json bil = {{"type", "bilinear"}, {"A", {{1}}}, {"lambda", "3/1"}};
    json x1 = {{"terms", {{{"deg", {"1/1"}}, {"coef", "1/1"}}}}};
    Run m = call("algebra.mul", {{"cocycle", bil}, {"a", x1}, {"b", x1}});
    CHECK(m.code == 0);
    CHECK(m.report["payload"]["product"] == json({{"terms", {{{"deg", {"2/1"}}, {"coef", "3/1"}}}}}));
    Run inv = call("algebra.invert", {{"cocycle", bil}, {"a", x1}});
    CHECK(inv.code == 0);
    CHECK(inv.report["payload"]["round_trip"] == true);
    CHECK(call("algebra.mul", {{"cocycle", bil}, {"a", x1}, {"b", {{"terms", {{{"deg", {"1/2"}}, {"coef", "1/1"}}}}}}}).code == 2);
}

TEST_CASE("rkd verbs")
{
    Run c = call("rkd.cocycle", {{"d", 1}, {"max_level", 3}, {"pairs", {{{"1/2"}, {"1/6"}}}}});
    CHECK(c.code == 0);
    CHECK(c.report["payload"]["values"][0]["text"] == "a[1,2]^-1");
    CHECK(c.report["payload"]["values"][0]["value"] == json({{"unit", "1/1"}, {"exps", {{"a[1,2]", -1}}}}));

    Run v = call("rkd.verify", {{"d", 2}, {"schedule", {{"constant", 2}}}, {"max_level", 4}}, {"--window", "1"});
    CHECK(v.code == 0);
    CHECK(v.report["payload"]["irreducible"].size() == 6);

    Run p = raw({"rkd.primes", "--n", "5", "--constant", "3"});
    CHECK(p.report["payload"]["primes"] == json({3, 3, 3, 3, 3}));
    CHECK(raw({"rkd.primes", "--n", "0"}).report["payload"]["primes"].empty());
}

TEST_CASE("hilbert verbs")
{
    json spec = bigraded;
    spec["degree"] = {"3/1", "0/1"};
    Run f = call("hilbert.function", spec);
    CHECK(f.code == 0);
    CHECK(f.report["payload"]["count"] == 1);

    json v = J(R"({"grading": [["1/1", "1/1"]], "ideal": [[2, 0], [1, 1]], "bound": 6})");
    Run r = call("hilbert.verify", v);
    CHECK(r.code == 0);
    CHECK(r.report["payload"]["summable"]["pass"] == true);
    CHECK(r.report["payload"]["expansion_agrees"] == true);

    Run text = raw({"hilbert.series", "--format", "text"}, json({{"grading", {{"1/1"}}}, {"ideal", {{2}}}}).dump());
    CHECK(text.code == 0);
    CHECK(text.out.find("text: 1 - z^(2)") != std::string::npos);
}

TEST_CASE("round trips")
{
    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        RationalVector v = test::random_vector(rng, 3, 50, 12);
        CHECK(io::parse_vector(io::to_json(v)) == v);
    }
    Integer big("123456789012345678901234567890");
    CHECK(io::parse_integer_json(io::to_json(big)) == big);

    FieldPtr qa = FieldDescriptor::function_field(FieldDescriptor::rationals(), {Var{'a', 1, 1}, Var{'a', 1, 2}});
    CHECK(same_field(io::parse_field(io::field_to_json(qa)), qa));
    FieldElement a = FieldElement::variable(qa, Var{'a', 1, 1}), b = FieldElement::variable(qa, Var{'a', 1, 2});
    for (const FieldElement &x : {a, a.pow(-3) * b, (a + b) / (a - FieldElement::one(qa)), FieldElement::from_integer(qa, 7)})
        CHECK(io::parse_element(io::to_json(x), qa) == x);
    FieldPtr f16 = FieldDescriptor::prime_field(16);
    for (long r = 0; r < 16; ++r) {
        FieldElement x = FieldElement::from_scalar(f16, Scalar(static_cast<std::uint32_t>(r), f16->finite_field()));
        CHECK(io::parse_element(io::to_json(x), f16) == x);
    }

    ContextPtr ctx = AlgebraContext::make(bilinear_cocycle(IntegerMatrix(1, 1, {1}), a, {V({"1/2"})}));
    TwistedElement t = TwistedElement::monomial(ctx, V({"1/2"}), a) + TwistedElement::monomial(ctx, V({"-3/2"}), b);
    CHECK(io::parse_twisted(io::to_json(t), ctx) == t);

    HilbertSeriesForm form = hilbert_series(GradedRingSpec(2, {V({"1/2", "0"}), V({"1/3", "1"})}), MonomialIdeal(2, {{2, 1}}));
    HilbertSeriesForm back = io::parse_series(io::to_json(form));
    CHECK(back.numerator == form.numerator);
    CHECK(back.denominator == form.denominator);
    CHECK(back.group == form.group);

    CheckReport rep;
    rep.trials = 4;
    rep.record({{V({"1"}), V({"2"})}, "boom"});
    CheckReport rep2 = io::parse_report(io::to_json(rep));
    CHECK(rep2.trials == 4);
    CHECK(rep2.failure_count == 1);
    CHECK(rep2.failures.front().points == rep.failures.front().points);

    json c = cli::corpus(4, 5);
    for (const auto &h : c["hilbert"]) {
        io::HilbertInput in = io::parse_hilbert(h);
        CHECK(io::hilbert_to_json(in.spec, in.ideal) == h);
    }
}

TEST_CASE("corpus and determinism")
{
    CHECK(raw({"corpus", "--seed", "0", "--size", "6"}).out == raw({"corpus", "--seed", "0", "--size", "6"}).out);
    CHECK(cli::corpus(0, 6) != cli::corpus(1, 6));
    json empty = cli::corpus(9, 0);
    CHECK(empty["hilbert"].empty());
    CHECK(empty["cocycles"].empty());
    for (const auto &spec : cli::corpus(2, 8)["cocycles"]) {
        Run r = call("cocycle.trivialize", {{"cocycle", spec}, {"bound", 2}});
        CHECK(r.code == 0);
    }
    json in = {{"cocycle", {{"type", "bilinear"}, {"A", {{2}}}, {"lambda", 3}, {"field", "GF(7)"}}}};
    CHECK(call("cocycle.check", in, {"--seed", "5", "--trials", "50"}).out == call("cocycle.check", in, {"--seed", "5", "--trials", "50"}).out);
    CHECK(call("cocycle.check", in, {"--seed", "5"}).report["provenance"]["seed"] == 5);
}
