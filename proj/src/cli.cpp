#include "qgrade/cli.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

namespace qgrade::cli {

using io::json;

namespace {

struct Options {
    json input;
    bool has_input = false;
    std::uint64_t seed = 0;
    long window = 2;
    long trials = 100000;
    long n = 7;
    long constant = 0;
    std::size_t size = 10;
};

struct Outcome {
    bool ok = true;
    json payload;
};

using Handler = std::function<Outcome(const Options &)>;

const json &need(const Options &o, const char *what)
{
    if (!o.has_input) throw io::ParseError(std::string(what) + " needs a JSON input");
    return o.input;
}

long get_long(const json &j, const char *key, long fallback)
{
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer()) throw io::ParseError(std::string("\"") + key + "\" must be an integer");
    return j[key].get<long>();
}

std::vector<RationalVector> cocycle_window(const io::ParsedCocycle &pc, const json &in, long bound)
{
    std::size_t dim = pc.cocycle.domain().dim();
    if (in.contains("points")) return io::parse_vectors(in["points"], dim);
    if (pc.cocycle.domain().is_lattice()) return window(pc.cocycle, bound);
    if (pc.rkd) {
        long level = get_long(in, "level", 2);
        if (level < 1 || static_cast<std::size_t>(level) > pc.rkd->max_level())
            throw io::ParseError("\"level\" must lie in [1, max_level]");
        return pc.rkd->window(bound, static_cast<std::size_t>(level));
    }
    throw io::ParseError("this cocycle has no lattice window; give \"points\"");
}

CheckReport check_normalized(const Cocycle &c, const std::vector<RationalVector> &w)
{
    CheckReport r;
    RationalVector zero(c.domain().dim());
    for (const auto &g : w) {
        ++r.trials;
        if (!c(zero, g).is_one() || !c(g, zero).is_one()) r.record({{g}, "c(0,g) or c(g,0) differs from 1"});
    }
    return r;
}

json value_table(const Cocycle &c, const std::vector<RationalVector> &w)
{
    json out = json::array();
    for (const auto &g : w)
        for (const auto &h : w) out.push_back({{"g", io::to_json(g)}, {"h", io::to_json(h)}, {"value", io::to_json(c(g, h))}});
    return out;
}

Outcome cocycle_checks(const Cocycle &c, const std::vector<RationalVector> &w, const Options &o)
{
    CheckReport id = check_cocycle(c, w, o.trials, o.seed);
    CheckReport sym = check_symmetric(c, w, o.trials, o.seed);
    CheckReport norm = check_normalized(c, w);
    return {id.pass() && sym.pass() && norm.pass(),
            {{"window_size", w.size()}, {"cocycle", io::to_json(id)}, {"symmetric", io::to_json(sym)}, {"normalized", io::to_json(norm)}}};
}

std::vector<RationalVector> lattice_basis(const io::ParsedCocycle &pc, const json &in)
{
    if (in.contains("basis")) return io::parse_vectors(in["basis"], pc.cocycle.domain().dim());
    if (!pc.cocycle.domain().is_lattice()) throw io::ParseError("give \"basis\" for a cocycle without a lattice domain");
    return pc.cocycle.domain().lattice().basis();
}

json counterexample_json(const Counterexample &c) { return {{"points", io::to_json(c.points)}, {"detail", c.detail}}; }

SubgroupBasis parse_group(const json &j, const char *key)
{
    auto gens = io::parse_vectors(j.at(key));
    if (gens.empty()) throw io::ParseError(std::string("\"") + key + "\" needs at least one vector");
    return subgroup_basis(gens[0].dim(), gens);
}

json quotient_json(const QuotientResult &q)
{
    json factors = json::array();
    for (const auto &f : q.cyclic_factors) factors.push_back(io::to_json(f));
    return {{"size", q.reps.size()}, {"cyclic_factors", factors}, {"reps", io::to_json(q.reps)}};
}

// ---- verbs ----

Outcome lattice_hnf(const Options &o)
{
    const json &in = need(o, "lattice.hnf");
    io::expect_fields(in, {"matrix"}, "lattice.hnf");
    HnfResult r = hnf(io::parse_integer_matrix(in.at("matrix")));
    return {true, {{"h", io::to_json(r.h)}, {"u", io::to_json(r.u)}}};
}

Outcome lattice_filtration(const Options &o)
{
    const json &in = need(o, "lattice.filtration");
    io::expect_fields(in, {"basis", "add"}, "lattice.filtration");
    SubgroupBasis current = parse_group(in, "basis");
    FiltrationResult r = filtration_step(current, io::parse_vector(in.at("add"), current.ambient_dim()));
    return {true,
            {{"e_basis", io::to_json(r.step.e_basis)},
             {"f", io::to_json(r.step.f)},
             {"n", io::to_json(r.step.n)},
             {"next", io::to_json(r.next.basis())}}};
}

Outcome lattice_quotient_verb(const Options &o)
{
    const json &in = need(o, "lattice.quotient");
    io::expect_fields(in, {"outer", "inner", "basis", "r"}, "lattice.quotient");
    if (in.contains("r")) {
        Integer r = io::parse_integer_json(in["r"]);
        return {true, quotient_json(quotient_by_scaling(parse_group(in, "basis"), r))};
    }
    return {true, quotient_json(lattice_quotient(parse_group(in, "outer"), parse_group(in, "inner")))};
}

Outcome lattice_pointed(const Options &o)
{
    const json &in = need(o, "lattice.pointed");
    io::expect_fields(in, {"generators", "dim"}, "lattice.pointed");
    auto gens = io::parse_vectors(in.at("generators"));
    std::size_t dim = gens.empty() ? static_cast<std::size_t>(get_long(in, "dim", 1)) : gens[0].dim();
    PointednessCertificate cert = is_pointed(dim, gens);
    json out = {{"pointed", cert.pointed()}, {"verified", cert.verify(gens)}};
    if (cert.functional) out["functional"] = io::to_json(*cert.functional);
    if (cert.witness) {
        out["witness"] = io::to_json(*cert.witness);
        json a = json::array(), b = json::array();
        for (const auto &x : cert.witness_combination) a.push_back(io::to_json(x));
        for (const auto &x : cert.negation_combination) b.push_back(io::to_json(x));
        out["witness_combination"] = a;
        out["negation_combination"] = b;
    }
    return {true, out};
}

Outcome cocycle_check(const Options &o)
{
    const json &in = need(o, "cocycle.check");
    io::expect_fields(in, {"cocycle", "points", "level"}, "cocycle.check");
    io::ParsedCocycle pc = io::parse_cocycle(in.at("cocycle"));
    return cocycle_checks(pc.cocycle, cocycle_window(pc, in, o.window), o);
}

Outcome cocycle_trivialize(const Options &o)
{
    const json &in = need(o, "cocycle.trivialize");
    io::expect_fields(in, {"cocycle", "basis", "bound"}, "cocycle.trivialize");
    io::ParsedCocycle pc = io::parse_cocycle(in.at("cocycle"));
    auto basis = lattice_basis(pc, in);
    long bound = get_long(in, "bound", o.window);
    try {
        Beta beta = trivialize_on_lattice(pc.cocycle, basis, bound);
        return {true, {{"trivialized", true}, {"beta", io::beta_table(beta, lattice_box(basis, bound, pc.cocycle.domain().dim()))}}};
    } catch (const TrivializationError &e) {
        return {false, {{"trivialized", false}, {"reason", e.what()}, {"counterexample", counterexample_json(e.counterexample)}}};
    }
}

Outcome cocycle_segre(const Options &o)
{
    const json &in = need(o, "cocycle.segre");
    io::expect_fields(in, {"a", "b", "points", "level"}, "cocycle.segre");
    io::ParsedCocycle a = io::parse_cocycle(in.at("a")), b = io::parse_cocycle(in.at("b"));
    io::ParsedCocycle s{segre(a.cocycle, b.cocycle), a.rkd ? a.rkd : b.rkd};
    auto w = cocycle_window(s, in, o.window);
    Outcome out = cocycle_checks(s.cocycle, w, o);
    out.payload["values"] = value_table(s.cocycle, w);
    return out;
}

Outcome cocycle_veronese(const Options &o)
{
    const json &in = need(o, "cocycle.veronese");
    io::expect_fields(in, {"cocycle", "r", "points", "level"}, "cocycle.veronese");
    io::ParsedCocycle a = io::parse_cocycle(in.at("cocycle"));
    long r = get_long(in, "r", 0);
    if (r == 0) throw io::ParseError("cocycle.veronese needs a nonzero \"r\"");
    io::ParsedCocycle v{veronese(a.cocycle, r), a.rkd};
    auto w = cocycle_window(v, in, o.window);
    Outcome out = cocycle_checks(v.cocycle, w, o);
    out.payload["values"] = value_table(v.cocycle, w);
    return out;
}

Outcome cocycle_extend(const Options &o)
{
    const json &in = need(o, "cocycle.extend");
    io::expect_fields(in, {"cocycle", "e", "p", "y", "points"}, "cocycle.extend");
    json spec = {{"type", "extend"}, {"of", in.at("cocycle")}, {"e", in.at("e")}, {"p", in.at("p")}};
    if (in.contains("y")) spec["y"] = in["y"];
    io::ParsedCocycle c = io::parse_cocycle(spec);
    auto w = cocycle_window(c, in, o.window);
    Outcome out = cocycle_checks(c.cocycle, w, o);
    out.payload["domain"] = io::to_json(c.cocycle.domain().lattice().basis());
    return out;
}

Outcome cocycle_divide(const Options &o)
{
    const json &in = need(o, "cocycle.divide");
    io::expect_fields(in, {"cocycle", "r", "bound"}, "cocycle.divide");
    io::ParsedCocycle pc = io::parse_cocycle(in.at("cocycle"));
    long r = get_long(in, "r", 0);
    long bound = get_long(in, "bound", o.window);
    try {
        DivideResult d = divide_class(pc.cocycle, r, bound);
        auto box = window(pc.cocycle, bound);
        CheckReport rep = check_differs_by(veronese(d.c_prime, r), pc.cocycle, d.beta, box);
        auto small = window(pc.cocycle, 1);
        return {rep.pass(), {{"c_prime", value_table(d.c_prime, small)}, {"beta", io::beta_table(d.beta, box)}, {"verified", io::to_json(rep)}}};
    } catch (const TrivializationError &e) {
        return {false, {{"reason", e.what()}, {"counterexample", counterexample_json(e.counterexample)}}};
    }
}

Outcome cocycle_solve_fq(const Options &o)
{
    const json &in = need(o, "cocycle.solve-fq");
    io::expect_fields(in, {"cocycle", "basis", "bound"}, "cocycle.solve-fq");
    io::ParsedCocycle pc = io::parse_cocycle(in.at("cocycle"));
    auto basis = lattice_basis(pc, in);
    long bound = get_long(in, "bound", o.window);
    std::optional<Beta> beta = coboundary_solve_finite_field(pc.cocycle, basis, bound);
    if (!beta) return {false, {{"solvable", false}}};
    return {true, {{"solvable", true}, {"beta", io::beta_table(*beta, lattice_box(basis, bound, pc.cocycle.domain().dim()))}}};
}

ContextPtr algebra_context(const json &in)
{
    return AlgebraContext::make(io::parse_cocycle(in.at("cocycle")).cocycle);
}

Outcome algebra_mul(const Options &o)
{
    const json &in = need(o, "algebra.mul");
    io::expect_fields(in, {"cocycle", "a", "b"}, "algebra.mul");
    ContextPtr ctx = algebra_context(in);
    TwistedElement p = io::parse_twisted(in.at("a"), ctx) * io::parse_twisted(in.at("b"), ctx);
    return {true, {{"product", io::to_json(p)}, {"text", p.str()}}};
}

Outcome algebra_invert(const Options &o)
{
    const json &in = need(o, "algebra.invert");
    io::expect_fields(in, {"cocycle", "a"}, "algebra.invert");
    ContextPtr ctx = algebra_context(in);
    TwistedElement a = io::parse_twisted(in.at("a"), ctx);
    TwistedElement inv = invert_homogeneous(a);
    bool round_trip = a * inv == TwistedElement::one(ctx);
    return {round_trip, {{"inverse", io::to_json(inv)}, {"text", inv.str()}, {"round_trip", round_trip}}};
}

Outcome rkd_cocycle(const Options &o)
{
    const json &in = need(o, "rkd.cocycle");
    Rkd r = io::parse_rkd(in, {"pairs", "level"});
    Cocycle c = r.limit_cocycle();
    std::vector<std::pair<RationalVector, RationalVector>> pairs;
    if (in.contains("pairs")) {
        for (const auto &p : in["pairs"]) {
            if (!p.is_array() || p.size() != 2) throw io::ParseError("each pair is [g, h]");
            pairs.emplace_back(io::parse_vector(p[0], r.d()), io::parse_vector(p[1], r.d()));
        }
    } else {
        io::ParsedCocycle pc{c, r};
        auto w = cocycle_window(pc, in, o.window);
        for (const auto &g : w)
            for (const auto &h : w) pairs.emplace_back(g, h);
    }
    json values = json::array();
    for (const auto &[g, h] : pairs) {
        FieldElement v = c(g, h);
        auto m = v.as_monomial();
        values.push_back({{"g", io::to_json(g)}, {"h", io::to_json(h)}, {"value", io::to_json(v)}, {"text", m ? m->str() : v.str()}});
    }
    return {true, {{"schedule", r.schedule().str()}, {"values", values}}};
}

Outcome rkd_primes(const Options &o)
{
    if (o.n < 0) throw io::ParseError("--n must be nonnegative");
    PrimeSchedule s = o.constant ? PrimeSchedule::constant(o.constant) : PrimeSchedule::diagonal();
    json primes = prime_seq(s, static_cast<std::size_t>(o.n));
    return {true, {{"primes", primes}}};
}

Outcome rkd_verify(const Options &o)
{
    const json &in = need(o, "rkd.verify");
    Rkd r = io::parse_rkd(in, {"level"});
    json levels = json::array();
    bool ok = true;
    for (std::size_t i = 1; i < r.max_level(); ++i)
        for (std::size_t j = 1; j <= r.d(); ++j) {
            CheckReport rep = verify_level_irreducible(r, i, j);
            ok = ok && rep.pass();
            levels.push_back({{"level", i}, {"coordinate", j}, {"prime", r.schedule().prime(i + 1)}, {"pass", rep.pass()}});
        }
    io::ParsedCocycle pc{r.limit_cocycle(), r};
    Outcome checks = cocycle_checks(pc.cocycle, cocycle_window(pc, in, o.window), o);
    checks.payload["irreducible"] = levels;
    checks.ok = checks.ok && ok;
    return checks;
}

json modest_json(const ModestResult &m)
{
    static const char *names[] = {"modest", "not_modest", "undetermined"};
    json out = {{"status", names[static_cast<int>(m.status)]}};
    if (m.witness) out["witness"] = *m.witness;
    return out;
}

Outcome hilbert_series_verb(const Options &o)
{
    const json &in = need(o, "hilbert.series");
    io::HilbertInput h = io::parse_hilbert(in);
    ModestResult m = modest_check(h.spec, h.ideal);
    if (m.status == ModestResult::Status::not_modest) return {false, {{"modest", modest_json(m)}}};
    HilbertSeriesForm form = hilbert_series(h.spec, h.ideal);
    json out = io::to_json(form);
    out["modest"] = modest_json(m);
    out["text"] = form.numerator.str();
    return {true, out};
}

Outcome hilbert_function_verb(const Options &o)
{
    const json &in = need(o, "hilbert.function");
    io::HilbertInput h = io::parse_hilbert(in, {"degree", "bound"});
    RationalVector t = io::parse_vector(in.at("degree"), h.spec.d);
    Integer count = hilbert_function(h.spec, h.ideal, t, get_long(in, "bound", 64));
    return {true, {{"degree", io::to_json(t)}, {"count", io::to_json(count)}}};
}

Outcome hilbert_verify(const Options &o)
{
    const json &in = need(o, "hilbert.verify");
    io::HilbertInput h = io::parse_hilbert(in, {"functional", "bound"});
    ModestResult m = modest_check(h.spec, h.ideal);
    if (m.status == ModestResult::Status::not_modest) return {false, {{"modest", modest_json(m)}}};
    RationalVector fn;
    if (in.contains("functional")) {
        fn = io::parse_vector(in["functional"], h.spec.d);
    } else {
        std::vector<RationalVector> nonzero;
        for (const auto &c : h.spec.columns)
            if (!c.is_zero()) nonzero.push_back(c);
        PointednessCertificate cert = is_pointed(h.spec.d, nonzero);
        if (!cert.pointed()) throw PreconditionError("columns are not pointed; give a \"functional\"");
        fn = *cert.functional;
    }
    Rational bound = in.contains("bound") ? io::parse_rational_json(in["bound"]) : Rational(o.window);
    HilbertSeriesForm form = hilbert_series(h.spec, h.ideal);
    CheckReport rep = verify_summable(h.spec, h.ideal, form, fn, bound);
    bool agree = expand_truncated(form, fn, bound).counts == enumerate_standard(h.spec, h.ideal, fn, bound).counts;
    return {rep.pass() && agree,
            {{"functional", io::to_json(fn)}, {"bound", io::to_json(bound)}, {"summable", io::to_json(rep)}, {"expansion_agrees", agree}}};
}

Outcome corpus_verb(const Options &o) { return {true, corpus(o.seed, o.size)}; }

const std::map<std::string, Handler> &handlers()
{
    static const std::map<std::string, Handler> table{
        {"lattice.hnf", lattice_hnf},
        {"lattice.filtration", lattice_filtration},
        {"lattice.quotient", lattice_quotient_verb},
        {"lattice.pointed", lattice_pointed},
        {"cocycle.check", cocycle_check},
        {"cocycle.trivialize", cocycle_trivialize},
        {"cocycle.segre", cocycle_segre},
        {"cocycle.veronese", cocycle_veronese},
        {"cocycle.extend", cocycle_extend},
        {"cocycle.divide", cocycle_divide},
        {"cocycle.solve-fq", cocycle_solve_fq},
        {"algebra.mul", algebra_mul},
        {"algebra.invert", algebra_invert},
        {"rkd.cocycle", rkd_cocycle},
        {"rkd.primes", rkd_primes},
        {"rkd.verify", rkd_verify},
        {"hilbert.series", hilbert_series_verb},
        {"hilbert.function", hilbert_function_verb},
        {"hilbert.verify", hilbert_verify},
        {"corpus", corpus_verb},
    };
    return table;
}

bool reads_input_by_default(const std::string &verb) { return verb != "rkd.primes" && verb != "corpus"; }

void print_text(std::ostream &out, const std::string &verb, const json &report)
{
    out << verb << ": " << report["status"].get<std::string>() << "\n";
    for (const auto &[k, v] : report["payload"].items()) out << "  " << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
}

} // namespace

const std::vector<std::string> &verbs()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto &[k, h] : handlers()) v.push_back(k);
        return v;
    }();
    return names;
}

json corpus(std::uint64_t seed, std::size_t size)
{
    Rng rng(seed);
    json hilbert = json::array(), cocycles = json::array();
    for (std::size_t k = 0; k < size; ++k) {
        std::size_t d = static_cast<std::size_t>(rng.uniform(1, 2)), n = static_cast<std::size_t>(rng.uniform(1, 4));
        // Columns in the open positive orthant keep the grading pointed.
        std::vector<RationalVector> cols;
        for (std::size_t i = 0; i < n; ++i) {
            RationalVector c(d);
            for (std::size_t j = 0; j < d; ++j) c[j] = make_rational(rng.uniform(1, 4), rng.uniform(1, 6));
            cols.push_back(c);
        }
        std::vector<std::vector<long>> gens;
        for (long g = 0, count = rng.uniform(0, 6); g < count; ++g) {
            std::vector<long> u(n);
            for (auto &e : u) e = rng.uniform(0, 3);
            gens.push_back(u);
        }
        hilbert.push_back(io::hilbert_to_json(GradedRingSpec(d, cols), MonomialIdeal(n, gens)));

        std::size_t m = static_cast<std::size_t>(rng.uniform(1, 3));
        json a = json::array();
        std::vector<std::vector<long>> entries(m, std::vector<long>(m));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i; j < m; ++j) entries[i][j] = entries[j][i] = rng.uniform(-3, 3);
        for (const auto &row : entries) a.push_back(row);
        static const char *fields[] = {"Q", "GF(5)", "GF(7)", "GF(13)"};
        const char *field = fields[rng.uniform(0, 3)];
        json lambda = field[0] == 'Q' ? json(to_string(make_rational(rng.uniform(2, 5), rng.uniform(1, 3)))) : json(rng.uniform(2, 4));
        cocycles.push_back({{"type", "bilinear"}, {"A", a}, {"lambda", lambda}, {"field", field}});
    }
    return {{"seed", seed}, {"hilbert", hilbert}, {"cocycles", cocycles}};
}

int run(const std::vector<std::string> &args, std::istream &in, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Exact computations with Q^d-graded rings, cocycles and Hilbert series", "qgrade"};
    std::string verb, input, format = "json";
    Options o;
    app.add_option("verb", verb, "operation")->required()->check(CLI::IsMember(verbs()));
    app.add_option("--input", input, "JSON input file, or - for standard input");
    app.add_option("--seed", o.seed, "seed for randomized checks");
    app.add_option("--window", o.window, "window bound")->check(CLI::NonNegativeNumber);
    app.add_option("--trials", o.trials, "trial budget for sampled checks")->check(CLI::PositiveNumber);
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--n", o.n, "number of primes (rkd.primes)");
    app.add_option("--constant", o.constant, "constant prime schedule (rkd.primes)");
    app.add_option("--size", o.size, "instances per family (corpus)");

    std::vector<std::string> argv_store{"qgrade"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char *> argv;
    for (const auto &a : argv_store) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError &e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (!input.empty() || reads_input_by_default(verb)) {
            std::string text;
            if (input.empty() || input == "-") {
                std::ostringstream buf;
                buf << in.rdbuf();
                text = buf.str();
            } else {
                std::ifstream file(input);
                if (!file) throw io::ParseError("cannot open " + input);
                std::ostringstream buf;
                buf << file.rdbuf();
                text = buf.str();
            }
            o.input = json::parse(text);
            o.has_input = true;
        }
        Outcome result = handlers().at(verb)(o);
        json report = {{"status", result.ok ? "ok" : "fail"},
                       {"verb", verb},
                       {"payload", result.payload},
                       {"provenance", {{"input_hash", io::input_hash(o.has_input ? o.input : json())}, {"seed", o.seed}, {"version", version}}}};
        if (format == "text") print_text(out, verb, report);
        else out << report.dump(2) << "\n";
        return result.ok ? 0 : 1;
    } catch (const json::exception &e) {
        err << "input error: " << e.what() << "\n";
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
    } catch (const std::out_of_range &e) {
        err << "input error: " << e.what() << "\n";
    }
    return 2;
}

} // namespace qgrade::cli
