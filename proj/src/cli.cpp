#include "zerosum/cli.hpp"

#include "zerosum/additive.hpp"
#include "zerosum/errors.hpp"
#include "zerosum/invariants.hpp"
#include "zerosum/repro.hpp"
#include "zerosum/theorem_lab.hpp"
#include "zerosum/verify.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace zerosum::cli {

namespace {

struct UsageError : Error {
    using Error::Error;
};

struct Config {
    std::string group;
    std::string seq;
    std::string witness;
    std::string expect = "free";
    std::string kind;
    std::string suite;
    std::size_t k = 0;
    std::size_t n = 0;
    std::size_t length = 0;
    std::size_t max_length = 0;
    std::size_t trials = 10'000;
    std::uint64_t seed = 42;
    std::uint64_t budget = default_budget;
    int jobs = 1;
    int t1 = 0;
    int t2 = 0;
    int t3 = 0;
    bool records = false;
    bool fuzz = false;
    bool trace = false;
};

std::uint64_t budget_default()
{
    if (const char * env = std::getenv("ZEROSUM_BUDGET")) {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(env, &used);
            if (used == std::string_view(env).size() && v > 0)
                return v;
        } catch (const std::exception &) {
        }
        throw UsageError("ZEROSUM_BUDGET must be a positive integer, got '" + std::string(env) + "'");
    }
    return default_budget;
}

GroupSpec group_of(const Config & c)
{
    if (c.group.empty())
        throw UsageError("--group is required, e.g. --group \"metacyclic n=15 s=11\"");
    try {
        return parse_group_literal(c.group);
    } catch (const InvalidGroup & e) {
        throw UsageError(std::string("--group: ") + e.what());
    }
}

std::string read_file(const std::string & path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// --seq names a file (with or without a group line) or is an inline sequence literal.
Sequence sequence_of(const Config & c)
{
    if (c.seq.empty())
        throw UsageError("--seq is required (a sequence file or a literal like \"y^1 * 29, x*y^7 * 1\")");
    std::string text = std::filesystem::is_regular_file(c.seq) ? read_file(c.seq) : c.seq;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text.compare(first, 5, "group") == 0) {
        Sequence s = parse_sequence_file(text);
        if (!c.group.empty() && !(group_of(c) == s.group()))
            throw UsageError("--group " + c.group + " disagrees with the sequence file's group " + s.group().literal());
        return s;
    }
    const GroupSpec g = group_of(c);
    if (first == std::string::npos || text.compare(first, 3, "seq") != 0)
        text = "seq " + text;
    const auto nl = text.find('\n', first == std::string::npos ? 0 : first);
    return parse_sequence_line(nl == std::string::npos ? text : text.substr(0, nl), g);
}

SearchOptions search_of(const Config & c)
{
    return {c.budget, Route::automatic};
}

std::string join_elements(const ElementSet & set)
{
    std::string out;
    for (const Element & u : set)
        out += (out.empty() ? "" : ",") + format_element(u);
    return out;
}

int cmd_group(const Config & c, std::ostream & out)
{
    const GroupSpec g = group_of(c);
    std::string factors = "n1=- n2=-";
    if (g.kind() == GroupKind::metacyclic) {
        const Factorization f = factorize(g);
        factors = "n1=" + std::to_string(f.n1) + " n2=" + std::to_string(f.n2);
    }
    const std::size_t autos = automorphisms(g).size();
    if (c.records) {
        out << "group=\"" << g.literal() << "\" order=" << g.order() << " n=" << g.n() << " s=" << g.s()
            << " abelian=" << (g.is_abelian() ? "yes" : "no") << " " << factors << " automorphisms=" << autos
            << " main_family=" << (in_main_family(g) ? "yes" : "no") << "\n";
        return ok;
    }
    out << g.literal() << "\n"
        << "  order " << g.order() << (g.is_abelian() ? ", abelian" : ", non-abelian") << "\n"
        << "  factorization " << factors << "\n"
        << "  automorphisms " << autos << "\n";
    if (in_main_family(g))
        out << "  member of the C_{3 n2} x|_s C_2 family with n2 = " << main_family_n2(g) << "\n";
    return ok;
}

int cmd_pi(const Config & c, std::ostream & out)
{
    const Sequence s = sequence_of(c);
    const ElementSet pi = pi_set(s, search_of(c));
    if (c.records)
        out << "pi length=" << s.length() << " size=" << pi.size() << " members=" << join_elements(pi) << "\n";
    else
        out << "pi(S) has " << pi.size() << " element(s): " << join_elements(pi) << "\n";
    return ok;
}

int cmd_subproducts(const Config & c, std::ostream & out)
{
    const Sequence s = sequence_of(c);
    if (c.n == 0)
        throw UsageError("--n is required for subproducts");
    const SubproductSet r = subproducts(s, c.n, search_of(c));
    if (c.records)
        out << "subproducts n=" << c.n << " size=" << r.members.size() << " stabilizer=\"" << r.stabilizer.description()
            << "\" stabilizer_order=" << r.stabilizer.size() << " members=" << join_elements(r.members) << "\n";
    else
        out << "Pi_" << c.n << "(S) has " << r.members.size() << " element(s): " << join_elements(r.members) << "\n"
            << "stabilizer " << r.stabilizer.description() << " of order " << r.stabilizer.size() << "\n";
    return ok;
}

int cmd_check(const Config & c, std::ostream & out)
{
    const Sequence s = sequence_of(c);
    if (c.k == 0)
        throw UsageError("--k is required for check");
    if (c.expect != "free" && c.expect != "product-one")
        throw UsageError("--expect must be 'free' or 'product-one'");
    const ProductOneResult r = has_product_one(s, c.k, search_of(c));
    const Route route = resolve_route(s, c.k, search_of(c));
    if (c.records) {
        out << "check k=" << c.k << " length=" << s.length() << " result=" << (r.found ? "product-one" : "free")
            << " route=" << route_name(route) << "\n";
        if (r.witness)
            out << format_witness_line(*r.witness) << "\n";
    } else if (r.found) {
        out << "S has a product-one subsequence of length " << c.k << " (route " << route_name(route) << ")\n"
            << format_witness_line(*r.witness) << "\n";
    } else {
        out << "S of length " << s.length() << " is " << c.k << "-product-one free (route " << route_name(route) << ")\n";
    }
    const bool holds = c.expect == "free" ? !r.found : r.found;
    return holds ? ok : claim_false;
}

int cmd_verify(const Config & c, std::ostream & out)
{
    const Sequence s = sequence_of(c);
    if (c.witness.empty())
        throw UsageError("--witness is required (a file or an inline witness line)");
    std::string text = std::filesystem::is_regular_file(c.witness) ? read_file(c.witness) : c.witness;
    std::istringstream lines(text);
    std::string line;
    int number = 0;
    while (std::getline(lines, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") != std::string::npos && line[line.find_first_not_of(" \t\r")] != '#')
            break;
    }
    const ProductWitness w = parse_witness_line(line, s.group(), number);
    const VerifyResult v = verify_witness(s, w, w.product);
    if (c.records)
        out << "verify result=" << (v.ok ? "ok" : "rejected") << " reason=" << reason_name(v.reason) << " k=" << w.terms.size()
            << " target=" << format_element(w.product) << (v.detail.empty() ? "" : " detail=\"" + v.detail + "\"") << "\n";
    else
        out << (v.ok ? "witness verified" : "witness rejected: " + reason_name(v.reason))
            << (v.detail.empty() ? "" : " (" + v.detail + ")") << "\n";
    return v.ok ? ok : claim_false;
}

int cmd_constant(const Config & c, std::ostream & out, Constant which)
{
    const GroupSpec g = group_of(c);
    EnumerationOptions e;
    e.jobs = c.jobs;
    e.search = search_of(c);
    const std::size_t cap = c.max_length ? c.max_length : static_cast<std::size_t>(which == Constant::gao ? 3 * g.order() : g.order());
    const ConstantReport r = which == Constant::gao ? gao_constant(g, cap, e) : davenport_constant(g, cap, e);
    const std::string name = which == Constant::gao ? "E" : "d";
    if (c.records) {
        out << constant_name(which) << " group=\"" << g.literal() << "\" value=" << r.value
            << " certificates=" << r.certificates.size() << "\n";
        for (const Sequence & s : r.certificates)
            out << "certificate " << format_sequence_line(s) << "\n";
    } else {
        out << name << "(" << g.literal() << ") = " << r.value << "\n"
            << r.certificates.size() << " free certificate orbit(s) of length "
            << (which == Constant::gao ? r.value - 1 : r.value) << "\n";
        for (const Sequence & s : r.certificates)
            out << "  " << format_sequence_line(s) << "\n";
    }
    return ok;
}

int cmd_classify(const Config & c, std::ostream & out)
{
    const GroupSpec g = group_of(c);
    if (c.length == 0 || c.k == 0)
        throw UsageError("classify needs --length and --k");
    EnumerationOptions e;
    e.jobs = c.jobs;
    e.search = search_of(c);
    const Classification r = classify_extremal(g, c.length, c.k, e);
    if (c.records) {
        out << "classify group=\"" << g.literal() << "\" length=" << c.length << " k=" << c.k << " free=" << r.free_count
            << " families=" << r.families.size() << " unmatched=" << r.unmatched.size()
            << " coverage=" << (r.coverage_complete ? "complete" : "incomplete") << "\n";
        for (const ExtremalFamily & f : r.families)
            for (std::size_t i = 0; i < f.representatives.size(); ++i)
                out << "family " << describe(f.parameters[i]) << " " << format_sequence_line(f.representatives[i]) << "\n";
        for (const Sequence & s : r.unmatched)
            out << "unmatched " << format_sequence_line(s) << "\n";
    } else {
        out << r.free_count << " free sequences of length " << c.length << " (no product-one subsequence of length " << c.k
            << "), " << r.families.size() << " famil" << (r.families.size() == 1 ? "y" : "ies") << "\n";
        for (const ExtremalFamily & f : r.families) {
            out << "  " << f.description << ": " << f.representatives.size() << " orbit(s)\n";
            for (const Sequence & s : f.representatives)
                out << "    " << format_sequence_line(s) << "\n";
        }
        for (const Sequence & s : r.unmatched)
            out << "  unmatched: " << format_sequence_line(s) << "\n";
        out << "coverage " << (r.coverage_complete ? "complete" : "incomplete") << "\n";
    }
    return r.unmatched.empty() && r.coverage_complete ? ok : claim_false;
}

TemplateKind kind_of(const std::string & name)
{
    if (name == "cyclic-pair")
        return TemplateKind::cyclic_pair;
    if (name == "rotation-pair-reflection")
        return TemplateKind::rotation_pair_reflection;
    if (name == "identity-reflections")
        return TemplateKind::identity_reflections;
    throw UsageError("--kind must be cyclic-pair, rotation-pair-reflection or identity-reflections");
}

int cmd_template(const Config & c, std::ostream & out)
{
    if (!c.seq.empty()) {
        const Sequence s = sequence_of(c);
        const auto m = check_template(s);
        if (c.records)
            out << "template match=" << (m ? "yes " + describe(*m) : std::string("no")) << "\n";
        else
            out << (m ? "matches " + describe(*m) : std::string("matches no extremal template")) << "\n";
        return m ? ok : claim_false;
    }
    if (c.kind.empty())
        throw UsageError("template needs --seq to match, or --kind with --t1 --t2 --t3 to build an instance");
    out << format_sequence_file(template_instance(group_of(c), kind_of(c.kind), c.t1, c.t2, c.t3));
    return ok;
}

int cmd_dgm(const Config & c, std::ostream & out)
{
    if (c.fuzz) {
        DgmFuzzOptions f;
        f.trials = c.trials;
        f.seed = c.seed;
        f.jobs = c.jobs;
        const DgmFuzzSummary r = dgm_fuzz(f);
        out << (c.records ? "dgm-fuzz trials=" : "DGM fuzz: trials ") << r.trials << (c.records ? " passed=" : ", passed ")
            << r.passed << (c.records ? " seed=" : ", seed ") << c.seed << "\n";
        for (const DgmReport & d : r.counterexamples)
            out << "counterexample n=" << d.n << " lhs=" << d.lhs << " rhs=" << d.rhs << " "
                << format_sequence_line(d.sequence) << "\n";
        return r.counterexamples.empty() ? ok : claim_false;
    }
    const Sequence s = sequence_of(c);
    if (c.n == 0)
        throw UsageError("dgm needs --n (or --fuzz)");
    const DgmReport r = dgm_check(s, c.n, search_of(c));
    if (c.records)
        out << "dgm n=" << r.n << " lhs=" << r.lhs << " rhs=" << r.rhs << " stabilizer=\"" << r.stabilizer.description()
            << "\" holds=" << (r.holds ? "yes" : "no") << "\n";
    else
        out << "|Pi_" << r.n << "(S)| = " << r.lhs << " >= " << r.rhs << " with stabilizer " << r.stabilizer.description()
            << (r.holds ? ": holds" : ": VIOLATED") << "\n";
    return r.holds ? ok : claim_false;
}

BigProductResult big_witness(const Config & c, const Sequence & s)
{
    const int n2 = main_family_n2(s.group());
    if (c.k != 0 && c.k != 6 * static_cast<std::size_t>(n2))
        throw UsageError("the witness finder searches length 6 n2 = " + std::to_string(6 * n2) + ", not --k "
            + std::to_string(c.k));
    return find_big_product_one(s, search_of(c));
}

int cmd_witness(const Config & c, std::ostream & out)
{
    const Sequence s = sequence_of(c);
    const BigProductResult r = big_witness(c, s);
    if (c.records)
        out << "witness-search length=" << s.length() << " result=" << (r.witness ? "found" : "free")
            << " rung=" << rung_name(r.rung) << "\n";
    else if (r.witness)
        out << "found by rung " << rung_name(r.rung) << "\n";
    else
        out << "no product-one subsequence of length " << 6 * main_family_n2(s.group()) << " (rung " << rung_name(r.rung) << ")\n";
    if (r.witness)
        out << format_witness_line(*r.witness) << "\n";
    return r.witness ? ok : claim_false;
}

int cmd_replay(const Config & c, std::ostream & out)
{
    const Sequence s = sequence_of(c);
    const BigProductResult r = big_witness(c, s);
    if (c.trace)
        for (const std::string & line : r.trace)
            out << line << "\n";
    out << "replay result=" << (r.witness ? "found" : "free") << " rung=" << rung_name(r.rung) << " steps=" << r.trace.size()
        << "\n";
    return r.witness ? ok : claim_false;
}

int cmd_repro(const Config & c, std::ostream & out, std::ostream & err)
{
    ReproOptions o{c.seed, c.jobs};
    const std::vector<std::string> ids = suite_criteria(c.suite);
    bool all = true;
    for (const std::string & id : ids) {
        const CriterionResult r = run_criterion(id, o);
        all = all && r.pass;
        out << format_result(r, c.records) << "\n";
        err << "criterion " << r.id << ": " << std::fixed << std::setprecision(2) << r.seconds << " s (limit " << r.limit
            << " s)\n";
    }
    out << (c.records ? "suite=" + c.suite + " result=" + (all ? "pass" : "fail")
                      : "suite " + c.suite + ": " + (all ? "all criteria pass" : "FAILURES"))
        << "\n";
    return all ? ok : claim_false;
}

} // namespace

int run(int argc, const char * const * argv, std::ostream & out, std::ostream & err)
{
    CLI::App app{"Product-one subsequences in metacyclic groups C_n x|_s C_2"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");
    Config c;
    try {
        c.budget = budget_default();
    } catch (const UsageError & e) {
        err << "error: " << e.what() << "\n";
        return usage;
    }

    auto common = [&](CLI::App * sub) {
        sub->add_flag("--records", c.records, "Emit key=value records");
        sub->add_option("--budget", c.budget, "State budget for exact searches (default $ZEROSUM_BUDGET or 10^8)")
            ->check(CLI::PositiveNumber);
    };
    auto with_group = [&](CLI::App * sub, bool required) {
        auto * o = sub->add_option("--group", c.group, "Group literal, e.g. \"metacyclic n=15 s=11\" or \"cyclic n=5\"");
        if (required)
            o->required();
    };
    auto with_seq = [&](CLI::App * sub) {
        sub->add_option("--seq", c.seq, "Sequence file (group line + seq line) or inline literal \"y^1 * 29, x*y^7 * 1\"");
    };
    auto with_jobs = [&](CLI::App * sub) { sub->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::Range(1, 256)); };

    auto * group = app.add_subcommand("group", "Describe a group");
    with_group(group, true);
    common(group);

    auto * pi = app.add_subcommand("pi", "Products of the whole sequence over all orderings");
    with_group(pi, false);
    with_seq(pi);
    common(pi);

    auto * sub = app.add_subcommand("subproducts", "Pi_n(S) and its stabilizer");
    with_group(sub, false);
    with_seq(sub);
    sub->add_option("--n", c.n, "Subsequence length")->required();
    common(sub);

    auto * check = app.add_subcommand("check", "Search for a product-one subsequence of length k");
    with_group(check, false);
    with_seq(check);
    check->add_option("--k", c.k, "Subsequence length")->required();
    check->add_option("--expect", c.expect, "Claim to test: free (default) or product-one");
    common(check);

    auto * verify = app.add_subcommand("verify-witness", "Check a witness line against a sequence");
    with_group(verify, false);
    with_seq(verify);
    verify->add_option("--witness", c.witness, "Witness file or inline line \"witness k=.. target=.. : ...\"")->required();
    common(verify);

    auto * gao = app.add_subcommand("gao", "Gao constant E(G) by exhaustive enumeration");
    with_group(gao, true);
    gao->add_option("--max-length", c.max_length, "Largest length to try");
    with_jobs(gao);
    common(gao);

    auto * dav = app.add_subcommand("davenport", "Small Davenport constant d(G) by exhaustive enumeration");
    with_group(dav, true);
    dav->add_option("--max-length", c.max_length, "Largest length to try");
    with_jobs(dav);
    common(dav);

    auto * classify = app.add_subcommand("classify", "Classify free sequences of a length into extremal families");
    with_group(classify, true);
    classify->add_option("--length", c.length, "Sequence length")->required();
    classify->add_option("--k", c.k, "Forbidden product-one length")->required();
    with_jobs(classify);
    common(classify);

    auto * templ = app.add_subcommand("template", "Match a sequence against the extremal templates, or build one");
    with_group(templ, false);
    with_seq(templ);
    templ->add_option("--kind", c.kind, "cyclic-pair, rotation-pair-reflection or identity-reflections");
    templ->add_option("--t1", c.t1);
    templ->add_option("--t2", c.t2);
    templ->add_option("--t3", c.t3);
    common(templ);

    auto * dgm = app.add_subcommand("dgm", "Check the DeVos-Goddyn-Mohar bound on one sequence or by fuzzing");
    with_group(dgm, false);
    with_seq(dgm);
    dgm->add_option("--n", c.n, "Subsequence length");
    dgm->add_flag("--fuzz", c.fuzz, "Run seeded random instances");
    dgm->add_option("--trials", c.trials, "Fuzz trials");
    dgm->add_option("--seed", c.seed, "Fuzz seed");
    with_jobs(dgm);
    common(dgm);

    auto * witness = app.add_subcommand("witness", "Find a product-one subsequence of length 6 n2 in a main-family group");
    with_group(witness, false);
    with_seq(witness);
    witness->add_option("--k", c.k, "Must equal 6 n2 when given");
    common(witness);

    auto * replay = app.add_subcommand("replay", "Run the witness finder and print its step log");
    with_group(replay, false);
    with_seq(replay);
    replay->add_option("--k", c.k, "Must equal 6 n2 when given");
    replay->add_flag("--trace", c.trace, "Print every step record");
    common(replay);

    auto * repro = app.add_subcommand("repro", "Run a reproduction suite: cyclic, d6, main-theorem, dgm or all");
    repro->add_option("suite", c.suite, "Suite name")->required()->check(CLI::IsMember(suite_names()));
    repro->add_option("--seed", c.seed, "Seed for every randomized check");
    with_jobs(repro);
    repro->add_flag("--records", c.records, "Emit key=value records");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError & e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage;
    }

    try {
        if (group->parsed())
            return cmd_group(c, out);
        if (pi->parsed())
            return cmd_pi(c, out);
        if (sub->parsed())
            return cmd_subproducts(c, out);
        if (check->parsed())
            return cmd_check(c, out);
        if (verify->parsed())
            return cmd_verify(c, out);
        if (gao->parsed())
            return cmd_constant(c, out, Constant::gao);
        if (dav->parsed())
            return cmd_constant(c, out, Constant::davenport);
        if (classify->parsed())
            return cmd_classify(c, out);
        if (templ->parsed())
            return cmd_template(c, out);
        if (dgm->parsed())
            return cmd_dgm(c, out);
        if (witness->parsed())
            return cmd_witness(c, out);
        if (replay->parsed())
            return cmd_replay(c, out);
        if (repro->parsed())
            return cmd_repro(c, out, err);
    } catch (const InfeasibleSize & e) {
        err << "infeasible: " << e.what() << "\n";
        return infeasible;
    } catch (const BudgetExceeded & e) {
        err << "budget: " << e.what() << " (raise --budget or ZEROSUM_BUDGET)\n";
        return budget;
    } catch (const Error & e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const std::exception & e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
    return usage;
}

} // namespace zerosum::cli
