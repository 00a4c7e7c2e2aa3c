#include "zerosum/cli.hpp"

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run zerosum_cmd(std::vector<std::string> args)
{
    args.insert(args.begin(), "zerosum");
    std::vector<const char *> argv;
    for (const auto & a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = zerosum::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string & name)
{
    return std::string(TEST_DATA_DIR) + "/" + name;
}

const std::string c15 = "metacyclic n=15 s=11";
const std::string d6 = "metacyclic n=3 s=2";

} // namespace

TEST_CASE("constants")
{
    Run r = zerosum_cmd({"gao", "--group", d6});
    CHECK(r.code == 0);
    CHECK(r.out.find("= 9") != std::string::npos);
    Run rec = zerosum_cmd({"gao", "--group", d6, "--records"});
    CHECK(rec.out.find("value=9") != std::string::npos);
    CHECK(zerosum_cmd({"davenport", "--group", d6, "--records"}).out.find("value=3") != std::string::npos);
    CHECK(zerosum_cmd({"gao", "--group", "cyclic n=5", "--records", "--jobs", "3"}).out.find("value=9") != std::string::npos);
    Run big = zerosum_cmd({"gao", "--group", c15});
    CHECK(big.code == zerosum::cli::infeasible);
    CHECK(big.err.find("infeasible") != std::string::npos);
}

TEST_CASE("group description")
{
    Run r = zerosum_cmd({"group", "--group", c15, "--records"});
    CHECK(r.code == 0);
    CHECK(r.out.find("order=30") != std::string::npos);
    CHECK(r.out.find("n1=3 n2=5") != std::string::npos);
    CHECK(r.out.find("main_family=yes") != std::string::npos);
    Run bad = zerosum_cmd({"group", "--group", "metacyclic n=15 s=2"});
    CHECK(bad.code == zerosum::cli::usage);
    CHECK(bad.err.find("s^2") != std::string::npos);
}

TEST_CASE("free and product-one checks")
{
    Run r = zerosum_cmd({"check", "--seq", data("extremal_c15.seq"), "--k", "30"});
    CHECK(r.code == 0);
    CHECK(r.out.find("30-product-one free") != std::string::npos);
    CHECK(zerosum_cmd({"check", "--seq", data("extremal_c15.seq"), "--k", "30", "--expect", "product-one"}).code
        == zerosum::cli::claim_false);
    Run found = zerosum_cmd({"check", "--seq", data("extremal_plus_identity_c15.seq"), "--k", "30", "--records"});
    CHECK(found.code == zerosum::cli::claim_false);
    CHECK(found.out.find("result=product-one") != std::string::npos);
    CHECK(found.out.find("witness k=30 target=1 :") != std::string::npos);
    CHECK(zerosum_cmd({"check", "--seq", data("d6_extremal.seq"), "--k", "6"}).code == 0);
    CHECK(zerosum_cmd({"check", "--group", d6, "--seq", "x * 2", "--k", "2", "--expect", "product-one"}).code == 0);
}

TEST_CASE("witness verification")
{
    const std::string seq = data("extremal_plus_identity_c15.seq");
    CHECK(zerosum_cmd({"verify-witness", "--seq", seq, "--witness", data("witness_c15.txt")}).code == 0);
    Run bad = zerosum_cmd({"verify-witness", "--seq", seq, "--witness", data("witness_c15_tampered.txt"), "--records"});
    CHECK(bad.code == zerosum::cli::claim_false);
    CHECK(bad.out.find("result=rejected") != std::string::npos);
    Run wrong = zerosum_cmd({"verify-witness", "--group", d6, "--seq", "x * 1, y^1 * 1", "--witness", "witness k=2 target=1 : x y^1"});
    CHECK(wrong.code == zerosum::cli::claim_false);
    CHECK(wrong.out.find("product-mismatch") != std::string::npos);
    CHECK(zerosum_cmd({"verify-witness", "--seq", seq, "--witness", "witness k=3 target=1 : 1 1"}).code == zerosum::cli::usage);
}

TEST_CASE("big witness finder and replay")
{
    Run w = zerosum_cmd({"witness", "--seq", data("random45_c15.seq"), "--k", "30"});
    CHECK(w.code == 0);
    const auto line_at = w.out.find("witness k=30");
    REQUIRE(line_at != std::string::npos);
    std::string line = w.out.substr(line_at);
    line = line.substr(0, line.find('\n'));
    CHECK(zerosum_cmd({"verify-witness", "--seq", data("random45_c15.seq"), "--witness", line}).code == 0);

    CHECK(zerosum_cmd({"witness", "--seq", data("extremal_c15.seq")}).code == zerosum::cli::claim_false);
    CHECK(zerosum_cmd({"witness", "--seq", data("random45_c15.seq"), "--k", "29"}).code == zerosum::cli::usage);
    CHECK(zerosum_cmd({"witness", "--seq", data("d6_extremal.seq")}).code == zerosum::cli::usage);

    Run t = zerosum_cmd({"replay", "--seq", data("random45_c15.seq"), "--trace"});
    CHECK(t.code == 0);
    std::istringstream lines(t.out);
    std::string l;
    int steps = 0;
    while (std::getline(lines, l)) {
        CHECK(l.find('=') != std::string::npos);
        steps += l.rfind("step=", 0) == 0;
    }
    CHECK(steps >= 3);
    CHECK(t.out.find("step=extract blocks=8") != std::string::npos);
}

TEST_CASE("templates and classification")
{
    CHECK(zerosum_cmd({"template", "--seq", data("extremal_c15.seq")}).code == 0);
    CHECK(zerosum_cmd({"template", "--seq", data("random45_c15.seq")}).code == zerosum::cli::claim_false);
    Run built = zerosum_cmd({"template", "--group", c15, "--kind", "rotation-pair-reflection", "--t1", "1", "--t2", "0", "--t3", "0"});
    CHECK(built.out == "group metacyclic n=15 s=11\nseq 1 * 14, y^1 * 29, x * 1\n");
    CHECK(zerosum_cmd({"template", "--group", c15, "--kind", "bogus"}).code == zerosum::cli::usage);
    Run cls = zerosum_cmd({"classify", "--group", d6, "--length", "8", "--k", "6", "--records"});
    CHECK(cls.code == 0);
    CHECK(cls.out.find("families=2") != std::string::npos);
    CHECK(cls.out.find("coverage=complete") != std::string::npos);
}

TEST_CASE("DGM checks and fuzzing")
{
    Run one = zerosum_cmd({"dgm", "--group", "cyclic n=6", "--seq", "y^1 * 3, y^2 * 2", "--n", "2", "--records"});
    CHECK(one.code == 0);
    CHECK(one.out.find("holds=yes") != std::string::npos);
    CHECK(zerosum_cmd({"dgm", "--group", d6, "--seq", "x * 2", "--n", "1"}).code == zerosum::cli::usage);
    Run a = zerosum_cmd({"dgm", "--fuzz", "--trials", "300", "--seed", "7", "--records"});
    Run b = zerosum_cmd({"dgm", "--fuzz", "--trials", "300", "--seed", "7", "--records", "--jobs", "4"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("passed=300") != std::string::npos);
}

TEST_CASE("budgets and usage errors")
{
    const std::string seq = data("extremal_c15.seq");
    CHECK(zerosum_cmd({"check", "--seq", seq, "--k", "30", "--budget", "10"}).code == zerosum::cli::budget);
    setenv("ZEROSUM_BUDGET", "10", 1);
    CHECK(zerosum_cmd({"check", "--seq", seq, "--k", "30"}).code == zerosum::cli::budget);
    CHECK(zerosum_cmd({"check", "--seq", seq, "--k", "30", "--budget", "100000000"}).code == 0);
    setenv("ZEROSUM_BUDGET", "lots", 1);
    CHECK(zerosum_cmd({"check", "--seq", seq, "--k", "30"}).code == zerosum::cli::usage);
    unsetenv("ZEROSUM_BUDGET");

    CHECK(zerosum_cmd({}).code == zerosum::cli::usage);
    CHECK(zerosum_cmd({"check", "--k", "3"}).code == zerosum::cli::usage);
    CHECK(zerosum_cmd({"check", "--seq", seq}).code == zerosum::cli::usage);
    CHECK(zerosum_cmd({"check", "--seq", seq, "--k", "30", "--group", d6}).code == zerosum::cli::usage);
    Run parse = zerosum_cmd({"pi", "--group", d6, "--seq", "x * 1, z^2 * 1"});
    CHECK(parse.code == zerosum::cli::usage);
    CHECK(parse.err.find("line 1, column") != std::string::npos);
    CHECK(zerosum_cmd({"repro", "bogus"}).code == zerosum::cli::usage);
    CHECK(zerosum_cmd({"gao", "--help"}).code == 0);
}

TEST_CASE("reproduction suites are deterministic")
{
    Run a = zerosum_cmd({"repro", "d6", "--seed", "42"});
    Run b = zerosum_cmd({"repro", "d6", "--seed", "42", "--jobs", "4"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("PASS 3") != std::string::npos);
    CHECK(a.err.find("criterion 3:") != std::string::npos);
    Run c = zerosum_cmd({"repro", "cyclic", "--records"});
    CHECK(c.code == 0);
    CHECK(c.out.find("suite=cyclic result=pass") != std::string::npos);
    Run m = zerosum_cmd({"repro", "main-theorem", "--seed", "42", "--records"});
    Run m2 = zerosum_cmd({"repro", "main-theorem", "--seed", "42", "--records", "--jobs", "8"});
    CHECK(m.code == 0);
    CHECK(m.out == m2.out);
}
