#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

struct CliResult {
    int exit_code;
    std::string out;
};

// Runs the installed binary through the shell; stderr is dropped unless
// the caller redirects it inside args.
CliResult run_cli(const std::string& args, bool keep_stderr = false) {
    std::string cmd = std::string(HEUN_CLI_PATH) + " " + args;
    if (!keep_stderr) cmd += " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
    int status = pclose(pipe);
    REQUIRE(WIFEXITED(status));
    return {WEXITSTATUS(status), out};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

const std::string kRationalFlags =
    "--a 2 --q 1 --alpha 1 --beta 2 --gamma 1 --delta 1";

}  // namespace

TEST_CASE("eval emits the full record schema") {
    CliResult r = run_cli("eval " + kRationalFlags +
                          " --x 0.1 --method frobenius");
    CHECK(r.exit_code == 0);
    json doc = json::parse(r.out);
    REQUIRE(doc.is_object());
    CHECK(doc.size() == 8);
    for (const char* key : {"params", "branch", "method", "x", "value", "d1",
                            "error_estimate", "terms_used"})
        CHECK(doc.contains(key));
    CHECK(doc["params"].size() == 7);
    CHECK(doc["params"]["epsilon"].get<double>() == 2.0);
    CHECK(doc["branch"] == "first");
    CHECK(doc["method"] == "frobenius");
    CHECK(doc["value"].get<double>() ==
          doctest::Approx(20.0 / 19.0).epsilon(1e-15));
    CHECK(doc["d1"].is_number());
    CHECK(doc["terms_used"].is_number_integer());
}

TEST_CASE("absent quantities are null not omitted") {
    CliResult r = run_cli("eval " + kRationalFlags + " --x 0.1 --method rk");
    CHECK(r.exit_code == 0);
    json doc = json::parse(r.out);
    CHECK(doc.size() == 8);
    CHECK(doc["d1"].is_null());
    CHECK(doc["terms_used"].is_null());
    CHECK(doc["error_estimate"].get<double>() == 1e-10);
    CHECK(doc["value"].get<double>() ==
          doctest::Approx(20.0 / 19.0).epsilon(1e-9));
}

TEST_CASE("coefficient table golden bytes") {
    CliResult r = run_cli("coeffs " + kRationalFlags + " --order 2");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "k,c_k\n0,1\n1,0.5\n2,0.25\n");
    CliResult again = run_cli("coeffs " + kRationalFlags + " --order 2");
    CHECK(again.out == r.out);
}

TEST_CASE("coefficient routes agree bytewise on polynomials") {
    std::string flags = "--a 2 --q -2 --alpha 0 --beta -1 --gamma 0.5 "
                        "--delta 1 --order 10";
    CliResult fr = run_cli("coeffs " + flags + " --method frobenius");
    CliResult tr = run_cli("coeffs " + flags + " --method trf");
    CHECK(fr.exit_code == 0);
    CHECK(tr.exit_code == 0);
    CHECK(fr.out == tr.out);
    CHECK(fr.out.find("k,c_k\n0,1\n1,-2\n2,0\n") == 0);
}

TEST_CASE("output file writing") {
    std::string path = "/tmp/heun_cli_coeffs.csv";
    std::remove(path.c_str());
    CliResult r =
        run_cli("coeffs " + kRationalFlags + " --order 2 --out " + path);
    CHECK(r.exit_code == 0);
    CHECK(r.out.empty());
    CHECK(slurp(path) == "k,c_k\n0,1\n1,0.5\n2,0.25\n");
}

TEST_CASE("exit code mapping") {
    CHECK(run_cli("eval --a 0 --q 1 --alpha 1 --beta 2 --gamma 1 --delta 1 "
                  "--x 0.1")
              .exit_code == 2);
    CHECK(run_cli("eval " + kRationalFlags + " --x 1.5").exit_code == 2);
    CHECK(run_cli("eval " + kRationalFlags +
                  " --x 0.45 --method trf --n-max 2")
              .exit_code == 3);
    CHECK(run_cli("eval " + kRationalFlags).exit_code == 1);  // missing --x
    CHECK(run_cli("eval " + kRationalFlags + " --x 0.1 --method foo")
              .exit_code == 1);
    CHECK(run_cli("frobulate").exit_code == 1);
    CHECK(run_cli("--help").exit_code == 0);

    CliResult domain_err = run_cli(
        "eval --a 0 --q 1 --alpha 1 --beta 2 --gamma 1 --delta 1 --x 0.1");
    json doc = json::parse(domain_err.out);
    CHECK(doc["error"]["kind"] == "domain");
    CHECK(std::string(doc["error"]["message"]).find("singular parameter") !=
          std::string::npos);
}

TEST_CASE("epsilon flag is rejected with the derivation rule") {
    CliResult r = run_cli("eval " + kRationalFlags + " --x 0.1 --epsilon 3");
    CHECK(r.exit_code == 1);
    json doc = json::parse(r.out);
    CHECK(doc["error"]["kind"] == "usage");
    CHECK(std::string(doc["error"]["message"])
              .find("alpha + beta - gamma - delta + 1") !=
          std::string::npos);
}

TEST_CASE("domain-edge warning goes to stderr") {
    std::string errfile = "/tmp/heun_cli_stderr.txt";
    std::remove(errfile.c_str());
    CliResult r = run_cli("eval --a 0.8 --q 0.5 --alpha 0.8 --beta 1.3 "
                          "--gamma 0.5 --delta 0.7 --x 0.41 "
                          "--method frobenius 2>" +
                              errfile,
                          true);
    CHECK(r.exit_code == 0);
    std::string err = slurp(errfile);
    CHECK(err.find("warning:") != std::string::npos);
    CHECK(err.find("0.5*min(1,|a|)") != std::string::npos);
    // Inside the safe region there is no warning.
    std::remove(errfile.c_str());
    run_cli("eval " + kRationalFlags + " --x 0.1 2>" + errfile, true);
    CHECK(slurp(errfile).empty());
}

TEST_CASE("transform subcommand") {
    CliResult r = run_cli("transform " + kRationalFlags +
                          " --x 0.1 --builtin eq61");
    CHECK(r.exit_code == 0);
    json doc = json::parse(r.out);
    CHECK(doc["method"] == "transform:eq61");
    CHECK(doc["value"].get<double>() ==
          doctest::Approx(20.0 / 19.0).epsilon(1e-11));

    CliResult ident = run_cli("transform " + kRationalFlags +
                              " --x 0.1 --builtin identity");
    CliResult plain =
        run_cli("eval " + kRationalFlags + " --x 0.1 --method trf");
    json a = json::parse(ident.out), b = json::parse(plain.out);
    CHECK(a["value"].get<double>() == b["value"].get<double>());

    CHECK(run_cli("transform " + kRationalFlags + " --x 0.1").exit_code ==
          1);
    CHECK(run_cli("transform " + kRationalFlags +
                  " --x 0.1 --builtin nope")
              .exit_code == 1);
}

TEST_CASE("transform from a table file") {
    std::string table = std::string(HEUN_DATA_DIR) + "/sample_table.json";
    std::string flags = "--a 2 --q 0.5 --alpha 0.8 --beta 1.3 --gamma 0.5 "
                        "--delta 0.7";
    CliResult r = run_cli("transform " + flags + " --x 0.1 --table " +
                          table + " --record second_local");
    CHECK(r.exit_code == 0);
    json doc = json::parse(r.out);
    CHECK(doc["method"] == "transform:second_local");
    // x^{1/2} times the shifted series, normalized to c_0 = 1.
    double c0 = std::pow(2.0, -0.25);
    CHECK(doc["value"].get<double>() ==
          doctest::Approx(0.2863379929923215575 / c0).epsilon(1e-10));

    CHECK(run_cli("transform " + flags + " --x 0.1 --table " + table)
              .exit_code == 1);
    CHECK(run_cli("transform " + flags + " --x 0.1 --table " + table +
                  " --record missing")
              .exit_code == 1);
    CHECK(run_cli("transform " + flags + " --x 0.1 --table /nope.json "
                  "--record second_local")
              .exit_code == 1);
    CHECK(run_cli("transform " + flags + " --x 0.1 --table " + table +
                  " --builtin eq61")
              .exit_code == 1);
}

TEST_CASE("compare subcommand") {
    CliResult r =
        run_cli("compare " + kRationalFlags + " --xs 0.1,0.2");
    CHECK(r.exit_code == 0);
    json doc = json::parse(r.out);
    REQUIRE(doc["points"].size() == 2);
    CHECK(doc["points"][0]["values"].size() == 3);
    CHECK(doc["max_rel_discrepancy"].get<double>() <= 1e-9);
    CHECK(doc["per_method_error_estimates"]["rk"].get<double>() == 1e-10);

    CliResult sel = run_cli("compare " + kRationalFlags +
                            " --xs 0.1 --methods frobenius,trf");
    json doc2 = json::parse(sel.out);
    CHECK(doc2["points"][0]["values"].size() == 2);
    CHECK(run_cli("compare " + kRationalFlags + " --xs 0.1,zap")
              .exit_code == 1);
    CHECK(run_cli("compare " + kRationalFlags +
                  " --xs 0.1 --methods frobenius,warp")
              .exit_code == 1);
}

TEST_CASE("sweep subcommand") {
    CliResult r = run_cli("sweep " + kRationalFlags +
                          " --sweep x:0.1:0.3:3 --method frobenius");
    CHECK(r.exit_code == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "sym,value,error_estimate,note");
    int rows = 0;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 3);

    // Failed grid points produce nan rows with a note, not a failure.
    CliResult mixed = run_cli("sweep --a 2 --q 1 --alpha 1 --beta 2 "
                              "--gamma 1 --delta 1 --sweep a:-1:1:3 "
                              "--x 0.1 --method frobenius");
    CHECK(mixed.exit_code == 0);
    CHECK(mixed.out.find("nan,nan,") != std::string::npos);
    CHECK(mixed.out.find("singular parameter") != std::string::npos);

    CHECK(run_cli("sweep " + kRationalFlags + " --sweep q:0:1:5")
              .exit_code == 1);  // sweeping q needs --x
    CHECK(run_cli("sweep " + kRationalFlags + " --sweep x:0.1:0.1:3")
              .exit_code == 1);
    CHECK(run_cli("sweep " + kRationalFlags + " --sweep x:0.1:0.3:1")
              .exit_code == 1);
    CHECK(run_cli("sweep " + kRationalFlags + " --sweep y:0:1:3 --x 0.1")
              .exit_code == 1);
    CHECK(run_cli("sweep " + kRationalFlags + " --sweep x:0.1:0.3")
              .exit_code == 1);
}

TEST_CASE("sweep respects the output file") {
    std::string path = "/tmp/heun_cli_sweep.csv";
    std::remove(path.c_str());
    CliResult r = run_cli("sweep " + kRationalFlags +
                          " --sweep q:0:1:3 --x 0.1 --out " + path);
    CHECK(r.exit_code == 0);
    CHECK(r.out.empty());
    std::string body = slurp(path);
    CHECK(body.find("sym,value,error_estimate,note\n") == 0);
    CHECK(body.find("\n0.5,") != std::string::npos);
}
