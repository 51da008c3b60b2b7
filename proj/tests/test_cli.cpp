// End-to-end checks of the command-line surface: exit codes, file outputs,
// and byte determinism of repeated invocations.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cmath>
#include <cstdlib>
#include <sys/wait.h>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef IONET_CLI_PATH
#error "IONET_CLI_PATH must point at the built binary"
#endif

namespace {

struct Invocation {
    int exit_code = -1;
    std::string stdout_text;
};

int run_silent(const std::string &args) {
    const std::string cmd =
        std::string(IONET_CLI_PATH) + " " + args + " >/dev/null 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

Invocation run_capture(const std::string &args, const std::string &tag) {
    const std::string out_path = "ionet_cli_out_" + tag + ".txt";
    const std::string cmd =
        std::string(IONET_CLI_PATH) + " " + args + " >" + out_path + " 2>/dev/null";
    Invocation inv;
    inv.exit_code = WEXITSTATUS(std::system(cmd.c_str()));
    std::ifstream in(out_path);
    std::ostringstream os;
    os << in.rdbuf();
    inv.stdout_text = os.str();
    std::remove(out_path.c_str());
    return inv;
}

void write(const std::string &path, const std::string &text) {
    std::ofstream out(path);
    out << text;
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string &p) : path(p) {}
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("influence command on the six-firm example") {
    TempFile fig("cli_fig1.json");
    const Invocation made =
        run_capture("construct --name figure1 --out-prefix cli_fig1_c", "mk");
    REQUIRE(made.exit_code == 0);
    TempFile c1("cli_fig1_c.json"), c2("cli_fig1_c-closed-form.json");
    std::rename("cli_fig1_c.json", fig.path.c_str());

    const Invocation inv =
        run_capture("influence --matrix " + fig.path + " --alpha 0.5", "inf");
    CHECK(inv.exit_code == 0);
    const auto doc = nlohmann::json::parse(inv.stdout_text);
    CHECK(doc["method"] == "direct");
    CHECK(std::abs(doc["v"][0].get<double>() - 1.0 / 3.0) <= 1e-10);
    CHECK(std::abs(doc["v"][2].get<double>() - 1.0 / 12.0) <= 1e-10);

    const Invocation power = run_capture(
        "influence --matrix " + fig.path + " --alpha 0.5 --method power --tol 1e-12", "pow");
    CHECK(power.exit_code == 0);
    const auto pdoc = nlohmann::json::parse(power.stdout_text);
    double l1 = 0.0;
    for (int i = 0; i < 6; ++i)
        l1 += std::abs(pdoc["v"][i].get<double>() - doc["v"][i].get<double>());
    CHECK(l1 <= 1e-11);
}

TEST_CASE("missing input file exits with the input code") {
    CHECK(run_silent("influence --matrix no_such_file.json --alpha 0.5") == 2);
}

TEST_CASE("usage errors exit with the input code") {
    CHECK(run_silent("influence --alpha 0.5") == 2);      // missing --matrix
    CHECK(run_silent("no-such-subcommand") == 2);
    CHECK(run_silent("--help") == 0);
}

TEST_CASE("invalid matrix exits with the input code") {
    TempFile bad("cli_bad.csv");
    write(bad.path, "0,0.5\n1,0\n");
    CHECK(run_silent("influence --matrix cli_bad.csv --alpha 0.5") == 2);
}

TEST_CASE("certify holds on the worst-case pair and respects --strict") {
    const Invocation made = run_capture(
        "construct --name lower-bound --n 10 --delta 0.1 --out-prefix cli_lb", "mklb");
    REQUIRE(made.exit_code == 0);
    TempFile w("cli_lb-w.json"), u("cli_lb-u.json"), cf("cli_lb-closed-form.json");

    const Invocation inv = run_capture(
        "certify --true cli_lb-w.json --observed cli_lb-u.json --alpha 0.5 --delta 0.1",
        "cert");
    CHECK(inv.exit_code == 0);
    std::istringstream lines(inv.stdout_text);
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
        const auto doc = nlohmann::json::parse(line);
        CHECK(doc["holds"].get<bool>());
        ++count;
    }
    CHECK(count == 6);

    // certificates that cannot hold: delta=0 forces a zero bound on a pair
    // with a real gap, and --strict turns that into exit 4
    CHECK(run_silent("--strict certify --true cli_lb-w.json --observed cli_lb-u.json "
                     "--alpha 0.5 --delta 0.0") == 4);
}

TEST_CASE("observe applies a spec from disk") {
    TempFile m("cli_obs.csv"), spec("cli_obs_spec.json"), out("cli_obs_u.csv");
    write(m.path, "0,0.5,0.5\n0.5,0,0.5\n0.5,0.5,0\n");
    write(spec.path, R"({"d":[0.2,0,0],"c":[{"i":0,"j":1,"v":0.2}]})");
    CHECK(run_silent("observe --matrix cli_obs.csv --spec cli_obs_spec.json --out "
                     "cli_obs_u.csv") == 0);
    std::ifstream in(out.path);
    std::string first;
    std::getline(in, first);
    double a = -1, b = -1, c = -1;
    REQUIRE(std::sscanf(first.c_str(), "%lf,%lf,%lf", &a, &b, &c) == 3);
    CHECK(a == 0.0);
    CHECK(std::abs(b - 0.375) <= 1e-15);
    CHECK(std::abs(c - 0.625) <= 1e-15);
}

TEST_CASE("simulate reports are byte-identical across runs") {
    TempFile flows("cli_flows.json");
    nlohmann::json doc;
    doc["n"] = 4;
    doc["y"] = {{0, 200, 200, 200}, {200, 0, 200, 200}, {200, 200, 0, 200},
                {200, 200, 200, 0}};
    write(flows.path, doc.dump());
    const std::string args = "simulate --flows cli_flows.json --zeta 0.1 --epsilon 0.2 "
                             "--trials 500 --seed 7";
    const Invocation a = run_capture(args, "sim1");
    const Invocation b = run_capture(args, "sim2");
    CHECK(a.exit_code == 0);
    CHECK(a.stdout_text == b.stdout_text);
    const auto rep = nlohmann::json::parse(a.stdout_text);
    CHECK(rep["trials"] == 500);
    CHECK(rep["empirical_success"].get<double>() >= 0.9);
}

TEST_CASE("chain report on a singleton-style chain") {
    TempFile m("cli_chain.csv"), part("cli_chain_part.json");
    write(m.path, "0,1,0,0\n1,0,0,0\n0.5,0.5,0,0\n0,0,1,0\n");
    write(part.path, R"({"blocks":[[0,1],[2],[3]]})");
    const Invocation inv = run_capture(
        "chain --matrix cli_chain.csv --partition cli_chain_part.json --alpha 0.5", "chain");
    CHECK(inv.exit_code == 0);
    const auto doc = nlohmann::json::parse(inv.stdout_text);
    CHECK(doc["weakly_coupled"].get<bool>());
    CHECK(doc["max_dev_vs_direct"].get<double>() <= 1e-10);
    CHECK(doc["block_sizes"] == nlohmann::json({2, 1, 1}));
}

TEST_CASE("sweep emits a linear-in-delta series") {
    const Invocation inv = run_capture(
        "sweep --construction lower-bound --param delta --grid 0.01:0.2:0.01 --n 10 "
        "--alpha 0.5",
        "sweep");
    CHECK(inv.exit_code == 0);
    std::istringstream lines(inv.stdout_text);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "delta,measured,bound");
    std::string line;
    int rows = 0;
    double first_ratio = 0.0;
    while (std::getline(lines, line)) {
        double d = 0, measured = 0, bound = 0;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &d, &measured, &bound) == 3);
        const double ratio = measured / d;
        if (rows == 0)
            first_ratio = ratio;
        CHECK(std::abs(ratio - first_ratio) / first_ratio <= 0.05);
        CHECK(measured <= bound + 1e-12);
        ++rows;
    }
    CHECK(rows == 20);
}

TEST_CASE("verify-all reports are byte-identical across consecutive runs") {
    TempFile r1("cli_verify1.jsonl"), r2("cli_verify2.jsonl");
    const Invocation a =
        run_capture("verify-all --seed 20240701 --out " + r1.path, "verify1");
    const Invocation b =
        run_capture("verify-all --seed 20240701 --out " + r2.path, "verify2");
    CHECK(a.exit_code == 0);
    CHECK(b.exit_code == 0);
    CHECK(a.stdout_text == b.stdout_text);
    CHECK(a.stdout_text.find("11/11 criteria passed") != std::string::npos);
    std::ifstream f1(r1.path), f2(r2.path);
    std::ostringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    CHECK(s1.str() == s2.str());
    CHECK_FALSE(s1.str().empty());
}

TEST_CASE("construct emits matrices with closed forms") {
    const Invocation inv = run_capture(
        "construct --name locality --n 12 --k 4 --b 1e-8 --alpha 0.5 --out-prefix cli_loc",
        "loc");
    CHECK(inv.exit_code == 0);
    TempFile full("cli_loc-full.json"), trunc("cli_loc-truncated.json"),
        cf("cli_loc-closed-form.json");
    std::ifstream in(cf.path);
    nlohmann::json doc;
    in >> doc;
    REQUIRE(doc.size() == 2);
    CHECK(doc[0]["closed_form"].size() == 12);
    CHECK(doc[1]["closed_form"].size() == 5);
}
