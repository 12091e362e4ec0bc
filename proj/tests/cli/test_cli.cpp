#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string data_file(const char* name) { return std::string(NRM_DATA_DIR) + "/" + name; }
std::string spec_file(const char* name) { return std::string(NRM_SPECS_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spill(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << content;
}

struct CmdResult {
    int code = -1;
    std::string out;
    std::string err;
};

CmdResult run_cli(const std::string& args) {
    static bool cleared = (unsetenv("NRM_LAB_WORKERS"), true);
    (void)cleared;
    const std::string cmd =
        std::string("\"") + NRM_CLI_PATH + "\" " + args + " > cli_stdout.txt 2> cli_stderr.txt";
    const int status = std::system(cmd.c_str());
    CmdResult res;
    res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    res.out = slurp("cli_stdout.txt");
    res.err = slurp("cli_stderr.txt");
    return res;
}

}  // namespace

TEST_CASE("solve-dlp prints value, solution and degeneracy verdict") {
    const CmdResult degen = run_cli("solve-dlp " + data_file("two_class_b10.json"));
    CHECK(degen.code == 0);
    CHECK(degen.out ==
          "v_dlp = 2000\n"
          "x* = (1, 0)\n"
          "verdict: degenerate (counts 2+1=3 > n=2)\n");

    const CmdResult nondegen = run_cli("solve-dlp " + data_file("two_class_b15.json"));
    CHECK(nondegen.code == 0);
    CHECK(nondegen.out ==
          "v_dlp = 2500\n"
          "x* = (1, 0.5)\n"
          "verdict: nondegenerate (counts 1+1=2 = n=2)\n");
}

TEST_CASE("bad inputs exit with status 2 and a diagnostic") {
    const CmdResult missing = run_cli("solve-dlp no_such_instance.json");
    CHECK(missing.code == 2);
    CHECK(missing.err.find("does not exist") != std::string::npos);

    spill("cli_bad.json", "this is not json");
    const CmdResult bad = run_cli("solve-dlp cli_bad.json");
    CHECK(bad.code == 2);
    CHECK(bad.err.rfind("error: ", 0) == 0);

    spill("cli_incomplete.json", "{\"horizon\": 10}");
    const CmdResult incomplete = run_cli("solve-dlp cli_incomplete.json");
    CHECK(incomplete.code == 2);
    CHECK(incomplete.err.find("lambda") != std::string::npos);

    const CmdResult no_subcommand = run_cli("");
    CHECK(no_subcommand.code == 2);

    const CmdResult help = run_cli("--help");
    CHECK(help.code == 0);
    CHECK(help.out.find("solve-dlp") != std::string::npos);
    CHECK(help.out.find("replay") != std::string::npos);
    std::remove("cli_bad.json");
    std::remove("cli_incomplete.json");
}

TEST_CASE("sample-path then replay is reproducible") {
    const std::string inst = data_file("single_class.json");
    const CmdResult sampled = run_cli("sample-path " + inst + " --seed 5 --out cli_path.jsonl");
    CHECK(sampled.code == 0);
    CHECK(sampled.out.rfind("wrote cli_path.jsonl (", 0) == 0);
    CHECK(sampled.out.find(" events)\n") != std::string::npos);

    const std::string replay_cmd =
        "replay " + inst + " cli_path.jsonl FR --trace cli_trace1.csv";
    const CmdResult r1 = run_cli(replay_cmd);
    CHECK(r1.code == 0);
    CHECK(r1.out.rfind("events = ", 0) == 0);
    CHECK(r1.out.find("\nrevenue = ") != std::string::npos);
    CHECK(r1.out.find("trace written to cli_trace1.csv\n") != std::string::npos);

    const CmdResult r2 =
        run_cli("replay " + inst + " cli_path.jsonl FR --trace cli_trace2.csv");
    CHECK(r2.code == 0);
    // identical up to the trace filename echoed on the last line
    CHECK(r2.out.substr(0, r2.out.find("trace written")) ==
          r1.out.substr(0, r1.out.find("trace written")));
    const std::string t1 = slurp("cli_trace1.csv");
    CHECK(t1 == slurp("cli_trace2.csv"));
    CHECK(t1.rfind("time,class,decision,prob,cap_0\n", 0) == 0);

    const CmdResult unknown = run_cli("replay " + inst + " cli_path.jsonl WHAT");
    CHECK(unknown.code == 2);
    CHECK(unknown.err.find("SPA, FR, IR, IRT, FRT") != std::string::npos);

    const CmdResult nopath = run_cli("replay " + inst + " no_such_path.jsonl FR");
    CHECK(nopath.code == 2);
    std::remove("cli_path.jsonl");
    std::remove("cli_trace1.csv");
    std::remove("cli_trace2.csv");
}

TEST_CASE("run exports identical CSV for any worker count") {
    const std::string spec = spec_file("smoke.json");
    const CmdResult w1 = run_cli("run " + spec + " --out cli_w1.csv --workers 1");
    CHECK(w1.code == 0);
    CHECK(w1.out.rfind("wrote cli_w1.csv (10 rows)\n", 0) == 0);
    // two sweep points are too few for a slope fit: summary says so instead
    CHECK(w1.out.find("loglog slope n/a") != std::string::npos);
    for (const char* name : {"SPA", "FR", "IR", "IRT", "FRT"})
        CHECK(w1.out.find(name) != std::string::npos);

    const CmdResult w8 = run_cli("run " + spec + " --out cli_w8.csv --workers 8");
    CHECK(w8.code == 0);
    const std::string csv = slurp("cli_w1.csv");
    CHECK(csv == slurp("cli_w8.csv"));
    CHECK(csv.rfind("sweep,policy,mean_regret,stderr,n_paths,v_dlp,v_ho_hat\n", 0) == 0);
    // identical summary below the "wrote <file>" line
    CHECK(w8.out.substr(w8.out.find('\n')) == w1.out.substr(w1.out.find('\n')));

    // the worker count is also picked up from the environment
    setenv("NRM_LAB_WORKERS", "3", 1);
    const CmdResult env_run = run_cli("run " + spec + " --out cli_env.csv");
    unsetenv("NRM_LAB_WORKERS");
    CHECK(env_run.code == 0);
    CHECK(slurp("cli_env.csv") == csv);

    // overriding the seed changes the numbers
    const CmdResult reseeded = run_cli("run " + spec + " --out cli_seed.csv --seed 999");
    CHECK(reseeded.code == 0);
    CHECK(slurp("cli_seed.csv") != csv);

    const CmdResult missing = run_cli("run no_such_spec.json --out cli_x.csv");
    CHECK(missing.code == 2);
    CHECK(missing.err.find("does not exist") != std::string::npos);

    spill("cli_bad_spec.json", "{\"instance\": {\"horizon\": 1}}");
    const CmdResult bad = run_cli("run cli_bad_spec.json --out cli_x.csv");
    CHECK(bad.code == 2);
    std::remove("cli_bad_spec.json");
    std::remove("cli_w1.csv");
    std::remove("cli_w8.csv");
    std::remove("cli_env.csv");
    std::remove("cli_seed.csv");
}
