#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <nrmlab.h>

namespace {

constexpr const char* kTwoClassJson = R"({
  "horizon": 1000,
  "lambda": [1.0, 1.0],
  "revenue": [2.0, 1.0],
  "bom": [[1.0, 1.0]],
  "capacity": [1000.0]
})";

std::string smoke_spec() { return std::string(NRM_SPECS_DIR) + "/smoke.json"; }

std::string tmp_file(const char* name) {
    return std::string("nrm_capi_") + name;  // test working directory
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct InstanceHandle {
    nrm_instance* ptr = nullptr;
    ~InstanceHandle() { nrm_instance_free(ptr); }
};
struct PathHandle {
    nrm_path* ptr = nullptr;
    ~PathHandle() { nrm_path_free(ptr); }
};
struct TableHandle {
    nrm_table* ptr = nullptr;
    ~TableHandle() { nrm_table_free(ptr); }
};

}  // namespace

TEST_CASE("version string") {
    REQUIRE(nrm_version() != nullptr);
    CHECK(std::string(nrm_version()) == "0.1.0");
}

TEST_CASE("instance parsing and dimensions") {
    InstanceHandle inst;
    REQUIRE(nrm_instance_parse_json(kTwoClassJson, &inst.ptr) == NRM_OK);
    CHECK(nrm_instance_num_classes(inst.ptr) == 2);
    CHECK(nrm_instance_num_resources(inst.ptr) == 1);
    CHECK(nrm_instance_horizon(inst.ptr) == 1000.0);
}

TEST_CASE("parse and validation failures carry a useful message") {
    nrm_instance* out = nullptr;
    CHECK(nrm_instance_parse_json("{\"horizon\": 10}", &out) == NRM_ERROR_PARSE);
    CHECK(out == nullptr);
    CHECK(std::string(nrm_last_error()).find("lambda") != std::string::npos);

    const char* zero_rate = R"({"horizon": 10, "lambda": [0.0], "revenue": [1.0],
                                "bom": [[1.0]], "capacity": [10.0]})";
    CHECK(nrm_instance_parse_json(zero_rate, &out) == NRM_ERROR_VALIDATION);

    CHECK(nrm_instance_parse_json("not json at all", &out) == NRM_ERROR_PARSE);
    CHECK(nrm_instance_load_file("/nonexistent/instance.json", &out) == NRM_ERROR_IO);
}

TEST_CASE("rate LP solve with degeneracy verdict") {
    InstanceHandle inst;
    REQUIRE(nrm_instance_parse_json(kTwoClassJson, &inst.ptr) == NRM_OK);

    double value = 0.0, x[2] = {-1.0, -1.0};
    int bounds = -1, binding = -1, nondegenerate = -1;
    REQUIRE(nrm_solve_dlp(inst.ptr, &value, x, &bounds, &binding, &nondegenerate) == NRM_OK);
    CHECK(value == doctest::Approx(2000.0).epsilon(1e-10));
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(x[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
    CHECK(bounds == 2);
    CHECK(binding == 1);
    CHECK(nondegenerate == 0);  // 2 + 1 = 3 > 2 classes

    // all outputs optional
    CHECK(nrm_solve_dlp(inst.ptr, nullptr, nullptr, nullptr, nullptr, nullptr) == NRM_OK);
}

TEST_CASE("path sampling, dump and reload round trip") {
    InstanceHandle inst;
    REQUIRE(nrm_instance_parse_json(kTwoClassJson, &inst.ptr) == NRM_OK);

    PathHandle path;
    REQUIRE(nrm_path_sample(inst.ptr, 5, &path.ptr) == NRM_OK);
    const size_t events = nrm_path_num_events(path.ptr);
    CHECK(events > 1500);  // ~2000 expected for rate 2 over 1000 units
    CHECK(events < 2500);

    const std::string f1 = tmp_file("path1.jsonl"), f2 = tmp_file("path2.jsonl");
    REQUIRE(nrm_path_dump_file(path.ptr, f1.c_str()) == NRM_OK);

    PathHandle loaded;
    REQUIRE(nrm_path_load_file(inst.ptr, f1.c_str(), &loaded.ptr) == NRM_OK);
    CHECK(nrm_path_num_events(loaded.ptr) == events);
    REQUIRE(nrm_path_dump_file(loaded.ptr, f2.c_str()) == NRM_OK);
    CHECK(slurp(f1) == slurp(f2));

    double ho_direct = 0.0, ho_loaded = 0.0;
    REQUIRE(nrm_hindsight_value(inst.ptr, path.ptr, &ho_direct) == NRM_OK);
    REQUIRE(nrm_hindsight_value(inst.ptr, loaded.ptr, &ho_loaded) == NRM_OK);
    CHECK(ho_direct == ho_loaded);
    CHECK(ho_direct > 0.0);

    nrm_path* missing = nullptr;
    CHECK(nrm_path_load_file(inst.ptr, "/nonexistent/p.jsonl", &missing) == NRM_ERROR_IO);
    std::remove(f1.c_str());
    std::remove(f2.c_str());
}

TEST_CASE("policy run with trace is deterministic and dominated by hindsight") {
    InstanceHandle inst;
    REQUIRE(nrm_instance_parse_json(kTwoClassJson, &inst.ptr) == NRM_OK);
    PathHandle path;
    REQUIRE(nrm_path_sample(inst.ptr, 12, &path.ptr) == NRM_OK);

    const std::string t1 = tmp_file("trace1.csv"), t2 = tmp_file("trace2.csv");
    double rev1 = -1.0, rev2 = -1.0;
    REQUIRE(nrm_policy_run(inst.ptr, path.ptr, "FR", t1.c_str(), &rev1) == NRM_OK);
    REQUIRE(nrm_policy_run(inst.ptr, path.ptr, "FR", t2.c_str(), &rev2) == NRM_OK);
    CHECK(rev1 == rev2);
    CHECK(rev1 > 0.0);

    const std::string trace = slurp(t1);
    CHECK(trace == slurp(t2));
    CHECK(trace.rfind("time,class,decision,prob,cap_0\n", 0) == 0);

    double ho = 0.0;
    REQUIRE(nrm_hindsight_value(inst.ptr, path.ptr, &ho) == NRM_OK);
    CHECK(ho >= rev1 - 1e-6);

    // trace file is optional
    double rev3 = -1.0;
    REQUIRE(nrm_policy_run(inst.ptr, path.ptr, "FR", nullptr, &rev3) == NRM_OK);
    CHECK(rev3 == rev1);

    CHECK(nrm_policy_run(inst.ptr, path.ptr, "XXX", nullptr, &rev3) ==
          NRM_ERROR_INVALID_ARGUMENT);
    CHECK(std::string(nrm_last_error()).find("SPA, FR, IR, IRT, FRT") != std::string::npos);
    std::remove(t1.c_str());
    std::remove(t2.c_str());
}

TEST_CASE("experiment pipeline end to end") {
    TableHandle table;
    REQUIRE(nrm_experiment_run_file(smoke_spec().c_str(), 1, 0, 0, &table.ptr) == NRM_OK);
    REQUIRE(nrm_table_num_rows(table.ptr) == 10);  // 2 sweeps x 5 policies

    double sweep = 0.0, mean = 0.0, se = 0.0, v_dlp = 0.0, v_ho = 0.0;
    const char* policy = nullptr;
    int n_paths = 0;
    REQUIRE(nrm_table_row(table.ptr, 0, &sweep, &policy, &mean, &se, &n_paths, &v_dlp,
                          &v_ho) == NRM_OK);
    CHECK(sweep == 50.0);
    CHECK(std::string(policy) == "SPA");
    CHECK(n_paths == 200);
    CHECK(v_dlp == doctest::Approx(100.0).epsilon(1e-10));
    CHECK(mean > 0.0);
    CHECK(se > 0.0);
    CHECK(v_ho > 0.0);
    CHECK(nrm_table_row(table.ptr, 10, &sweep, &policy, &mean, &se, &n_paths, &v_dlp,
                        &v_ho) == NRM_ERROR_INVALID_ARGUMENT);

    // two sweep points are too few for a slope
    double slope = 0.0, r2 = 0.0;
    CHECK(nrm_table_slope(table.ptr, "SPA", &slope, &r2) == NRM_ERROR_INVALID_ARGUMENT);
    CHECK(nrm_table_slope(table.ptr, "NOPE", &slope, &r2) == NRM_ERROR_INVALID_ARGUMENT);

    const std::string f1 = tmp_file("smoke1.csv"), f2 = tmp_file("smoke2.csv");
    REQUIRE(nrm_table_export_csv(table.ptr, f1.c_str()) == NRM_OK);
    const std::string csv = slurp(f1);
    CHECK(csv.rfind("sweep,policy,mean_regret,stderr,n_paths,v_dlp,v_ho_hat\n", 0) == 0);

    // rerun with more workers: byte-identical table
    TableHandle again;
    REQUIRE(nrm_experiment_run_file(smoke_spec().c_str(), 2, 0, 0, &again.ptr) == NRM_OK);
    REQUIRE(nrm_table_export_csv(again.ptr, f2.c_str()) == NRM_OK);
    CHECK(slurp(f2) == csv);

    // seed override: same seed reproduces, different seed changes the table
    TableHandle same_seed, other_seed;
    REQUIRE(nrm_experiment_run_file(smoke_spec().c_str(), 1, 1, 7, &same_seed.ptr) == NRM_OK);
    REQUIRE(nrm_experiment_run_file(smoke_spec().c_str(), 1, 1, 12345, &other_seed.ptr) ==
            NRM_OK);
    REQUIRE(nrm_table_export_csv(same_seed.ptr, f2.c_str()) == NRM_OK);
    CHECK(slurp(f2) == csv);
    REQUIRE(nrm_table_export_csv(other_seed.ptr, f2.c_str()) == NRM_OK);
    CHECK(slurp(f2) != csv);

    nrm_table* missing = nullptr;
    CHECK(nrm_experiment_run_file("/nonexistent/spec.json", 1, 0, 0, &missing) ==
          NRM_ERROR_IO);
    std::remove(f1.c_str());
    std::remove(f2.c_str());
}

TEST_CASE("free functions tolerate NULL") {
    nrm_instance_free(nullptr);
    nrm_path_free(nullptr);
    nrm_table_free(nullptr);
    CHECK(true);
}
