#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string cli_path() {
    const char* p = std::getenv("SMECORR_CLI");
    REQUIRE_MESSAGE(p != nullptr, "SMECORR_CLI must point at the binary (set by ctest)");
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

RunResult run(const std::string& args) {
    static int counter = 0;
    const fs::path dir = fs::temp_directory_path() / "smecorr_cli_io";
    fs::create_directories(dir);
    const fs::path out = dir / ("out" + std::to_string(counter));
    const fs::path err = dir / ("err" + std::to_string(counter));
    ++counter;
    const std::string cmd =
        cli_path() + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path fixtures_dir() {
    const fs::path dir = fs::temp_directory_path() / "smecorr_cli_fixtures";
    fs::create_directories(dir);
    return dir;
}

fs::path write_fixture(const std::string& name, const std::string& text) {
    const fs::path p = fixtures_dir() / name;
    std::ofstream f(p);
    f << text;
    return p;
}

const char* kDecayJson = R"json({
  "dim": 2,
  "hamiltonian": "0",
  "detectors": [
    {"label": "d0", "kind": "jump", "operator": "projector(1,0,2)", "eta": 0.8, "theta": 0.05}
  ],
  "initial_state": {"ket": [[1, 0], [0, 0]]}
})json";

const char* kDecayNoDarkJson = R"json({
  "dim": 2,
  "hamiltonian": "0",
  "detectors": [
    {"label": "d0", "kind": "jump", "operator": "projector(1,0,2)", "eta": 0.8, "theta": 0.0}
  ],
  "initial_state": {"ket": [[1, 0], [0, 0]]}
})json";

const char* kNoiseJson = R"json({
  "dim": 2,
  "hamiltonian": "0",
  "detectors": [
    {"label": "d0", "kind": "diffusive", "operator": "0*identity(2)", "eta": 1.0}
  ],
  "initial_state": {"ket": [[1, 0], [0, 0]]}
})json";

double csv_value(const std::string& out) {
    // header line, then: "request",method,value,...
    const auto nl = out.find('\n');
    REQUIRE(nl != std::string::npos);
    const std::string row = out.substr(nl + 1);
    REQUIRE(row.front() == '"');
    const auto close = row.find('"', 1);
    REQUIRE(close != std::string::npos);
    auto p1 = row.find(',', close);       // after the quoted request id
    auto p2 = row.find(',', p1 + 1);      // method
    auto p3 = row.find(',', p2 + 1);      // value
    REQUIRE(p3 != std::string::npos);
    return std::stod(row.substr(p2 + 1, p3 - p2 - 1));
}

}  // namespace

TEST_CASE("correlate: sharp decay mean") {
    const fs::path model = write_fixture("decay.json", kDecayJson);
    const RunResult r = run("correlate --model " + model.string() + " --sharp d0@1.0");
    CHECK(r.exit_code == 0);
    CHECK(csv_value(r.out) == doctest::Approx(0.05 + 0.8 * std::exp(-1.0)).epsilon(1e-9));
}

TEST_CASE("correlate: overlapping noise windows") {
    const fs::path model = write_fixture("noise.json", kNoiseJson);
    const RunResult r = run("correlate --model " + model.string() +
                            " --window d0:0,1 --window d0:0.5,1.5");
    CHECK(r.exit_code == 0);
    CHECK(csv_value(r.out) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("correlate: missing model file produces a structured error") {
    const RunResult r = run("correlate --model /no/such/file.json --sharp d0@1.0");
    CHECK(r.exit_code != 0);
    CHECK(r.err.find("\"error\"") != std::string::npos);
    CHECK(r.err.find("/no/such/file.json") != std::string::npos);
    CHECK(r.err.find("\"module\"") != std::string::npos);
}

TEST_CASE("correlate: either sharp or window legs, not both") {
    const fs::path model = write_fixture("decay.json", kDecayJson);
    const RunResult r = run("correlate --model " + model.string() +
                            " --sharp d0@1.0 --window d0:0,1");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("\"module\":\"cli\"") != std::string::npos);
}

TEST_CASE("simulate: byte-identical outputs for a fixed seed") {
    const fs::path model = write_fixture("decay.json", kDecayJson);
    const fs::path d1 = fixtures_dir() / "runA";
    const fs::path d2 = fixtures_dir() / "runB";
    fs::remove_all(d1);
    fs::remove_all(d2);
    const std::string common = "simulate --model " + model.string() +
                               " --grid 0.01,1.0 --seed 42 --n-traj 4 --out ";
    CHECK(run(common + d1.string()).exit_code == 0);
    CHECK(run(common + d2.string()).exit_code == 0);
    int compared = 0;
    for (const auto& entry : fs::directory_iterator(d1)) {
        const std::string a = slurp(entry.path());
        const std::string b = slurp(d2 / entry.path().filename());
        CHECK(a == b);
        CHECK(!a.empty());
        ++compared;
    }
    CHECK(compared == 4);
}

TEST_CASE("simulate: n-traj=0 is a usage error") {
    const fs::path model = write_fixture("decay.json", kDecayJson);
    const RunResult r = run("simulate --model " + model.string() +
                            " --grid 0.01,1.0 --seed 1 --n-traj 0");
    CHECK(r.exit_code == 2);
}

TEST_CASE("simulate: no antibunched record ever contains two clicks") {
    const fs::path model = write_fixture("decay0.json", kDecayNoDarkJson);
    const fs::path dir = fixtures_dir() / "antibunch";
    fs::remove_all(dir);
    const RunResult r = run("simulate --model " + model.string() +
                            " --grid 0.01,3.0 --seed 7 --n-traj 50 --out " + dir.string());
    CHECK(r.exit_code == 0);
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::ifstream f(entry.path());
        std::string line;
        std::getline(f, line);  // header
        int clicks = 0;
        while (std::getline(f, line))
            if (line.size() >= 2 && line.substr(line.size() - 2) == ",1") ++clicks;
        CHECK(clicks <= 1);
    }
}

TEST_CASE("compare: small consistency run passes and exits 0") {
    const fs::path model = write_fixture("noise.json", kNoiseJson);
    const RunResult r = run("compare --model " + model.string() +
                            " --grid 0.01,1.5 --seed 11 --n-traj 800"
                            " --request \"d0:0,1;d0:0.5,1.5\"");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"all_pass\": true") != std::string::npos);
}

TEST_CASE("compare: corrupted analytic efficiency fails loudly") {
    const fs::path model = write_fixture("decay.json", kDecayJson);
    const RunResult r = run("compare --model " + model.string() +
                            " --grid 0.01,1.5 --seed 11 --n-traj 2000"
                            " --request \"d0:0,1.5\" --test-corrupt-eta 1.6");
    CHECK(r.exit_code != 0);
    CHECK(r.out.find("\"all_pass\": false") != std::string::npos);
}

TEST_CASE("compare: empty request list is a usage error") {
    const fs::path model = write_fixture("decay.json", kDecayJson);
    const RunResult r =
        run("compare --model " + model.string() + " --grid 0.01,1.0 --seed 1 --n-traj 100");
    CHECK(r.exit_code == 2);
}

TEST_CASE("SME_CORRELATE_THREADS drives the worker pool") {
    const fs::path model = write_fixture("noise.json", kNoiseJson);
    const RunResult r = run("compare --model " + model.string() +
                            " --grid 0.01,1.0 --seed 5 --n-traj 400"
                            " --request \"d0:0,1;d0:0,1\"");
    REQUIRE(r.exit_code == 0);
    // same verdict and same estimate with the pool size forced via the env var
    const std::string env_cmd = "SME_CORRELATE_THREADS=3 " + cli_path() + " compare --model " +
                                model.string() +
                                " --grid 0.01,1.0 --seed 5 --n-traj 400"
                                " --request \"d0:0,1;d0:0,1\" >" +
                                (fixtures_dir() / "env_out").string() + " 2>/dev/null";
    REQUIRE(std::system(env_cmd.c_str()) == 0);
    const std::string env_out = slurp(fixtures_dir() / "env_out");
    const auto pick_estimate = [](const std::string& s) {
        const auto p = s.find("\"estimate\"");
        REQUIRE(p != std::string::npos);
        return s.substr(p, s.find(',', p) - p);
    };
    CHECK(pick_estimate(r.out) == pick_estimate(env_out));
}

TEST_CASE("dump-config round-trips") {
    const fs::path model = write_fixture("decay.json", kDecayJson);
    const RunResult first = run("correlate --model " + model.string() +
                                " --sharp d0@0.5 --krylov-tol 1e-11 --dump-config");
    CHECK(first.exit_code == 0);
    const fs::path cfg = write_fixture("roundtrip.json", first.out);
    const RunResult second = run("correlate --config " + cfg.string() + " --dump-config");
    CHECK(second.exit_code == 0);
    CHECK(first.out == second.out);

    // and the config actually drives a run, with flags overriding
    const RunResult via_cfg = run("correlate --config " + cfg.string());
    const RunResult via_flags = run("correlate --model " + model.string() +
                                    " --sharp d0@0.5 --krylov-tol 1e-11");
    CHECK(via_cfg.exit_code == 0);
    CHECK(via_cfg.out == via_flags.out);
}
