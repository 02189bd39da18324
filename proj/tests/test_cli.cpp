#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "support.hpp"

using namespace tripod;
using namespace testsupport;
namespace fs = std::filesystem;

namespace {

const fs::path kDir = fs::temp_directory_path() / "tripod_cli";

struct Result
{
    int code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

Result sim(const std::string& args)
{
    fs::create_directories(kDir);
    const fs::path out = kDir / "stdout.txt";
    const fs::path err = kDir / "stderr.txt";
    const std::string cmd = "cd '" + kDir.string() + "' && '" + std::string(TRIPOD_SIM_PATH) + "' " + args + " > '" +
                            out.string() + "' 2> '" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::size_t lines(const std::string& s)
{
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

} // namespace

TEST_CASE("list-presets prints the catalog", "[cli]")
{
    const auto r = sim("list-presets");
    CHECK(r.code == 0);
    std::string expected;
    for (const auto& n : preset_names())
        expected += n + "\n";
    CHECK(r.out == expected);
}

TEST_CASE("spectrum of the Lambda preset", "[cli]")
{
    const auto r = sim("spectrum --preset fig1-lambda --out s.csv");
    REQUIRE(r.code == 0);
    const auto series = read_spectrum_csv((kDir / "s.csv").string());
    CHECK(series.size() == 401);
    CHECK(lines(slurp(kDir / "s.csv")) == 402);
    const auto dark = nearest_feature(find_features(series), FeatureKind::Dark, 0.0);
    REQUIRE(dark);
    CHECK(std::abs(dark->position) < 1e-9);
    CHECK(r.err.find("residual_max") != std::string::npos);
}

TEST_CASE("same configuration gives byte-identical CSV", "[cli]")
{
    REQUIRE(sim("traces --preset fig4d-traces --out a.csv").code == 0);
    REQUIRE(std::system(("TRIPOD_SIM_THREADS=3 '" + std::string(TRIPOD_SIM_PATH) + "' traces --preset fig4d-traces -q --out '" +
                         (kDir / "b.csv").string() + "'")
                            .c_str()) == 0);
    CHECK(slurp(kDir / "a.csv") == slurp(kDir / "b.csv"));
    CHECK(slurp(kDir / "a.csv").find("re_rho12_plus_re_rho13") != std::string::npos);
}

TEST_CASE("config file, --set and --preset layer correctly", "[cli]")
{
    {
        std::ofstream f(kDir / "run.cfg");
        f << "preset = fig1-lambda\nsweep.dp_points = 5\nrabi.omega_p_khz = 0.25\n";
    }
    const auto r = sim("spectrum --config run.cfg --set sweep.dp_points=7 --set sweep.dp_min_khz=-3 "
                       "--set sweep.dp_max_khz=3");
    REQUIRE(r.code == 0);
    const auto s = parse_spectrum_csv(r.out);
    CHECK(s.size() == 7);
    CHECK(s.axis.front() == -3.0);

    Config c = parse_config("preset = fig1-lambda\nsweep.dp_points = 7\nsweep.dp_min_khz = -3\nsweep.dp_max_khz = 3\n"
                            "rabi.omega_p_khz = 0.25\n");
    std::ostringstream direct;
    run("spectrum", c, {}, direct);
    CHECK(direct.str() == r.out);

    const auto over = sim("spectrum --config run.cfg --preset fig4c-map --set sweep.dp_points=5");
    REQUIRE(over.code == 0);
    Config c2 = parse_config("preset = fig4c-map\nsweep.dp_points = 5\nrabi.omega_p_khz = 0.25\n");
    std::ostringstream direct2;
    run("spectrum", c2, {}, direct2);
    CHECK(direct2.str() == over.out);
}

TEST_CASE("every command succeeds on its natural preset", "[cli]")
{
    CHECK(sim("map2d --preset fig4c-map --set map.d_points=3 --set sweep.dp_points=11 --out m.csv --svg m.svg").code == 0);
    CHECK(lines(slurp(kDir / "m.csv")) == 34);
    CHECK(fs::exists(kDir / "m.svg"));

    CHECK(sim("decompose --preset fig4ab-decomposition --out d.csv").code == 0);
    for (const char* part : {"d_tripod.csv", "d_lambda_c.csv", "d_lambda_a.csv", "d_average.csv"})
        CHECK(lines(slurp(kDir / part)) == 402);

    const auto e = sim("evolve --preset fig4d-traces --set evolve.t_end_ms=1 --set evolve.stride=50 --out e.csv");
    CHECK(e.code == 0);
    CHECK(slurp(kDir / "e.csv").rfind("time_ms,", 0) == 0);

    const auto c = sim("contrast --preset fig4d-traces");
    CHECK(c.code == 0);
    CHECK(c.out.find("switching_contrast = ") == 0);

    CHECK(sim("spectrum --preset fig2-tripod --svg s.svg --out s2.csv --set output.normalized=true").code == 0);
    CHECK(slurp(kDir / "s2.csv").find("im_rho24_norm") != std::string::npos);
}

TEST_CASE("dressed report", "[cli]")
{
    const auto r = sim("dressed --preset fig4c-map");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("Omega = 14.17744688") != std::string::npos);
    CHECK(r.out.find("-7.088723439") != std::string::npos);
    for (const char* label : {"d1 ", "d2 ", "b+ ", "b- "})
        CHECK(r.out.find(label) != std::string::npos);
    CHECK(r.out.find("formula_plus") != std::string::npos);
    CHECK(r.out.find("1.4142136") != std::string::npos);
}

TEST_CASE("exit-code contract", "[cli]")
{
    CHECK(sim("").code == exit_code::kUsage);
    CHECK(sim("frobnicate").code == exit_code::kUsage);
    CHECK(sim("spectrum --bogus-flag").code == exit_code::kUsage);

    auto r = sim("spectrum --preset nope");
    CHECK(r.code == exit_code::kUnknownPreset);
    CHECK(r.err.find("UnknownPreset") != std::string::npos);

    r = sim("spectrum --set rabi.omega_c_khz=-1");
    CHECK(r.code == exit_code::kInvalidParams);
    CHECK(r.err.find("InvalidParams") != std::string::npos);

    r = sim("spectrum --set rabi.omega_c_khz=0 --set rabi.omega_p_khz=0 --set rabi.omega_a_khz=0 "
            "--set decay.branching_3=0.5 --set decay.branching_1=0.25 --set decay.branching_2=0.25 "
            "--set decay.gamma_ground_khz=0");
    CHECK(r.code == exit_code::kSingularSystem);
    CHECK(r.err.find("SingularSystem") != std::string::npos);
    CHECK(r.err.find("scenario 'custom'") != std::string::npos);

    r = sim("evolve --preset fig4c-map --set evolve.dt_ms=1");
    CHECK(r.code == exit_code::kStepTooLarge);
    CHECK(r.err.find("StepTooLarge") != std::string::npos);

    r = sim("dressed --set rabi.omega_c_khz=0 --set rabi.omega_a_khz=0");
    CHECK(r.code == exit_code::kDegenerateFields);

    r = sim("spectrum --set foo.bar=1");
    CHECK(r.code == exit_code::kConfig);
    CHECK(r.err.find("UnknownKey") != std::string::npos);

    {
        std::ofstream f(kDir / "dup.cfg");
        f << "rabi.omega_c_khz = 10\nrabi.omega_c_khz = 12\n";
    }
    r = sim("spectrum --config dup.cfg");
    CHECK(r.code == exit_code::kConfig);
    CHECK(r.err.find("DuplicateKey: line 2") != std::string::npos);

    r = sim("spectrum --config missing.cfg");
    CHECK(r.code == exit_code::kIo);
    r = sim("spectrum --out /nonexistent-dir/x.csv");
    CHECK(r.code == exit_code::kIo);

    r = sim("decompose --preset fig3-row1");
    CHECK(r.code == exit_code::kPrecondition);
    CHECK(r.err.find("PreconditionError") != std::string::npos);
}

TEST_CASE("run reports scenario, outputs and residual", "[cli]")
{
    Config c;
    c.set("preset", std::string("fig1d-detuned"));
    std::ostringstream out;
    const auto path = (kDir / "r.csv").string();
    const RunReport rep = run("spectrum", c, CliOptions{path, std::nullopt}, out);
    CHECK(rep.scenario == "fig1d-detuned");
    CHECK(rep.outputs == std::vector<std::string>{path});
    CHECK(rep.residual_max < 1e-8);
    CHECK(rep.wall_time >= 0.0);
    CHECK(rep.warnings.empty());
    CHECK(out.str().empty());

    Config extrap;
    extrap.set("preset", std::string("fig3-row5"));
    std::ostringstream sink;
    CHECK(run("spectrum", extrap, {}, sink).warnings.size() == 2);
}
