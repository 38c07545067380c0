#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"

using namespace mimoaf;
namespace fs = std::filesystem;

namespace
{
    const std::string cli = MIMOAF_CLI;

    int run(const std::string &args)
    {
        std::string cmd = "\"" + cli + "\" " + args + " > cli_stdout.txt 2> cli_stderr.txt";
        int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::string slurp(const std::string &path)
    {
        std::ifstream f(path, std::ios::binary);
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }

    struct Scratch
    {
        fs::path dir;
        Scratch()
        {
            dir = fs::current_path() / "cli_scratch";
            fs::remove_all(dir);
            fs::create_directories(dir);
        }
        ~Scratch() { fs::remove_all(dir); }
        std::string operator/(const std::string &f) const { return (dir / f).string(); }
    };
}

TEST_CASE("gen writes unit-energy signals")
{
    Scratch s;
    REQUIRE(run("gen --family rect --T 1 --dt 0.015625 -o " + (s / "u.sig")) == 0);
    auto u = io::load_signal(s / "u.sig");
    CHECK(std::abs(energy(u) - 1.0) < 1e-12);

    REQUIRE(run("gen --family subcarriers --M 3 -o " + (s / "set")) == 0);
    for (int m = 0; m < 3; ++m)
        CHECK(fs::exists(s / ("set/u" + std::to_string(m) + ".sig")));

    CHECK(run("gen --family rect --T --dt 0.1 -o " + (s / "bad.sig")) == 2);
    CHECK_FALSE(fs::exists(s / "bad.sig"));
    CHECK(run("gen --family triangle -o " + (s / "bad.sig")) == 2);
    CHECK(run("gen --family lfm --k 1000 -o " + (s / "bad.sig")) == 2);
    CHECK_FALSE(fs::exists(s / "bad.sig"));
    CHECK(run("frobnicate") == 2);
}

TEST_CASE("af computes and exports surfaces")
{
    Scratch s;
    REQUIRE(run("gen --family rect -o " + (s / "u.sig")) == 0);
    REQUIRE(run("af --u " + (s / "u.sig") + " --v " + (s / "u.sig") + " -o " + (s / "chi.sur") + " --ppm " +
                (s / "chi.ppm") + " --csv " + (s / "chi.csv")) == 0);
    auto sur = io::load_sur1(s / "chi.sur");
    CHECK(std::abs(*sur.at(0.0, 0.0) - 1.0) < 1e-12);
    CHECK(slurp(s / "chi.ppm").rfind("P5\n", 0) == 0);
    std::ifstream csv(s / "chi.csv");
    auto back = io::read_csv(csv);
    CHECK(back.values() == sur.values());

    REQUIRE(run("af --wigner --u " + (s / "u.sig") + " -o " + (s / "w.sur")) == 0);
    auto w = io::load_sur1(s / "w.sur");
    CHECK(w.n_tau() == 256);

    REQUIRE(run("gen --family gaussian --N 128 -o " + (s / "g.sig")) == 0);
    CHECK(run("af --u " + (s / "u.sig") + " --v " + (s / "g.sig")) == 2);
    CHECK(run("af --u " + (s / "missing.sig")) == 2);
}

TEST_CASE("mimo slices")
{
    Scratch s;
    REQUIRE(run("gen --family subcarriers --M 2 -o " + s.dir.string()) == 0);
    std::string inputs = (s / "u0.sig") + " " + (s / "u1.sig");
    REQUIRE(run("mimo " + inputs + " --fs 0 --fsp 0 -o " + (s / "m.sur")) == 0);
    CHECK(std::abs(*io::load_sur1(s / "m.sur").at(0.0, 0.0) - 2.0) < 1e-9);

    REQUIRE(run("mimo " + inputs + " --spatial-integral -o " + (s / "si.sur")) == 0);
    auto si = io::load_sur1(s / "si.sur");
    auto R = correlation_matrix(std::vector{io::load_signal(s / "u0.sig"), io::load_signal(s / "u1.sig")}, 1024);
    CHECK(relative_frobenius(si, trace_surface(R)) < 1e-9);

    // inputs and flags from a config file reproduce the command-line result
    {
        std::ofstream cfg(s / "mimo.cfg");
        cfg << "inputs=" << inputs << "\nspatial-integral=true\n";
    }
    REQUIRE(run("mimo --config " + (s / "mimo.cfg") + " -o " + (s / "si2.sur")) == 0);
    CHECK(slurp(s / "si.sur") == slurp(s / "si2.sur"));

    REQUIRE(run("mimo " + inputs + " --slice-spatial --tau 0 --nu 0 --K 16 -o " + (s / "sp.sur")) == 0);
    auto sp = io::load_sur1(s / "sp.sur");
    CHECK((sp.n_tau() == 16 && sp.n_nu() == 16));

    CHECK(run("mimo " + inputs + " --fs 1.5") == 2);
    CHECK(run("mimo " + inputs + " --spatial-integral --gamma 1.5") == 2);
}

TEST_CASE("verify exit codes and determinism")
{
    Scratch s;
    CHECK(run("verify --suite norm --report " + (s / "n.txt")) == 0);
    CHECK(slurp(s / "n.txt").find(" pass ") != std::string::npos);
    CHECK(run("verify --suite moyal --tol 1e-20 --report " + (s / "f.txt")) == 1);
    CHECK(slurp(s / "f.txt").find(" fail ") != std::string::npos);
    CHECK(run("verify --suite nonsense") == 2);

    REQUIRE(run("verify --suite psd --probes 8 --seed 7 --report " + (s / "a.txt")) == 0);
    REQUIRE(run("verify --suite psd --probes 8 --seed 7 --report " + (s / "b.txt")) == 0);
    CHECK(slurp(s / "a.txt") == slurp(s / "b.txt"));

    // config file values, overridden by flags
    {
        std::ofstream cfg(s / "run.cfg");
        cfg << "# comment\nsuite=moyal\ntol=1e-20\n";
    }
    CHECK(run("verify --config " + (s / "run.cfg") + " --report " + (s / "c.txt")) == 1);
    CHECK(run("verify --config " + (s / "run.cfg") + " --tol 1e-6 --report " + (s / "d.txt")) == 0);
    {
        std::ofstream bad(s / "bad.cfg");
        bad << "no-such-key=1\n";
    }
    CHECK(run("verify --config " + (s / "bad.cfg")) == 2);
    CHECK(run("verify --config " + (s / "missing.cfg")) == 2);
}

TEST_CASE("binary outputs are byte-identical across runs")
{
    Scratch s;
    REQUIRE(run("gen --family lfm --k 2 -o " + (s / "u.sig")) == 0);
    REQUIRE(run("af --u " + (s / "u.sig") + " -o " + (s / "a.sur") + " --ppm " + (s / "a.ppm")) == 0);
    REQUIRE(run("af --u " + (s / "u.sig") + " -o " + (s / "b.sur") + " --ppm " + (s / "b.ppm")) == 0);
    CHECK(slurp(s / "a.sur") == slurp(s / "b.sur"));
    CHECK(slurp(s / "a.ppm") == slurp(s / "b.ppm"));
}
