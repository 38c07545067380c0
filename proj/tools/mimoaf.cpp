// mimoaf: waveform generation, ambiguity surfaces, MIMO slices and identity checks.
//
// Exit codes: 0 success / all checks pass, 1 a check failed, 2 usage or
// validation error.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mimoaf.hpp"
#include "suites.hpp"

namespace fs = std::filesystem;
using namespace mimoaf;

namespace
{
    constexpr int exit_ok = 0;
    constexpr int exit_check_failed = 1;
    constexpr int exit_usage = 2;

    struct GenArgs
    {
        std::string family = "rect";
        double T = 1.0;
        double dt = 1.0 / 16.0;
        std::size_t N = 256;
        double sigma = 0.28209479177387814;
        double k = 2.0;
        std::size_t M = 2;
        std::string output;
        bool binary = false;
    };

    struct SurfaceOut
    {
        std::string sur, csv, ppm;
        std::string scale = "db";
        double db_floor = -60.0;
    };

    struct AfArgs
    {
        std::string u, v;
        bool wigner = false;
        std::size_t n_doppler = 0;
        std::optional<std::size_t> max_lag;
        SurfaceOut out;
    };

    struct MimoArgs
    {
        std::vector<std::string> inputs;
        double gamma = 1.0;
        std::size_t K = 64;
        double fs = 0.0, fsp = 0.0;
        std::size_t n_doppler = 0;
        bool spatial_integral = false;
        bool slice_spatial = false;
        double tau = 0.0, nu = 0.0;
        SurfaceOut out;
    };

    struct VerifyArgs
    {
        cli::SuiteParams p;
        std::string suite = "all";
        std::string report;
    };

    void add_surface_outputs(CLI::App *cmd, SurfaceOut &o)
    {
        cmd->add_option("-o,--output", o.sur, "SUR1 binary surface");
        cmd->add_option("--csv", o.csv, "CSV export (tau,nu,re,im)");
        cmd->add_option("--ppm", o.ppm, "PGM heat map of |values|");
        cmd->add_option("--scale", o.scale, "heat map scale")->check(CLI::IsMember({"db", "linear"}));
        cmd->add_option("--db-floor", o.db_floor, "dB clamp for the heat map")->check(CLI::Range(-400.0, -1e-9));
    }

    void write_surface(const AmbiguitySurface &s, const SurfaceOut &o)
    {
        if (!o.sur.empty())
            io::save_sur1(o.sur, s);
        if (!o.csv.empty())
        {
            std::ofstream f(o.csv);
            if (!f)
                throw format_error("cannot open '" + o.csv + "' for writing");
            io::write_csv(f, s);
        }
        if (!o.ppm.empty())
        {
            std::ofstream f(o.ppm, std::ios::binary);
            if (!f)
                throw format_error("cannot open '" + o.ppm + "' for writing");
            io::write_ppm(f, s, o.scale == "linear" ? io::Scale::linear : io::Scale::db, o.db_floor);
        }
    }

    std::string complex_str(cdouble z) { return format_number(z); }

    void print_surface_summary(const AmbiguitySurface &s)
    {
        std::printf("grid %zu x %zu  tau [%s, %s]  nu [%s, %s]\n", s.n_tau(), s.n_nu(),
                    format_number(s.tau_axis().origin).c_str(), format_number(s.tau_axis().last()).c_str(),
                    format_number(s.nu_axis().origin).c_str(), format_number(s.nu_axis().last()).c_str());
        if (auto v = s.at(0.0, 0.0))
            std::printf("value at origin %s\n", complex_str(*v).c_str());
    }

    int run_gen(const GenArgs &a)
    {
        Grid g = Grid::centered(a.N, a.dt);
        std::vector<SampledSignal> out;
        if (a.family == "rect")
            out.push_back(gen_rect(a.T, g));
        else if (a.family == "gaussian")
            out.push_back(gen_gaussian(a.sigma, g));
        else if (a.family == "lfm")
            out.push_back(gen_lfm(a.T, a.k, g));
        else
            out = gen_subcarrier_set(a.M, a.T, g);

        std::vector<std::string> paths;
        if (a.family == "subcarriers")
        {
            fs::path dir = a.output.empty() ? fs::path(".") : fs::path(a.output);
            fs::create_directories(dir);
            for (std::size_t m = 0; m < out.size(); ++m)
                paths.push_back((dir / ("u" + std::to_string(m) + ".sig")).string());
        }
        else
            paths.push_back(a.output);

        for (std::size_t m = 0; m < out.size(); ++m)
        {
            io::save_signal(paths[m], out[m], a.binary);
            std::printf("%s  n=%zu dt=%s t0=%s energy=%s\n", paths[m].c_str(), out[m].size(),
                        format_number(out[m].dt()).c_str(), format_number(out[m].t0()).c_str(),
                        format_number(energy(out[m])).c_str());
        }
        return exit_ok;
    }

    int run_af(const AfArgs &a)
    {
        auto u = io::load_signal(a.u);
        auto v = a.v.empty() ? u : io::load_signal(a.v);
        AmbiguitySurface s;
        if (a.wigner)
            s = wigner(u, v, a.n_doppler);
        else
            s = cross_ambiguity(u, v, a.n_doppler == 0 ? default_n_doppler(u.size()) : a.n_doppler, a.max_lag);
        print_surface_summary(s);
        write_surface(s, a.out);
        return exit_ok;
    }

    int run_mimo(const MimoArgs &a)
    {
        std::vector<SampledSignal> ws;
        for (const auto &p : a.inputs)
            ws.push_back(io::load_signal(p));
        SteeringConfig cfg(ws.size(), a.gamma, a.K);
        auto R = correlation_matrix(ws, a.n_doppler == 0 ? default_n_doppler(ws.front().size()) : a.n_doppler);
        AmbiguitySurface s;
        if (a.slice_spatial)
        {
            s = mimo_slice_spatial(R, cfg, a.tau, a.nu);
            std::printf("spatial slice %zu x %zu at tau=%s nu=%s; value at (0,0) %s\n", s.n_tau(), s.n_nu(),
                        format_number(a.tau).c_str(), format_number(a.nu).c_str(), complex_str(s(0, 0)).c_str());
        }
        else
        {
            s = a.spatial_integral ? spatial_integral(R, cfg) : mimo_ambiguity(R, cfg, a.fs, a.fsp);
            print_surface_summary(s);
        }
        write_surface(s, a.out);
        return exit_ok;
    }

    int run_verify(const VerifyArgs &a)
    {
        cli::SuiteRunner runner(a.p);
        auto lines = runner.run(a.suite);
        bool ok = true;
        std::ofstream file;
        if (!a.report.empty())
        {
            file.open(a.report);
            if (!file)
                throw format_error("cannot open '" + a.report + "' for writing");
        }
        std::ostream &os = a.report.empty() ? std::cout : file;
        for (const auto &l : lines)
        {
            if (l.skipped)
            {
                os << l.report.name << " skip " << l.reason << "\n";
                continue;
            }
            ok = ok && l.report.passed;
            os << to_line(l.report) << "\n";
        }
        if (!a.report.empty())
            std::fprintf(stderr, "%zu checks, %s\n", lines.size(), ok ? "all passed" : "FAILURES");
        return ok ? exit_ok : exit_check_failed;
    }

    // Config values are appended as flags, skipping any option already given
    // on the command line. Applied by hand because CLI11 ignores config
    // files attached to subcommands.
    void merge_config(CLI::App &sub, const std::string &path, std::vector<std::string> &args)
    {
        std::vector<CLI::ConfigItem> items;
        try
        {
            items = CLI::ConfigINI().from_file(path);
        }
        catch (const CLI::FileError &)
        {
            throw CLI::ValidationError("--config", "cannot read " + path);
        }
        for (const auto &item : items)
        {
            if (item.name == "++" || item.name == "--" || item.name == "config")
                continue;
            CLI::Option *opt = sub.get_option_no_throw("--" + item.name);
            if (opt == nullptr || !item.parents.empty())
                throw CLI::ValidationError("--config", "unknown key '" + item.fullname() + "'");
            if (opt->count() > 0)
                continue;
            if (opt->get_expected_max() == 0) // flag
            {
                args.push_back("--" + item.name + "=" + (item.inputs.empty() ? "true" : item.inputs.front()));
                continue;
            }
            args.push_back("--" + item.name);
            args.insert(args.end(), item.inputs.begin(), item.inputs.end());
        }
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Ambiguity functions of single and MIMO radar waveforms"};
    app.require_subcommand(1);
    std::string config_path;

    GenArgs gen;
    auto *g = app.add_subcommand("gen", "generate waveform files");
    g->add_option("--config", config_path, "key=value file; command-line flags take precedence");
    g->add_option("--family", gen.family)->check(CLI::IsMember({"rect", "gaussian", "lfm", "subcarriers"}));
    g->add_option("--T", gen.T, "pulse length [s]");
    g->add_option("--dt", gen.dt, "sample period [s]");
    g->add_option("--N", gen.N, "window length in samples");
    g->add_option("--sigma", gen.sigma, "Gaussian width [s]");
    g->add_option("--k", gen.k, "LFM chirp rate [Hz/s]");
    g->add_option("--M", gen.M, "subcarrier count");
    g->add_option("-o,--output", gen.output, "output file (directory for subcarriers)");
    g->add_flag("--binary", gen.binary, "write the SIGB binary format");

    AfArgs af;
    auto *a = app.add_subcommand("af", "cross/self ambiguity surface or Wigner distribution");
    a->add_option("--config", config_path, "key=value file; command-line flags take precedence");
    a->add_option("--u", af.u)->required();
    a->add_option("--v", af.v, "second waveform (default: u)");
    a->add_flag("--wigner", af.wigner);
    a->add_option("--n-doppler", af.n_doppler, "FFT length (default 4N; Wigner: 2N)");
    a->add_option("--max-lag", af.max_lag, "largest lag in samples");
    add_surface_outputs(a, af.out);

    MimoArgs mimo;
    auto *m = app.add_subcommand("mimo", "MIMO ambiguity slices");
    m->add_option("--config", config_path, "key=value file; command-line flags take precedence");
    m->add_option("inputs,--inputs", mimo.inputs, "waveform files u_0 .. u_{M-1}")->required();
    m->add_option("--gamma", mimo.gamma);
    m->add_option("--K", mimo.K, "spatial frequency grid size");
    m->add_option("--fs", mimo.fs);
    m->add_option("--fsp", mimo.fsp);
    m->add_option("--n-doppler", mimo.n_doppler);
    auto *si = m->add_flag("--spatial-integral", mimo.spatial_integral, "integral over fs of the diagonal slice");
    m->add_flag("--slice-spatial", mimo.slice_spatial, "(fs, fs') slice at fixed --tau, --nu")->excludes(si);
    m->add_option("--tau", mimo.tau);
    m->add_option("--nu", mimo.nu);
    add_surface_outputs(m, mimo.out);

    VerifyArgs ver;
    std::vector<std::string> suites = cli::SuiteRunner::names();
    suites.push_back("all");
    auto *v = app.add_subcommand("verify", "run identity checks");
    v->add_option("--config", config_path, "key=value file; command-line flags take precedence");
    v->add_option("--suite", ver.suite)->check(CLI::IsMember(suites));
    v->add_option("--family", ver.p.family)->check(CLI::IsMember({"rect", "gaussian", "lfm", "subcarriers"}));
    v->add_option("--N", ver.p.N);
    v->add_option("--dt", ver.p.dt);
    v->add_option("--T", ver.p.T);
    v->add_option("--sigma", ver.p.sigma);
    v->add_option("--k", ver.p.k, "chirp rate for LFM and the shear check");
    v->add_option("--b", ver.p.b, "dilation factor");
    v->add_option("--n-doppler", ver.p.n_doppler);
    v->add_option("--M", ver.p.M);
    v->add_option("--gamma", ver.p.gamma);
    v->add_option("--K", ver.p.K);
    v->add_option("--fs", ver.p.fs);
    v->add_option("--fsp", ver.p.fsp);
    v->add_option("--probes", ver.p.probes);
    v->add_option("--seed", ver.p.seed);
    v->add_option("--tol", ver.p.tol, "override every tolerance");
    v->add_option("--report", ver.report, "report file (default stdout)");

    try
    {
        try
        {
            app.parse(argc, argv);
        }
        catch (const CLI::RequiredError &)
        {
            if (config_path.empty() || app.get_subcommands().empty())
                throw; // the config file may still supply it
        }
        if (!config_path.empty())
        {
            std::vector<std::string> args(argv + 1, argv + argc);
            merge_config(*app.get_subcommands().front(), config_path, args);
            app.clear();
            std::reverse(args.begin(), args.end());
            app.parse(args);
        }
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return exit_usage;
    }

    try
    {
        if (g->parsed())
        {
            if (gen.family != "subcarriers" && gen.output.empty())
                throw invalid_parameter("gen: -o is required");
            return run_gen(gen);
        }
        if (a->parsed())
            return run_af(af);
        if (m->parsed())
            return run_mimo(mimo);
        return run_verify(ver);
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_usage;
    }
}
