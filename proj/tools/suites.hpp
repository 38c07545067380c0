#pragma once

// Verification suites run by `mimoaf verify`.

#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "mimoaf.hpp"

namespace mimoaf::cli
{
    struct SuiteParams
    {
        std::string family = "gaussian";
        std::size_t N = 256;
        double dt = 1.0 / 16.0;
        double T = 1.0;
        double sigma = 0.28209479177387814; // 1 / (2 sqrt(pi)): u = 2^(1/4) exp(-pi t^2)
        double k = 2.0;                     // chirp rate (LFM family and shear check)
        double b = 2.0;                     // dilation
        std::size_t n_doppler = 1024;
        std::size_t M = 2;
        double gamma = 1.0;
        std::size_t K = 64;
        double fs = 0.25;
        double fsp = 0.5;
        std::size_t probes = 8;
        std::uint64_t seed = 1;
        double tol = 0.0; // 0: per-check defaults
    };

    // One suite produces one or more report lines; "skip" lines mark checks
    // whose preconditions the chosen family does not meet (only in --suite all).
    struct SuiteLine
    {
        CheckReport report;
        bool skipped = false;
        std::string reason;
    };

    class SuiteRunner
    {
    public:
        explicit SuiteRunner(SuiteParams p) : p_(std::move(p)), grid_(Grid::centered(p_.N, p_.dt)) {}

        static const std::vector<std::string> &names()
        {
            static const std::vector<std::string> n{"norm", "mimo-energy", "moyal", "mimo-moyal", "psd",
                                                    "trace-psd", "uniqueness", "collinearity", "trace-reduction",
                                                    "sym-J", "sym-mirror", "sym-lfm", "sym-dilate", "sym-mimo"};
            return n;
        }

        std::vector<SuiteLine> run(const std::string &suite)
        {
            std::vector<SuiteLine> out;
            if (suite == "all")
            {
                for (const auto &n : names())
                {
                    try
                    {
                        append(out, dispatch(n));
                    }
                    catch (const aliasing_error &e)
                    {
                        out.push_back(skip(n, e.what()));
                    }
                    catch (const precondition_error &e)
                    {
                        out.push_back(skip(n, e.what()));
                    }
                }
                return out;
            }
            return dispatch(suite);
        }

    private:
        SuiteParams p_;
        Grid grid_;

        static SuiteLine skip(const std::string &name, const std::string &why)
        {
            SuiteLine l;
            l.report.name = name;
            l.skipped = true;
            l.reason = why;
            return l;
        }

        static void append(std::vector<SuiteLine> &a, std::vector<SuiteLine> b)
        {
            for (auto &x : b)
                a.push_back(std::move(x));
        }

        double tol(double fallback) const { return p_.tol > 0.0 ? p_.tol : fallback; }

        SampledSignal primary() const
        {
            if (p_.family == "rect")
                return gen_rect(p_.T, grid_);
            if (p_.family == "gaussian")
                return gen_gaussian(p_.sigma, grid_);
            if (p_.family == "lfm")
                return gen_lfm(p_.T, p_.k, grid_);
            if (p_.family == "subcarriers")
                return gen_subcarrier_set(std::max<std::size_t>(p_.M, 1), p_.T, grid_).front();
            throw invalid_parameter("unknown family '" + p_.family + "'");
        }

        // A distinct partner waveform: u delayed by 4 samples and shifted by 3 Doppler bins.
        SampledSignal partner() const
        {
            auto u = primary();
            double dnu = 1.0 / (static_cast<double>(p_.n_doppler) * p_.dt);
            auto v = heisenberg_shift(u, {4.0 * p_.dt, 3.0 * dnu, 0.0});
            v.label = "v";
            return v;
        }

        std::vector<SampledSignal> waveform_set() const
        {
            if (p_.family == "gaussian")
                return gen_modulated_gaussian_set(p_.M, p_.sigma, 1.0, grid_);
            return gen_subcarrier_set(p_.M, p_.T, grid_);
        }

        SteeringConfig steering() const { return SteeringConfig(p_.M, p_.gamma, p_.K); }

        static std::vector<SuiteLine> one(CheckReport r)
        {
            SuiteLine l;
            l.report = std::move(r);
            return {l};
        }

        SymmetryOptions sym_options() const
        {
            SymmetryOptions o;
            o.n_doppler = p_.n_doppler;
            o.tol = p_.tol;
            return o;
        }

        static SuiteLine line(const CheckReport &r) { return {r, false, {}}; }

        std::vector<SuiteLine> dispatch(const std::string &suite)
        {
            if (suite == "norm")
            {
                std::vector<SuiteLine> out;
                append(out, one(check_norm_identity(primary(), primary(), p_.n_doppler, tol(1e-6))));
                append(out, one(check_norm_identity(primary(), partner(), p_.n_doppler, tol(1e-6))));
                return out;
            }
            if (suite == "mimo-energy")
                return one(check_mimo_energy(waveform_set(), steering(), p_.n_doppler, tol(1e-5)));
            if (suite == "moyal")
            {
                auto a = gen_gaussian_mixture(grid_, p_.seed), b = gen_gaussian_mixture(grid_, p_.seed + 1);
                return one(moyal_inner_product(primary(), partner(), a, b, p_.n_doppler, tol(1e-6)));
            }
            if (suite == "mimo-moyal")
            {
                auto us = waveform_set();
                std::vector<SuiteLine> out;
                append(out, one(mimo_inner_product(us, us, steering(), p_.fs, p_.fsp, p_.n_doppler, tol(1e-6))));
                std::vector<SampledSignal> vs;
                for (std::size_t m = 0; m < p_.M; ++m)
                    vs.push_back(gen_gaussian_mixture(grid_, p_.seed + 10 + m));
                append(out, one(mimo_inner_product(us, vs, steering(), p_.fs, p_.fsp, p_.n_doppler, tol(1e-6))));
                return out;
            }
            if (suite == "psd")
            {
                auto probes = random_probes(grid_, p_.n_doppler, p_.probes, p_.seed);
                auto r = gram_psd_check(primary(), probes, p_.n_doppler, tol(1e-9), tol(1e-8));
                return {line(r.positivity), line(r.agreement)};
            }
            if (suite == "trace-psd")
            {
                auto probes = random_probes(grid_, p_.n_doppler, p_.probes, p_.seed);
                auto r = trace_psd_check(waveform_set(), probes, steering(), p_.n_doppler, tol(1e-9), tol(1e-8));
                return {line(r.positivity), line(r.agreement)};
            }
            if (suite == "uniqueness")
            {
                std::mt19937_64 rng(p_.seed);
                double theta = std::uniform_real_distribution<double>(0.0, 2.0 * pi)(rng);
                auto u = primary();
                std::vector<SuiteLine> out;
                append(out, one(recover_scalar(u, u.scaled(std::polar(1.0, theta)), p_.n_doppler, tol(1e-6)).report));
                append(out, one(recover_scalar(u, u.scaled(2.0), p_.n_doppler, tol(1e-6)).report));
                return out;
            }
            if (suite == "collinearity")
            {
                auto u = primary();
                auto w = u.scaled(cdouble(0.0, 3.0));
                std::vector<SuiteLine> out;
                append(out, one(collinearity_check(u, w, tol(1e-9)).report));
                append(out, one(summed_af_check(u, w, p_.n_doppler, tol(1e-8))));
                return out;
            }
            if (suite == "trace-reduction")
            {
                auto u = primary();
                std::mt19937_64 rng(p_.seed);
                std::uniform_real_distribution<double> phase(0.0, 2.0 * pi);
                std::vector<SampledSignal> family{u};
                for (std::size_t m = 1; m < p_.M; ++m)
                    family.push_back(u.scaled(std::polar(1.0, phase(rng))));
                std::vector<SuiteLine> out;
                append(out, one(trace_reduction_check(family, steering(), p_.n_doppler, tol(1e-8)).report));
                if (p_.M > 1)
                    append(out, one(trace_reduction_check(gen_subcarrier_set(p_.M, p_.T, grid_), steering(),
                                                          p_.n_doppler, tol(1e-8))
                                        .report));
                return out;
            }
            if (suite == "sym-J")
                return one(verify_fourier_rotation(primary(), partner(), sym_options()));
            if (suite == "sym-mirror")
                return one(verify_mirror(primary(), partner(), sym_options()));
            if (suite == "sym-lfm")
                return one(verify_lfm_shear(primary(), partner(), p_.k, sym_options()));
            if (suite == "sym-dilate")
                return one(verify_dilation(primary(), partner(), p_.b, sym_options()));
            if (suite == "sym-mimo")
            {
                auto ws = waveform_set();
                auto cfg = steering();
                std::vector<SuiteLine> out;
                for (auto g : {SymmetryGenerator::rotation(), SymmetryGenerator::mirror(), SymmetryGenerator::shear(p_.k),
                               SymmetryGenerator::dilation(p_.b)})
                {
                    try
                    {
                        append(out, one(verify_mimo_symmetry(ws, cfg, p_.fs, p_.fsp, g, sym_options())));
                    }
                    catch (const aliasing_error &e)
                    {
                        out.push_back(skip(g.name() + "-mimo", e.what()));
                    }
                }
                return out;
            }
            throw invalid_parameter("unknown suite '" + suite + "'");
        }
    };
}
