#include <catch_amalgamated.hpp>

#include "oracles.hpp"

using namespace mimoaf;
using Catch::Approx;

namespace
{
    Grid grid() { return Grid::centered(128, 1.0 / 16); }

    std::vector<SampledSignal> mixtures(std::size_t M, std::uint64_t seed)
    {
        std::vector<SampledSignal> out;
        for (std::size_t m = 0; m < M; ++m)
            out.push_back(gen_gaussian_mixture(grid(), seed + m));
        return out;
    }
}

TEST_CASE("steering config validation")
{
    CHECK_THROWS_AS(SteeringConfig(0, 1.0, 8), invalid_parameter);
    CHECK_THROWS_AS(SteeringConfig(2, 0.0, 8), invalid_parameter);
    CHECK_THROWS_AS(SteeringConfig(4, 2.0, 6), invalid_parameter);
    SteeringConfig c(3, 1.0, 64);
    CHECK(c.fs(32) == Approx(0.5));
    CHECK(c.gamma_is_integer());
    CHECK_FALSE(SteeringConfig(3, 1.5, 64).gamma_is_integer());
}

TEST_CASE("correlation matrix entries and cross-symmetry")
{
    auto ws = mixtures(3, 20);
    auto R = correlation_matrix(ws, 512);
    REQUIRE(R.M() == 3);
    const auto &tau = R.tau_axis();
    const auto &nu = R.nu_axis();
    std::size_t nt = tau.size, nn = nu.size;
    double worst = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
        {
            const auto &a = R.entry(i, j);
            const auto &b = R.entry(j, i);
            for (std::size_t p = 0; p < nt; ++p)
                for (std::size_t q = 0; q < nn; ++q)
                {
                    // entries[i][j](tau, nu) = conj(entries[j][i](-tau, -nu)) exp(-i 2 pi nu tau)
                    cdouble rhs = std::conj(b(nt - 1 - p, nn - 1 - q)) * cis2pi(-nu.at(q) * tau.at(p));
                    worst = std::max(worst, std::abs(a(p, q) - rhs));
                }
        }
    CHECK(worst < 1e-9);

    // lag-reversed accessor
    auto r01 = R.R(0, 1);
    for (std::size_t p = 0; p < nt; p += 7)
        for (std::size_t q = 0; q < nn; q += 11)
            CHECK(r01(p, q) == R.entry(0, 1)(nt - 1 - p, q));

    auto one = correlation_matrix(std::span(ws).first(1), 512);
    CHECK(one.entry(0, 0).values() == self_ambiguity(ws[0], 512).values());

    CHECK_THROWS_AS(correlation_matrix(std::span<const SampledSignal>(), 512), invalid_parameter);
    auto sc = gen_subcarrier_set(2, 1.0, 1.0 / 64);
    auto Rs = correlation_matrix(sc, 4 * sc[0].size());
    CHECK(std::abs(*Rs.entry(0, 1).at(0.0, 0.0)) < 1e-10);
}

TEST_CASE("mimo ambiguity slices")
{
    auto sc = gen_subcarrier_set(2, 1.0, 1.0 / 64);
    auto R = correlation_matrix(sc, 4 * sc[0].size());
    SteeringConfig cfg(2, 1.0, 64);
    CHECK(std::abs(*mimo_ambiguity(R, cfg, 0.0, 0.0).at(0.0, 0.0) - 2.0) < 1e-9);
    CHECK_THROWS_AS(mimo_ambiguity(R, cfg, 1.0, 0.0), invalid_parameter);
    CHECK_THROWS_AS(mimo_ambiguity(R, SteeringConfig(3, 1.0, 64), 0.0, 0.0), invalid_parameter);

    // M = 1: the self surface for any fs = fs'
    auto u = gen_gaussian_mixture(grid(), 3);
    auto R1 = correlation_matrix(std::vector<SampledSignal>{u}, 512);
    SteeringConfig c1(1, 1.0, 16);
    CHECK(mimo_ambiguity(R1, c1, 0.3, 0.3).values() == R1.entry(0, 0).values());

    // identical waveforms factorise into chi(u, u) D(fs) conj(D(fs'))
    std::vector<SampledSignal> same(3, u);
    auto R3 = correlation_matrix(same, 512);
    SteeringConfig c3(3, 1.0, 16);
    auto D = [](double f)
    {
        cdouble acc = 0.0;
        for (int m = 0; m < 3; ++m)
            acc += std::polar(1.0, 2.0 * oracle::pi * f * m);
        return acc;
    };
    auto slice = mimo_ambiguity(R3, c3, 0.2, 0.65);
    auto pred = scaled(R3.entry(0, 0), D(0.2) * std::conj(D(0.65)));
    CHECK(oracle::max_abs_diff(slice, pred) < 1e-12);
}

TEST_CASE("steering sum is linear in the waveforms")
{
    auto ws = mixtures(3, 40);
    SteeringConfig cfg(3, 2.0, 16);
    std::vector<cdouble> c{cdouble(2.0, -1.0), cdouble(0.0, 0.5), cdouble(-1.5, 0.0)};
    std::vector<SampledSignal> scaled_ws;
    for (std::size_t m = 0; m < 3; ++m)
        scaled_ws.push_back(ws[m].scaled(c[m]));
    auto R = correlation_matrix(ws, 512);
    auto Rs = correlation_matrix(scaled_ws, 512);
    auto direct = mimo_ambiguity(Rs, cfg, 0.125, 0.5);
    AmbiguitySurface pred(R.tau_axis(), R.nu_axis());
    for (std::size_t m = 0; m < 3; ++m)
        for (std::size_t mp = 0; mp < 3; ++mp)
            pred = add_scaled(pred, c[m] * std::conj(c[mp]) * cfg.steering(m, mp, 0.125, 0.5), R.entry(m, mp));
    CHECK(relative_frobenius(direct, pred) < 1e-10);
}

TEST_CASE("spatial slice")
{
    auto sc = gen_subcarrier_set(3, 1.0, 1.0 / 64);
    auto R = correlation_matrix(sc, 4 * sc[0].size());
    SteeringConfig cfg(3, 1.0, 16);
    auto s = mimo_slice_spatial(R, cfg, 0.0, 0.0);
    REQUIRE(s.n_tau() == 16);
    REQUIRE(s.n_nu() == 16);
    for (std::size_t k = 0; k < 16; ++k)
        CHECK(std::abs(s(k, k) - 3.0) < 1e-9);
    CHECK_THROWS_AS(mimo_slice_spatial(R, cfg, 0.001, 0.0), grid_alignment_error);

    // M = 1: constant over (fs, fs')
    auto u = gen_gaussian_mixture(grid(), 8);
    auto R1 = correlation_matrix(std::vector<SampledSignal>{u}, 512);
    auto s1 = mimo_slice_spatial(R1, SteeringConfig(1, 1.0, 8), 0.25, 0.125);
    for (const auto &x : s1.values())
        CHECK(x == *R1.entry(0, 0).at(0.25, 0.125));

    // Conjugating every waveform maps the slice at (tau, nu) to the conjugate
    // of the slice at (tau, -nu) with both spatial frequencies negated mod 1.
    auto ws = mixtures(2, 60);
    std::vector<SampledSignal> conj_ws{ws[0].conjugated(), ws[1].conjugated()};
    SteeringConfig c2(2, 1.0, 8);
    auto Ra = correlation_matrix(ws, 512);
    auto Rb = correlation_matrix(conj_ws, 512);
    double tau = 0.5, nu = 0.25;
    auto a = mimo_slice_spatial(Ra, c2, tau, -nu);
    auto b = mimo_slice_spatial(Rb, c2, tau, nu);
    double worst = 0.0;
    for (std::size_t k = 0; k < 8; ++k)
        for (std::size_t kp = 0; kp < 8; ++kp)
            worst = std::max(worst, std::abs(b(k, kp) - std::conj(a((8 - k) % 8, (8 - kp) % 8))));
    CHECK(worst < 1e-9);
}

TEST_CASE("spatial integral equals the trace")
{
    auto u = gen_gaussian_mixture(grid(), 2);
    auto R1 = correlation_matrix(std::vector<SampledSignal>{u}, 512);
    CHECK(spatial_integral(R1, SteeringConfig(1, 1.0, 4)).values() == R1.entry(0, 0).values());

    auto sc = gen_subcarrier_set(2, 1.0, 1.0 / 64);
    auto R2 = correlation_matrix(sc, 4 * sc[0].size());
    CHECK(std::abs(*spatial_integral(R2, SteeringConfig(2, 1.0, 64)).at(0.0, 0.0) - 2.0) < 1e-9);

    auto ws = mixtures(3, 70);
    auto R3 = correlation_matrix(ws, 512);
    SteeringConfig cfg(3, 2.0, 16);
    auto trace = trace_surface(R3);
    auto quad = spatial_integral_quadrature(R3, cfg);
    CHECK(relative_frobenius(quad, trace) < 1e-9);
    CHECK_NOTHROW(spatial_integral(R3, cfg));
    CHECK_THROWS_AS(spatial_integral(R3, SteeringConfig(3, 1.5, 16)), precondition_error);
}
