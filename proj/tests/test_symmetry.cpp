#include <catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"

using namespace mimoaf;
using Catch::Approx;

namespace
{
    const double sigma0 = oracle::gaussian_sigma;
    Grid square() { return Grid::centered(256, 1.0 / 16); } // N dt^2 = 1

    double max_err_vs(const AmbiguitySurface &s, double window, const std::function<cdouble(double, double)> &f)
    {
        double worst = 0.0;
        for (std::size_t i = 0; i < s.n_tau(); ++i)
            for (std::size_t j = 0; j < s.n_nu(); ++j)
            {
                double tau = s.tau_axis().at(i), nu = s.nu_axis().at(j);
                if (std::abs(tau) <= window && std::abs(nu) <= window)
                    worst = std::max(worst, std::abs(s(i, j) - f(tau, nu)));
            }
        return worst;
    }
}

TEST_CASE("SL(2) elements")
{
    CHECK_THROWS_AS(Sl2Element(1.0, 1.0, 1.0, 1.0), invalid_parameter);
    auto J = Sl2Element::rotation();
    CHECK(J.a() == 0.0);
    CHECK(J.b() == 1.0);
    CHECK(J.c() == -1.0);
    CHECK(J.d() == 0.0);
    auto t = Sl2Element::shear(0.7);
    CHECK((t.a() == 1.0 && t.b() == 0.0 && t.c() == 0.7 && t.d() == 1.0));
    auto m = Sl2Element::dilation(2.0);
    CHECK((m.a() == 2.0 && m.d() == 0.5));
    CHECK_THROWS_AS(Sl2Element::dilation(-1.0), invalid_parameter);

    auto p = J * t * m * Sl2Element::shear(-3.0) * J;
    CHECK(p.det() == Approx(1.0).margin(1e-12));
    CHECK((p * p.inverse()).approx(Sl2Element::identity()));
    CHECK((J * J * J * J).approx(Sl2Element::identity()));
    auto [x, y] = J.apply(1.0, 2.0);
    CHECK((x == 2.0 && y == -1.0));
}

TEST_CASE("surface action: exact permutations")
{
    auto u = gen_gaussian_mixture(square(), 4);
    auto v = gen_gaussian_mixture(square(), 5);
    auto s = cross_ambiguity(u, v, 256, 128); // square grid
    REQUIRE(same_axis(s.tau_axis(), s.nu_axis()));

    CHECK(act_on_surface(s, Sl2Element::identity()).values() == s.values());

    auto J = Sl2Element::rotation();
    auto twice = act_on_surface(act_on_surface(s, J), J);
    auto n = s.n_tau();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            REQUIRE(twice(i, j) == s(n - 1 - i, n - 1 - j));

    auto four = act_on_surface(act_on_surface(twice, J), J);
    CHECK(four.values() == s.values());

    // J (tau, nu) = (nu, -tau)
    auto once = act_on_surface(s, J);
    CHECK(*once.at(0.25, 0.5) == *s.at(0.5, -0.25));
    // inverse rotation undoes it
    CHECK(act_on_surface(once, J.inverse()).values() == s.values());

    // the general path agrees with the permutation on node-to-node maps
    Axis tau = s.tau_axis(), nu = s.nu_axis();
    auto general = act_on_surface(s, J, Axis{tau.origin, tau.step, tau.size - 2}, Axis{nu.origin, nu.step, nu.size - 2});
    for (std::size_t i = 0; i < general.n_tau(); ++i)
        for (std::size_t j = 0; j < general.n_nu(); ++j)
            CHECK(general(i, j) == once(i, j));
}

TEST_CASE("surface action: dilation of the gaussian surface")
{
    // Fine Doppler sampling keeps the bilinear error in nu small.
    auto u = gen_gaussian(sigma0, square());
    auto s = self_ambiguity(u, 4096);
    auto d = act_on_surface(s, Sl2Element::dilation(2.0));
    // s(2 tau, nu / 2): modulus exp(-pi ((2 tau)^2 + (nu / 2)^2) / 2)
    double worst = max_err_vs(d, 3.0, [](double tau, double nu)
                              { return oracle::gaussian_af(2.0 * tau, nu / 2.0); });
    CHECK(worst < 1e-4);
    CHECK(d.coverage < 1.0); // |2 tau| runs past the lag range
    CHECK(d.coverage > 0.4);
}

TEST_CASE("surface action: group law")
{
    auto u = gen_gaussian(sigma0, square());
    auto s = self_ambiguity(u, 1024);
    auto exact = [](const Sl2Element &g)
    {
        return [g](double tau, double nu)
        {
            auto [x, y] = g.apply(tau, nu);
            return oracle::gaussian_af(x, y);
        };
    };
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> shear(-1.0, 1.0), dil(0.7, 1.4);
    std::uniform_int_distribution<int> pick(0, 2);
    auto random_generator = [&]()
    {
        switch (pick(rng))
        {
        case 0:
            return Sl2Element::rotation();
        case 1:
            return Sl2Element::shear(shear(rng));
        default:
            return Sl2Element::dilation(dil(rng));
        }
    };
    for (int trial = 0; trial < 8; ++trial)
    {
        auto g = random_generator(), h = random_generator();
        auto seq = act_on_surface(act_on_surface(s, g), h);
        auto direct = act_on_surface(s, g * h);
        // per-remap interpolation errors against the closed form, over the region the second remap reads from;
        // the second remap is measured on the exact intermediate surface
        AmbiguitySurface exact_g(s.tau_axis(), s.nu_axis(), s.nu_band_closed());
        for (std::size_t i = 0; i < s.n_tau(); ++i)
            for (std::size_t j = 0; j < s.n_nu(); ++j)
                exact_g(i, j) = exact(g)(s.tau_axis().at(i), s.nu_axis().at(j));
        double e1 = max_err_vs(act_on_surface(s, g), 6.0, exact(g));
        double e2 = max_err_vs(act_on_surface(exact_g, h), 6.0, exact(g * h));
        double e12 = max_err_vs(direct, 6.0, exact(g * h));
        double diff = 0.0;
        for (std::size_t i = 0; i < s.n_tau(); ++i)
            for (std::size_t j = 0; j < s.n_nu(); ++j)
                if (std::abs(s.tau_axis().at(i)) <= 2.0 && std::abs(s.nu_axis().at(j)) <= 2.0)
                    diff = std::max(diff, std::abs(seq(i, j) - direct(i, j)));
        // bilinear weights are non-negative and sum to one, so errors add at most
        CHECK(diff <= e1 + e2 + e12 + 1e-12);
        CHECK(diff < 5e-3);
    }
}

TEST_CASE("fourier rotation")
{
    auto u = gen_gaussian(sigma0, square());
    auto r = verify_fourier_rotation(u, u);
    CHECK(r.passed);
    CHECK(r.rel_err < 1e-5);

    auto rect = gen_rect(1.0, square());
    CHECK(verify_fourier_rotation(rect, rect).passed);
    CHECK(verify_fourier_rotation(rect, gen_lfm(1.0, 3.0, square())).passed);

    // self-dual Gaussian: the rotated surface is the surface itself up to the phase
    auto chi = cross_ambiguity(u, u, 256, 128);
    auto rot = act_on_surface(chi, Sl2Element::rotation());
    double worst = max_err_vs(rot, 8.0, [](double tau, double nu)
                              { return oracle::gaussian_af(nu, -tau); });
    CHECK(worst < 1e-6);

    // rotating twice lands on the mirror identity
    auto v = gen_gaussian_mixture(square(), 3);
    auto uv = cross_ambiguity(u, v, 256, 128);
    auto twice = act_on_surface(act_on_surface(uv, Sl2Element::rotation()), Sl2Element::rotation());
    auto vu = cross_ambiguity(v, u, 256, 128);
    auto pred = vu;
    for (auto &x : pred.values())
        x = std::conj(x);
    pred = modulated(pred, [](double tau, double nu)
                     { return cis2pi(-nu * tau); });
    CHECK(relative_frobenius(twice, pred) < 1e-5);

    CHECK_THROWS_AS(verify_fourier_rotation(gen_gaussian(sigma0, Grid::centered(256, 1.0 / 8)),
                                            gen_gaussian(sigma0, Grid::centered(256, 1.0 / 8))),
                    grid_mismatch);
}

TEST_CASE("mirror")
{
    auto u = gen_gaussian_mixture(square(), 21), v = gen_gaussian_mixture(square(), 22);
    CHECK(verify_mirror(u, v).passed);
    CHECK(verify_mirror(u, u).passed);

    auto s = self_ambiguity(u, 1024);
    std::size_t nt = s.n_tau(), nn = s.n_nu();
    double worst = 0.0;
    for (std::size_t i = 0; i < nt; ++i)
        for (std::size_t j = 0; j < nn; ++j)
            worst = std::max(worst, std::abs(std::abs(s(i, j)) - std::abs(s(nt - 1 - i, nn - 1 - j))));
    CHECK(worst < 1e-9);

    auto uv = cross_ambiguity(u, v, 1024), vu = cross_ambiguity(v, u, 1024);
    CHECK(std::abs(*uv.at(0.0, 0.0) - inner_product(u, v)) < 1e-12);
    CHECK(std::abs(std::conj(*vu.at(0.0, 0.0)) - inner_product(u, v)) < 1e-12);
}

TEST_CASE("chirp shear")
{
    auto g = Grid::centered(256, 1.0 / 32);
    auto u = gen_gaussian(sigma0, g);
    auto zero = verify_lfm_shear(u, u, 0.0);
    CHECK(zero.passed);
    CHECK(zero.abs_err == 0.0);

    auto r = verify_lfm_shear(u, u, 4.0);
    CHECK(r.passed);
    CHECK(r.coverage >= 0.9);

    auto v = gen_gaussian_mixture(Grid::centered(256, 1.0 / 16), 8);
    CHECK(verify_lfm_shear(v, v, 1.0).passed);
    // rate whose shear falls between Doppler nodes: the remap interpolates
    auto odd = verify_lfm_shear(u, u, 4.0 * 1.001);
    CHECK(odd.rel_err < 1e-2);

    // the chirp narrows the zero-Doppler cut of a rect pulse
    auto rect = gen_rect(1.0, 1.0 / 64);
    auto plain = self_ambiguity(rect, 4 * rect.size());
    auto lfm = self_ambiguity(chirp_multiply(rect, 8.0), 4 * rect.size());
    auto width = [](const AmbiguitySurface &s)
    {
        std::size_t j0 = s.n_nu() / 2;
        double peak = std::abs(s(s.n_tau() / 2, j0));
        double w = 0.0;
        for (std::size_t i = 0; i < s.n_tau(); ++i)
            if (std::abs(s(i, j0)) >= peak / std::sqrt(2.0))
                w = std::max(w, std::abs(s.tau_axis().at(i)));
        return 2.0 * w;
    };
    CHECK(width(lfm) < width(plain));
    CHECK_THROWS_AS(verify_lfm_shear(rect, rect, 40.0), aliasing_error);
}

TEST_CASE("dilation")
{
    auto u = gen_gaussian(sigma0, square());
    auto one = verify_dilation(u, u, 1.0);
    CHECK(one.passed);
    CHECK(one.abs_err == 0.0);

    auto r = verify_dilation(u, u, 2.0);
    CHECK(r.passed);

    // path A against the closed form (1/2) chi(2 tau, nu / 2)
    auto ud = dilate(u, 2.0);
    auto a = self_ambiguity(ud, 1024);
    double worst = max_err_vs(a, 8.0, [](double tau, double nu)
                              { return 0.5 * oracle::gaussian_af(2.0 * tau, nu / 2.0); });
    CHECK(worst < 1e-4);
    CHECK(l2_norm_sq(a) == Approx(energy(u) * energy(u) / 4.0).epsilon(1e-5));

    CHECK_THROWS_AS(verify_dilation(gen_rect(1.0, square()), gen_rect(1.0, square()), 2.0), aliasing_error);
}

TEST_CASE("mimo symmetry")
{
    auto u = gen_gaussian(sigma0, square());
    SteeringConfig c1(1, 1.0, 4);
    std::vector<SampledSignal> single{u};
    for (auto g : {SymmetryGenerator::rotation(), SymmetryGenerator::mirror(), SymmetryGenerator::shear(2.0),
                   SymmetryGenerator::dilation(2.0)})
    {
        auto primed = verify_mimo_symmetry(single, c1, 0.25, 0.25, g);
        auto plain = verify_symmetry(u, u, g);
        CHECK(primed.passed);
        CHECK(std::abs(primed.rel_err - plain.rel_err) <= 1e-12);
        CHECK(std::abs(primed.lhs - plain.lhs) <= 1e-12 * std::abs(plain.lhs));
    }

    auto sc = gen_subcarrier_set(2, 1.0, square());
    SteeringConfig c2(2, 1.0, 64);
    CHECK(verify_mimo_symmetry(sc, c2, 0.25, 0.25, SymmetryGenerator::rotation()).passed);
    CHECK(verify_mimo_symmetry(sc, c2, 0.25, 0.5, SymmetryGenerator::mirror()).passed);

    // the mirror pairs (fs, fs') with (fs', fs): without the swap it fails
    auto R = correlation_matrix(sc, 1024);
    auto fwd = mimo_ambiguity(R, c2, 0.25, 0.5);
    auto reversed = act_on_surface(fwd, Sl2Element(-1.0, 0.0, 0.0, -1.0));
    auto unswapped = mimo_ambiguity(R, c2, 0.25, 0.5);
    for (auto &x : unswapped.values())
        x = std::conj(x);
    unswapped = modulated(unswapped, [](double tau, double nu)
                          { return cis2pi(-nu * tau); });
    CHECK(relative_frobenius(reversed, unswapped) > 1e-3);

    auto mg = gen_modulated_gaussian_set(2, sigma0, 1.0, square());
    CHECK(verify_mimo_symmetry(mg, c2, 0.25, 0.5, SymmetryGenerator::shear(2.0)).passed);
    CHECK(verify_mimo_symmetry(mg, c2, 0.25, 0.5, SymmetryGenerator::dilation(2.0)).passed);
    CHECK_THROWS_AS(verify_mimo_symmetry(sc, SteeringConfig(3, 1.0, 64), 0.25, 0.5, SymmetryGenerator::mirror()),
                    invalid_parameter);
}

TEST_CASE("steering sum commutes with the surface action")
{
    auto mg = gen_modulated_gaussian_set(2, sigma0, 1.0, square());
    SteeringConfig cfg(2, 1.0, 64);
    auto R = correlation_matrix(mg, 256, 128);
    auto J = Sl2Element::rotation();
    auto summed = act_on_surface(mimo_ambiguity(R, cfg, 0.25, 0.75), J);
    AmbiguitySurface terms(summed.tau_axis(), summed.nu_axis());
    for (std::size_t m = 0; m < 2; ++m)
        for (std::size_t mp = 0; mp < 2; ++mp)
            terms = add_scaled(terms, cfg.steering(m, mp, 0.25, 0.75), act_on_surface(R.entry(m, mp), J));
    CHECK(relative_frobenius(terms, summed) < 1e-10);

    auto shear = Sl2Element::shear(-0.5);
    auto s2 = act_on_surface(mimo_ambiguity(R, cfg, 0.25, 0.75), shear);
    AmbiguitySurface t2(s2.tau_axis(), s2.nu_axis());
    for (std::size_t m = 0; m < 2; ++m)
        for (std::size_t mp = 0; mp < 2; ++mp)
            t2 = add_scaled(t2, cfg.steering(m, mp, 0.25, 0.75), act_on_surface(R.entry(m, mp), shear));
    CHECK(relative_frobenius(t2, s2) < 1e-10);
}
