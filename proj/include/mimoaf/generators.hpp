#pragma once

// Canonical test waveforms. Every generator returns a unit-energy signal
// (dt * sum |x|^2 = 1). The (duration, dt) overloads embed the pulse in a
// zero-padded window `pad_factor` times the pulse length; the Grid overloads
// place the pulse on a caller-supplied window.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "signal.hpp"

namespace mimoaf
{
    namespace detail
    {
        inline std::size_t samples_in(double duration, double dt)
        {
            double r = duration / dt;
            auto n = static_cast<std::size_t>(std::llround(r));
            if (std::abs(r - static_cast<double>(n)) > 1e-6 * std::max(1.0, r))
                n = static_cast<std::size_t>(std::floor(r));
            return std::max<std::size_t>(n, 1);
        }

        // Window for a pulse on [0, T): even length >= pad * pulse, t = 0 on the grid.
        inline Grid padded_window(std::size_t pulse, double dt, double pad_factor)
        {
            if (!(pad_factor >= 1.0))
                throw invalid_parameter("pad_factor must be >= 1");
            auto n = static_cast<std::size_t>(std::ceil(pad_factor * static_cast<double>(pulse)));
            n = std::max(n, pulse);
            n += n % 2;
            std::size_t lead = (n - pulse) / 2;
            return {n, dt, -static_cast<double>(lead) * dt};
        }

        // Indices n with t_n in [0, T).
        inline std::pair<std::size_t, std::size_t> pulse_span(const Grid &g, double T)
        {
            double eps = 1e-9 * g.dt;
            long long first = static_cast<long long>(std::ceil((-g.t0 - eps) / g.dt));
            long long last = static_cast<long long>(std::ceil((T - g.t0 - eps) / g.dt)); // exclusive
            if (first < 0 || last > static_cast<long long>(g.n) || last <= first)
                throw invalid_parameter("pulse [0, T) does not fit inside the sampling window");
            return {static_cast<std::size_t>(first), static_cast<std::size_t>(last)};
        }

        inline void check_pulse_args(double T, double dt)
        {
            if (!(dt > 0.0) || !(T > 0.0))
                throw invalid_parameter("duration and dt must be positive");
            if (T < dt * (1.0 - 1e-12))
                throw invalid_parameter("duration must be at least one sample period");
        }

        inline void normalise(std::vector<cdouble> &x, double dt)
        {
            double e = 0.0;
            for (const auto &s : x)
                e += std::norm(s);
            e *= dt;
            if (!(e > 0.0))
                throw invalid_parameter("waveform has zero energy on the grid");
            double g = 1.0 / std::sqrt(e);
            for (auto &s : x)
                s *= g;
        }
    }

    // Unit-energy rectangular pulse on [0, T) with amplitude 1/sqrt(T).
    inline SampledSignal gen_rect(double T, const Grid &grid)
    {
        detail::check_pulse_args(T, grid.dt);
        auto [first, last] = detail::pulse_span(grid, T);
        std::vector<cdouble> x(grid.n, 0.0);
        double amp = 1.0 / std::sqrt(static_cast<double>(last - first) * grid.dt);
        for (std::size_t i = first; i < last; ++i)
            x[i] = amp;
        SampledSignal s(std::move(x), grid);
        s.label = "rect";
        return s;
    }

    inline SampledSignal gen_rect(double T, double dt, double pad_factor = 2.0)
    {
        detail::check_pulse_args(T, dt);
        return gen_rect(T, detail::padded_window(detail::samples_in(T, dt), dt, pad_factor));
    }

    // Unit-energy Gaussian whose squared modulus is a normal density with
    // standard deviation sigma: u(t) ~ exp(-t^2 / (4 sigma^2)), centred at t = 0.
    // sigma = 1 / (2 sqrt(pi)) gives u(t) = 2^(1/4) exp(-pi t^2).
    inline SampledSignal gen_gaussian(double sigma, const Grid &grid, double centre = 0.0)
    {
        if (!(sigma > 0.0) || !(grid.dt > 0.0))
            throw invalid_parameter("gen_gaussian: sigma and dt must be positive");
        double half = 0.5 * static_cast<double>(grid.n - 1) * grid.dt;
        double mid = grid.t0 + half;
        if (half + 1e-12 < 4.0 * sigma + std::abs(centre - mid))
            throw invalid_parameter("gen_gaussian: window truncates the Gaussian (needs >= 4 sigma on each side)");
        std::vector<cdouble> x(grid.n);
        double amp = std::pow(2.0 * pi * sigma * sigma, -0.25);
        for (std::size_t i = 0; i < grid.n; ++i)
        {
            double t = grid.time(i) - centre;
            x[i] = amp * std::exp(-t * t / (4.0 * sigma * sigma));
        }
        detail::normalise(x, grid.dt);
        SampledSignal s(std::move(x), grid);
        s.label = "gaussian";
        return s;
    }

    // Symmetric grid t = -K dt .. K dt with K = floor(half_width / dt).
    inline SampledSignal gen_gaussian(double sigma, double dt, double half_width)
    {
        if (!(sigma > 0.0) || !(dt > 0.0))
            throw invalid_parameter("gen_gaussian: sigma and dt must be positive");
        if (half_width < 4.0 * sigma)
            throw invalid_parameter("gen_gaussian: half_width < 4 sigma risks truncation");
        auto k = static_cast<std::size_t>(std::floor(half_width / dt + 1e-9));
        Grid g{2 * k + 1, dt, -static_cast<double>(k) * dt};
        return gen_gaussian(sigma, g);
    }

    // Unit-energy linear FM pulse (1/sqrt(T)) exp(i pi k t^2) on [0, T).
    inline SampledSignal gen_lfm(double T, double k, const Grid &grid)
    {
        detail::check_pulse_args(T, grid.dt);
        if (std::abs(k) * T > 0.5 / grid.dt * (1.0 + 1e-12))
            throw aliasing_error("gen_lfm: |k| T exceeds the Nyquist frequency 1/(2 dt)");
        auto [first, last] = detail::pulse_span(grid, T);
        std::vector<cdouble> x(grid.n, 0.0);
        double amp = 1.0 / std::sqrt(static_cast<double>(last - first) * grid.dt);
        for (std::size_t i = first; i < last; ++i)
        {
            double t = grid.time(i);
            x[i] = amp * std::polar(1.0, pi * k * t * t);
        }
        SampledSignal s(std::move(x), grid);
        s.label = "lfm";
        return s;
    }

    inline SampledSignal gen_lfm(double T, double k, double dt, double pad_factor = 2.0)
    {
        detail::check_pulse_args(T, dt);
        return gen_lfm(T, k, detail::padded_window(detail::samples_in(T, dt), dt, pad_factor));
    }

    // u_m(t) = (1/sqrt(T)) exp(i 2 pi m t / T) on [0, T), m = 0 .. M-1.
    // Pairwise orthonormal when T/dt is an integer.
    inline std::vector<SampledSignal> gen_subcarrier_set(std::size_t M, double T, const Grid &grid)
    {
        if (M < 1)
            throw invalid_parameter("gen_subcarrier_set: M must be >= 1");
        detail::check_pulse_args(T, grid.dt);
        if (static_cast<double>(M) / T > 0.5 / grid.dt * (1.0 + 1e-12))
            throw aliasing_error("gen_subcarrier_set: M/T exceeds the Nyquist frequency 1/(2 dt)");
        auto [first, last] = detail::pulse_span(grid, T);
        double amp = 1.0 / std::sqrt(static_cast<double>(last - first) * grid.dt);
        std::vector<SampledSignal> out;
        out.reserve(M);
        for (std::size_t m = 0; m < M; ++m)
        {
            std::vector<cdouble> x(grid.n, 0.0);
            for (std::size_t i = first; i < last; ++i)
                x[i] = amp * cis2pi(static_cast<double>(m) * grid.time(i) / T);
            SampledSignal s(std::move(x), grid);
            s.label = "subcarrier" + std::to_string(m);
            out.push_back(std::move(s));
        }
        return out;
    }

    inline std::vector<SampledSignal> gen_subcarrier_set(std::size_t M, double T, double dt, double pad_factor = 2.0)
    {
        detail::check_pulse_args(T, dt);
        return gen_subcarrier_set(M, T, detail::padded_window(detail::samples_in(T, dt), dt, pad_factor));
    }

    // Gaussians modulated onto subcarriers: u_m(t) = g(t) exp(i 2 pi m df t).
    // Smooth (band-limited) stand-in for the subcarrier set.
    inline std::vector<SampledSignal> gen_modulated_gaussian_set(std::size_t M, double sigma, double df, const Grid &grid)
    {
        if (M < 1)
            throw invalid_parameter("gen_modulated_gaussian_set: M must be >= 1");
        auto base = gen_gaussian(sigma, grid);
        std::vector<SampledSignal> out;
        for (std::size_t m = 0; m < M; ++m)
        {
            std::vector<cdouble> x(grid.n);
            for (std::size_t i = 0; i < grid.n; ++i)
                x[i] = base[i] * cis2pi(static_cast<double>(m) * df * grid.time(i));
            detail::normalise(x, grid.dt);
            SampledSignal s(std::move(x), grid);
            s.label = "modgauss" + std::to_string(m);
            out.push_back(std::move(s));
        }
        return out;
    }

    // Seeded random sum of a few modulated Gaussians, normalised to unit energy.
    // Centres stay within the middle third of the window, widths and
    // modulation frequencies within a quarter of the band.
    inline SampledSignal gen_gaussian_mixture(const Grid &grid, std::uint64_t seed, std::size_t components = 3)
    {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        double span = static_cast<double>(grid.n - 1) * grid.dt;
        double mid = grid.t0 + 0.5 * span;
        double band = 0.5 / grid.dt;
        std::vector<cdouble> x(grid.n, 0.0);
        for (std::size_t c = 0; c < components; ++c)
        {
            double centre = mid + (unit(rng) - 0.5) * span / 3.0;
            double sigma = span * (0.01 + 0.02 * unit(rng));
            double freq = (unit(rng) - 0.5) * 0.5 * band;
            cdouble amp = std::polar(0.5 + unit(rng), 2.0 * pi * unit(rng));
            for (std::size_t i = 0; i < grid.n; ++i)
            {
                double t = grid.time(i) - centre;
                x[i] += amp * std::exp(-t * t / (4.0 * sigma * sigma)) * cis2pi(freq * t);
            }
        }
        detail::normalise(x, grid.dt);
        SampledSignal s(std::move(x), grid);
        s.label = "mixture";
        return s;
    }
}
