#pragma once

// Cross/self ambiguity surfaces and the Wigner distribution.
//
// Convention (matches <u, T(tau, nu) v> with the Doppler axis inverted):
//
//     chi(u, v)(tau, nu) = int u(t) conj(v(t + tau)) exp(+i 2 pi nu t) dt
//
// Discretised as dt * sum_n u[n] conj(v[n + k]) exp(i 2 pi nu t_n) for every
// lag k and one zero-padded FFT of length n_doppler per lag.

#include <algorithm>
#include <optional>
#include <string>

#include "fft.hpp"
#include "parallel.hpp"
#include "signal.hpp"
#include "surface.hpp"

namespace mimoaf
{
    inline std::size_t default_n_doppler(std::size_t n) { return 4 * n; }

    // Doppler axis for an FFT of length L: nu_j = (j - L/2) / (L dt), L/2
    // rounded down. Even L closes the band with a duplicated end point.
    inline Axis doppler_axis(std::size_t n_doppler, double dt)
    {
        return Axis::symmetric(n_doppler / 2, 1.0 / (static_cast<double>(n_doppler) * dt));
    }

    // Full lag range is [-(N-1), N-1]; `max_lag` (in samples) narrows it.
    inline AmbiguitySurface cross_ambiguity(const SampledSignal &u, const SampledSignal &v,
                                            std::size_t n_doppler,
                                            std::optional<std::size_t> max_lag = std::nullopt)
    {
        require_compatible(u, v, "cross_ambiguity");
        if (u.periodic() != v.periodic())
            throw grid_mismatch("cross_ambiguity: cannot mix periodic (spectral) and aperiodic signals");
        const std::size_t n = u.size();
        if (n_doppler < n)
            throw invalid_parameter("cross_ambiguity: n_doppler must be >= signal length");
        const std::size_t lags = std::min(max_lag.value_or(n - 1), n - 1);

        const double dt = u.dt();
        const Axis tau = Axis::symmetric(lags, dt);
        const Axis nu = doppler_axis(n_doppler, dt);
        AmbiguitySurface s(tau, nu, n_doppler % 2 == 0);
        s.label = "chi(" + u.label + "," + v.label + ")";

        const auto half = static_cast<long long>(n_doppler / 2);
        const auto L = static_cast<long long>(n_doppler);

        // exp(i 2 pi nu_j t0), shared by every lag row.
        std::vector<cdouble> origin_phase(nu.size);
        for (std::size_t j = 0; j < nu.size; ++j)
            origin_phase[j] = dt * cis2pi(nu.at(j) * u.t0());

        parallel_for(tau.size, [&](std::size_t row)
                     {
            long long k = static_cast<long long>(row) - static_cast<long long>(lags);
            fft::buffer prod(n_doppler), spec(n_doppler);
            for (std::size_t i = 0; i < n; ++i)
                prod[i] = u[i] * std::conj(v.at_offset(i, k));
            fft::transform(prod, spec, fft::direction::backward);
            for (std::size_t j = 0; j < nu.size; ++j)
            {
                long long bin = ((static_cast<long long>(j) - half) % L + L) % L;
                s(row, j) = origin_phase[j] * spec[static_cast<std::size_t>(bin)];
            } });
        return s;
    }

    inline AmbiguitySurface cross_ambiguity(const SampledSignal &u, const SampledSignal &v)
    {
        return cross_ambiguity(u, v, default_n_doppler(u.size()));
    }

    inline AmbiguitySurface self_ambiguity(const SampledSignal &u, std::size_t n_doppler,
                                           std::optional<std::size_t> max_lag = std::nullopt)
    {
        return cross_ambiguity(u, u, n_doppler, max_lag);
    }

    // Discrete cross-Wigner distribution
    //
    //     W(u, v)(t, f) = int u(t + tau/2) conj(v(t - tau/2)) exp(-i 2 pi f tau) dtau
    //
    // evaluated at t = t_n with lags tau = 2 m dt, so both t +- tau/2 fall on
    // samples. The frequency band is 1/(2 dt) wide (period of the 2 dt lag
    // step), sampled with n_freq bins. W(u, u) is real.
    inline AmbiguitySurface wigner(const SampledSignal &u, const SampledSignal &v, std::size_t n_freq = 0)
    {
        require_compatible(u, v, "wigner");
        const std::size_t n = u.size();
        if (n_freq == 0)
            n_freq = 2 * n;
        if (n_freq < n)
            throw invalid_parameter("wigner: n_freq must be >= signal length");
        const double dt = u.dt();
        const Axis time{u.t0(), dt, n};
        const Axis freq = Axis::symmetric(n_freq / 2, 1.0 / (2.0 * static_cast<double>(n_freq) * dt));
        AmbiguitySurface w(time, freq, n_freq % 2 == 0);
        w.label = "W(" + u.label + "," + v.label + ")";

        const auto half = static_cast<long long>(n_freq / 2);
        const auto L = static_cast<long long>(n_freq);
        parallel_for(n, [&](std::size_t i)
                     {
            fft::buffer kern(n_freq), spec(n_freq);
            auto reach = static_cast<long long>(std::min(i, n - 1 - i));
            for (long long m = -reach; m <= reach; ++m)
            {
                auto idx = static_cast<std::size_t>((m % L + L) % L);
                kern[idx] = u[static_cast<std::size_t>(static_cast<long long>(i) + m)] *
                            std::conj(v[static_cast<std::size_t>(static_cast<long long>(i) - m)]);
            }
            fft::transform(kern, spec, fft::direction::forward);
            for (std::size_t j = 0; j < freq.size; ++j)
            {
                long long bin = ((static_cast<long long>(j) - half) % L + L) % L;
                w(i, j) = 2.0 * dt * spec[static_cast<std::size_t>(bin)];
            } });
        return w;
    }
}
