#pragma once

// Independent reference computations: direct sums and closed forms. Nothing
// here touches the FFT path.

#include <cmath>
#include <complex>
#include <optional>

#include "mimoaf.hpp"

namespace oracle
{
    using mimoaf::AmbiguitySurface;
    using mimoaf::Axis;
    using mimoaf::cdouble;
    using mimoaf::SampledSignal;

    inline constexpr double pi = 3.141592653589793238462643383279502884;

    // dt * sum_n u[n] conj(v[n + k]) exp(i 2 pi nu_j t_n), O(N^2 L).
    inline AmbiguitySurface cross_ambiguity_oracle(const SampledSignal &u, const SampledSignal &v, std::size_t n_doppler,
                                                   std::optional<std::size_t> max_lag = std::nullopt)
    {
        const std::size_t n = u.size();
        const std::size_t lags = std::min(max_lag.value_or(n - 1), n - 1);
        const double dt = u.dt();
        const double dnu = 1.0 / (static_cast<double>(n_doppler) * dt);
        const auto half = static_cast<long long>(n_doppler / 2);
        Axis tau{-static_cast<double>(lags) * dt, dt, 2 * lags + 1};
        Axis nu{-static_cast<double>(half) * dnu, dnu, static_cast<std::size_t>(2 * half + 1)};
        AmbiguitySurface s(tau, nu, n_doppler % 2 == 0);
        for (std::size_t i = 0; i < tau.size; ++i)
        {
            long long k = static_cast<long long>(i) - static_cast<long long>(lags);
            for (std::size_t j = 0; j < nu.size; ++j)
            {
                long double f = (static_cast<long double>(j) - half) * dnu;
                std::complex<long double> acc = 0.0L;
                for (std::size_t m = 0; m < n; ++m)
                {
                    long long q = static_cast<long long>(m) + k;
                    cdouble w;
                    if (u.periodic())
                        w = v[static_cast<std::size_t>(((q % (long long)n) + (long long)n) % (long long)n)];
                    else if (q < 0 || q >= static_cast<long long>(n))
                        continue;
                    else
                        w = v[static_cast<std::size_t>(q)];
                    long double t = static_cast<long double>(u.t0()) + static_cast<long double>(m) * dt;
                    long double ph = 2.0L * static_cast<long double>(pi) * f * t;
                    std::complex<long double> prod(u[m] * std::conj(w));
                    acc += prod * std::complex<long double>(std::cos(ph), std::sin(ph));
                }
                s(i, j) = cdouble(static_cast<double>(acc.real() * dt), static_cast<double>(acc.imag() * dt));
            }
        }
        return s;
    }

    // u(t) = 2^(1/4) exp(-pi t^2): chi(tau, nu) = exp(-pi (tau^2 + nu^2) / 2) exp(-i pi nu tau).
    inline cdouble gaussian_af(double tau, double nu)
    {
        return std::exp(-pi * (tau * tau + nu * nu) / 2.0) * std::polar(1.0, -pi * nu * tau);
    }

    inline double gaussian_wigner(double t, double f) { return 2.0 * std::exp(-2.0 * pi * (t * t + f * f)); }

    inline double gaussian(double t) { return std::pow(2.0, 0.25) * std::exp(-pi * t * t); }

    // Unit-energy rect of length T: |chi(tau, 0)| and |chi(0, nu)|.
    inline double rect_triangle(double tau, double T) { return std::max(0.0, 1.0 - std::abs(tau) / T); }
    inline double rect_sinc(double nu, double T)
    {
        double x = pi * nu * T;
        return x == 0.0 ? 1.0 : std::abs(std::sin(x) / x);
    }

    // Composite Simpson rule on [a, b].
    inline double simpson(double (*f)(double), double a, double b, std::size_t n)
    {
        if (n % 2)
            ++n;
        double h = (b - a) / static_cast<double>(n);
        double s = f(a) + f(b);
        for (std::size_t i = 1; i < n; ++i)
            s += f(a + static_cast<double>(i) * h) * (i % 2 ? 4.0 : 2.0);
        return s * h / 3.0;
    }

    inline double max_abs_diff(const AmbiguitySurface &a, const AmbiguitySurface &b)
    {
        double m = 0.0;
        for (std::size_t k = 0; k < a.values().size(); ++k)
            m = std::max(m, std::abs(a.values()[k] - b.values()[k]));
        return m;
    }

    inline constexpr double gaussian_sigma = 0.28209479177387814; // 1 / (2 sqrt(pi))
}
