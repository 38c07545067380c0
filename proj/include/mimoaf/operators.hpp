#pragma once

// Pointwise signal operators: Heisenberg shift, quadratic-phase chirp,
// dilation and the unitary Fourier transform.

#include <algorithm>
#include <cmath>
#include <vector>

#include "fft.hpp"
#include "signal.hpp"

namespace mimoaf
{
    namespace detail
    {
        // Integer sample count for a delay; throws when tau is off the grid.
        inline long long lag_index(double tau, double dt, const char *what)
        {
            double r = tau / dt;
            double k = std::round(r);
            if (std::abs(r - k) > 1e-9 * std::max(1.0, std::abs(r)))
                throw grid_alignment_error(std::string(what) + ": delay is not a multiple of dt");
            return static_cast<long long>(k);
        }

        inline double nyquist(double dt) { return 0.5 / dt; }

        // Largest |t_n| over samples carrying more than `rel` of the peak amplitude.
        inline double support_radius(const SampledSignal &v, double rel = 1e-9)
        {
            double peak = 0.0;
            for (const auto &x : v.samples())
                peak = std::max(peak, std::abs(x));
            double r = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i)
                if (std::abs(v[i]) > rel * peak)
                    r = std::max(r, std::abs(v.time(i)));
            return r;
        }
    }

    // output[n] = exp(i 2 pi (x3 + nu t_n)) v[n + tau/dt], zero-filled outside
    // the window (wrapped for periodic signals).
    inline SampledSignal heisenberg_shift(const SampledSignal &v, const HeisenbergPoint &p)
    {
        long long k = detail::lag_index(p.tau, v.dt(), "heisenberg_shift");
        if (std::abs(p.nu) > detail::nyquist(v.dt()) * (1.0 + 1e-12))
            throw aliasing_error("heisenberg_shift: |nu| exceeds 1/(2 dt)");
        std::vector<cdouble> out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            out[i] = cis2pi(p.x3 + p.nu * v.time(i)) * v.at_offset(i, k);
        SampledSignal s(std::move(out), v.dt(), v.t0(), v.periodic());
        s.label = v.label;
        return s;
    }

    // output[n] = v[n] exp(i pi k t_n^2). Chirp rate k in Hz/s.
    inline SampledSignal chirp_multiply(const SampledSignal &v, double k)
    {
        if (std::abs(k) * detail::support_radius(v) > detail::nyquist(v.dt()) * (1.0 + 1e-12))
            throw aliasing_error("chirp_multiply: instantaneous frequency |k t| exceeds 1/(2 dt) on the support");
        std::vector<cdouble> out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
        {
            double t = v.time(i);
            out[i] = v[i] * cis2pi(0.5 * k * t * t);
        }
        SampledSignal s(std::move(out), v.dt(), v.t0(), v.periodic());
        s.label = v.label;
        return s;
    }

    enum class FourierKernel
    {
        forward, // F{v}(xi) = int v(t) exp(-i 2 pi xi t) dt
        inverse  // kernel exp(+i 2 pi xi t)
    };

    // Samples of the continuous-time Fourier transform on xi_k = (k - N/2) dxi,
    // dxi = 1 / (N dt). Unitary: energy is preserved. The result lives on a
    // grid with step dxi and origin -N/2 dxi, and has its periodic flag flipped
    // (the spectrum of a discrete-time signal is periodic).
    inline SampledSignal fourier(const SampledSignal &v, FourierKernel kernel = FourierKernel::forward)
    {
        std::size_t n = v.size();
        std::size_t c = n / 2;
        double dxi = 1.0 / (static_cast<double>(n) * v.dt());
        double sign = kernel == FourierKernel::forward ? -1.0 : 1.0;

        fft::buffer in(n), spec(n);
        for (std::size_t i = 0; i < n; ++i)
            in[i] = v[i];
        fft::transform(in, spec, kernel == FourierKernel::forward ? fft::direction::forward : fft::direction::backward);

        std::vector<cdouble> out(n);
        for (std::size_t k = 0; k < n; ++k)
        {
            long long j = static_cast<long long>(k) - static_cast<long long>(c);
            std::size_t idx = static_cast<std::size_t>((j % static_cast<long long>(n) + static_cast<long long>(n)) % static_cast<long long>(n));
            double xi = static_cast<double>(j) * dxi;
            out[k] = v.dt() * cis2pi(sign * xi * v.t0()) * spec[idx];
        }
        SampledSignal s(std::move(out), dxi, -static_cast<double>(c) * dxi, !v.periodic());
        s.label = v.label.empty() ? std::string("F") : "F{" + v.label + "}";
        return s;
    }

    namespace detail
    {
        inline double kaiser(double x, double half_width, double beta)
        {
            double r = x / half_width;
            if (std::abs(r) >= 1.0)
                return 0.0;
            return std::cyl_bessel_i(0.0, beta * std::sqrt(1.0 - r * r)) / std::cyl_bessel_i(0.0, beta);
        }

        inline double sinc(double x)
        {
            if (x == 0.0)
                return 1.0;
            return std::sin(pi * x) / (pi * x);
        }

        // Fraction of spectral energy above `cutoff` Hz.
        inline double energy_above(const SampledSignal &v, double cutoff)
        {
            auto spec = fourier(v);
            double dxi = spec.dt();
            double above = 0.0, total = 0.0;
            for (std::size_t k = 0; k < spec.size(); ++k)
            {
                double e = std::norm(spec[k]);
                total += e;
                if (std::abs(spec.time(k)) > cutoff + 1e-12 * dxi)
                    above += e;
            }
            return total > 0.0 ? above / total : 0.0;
        }
    }

    struct DilationKernel
    {
        int taps = 16;
        double beta = 10.0;
    };

    // Samples of v(b t) on the same grid, by Kaiser-windowed sinc
    // interpolation. Energy scales by 1/b.
    inline SampledSignal dilate(const SampledSignal &v, double b, DilationKernel kernel = {})
    {
        if (!(b > 0.0) || !std::isfinite(b))
            throw invalid_parameter("dilate: b must be positive");
        if (b > 1.0 && detail::energy_above(v, detail::nyquist(v.dt()) / b) > 1e-8)
            throw aliasing_error("dilate: spectrum of v scaled by b exceeds the Nyquist frequency");

        const double half = 0.5 * kernel.taps;
        const long long n = static_cast<long long>(v.size());
        std::vector<cdouble> out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
        {
            double x = (b * v.time(i) - v.t0()) / v.dt(); // fractional source index
            double xr = std::round(x);
            if (std::abs(x - xr) < 1e-12 * std::max(1.0, std::abs(x)))
            {
                long long j = static_cast<long long>(xr);
                out[i] = (j >= 0 && j < n) ? v[static_cast<std::size_t>(j)] : cdouble(0.0);
                continue;
            }
            long long lo = static_cast<long long>(std::floor(x)) - kernel.taps / 2 + 1;
            // weights renormalised to unit DC gain; taps off the grid still count toward the sum
            cdouble acc = 0.0;
            double wsum = 0.0;
            for (long long j = lo; j < lo + kernel.taps; ++j)
            {
                double d = x - static_cast<double>(j);
                double w = detail::sinc(d) * detail::kaiser(d, half, kernel.beta);
                wsum += w;
                if (j >= 0 && j < n)
                    acc += v[static_cast<std::size_t>(j)] * w;
            }
            out[i] = acc / wsum;
        }
        SampledSignal s(std::move(out), v.dt(), v.t0(), v.periodic());
        s.label = v.label;
        return s;
    }
}
