#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace mimoaf
{
    using cdouble = std::complex<double>;

    inline constexpr double pi = 3.141592653589793238462643383279502884;

    // exp(i 2 pi x)
    inline cdouble cis2pi(double x)
    {
        x -= std::round(x);
        return {std::cos(2.0 * pi * x), std::sin(2.0 * pi * x)};
    }

    // Uniform time grid: t_n = t0 + n * dt, n = 0 .. n-1.
    struct Grid
    {
        std::size_t n = 0;
        double dt = 0.0;
        double t0 = 0.0;

        double time(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }

        // Centred window of n samples with t = 0 at index n/2.
        static Grid centered(std::size_t n, double dt)
        {
            return {n, dt, -static_cast<double>(n / 2) * dt};
        }
    };

    inline bool same_grid(const Grid &a, const Grid &b)
    {
        if (a.n != b.n)
            return false;
        double scale = std::max(std::abs(a.dt), std::abs(b.dt));
        return std::abs(a.dt - b.dt) <= 1e-12 * scale &&
               std::abs(a.t0 - b.t0) <= 1e-9 * scale;
    }

    // Uniformly sampled complex baseband waveform.
    //
    // `periodic` marks samples of a spectrum of a discrete-time signal (the
    // output of fourier()). Such sequences are periodic by construction, so
    // shifts and lags applied to them wrap around instead of zero-filling.
    class SampledSignal
    {
    public:
        SampledSignal(std::vector<cdouble> samples, double dt, double t0, bool periodic = false)
            : samples_(std::move(samples)), dt_(dt), t0_(t0), periodic_(periodic)
        {
            if (samples_.empty())
                throw invalid_parameter("SampledSignal: samples must be non-empty");
            if (!(dt_ > 0.0) || !std::isfinite(dt_))
                throw invalid_parameter("SampledSignal: dt must be positive and finite");
            if (!std::isfinite(t0_))
                throw invalid_parameter("SampledSignal: t0 must be finite");
            for (const auto &s : samples_)
                if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
                    throw invalid_parameter("SampledSignal: samples must be finite");
        }

        SampledSignal(std::vector<cdouble> samples, const Grid &grid, bool periodic = false)
            : SampledSignal(std::move(samples), grid.dt, grid.t0, periodic)
        {
            if (samples_.size() != grid.n)
                throw invalid_parameter("SampledSignal: sample count does not match grid");
        }

        std::size_t size() const { return samples_.size(); }
        double dt() const { return dt_; }
        double t0() const { return t0_; }
        bool periodic() const { return periodic_; }
        Grid grid() const { return {samples_.size(), dt_, t0_}; }
        double time(std::size_t i) const { return t0_ + static_cast<double>(i) * dt_; }

        std::span<const cdouble> samples() const { return samples_; }
        const cdouble &operator[](std::size_t i) const { return samples_[i]; }

        // Sample at index i + offset with zero-fill (or wrap, when periodic).
        cdouble at_offset(std::size_t i, long long offset) const
        {
            long long n = static_cast<long long>(samples_.size());
            long long j = static_cast<long long>(i) + offset;
            if (periodic_)
            {
                j %= n;
                if (j < 0)
                    j += n;
                return samples_[static_cast<std::size_t>(j)];
            }
            if (j < 0 || j >= n)
                return 0.0;
            return samples_[static_cast<std::size_t>(j)];
        }

        SampledSignal scaled(cdouble c) const
        {
            std::vector<cdouble> out(samples_);
            for (auto &s : out)
                s *= c;
            return SampledSignal(std::move(out), dt_, t0_, periodic_);
        }

        SampledSignal conjugated() const
        {
            std::vector<cdouble> out(samples_);
            for (auto &s : out)
                s = std::conj(s);
            return SampledSignal(std::move(out), dt_, t0_, periodic_);
        }

        std::string label;

    private:
        std::vector<cdouble> samples_;
        double dt_;
        double t0_;
        bool periodic_;
    };

    inline void require_compatible(const SampledSignal &u, const SampledSignal &v, const char *what)
    {
        if (!same_grid(u.grid(), v.grid()))
            throw grid_mismatch(std::string(what) + ": signals are not on a common grid");
    }

    // dt * sum |x[n]|^2
    inline double energy(const SampledSignal &s)
    {
        double acc = 0.0;
        for (const auto &x : s.samples())
            acc += std::norm(x);
        return acc * s.dt();
    }

    inline double norm(const SampledSignal &s) { return std::sqrt(energy(s)); }

    // <u, v> = dt * sum u[n] conj(v[n]); linear in u, conjugate-linear in v.
    inline cdouble inner_product(const SampledSignal &u, const SampledSignal &v)
    {
        require_compatible(u, v, "inner_product");
        cdouble acc = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i)
            acc += u[i] * std::conj(v[i]);
        return acc * u.dt();
    }

    // L2 distance between samples, ||u - v||.
    inline double distance(const SampledSignal &u, const SampledSignal &v)
    {
        require_compatible(u, v, "distance");
        double acc = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i)
            acc += std::norm(u[i] - v[i]);
        return std::sqrt(acc * u.dt());
    }

    // a*u + b*v on a shared grid.
    inline SampledSignal combine(cdouble a, const SampledSignal &u, cdouble b, const SampledSignal &v)
    {
        require_compatible(u, v, "combine");
        std::vector<cdouble> out(u.size());
        for (std::size_t i = 0; i < u.size(); ++i)
            out[i] = a * u[i] + b * v[i];
        return SampledSignal(std::move(out), u.dt(), u.t0(), u.periodic());
    }

    // Element (x1, x2, x3) = (tau, nu, x3) of the real Heisenberg group with
    // product (x)(y) = (x1 + y1, x2 + y2, x3 + y3 + x1 y2).
    struct HeisenbergPoint
    {
        double tau = 0.0;
        double nu = 0.0;
        double x3 = 0.0;

        HeisenbergPoint operator*(const HeisenbergPoint &y) const
        {
            return {tau + y.tau, nu + y.nu, x3 + y.x3 + tau * y.nu};
        }

        HeisenbergPoint inverse() const { return {-tau, -nu, -x3 + tau * nu}; }
    };
}
