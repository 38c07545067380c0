#pragma once

// Complex 2-D grid over (delay, Doppler) -- or (time, frequency) for Wigner
// distributions -- with uniform axes and Riemann quadrature weights.

#include <algorithm>
#include <cmath>
#include <limits>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "signal.hpp"

namespace mimoaf
{
    // x_i = origin + i * step, i = 0 .. size-1.
    struct Axis
    {
        double origin = 0.0;
        double step = 1.0;
        std::size_t size = 0;

        double at(std::size_t i) const { return origin + static_cast<double>(i) * step; }
        double last() const { return at(size - 1); }

        // Symmetric axis -half*step .. half*step.
        static Axis symmetric(std::size_t half, double step)
        {
            return {-static_cast<double>(half) * step, step, 2 * half + 1};
        }

        bool is_symmetric() const
        {
            return size > 0 && std::abs(origin + last()) <= 1e-9 * std::abs(step) * static_cast<double>(size);
        }

        // Fractional index of x.
        double position(double x) const { return (x - origin) / step; }

        // Index of x when it sits on a node.
        std::optional<std::size_t> index_of(double x, double rel_tol = 1e-9) const
        {
            double p = position(x);
            double r = std::round(p);
            if (std::abs(p - r) > rel_tol * std::max(1.0, std::abs(p)))
                return std::nullopt;
            if (r < 0.0 || r > static_cast<double>(size - 1))
                return std::nullopt;
            return static_cast<std::size_t>(r);
        }
    };

    inline bool same_axis(const Axis &a, const Axis &b)
    {
        if (a.size != b.size)
            return false;
        double s = std::max(std::abs(a.step), std::abs(b.step));
        return std::abs(a.step - b.step) <= 1e-12 * s &&
               std::abs(a.origin - b.origin) <= 1e-9 * s;
    }

    class AmbiguitySurface
    {
    public:
        AmbiguitySurface() = default;

        // `nu_band_closed`: the first and last Doppler columns are the two ends
        // of one periodic band and share a trapezoid half-weight each.
        AmbiguitySurface(Axis tau, Axis nu, bool nu_band_closed = false)
            : tau_(tau), nu_(nu), nu_band_closed_(nu_band_closed), values_(tau.size * nu.size, 0.0)
        {
            if (tau.size == 0 || nu.size == 0)
                throw invalid_parameter("AmbiguitySurface: axes must be non-empty");
            if (!(tau.step > 0.0) || !(nu.step > 0.0))
                throw invalid_parameter("AmbiguitySurface: axes must be strictly increasing");
        }

        const Axis &tau_axis() const { return tau_; }
        const Axis &nu_axis() const { return nu_; }
        std::size_t n_tau() const { return tau_.size; }
        std::size_t n_nu() const { return nu_.size; }
        bool nu_band_closed() const { return nu_band_closed_; }

        cdouble &operator()(std::size_t i, std::size_t j) { return values_[i * nu_.size + j]; }
        const cdouble &operator()(std::size_t i, std::size_t j) const { return values_[i * nu_.size + j]; }

        std::vector<cdouble> &values() { return values_; }
        const std::vector<cdouble> &values() const { return values_; }

        double tau_weight(std::size_t) const { return tau_.step; }
        double nu_weight(std::size_t j) const
        {
            if (nu_band_closed_ && nu_.size > 1 && (j == 0 || j + 1 == nu_.size))
                return 0.5 * nu_.step;
            return nu_.step;
        }

        // Value at (tau, nu) when both lie on grid nodes.
        std::optional<cdouble> at(double tau, double nu) const
        {
            auto i = tau_.index_of(tau);
            auto j = nu_.index_of(nu);
            if (!i || !j)
                return std::nullopt;
            return (*this)(*i, *j);
        }

        // Fraction of output points whose source fell inside the source grid
        // (set by act_on_surface, 1 for directly computed surfaces).
        double coverage = 1.0;
        std::string label;

    private:
        Axis tau_;
        Axis nu_;
        bool nu_band_closed_ = false;
        std::vector<cdouble> values_;
    };

    inline bool same_axes(const AmbiguitySurface &a, const AmbiguitySurface &b)
    {
        return same_axis(a.tau_axis(), b.tau_axis()) && same_axis(a.nu_axis(), b.nu_axis());
    }

    inline void require_same_axes(const AmbiguitySurface &a, const AmbiguitySurface &b, const char *what)
    {
        if (!same_axes(a, b))
            throw grid_mismatch(std::string(what) + ": surfaces are on different grids");
    }

    // Quadrature of a * conj(b) over the plane.
    inline cdouble l2_inner(const AmbiguitySurface &a, const AmbiguitySurface &b)
    {
        require_same_axes(a, b, "l2_inner");
        cdouble acc = 0.0;
        for (std::size_t i = 0; i < a.n_tau(); ++i)
        {
            cdouble row = 0.0;
            for (std::size_t j = 0; j < a.n_nu(); ++j)
                row += a(i, j) * std::conj(b(i, j)) * a.nu_weight(j);
            acc += row * a.tau_weight(i);
        }
        return acc;
    }

    // Quadrature of |a|^2 over the plane.
    inline double l2_norm_sq(const AmbiguitySurface &a)
    {
        double acc = 0.0;
        for (std::size_t i = 0; i < a.n_tau(); ++i)
        {
            double row = 0.0;
            for (std::size_t j = 0; j < a.n_nu(); ++j)
                row += std::norm(a(i, j)) * a.nu_weight(j);
            acc += row * a.tau_weight(i);
        }
        return acc;
    }

    // Unweighted Frobenius norm over grid points.
    inline double frobenius_norm(const AmbiguitySurface &a)
    {
        double acc = 0.0;
        for (const auto &x : a.values())
            acc += std::norm(x);
        return std::sqrt(acc);
    }

    inline double frobenius_distance(const AmbiguitySurface &a, const AmbiguitySurface &b)
    {
        require_same_axes(a, b, "frobenius_distance");
        double acc = 0.0;
        for (std::size_t k = 0; k < a.values().size(); ++k)
            acc += std::norm(a.values()[k] - b.values()[k]);
        return std::sqrt(acc);
    }

    // ||a - b||_F / ||b||_F (0 when both vanish).
    inline double relative_frobenius(const AmbiguitySurface &a, const AmbiguitySurface &b)
    {
        double d = frobenius_distance(a, b);
        double r = frobenius_norm(b);
        if (r == 0.0)
            return d == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        return d / r;
    }

    // a + c * b
    inline AmbiguitySurface add_scaled(const AmbiguitySurface &a, cdouble c, const AmbiguitySurface &b)
    {
        require_same_axes(a, b, "add_scaled");
        AmbiguitySurface out = a;
        for (std::size_t k = 0; k < out.values().size(); ++k)
            out.values()[k] += c * b.values()[k];
        return out;
    }

    inline AmbiguitySurface scaled(const AmbiguitySurface &a, cdouble c)
    {
        AmbiguitySurface out = a;
        for (auto &x : out.values())
            x *= c;
        return out;
    }

    // Multiplies each value by f(tau, nu).
    template <typename F>
    AmbiguitySurface modulated(const AmbiguitySurface &a, F &&f)
    {
        AmbiguitySurface out = a;
        for (std::size_t i = 0; i < a.n_tau(); ++i)
            for (std::size_t j = 0; j < a.n_nu(); ++j)
                out(i, j) *= f(a.tau_axis().at(i), a.nu_axis().at(j));
        return out;
    }

    // Sub-grid with the given index ranges (inclusive first, exclusive last).
    inline AmbiguitySurface crop(const AmbiguitySurface &a, std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1)
    {
        if (i1 > a.n_tau() || j1 > a.n_nu() || i0 >= i1 || j0 >= j1)
            throw invalid_parameter("crop: index range outside surface");
        Axis tau{a.tau_axis().at(i0), a.tau_axis().step, i1 - i0};
        Axis nu{a.nu_axis().at(j0), a.nu_axis().step, j1 - j0};
        AmbiguitySurface out(tau, nu, false);
        for (std::size_t i = i0; i < i1; ++i)
            for (std::size_t j = j0; j < j1; ++j)
                out(i - i0, j - j0) = a(i, j);
        out.label = a.label;
        return out;
    }

    // Symmetric window |tau| <= tau_max, |nu| <= nu_max of a symmetric-axis surface.
    inline AmbiguitySurface crop_symmetric(const AmbiguitySurface &a, double tau_max, double nu_max)
    {
        auto window = [](const Axis &ax, double lim)
        {
            auto centre = static_cast<long long>((ax.size - 1) / 2);
            auto half = static_cast<long long>(std::floor(lim / ax.step + 1e-9));
            half = std::min(half, centre);
            return std::pair<std::size_t, std::size_t>(static_cast<std::size_t>(centre - half),
                                                       static_cast<std::size_t>(centre + half + 1));
        };
        if (!a.tau_axis().is_symmetric() || !a.nu_axis().is_symmetric())
            throw invalid_parameter("crop_symmetric: surface axes are not symmetric about 0");
        auto [i0, i1] = window(a.tau_axis(), tau_max);
        auto [j0, j1] = window(a.nu_axis(), nu_max);
        return crop(a, i0, i1, j0, j1);
    }
}
