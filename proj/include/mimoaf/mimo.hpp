#pragma once

// MIMO correlation matrix and MIMO ambiguity function
//
//     chi(tau, nu, fs, fs') = sum_{m, m'} chi_{m m'}(tau, nu) exp(i 2 pi gamma (fs m - fs' m'))
//
// with chi_{m m'} = chi(u_m, u_m'). The 4-D function is never stored; callers
// evaluate (tau, nu) slices at fixed spatial frequencies or (fs, fs') slices
// at a fixed delay-Doppler point.

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "ambiguity.hpp"

namespace mimoaf
{
    // Uniform spatial-frequency grid fs_k = k / K on [0, 1).
    class SteeringConfig
    {
    public:
        SteeringConfig(std::size_t M, double gamma, std::size_t K)
            : M_(M), gamma_(gamma), K_(K)
        {
            if (M_ < 1)
                throw invalid_parameter("SteeringConfig: M must be >= 1");
            if (!(gamma_ > 0.0) || !std::isfinite(gamma_))
                throw invalid_parameter("SteeringConfig: gamma must be positive");
            if (!(static_cast<double>(K_) > gamma_ * static_cast<double>(M_ - 1)))
                throw invalid_parameter("SteeringConfig: K must exceed gamma (M - 1)");
        }

        std::size_t M() const { return M_; }
        double gamma() const { return gamma_; }
        std::size_t K() const { return K_; }
        double fs(std::size_t k) const { return static_cast<double>(k) / static_cast<double>(K_); }
        Axis fs_axis() const { return {0.0, 1.0 / static_cast<double>(K_), K_}; }

        bool gamma_is_integer() const { return std::abs(gamma_ - std::round(gamma_)) <= 1e-12 * gamma_; }

        void require_integer_gamma(const char *what) const
        {
            if (!gamma_is_integer())
                throw precondition_error(std::string(what) + ": gamma must be an integer");
        }

        // exp(i 2 pi gamma (fs m - fs' m'))
        cdouble steering(std::size_t m, std::size_t mp, double fs, double fsp) const
        {
            return cis2pi(gamma_ * (fs * static_cast<double>(m) - fsp * static_cast<double>(mp)));
        }

    private:
        std::size_t M_;
        double gamma_;
        std::size_t K_;
    };

    // M x M cross ambiguity surfaces on one grid; entry(i, j) = chi(u_i, u_j).
    class CorrelationMatrix
    {
    public:
        CorrelationMatrix(std::size_t M, std::vector<AmbiguitySurface> entries)
            : M_(M), entries_(std::move(entries))
        {
            if (M_ == 0 || entries_.size() != M_ * M_)
                throw invalid_parameter("CorrelationMatrix: need M*M entries");
            for (const auto &e : entries_)
                require_same_axes(e, entries_.front(), "CorrelationMatrix");
        }

        std::size_t M() const { return M_; }
        const AmbiguitySurface &entry(std::size_t i, std::size_t j) const { return entries_.at(i * M_ + j); }
        const Axis &tau_axis() const { return entries_.front().tau_axis(); }
        const Axis &nu_axis() const { return entries_.front().nu_axis(); }

        // R_ij(tau, nu) = int u_i(t) conj(u_j(t - tau)) exp(i 2 pi nu t) dt = chi_ij(-tau, nu).
        AmbiguitySurface R(std::size_t i, std::size_t j) const
        {
            const auto &e = entry(i, j);
            AmbiguitySurface out(e.tau_axis(), e.nu_axis(), e.nu_band_closed());
            std::size_t last = e.n_tau() - 1;
            for (std::size_t a = 0; a < e.n_tau(); ++a)
                for (std::size_t b = 0; b < e.n_nu(); ++b)
                    out(a, b) = e(last - a, b);
            out.label = "R" + std::to_string(i) + std::to_string(j);
            return out;
        }

    private:
        std::size_t M_;
        std::vector<AmbiguitySurface> entries_;
    };

    inline CorrelationMatrix correlation_matrix(std::span<const SampledSignal> waveforms, std::size_t n_doppler,
                                                std::optional<std::size_t> max_lag = std::nullopt)
    {
        if (waveforms.empty())
            throw invalid_parameter("correlation_matrix: empty waveform list");
        std::size_t M = waveforms.size();
        std::vector<AmbiguitySurface> entries;
        entries.reserve(M * M);
        for (std::size_t i = 0; i < M; ++i)
            for (std::size_t j = 0; j < M; ++j)
                entries.push_back(cross_ambiguity(waveforms[i], waveforms[j], n_doppler, max_lag));
        return CorrelationMatrix(M, std::move(entries));
    }

    inline void require_spatial(double f, const char *what)
    {
        if (!(f >= 0.0 && f < 1.0))
            throw invalid_parameter(std::string(what) + ": spatial frequency must lie in [0, 1)");
    }

    inline void require_matching(const CorrelationMatrix &R, const SteeringConfig &cfg, const char *what)
    {
        if (R.M() != cfg.M())
            throw invalid_parameter(std::string(what) + ": steering config M does not match the correlation matrix");
    }

    // (tau, nu) slice of the MIMO ambiguity function at fixed (fs, fs').
    inline AmbiguitySurface mimo_ambiguity(const CorrelationMatrix &R, const SteeringConfig &cfg, double fs, double fs_prime)
    {
        require_matching(R, cfg, "mimo_ambiguity");
        require_spatial(fs, "mimo_ambiguity");
        require_spatial(fs_prime, "mimo_ambiguity");
        const auto &first = R.entry(0, 0);
        AmbiguitySurface out(first.tau_axis(), first.nu_axis(), first.nu_band_closed());
        for (std::size_t m = 0; m < R.M(); ++m)
            for (std::size_t mp = 0; mp < R.M(); ++mp)
            {
                cdouble w = cfg.steering(m, mp, fs, fs_prime);
                const auto &e = R.entry(m, mp);
                for (std::size_t k = 0; k < out.values().size(); ++k)
                    out.values()[k] += e.values()[k] * w;
            }
        out.label = "chi_mimo";
        return out;
    }

    // (fs, fs') slice on the K x K steering grid at a fixed (tau, nu) node.
    // Returned as a surface whose first axis is fs and second is fs'.
    inline AmbiguitySurface mimo_slice_spatial(const CorrelationMatrix &R, const SteeringConfig &cfg, double tau, double nu)
    {
        require_matching(R, cfg, "mimo_slice_spatial");
        auto i = R.tau_axis().index_of(tau);
        auto j = R.nu_axis().index_of(nu);
        if (!i || !j)
            throw grid_alignment_error("mimo_slice_spatial: (tau, nu) is not a node of the surface grid");
        std::size_t M = R.M();
        std::vector<cdouble> x(M * M);
        for (std::size_t m = 0; m < M; ++m)
            for (std::size_t mp = 0; mp < M; ++mp)
                x[m * M + mp] = R.entry(m, mp)(*i, *j);

        AmbiguitySurface out(cfg.fs_axis(), cfg.fs_axis());
        for (std::size_t a = 0; a < cfg.K(); ++a)
            for (std::size_t b = 0; b < cfg.K(); ++b)
            {
                cdouble acc = 0.0;
                for (std::size_t m = 0; m < M; ++m)
                    for (std::size_t mp = 0; mp < M; ++mp)
                        acc += x[m * M + mp] * cfg.steering(m, mp, cfg.fs(a), cfg.fs(b));
                out(a, b) = acc;
            }
        out.label = "chi_mimo_spatial";
        return out;
    }

    // Tr R(tau, nu) = sum_m chi_{m m}(tau, nu).
    inline AmbiguitySurface trace_surface(const CorrelationMatrix &R)
    {
        AmbiguitySurface out = R.entry(0, 0);
        for (std::size_t m = 1; m < R.M(); ++m)
            out = add_scaled(out, 1.0, R.entry(m, m));
        out.label = "trace";
        return out;
    }

    // Left-endpoint Riemann sum of chi(tau, nu, fs, fs) over the K grid points.
    inline AmbiguitySurface spatial_integral_quadrature(const CorrelationMatrix &R, const SteeringConfig &cfg)
    {
        require_matching(R, cfg, "spatial_integral");
        const auto &first = R.entry(0, 0);
        AmbiguitySurface out(first.tau_axis(), first.nu_axis(), first.nu_band_closed());
        const double w = 1.0 / static_cast<double>(cfg.K());
        for (std::size_t k = 0; k < cfg.K(); ++k)
        {
            auto slice = mimo_ambiguity(R, cfg, cfg.fs(k), cfg.fs(k));
            for (std::size_t p = 0; p < out.values().size(); ++p)
                out.values()[p] += w * slice.values()[p];
        }
        out.label = "spatial_integral";
        return out;
    }

    // int_0^1 chi(tau, nu, fs, fs) dfs, evaluated as the trace of R and
    // cross-checked against the fs quadrature. Requires integer gamma.
    inline AmbiguitySurface spatial_integral(const CorrelationMatrix &R, const SteeringConfig &cfg, double tol = 1e-9)
    {
        require_matching(R, cfg, "spatial_integral");
        cfg.require_integer_gamma("spatial_integral");
        auto trace = trace_surface(R);
        auto quad = spatial_integral_quadrature(R, cfg);
        double scale = std::max(frobenius_norm(trace), std::numeric_limits<double>::min());
        double mismatch = frobenius_distance(trace, quad) / scale;
        if (mismatch > tol)
            throw numeric_error("spatial_integral: trace and quadrature paths disagree (relative " + std::to_string(mismatch) + ")");
        return trace;
    }
}
