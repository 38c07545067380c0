#pragma once

// SL(2, R) action on delay-Doppler surfaces and the dual-path checks
//
//     J:     chi(u, v)(nu, -tau)          = chi(F u, F v)(tau, nu) exp(i 2 pi nu tau)
//     -I:    chi(u, v)(-tau, -nu)         = conj(chi(v, u)(tau, nu)) exp(-i 2 pi nu tau)
//     t(-k): chi(u, v)(tau, nu - k tau) exp(-i pi k tau^2) = chi(chirp u, chirp v)(tau, nu)
//     m(b):  (1/b) chi(u, v)(b tau, nu / b) = chi(u(b.), v(b.))(tau, nu)
//
// F here uses the exp(+i 2 pi xi t) kernel; with the forward kernel the
// rotation lands on (-nu, tau) instead.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ambiguity.hpp"
#include "check_report.hpp"
#include "mimo.hpp"
#include "operators.hpp"
#include "sl2.hpp"

namespace mimoaf
{
    namespace detail
    {
        // Bilinear sample of s at (x, y); nullopt outside the grid. Positions
        // within 1e-9 of a node snap to it, so node-to-node maps are exact.
        inline std::optional<cdouble> bilinear(const AmbiguitySurface &s, double x, double y)
        {
            auto locate = [](const Axis &ax, double v, std::size_t &i0, double &f) -> bool
            {
                double p = ax.position(v);
                double r = std::round(p);
                if (std::abs(p - r) <= 1e-9 * std::max(1.0, std::abs(p)))
                    p = r;
                double top = static_cast<double>(ax.size - 1);
                if (p < 0.0 || p > top)
                    return false;
                double fl = std::floor(p);
                i0 = static_cast<std::size_t>(fl);
                f = p - fl;
                if (i0 == ax.size - 1)
                    f = 0.0;
                return true;
            };
            std::size_t i0, j0;
            double fx, fy;
            if (!locate(s.tau_axis(), x, i0, fx) || !locate(s.nu_axis(), y, j0, fy))
                return std::nullopt;
            cdouble v = (1.0 - fx) * (1.0 - fy) * s(i0, j0);
            if (fx > 0.0)
                v += fx * (1.0 - fy) * s(i0 + 1, j0);
            if (fy > 0.0)
                v += (1.0 - fx) * fy * s(i0, j0 + 1);
            if (fx > 0.0 && fy > 0.0)
                v += fx * fy * s(i0 + 1, j0 + 1);
            return v;
        }

        inline bool square_grid(const AmbiguitySurface &s)
        {
            return same_axis(s.tau_axis(), s.nu_axis()) && s.tau_axis().is_symmetric();
        }

        inline bool symmetric_grid(const AmbiguitySurface &s)
        {
            return s.tau_axis().is_symmetric() && s.nu_axis().is_symmetric();
        }
    }

    // output(tau, nu) = s(g (tau, nu)) on the given output axes. Points whose
    // image falls outside s are zero and lower `coverage`.
    inline AmbiguitySurface act_on_surface(const AmbiguitySurface &s, const Sl2Element &g, const Axis &tau_out,
                                           const Axis &nu_out)
    {
        const bool same = same_axis(tau_out, s.tau_axis()) && same_axis(nu_out, s.nu_axis());
        const std::size_t nt = s.n_tau(), nn = s.n_nu();
        if (same)
        {
            if (g.approx(Sl2Element::identity()))
            {
                AmbiguitySurface out = s;
                out.coverage = 1.0;
                return out;
            }
            if (g.approx(Sl2Element(-1.0, 0.0, 0.0, -1.0)) && detail::symmetric_grid(s))
            {
                AmbiguitySurface out(s.tau_axis(), s.nu_axis(), s.nu_band_closed());
                for (std::size_t i = 0; i < nt; ++i)
                    for (std::size_t j = 0; j < nn; ++j)
                        out(i, j) = s(nt - 1 - i, nn - 1 - j);
                out.label = s.label;
                return out;
            }
            if (detail::square_grid(s))
            {
                // J (tau, nu) = (nu, -tau); J^-1 (tau, nu) = (-nu, tau).
                bool rot = g.approx(Sl2Element::rotation());
                bool inv = g.approx(Sl2Element::rotation().inverse());
                if (rot || inv)
                {
                    AmbiguitySurface out(s.tau_axis(), s.nu_axis(), false);
                    for (std::size_t i = 0; i < nt; ++i)
                        for (std::size_t j = 0; j < nn; ++j)
                            out(i, j) = rot ? s(j, nt - 1 - i) : s(nn - 1 - j, i);
                    out.label = s.label;
                    return out;
                }
            }
        }

        AmbiguitySurface out(tau_out, nu_out, false);
        std::vector<std::size_t> hits(tau_out.size, 0);
        parallel_for(tau_out.size, [&](std::size_t i)
                     {
            for (std::size_t j = 0; j < nu_out.size; ++j)
            {
                auto [x, y] = g.apply(tau_out.at(i), nu_out.at(j));
                if (auto v = detail::bilinear(s, x, y))
                {
                    out(i, j) = *v;
                    ++hits[i];
                }
            } });
        std::size_t covered = 0;
        for (auto h : hits)
            covered += h;
        out.coverage = static_cast<double>(covered) / static_cast<double>(tau_out.size * nu_out.size);
        out.label = s.label;
        return out;
    }

    inline AmbiguitySurface act_on_surface(const AmbiguitySurface &s, const Sl2Element &g)
    {
        return act_on_surface(s, g, s.tau_axis(), s.nu_axis());
    }

    // Generator whose dual action is being verified.
    struct SymmetryGenerator
    {
        enum class Kind
        {
            rotation, // J
            mirror,   // J^2 = -I
            shear,    // t(-k), param = chirp rate k
            dilation  // m(b), param = b
        };
        Kind kind = Kind::rotation;
        double param = 0.0;

        static SymmetryGenerator rotation() { return {Kind::rotation, 0.0}; }
        static SymmetryGenerator mirror() { return {Kind::mirror, 0.0}; }
        static SymmetryGenerator shear(double k) { return {Kind::shear, k}; }
        static SymmetryGenerator dilation(double b) { return {Kind::dilation, b}; }

        Sl2Element element() const
        {
            switch (kind)
            {
            case Kind::rotation:
                return Sl2Element::rotation();
            case Kind::mirror:
                return Sl2Element::rotation() * Sl2Element::rotation();
            case Kind::shear:
                return Sl2Element::shear(-param);
            case Kind::dilation:
                return Sl2Element::dilation(param);
            }
            return Sl2Element::identity();
        }

        double default_tol() const
        {
            switch (kind)
            {
            case Kind::rotation:
                return 1e-5;
            case Kind::mirror:
                return 1e-9;
            default:
                return 1e-4;
            }
        }

        std::string name() const
        {
            switch (kind)
            {
            case Kind::rotation:
                return "sym-J";
            case Kind::mirror:
                return "sym-mirror";
            case Kind::shear:
                return "sym-lfm";
            case Kind::dilation:
                return "sym-dilate";
            }
            return "sym";
        }
    };

    struct SymmetryOptions
    {
        std::size_t n_doppler = 0; // 0: 4N (rotation always uses N)
        double tol = 0.0;          // 0: generator default
        DilationKernel kernel{};
    };

    namespace detail
    {
        // A waveform set and the rule turning it into one (tau, nu) surface.
        // `swapped` asks for the mirror partner: chi(v, u) for a pair, the
        // (fs', fs) slice for a MIMO set.
        struct SurfaceSource
        {
            std::vector<SampledSignal> waveforms;
            std::function<AmbiguitySurface(std::span<const SampledSignal>, std::size_t, std::optional<std::size_t>, bool)>
                build;
            std::string name;
        };

        inline SurfaceSource pair_source(const SampledSignal &u, const SampledSignal &v)
        {
            require_compatible(u, v, "symmetry");
            return {{u, v},
                    [](std::span<const SampledSignal> w, std::size_t L, std::optional<std::size_t> lags, bool swapped)
                    {
                        return swapped ? cross_ambiguity(w[1], w[0], L, lags) : cross_ambiguity(w[0], w[1], L, lags);
                    },
                    ""};
        }

        inline SurfaceSource mimo_source(std::span<const SampledSignal> ws, const SteeringConfig &cfg, double fs,
                                         double fsp)
        {
            require_common_grid(ws, "verify_mimo_symmetry");
            require_spatial(fs, "verify_mimo_symmetry");
            require_spatial(fsp, "verify_mimo_symmetry");
            if (ws.size() != cfg.M())
                throw invalid_parameter("verify_mimo_symmetry: waveform count does not match steering config");
            return {{ws.begin(), ws.end()},
                    [cfg, fs, fsp](std::span<const SampledSignal> w, std::size_t L, std::optional<std::size_t> lags,
                                   bool swapped)
                    {
                        auto R = correlation_matrix(w, L, lags);
                        return swapped ? mimo_ambiguity(R, cfg, fsp, fs) : mimo_ambiguity(R, cfg, fs, fsp);
                    },
                    "-mimo"};
        }

        template <typename F>
        std::vector<SampledSignal> map_all(const std::vector<SampledSignal> &ws, F &&f)
        {
            std::vector<SampledSignal> out;
            out.reserve(ws.size());
            for (const auto &w : ws)
                out.push_back(f(w));
            return out;
        }

        inline CheckReport surface_report(std::string name, const AmbiguitySurface &a, const AmbiguitySurface &b,
                                          double tol, double coverage)
        {
            double d = frobenius_distance(a, b);
            double r = frobenius_norm(b);
            return CheckReport::make(std::move(name), frobenius_norm(a), r, d, r > 0.0 ? d / r : d, tol, coverage);
        }

        inline bool near_integer(double x) { return std::abs(x - std::round(x)) <= 1e-9 * std::max(1.0, std::abs(x)); }

        // Smallest Doppler oversampling q <= 64 for which q * ratio is an
        // integer, or 8 when none exists (the remap then interpolates).
        inline std::size_t oversampling(double ratio)
        {
            for (std::size_t q = 1; q <= 64; ++q)
                if (near_integer(static_cast<double>(q) * ratio))
                    return q;
            return 8;
        }

        inline CheckReport verify_rotation(const SurfaceSource &src, double tol)
        {
            const auto &u = src.waveforms.front();
            const std::size_t n = u.size();
            const double dt = u.dt();
            if (std::abs(static_cast<double>(n) * dt * dt - 1.0) > 1e-9)
                throw grid_mismatch("verify_fourier_rotation: needs N dt^2 = 1 so delay and Doppler steps coincide");
            if (std::abs(u.t0() + static_cast<double>(n / 2) * dt) > 1e-9 * dt)
                throw grid_mismatch("verify_fourier_rotation: needs a centred grid (t0 = -N/2 dt)");
            if (u.periodic())
                throw grid_mismatch("verify_fourier_rotation: inputs must be time-domain signals");

            const std::size_t lags = n / 2;
            auto chi = src.build(src.waveforms, n, lags, false);
            auto path_a = act_on_surface(chi, Sl2Element::rotation());

            auto spectra = map_all(src.waveforms, [](const SampledSignal &w)
                                   { return fourier(w, FourierKernel::inverse); });
            auto path_b = modulated(src.build(spectra, n, lags, false),
                                    [](double tau, double nu)
                                    { return cis2pi(nu * tau); });
            return surface_report("sym-J" + src.name, path_a, path_b, tol, path_a.coverage);
        }

        inline CheckReport verify_mirror(const SurfaceSource &src, std::size_t L, double tol)
        {
            auto chi = src.build(src.waveforms, L, std::nullopt, false);
            auto path_b = src.build(src.waveforms, L, std::nullopt, true);
            for (auto &x : path_b.values())
                x = std::conj(x);
            path_b = modulated(path_b, [](double tau, double nu)
                               { return cis2pi(-nu * tau); });

            auto reversed = act_on_surface(chi, Sl2Element(-1.0, 0.0, 0.0, -1.0));
            AmbiguitySurface twice = square_grid(chi)
                                         ? act_on_surface(act_on_surface(chi, Sl2Element::rotation()), Sl2Element::rotation())
                                         : act_on_surface(chi, Sl2Element::rotation() * Sl2Element::rotation());
            auto r1 = surface_report("sym-mirror" + src.name, reversed, path_b, tol, reversed.coverage);
            auto r2 = surface_report("sym-mirror" + src.name, twice, path_b, tol, twice.coverage);
            return r2.rel_err > r1.rel_err ? r2 : r1;
        }

        inline CheckReport verify_shear(const SurfaceSource &src, double k, std::size_t L, double tol)
        {
            const auto &u = src.waveforms.front();
            const double dt = u.dt();
            auto chirped = map_all(src.waveforms, [k](const SampledSignal &w)
                                   { return chirp_multiply(w, k); });
            auto full_a = src.build(chirped, L, std::nullopt, false);

            // Compare where nu and nu - k tau both stay inside the band.
            const double band = nyquist(dt);
            const double nu_max = k == 0.0 ? band : 0.5 * band;
            const double tau_max = k == 0.0 ? full_a.tau_axis().last() : (band - nu_max) / std::abs(k);
            auto path_a = crop_symmetric(full_a, tau_max, nu_max);
            double fa = frobenius_norm(full_a);
            double capture = fa > 0.0 ? std::pow(frobenius_norm(path_a) / fa, 2) : 1.0;

            std::size_t q = oversampling(k * dt * dt * static_cast<double>(L));
            auto source = src.build(src.waveforms, L * q, std::nullopt, false);
            auto path_b = modulated(act_on_surface(source, Sl2Element::shear(-k), path_a.tau_axis(), path_a.nu_axis()),
                                    [k](double tau, double)
                                    { return cis2pi(-0.5 * k * tau * tau); });
            return surface_report("sym-lfm" + src.name, path_a, path_b, tol, std::min(path_b.coverage, capture));
        }

        inline CheckReport verify_dilation(const SurfaceSource &src, double b, std::size_t L, const DilationKernel &kernel,
                                           double tol)
        {
            if (!(b > 0.0) || !std::isfinite(b))
                throw invalid_parameter("verify_dilation: b must be positive");
            const auto &u = src.waveforms.front();
            const double dt = u.dt();
            auto dilated = map_all(src.waveforms, [b, &kernel](const SampledSignal &w)
                                   { return dilate(w, b, kernel); });
            auto full_a = src.build(dilated, L, std::nullopt, false);

            // b tau must stay within the source lags and nu / b within the band.
            const double band = nyquist(dt);
            const double tau_max = std::floor(static_cast<double>(u.size() - 1) / b + 1e-9) * dt;
            const double nu_max = std::min(band, b * band);
            auto path_a = crop_symmetric(full_a, tau_max, nu_max);
            double fa = frobenius_norm(full_a);
            double capture = fa > 0.0 ? std::pow(frobenius_norm(path_a) / fa, 2) : 1.0;

            std::size_t q = oversampling(1.0 / b);
            auto source = src.build(src.waveforms, L * q, std::nullopt, false);
            auto path_b = scaled(act_on_surface(source, Sl2Element::dilation(b), path_a.tau_axis(), path_a.nu_axis()),
                                 1.0 / b);
            return surface_report("sym-dilate" + src.name, path_a, path_b, tol, std::min(path_b.coverage, capture));
        }

        inline CheckReport run_symmetry(const SurfaceSource &src, const SymmetryGenerator &g, const SymmetryOptions &opt)
        {
            const double tol = opt.tol > 0.0 ? opt.tol : g.default_tol();
            const std::size_t L = opt.n_doppler == 0 ? default_n_doppler(src.waveforms.front().size()) : opt.n_doppler;
            switch (g.kind)
            {
            case SymmetryGenerator::Kind::rotation:
                return verify_rotation(src, tol);
            case SymmetryGenerator::Kind::mirror:
                return verify_mirror(src, L, tol);
            case SymmetryGenerator::Kind::shear:
                return verify_shear(src, g.param, L, tol);
            case SymmetryGenerator::Kind::dilation:
                return verify_dilation(src, g.param, L, opt.kernel, tol);
            }
            throw invalid_parameter("unknown symmetry generator");
        }
    }

    // J on a square grid: needs N dt^2 = 1 and a centred window, so delay and
    // Doppler steps coincide and the rotation is an index permutation. The
    // Doppler FFT length is N and lags run to N/2. Signals should be supported
    // within |t| < N dt / 4 so zero-filled and cyclic lags agree.
    inline CheckReport verify_fourier_rotation(const SampledSignal &u, const SampledSignal &v, SymmetryOptions opt = {})
    {
        return detail::run_symmetry(detail::pair_source(u, v), SymmetryGenerator::rotation(), opt);
    }

    inline CheckReport verify_mirror(const SampledSignal &u, const SampledSignal &v, SymmetryOptions opt = {})
    {
        return detail::run_symmetry(detail::pair_source(u, v), SymmetryGenerator::mirror(), opt);
    }

    // Compared on |nu| <= B/2, |tau| <= B / (2|k|) with B = 1/(2 dt); the
    // report's coverage is the share of path A's energy inside that window.
    inline CheckReport verify_lfm_shear(const SampledSignal &u, const SampledSignal &v, double k, SymmetryOptions opt = {})
    {
        return detail::run_symmetry(detail::pair_source(u, v), SymmetryGenerator::shear(k), opt);
    }

    inline CheckReport verify_dilation(const SampledSignal &u, const SampledSignal &v, double b, SymmetryOptions opt = {})
    {
        return detail::run_symmetry(detail::pair_source(u, v), SymmetryGenerator::dilation(b), opt);
    }

    inline CheckReport verify_symmetry(const SampledSignal &u, const SampledSignal &v, const SymmetryGenerator &g,
                                       SymmetryOptions opt = {})
    {
        return detail::run_symmetry(detail::pair_source(u, v), g, opt);
    }

    // MIMO slice at fixed (fs, fs'); the mirror compares against the
    // (fs', fs) slice.
    inline CheckReport verify_mimo_symmetry(std::span<const SampledSignal> waveforms, const SteeringConfig &cfg, double fs,
                                            double fs_prime, const SymmetryGenerator &g, SymmetryOptions opt = {})
    {
        return detail::run_symmetry(detail::mimo_source(waveforms, cfg, fs, fs_prime), g, opt);
    }
}
