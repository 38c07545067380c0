#pragma once

// Numerical checks of the energy, orthogonality, positivity and uniqueness
// identities satisfied by ambiguity functions.

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ambiguity.hpp"
#include "check_report.hpp"
#include "mimo.hpp"
#include "operators.hpp"

namespace mimoaf
{
    namespace detail
    {
        inline std::size_t doppler_len(const SampledSignal &u, std::size_t n_doppler)
        {
            return n_doppler == 0 ? default_n_doppler(u.size()) : n_doppler;
        }

        inline void require_common_grid(std::span<const SampledSignal> ws, const char *what)
        {
            if (ws.empty())
                throw invalid_parameter(std::string(what) + ": empty waveform list");
            for (const auto &w : ws)
                require_compatible(ws.front(), w, what);
        }
    }

    // int int |chi(u, v)|^2 = ||u||^2 ||v||^2
    inline CheckReport check_norm_identity(const SampledSignal &u, const SampledSignal &v, std::size_t n_doppler = 0,
                                           double tol = 1e-6)
    {
        auto chi = cross_ambiguity(u, v, detail::doppler_len(u, n_doppler));
        return CheckReport::compare("norm", l2_norm_sq(chi), energy(u) * energy(v), tol);
    }

    // Integral of |chi(tau, nu, fs, fs')|^2 over delay, Doppler and both
    // spatial frequencies against (sum_m ||u_m||^2)^2.
    inline CheckReport check_mimo_energy(std::span<const SampledSignal> waveforms, const SteeringConfig &cfg,
                                         std::size_t n_doppler = 0, double tol = 1e-5)
    {
        detail::require_common_grid(waveforms, "check_mimo_energy");
        cfg.require_integer_gamma("check_mimo_energy");
        auto R = correlation_matrix(waveforms, detail::doppler_len(waveforms.front(), n_doppler));
        require_matching(R, cfg, "check_mimo_energy");

        const std::size_t M = cfg.M(), K = cfg.K();
        // a[k][m] = exp(i 2 pi gamma fs_k m)
        std::vector<cdouble> a(K * M);
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t m = 0; m < M; ++m)
                a[k * M + m] = cis2pi(cfg.gamma() * cfg.fs(k) * static_cast<double>(m));

        const auto &ref = R.entry(0, 0);
        std::vector<double> rows(ref.n_tau(), 0.0);
        parallel_for(ref.n_tau(), [&](std::size_t i)
                     {
            std::vector<cdouble> x(M * M), y(K * M);
            double row = 0.0;
            for (std::size_t j = 0; j < ref.n_nu(); ++j)
            {
                bool any = false;
                for (std::size_t m = 0; m < M; ++m)
                    for (std::size_t mp = 0; mp < M; ++mp)
                    {
                        x[m * M + mp] = R.entry(m, mp)(i, j);
                        any = any || x[m * M + mp] != 0.0;
                    }
                if (!any)
                    continue;
                // y[k][m'] = sum_m x[m][m'] a[k][m]
                for (std::size_t k = 0; k < K; ++k)
                    for (std::size_t mp = 0; mp < M; ++mp)
                    {
                        cdouble acc = 0.0;
                        for (std::size_t m = 0; m < M; ++m)
                            acc += x[m * M + mp] * a[k * M + m];
                        y[k * M + mp] = acc;
                    }
                double point = 0.0;
                for (std::size_t k = 0; k < K; ++k)
                    for (std::size_t kp = 0; kp < K; ++kp)
                    {
                        cdouble acc = 0.0;
                        for (std::size_t mp = 0; mp < M; ++mp)
                            acc += y[k * M + mp] * std::conj(a[kp * M + mp]);
                        point += std::norm(acc);
                    }
                row += point * ref.nu_weight(j);
            }
            rows[i] = row * ref.tau_weight(i); });

        double lhs = 0.0;
        for (double r : rows)
            lhs += r;
        lhs /= static_cast<double>(K * K);
        double total = 0.0;
        for (const auto &w : waveforms)
            total += energy(w);
        return CheckReport::compare("mimo-energy", lhs, total * total, tol);
    }

    // <chi(u1, u3), chi(u2, u4)> = <u1, u2> conj(<u3, u4>)
    inline CheckReport moyal_inner_product(const SampledSignal &u1, const SampledSignal &u2, const SampledSignal &u3,
                                           const SampledSignal &u4, std::size_t n_doppler = 0, double tol = 1e-6)
    {
        std::size_t L = detail::doppler_len(u1, n_doppler);
        auto lhs = l2_inner(cross_ambiguity(u1, u3, L), cross_ambiguity(u2, u4, L));
        auto rhs = inner_product(u1, u2) * std::conj(inner_product(u3, u4));
        return CheckReport::compare("moyal", lhs, rhs, tol, norm(u1) * norm(u2) * norm(u3) * norm(u4));
    }

    // Inner product of two MIMO slices at fixed (fs, fs') against the
    // quadruple sum of waveform inner products. Error is scaled by the sum of
    // the moduli of the quadruple-sum terms.
    inline CheckReport mimo_inner_product(std::span<const SampledSignal> us, std::span<const SampledSignal> vs,
                                          const SteeringConfig &cfg, double fs, double fs_prime,
                                          std::size_t n_doppler = 0, double tol = 1e-6)
    {
        detail::require_common_grid(us, "mimo_inner_product");
        detail::require_common_grid(vs, "mimo_inner_product");
        require_compatible(us.front(), vs.front(), "mimo_inner_product");
        if (us.size() != vs.size())
            throw invalid_parameter("mimo_inner_product: waveform sets differ in size");
        std::size_t L = detail::doppler_len(us.front(), n_doppler);
        auto Ru = correlation_matrix(us, L);
        auto Rv = correlation_matrix(vs, L);
        auto lhs = l2_inner(mimo_ambiguity(Ru, cfg, fs, fs_prime), mimo_ambiguity(Rv, cfg, fs, fs_prime));

        const std::size_t M = us.size();
        std::vector<cdouble> g(M * M); // g[m][n] = <u_m, v_n>
        for (std::size_t m = 0; m < M; ++m)
            for (std::size_t n = 0; n < M; ++n)
                g[m * M + n] = inner_product(us[m], vs[n]);
        cdouble rhs = 0.0;
        double scale = 0.0;
        for (std::size_t m = 0; m < M; ++m)
            for (std::size_t mp = 0; mp < M; ++mp)
                for (std::size_t n = 0; n < M; ++n)
                    for (std::size_t np = 0; np < M; ++np)
                    {
                        cdouble term = g[m * M + n] * std::conj(g[mp * M + np]);
                        scale += std::abs(term);
                        rhs += term * cfg.steering(m, mp, fs, fs_prime) * std::conj(cfg.steering(n, np, fs, fs_prime));
                    }
        return CheckReport::compare("mimo-moyal", lhs, rhs, tol, scale);
    }

    struct ProbeSet
    {
        std::vector<HeisenbergPoint> points;
        std::vector<cdouble> coefficients; // optional
    };

    // Random probes on the delay and Doppler nodes of a surface with the given
    // grid and FFT length. Delays stay within N/8 samples and Doppler within
    // L/8 bins so that all pairwise differences x_j^-1 x_i remain on the grid.
    inline ProbeSet random_probes(const Grid &grid, std::size_t n_doppler, std::size_t count, std::uint64_t seed)
    {
        if (count == 0)
            throw invalid_parameter("random_probes: count must be positive");
        std::mt19937_64 rng(seed);
        auto lag_reach = static_cast<long long>(std::max<std::size_t>(grid.n / 8, 1));
        auto bin_reach = static_cast<long long>(std::max<std::size_t>(n_doppler / 8, 1));
        std::uniform_int_distribution<long long> lag(-lag_reach, lag_reach), bin(-bin_reach, bin_reach);
        std::normal_distribution<double> gauss;
        const double dnu = 1.0 / (static_cast<double>(n_doppler) * grid.dt);
        ProbeSet p;
        for (std::size_t i = 0; i < count; ++i)
        {
            p.points.push_back({static_cast<double>(lag(rng)) * grid.dt, static_cast<double>(bin(rng)) * dnu, 0.0});
            p.coefficients.emplace_back(gauss(rng), gauss(rng));
        }
        return p;
    }

    struct PsdCheck
    {
        CheckReport positivity; // min eigenvalue of the Hermitianized Gram
        CheckReport agreement;  // exact Gram vs surface lookup
        bool passed() const { return positivity.passed && agreement.passed; }
    };

    namespace detail
    {
        using GramMatrix = Eigen::MatrixXcd;

        // G_ij = <T(x_j) u, T(x_i) u>
        inline GramMatrix exact_gram(const SampledSignal &u, const ProbeSet &probes)
        {
            const std::size_t n = probes.points.size();
            std::vector<SampledSignal> shifted;
            shifted.reserve(n);
            for (const auto &p : probes.points)
                shifted.push_back(heisenberg_shift(u, p));
            GramMatrix G(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    G(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = inner_product(shifted[j], shifted[i]);
            return G;
        }

        // G_ij = exp(-i 2 pi y3) s(y1, -y2), y = x_j^-1 x_i. With s = chi(u, u)
        // this is <T(x_j) u, T(x_i) u> = <u, T(y) u>.
        inline GramMatrix surface_gram(const AmbiguitySurface &s, const ProbeSet &probes)
        {
            const std::size_t n = probes.points.size();
            GramMatrix G(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                {
                    auto y = probes.points[j].inverse() * probes.points[i];
                    auto v = s.at(y.tau, -y.nu);
                    if (!v)
                        throw grid_alignment_error("gram: probe difference is not a node of the surface grid");
                    G(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cis2pi(-y.x3) * *v;
                }
            return G;
        }

        inline void check_probes(const ProbeSet &probes, double dt)
        {
            if (probes.points.empty())
                throw invalid_parameter("gram: probe set is empty");
            if (!probes.coefficients.empty() && probes.coefficients.size() != probes.points.size())
                throw invalid_parameter("gram: coefficient count does not match probe count");
            for (const auto &p : probes.points)
                lag_index(p.tau, dt, "gram");
        }

        inline PsdCheck psd_reports(const GramMatrix &exact, const GramMatrix &lookup, const ProbeSet &probes,
                                    double tol_eig, double tol_agree, const std::string &name)
        {
            GramMatrix H = 0.5 * (exact + exact.adjoint());
            Eigen::SelfAdjointEigenSolver<GramMatrix> solver(H, Eigen::EigenvaluesOnly);
            const auto &ev = solver.eigenvalues();
            double lo = ev.minCoeff(), hi = ev.maxCoeff();
            double deficit = std::max(0.0, -lo);

            // The quadratic form for the supplied coefficients, when given.
            if (!probes.coefficients.empty())
            {
                Eigen::VectorXcd c(static_cast<Eigen::Index>(probes.coefficients.size()));
                for (std::size_t i = 0; i < probes.coefficients.size(); ++i)
                    c(static_cast<Eigen::Index>(i)) = probes.coefficients[i];
                double q = (c.adjoint() * exact.transpose() * c)(0).real();
                deficit = std::max(deficit, -q / std::max(c.squaredNorm(), 1e-300));
            }
            double rel = hi > 0.0 ? deficit / hi : (deficit == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
            PsdCheck out;
            out.positivity = CheckReport::make(name + "-positivity", lo, hi, deficit, rel, tol_eig);

            double diff = (exact - lookup).cwiseAbs().maxCoeff();
            double size = exact.cwiseAbs().maxCoeff();
            out.agreement = CheckReport::make(name + "-agreement", exact(0, 0), lookup(0, 0), diff,
                                              size > 0.0 ? diff / size : diff, tol_agree);
            return out;
        }
    }

    // Positive definiteness of chi(u, u) on the Heisenberg group: the Gram
    // matrix of shifted copies, built directly and from the surface.
    inline PsdCheck gram_psd_check(const SampledSignal &u, const ProbeSet &probes, std::size_t n_doppler = 0,
                                   double tol_eig = 1e-9, double tol_agree = 1e-8)
    {
        detail::check_probes(probes, u.dt());
        auto chi = self_ambiguity(u, detail::doppler_len(u, n_doppler));
        return detail::psd_reports(detail::exact_gram(u, probes), detail::surface_gram(chi, probes), probes, tol_eig,
                                   tol_agree, "psd");
    }

    // Same check for the spatial integral (trace of R) of a waveform set: the
    // sum of per-waveform exact Grams against the trace-surface Gram.
    inline PsdCheck trace_psd_check(std::span<const SampledSignal> waveforms, const ProbeSet &probes,
                                    const SteeringConfig &cfg, std::size_t n_doppler = 0, double tol_eig = 1e-9,
                                    double tol_agree = 1e-8)
    {
        detail::require_common_grid(waveforms, "trace_psd_check");
        detail::check_probes(probes, waveforms.front().dt());
        auto R = correlation_matrix(waveforms, detail::doppler_len(waveforms.front(), n_doppler));
        auto trace = spatial_integral(R, cfg);
        detail::GramMatrix exact = detail::exact_gram(waveforms.front(), probes);
        for (std::size_t m = 1; m < waveforms.size(); ++m)
            exact += detail::exact_gram(waveforms[m], probes);
        return detail::psd_reports(exact, detail::surface_gram(trace, probes), probes, tol_eig, tol_agree,
                                   "trace-psd");
    }

    struct ScalarRecovery
    {
        cdouble lambda = 0.0;
        double af_distance = 0.0;
        bool af_equal = false;
        double residual = 0.0; // ||u - lambda v||
        CheckReport report;
    };

    // lambda = <u, v> / ||v||^2. When chi(u, u) and chi(v, v) coincide (within
    // gate * max(1, ||chi(u, u)||)) lambda must be unimodular and u = lambda v.
    // Otherwise the implication is vacuous and the report records the
    // inequality instead.
    inline ScalarRecovery recover_scalar(const SampledSignal &u, const SampledSignal &v, std::size_t n_doppler = 0,
                                         double tol = 1e-6, double gate = 1e-8)
    {
        require_compatible(u, v, "recover_scalar");
        double ev = energy(v);
        if (ev == 0.0)
            throw invalid_parameter("recover_scalar: v has zero energy");
        ScalarRecovery r;
        r.lambda = inner_product(u, v) / ev;
        r.residual = distance(u, v.scaled(r.lambda));

        std::size_t L = detail::doppler_len(u, n_doppler);
        auto cu = self_ambiguity(u, L);
        auto cv = self_ambiguity(v, L);
        r.af_distance = std::sqrt(l2_norm_sq(add_scaled(cu, -1.0, cv)));
        double threshold = gate * std::max(1.0, std::sqrt(l2_norm_sq(cu)));
        r.af_equal = r.af_distance <= threshold;

        if (r.af_equal)
        {
            double nu = norm(u);
            double modulus_err = std::abs(std::abs(r.lambda) - 1.0);
            double resid_rel = nu > 0.0 ? r.residual / nu : r.residual;
            r.report = CheckReport::make("uniqueness", std::abs(r.lambda), 1.0, modulus_err,
                                         std::max(modulus_err, resid_rel), tol);
        }
        else
        {
            r.report = CheckReport::make("uniqueness[af-differ]", r.af_distance, threshold, 0.0, 0.0, tol);
            r.report.detail = "AF distance above gate; no unimodular scalar asserted";
        }
        return r;
    }

    struct Collinearity
    {
        cdouble alpha = 0.0; // u2 = alpha u3 when collinear
        bool collinear = false;
        CheckReport report;
    };

    // Cauchy-Schwarz equality |<u2, u3>| = ||u2|| ||u3||.
    inline Collinearity collinearity_check(const SampledSignal &u2, const SampledSignal &u3, double tol = 1e-9)
    {
        require_compatible(u2, u3, "collinearity_check");
        double n2 = norm(u2), n3 = norm(u3);
        if (n2 == 0.0 || n3 == 0.0)
            throw invalid_parameter("collinearity_check: zero input");
        cdouble ip = inner_product(u2, u3);
        Collinearity c;
        c.alpha = ip / (n3 * n3);
        double lhs = std::abs(ip), rhs = n2 * n3;
        double gap = std::max(0.0, 1.0 - lhs / rhs);
        c.report = CheckReport::make("collinearity", lhs, rhs, rhs - lhs, gap, tol);
        c.collinear = c.report.passed;
        return c;
    }

    // chi(u2, u2) + chi(u3, u3) = (||u2||^2 + ||u3||^2) chi(w, w), w = u2 / ||u2||,
    // for collinear inputs.
    inline CheckReport summed_af_check(const SampledSignal &u2, const SampledSignal &u3, std::size_t n_doppler = 0,
                                       double tol = 1e-8)
    {
        auto c = collinearity_check(u2, u3);
        if (!c.collinear)
            throw precondition_error("summed_af_check: inputs are not collinear");
        std::size_t L = detail::doppler_len(u2, n_doppler);
        auto sum = add_scaled(self_ambiguity(u2, L), 1.0, self_ambiguity(u3, L));
        double e = energy(u2) + energy(u3);
        auto pred = scaled(self_ambiguity(u2.scaled(1.0 / norm(u2)), L), e);
        double d = frobenius_distance(sum, pred);
        double r = frobenius_norm(pred);
        return CheckReport::make("summed-af", sum(sum.n_tau() / 2, sum.n_nu() / 2), pred(pred.n_tau() / 2, pred.n_nu() / 2),
                                 d, r > 0.0 ? d / r : d, tol);
    }

    struct PairDiagnostic
    {
        std::size_t i = 0, j = 0;
        cdouble lambda = 0.0;
        double af_distance = 0.0;
        bool unimodular = false; // recover_scalar passed with equal AFs
        bool collinear = false;
    };

    struct TraceReduction
    {
        bool reduced = false;
        std::vector<PairDiagnostic> pairs;
        CheckReport report;
    };

    // If every pair is related by a unimodular scalar, the trace of R equals
    // M chi(u_0, u_0). Otherwise the reduction is refused, which is consistent
    // only if some pair is not collinear.
    inline TraceReduction trace_reduction_check(std::span<const SampledSignal> waveforms, const SteeringConfig &cfg,
                                                std::size_t n_doppler = 0, double tol = 1e-8)
    {
        detail::require_common_grid(waveforms, "trace_reduction_check");
        cfg.require_integer_gamma("trace_reduction_check");
        std::size_t L = detail::doppler_len(waveforms.front(), n_doppler);
        TraceReduction out;
        bool all_unimodular = true, any_not_collinear = false;
        for (std::size_t i = 0; i < waveforms.size(); ++i)
            for (std::size_t j = i + 1; j < waveforms.size(); ++j)
            {
                auto rs = recover_scalar(waveforms[i], waveforms[j], L);
                PairDiagnostic d{i, j, rs.lambda, rs.af_distance, rs.af_equal && rs.report.passed,
                                 collinearity_check(waveforms[i], waveforms[j]).collinear};
                all_unimodular = all_unimodular && d.unimodular;
                any_not_collinear = any_not_collinear || !d.collinear;
                out.pairs.push_back(d);
            }

        if (all_unimodular)
        {
            auto R = correlation_matrix(waveforms, L);
            auto trace = spatial_integral(R, cfg);
            auto pred = scaled(R.entry(0, 0), static_cast<double>(waveforms.size()));
            double d = frobenius_distance(trace, pred), r = frobenius_norm(pred);
            std::size_t ci = trace.n_tau() / 2, cj = trace.n_nu() / 2;
            out.reduced = true;
            out.report = CheckReport::make("trace-reduction[reduced]", trace(ci, cj), pred(ci, cj), d,
                                           r > 0.0 ? d / r : d, tol);
            return out;
        }

        std::string failing;
        std::size_t bad = 0;
        for (const auto &d : out.pairs)
            if (!d.collinear)
            {
                ++bad;
                failing += (failing.empty() ? "" : ",") + std::to_string(d.i) + "-" + std::to_string(d.j);
            }
        double share = static_cast<double>(bad) / static_cast<double>(out.pairs.size());
        // lhs: number of non-collinear pairs; passes when at least one exists.
        out.report = CheckReport::make("trace-reduction[refused]", static_cast<double>(bad),
                                       static_cast<double>(out.pairs.size()), any_not_collinear ? 0.0 : 1.0,
                                       any_not_collinear ? 0.0 : 1.0, 0.0);
        out.report.detail = "non-collinear pairs: " + (failing.empty() ? std::string("none") : failing) +
                            " (" + std::to_string(share) + " of pairs)";
        return out;
    }
}
