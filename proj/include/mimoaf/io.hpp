#pragma once

// File formats:
//   SIG1  text signal: "SIG1", n=, dt=, t0=, optional periodic=1, then n "re,im" lines
//   SIGB  binary signal: "SIGB", u32 n, f64 dt, f64 t0, n (re, im) f64 pairs
//   SUR1  binary surface: "SUR1", u32 n_tau, u32 n_nu, f64 tau0, dtau, nu0, dnu,
//         then n_tau * n_nu (re, im) f64 pairs, row-major in lag
//   CSV   surface: header "tau,nu,re,im", one row per node
//   PPM   P5 8-bit grayscale heat map of |values|, one row per Doppler bin
// All binary fields little-endian; numbers in text formats use 17 significant digits.

#include <algorithm>
#include <array>
#include <cctype>
#include <iterator>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "check_report.hpp"
#include "signal.hpp"
#include "surface.hpp"

namespace mimoaf::io
{
    static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

    namespace detail
    {
        inline std::string fmt(double x) { return format_number(x); }

        inline double parse_double(const std::string &s, const std::string &what)
        {
            const char *b = s.c_str();
            char *e = nullptr;
            double v = std::strtod(b, &e);
            if (e == b || *e != '\0')
                throw format_error("cannot parse " + what + ": '" + s + "'");
            return v;
        }

        inline std::string trim(std::string s)
        {
            auto ws = [](unsigned char c)
            { return std::isspace(c) != 0; };
            s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
            s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
            return s;
        }

        template <typename T>
        void put(std::ostream &os, T v)
        {
            os.write(reinterpret_cast<const char *>(&v), sizeof v);
        }

        template <typename T>
        T get(std::istream &is, const char *what)
        {
            T v;
            if (!is.read(reinterpret_cast<char *>(&v), sizeof v))
                throw format_error(std::string("truncated file reading ") + what);
            return v;
        }

        inline std::ofstream open_out(const std::string &path, bool binary)
        {
            std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
            if (!os)
                throw format_error("cannot open '" + path + "' for writing");
            return os;
        }

        inline std::ifstream open_in(const std::string &path, bool binary)
        {
            std::ifstream is(path, binary ? std::ios::binary : std::ios::in);
            if (!is)
                throw format_error("cannot open '" + path + "'");
            return is;
        }

        inline std::uint32_t checked_u32(std::size_t n, const char *what)
        {
            if (n > 0xffffffffu)
                throw format_error(std::string(what) + ": size exceeds u32");
            return static_cast<std::uint32_t>(n);
        }
    }

    inline void write_sig1(std::ostream &os, const SampledSignal &s)
    {
        os << "SIG1\n"
           << "n=" << s.size() << "\n"
           << "dt=" << detail::fmt(s.dt()) << "\n"
           << "t0=" << detail::fmt(s.t0()) << "\n";
        if (s.periodic())
            os << "periodic=1\n";
        for (const auto &x : s.samples())
            os << detail::fmt(x.real()) << "," << detail::fmt(x.imag()) << "\n";
    }

    inline SampledSignal read_sig1(std::istream &is)
    {
        std::string line;
        if (!std::getline(is, line) || detail::trim(line) != "SIG1")
            throw format_error("SIG1: missing magic line");
        std::size_t n = 0;
        double dt = 0.0, t0 = 0.0;
        bool have_n = false, have_dt = false, have_t0 = false, periodic = false;
        std::vector<cdouble> samples;
        while (std::getline(is, line))
        {
            line = detail::trim(line);
            if (line.empty())
                continue;
            auto eq = line.find('=');
            if (eq != std::string::npos)
            {
                std::string key = line.substr(0, eq), val = line.substr(eq + 1);
                if (key == "n")
                {
                    double v = detail::parse_double(val, "n");
                    if (v < 1 || v != std::floor(v))
                        throw format_error("SIG1: n must be a positive integer");
                    n = static_cast<std::size_t>(v);
                    have_n = true;
                }
                else if (key == "dt")
                    dt = detail::parse_double(val, "dt"), have_dt = true;
                else if (key == "t0")
                    t0 = detail::parse_double(val, "t0"), have_t0 = true;
                else if (key == "periodic")
                    periodic = detail::parse_double(val, "periodic") != 0.0;
                else
                    throw format_error("SIG1: unknown header key '" + key + "'");
                continue;
            }
            auto comma = line.find(',');
            if (comma == std::string::npos)
                throw format_error("SIG1: sample line without comma: '" + line + "'");
            samples.emplace_back(detail::parse_double(detail::trim(line.substr(0, comma)), "sample"),
                                 detail::parse_double(detail::trim(line.substr(comma + 1)), "sample"));
        }
        if (!have_n || !have_dt || !have_t0)
            throw format_error("SIG1: header needs n, dt and t0");
        if (samples.size() != n)
            throw format_error("SIG1: expected " + std::to_string(n) + " samples, found " + std::to_string(samples.size()));
        return SampledSignal(std::move(samples), dt, t0, periodic);
    }

    inline void write_sigb(std::ostream &os, const SampledSignal &s)
    {
        os.write("SIGB", 4);
        detail::put(os, detail::checked_u32(s.size(), "SIGB"));
        detail::put(os, s.dt());
        detail::put(os, s.t0());
        for (const auto &x : s.samples())
        {
            detail::put(os, x.real());
            detail::put(os, x.imag());
        }
    }

    inline SampledSignal read_sigb(std::istream &is)
    {
        char magic[4];
        if (!is.read(magic, 4) || std::memcmp(magic, "SIGB", 4) != 0)
            throw format_error("SIGB: bad magic");
        auto n = detail::get<std::uint32_t>(is, "SIGB header");
        auto dt = detail::get<double>(is, "SIGB header");
        auto t0 = detail::get<double>(is, "SIGB header");
        std::vector<cdouble> samples(n);
        for (auto &x : samples)
        {
            double re = detail::get<double>(is, "SIGB samples");
            double im = detail::get<double>(is, "SIGB samples");
            x = {re, im};
        }
        return SampledSignal(std::move(samples), dt, t0);
    }

    // Picks the format from the file's magic bytes.
    inline SampledSignal load_signal(const std::string &path)
    {
        auto is = detail::open_in(path, true);
        char magic[4] = {};
        is.read(magic, 4);
        is.clear();
        is.seekg(0);
        if (std::memcmp(magic, "SIGB", 4) == 0)
            return read_sigb(is);
        std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
        std::istringstream ts(text);
        auto s = read_sig1(ts);
        s.label = path;
        return s;
    }

    inline void save_signal(const std::string &path, const SampledSignal &s, bool binary = false)
    {
        auto os = detail::open_out(path, binary);
        if (binary)
            write_sigb(os, s);
        else
            write_sig1(os, s);
        if (!os)
            throw format_error("write failed: '" + path + "'");
    }

    inline void write_sur1(std::ostream &os, const AmbiguitySurface &s)
    {
        os.write("SUR1", 4);
        detail::put(os, detail::checked_u32(s.n_tau(), "SUR1"));
        detail::put(os, detail::checked_u32(s.n_nu(), "SUR1"));
        detail::put(os, s.tau_axis().origin);
        detail::put(os, s.tau_axis().step);
        detail::put(os, s.nu_axis().origin);
        detail::put(os, s.nu_axis().step);
        for (const auto &x : s.values())
        {
            detail::put(os, x.real());
            detail::put(os, x.imag());
        }
    }

    inline AmbiguitySurface read_sur1(std::istream &is)
    {
        char magic[4];
        if (!is.read(magic, 4) || std::memcmp(magic, "SUR1", 4) != 0)
            throw format_error("SUR1: bad magic");
        auto nt = detail::get<std::uint32_t>(is, "SUR1 header");
        auto nn = detail::get<std::uint32_t>(is, "SUR1 header");
        Axis tau, nu;
        tau.origin = detail::get<double>(is, "SUR1 header");
        tau.step = detail::get<double>(is, "SUR1 header");
        nu.origin = detail::get<double>(is, "SUR1 header");
        nu.step = detail::get<double>(is, "SUR1 header");
        tau.size = nt;
        nu.size = nn;
        AmbiguitySurface s(tau, nu);
        for (auto &x : s.values())
        {
            double re = detail::get<double>(is, "SUR1 values");
            double im = detail::get<double>(is, "SUR1 values");
            x = {re, im};
        }
        return s;
    }

    inline void save_sur1(const std::string &path, const AmbiguitySurface &s)
    {
        auto os = detail::open_out(path, true);
        write_sur1(os, s);
        if (!os)
            throw format_error("write failed: '" + path + "'");
    }

    inline AmbiguitySurface load_sur1(const std::string &path)
    {
        auto is = detail::open_in(path, true);
        return read_sur1(is);
    }

    inline void write_csv(std::ostream &os, const AmbiguitySurface &s)
    {
        os << "tau,nu,re,im\n";
        for (std::size_t i = 0; i < s.n_tau(); ++i)
            for (std::size_t j = 0; j < s.n_nu(); ++j)
                os << detail::fmt(s.tau_axis().at(i)) << "," << detail::fmt(s.nu_axis().at(j)) << ","
                   << detail::fmt(s(i, j).real()) << "," << detail::fmt(s(i, j).imag()) << "\n";
    }

    // Reads a CSV written by write_csv; the axes are recovered from the first
    // and last coordinates.
    inline AmbiguitySurface read_csv(std::istream &is)
    {
        std::string line;
        if (!std::getline(is, line) || detail::trim(line) != "tau,nu,re,im")
            throw format_error("CSV: missing header");
        std::vector<double> taus, nus;
        std::vector<cdouble> vals;
        while (std::getline(is, line))
        {
            line = detail::trim(line);
            if (line.empty())
                continue;
            std::array<double, 4> f{};
            std::size_t start = 0;
            for (int k = 0; k < 4; ++k)
            {
                auto end = k < 3 ? line.find(',', start) : line.size();
                if (end == std::string::npos)
                    throw format_error("CSV: short row '" + line + "'");
                f[k] = detail::parse_double(line.substr(start, end - start), "CSV field");
                start = end + 1;
            }
            taus.push_back(f[0]);
            nus.push_back(f[1]);
            vals.emplace_back(f[2], f[3]);
        }
        if (vals.empty())
            throw format_error("CSV: no rows");
        std::size_t nn = 1;
        while (nn < taus.size() && taus[nn] == taus[0])
            ++nn;
        if (vals.size() % nn != 0)
            throw format_error("CSV: ragged grid");
        std::size_t nt = vals.size() / nn;
        Axis tau{taus.front(), nt > 1 ? (taus.back() - taus.front()) / static_cast<double>(nt - 1) : 1.0, nt};
        Axis nu{nus.front(), nn > 1 ? (nus[nn - 1] - nus.front()) / static_cast<double>(nn - 1) : 1.0, nn};
        AmbiguitySurface s(tau, nu);
        s.values() = std::move(vals);
        return s;
    }

    enum class Scale
    {
        linear,
        db
    };

    // Rows are Doppler bins (highest on top), columns are lags.
    inline void write_ppm(std::ostream &os, const AmbiguitySurface &s, Scale scale = Scale::db, double db_floor = -60.0)
    {
        if (scale == Scale::db && !(db_floor < 0.0))
            throw invalid_parameter("write_ppm: db_floor must be negative");
        double peak = 0.0;
        for (const auto &x : s.values())
            peak = std::max(peak, std::abs(x));
        os << "P5\n"
           << s.n_tau() << " " << s.n_nu() << "\n255\n";
        std::vector<unsigned char> row(s.n_tau());
        for (std::size_t jj = 0; jj < s.n_nu(); ++jj)
        {
            std::size_t j = s.n_nu() - 1 - jj;
            for (std::size_t i = 0; i < s.n_tau(); ++i)
            {
                double r = peak > 0.0 ? std::abs(s(i, j)) / peak : 0.0;
                double level;
                if (scale == Scale::linear)
                    level = r;
                else
                {
                    double db = r > 0.0 ? 20.0 * std::log10(r) : db_floor;
                    level = (std::max(db, db_floor) - db_floor) / -db_floor;
                }
                row[i] = static_cast<unsigned char>(std::lround(std::clamp(level, 0.0, 1.0) * 255.0));
            }
            os.write(reinterpret_cast<const char *>(row.data()), static_cast<std::streamsize>(row.size()));
        }
    }

    inline void write_report(std::ostream &os, const std::vector<CheckReport> &reports)
    {
        for (const auto &r : reports)
            os << to_line(r) << "\n";
    }
}
