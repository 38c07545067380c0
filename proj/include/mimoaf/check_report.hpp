#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <string>

#include "signal.hpp"

namespace mimoaf
{
    // Outcome of one numerical identity check.
    //
    // passed <=> rel_err <= tol, or abs_err <= tol when rhs is (numerically)
    // zero. Surface comparisons additionally fail when coverage < 0.9.
    struct CheckReport
    {
        std::string name;
        cdouble lhs = 0.0;
        cdouble rhs = 0.0;
        double abs_err = 0.0;
        double rel_err = 0.0;
        double tol = 0.0;
        bool passed = false;
        double coverage = 1.0;
        std::string detail;

        static constexpr double rhs_zero = 1e-12;
        static constexpr double min_coverage = 0.9;

        static bool rule(double abs_err, double rel_err, cdouble rhs, double tol)
        {
            return rel_err <= tol || (std::abs(rhs) <= rhs_zero && abs_err <= tol);
        }

        static CheckReport make(std::string name, cdouble lhs, cdouble rhs, double abs_err, double rel_err,
                                double tol, double coverage = 1.0)
        {
            CheckReport r;
            r.name = std::move(name);
            r.lhs = lhs;
            r.rhs = rhs;
            r.abs_err = abs_err;
            r.rel_err = rel_err;
            r.tol = tol;
            r.coverage = coverage;
            r.passed = rule(abs_err, rel_err, rhs, tol) && coverage >= min_coverage;
            return r;
        }

        // abs_err = |lhs - rhs|, rel_err = abs_err / scale (scale defaults to |rhs|).
        static CheckReport compare(std::string name, cdouble lhs, cdouble rhs, double tol, double scale = -1.0)
        {
            double abs_err = std::abs(lhs - rhs);
            if (scale < 0.0)
                scale = std::abs(rhs);
            double rel = scale > 0.0 ? abs_err / scale
                                     : (abs_err == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
            return make(std::move(name), lhs, rhs, abs_err, rel, tol);
        }
    };

    inline std::string format_number(double x)
    {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return buf;
    }

    inline std::string format_number(cdouble z)
    {
        if (z.imag() == 0.0)
            return format_number(z.real());
        char buf[80];
        std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
        return buf;
    }

    // `name status lhs rhs abs_err rel_err tol`
    inline std::string to_line(const CheckReport &r)
    {
        return r.name + (r.passed ? " pass " : " fail ") + format_number(r.lhs) + " " + format_number(r.rhs) + " " +
               format_number(r.abs_err) + " " + format_number(r.rel_err) + " " + format_number(r.tol);
    }
}
