#pragma once

#include <array>
#include <cmath>
#include <utility>

#include "errors.hpp"

namespace mimoaf
{
    // Real 2x2 matrix [[a, b], [c, d]] with unit determinant, acting on
    // column vectors (tau, nu).
    class Sl2Element
    {
    public:
        Sl2Element(double a, double b, double c, double d)
            : m_{a, b, c, d}
        {
            if (std::abs(det() - 1.0) > 1e-12)
                throw invalid_parameter("Sl2Element: determinant must be 1");
        }

        static Sl2Element identity() { return {1.0, 0.0, 0.0, 1.0}; }

        // J = [[0, 1], [-1, 0]]
        static Sl2Element rotation() { return {0.0, 1.0, -1.0, 0.0}; }

        // t(a) = [[1, 0], [a, 1]]
        static Sl2Element shear(double a) { return {1.0, 0.0, a, 1.0}; }

        // m(b) = [[b, 0], [0, 1/b]], b > 0
        static Sl2Element dilation(double b)
        {
            if (!(b > 0.0))
                throw invalid_parameter("Sl2Element::dilation: b must be positive");
            return {b, 0.0, 0.0, 1.0 / b};
        }

        double a() const { return m_[0]; }
        double b() const { return m_[1]; }
        double c() const { return m_[2]; }
        double d() const { return m_[3]; }
        double det() const { return m_[0] * m_[3] - m_[1] * m_[2]; }

        Sl2Element operator*(const Sl2Element &o) const
        {
            return Sl2Element(a() * o.a() + b() * o.c(), a() * o.b() + b() * o.d(),
                              c() * o.a() + d() * o.c(), c() * o.b() + d() * o.d(), unchecked{});
        }

        Sl2Element inverse() const { return Sl2Element(d(), -b(), -c(), a(), unchecked{}); }

        std::pair<double, double> apply(double tau, double nu) const
        {
            return {a() * tau + b() * nu, c() * tau + d() * nu};
        }

        bool approx(const Sl2Element &o, double tol = 1e-12) const
        {
            for (int i = 0; i < 4; ++i)
                if (std::abs(m_[i] - o.m_[i]) > tol)
                    return false;
            return true;
        }

    private:
        struct unchecked
        {
        };
        // Products and inverses of unit-determinant matrices: skip the check
        // so rounding in long products does not throw.
        Sl2Element(double a, double b, double c, double d, unchecked) : m_{a, b, c, d} {}

        std::array<double, 4> m_;
    };
}
