// Exact rational oracle shared by the unit and acceptance tests.
#ifndef HEXCAP_TESTS_ORACLE_HPP
#define HEXCAP_TESTS_ORACLE_HPP

#include <cmath>
#include <complex>

#include <boost/multiprecision/cpp_int.hpp>
#include <Eigen/Core>

#include "hexcap/interval.hpp"

namespace oracle {

using Q = boost::multiprecision::cpp_rational;
using Z = boost::multiprecision::cpp_int;

// Every finite double is m 2^e with |m| < 2^53.
inline Q exact(double x)
{
    if (x == 0) return Q(0);
    int e = 0;
    double f = std::frexp(x, &e);
    Z m = static_cast<long long>(std::ldexp(f, 53));
    e -= 53;
    if (e >= 0) return Q(m << e);
    return Q(m, Z(1) << -e);
}

inline bool encloses(const hexcap::Interval& a, const Q& x) { return exact(a.lo) <= x && x <= exact(a.hi); }

// Exact complex rationals, enough for convolution and matrix products.
struct QC {
    Q re, im;
    QC() = default;
    QC(double x) : re(exact(x)), im(0) {}
    QC(Q r, Q i) : re(std::move(r)), im(std::move(i)) {}
    static QC from(const std::complex<double>& z) { return {exact(z.real()), exact(z.imag())}; }

    QC& operator+=(const QC& b)
    {
        re += b.re;
        im += b.im;
        return *this;
    }
};

inline QC operator+(const QC& a, const QC& b) { return {a.re + b.re, a.im + b.im}; }
inline QC operator-(const QC& a, const QC& b) { return {a.re - b.re, a.im - b.im}; }
inline QC operator*(const QC& a, const QC& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
inline bool operator==(const QC& a, const QC& b) { return a.re == b.re && a.im == b.im; }

inline double to_double(const Q& q) { return static_cast<double>(q); }

} // namespace oracle

namespace Eigen {
template <>
struct NumTraits<oracle::QC> : GenericNumTraits<oracle::QC> {
    using Real = oracle::QC;
    using NonInteger = oracle::QC;
    using Literal = oracle::QC;
    using Nested = oracle::QC;
    enum { IsComplex = 0, IsInteger = 0, IsSigned = 1, RequireInitialization = 1, ReadCost = 20, AddCost = 40, MulCost = 80 };
};
} // namespace Eigen

#endif
