#ifndef HEXCAP_INTERVAL_HPP
#define HEXCAP_INTERVAL_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace hexcap {

class IntervalError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
// below this magnitude the fma residual may itself be rounded
inline constexpr double kTiny = 0x1p-960;

inline double down(double x) { return std::nextafter(x, -kInf); }
inline double up(double x) { return std::nextafter(x, kInf); }

// Directed results from error-free transformations. Assumes the default
// round-to-nearest mode, which nothing in this library changes.
inline double add_down(double a, double b)
{
    double s = a + b;
    if (!std::isfinite(s)) return std::isnan(s) ? -kInf : (s > 0 ? std::numeric_limits<double>::max() : s);
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return err < 0 ? down(s) : s;
}

inline double add_up(double a, double b)
{
    double s = a + b;
    if (!std::isfinite(s)) return std::isnan(s) ? kInf : (s < 0 ? -std::numeric_limits<double>::max() : s);
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return err > 0 ? up(s) : s;
}

inline double mul_down(double a, double b)
{
    if (a == 0 || b == 0) return 0.0;
    double p = a * b;
    if (!std::isfinite(p)) return std::isnan(p) ? -kInf : (p > 0 ? std::numeric_limits<double>::max() : p);
    if (std::fabs(p) < kTiny) return down(p);
    double e = std::fma(a, b, -p);
    return e < 0 ? down(p) : p;
}

inline double mul_up(double a, double b)
{
    if (a == 0 || b == 0) return 0.0;
    double p = a * b;
    if (!std::isfinite(p)) return std::isnan(p) ? kInf : (p < 0 ? -std::numeric_limits<double>::max() : p);
    if (std::fabs(p) < kTiny) return up(p);
    double e = std::fma(a, b, -p);
    return e > 0 ? up(p) : p;
}

// sign of a/b - q is sign(r)*sign(b) with r = a - q*b exact
inline double div_down(double a, double b)
{
    if (a == 0) return 0.0;
    double q = a / b;
    if (!std::isfinite(q)) return std::isnan(q) ? -kInf : (q > 0 ? std::numeric_limits<double>::max() : q);
    if (std::fabs(q) < kTiny) return down(q);
    double r = std::fma(-q, b, a);
    bool below = (r < 0 && b > 0) || (r > 0 && b < 0);
    return below ? down(q) : q;
}

inline double div_up(double a, double b)
{
    if (a == 0) return 0.0;
    double q = a / b;
    if (!std::isfinite(q)) return std::isnan(q) ? kInf : (q < 0 ? -std::numeric_limits<double>::max() : q);
    if (std::fabs(q) < kTiny) return up(q);
    double r = std::fma(-q, b, a);
    bool above = (r > 0 && b > 0) || (r < 0 && b < 0);
    return above ? up(q) : q;
}

inline double sqrt_down(double x)
{
    double s = std::sqrt(x);
    if (s == 0 || !std::isfinite(s)) return s;
    double r = std::fma(-s, s, x);
    return r < 0 ? down(s) : s;
}

inline double sqrt_up(double x)
{
    double s = std::sqrt(x);
    if (s == 0 || !std::isfinite(s)) return s;
    double r = std::fma(-s, s, x);
    return r > 0 ? up(s) : s;
}

} // namespace detail

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    Interval(double x) : lo(x), hi(x) {}  // NOLINT: point intervals convert implicitly
    Interval(double l, double h) : lo(l), hi(h)
    {
        if (std::isnan(l) || std::isnan(h) || l > h)
            throw IntervalError("invalid interval endpoints");
    }

    double mid() const { return lo == hi ? lo : 0.5 * lo + 0.5 * hi; }
    double rad() const { return detail::add_up(hi, -lo) * 0.5; }
    double width() const { return detail::add_up(hi, -lo); }
    double mag() const { return std::max(std::fabs(lo), std::fabs(hi)); }
    double mig() const { return (lo <= 0 && hi >= 0) ? 0.0 : std::min(std::fabs(lo), std::fabs(hi)); }
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
    bool contains_zero() const { return lo <= 0 && hi >= 0; }
    bool is_finite() const { return std::isfinite(lo) && std::isfinite(hi); }

    Interval& operator+=(const Interval& b);
    Interval& operator-=(const Interval& b);
    Interval& operator*=(const Interval& b);
    Interval& operator/=(const Interval& b);
};

inline Interval operator+(const Interval& a, const Interval& b)
{
    return {detail::add_down(a.lo, b.lo), detail::add_up(a.hi, b.hi)};
}

inline Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

inline Interval operator-(const Interval& a, const Interval& b)
{
    return {detail::add_down(a.lo, -b.hi), detail::add_up(a.hi, -b.lo)};
}

inline Interval operator*(const Interval& a, const Interval& b)
{
    using namespace detail;
    if (a.lo == a.hi && b.lo == b.hi) {
        double l = mul_down(a.lo, b.lo), h = mul_up(a.lo, b.lo);
        return {l, h};
    }
    double l = std::min(std::min(mul_down(a.lo, b.lo), mul_down(a.lo, b.hi)),
                        std::min(mul_down(a.hi, b.lo), mul_down(a.hi, b.hi)));
    double h = std::max(std::max(mul_up(a.lo, b.lo), mul_up(a.lo, b.hi)),
                        std::max(mul_up(a.hi, b.lo), mul_up(a.hi, b.hi)));
    return {l, h};
}

inline Interval operator/(const Interval& a, const Interval& b)
{
    using namespace detail;
    if (b.contains_zero()) throw IntervalError("division by an interval containing zero");
    double l = std::min(std::min(div_down(a.lo, b.lo), div_down(a.lo, b.hi)),
                        std::min(div_down(a.hi, b.lo), div_down(a.hi, b.hi)));
    double h = std::max(std::max(div_up(a.lo, b.lo), div_up(a.lo, b.hi)),
                        std::max(div_up(a.hi, b.lo), div_up(a.hi, b.hi)));
    return {l, h};
}

inline Interval& Interval::operator+=(const Interval& b) { return *this = *this + b; }
inline Interval& Interval::operator-=(const Interval& b) { return *this = *this - b; }
inline Interval& Interval::operator*=(const Interval& b) { return *this = *this * b; }
inline Interval& Interval::operator/=(const Interval& b) { return *this = *this / b; }

inline bool operator==(const Interval& a, const Interval& b) { return a.lo == b.lo && a.hi == b.hi; }
inline bool operator!=(const Interval& a, const Interval& b) { return !(a == b); }

inline Interval iadd(const Interval& a, const Interval& b) { return a + b; }
inline Interval isub(const Interval& a, const Interval& b) { return a - b; }
inline Interval imul(const Interval& a, const Interval& b) { return a * b; }
inline Interval idiv(const Interval& a, const Interval& b) { return a / b; }

inline Interval iabs(const Interval& a)
{
    if (a.lo >= 0) return a;
    if (a.hi <= 0) return -a;
    return {0.0, std::max(-a.lo, a.hi)};
}

inline Interval isqr(const Interval& a)
{
    Interval m = iabs(a);
    return {detail::mul_down(m.lo, m.lo), detail::mul_up(m.hi, m.hi)};
}

inline Interval ipow(const Interval& a, unsigned k)
{
    if (k == 0) return Interval(1.0);
    auto point_pow = [k](double x) {
        Interval r(1.0);
        for (unsigned i = 0; i < k; ++i) r = r * Interval(x);
        return r;
    };
    if (k % 2 == 0) {
        Interval m = iabs(a);
        return {point_pow(m.lo).lo, point_pow(m.hi).hi};
    }
    return {point_pow(a.lo).lo, point_pow(a.hi).hi};
}

inline Interval isqrt(const Interval& a)
{
    if (a.lo < 0) throw IntervalError("square root of an interval with negative part");
    return {detail::sqrt_down(a.lo), detail::sqrt_up(a.hi)};
}

inline Interval imin(const Interval& a, const Interval& b) { return {std::min(a.lo, b.lo), std::min(a.hi, b.hi)}; }
inline Interval imax(const Interval& a, const Interval& b) { return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)}; }
inline Interval hull(const Interval& a, const Interval& b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

template <class Range>
Interval imin(const Range& r)
{
    auto it = std::begin(r);
    if (it == std::end(r)) throw std::invalid_argument("imin of empty range");
    Interval m = *it;
    for (++it; it != std::end(r); ++it) m = imin(m, *it);
    return m;
}

template <class Range>
Interval imax(const Range& r)
{
    auto it = std::begin(r);
    if (it == std::end(r)) throw std::invalid_argument("imax of empty range");
    Interval m = *it;
    for (++it; it != std::end(r); ++it) m = imax(m, *it);
    return m;
}

// [M_PI, succ(M_PI)] contains pi since M_PI rounds down
inline Interval ipi() { return {M_PI, detail::up(M_PI)}; }

// Complex rectangle.
struct CInterval {
    Interval re;
    Interval im;

    CInterval() = default;
    CInterval(double x) : re(x), im(0.0) {}  // NOLINT
    CInterval(const Interval& r) : re(r), im(0.0) {}  // NOLINT
    CInterval(const Interval& r, const Interval& i) : re(r), im(i) {}
    CInterval(const std::complex<double>& z) : re(z.real()), im(z.imag()) {}  // NOLINT

    CInterval& operator+=(const CInterval& b) { re += b.re; im += b.im; return *this; }
    CInterval& operator-=(const CInterval& b) { re -= b.re; im -= b.im; return *this; }
    CInterval& operator*=(const CInterval& b);
    bool contains(const std::complex<double>& z) const { return re.contains(z.real()) && im.contains(z.imag()); }
    bool is_finite() const { return re.is_finite() && im.is_finite(); }
};

inline CInterval operator+(const CInterval& a, const CInterval& b) { return {a.re + b.re, a.im + b.im}; }
inline CInterval operator-(const CInterval& a, const CInterval& b) { return {a.re - b.re, a.im - b.im}; }
inline CInterval operator-(const CInterval& a) { return {-a.re, -a.im}; }

inline CInterval operator*(const CInterval& a, const CInterval& b)
{
    if (a.im == Interval(0.0) && b.im == Interval(0.0)) return {a.re * b.re, Interval(0.0)};
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

inline CInterval operator*(const Interval& a, const CInterval& b) { return {a * b.re, a * b.im}; }
inline CInterval operator*(const CInterval& a, const Interval& b) { return {a.re * b, a.im * b}; }
inline CInterval& CInterval::operator*=(const CInterval& b) { return *this = *this * b; }

inline CInterval operator/(const CInterval& a, const CInterval& b)
{
    Interval den = isqr(b.re) + isqr(b.im);
    return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}

inline bool operator==(const CInterval& a, const CInterval& b) { return a.re == b.re && a.im == b.im; }
inline bool operator!=(const CInterval& a, const CInterval& b) { return !(a == b); }

inline CInterval conj(const CInterval& z) { return {z.re, -z.im}; }

inline Interval iabs(const CInterval& z)
{
    if (z.im == Interval(0.0)) return iabs(z.re);
    if (z.re == Interval(0.0)) return iabs(z.im);
    return isqrt(isqr(z.re) + isqr(z.im));
}

// Upper bound of |z| for a point complex number.
inline double abs_up(const std::complex<double>& z) { return iabs(CInterval(z)).hi; }

using IntervalVector = Eigen::Matrix<Interval, Eigen::Dynamic, 1>;
using IntervalMatrix = Eigen::Matrix<Interval, Eigen::Dynamic, Eigen::Dynamic>;
using CIntervalVector = Eigen::Matrix<CInterval, Eigen::Dynamic, 1>;
using CIntervalMatrix = Eigen::Matrix<CInterval, Eigen::Dynamic, Eigen::Dynamic>;

IntervalVector imatvec(const IntervalMatrix& M, const IntervalVector& v);
IntervalMatrix imatmul(const IntervalMatrix& A, const IntervalMatrix& B);
CIntervalVector imatvec(const CIntervalMatrix& M, const CIntervalVector& v);
CIntervalMatrix imatmul(const CIntervalMatrix& A, const CIntervalMatrix& B);

// Lowercase C99 hex-float text, bit-exact round trip.
std::string to_hex(double x);
double from_hex(const std::string& s);

} // namespace hexcap

namespace Eigen {

template <>
struct NumTraits<hexcap::Interval> : GenericNumTraits<hexcap::Interval> {
    using Real = hexcap::Interval;
    using NonInteger = hexcap::Interval;
    using Nested = hexcap::Interval;
    using Literal = hexcap::Interval;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 2,
        AddCost = 8,
        MulCost = 16
    };
    static inline int digits10() { return 16; }
};

template <>
struct NumTraits<hexcap::CInterval> : GenericNumTraits<hexcap::CInterval> {
    using Real = hexcap::Interval;
    using NonInteger = hexcap::CInterval;
    using Nested = hexcap::CInterval;
    using Literal = hexcap::CInterval;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 4,
        AddCost = 16,
        MulCost = 64
    };
    static inline int digits10() { return 16; }
};

template <typename BinaryOp>
struct ScalarBinaryOpTraits<hexcap::Interval, hexcap::CInterval, BinaryOp> {
    using ReturnType = hexcap::CInterval;
};
template <typename BinaryOp>
struct ScalarBinaryOpTraits<hexcap::CInterval, hexcap::Interval, BinaryOp> {
    using ReturnType = hexcap::CInterval;
};

} // namespace Eigen

#endif
