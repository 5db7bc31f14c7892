#ifndef HEXCAP_CHEBYSHEV_HPP
#define HEXCAP_CHEBYSHEV_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hexcap/interval.hpp"

namespace hexcap {

// Series g(s) = g_0 + 2 sum_{n>=1} g_n T_n(s), stored as g_0..g_K.
template <class T>
using ChebSeries = std::vector<T>;

// Clenshaw recurrence; S is the argument type (double or Interval).
template <class T, class S>
T cheb_eval(const ChebSeries<T>& g, const S& s)
{
    if (g.empty()) throw std::invalid_argument("empty Chebyshev series");
    const S two_s = S(2.0) * s;
    T b1 = S(0.0) * g[0];
    T b2 = b1;
    for (size_t k = g.size() - 1; k >= 1; --k) {
        T b0 = S(2.0) * g[k] + two_s * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return g[0] + s * b1 - b2;
}

// Product through the two-sided form g(cos t) = sum_{n in Z} g_|n| e^{int}.
template <class A, class B, class Mul>
auto cheb_product(const ChebSeries<A>& a, const ChebSeries<B>& b, Mul mul)
{
    using R = decltype(mul(a[0], b[0]));
    if (a.empty() || b.empty()) throw std::invalid_argument("empty Chebyshev series");
    const int da = static_cast<int>(a.size()) - 1, db = static_cast<int>(b.size()) - 1;
    ChebSeries<R> out;
    out.reserve(da + db + 1);
    for (int k = 0; k <= da + db; ++k) {
        bool first = true;
        R acc{};
        for (int i = -da; i <= da; ++i) {
            int jdx = std::abs(k - i);
            if (jdx > db) continue;
            R term = mul(a[std::abs(i)], b[jdx]);
            if (first) {
                acc = term;
                first = false;
            } else {
                acc = acc + term;
            }
        }
        out.push_back(acc);
    }
    return out;
}

template <class T>
ChebSeries<T> cheb_product(const ChebSeries<T>& a, const ChebSeries<T>& b)
{
    return cheb_product(a, b, [](const T& x, const T& y) { return x * y; });
}

// |g_0| + 2 sum |g_n| from per-coefficient norms.
inline Interval cheb_norm(const std::vector<Interval>& coefficient_norms)
{
    Interval s(0.0);
    for (size_t k = 0; k < coefficient_norms.size(); ++k)
        s += (k == 0 ? Interval(1.0) : Interval(2.0)) * coefficient_norms[k];
    return s;
}

// s_k = s_fix/2 - s_fix/2 cos(2 pi k / n_fft) for k = 0..n_fft/2.
std::vector<double> arclength_grid(double s_fix, int n_fft);

// Nodes -cos(pi k / M), k = 0..M, i.e. the rescaled grid points.
std::vector<double> cheb_nodes(int M);

// Coefficients of the interpolant through values at cheb_nodes(M),
// truncated to degree K <= M.
template <class T>
ChebSeries<T> cheb_fit(const std::vector<T>& values, int K)
{
    const int M = static_cast<int>(values.size()) - 1;
    if (M < 1) throw std::invalid_argument("need at least two nodes");
    if (K > M) throw std::invalid_argument("degree exceeds the number of nodes");
    ChebSeries<T> g;
    for (int n = 0; n <= K; ++n) {
        T acc = 0.0 * values[0];
        for (int k = 0; k <= M; ++k) {
            double w = (k == 0 || k == M) ? 0.5 : 1.0;
            double Tn = std::cos(M_PI * n * (M - k) / M);  // T_n(-cos(pi k/M))
            acc = acc + (w * Tn / M) * values[k];
        }
        if (n == M) acc = 0.5 * acc;
        g.push_back(acc);
    }
    return g;
}

} // namespace hexcap

#endif
