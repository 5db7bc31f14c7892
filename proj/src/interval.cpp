#include "hexcap/interval.hpp"

#include <cstdio>
#include <cstdlib>

namespace hexcap {

namespace {

template <class M, class V>
V matvec(const M& A, const V& v)
{
    if (A.cols() != v.rows()) throw std::invalid_argument("imatvec: dimension mismatch");
    V out(A.rows());
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        typename V::Scalar acc(0.0);
        for (Eigen::Index k = 0; k < A.cols(); ++k) acc += A(i, k) * v(k);
        out(i) = acc;
    }
    return out;
}

template <class M>
M matmul(const M& A, const M& B)
{
    if (A.cols() != B.rows()) throw std::invalid_argument("imatmul: dimension mismatch");
    M out(A.rows(), B.cols());
    for (Eigen::Index j = 0; j < B.cols(); ++j)
        for (Eigen::Index i = 0; i < A.rows(); ++i) {
            typename M::Scalar acc(0.0);
            for (Eigen::Index k = 0; k < A.cols(); ++k) acc += A(i, k) * B(k, j);
            out(i, j) = acc;
        }
    return out;
}

} // namespace

IntervalVector imatvec(const IntervalMatrix& M, const IntervalVector& v) { return matvec(M, v); }
IntervalMatrix imatmul(const IntervalMatrix& A, const IntervalMatrix& B) { return matmul(A, B); }
CIntervalVector imatvec(const CIntervalMatrix& M, const CIntervalVector& v) { return matvec(M, v); }
CIntervalMatrix imatmul(const CIntervalMatrix& A, const CIntervalMatrix& B) { return matmul(A, B); }

std::string to_hex(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", x);
    return buf;
}

double from_hex(const std::string& s)
{
    const char* begin = s.c_str();
    char* end = nullptr;
    double x = std::strtod(begin, &end);
    if (end == begin || *end != '\0') throw std::invalid_argument("not a floating-point literal: " + s);
    return x;
}

} // namespace hexcap
