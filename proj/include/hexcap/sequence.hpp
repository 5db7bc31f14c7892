#ifndef HEXCAP_SEQUENCE_HPP
#define HEXCAP_SEQUENCE_HPP

#include <complex>
#include <stdexcept>

#include "hexcap/interval.hpp"
#include "hexcap/lattice.hpp"
#include "hexcap/parallel.hpp"

namespace hexcap {

using Complex = std::complex<double>;
using CVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
using CMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

// Cached tables, keyed by (j, N).
TablePtr table_for(int j, int N);

// Symmetric Fourier coefficients on the reps of an OrbitTable. Unfolded,
// the coefficient of every orbit member equals that of its representative.
template <class C>
struct SymSequence {
    using Scalar = C;
    using Vector = Eigen::Matrix<C, Eigen::Dynamic, 1>;

    TablePtr table;
    double d = 1.0;
    Vector coeffs;

    SymSequence() = default;
    SymSequence(TablePtr t, double d_) : table(std::move(t)), d(d_), coeffs(Vector::Constant(table->size(), C(0.0))) {}
    SymSequence(TablePtr t, double d_, Vector c) : table(std::move(t)), d(d_), coeffs(std::move(c))
    {
        if (coeffs.size() != table->size()) throw std::invalid_argument("coefficient count does not match table");
    }

    int N() const { return table->N(); }
    int j() const { return table->j(); }
    Eigen::Index size() const { return coeffs.size(); }
    const C& operator[](Eigen::Index i) const { return coeffs[i]; }
    C& operator[](Eigen::Index i) { return coeffs[i]; }

    // Coefficient at an arbitrary lattice index (0 outside retained orbits).
    C at(const Index2& k) const
    {
        Eigen::Index p = table->position(k);
        return p < 0 ? C(0.0) : coeffs[p];
    }
};

using Sequence = SymSequence<Complex>;
using ISequence = SymSequence<CInterval>;

template <class C>
struct ReducedOperator {
    TablePtr domain;
    TablePtr codomain;
    Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic> M;
};

namespace detail {

inline void check_compatible(const OrbitTable& a, const OrbitTable& b, double da, double db)
{
    if (a.j() != b.j()) throw std::invalid_argument("sequences belong to different groups");
    if (da != db) throw std::invalid_argument("sequences have different half-periods");
}

inline CInterval to_ci(const Complex& z) { return CInterval(z); }
inline CInterval to_ci(const CInterval& z) { return z; }

} // namespace detail

template <class D, class C>
SymSequence<D> cast(const SymSequence<C>& u)
{
    typename SymSequence<D>::Vector c(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) c[i] = D(u[i]);
    return {u.table, u.d, std::move(c)};
}

inline Sequence midpoint(const ISequence& u)
{
    CVector c(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) c[i] = Complex(u[i].re.mid(), u[i].im.mid());
    return {u.table, u.d, std::move(c)};
}

// Truncation to I^M (M < N) or zero extension (M > N); reps share a prefix.
template <class C>
SymSequence<C> resize(const SymSequence<C>& u, int M)
{
    SymSequence<C> out(table_for(u.j(), M), u.d);
    Eigen::Index n = std::min(out.size(), u.size());
    out.coeffs.head(n) = u.coeffs.head(n);
    return out;
}

template <class C>
SymSequence<C> project(const SymSequence<C>& u, int M)
{
    return resize(u, std::min(M, u.N()));
}

template <class C>
SymSequence<C> pad(const SymSequence<C>& u, int M)
{
    return resize(u, std::max(M, u.N()));
}

// (pi^{outer} - pi^{inner}) u, stored on u's table.
template <class C>
SymSequence<C> shell_part(const SymSequence<C>& u, int inner)
{
    SymSequence<C> out = u;
    Eigen::Index n = std::min(u.table->prefix(inner), u.size());
    for (Eigen::Index i = 0; i < n; ++i) out[i] = C(0.0);
    return out;
}

template <class C>
SymSequence<C> operator+(const SymSequence<C>& a, const SymSequence<C>& b)
{
    detail::check_compatible(*a.table, *b.table, a.d, b.d);
    if (a.N() < b.N()) return b + a;
    SymSequence<C> out = a;
    for (Eigen::Index i = 0; i < b.size(); ++i) out[i] += b[i];
    return out;
}

template <class C>
SymSequence<C> operator-(const SymSequence<C>& a)
{
    SymSequence<C> out = a;
    for (Eigen::Index i = 0; i < a.size(); ++i) out[i] = C(0.0) - a[i];
    return out;
}

template <class C>
SymSequence<C> operator-(const SymSequence<C>& a, const SymSequence<C>& b)
{
    return a + (-b);
}

template <class S, class C>
SymSequence<C> operator*(const S& s, const SymSequence<C>& a)
{
    SymSequence<C> out = a;
    for (Eigen::Index i = 0; i < a.size(); ++i) out[i] = C(s) * a[i];
    return out;
}

// Dense grid on [-M, M]^2, entry (k1 + M, k2 + M).
template <class C>
Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic> unfold(const SymSequence<C>& u, int M)
{
    if (M < u.N()) throw std::invalid_argument("unfold radius smaller than truncation");
    Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic> g =
        Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>::Constant(2 * M + 1, 2 * M + 1, C(0.0));
    for (Eigen::Index i = 0; i < u.size(); ++i)
        for (const auto& k : u.table->members(i)) g(k[0] + M, k[1] + M) = u[i];
    return g;
}

template <class C>
SymSequence<C> fold(const Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>& g, TablePtr table, double d)
{
    const int M = static_cast<int>(g.rows() / 2);
    if (table->N() > M) throw std::invalid_argument("fold target larger than grid");
    SymSequence<C> out(table, d);
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        const Index2& n = table->rep(i);
        out[i] = g(n[0] + M, n[1] + M);
    }
    return out;
}

// Column m: u convolved with the orbit indicator of rep m, on target reps.
template <class C>
ReducedOperator<C> conv_operator(const SymSequence<C>& u, TablePtr domain, TablePtr target)
{
    detail::check_compatible(*u.table, *domain, 0, 0);
    detail::check_compatible(*u.table, *target, 0, 0);
    ReducedOperator<C> op{domain, target, {}};
    op.M.resize(target->size(), domain->size());
    parallel_for(target->size(), [&](std::ptrdiff_t r) {
        const Index2& n = target->rep(r);
        for (Eigen::Index m = 0; m < domain->size(); ++m) {
            C acc(0.0);
            for (const auto& k : domain->members(m)) {
                Eigen::Index p = u.table->position({n[0] - k[0], n[1] - k[1]});
                if (p >= 0) acc += u[p];
            }
            op.M(r, m) = acc;
        }
    });
    return op;
}

template <class C>
ReducedOperator<C> conv_operator(const SymSequence<C>& u, TablePtr target)
{
    return conv_operator(u, target, target);
}

template <class C>
SymSequence<C> apply(const ReducedOperator<C>& op, const SymSequence<C>& v)
{
    if (v.table->N() != op.domain->N()) throw std::invalid_argument("operator domain does not match sequence");
    typename SymSequence<C>::Vector out(op.codomain->size());
    for (Eigen::Index r = 0; r < op.M.rows(); ++r) {
        C acc(0.0);
        for (Eigen::Index m = 0; m < op.M.cols(); ++m) acc += op.M(r, m) * v[m];
        out[r] = acc;
    }
    return {op.codomain, v.d, std::move(out)};
}

// Product of the two real functions: plain convolution of unfolded grids.
template <class C>
SymSequence<C> convolve(const SymSequence<C>& u, const SymSequence<C>& v)
{
    detail::check_compatible(*u.table, *v.table, u.d, v.d);
    const SymSequence<C>& big = u.N() >= v.N() ? u : v;
    const SymSequence<C>& small = u.N() >= v.N() ? v : u;
    TablePtr target = table_for(u.j(), u.N() + v.N());
    SymSequence<C> out(target, u.d);
    parallel_for(target->size(), [&](std::ptrdiff_t r) {
        const Index2& n = target->rep(r);
        C acc(0.0);
        for (Eigen::Index m = 0; m < small.size(); ++m) {
            C s(0.0);
            bool any = false;
            for (const auto& k : small.table->members(m)) {
                Eigen::Index p = big.table->position({n[0] - k[0], n[1] - k[1]});
                if (p >= 0) {
                    s += big[p];
                    any = true;
                }
            }
            if (any) acc += s * small[m];
        }
        out[r] = acc;
    });
    return out;
}

// Norm weights alpha_n nu^{rho(n)} of the unit symmetric basis sequences.
Eigen::VectorXd weights(const OrbitTable& t, double nu);
IntervalVector iweights(const OrbitTable& t, double nu);

// Float-mode norm for iteration control only.
double norm_float(const Sequence& u, double nu);

template <class C>
Interval norm_l1nu(const SymSequence<C>& u, double nu)
{
    if (!(nu >= 1.0)) throw std::invalid_argument("nu must be >= 1");
    IntervalVector w = iweights(*u.table, nu);
    Interval acc(0.0);
    for (Eigen::Index i = 0; i < u.size(); ++i) acc += w[i] * iabs(detail::to_ci(u[i]));
    return acc;
}

// max over columns of (1/w_m) sum_n w_n |M_nm| for arbitrary positive weights.
Interval weighted_op_norm(const CIntervalMatrix& M, const IntervalVector& w_out, const IntervalVector& w_in);
Interval weighted_op_norm(const CMatrix& M, const IntervalVector& w_out, const IntervalVector& w_in);

template <class C>
Interval op_norm(const ReducedOperator<C>& op, double nu)
{
    if (op.domain->N() != op.codomain->N()) throw std::invalid_argument("op_norm needs a square operator");
    IntervalVector w = iweights(*op.domain, nu);
    return weighted_op_norm(op.M, w, w);
}

// sup_n |u_n| over unfolded indices except the origin.
template <class C>
Interval sup_norm_nonzero(const SymSequence<C>& u)
{
    Interval m(0.0);
    for (Eigen::Index i = 1; i < u.size(); ++i) m = imax(m, iabs(detail::to_ci(u[i])));
    return m;
}

// Physical wave vector (pi/d) L k.
inline Eigen::Vector2d wave_vector(const Index2& k, double d)
{
    const double f = M_PI / d;
    return {f * (k[0] - 0.5 * k[1]), f * (std::sqrt(3.0) / 2.0) * k[1]};
}

double evaluate(const Sequence& u, const Eigen::Vector2d& x);
Complex evaluate_complex(const Sequence& u, const Eigen::Vector2d& x);

// Largest |u_n - conj(u_{c(n)})| over reps.
double realness_defect(const Sequence& u);
// Averages each coefficient with the conjugate of its partner so the
// function is exactly real.
Sequence symmetrize(const Sequence& u);

} // namespace hexcap

#endif
