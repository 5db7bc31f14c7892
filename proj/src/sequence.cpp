#include "hexcap/sequence.hpp"

#include <map>
#include <mutex>

namespace hexcap {

TablePtr table_for(int j, int N)
{
    static std::mutex mu;
    static std::map<std::pair<int, int>, TablePtr> cache;
    static std::map<int, GroupSpec> groups;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(j, N);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto g = groups.find(j);
    if (g == groups.end()) g = groups.emplace(j, build_group(j)).first;
    TablePtr t = build_orbit_table(g->second, N);
    cache.emplace(key, t);
    return t;
}

Eigen::VectorXd weights(const OrbitTable& t, double nu)
{
    Eigen::VectorXd w(t.size());
    for (Eigen::Index i = 0; i < t.size(); ++i) w[i] = t.alpha(i) * std::pow(nu, t.rho(i));
    return w;
}

IntervalVector iweights(const OrbitTable& t, double nu)
{
    IntervalVector w(t.size());
    const Interval inu(nu);
    for (Eigen::Index i = 0; i < t.size(); ++i) w[i] = Interval(t.alpha(i)) * ipow(inu, t.rho(i));
    return w;
}

double norm_float(const Sequence& u, double nu)
{
    Eigen::VectorXd w = weights(*u.table, nu);
    double s = 0;
    for (Eigen::Index i = 0; i < u.size(); ++i) s += w[i] * std::abs(u[i]);
    return s;
}

namespace {

template <class M>
Interval op_norm_impl(const M& A, const IntervalVector& w_out, const IntervalVector& w_in)
{
    if (A.rows() != w_out.size() || A.cols() != w_in.size())
        throw std::invalid_argument("weighted_op_norm: dimension mismatch");
    std::vector<Interval> cols(A.cols());
    parallel_for(A.cols(), [&](std::ptrdiff_t m) {
        Interval s(0.0);
        for (Eigen::Index n = 0; n < A.rows(); ++n) s += w_out[n] * iabs(CInterval(A(n, m)));
        cols[m] = s / w_in[m];
    });
    Interval best(0.0);
    for (const auto& c : cols) best = imax(best, c);
    if (!best.is_finite()) throw IntervalError("operator norm overflowed");
    return best;
}

} // namespace

Interval weighted_op_norm(const CIntervalMatrix& M, const IntervalVector& w_out, const IntervalVector& w_in)
{
    return op_norm_impl(M, w_out, w_in);
}

Interval weighted_op_norm(const CMatrix& M, const IntervalVector& w_out, const IntervalVector& w_in)
{
    return op_norm_impl(M, w_out, w_in);
}

Complex evaluate_complex(const Sequence& u, const Eigen::Vector2d& x)
{
    Complex s(0.0);
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        if (u[i] == Complex(0.0)) continue;
        Complex orb(0.0);
        for (const auto& k : u.table->members(i)) {
            double ph = wave_vector(k, u.d).dot(x);
            orb += Complex(std::cos(ph), std::sin(ph));
        }
        s += u[i] * orb;
    }
    return s;
}

double evaluate(const Sequence& u, const Eigen::Vector2d& x) { return evaluate_complex(u, x).real(); }

double realness_defect(const Sequence& u)
{
    double m = 0;
    for (Eigen::Index i = 0; i < u.size(); ++i)
        m = std::max(m, std::abs(u[i] - std::conj(u[u.table->conjugate(i)])));
    return m;
}

Sequence symmetrize(const Sequence& u)
{
    Sequence out = u;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        Eigen::Index c = u.table->conjugate(i);
        if (c == i) {
            out[i] = Complex(u[i].real(), 0.0);
        } else if (i < c) {
            Complex a = 0.5 * (u[i] + std::conj(u[c]));
            out[i] = a;
            out[c] = std::conj(a);
        }
    }
    return out;
}

} // namespace hexcap
