#include "hexcap/model.hpp"

#include <random>

#include <Eigen/LU>

namespace hexcap {

void ModelParams::validate() const
{
    if (j != 3 && j != 6) throw std::invalid_argument("group must be 3 or 6");
    if (N < 1) throw std::invalid_argument("N must be >= 1");
    if (!(d > 0)) throw std::invalid_argument("d must be positive");
    if (!(nu >= 1)) throw std::invalid_argument("nu must be >= 1");
    if (!std::isfinite(mu) || !std::isfinite(gamma)) throw std::invalid_argument("mu and gamma must be finite");
}

double symbol(const Index2& n, const ModelParams& p)
{
    double c = (M_PI / p.d) * (M_PI / p.d);
    double x = 1.0 - c * static_cast<double>(quad_form(n));
    return x * x + p.mu;
}

Interval isymbol(const Index2& n, double d, const Interval& mu)
{
    Interval c = isqr(ipi() / Interval(d));
    Interval x = Interval(1.0) - c * Interval(static_cast<double>(quad_form(n)));
    return isqr(x) + mu;
}

Eigen::VectorXd symbol_values(const OrbitTable& t, const ModelParams& p)
{
    Eigen::VectorXd l(t.size());
    for (Eigen::Index i = 0; i < t.size(); ++i) l[i] = symbol(t.rep(i), p);
    return l;
}

IntervalVector isymbol_values(const OrbitTable& t, const ModelParams& p)
{
    IntervalVector l(t.size());
    for (Eigen::Index i = 0; i < t.size(); ++i) l[i] = isymbol(t.rep(i), p);
    return l;
}

namespace {

template <class C, class V>
SymSequence<C> times_symbol(const SymSequence<C>& u, const V& lam)
{
    SymSequence<C> out = u;
    for (Eigen::Index i = 0; i < u.size(); ++i) out[i] = C(lam[i]) * u[i];
    return out;
}

template <class C>
SymSequence<C> nonlinear_impl(const SymSequence<C>& u, const ModelParams& p)
{
    SymSequence<C> u2 = convolve(u, u);
    SymSequence<C> u3 = convolve(u2, u);
    return u3 - C(p.gamma) * u2;
}

template <class C>
SymSequence<C> potential_impl(const SymSequence<C>& u, const ModelParams& p)
{
    return C(3.0) * convolve(u, u) - C(2.0 * p.gamma) * u;
}

} // namespace

Sequence nonlinear_part(const Sequence& u, const ModelParams& p) { return nonlinear_impl(u, p); }
ISequence nonlinear_part(const ISequence& u, const ModelParams& p) { return nonlinear_impl(u, p); }
Sequence dg_potential(const Sequence& u, const ModelParams& p) { return potential_impl(u, p); }
ISequence dg_potential(const ISequence& u, const ModelParams& p) { return potential_impl(u, p); }

Sequence apply_f(const Sequence& u, const ModelParams& p)
{
    return times_symbol(u, symbol_values(*u.table, p)) + nonlinear_part(u, p);
}

ISequence apply_f(const ISequence& u, const ModelParams& p)
{
    return times_symbol(u, isymbol_values(*u.table, p)) + nonlinear_part(u, p);
}

ReducedOperator<Complex> apply_Df(const Sequence& u, const ModelParams& p)
{
    auto op = conv_operator(dg_potential(u, p), u.table);
    Eigen::VectorXd lam = symbol_values(*u.table, p);
    for (Eigen::Index i = 0; i < lam.size(); ++i) op.M(i, i) += lam[i];
    return op;
}

ReducedOperator<CInterval> apply_Df(const ISequence& u, const ModelParams& p)
{
    auto op = conv_operator(dg_potential(u, p), u.table);
    IntervalVector lam = isymbol_values(*u.table, p);
    for (Eigen::Index i = 0; i < lam.size(); ++i) op.M(i, i) += CInterval(lam[i]);
    return op;
}

Interval tail_bound_LN(int N, double d, const Interval& mu)
{
    const Interval c = isqr(ipi() / Interval(d));
    bool have = false;
    Interval best(0.0);
    for (int M = N + 1;; ++M) {
        // every k with hex_norm(k) = M
        for (int a = -M; a <= M; ++a)
            for (int b = -M; b <= M; ++b) {
                Index2 k{a, b};
                if (hex_norm(k) != M) continue;
                Interval lam = isymbol(k, d, mu);
                if (lam.lo <= 0)
                    throw IntervalError("linear part is not uniformly invertible beyond the truncation; increase N");
                best = have ? imin(best, lam) : lam;
                have = true;
            }
        // q(k) >= 3/4 rho(k)^2 bounds all further shells from below
        Interval x = c * Interval(0.75 * (M + 1.0) * (M + 1.0));
        if (x.lo > 1.0) {
            Interval far = isqr(x - Interval(1.0)) + mu;
            if (far.lo > best.hi) break;
        }
        if (M > N + 100000) throw IntervalError("tail bound search did not terminate");
    }
    return best;
}

Sequence random_initial_guess(const ModelParams& p, std::uint64_t seed, double amplitude)
{
    p.validate();
    const int N = p.N, P = 2 * N + 1;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::MatrixXd U(P, P);
    for (int a = 0; a < P; ++a)
        for (int b = 0; b < P; ++b) U(a, b) = amplitude * dist(rng);

    TablePtr t = table_for(p.j, N);
    Sequence u(t, p.d);
    for (Eigen::Index i = 0; i < t->size(); ++i) {
        const Index2& n = t->rep(i);
        Complex s(0.0);
        for (int a = 0; a < P; ++a) {
            for (int b = 0; b < P; ++b) {
                double ph = -2.0 * M_PI * (static_cast<double>(n[0]) * a + static_cast<double>(n[1]) * b) / P;
                s += U(a, b) * Complex(std::cos(ph), std::sin(ph));
            }
        }
        u[i] = s / static_cast<double>(P * P);
    }
    return symmetrize(u);
}

NewtonResult newton_refine(const Sequence& u0, const ModelParams& p, double tol, int maxit)
{
    if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
    NewtonResult res;
    res.u = symmetrize(u0);
    int growth = 0;
    for (int it = 0;; ++it) {
        Sequence r = project(apply_f(res.u, p), res.u.N());
        double rn = norm_float(r, p.nu);
        if (!std::isfinite(rn)) throw NumericsError("Newton iterate is not finite");
        if (!res.history.empty() && rn > res.history.back()) {
            if (++growth >= 5) throw NumericsError("Newton diverged (residual grew 5 consecutive steps)");
        } else {
            growth = 0;
        }
        res.history.push_back(rn);
        res.residual = rn;
        res.iterations = it;
        if (rn < tol) {
            res.converged = true;
            return res;
        }
        if (it >= maxit) return res;
        auto J = apply_Df(res.u, p);
        Eigen::PartialPivLU<CMatrix> lu(J.M);
        if (!(lu.rcond() > 1e-14)) throw NumericsError("singular Jacobian in Newton step");
        CVector delta = lu.solve(r.coeffs);
        res.u.coeffs -= delta;
        res.u = symmetrize(res.u);
    }
}

std::optional<FindResult> find_solution(const ModelParams& p, std::uint64_t seed0, int attempts,
                                        const FindOptions& opt)
{
    p.validate();
    for (int a = 0; a < attempts; ++a) {
        const std::uint64_t seed = seed0 + static_cast<std::uint64_t>(a);
        try {
            NewtonResult r = newton_refine(random_initial_guess(p, seed, opt.amplitude), p, opt.tol, opt.maxit);
            if (r.converged && norm_float(r.u, 1.0) >= opt.min_norm) return FindResult{r, seed, a + 1};
        } catch (const NumericsError&) {
        }
    }
    return std::nullopt;
}

ApproxInverse build_approx_inverse(const Sequence& u, const ModelParams& p)
{
    auto J = apply_Df(u, p);
    Eigen::PartialPivLU<CMatrix> lu(J.M);
    if (!(lu.rcond() > 1e-14)) throw NumericsError("Galerkin block is numerically singular");
    ApproxInverse A;
    A.AN = {u.table, u.table, lu.inverse()};
    A.LN = tail_bound_LN(p);
    A.tail_inv_bound = Interval(1.0) / A.LN;
    A.params = p;
    return A;
}

} // namespace hexcap
