#include "hexcap/proof.hpp"

#include <cmath>

namespace hexcap {

const char* to_string(PhiMode m) { return m == PhiMode::uniform ? "uniform" : "per_index"; }

PhiMode phi_mode_from_string(const std::string& s)
{
    if (s == "uniform") return PhiMode::uniform;
    if (s == "per_index") return PhiMode::per_index;
    throw std::invalid_argument("unknown phi mode: " + s);
}

RadiiCheck check_radii(const Interval& Y0, const Interval& Z0, const Interval& Z1, const Interval& Z2_base,
                       const Interval& Z2_slope, double r0)
{
    if (!(r0 > 0)) throw std::invalid_argument("r0 must be positive");
    const Interval y(Y0.hi), z0(Z0.hi), z1(Z1.hi), zb(Z2_base.hi), zs(Z2_slope.hi), r(r0);
    RadiiCheck c;
    if (!(y.is_finite() && z0.is_finite() && z1.is_finite() && zb.is_finite() && zs.is_finite())) {
        c.violated = "non-finite bound";
        c.margin1 = Interval(0.0, detail::kInf);
        c.margin2 = Interval(0.0, detail::kInf);
        return c;
    }
    Interval z2 = zb + zs * r;
    c.margin1 = Interval(0.5) * z2 * r * r - (Interval(1.0) - z0 - z1) * r + y;
    c.margin2 = z0 + z1 + z2 * r;
    bool ok1 = c.margin1.hi < 0, ok2 = c.margin2.hi < 1;
    c.success = ok1 && ok2;
    if (!ok1 && !ok2)
        c.violated = "both";
    else if (!ok1)
        c.violated = "first (radii polynomial)";
    else if (!ok2)
        c.violated = "second (contraction)";
    return c;
}

std::optional<double> scan_radius(const Interval& Y0, const Interval& Z0, const Interval& Z1,
                                  const Interval& Z2_base, const Interval& Z2_slope, double r_min, double r_max,
                                  int per_decade)
{
    double start = std::max(Y0.hi, r_min);
    if (!(start > 0)) start = std::max(r_min, 1e-16);
    if (!std::isfinite(start) || start > r_max) return std::nullopt;
    const double step = std::pow(10.0, 1.0 / per_decade);
    for (double r = start; r <= r_max; r *= step)
        if (check_radii(Y0, Z0, Z1, Z2_base, Z2_slope, r).success) return r;
    return std::nullopt;
}

namespace {

CIntervalMatrix to_imatrix(const CMatrix& M)
{
    CIntervalMatrix out(M.rows(), M.cols());
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        for (Eigen::Index k = 0; k < M.cols(); ++k) out(i, k) = CInterval(M(i, k));
    return out;
}

ISequence iseq(const Sequence& u) { return cast<CInterval>(u); }

void require_finite(const Interval& x, const char* what)
{
    if (!x.is_finite()) throw IntervalError(std::string(what) + " bound is not finite");
}

} // namespace

Y0Bound bound_Y0(const Sequence& u, const ApproxInverse& A, const ModelParams& p)
{
    ISequence fu = apply_f(iseq(u), p);
    ISequence head = project(fu, u.N());
    CIntervalVector Af = imatvec(to_imatrix(A.AN.M), head.coeffs);
    Y0Bound b;
    b.finite = norm_l1nu(ISequence(u.table, u.d, Af), p.nu);
    b.tail = A.tail_inv_bound * norm_l1nu(shell_part(fu, u.N()), p.nu);
    b.total = b.finite + b.tail;
    require_finite(b.total, "Y0");
    return b;
}

Interval bound_Z0(const Sequence& u, const ApproxInverse& A, const ModelParams& p)
{
    auto DF = apply_Df(iseq(u), p);
    CIntervalMatrix R = imatmul(to_imatrix(A.AN.M), DF.M);
    for (Eigen::Index i = 0; i < R.rows(); ++i)
        for (Eigen::Index k = 0; k < R.cols(); ++k) R(i, k) = (i == k ? CInterval(1.0) : CInterval(0.0)) - R(i, k);
    IntervalVector w = iweights(*u.table, p.nu);
    Interval z = weighted_op_norm(R, w, w);
    require_finite(z, "Z0");
    return z;
}

IntervalVector phi_vector(const ISequence& v, int N, double nu, PhiMode mode)
{
    TablePtr tN = table_for(v.j(), N);
    IntervalVector phi(tN->size());
    const Interval inu(nu);
    if (mode == PhiMode::uniform) {
        Interval val = sup_norm_nonzero(v) / ipow(inu, static_cast<unsigned>(N + 1));
        for (Eigen::Index i = 0; i < phi.size(); ++i) phi[i] = Interval(0.0, val.hi);
        return phi;
    }
    const int maxrho = N + v.N() + 1;
    std::vector<Interval> inv_pow(maxrho + 1);
    for (int r = 0; r <= maxrho; ++r) inv_pow[r] = Interval(1.0) / ipow(inu, static_cast<unsigned>(r));
    std::vector<Interval> absv(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) absv[i] = iabs(v[i]);
    parallel_for(tN->size(), [&](std::ptrdiff_t r) {
        const Index2& n = tN->rep(r);
        double best = 0.0;
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            if (absv[i].hi == 0) continue;
            for (const auto& k : v.table->members(i)) {
                int rm = hex_norm({n[0] - k[0], n[1] - k[1]});
                if (rm <= N) continue;
                best = std::max(best, (absv[i] * inv_pow[rm]).hi);
            }
        }
        phi[r] = Interval(0.0, best);
    });
    return phi;
}

Z1Bound bound_Z1(const Sequence& u, const ApproxInverse& A, const ModelParams& p, PhiMode mode)
{
    ISequence v = dg_potential(iseq(u), p);
    IntervalVector phi = phi_vector(v, u.N(), p.nu, mode);
    IntervalVector w = iweights(*u.table, p.nu);
    const CMatrix& AN = A.AN.M;
    Z1Bound b;
    b.sup_V = sup_norm_nonzero(v);
    Interval fin(0.0);
    for (Eigen::Index n = 0; n < AN.rows(); ++n) {
        Interval row(0.0);
        for (Eigen::Index m = 0; m < AN.cols(); ++m) row += iabs(CInterval(AN(n, m))) * phi[m];
        fin += w[n] * row;
    }
    b.finite = fin;
    b.tail = A.tail_inv_bound * norm_l1nu(v, p.nu);
    b.total = b.finite + b.tail;
    require_finite(b.total, "Z1");
    return b;
}

Z2Bound bound_Z2(const Sequence& u, const ApproxInverse& A, const ModelParams& p)
{
    Z2Bound b;
    IntervalVector w = iweights(*u.table, p.nu);
    b.opnorm_A = weighted_op_norm(A.AN.M, w, w);
    ISequence q = CInterval(6.0) * iseq(u);
    q[0] = q[0] - CInterval(2.0 * p.gamma);
    b.q_norm = norm_l1nu(q, p.nu);
    Interval K = b.opnorm_A + A.tail_inv_bound;
    b.base = K * b.q_norm;
    b.slope = Interval(3.0) * K;
    require_finite(b.base, "Z2");
    return b;
}

Certificate prove_solution(const Sequence& u, const ModelParams& p, const ProofOptions& opt)
{
    p.validate();
    if (u.N() != p.N || u.j() != p.j) throw std::invalid_argument("solution does not match parameters");
    ApproxInverse A = build_approx_inverse(u, p);
    Certificate c;
    c.params = p;
    c.phi_mode = opt.phi_mode;
    Y0Bound y = bound_Y0(u, A, p);
    Z1Bound z1 = bound_Z1(u, A, p, opt.phi_mode);
    Z2Bound z2 = bound_Z2(u, A, p);
    c.Y0 = y.total;
    c.Y0_tail = y.tail;
    c.Z0 = bound_Z0(u, A, p);
    c.Z1 = z1.total;
    c.Z1_tail = z1.tail;
    c.Z2_base = z2.base;
    c.Z2_slope = z2.slope;
    c.LN = A.LN;
    c.opnorm_A = z2.opnorm_A;

    std::optional<double> r = opt.r0;
    if (!r) r = scan_radius(c.Y0, c.Z0, c.Z1, c.Z2_base, c.Z2_slope, opt.r_min, opt.r_max);
    c.r0 = r ? *r : std::max(c.Y0.hi, 1e-16);
    RadiiCheck rc = c.recheck();
    c.success = rc.success;
    c.margin1 = rc.margin1;
    c.margin2 = rc.margin2;
    c.violated = rc.violated;
    return c;
}

} // namespace hexcap
