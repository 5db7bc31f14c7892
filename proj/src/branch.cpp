#include "hexcap/branch.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

namespace hexcap {

std::vector<double> arclength_grid(double s_fix, int n_fft)
{
    if (n_fft < 2 || (n_fft & (n_fft - 1)) != 0) throw std::invalid_argument("n_fft must be a power of two >= 2");
    std::vector<double> s;
    for (int k = 0; k <= n_fft / 2; ++k) s.push_back(0.5 * s_fix - 0.5 * s_fix * std::cos(2.0 * M_PI * k / n_fft));
    return s;
}

std::vector<double> cheb_nodes(int M)
{
    std::vector<double> x;
    for (int k = 0; k <= M; ++k) x.push_back(-std::cos(M_PI * k / M));
    return x;
}

const char* to_string(LnkMode m) { return m == LnkMode::literal ? "literal" : "conservative"; }

LnkMode lnk_mode_from_string(const std::string& s)
{
    if (s == "conservative") return LnkMode::conservative;
    if (s == "literal") return LnkMode::literal;
    throw std::invalid_argument("unknown L_NK mode: " + s);
}

namespace {

ModelParams at_mu(ModelParams p, double mu)
{
    p.mu = mu;
    return p;
}

CVector pack(const BranchPoint& w)
{
    CVector x(1 + w.u.size());
    x[0] = w.mu;
    x.tail(w.u.size()) = w.u.coeffs;
    return x;
}

// Restores exact realness: real mu, conjugate-paired coefficients.
BranchPoint unpack(const CVector& x, const Sequence& like)
{
    Sequence u(like.table, like.d, x.tail(like.size()));
    return {x[0].real(), symmetrize(u)};
}

// [d_mu f, d_u f] at w, rows over I^N.
CMatrix augmented_jacobian(const BranchPoint& w, const ModelParams& p)
{
    auto Df = apply_Df(w.u, at_mu(p, w.mu));
    CMatrix J(w.u.size(), 1 + w.u.size());
    J.col(0) = w.u.coeffs;
    J.rightCols(w.u.size()) = Df.M;
    return J;
}

BranchPoint normalized(const BranchPoint& t)
{
    double n = pack(t).norm();
    if (!(n > 0)) throw NumericsError("zero tangent vector");
    return {t.mu / n, (1.0 / n) * t.u};
}

double pairing(const BranchPoint& a, const BranchPoint& b) { return pack(a).dot(pack(b)).real(); }

} // namespace

CMatrix bordered_jacobian(const BranchPoint& w, const BranchPoint& tangent, const ModelParams& p)
{
    const Eigen::Index n = w.u.size();
    CMatrix D = CMatrix::Zero(1 + n, 1 + n);
    D(0, 0) = tangent.mu;
    D.row(0).tail(n) = tangent.u.coeffs.conjugate().transpose();
    D.bottomRows(n) = augmented_jacobian(w, p);
    return D;
}

BranchPoint tangent_vector(const BranchPoint& w, const ModelParams& p, const BranchPoint* prev, int direction)
{
    CMatrix J = augmented_jacobian(w, p);
    CVector t;
    if (prev) {
        CMatrix A(J.rows() + 1, J.cols());
        A.row(0) = pack(*prev).conjugate().transpose();
        A.bottomRows(J.rows()) = J;
        CVector rhs = CVector::Zero(A.rows());
        rhs[0] = 1.0;
        Eigen::PartialPivLU<CMatrix> lu(A);
        if (!(lu.rcond() > 1e-14)) throw NumericsError("bordered tangent system is singular");
        t = lu.solve(rhs);
    } else {
        Eigen::JacobiSVD<CMatrix> svd(J, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        if (sv.size() > 1 && !(sv[sv.size() - 1] > 1e-10 * sv[0]))
            throw NumericsError("Jacobian kernel is more than one-dimensional");
        t = svd.matrixV().col(J.cols() - 1);
        // pick the phase making t conjugation-invariant
        BranchPoint a = unpack(t, w.u);
        BranchPoint b = unpack(Complex(0, 1) * t, w.u);
        t = pack(a).norm() >= pack(b).norm() ? pack(a) : pack(b);
    }
    BranchPoint out = normalized(unpack(t, w.u));
    bool flip = prev ? pairing(out, *prev) < 0 : (direction < 0 ? out.mu > 0 : out.mu < 0);
    if (flip) out = {-out.mu, -out.u};
    return out;
}

double tangent_residual(const BranchPoint& w, const BranchPoint& t, const ModelParams& p)
{
    return (augmented_jacobian(w, p) * pack(t)).norm();
}

namespace {

// Newton on [phase(w - pred) ; f(w)] = 0.
std::optional<BranchPoint> correct(const BranchPoint& pred, const BranchPoint& tangent, const ModelParams& p,
                                   const ContinuationOptions& opt)
{
    BranchPoint w = pred;
    double last = std::numeric_limits<double>::infinity();
    for (int it = 0; it <= opt.maxit; ++it) {
        Sequence f = project(apply_f(w.u, at_mu(p, w.mu)), p.N);
        Complex phase = (pack(w) - pack(pred)).dot(pack(tangent));  // conj on the tangent
        CVector r(1 + f.size());
        r[0] = std::conj(phase);
        r.tail(f.size()) = f.coeffs;
        double rn = std::abs(phase) + norm_float(f, p.nu);
        if (!std::isfinite(rn)) return std::nullopt;
        if (rn < opt.tol) return w;
        if (rn >= last && rn < 1e-10) return w;  // rounding floor
        if (it > 3 && rn > 10 * last) return std::nullopt;
        last = rn;
        CMatrix D = bordered_jacobian(w, tangent, p);
        Eigen::PartialPivLU<CMatrix> lu(D);
        if (!(lu.rcond() > 1e-14)) return std::nullopt;
        w = unpack(pack(w) - lu.solve(r), w.u);
    }
    return std::nullopt;
}

} // namespace

ChebBranch continue_branch(const BranchPoint& start, const ModelParams& p0, double s_fix, int Nc, int direction,
                           const ContinuationOptions& opt, ContinuationGrid* grid)
{
    p0.validate();
    if (!(s_fix > 0)) throw std::invalid_argument("s_fix must be positive");
    if (Nc < 0) throw std::invalid_argument("Nc must be non-negative");
    if (start.u.N() != p0.N || start.u.j() != p0.j) throw std::invalid_argument("start point does not match parameters");
    ModelParams p = p0;
    p.mu = start.mu;

    ChebBranch b;
    b.params = p;
    b.Nc = Nc;
    b.s_fix = s_fix;
    b.n_fft = opt.n_fft;
    if (b.n_fft <= 0)
        for (b.n_fft = 2; b.n_fft < 2 * Nc;) b.n_fft *= 2;
    const int M = b.n_fft / 2;
    if (M < Nc) throw std::invalid_argument("n_fft must be at least 2 Nc");

    BranchPoint t0 = tangent_vector(start, p, nullptr, direction);
    if (Nc == 0) {
        b.mu = {start.mu};
        b.u = {start.u};
        b.mu_dot = {t0.mu};
        b.u_dot = {t0.u};
        return b;
    }

    std::vector<double> s = arclength_grid(s_fix, b.n_fft);
    std::vector<BranchPoint> pts{start}, tans{t0};
    for (int k = 0; k < M; ++k) {
        const double ds = s[k + 1] - s[k];
        bool done = false;
        for (int h = 0; h <= opt.max_halvings && !done; ++h) {
            const int sub = 1 << h;
            BranchPoint w = pts.back(), t = tans.back();
            bool ok = true;
            for (int i = 0; i < sub && ok; ++i) {
                BranchPoint pred{w.mu + (ds / sub) * t.mu, w.u + Complex(ds / sub) * t.u};
                auto c = correct(pred, t, p, opt);
                if (!c) {
                    ok = false;
                    break;
                }
                t = tangent_vector(*c, p, &t);
                w = *c;
            }
            if (ok) {
                pts.push_back(w);
                tans.push_back(t);
                done = true;
            }
        }
        if (!done) throw NumericsError("continuation corrector diverged at grid point " + std::to_string(k + 1));
    }

    std::vector<double> mus, mudots;
    std::vector<Sequence> us, udots;
    for (int k = 0; k <= M; ++k) {
        mus.push_back(pts[k].mu);
        us.push_back(pts[k].u);
        mudots.push_back(tans[k].mu);
        udots.push_back(tans[k].u);
    }
    b.mu = cheb_fit(mus, Nc);
    b.mu_dot = cheb_fit(mudots, Nc);
    b.u = cheb_fit(us, Nc);
    b.u_dot = cheb_fit(udots, Nc);
    for (auto& c : b.u) c = symmetrize(c);
    for (auto& c : b.u_dot) c = symmetrize(c);
    if (grid) *grid = {s, pts, tans};
    return b;
}

Interval mu_range(const ChebBranch& b)
{
    ChebSeries<Interval> m(b.mu.begin(), b.mu.end());
    Interval clen = cheb_eval(m, Interval(-1.0, 1.0));
    Interval spread(0.0);
    for (size_t k = 1; k < b.mu.size(); ++k) spread += Interval(2.0) * iabs(Interval(b.mu[k]));
    Interval coarse = Interval(b.mu[0]) + Interval(-spread.hi, spread.hi);
    return {std::max(clen.lo, coarse.lo), std::min(clen.hi, coarse.hi)};
}

Interval tail_bound_LNK(const ChebBranch& b, LnkMode mode)
{
    if (mode == LnkMode::conservative) return tail_bound_LN(b.params.N, b.params.d, mu_range(b));
    Interval best = tail_bound_LN(b.params.N, b.params.d, Interval(b.mu[0]));
    for (size_t k = 1; k < b.mu.size(); ++k) best = imin(best, tail_bound_LN(b.params.N, b.params.d, Interval(b.mu[k])));
    return best;
}

BranchInverse build_B(const ChebBranch& b, LnkMode mode)
{
    const ModelParams& p = b.params;
    const int M = std::max(b.n_fft / 2, 1);
    std::vector<CMatrix> inv;
    for (double s : cheb_nodes(M)) {
        CMatrix D = bordered_jacobian(b.at(s), b.tangent_at(s), p);
        Eigen::PartialPivLU<CMatrix> lu(D);
        if (!(lu.rcond() > 1e-14)) throw NumericsError("bordered block is numerically singular");
        inv.push_back(lu.inverse());
    }
    BranchInverse B;
    B.BN = cheb_fit(inv, b.Nc);
    B.mode = mode;
    B.LNK = tail_bound_LNK(b, mode);

    // Each tail entry is 1/(c + delta(s)) with |c| = |lambda_n(mu_0)| >= L_N(mu_0);
    // Neumann series in the Chebyshev algebra, valid while |delta|_con < L_N(mu_0).
    Interval delta(0.0);
    for (size_t k = 1; k < b.mu.size(); ++k) delta += Interval(2.0) * iabs(Interval(b.mu[k]));
    Interval L0 = tail_bound_LN(p.N, p.d, Interval(b.mu[0]));
    Interval gap = L0 - delta;
    if (!(gap.lo > 0)) throw IntervalError("branch tail not uniformly invertible; shorten s_fix or increase N");
    B.tail_norm = Interval(1.0) / gap;
    return B;
}

IntervalVector bordered_weights(const OrbitTable& t, double nu)
{
    IntervalVector w(1 + t.size());
    w[0] = Interval(1.0);
    w.tail(t.size()) = iweights(t, nu);
    return w;
}

namespace {

CIntervalMatrix to_imatrix(const CMatrix& M)
{
    CIntervalMatrix out(M.rows(), M.cols());
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        for (Eigen::Index k = 0; k < M.cols(); ++k) out(i, k) = CInterval(M(i, k));
    return out;
}

Interval wnorm(const CIntervalVector& x, const IntervalVector& w)
{
    Interval s(0.0);
    for (Eigen::Index i = 0; i < x.size(); ++i) s += w[i] * iabs(x[i]);
    return s;
}

CIntervalMatrix identity_minus(const CIntervalMatrix& A)
{
    CIntervalMatrix R(A.rows(), A.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index k = 0; k < A.cols(); ++k) R(i, k) = (i == k ? CInterval(1.0) : CInterval(0.0)) - A(i, k);
    return R;
}

// sum_i w_i sum_n |B(i, 1+n)| phi_n
Interval abs_apply_phi(const CIntervalMatrix& B, const IntervalVector& phi, const IntervalVector& w)
{
    Interval s(0.0);
    for (Eigen::Index i = 0; i < B.rows(); ++i) {
        Interval row(0.0);
        for (Eigen::Index n = 0; n < phi.size(); ++n) row += iabs(B(i, 1 + n)) * phi[n];
        s += w[i] * row;
    }
    return s;
}

CIntervalVector bordered_vector(const ISequence& f, int N)
{
    ISequence head = project(f, N);
    CIntervalVector e(1 + head.size());
    e[0] = CInterval(0.0);
    e.tail(head.size()) = head.coeffs;
    return e;
}

void require_finite(const BranchBounds& b)
{
    for (const Interval* x : {&b.Y0, &b.Z0, &b.Z1, &b.Z2_base, &b.Z2_slope})
        if (!x->is_finite()) throw IntervalError("branch bound is not finite");
}

} // namespace

BranchBounds branch_bounds(const ChebBranch& b, const BranchInverse& B, PhiMode mode)
{
    const ModelParams& p = b.params;
    const int N = p.N;
    TablePtr tN = table_for(p.j, N);
    const Eigen::Index n = tN->size();
    const IntervalVector W = bordered_weights(*tN, p.nu);
    const Interval tau = B.tail_norm;

    ChebSeries<ISequence> ub, ud;
    ChebSeries<Interval> mub;
    for (const auto& c : b.u) ub.push_back(cast<CInterval>(c));
    for (const auto& c : b.u_dot) ud.push_back(cast<CInterval>(c));
    for (double m : b.mu) mub.push_back(Interval(m));
    ChebSeries<CIntervalMatrix> BI;
    for (const auto& m : B.BN) BI.push_back(to_imatrix(m));

    ModelParams p0 = p;
    p0.mu = 0.0;
    IntervalVector lam0 = isymbol_values(*tN, p0);
    auto conv = [](const ISequence& x, const ISequence& y) { return convolve(x, y); };
    auto scale = [](const Interval& a, const ISequence& s) { return a * s; };

    ChebSeries<ISequence> u2 = cheb_product(ub, ub, conv);
    ChebSeries<ISequence> u3 = cheb_product(u2, ub, conv);
    ChebSeries<ISequence> muu = cheb_product(mub, ub, scale);

    // f(mu(s), u(s)) up to degree 3 Nc on I^{3N}
    ChebSeries<ISequence> f;
    for (size_t k = 0; k < u3.size(); ++k) {
        ISequence acc = u3[k];
        if (k < u2.size()) acc = acc - CInterval(p.gamma) * u2[k];
        if (k < muu.size()) acc = acc + muu[k];
        if (k < ub.size()) {
            ISequence lin = ub[k];
            for (Eigen::Index i = 0; i < n; ++i) lin[i] = CInterval(lam0[i]) * lin[i];
            acc = acc + lin;
        }
        f.push_back(acc);
    }

    BranchBounds out;
    {
        ChebSeries<CIntervalVector> e;
        for (const auto& fk : f) e.push_back(bordered_vector(fk, N));
        auto BE = cheb_product(BI, e, [](const CIntervalMatrix& A, const CIntervalVector& x) { return imatvec(A, x); });
        std::vector<Interval> fin, tail;
        for (const auto& x : BE) fin.push_back(wnorm(x, W));
        for (const auto& fk : f) tail.push_back(norm_l1nu(shell_part(fk, N), p.nu));
        out.Y0_tail = tau * cheb_norm(tail);
        out.Y0 = cheb_norm(fin) + out.Y0_tail;
    }

    // v(s) = -2 gamma u(s) + 3 u(s)^2, degree 2 Nc on I^{2N}
    ChebSeries<ISequence> v;
    for (size_t k = 0; k < u2.size(); ++k) {
        ISequence acc = CInterval(3.0) * u2[k];
        if (k < ub.size()) acc = acc - CInterval(2.0 * p.gamma) * ub[k];
        v.push_back(acc);
    }

    {
        ChebSeries<CIntervalMatrix> DF;
        for (size_t k = 0; k < v.size(); ++k) {
            CIntervalMatrix D = CIntervalMatrix::Constant(1 + n, 1 + n, CInterval(0.0));
            D.bottomRightCorner(n, n) = conv_operator(project(v[k], N), tN).M;
            if (k < ub.size()) {
                D(0, 0) = CInterval(b.mu_dot[k]);
                for (Eigen::Index i = 0; i < n; ++i) {
                    D(0, 1 + i) = conj(ud[k][i]);
                    D(1 + i, 0) = ub[k][i];
                    D(1 + i, 1 + i) += CInterval(mub[k]) + (k == 0 ? CInterval(lam0[i]) : CInterval(0.0));
                }
            }
            DF.push_back(D);
        }
        auto BD = cheb_product(BI, DF, [](const CIntervalMatrix& A, const CIntervalMatrix& X) { return imatmul(A, X); });
        std::vector<Interval> norms;
        for (size_t k = 0; k < BD.size(); ++k) {
            CIntervalMatrix R = k == 0 ? identity_minus(BD[k]) : CIntervalMatrix(-BD[k]);
            norms.push_back(weighted_op_norm(R, W, W));
        }
        out.Z0 = cheb_norm(norms);
    }

    {
        TablePtr t2 = v[0].table;
        ISequence vabs(t2, p.d);
        for (Eigen::Index i = 0; i < t2->size(); ++i) {
            std::vector<Interval> c;
            for (const auto& vk : v) c.push_back(iabs(vk[i]));
            vabs[i] = CInterval(cheb_norm(c));
        }
        IntervalVector phi = phi_vector(vabs, N, p.nu, mode);
        std::vector<Interval> fin, vn;
        for (const auto& Bk : BI) fin.push_back(abs_apply_phi(Bk, phi, W));
        for (const auto& vk : v) vn.push_back(norm_l1nu(vk, p.nu));
        out.Z1_tail = tau * cheb_norm(vn);
        out.Z1 = cheb_norm(fin) + out.Z1_tail;
    }

    {
        std::vector<Interval> bn, qn;
        for (const auto& Bk : BI) bn.push_back(weighted_op_norm(Bk, W, W));
        for (size_t k = 0; k < ub.size(); ++k) {
            ISequence q = CInterval(6.0) * ub[k];
            if (k == 0) q[0] = q[0] - CInterval(2.0 * p.gamma);
            qn.push_back(norm_l1nu(q, p.nu));
        }
        Interval K = cheb_norm(bn) + tau;
        out.Z2_base = K * (Interval(1.0) + cheb_norm(qn));
        out.Z2_slope = Interval(3.0) * K;
    }
    require_finite(out);
    return out;
}

BranchBounds pointwise_bounds(const ChebBranch& b, const BranchInverse& B, double s, PhiMode mode)
{
    const int N = b.params.N;
    BranchPoint w = b.at(s);
    ModelParams p = at_mu(b.params, w.mu);
    TablePtr tN = table_for(p.j, N);
    const IntervalVector W = bordered_weights(*tN, p.nu);
    CIntervalMatrix Bs = to_imatrix(cheb_eval(B.BN, s));
    Interval inv_L = Interval(1.0) / tail_bound_LN(p);
    ISequence u = cast<CInterval>(w.u);

    BranchBounds out;
    ISequence f = apply_f(u, p);
    out.Y0_tail = inv_L * norm_l1nu(shell_part(f, N), p.nu);
    out.Y0 = wnorm(imatvec(Bs, bordered_vector(f, N)), W) + out.Y0_tail;

    CIntervalMatrix D = to_imatrix(bordered_jacobian(w, b.tangent_at(s), p));
    out.Z0 = weighted_op_norm(identity_minus(imatmul(Bs, D)), W, W);

    ISequence v = dg_potential(u, p);
    IntervalVector phi = phi_vector(v, N, p.nu, mode);
    out.Z1_tail = inv_L * norm_l1nu(v, p.nu);
    out.Z1 = abs_apply_phi(Bs, phi, W) + out.Z1_tail;

    ISequence q = CInterval(6.0) * u;
    q[0] = q[0] - CInterval(2.0 * p.gamma);
    Interval K = weighted_op_norm(Bs, W, W) + inv_L;
    out.Z2_base = K * (Interval(1.0) + norm_l1nu(q, p.nu));
    out.Z2_slope = Interval(3.0) * K;
    return out;
}

BranchCertificate prove_branch(const ChebBranch& b, const BranchProofOptions& opt)
{
    BranchInverse B = build_B(b, opt.lnk_mode);
    BranchBounds bb = branch_bounds(b, B, opt.phi_mode);
    BranchCertificate c;
    c.params = b.params;
    c.Nc = b.Nc;
    c.s_fix = b.s_fix;
    c.Y0s = bb.Y0;
    c.Z0s = bb.Z0;
    c.Z1s = bb.Z1;
    c.Z2s_base = bb.Z2_base;
    c.Z2s_slope = bb.Z2_slope;
    c.LNK = B.LNK;
    c.tail_norm = B.tail_norm;
    c.lnk_mode = opt.lnk_mode;
    c.phi_mode = opt.phi_mode;
    std::optional<double> r = opt.r0;
    if (!r) r = scan_radius(c.Y0s, c.Z0s, c.Z1s, c.Z2s_base, c.Z2s_slope, opt.r_min, opt.r_max);
    c.r0 = r ? *r : std::max(c.Y0s.hi, 1e-16);
    RadiiCheck rc = c.recheck();
    c.success = rc.success;
    c.margin1 = rc.margin1;
    c.margin2 = rc.margin2;
    c.violated = rc.violated;
    return c;
}

} // namespace hexcap
