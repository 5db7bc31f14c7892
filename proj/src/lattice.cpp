#include "hexcap/lattice.hpp"

#include <algorithm>
#include <stdexcept>

#include <boost/rational.hpp>

namespace hexcap {

namespace {

using Q = boost::rational<long>;

// a + b sqrt(3)
struct QS3 {
    Q a, b;
};

QS3 operator+(QS3 x, QS3 y) { return {x.a + y.a, x.b + y.b}; }
QS3 operator*(QS3 x, QS3 y) { return {x.a * y.a + Q(3) * x.b * y.b, x.a * y.b + x.b * y.a}; }

using M2 = std::array<std::array<QS3, 2>, 2>;

M2 make(QS3 a, QS3 b, QS3 c, QS3 d)
{
    M2 m;
    m[0][0] = a;
    m[0][1] = b;
    m[1][0] = c;
    m[1][1] = d;
    return m;
}

M2 mul(const M2& x, const M2& y)
{
    M2 r{};
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k)
            r[i][k] = x[i][0] * y[0][k] + x[i][1] * y[1][k];
    return r;
}

Mat2i to_integer(const M2& m)
{
    Mat2i out;
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) {
            const QS3& e = m[i][k];
            if (e.b != Q(0) || e.a.denominator() != 1)
                throw std::logic_error("group matrix is not integral in lattice coordinates");
            out(i, k) = static_cast<int>(e.a.numerator());
        }
    return out;
}

// L^{-1} A L with L = [[1,-1/2],[0,sqrt3/2]]
Mat2i lattice_matrix(const M2& A)
{
    const QS3 zero{Q(0), Q(0)}, one{Q(1), Q(0)};
    M2 L = make(one, {Q(-1, 2), Q(0)}, zero, {Q(0), Q(1, 2)});
    M2 Linv = make(one, {Q(0), Q(1, 3)}, zero, {Q(0), Q(2, 3)});
    return to_integer(mul(Linv, mul(A, L)));
}

bool lex_greater(const Index2& a, const Index2& b)
{
    return a[0] != b[0] ? a[0] > b[0] : a[1] > b[1];
}

} // namespace

GroupSpec build_group(int j)
{
    if (j != 3 && j != 6) throw std::invalid_argument("unsupported dihedral order (need 3 or 6)");
    const QS3 zero{Q(0), Q(0)};
    // rotation by 2 pi / j
    QS3 c = j == 6 ? QS3{Q(1, 2), Q(0)} : QS3{Q(-1, 2), Q(0)};
    QS3 s{Q(0), Q(1, 2)};
    QS3 ms{Q(0), Q(-1, 2)};
    M2 R = make(c, ms, s, c);
    M2 S = make({Q(1), Q(0)}, zero, zero, {Q(-1), Q(0)});

    GroupSpec g;
    g.j = j;
    g.rotation = lattice_matrix(R);
    g.reflection = lattice_matrix(S);

    Mat2i r = Mat2i::Identity();
    for (int k = 0; k < j; ++k) {
        g.elements.push_back(r);
        r = g.rotation * r;
    }
    for (int k = 0; k < j; ++k) g.elements.push_back(g.reflection * g.elements[k]);

    Mat2i rj = Mat2i::Identity();
    for (int k = 0; k < j; ++k) rj = g.rotation * rj;
    Mat2i rinv = g.elements[j - 1];
    if (rj != Mat2i::Identity() || g.reflection * g.reflection != Mat2i::Identity() ||
        g.rotation * g.reflection != g.reflection * rinv)
        throw std::logic_error("dihedral presentation violated");
    return g;
}

std::vector<Index2> orbit(const GroupSpec& g, const Index2& n)
{
    std::vector<Index2> out;
    for (const auto& M : g.elements) {
        Index2 k = apply(M, n);
        if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
    }
    return out;
}

Index2 representative(const GroupSpec& g, const Index2& n)
{
    Index2 best = n;
    for (const auto& M : g.elements) {
        Index2 k = apply(M, n);
        if (lex_greater(k, best)) best = k;
    }
    return best;
}

OrbitTable::OrbitTable(const GroupSpec& g, int N) : group_(g), N_(N)
{
    if (N < 0) throw std::invalid_argument("truncation N must be non-negative");
    const int w = 2 * N + 1;
    lookup_.assign(static_cast<size_t>(w) * w, -1);

    for (int a = -N; a <= N; ++a)
        for (int b = -N; b <= N; ++b) {
            Index2 n{a, b};
            if (representative(g, n) != n) continue;
            auto orb = orbit(g, n);
            bool inside = std::all_of(orb.begin(), orb.end(), [N](const Index2& k) {
                return std::abs(k[0]) <= N && std::abs(k[1]) <= N;
            });
            if (!inside) continue;
            reps_.push_back(n);
            std::sort(orb.begin(), orb.end(), lex_greater);
            orbits_.push_back(std::move(orb));
        }

    std::vector<size_t> order(reps_.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto key = [this](size_t i) {
        const Index2& n = reps_[i];
        return std::array<int, 3>{std::max(std::abs(n[0]), std::abs(n[1])), n[0], n[1]};
    };
    std::sort(order.begin(), order.end(), [&](size_t x, size_t y) { return key(x) < key(y); });
    std::vector<Index2> reps;
    std::vector<std::vector<Index2>> orbits;
    for (size_t i : order) {
        reps.push_back(reps_[i]);
        orbits.push_back(std::move(orbits_[i]));
    }
    reps_ = std::move(reps);
    orbits_ = std::move(orbits);

    for (size_t i = 0; i < reps_.size(); ++i)
        for (const auto& k : orbits_[i])
            lookup_[(k[0] + N) * w + (k[1] + N)] = static_cast<Eigen::Index>(i);

    conj_.resize(reps_.size());
    for (size_t i = 0; i < reps_.size(); ++i)
        conj_[i] = position({-reps_[i][0], -reps_[i][1]});
}

Eigen::Index OrbitTable::prefix(int M) const
{
    Eigen::Index c = 0;
    for (const auto& n : reps_)
        if (hex_norm(n) <= M) ++c;
    return c;
}

TablePtr build_orbit_table(const GroupSpec& g, int N) { return std::make_shared<const OrbitTable>(g, N); }

Index2 conjugate_rep(const OrbitTable& t, const Index2& n)
{
    Eigen::Index i = t.position(n);
    if (i < 0 || t.rep(i) != n) throw std::invalid_argument("index is not a retained representative");
    return t.rep(t.conjugate(i));
}

} // namespace hexcap
