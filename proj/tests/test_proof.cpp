#include <doctest.h>

#include <random>

#include "hexcap/proof.hpp"

using namespace hexcap;

namespace {

ModelParams d3_desk_params()
{
    ModelParams p;
    p.j = 3;
    p.N = 12;
    p.d = 5.0;
    p.mu = 0.01;
    p.gamma = 1.6;
    p.nu = 1.38;
    return p;
}

const Sequence& desk_solution()
{
    static const Sequence u = [] {
        auto r = find_solution(d3_desk_params(), 0, 50, {1e-11, 60, 1.0, 0.5});
        REQUIRE(r);
        return r->newton.u;
    }();
    return u;
}

} // namespace

TEST_SUITE("proof") {

TEST_CASE("check_radii examples")
{
    RadiiCheck c = check_radii(Interval(9.64e-6), Interval(2.042e-9), Interval(0.175), Interval(25886.81),
                               Interval(0.0), 3e-5);
    CHECK(c.success);
    CHECK(c.margin1.hi == doctest::Approx(-3.46e-6).epsilon(1e-2));
    CHECK(c.margin2.hi == doctest::Approx(0.9516).epsilon(1e-3));

    CHECK_FALSE(check_radii(Interval(2e-5), Interval(0.0), Interval(0.0), Interval(1.0), Interval(0.0), 1e-5).success);
    RadiiCheck big = check_radii(Interval(1e-9), Interval(0.5), Interval(0.5), Interval(1.0), Interval(0.0), 1e-5);
    CHECK_FALSE(big.success);
    CHECK(big.violated == "both");
    CHECK_THROWS(check_radii(Interval(0.0), Interval(0.0), Interval(0.0), Interval(0.0), Interval(0.0), 0.0));
}

TEST_CASE("check_radii is monotone in the bounds")
{
    const Interval Y(9.64e-6), Z0(2.042e-9), Z1(0.175), Z2(25886.81), S(10.0);
    REQUIRE(check_radii(Y, Z0, Z1, Z2, S, 3e-5).success);
    for (double f : {0.999, 0.9, 0.5, 0.0}) {
        CHECK(check_radii(Interval(Y.hi * f), Z0, Z1, Z2, S, 3e-5).success);
        CHECK(check_radii(Y, Interval(Z0.hi * f), Z1, Z2, S, 3e-5).success);
        CHECK(check_radii(Y, Z0, Interval(Z1.hi * f), Z2, S, 3e-5).success);
        CHECK(check_radii(Y, Z0, Z1, Interval(Z2.hi * f), Interval(S.hi * f), 3e-5).success);
    }
}

TEST_CASE("trivial state")
{
    ModelParams p = d3_desk_params();
    p.N = 4;
    p.gamma = 0;
    p.mu = 0.5;
    Sequence z(table_for(3, 4), 5.0);
    ApproxInverse A = build_approx_inverse(z, p);
    CHECK(bound_Y0(z, A, p).total.contains(0.0));
    CHECK(bound_Z0(z, A, p).contains(0.0));
    CHECK(bound_Z1(z, A, p).total.contains(0.0));
    Z2Bound z2 = bound_Z2(z, A, p);
    CHECK(z2.base.contains(0.0));
    CHECK(z2.slope.contains((Interval(3.0) * (z2.opnorm_A + A.tail_inv_bound)).mid()));
    Certificate c = prove_solution(z, p);
    CHECK(c.success);
}

TEST_CASE("constant state with gamma = 0: Z1 is the tail term only")
{
    ModelParams p = d3_desk_params();
    p.N = 4;
    p.gamma = 0;
    Sequence u(table_for(3, 4), 5.0);
    const double c = 0.25;
    u[0] = c;
    ApproxInverse A = build_approx_inverse(u, p);
    Z1Bound z1 = bound_Z1(u, A, p);
    CHECK(z1.sup_V.contains(0.0));
    CHECK(z1.finite.contains(0.0));
    CHECK(z1.total.contains((Interval(3 * c * c) / A.LN).mid()));
}

TEST_CASE("desk-scale D3 proof")
{
    ModelParams p = d3_desk_params();
    const Sequence& u = desk_solution();
    Certificate c = prove_solution(u, p, {std::nullopt, 1e-6, 1e-2, PhiMode::per_index});
    CHECK(c.success);
    CHECK(c.r0 >= 1e-6);
    CHECK(c.r0 <= 1e-2);
    CHECK(c.Y0.hi < 1e-4);
    CHECK(c.Z0.hi < 1e-6);
    CHECK(c.recheck().success);

    Certificate cu = prove_solution(u, p, {std::nullopt, 1e-6, 1e-2, PhiMode::uniform});
    CHECK(c.Z1.hi <= cu.Z1.hi);

    Certificate bad = prove_solution(Complex(1.5) * u, p);
    CHECK_FALSE(bad.success);
}

TEST_CASE("Z0 reacts to a perturbed inverse")
{
    ModelParams p = d3_desk_params();
    const Sequence& u = desk_solution();
    ApproxInverse A = build_approx_inverse(u, p);
    Interval z0 = bound_Z0(u, A, p);
    A.AN.M(0, 0) += 1e-3;
    Interval z0p = bound_Z0(u, A, p);
    CHECK(z0p.hi > 100 * z0.hi);
    CHECK(z0p.hi > 1e-4);
}

TEST_CASE("Z2 dominates sampled second-order variation")
{
    ModelParams p = d3_desk_params();
    const Sequence& u = desk_solution();
    ApproxInverse A = build_approx_inverse(u, p);
    Z2Bound z2 = bound_Z2(u, A, p);
    IntervalVector w = iweights(*u.table, p.nu);
    auto Dbar = apply_Df(u, p).M;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(-1, 1);
    const double r = 1e-3;
    for (int t = 0; t < 50; ++t) {
        Sequence h(u.table, u.d);
        for (Eigen::Index i = 0; i < h.size(); ++i) h[i] = U(rng);
        h = symmetrize(h);
        h = Complex(r / norm_l1nu(h, p.nu).hi) * h;
        CMatrix M = A.AN.M * (apply_Df(u + h, p).M - Dbar);
        double lhs = weighted_op_norm(M, w, w).lo;
        CHECK(lhs <= ((z2.base + z2.slope * Interval(r)) * Interval(r)).hi);
    }
}

TEST_CASE("Y0 tail shrinks when the same state is padded")
{
    ModelParams p = d3_desk_params();
    const Sequence& u = desk_solution();
    Y0Bound y = bound_Y0(u, build_approx_inverse(u, p), p);
    ModelParams q = p;
    q.N = p.N + 2;
    Sequence up = pad(u, q.N);
    Y0Bound yp = bound_Y0(up, build_approx_inverse(up, q), q);
    CHECK(yp.tail.hi <= y.tail.hi * (1 + 1e-12));
}

TEST_CASE("scan_radius")
{
    const Interval Y(1e-7), Z0(1e-10), Z1(0.3), Zb(100.0), Zs(10.0);
    auto r = scan_radius(Y, Z0, Z1, Zb, Zs);
    REQUIRE(r);
    CHECK(*r >= Y.hi);
    CHECK(check_radii(Y, Z0, Z1, Zb, Zs, *r).success);
    CHECK_FALSE(scan_radius(Interval(1.0), Z0, Z1, Zb, Zs));
}

} // TEST_SUITE
