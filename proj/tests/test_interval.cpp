#include <doctest.h>

#include <random>
#include <thread>

#include "hexcap/interval.hpp"
#include "oracle.hpp"

using namespace hexcap;
using oracle::encloses;
using oracle::exact;
using oracle::Q;
using oracle::Z;

namespace {

double random_double(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> m(-1.0, 1.0);
    std::uniform_int_distribution<int> e(-40, 40);
    return std::ldexp(m(rng), e(rng));
}

Interval random_interval(std::mt19937_64& rng)
{
    double a = random_double(rng), b = random_double(rng);
    if (rng() % 4 == 0) b = a;
    return {std::min(a, b), std::max(a, b)};
}

} // namespace

TEST_SUITE("interval") {

TEST_CASE("oracle: 0.1 + 0.2 encloses the exact sum within 4 ulp")
{
    Interval s = Interval(0.1) + Interval(0.2);
    CHECK(encloses(s, exact(0.1) + exact(0.2)));
    int ulps = 0;
    for (double x = s.lo; x < s.hi; x = std::nextafter(x, 1.0)) ++ulps;
    CHECK(ulps <= 4);
}

TEST_CASE("exact results stay exact")
{
    CHECK(Interval(1.0) + Interval(2.0) == Interval(3.0));
    CHECK(Interval(-1.0, 2.0) * Interval(3.0) == Interval(-3.0, 6.0));
    CHECK(Interval(1.0) / Interval(4.0) == Interval(0.25));
}

TEST_CASE("elementary functions")
{
    CHECK(ipow(Interval(-2.0, 1.0), 2) == Interval(0.0, 4.0));
    CHECK(ipow(Interval(-2.0, 1.0), 3) == Interval(-8.0, 1.0));
    CHECK(isqrt(Interval(4.0, 9.0)) == Interval(2.0, 3.0));
    CHECK(iabs(Interval(-3.0, -1.0)) == Interval(1.0, 3.0));
    CHECK(iabs(Interval(-3.0, 1.0)) == Interval(0.0, 3.0));
    std::vector<Interval> v{Interval(1, 2), Interval(-1, 5), Interval(0, 3)};
    CHECK(imax(v) == Interval(1, 5));
    CHECK(imin(v) == Interval(-1, 2));
}

TEST_CASE("errors")
{
    CHECK_THROWS_AS(Interval(1.0) / Interval(-1.0, 1.0), IntervalError);
    CHECK_THROWS_AS(isqrt(Interval(-1.0, 4.0)), IntervalError);
    CHECK_THROWS_AS(Interval(2.0, 1.0), IntervalError);
    CHECK_THROWS_AS(Interval(std::nan(""), 1.0), IntervalError);
}

TEST_CASE("pi enclosure against 20 decimals")
{
    const Z ten20("100000000000000000000");
    Q below(Z("314159265358979323846"), ten20), above(Z("314159265358979323847"), ten20);
    Interval p = ipi();
    CHECK(exact(p.lo) <= below);
    CHECK(exact(p.hi) >= above);
}

TEST_CASE("oracle: random containment for + - * / sqrt")
{
    std::mt19937_64 rng(11);
    int failures = 0;
    for (int t = 0; t < 20000; ++t) {
        Interval a = random_interval(rng), b = random_interval(rng);
        // endpoints are the extreme members for these monotone operations
        for (double x : {a.lo, a.hi})
            for (double y : {b.lo, b.hi}) {
                Q qx = exact(x), qy = exact(y);
                failures += !encloses(a + b, qx + qy);
                failures += !encloses(a - b, qx - qy);
                failures += !encloses(a * b, qx * qy);
                if (!b.contains_zero()) failures += !encloses(a / b, qx / qy);
            }
        Interval c = iabs(a);
        Interval r = isqrt(c);
        failures += !(exact(r.lo) * exact(r.lo) <= exact(c.lo) && exact(r.hi) * exact(r.hi) >= exact(c.hi));
    }
    CHECK(failures == 0);
}

TEST_CASE("inclusion monotonicity")
{
    std::mt19937_64 rng(5);
    for (int t = 0; t < 2000; ++t) {
        Interval a = random_interval(rng), b = random_interval(rng);
        Interval A = hull(a, random_interval(rng)), B = hull(b, random_interval(rng));
        auto sub = [](const Interval& x, const Interval& y) { return y.lo <= x.lo && x.hi <= y.hi; };
        CHECK(sub(a + b, A + B));
        CHECK(sub(a * b, A * B));
        CHECK(sub(a - b, A - B));
    }
}

TEST_CASE("results do not depend on the thread")
{
    std::mt19937_64 rng(3);
    std::vector<Interval> a(1000), b(1000);
    for (int i = 0; i < 1000; ++i) {
        a[i] = random_interval(rng);
        b[i] = random_interval(rng);
    }
    auto run = [&](std::vector<Interval>& out) {
        out.resize(a.size());
        for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i] + a[i] - b[i];
    };
    std::vector<Interval> r0, r1, r2;
    run(r0);
    std::thread t1([&] { run(r1); }), t2([&] { run(r2); });
    t1.join();
    t2.join();
    CHECK(r0 == r1);
    CHECK(r0 == r2);
}

TEST_CASE("complex intervals")
{
    CInterval z(Interval(1.0), Interval(2.0)), w(Interval(3.0), Interval(-1.0));
    CInterval p = z * w;
    CHECK(p.re == Interval(5.0));
    CHECK(p.im == Interval(5.0));
    CHECK(conj(z).im == Interval(-2.0));
    Interval m = iabs(CInterval(Interval(3.0), Interval(4.0)));
    CHECK(m.contains(5.0));
    CHECK(m.width() < 1e-14);
}

TEST_CASE("matrix products: identity, zero and a rational oracle")
{
    IntervalVector v(3);
    v << Interval(0.1), Interval(-2.5), Interval(1e-3);
    IntervalMatrix I = IntervalMatrix::Identity(3, 3);
    IntervalVector Iv = imatvec(I, v);
    for (int i = 0; i < 3; ++i) CHECK(Iv[i] == v[i]);
    IntervalVector Zv = imatvec(IntervalMatrix::Constant(3, 3, Interval(0.0)), v);
    for (int i = 0; i < 3; ++i) CHECK(Zv[i] == Interval(0.0));

    std::mt19937_64 rng(9);
    for (int t = 0; t < 50; ++t) {
        IntervalMatrix M(3, 3);
        for (int i = 0; i < 3; ++i) {
            v[i] = Interval(random_double(rng));
            for (int k = 0; k < 3; ++k) M(i, k) = Interval(random_double(rng));
        }
        IntervalVector r = imatvec(M, v);
        for (int i = 0; i < 3; ++i) {
            Q s = 0;
            for (int k = 0; k < 3; ++k) s += exact(M(i, k).lo) * exact(v[k].lo);
            CHECK(encloses(r[i], s));
        }
    }
    CHECK_THROWS(imatvec(IntervalMatrix(2, 3), IntervalVector(2)));
    CHECK_THROWS(imatmul(IntervalMatrix(2, 3), IntervalMatrix(2, 3)));
}

TEST_CASE("hex round trip")
{
    for (double x : {0.1, -3.5e-300, 1e300, 0.0, 5e-324}) CHECK(from_hex(to_hex(x)) == x);
    CHECK_THROWS(from_hex("0x1.8p+1junk"));
}

} // TEST_SUITE
