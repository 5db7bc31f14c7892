#include <doctest.h>

#include <random>

#include "hexcap/geom.hpp"
#include "hexcap/model.hpp"

using namespace hexcap;

namespace {

const double s3 = std::sqrt(3.0);

const Sequence& solution(int j)
{
    static const Sequence u3 = [] {
        ModelParams p{3, 8, 5.0, 0.3, 2.1, 1.2};
        auto r = find_solution(p, 0, 30, {1e-11, 60, 1.0, 0.5});
        REQUIRE(r);
        return r->newton.u;
    }();
    static const Sequence u6 = [] {
        ModelParams p{6, 8, 5.0, 0.3, 2.1, 1.2};
        auto r = find_solution(p, 0, 30, {1e-11, 60, 1.0, 0.5});
        REQUIRE(r);
        return r->newton.u;
    }();
    return j == 3 ? u3 : u6;
}

double mc_area(const Domain& dom, int n, std::mt19937_64& rng)
{
    auto [lo, hi] = bounding_box(dom);
    std::uniform_real_distribution<double> U1(lo[0], hi[0]), U2(lo[1], hi[1]);
    int in = 0;
    for (int i = 0; i < n; ++i) in += contains(dom, Eigen::Vector2d(U1(rng), U2(rng)));
    return (hi - lo).prod() * in / n;
}

} // namespace

TEST_SUITE("geom") {

TEST_CASE("membership examples")
{
    const double d = 3.0;
    CHECK(contains({DomainKind::parallelogram0, d}, Eigen::Vector2d(0, 0)));
    CHECK(contains({DomainKind::delta1, d}, Eigen::Vector2d(2 * d / 3, 2 * d / s3)));
    CHECK_FALSE(contains({DomainKind::delta1, d}, Eigen::Vector2d(2 * d + 1e-9, 0)));
    CHECK(contains({DomainKind::delta1, d}, Eigen::Vector2d(2 * d, 0)));
    CHECK(contains({DomainKind::hexagon0, d}, Eigen::Vector2d(0, 0)));
    CHECK_FALSE(contains({DomainKind::delta2, d}, Eigen::Vector2d(1, 1)));
    CHECK(domain_kind_from_string("delta2") == DomainKind::delta2);
    CHECK_THROWS_AS(domain_kind_from_string("square"), std::invalid_argument);
}

TEST_CASE("centroids")
{
    Eigen::Vector2d c1 = centroid({DomainKind::delta1, 3.0});
    CHECK(c1[0] == doctest::Approx(2.0));
    CHECK(c1[1] == doctest::Approx(2 * s3));
    CHECK((centroid({DomainKind::delta2, 3.0}) + c1).norm() < 1e-15);
    CHECK(centroid({DomainKind::hexagon0, 3.0}).norm() == 0.0);
    CHECK_THROWS_AS(centroid({DomainKind::parallelogram0, 3.0}), std::invalid_argument);

    // the centroid is the mean of the vertices
    const double d = 3.0;
    Eigen::Vector2d v = (Eigen::Vector2d(-2 * d, 2 * d / s3) + Eigen::Vector2d(2 * d, -2 * d / s3) +
                         Eigen::Vector2d(2 * d, 6 * d / s3)) / 3.0;
    CHECK((v - c1).norm() < 1e-14);
}

TEST_CASE("areas")
{
    std::mt19937_64 rng(3);
    const double d = 2.0;
    const int n = 200000;
    double big = mc_area({DomainKind::parallelogram2d, d}, n, rng);
    double t1 = mc_area({DomainKind::delta1, d}, n, rng);
    double t2 = mc_area({DomainKind::delta2, d}, n, rng);
    CHECK(big == doctest::Approx(32 * d * d / s3).epsilon(0.01));
    CHECK(t1 + t2 == doctest::Approx(big).epsilon(0.01));
    CHECK(mc_area({DomainKind::parallelogram0, d}, n, rng) == doctest::Approx(8 * d * d / s3).epsilon(0.01));
    CHECK(mc_area({DomainKind::hexagon0, d}, n, rng) == doctest::Approx(24 * d * d / s3).epsilon(0.01));
}

TEST_CASE("hexagon0 is the regular hexagon of apothem 2d")
{
    std::mt19937_64 rng(4);
    const double d = 5.0;
    std::uniform_real_distribution<double> U(-3 * d, 3 * d);
    int mismatch = 0;
    for (int i = 0; i < 100000; ++i) {
        Eigen::Vector2d x(U(rng), U(rng));
        bool in = true;
        for (int k = 0; k < 3; ++k) {
            Eigen::Vector2d n(std::cos(M_PI * k / 3), std::sin(M_PI * k / 3));
            in = in && std::abs(n.dot(x)) <= 2 * d;
        }
        mismatch += in != contains({DomainKind::hexagon0, d}, x);
    }
    CHECK(mismatch == 0);
}

TEST_CASE("sample_grid")
{
    Field one = [](const Eigen::Vector2d&) { return 1.0; };
    auto corners = sample_grid(one, {DomainKind::parallelogram0, 5.0}, 2);
    CHECK(corners.size() == 2);  // only the two box corners on the sheared edges
    for (const auto& r : corners) CHECK(r.value == 1.0);

    for (DomainKind k : {DomainKind::parallelogram0, DomainKind::parallelogram2d, DomainKind::delta1,
                         DomainKind::delta2, DomainKind::hexagon0}) {
        Domain dom{k, 5.0};
        auto rows = sample_grid(one, dom, 64);
        CHECK(rows.size() < 64u * 64u);
        CHECK(rows.size() > 64u * 64u / 4);
        for (const auto& r : rows) CHECK(contains(dom, Eigen::Vector2d(r.x1, r.x2)));
        for (size_t i = 1; i < rows.size(); ++i)
            CHECK((rows[i].x2 > rows[i - 1].x2 || (rows[i].x2 == rows[i - 1].x2 && rows[i].x1 > rows[i - 1].x1)));
    }
    CHECK_THROWS_AS(sample_grid(one, {DomainKind::delta1, 5.0}, 1), std::invalid_argument);

    const Sequence& u = solution(6);
    auto rows = sample_grid(u, {DomainKind::hexagon0, u.d}, 16);
    auto again = sample_grid(u, {DomainKind::hexagon0, u.d}, 16);
    REQUIRE(rows.size() == again.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].value == again[i].value);
        CHECK(rows[i].value == evaluate(u, Eigen::Vector2d(rows[i].x1, rows[i].x2)));
    }
}

TEST_CASE("physical group matrices are orthogonal")
{
    for (int j : {3, 6}) {
        auto mats = physical_group(build_group(j));
        CHECK(mats.size() == static_cast<size_t>(2 * j));
        for (const auto& A : mats) CHECK((A.transpose() * A - Eigen::Matrix2d::Identity()).norm() < 1e-14);
    }
}

TEST_CASE("tiling of constant and computed solutions")
{
    Field c = [](const Eigen::Vector2d&) { return 0.7; };
    for (int j : {3, 6}) {
        TilingReport r = verify_tiling(c, j, 5.0, 0.7, 200, 1e-12);
        CHECK(r.ok);
        CHECK(r.max_violation == 0.0);
    }
    for (int j : {3, 6}) {
        const Sequence& u = solution(j);
        TilingReport r = verify_tiling(u, 1000, 1e-9);
        CHECK(r.ok);
        CHECK(r.max_violation <= 1e-9 * r.scale);
        CHECK(r.checks.size() == (j == 3 ? 2u : 3u));
    }
}

TEST_CASE("tiling negative control")
{
    for (int j : {3, 6}) {
        const Sequence& u = solution(j);
        // perturb a single member of the (1, 0) orbit and its conjugate
        auto g = unfold(u, u.N());
        const int M = u.N();
        g(1 + M, 0 + M) += 0.1;
        g(-1 + M, 0 + M) += 0.1;
        Field broken = [&](const Eigen::Vector2d& x) {
            double s = 0;
            for (int a = -M; a <= M; ++a)
                for (int b = -M; b <= M; ++b) {
                    Complex z = g(a + M, b + M);
                    if (z == Complex(0.0)) continue;
                    s += (z * std::exp(Complex(0, 1) * wave_vector({a, b}, u.d).dot(x))).real();
                }
            return s;
        };
        TilingReport r = verify_tiling(broken, j, u.d, norm_float(u, 1.0), 1000, 1e-9);
        CHECK_FALSE(r.ok);
        CHECK(r.max_violation > 1e3 * r.tol);
    }
}

}
