#include "hexcap/geom.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "hexcap/parallel.hpp"

namespace hexcap {

namespace {

const double kS3 = std::sqrt(3.0);

// (x1, x2) with x1/sqrt3 + lo <= x2 <= x1/sqrt3 + hi and |x1| <= w
bool sheared(const Eigen::Vector2d& x, double w, double lo, double hi)
{
    double t = x[0] / kS3;
    return std::abs(x[0]) <= w && x[1] >= t + lo && x[1] <= t + hi;
}

Eigen::Matrix2d rotation(double theta)
{
    Eigen::Matrix2d R;
    R << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    return R;
}

bool in_hexagon(const Eigen::Vector2d& x, double d)
{
    const Eigen::Vector2d shift(-d, d / kS3);
    for (int k = 0; k < 3; ++k) {
        Eigen::Vector2d y = rotation(-2.0 * M_PI * k / 3.0) * x - shift;
        // slack for the rotated boundary
        if (sheared(y, d * (1 + 1e-14), -2 * d / kS3 - 1e-14 * d, 2 * d / kS3 + 1e-14 * d)) return true;
    }
    return false;
}

Eigen::Matrix2d lattice_basis()
{
    Eigen::Matrix2d L;
    L << 1.0, -0.5, 0.0, kS3 / 2.0;
    return L;
}

} // namespace

const char* to_string(DomainKind k)
{
    switch (k) {
    case DomainKind::parallelogram0: return "parallelogram0";
    case DomainKind::parallelogram2d: return "parallelogram2d";
    case DomainKind::delta1: return "delta1";
    case DomainKind::delta2: return "delta2";
    case DomainKind::hexagon0: return "hexagon0";
    }
    return "?";
}

DomainKind domain_kind_from_string(const std::string& s)
{
    for (DomainKind k : {DomainKind::parallelogram0, DomainKind::parallelogram2d, DomainKind::delta1,
                         DomainKind::delta2, DomainKind::hexagon0})
        if (s == to_string(k)) return k;
    throw std::invalid_argument("unknown domain: " + s);
}

bool contains(const Domain& dom, const Eigen::Vector2d& x)
{
    const double d = dom.d;
    switch (dom.kind) {
    case DomainKind::parallelogram0: return sheared(x, d, -2 * d / kS3, 2 * d / kS3);
    case DomainKind::parallelogram2d: return sheared(x, 2 * d, -4 * d / kS3, 4 * d / kS3);
    case DomainKind::delta1:
        return std::abs(x[0]) <= 2 * d && x[1] >= -x[0] / kS3 && x[1] <= x[0] / kS3 + 4 * d / kS3;
    case DomainKind::delta2:
        return std::abs(x[0]) <= 2 * d && x[1] >= x[0] / kS3 - 4 * d / kS3 && x[1] <= -x[0] / kS3;
    case DomainKind::hexagon0: return in_hexagon(x, d);
    }
    return false;
}

Eigen::Vector2d centroid(const Domain& dom)
{
    switch (dom.kind) {
    case DomainKind::delta1: return {2 * dom.d / 3, 2 * dom.d / kS3};
    case DomainKind::delta2: return {-2 * dom.d / 3, -2 * dom.d / kS3};
    case DomainKind::hexagon0: return {0.0, 0.0};
    default: throw std::invalid_argument("centroid is defined for delta1, delta2 and hexagon0 only");
    }
}

std::pair<Eigen::Vector2d, Eigen::Vector2d> bounding_box(const Domain& dom)
{
    const double d = dom.d;
    switch (dom.kind) {
    case DomainKind::parallelogram0: return {{-d, -3 * d / kS3}, {d, 3 * d / kS3}};
    case DomainKind::parallelogram2d: return {{-2 * d, -6 * d / kS3}, {2 * d, 6 * d / kS3}};
    case DomainKind::delta1: return {{-2 * d, -2 * d / kS3}, {2 * d, 6 * d / kS3}};
    case DomainKind::delta2: return {{-2 * d, -6 * d / kS3}, {2 * d, 2 * d / kS3}};
    case DomainKind::hexagon0: return {{-2 * d, -4 * d / kS3}, {2 * d, 4 * d / kS3}};
    }
    throw std::invalid_argument("unknown domain");
}

std::vector<Eigen::Matrix2d> physical_group(const GroupSpec& g)
{
    const Eigen::Matrix2d L = lattice_basis(), Li = L.inverse();
    std::vector<Eigen::Matrix2d> out;
    for (const auto& G : g.elements) out.push_back(L * G.cast<double>() * Li);
    return out;
}

TilingReport verify_tiling(const Field& u, int j, double d, double scale, int samples, double tol, unsigned long seed)
{
    if (samples < 1) throw std::invalid_argument("need at least one sample");
    TilingReport rep;
    rep.j = j;
    rep.samples = samples;
    rep.scale = scale;
    rep.tol = tol * scale;
    const auto mats = physical_group(build_group(j));
    std::mt19937_64 rng(seed);

    auto draw = [&](const Domain& dom) {
        auto [lo, hi] = bounding_box(dom);
        std::uniform_real_distribution<double> U1(lo[0], hi[0]), U2(lo[1], hi[1]);
        std::vector<Eigen::Vector2d> pts;
        while (static_cast<int>(pts.size()) < samples) {
            Eigen::Vector2d x(U1(rng), U2(rng));
            if (contains(dom, x)) pts.push_back(x);
        }
        return pts;
    };
    auto run = [&](const std::string& name, const std::vector<Eigen::Vector2d>& pts,
                   const std::function<double(const Eigen::Vector2d&)>& defect) {
        std::vector<double> v(pts.size());
        parallel_for(static_cast<std::ptrdiff_t>(pts.size()), [&](std::ptrdiff_t i) { v[i] = defect(pts[i]); });
        double m = 0;
        for (double x : v) m = std::max(m, x);
        rep.checks.push_back({name, m});
        rep.max_violation = std::max(rep.max_violation, m);
    };

    if (j == 3) {
        for (DomainKind k : {DomainKind::delta1, DomainKind::delta2}) {
            Domain dom{k, d};
            const Eigen::Vector2d c = centroid(dom);
            run(std::string("D3 about centroid of ") + to_string(k), draw(dom), [&](const Eigen::Vector2d& x) {
                double ux = u(x), m = 0;
                for (const auto& A : mats) m = std::max(m, std::abs(u(A * (x - c) + c) - ux));
                return m;
            });
        }
    } else if (j == 6) {
        Domain hex{DomainKind::hexagon0, d};
        auto pts = draw(hex);
        run("D6 about the origin", pts, [&](const Eigen::Vector2d& x) {
            double ux = u(x), m = 0;
            for (const auto& A : mats) m = std::max(m, std::abs(u(A * x) - ux));
            return m;
        });
        const Eigen::Vector2d t1(4 * d, 0.0), t2(2 * d, 2 * kS3 * d);
        run("hexagon0 translations", pts, [&](const Eigen::Vector2d& x) {
            double ux = u(x);
            return std::max({std::abs(u(x + t1) - ux), std::abs(u(x + t2) - ux), std::abs(u(x - t1 + t2) - ux)});
        });
        run("delta1 against delta2", draw(Domain{DomainKind::delta1, d}),
            [&](const Eigen::Vector2d& x) { return std::abs(u(-x) - u(x)); });
    } else {
        throw std::invalid_argument("group must be 3 or 6");
    }
    rep.ok = rep.max_violation <= rep.tol;
    return rep;
}

TilingReport verify_tiling(const Sequence& u, int samples, double tol, unsigned long seed)
{
    return verify_tiling([&u](const Eigen::Vector2d& x) { return evaluate(u, x); }, u.j(), u.d,
                         norm_float(u, 1.0), samples, tol, seed);
}

std::vector<GridRow> sample_grid(const Field& u, const Domain& dom, int resolution)
{
    if (resolution < 2) throw std::invalid_argument("resolution must be at least 2");
    auto [lo, hi] = bounding_box(dom);
    std::vector<Eigen::Vector2d> pts;
    for (int b = 0; b < resolution; ++b)
        for (int a = 0; a < resolution; ++a) {
            Eigen::Vector2d x(lo[0] + (hi[0] - lo[0]) * a / (resolution - 1),
                              lo[1] + (hi[1] - lo[1]) * b / (resolution - 1));
            if (contains(dom, x)) pts.push_back(x);
        }
    std::vector<GridRow> rows(pts.size());
    parallel_for(static_cast<std::ptrdiff_t>(pts.size()),
                 [&](std::ptrdiff_t i) { rows[i] = {pts[i][0], pts[i][1], u(pts[i])}; });
    return rows;
}

std::vector<GridRow> sample_grid(const Sequence& u, const Domain& dom, int resolution)
{
    return sample_grid([&u](const Eigen::Vector2d& x) { return evaluate(u, x); }, dom, resolution);
}

} // namespace hexcap
