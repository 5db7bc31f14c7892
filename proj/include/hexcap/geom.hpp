#ifndef HEXCAP_GEOM_HPP
#define HEXCAP_GEOM_HPP

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "hexcap/sequence.hpp"

namespace hexcap {

enum class DomainKind { parallelogram0, parallelogram2d, delta1, delta2, hexagon0 };

const char* to_string(DomainKind k);
DomainKind domain_kind_from_string(const std::string& s);

// Closed periodicity domains in physical coordinates; d is the half-period.
struct Domain {
    DomainKind kind = DomainKind::parallelogram0;
    double d = 1.0;
};

bool contains(const Domain& dom, const Eigen::Vector2d& x);
Eigen::Vector2d centroid(const Domain& dom);

// Axis-aligned box {lo, hi} enclosing the domain.
std::pair<Eigen::Vector2d, Eigen::Vector2d> bounding_box(const Domain& dom);

// Physical matrices L G L^{-1} of the group elements.
std::vector<Eigen::Matrix2d> physical_group(const GroupSpec& g);

using Field = std::function<double(const Eigen::Vector2d&)>;

struct TilingCheck {
    std::string name;
    double max_violation = 0;
};

struct TilingReport {
    int j = 0;
    int samples = 0;
    double scale = 0;  // |u|_{1,1}
    double tol = 0;    // absolute threshold tol * scale
    std::vector<TilingCheck> checks;
    double max_violation = 0;
    bool ok = false;
};

// D_3: symmetry about the centroids of Delta_1 and Delta_2.
// D_6: invariance about the origin, hexagon tiling translations and u(x) = u(-x)
// between Delta_1 and Delta_2.
TilingReport verify_tiling(const Field& u, int j, double d, double scale, int samples, double tol,
                           unsigned long seed = 1);
TilingReport verify_tiling(const Sequence& u, int samples, double tol, unsigned long seed = 1);

struct GridRow {
    double x1, x2, value;
};

// Regular resolution x resolution grid over the bounding box, rows in
// x2-major then x1 order, kept only where contained.
std::vector<GridRow> sample_grid(const Field& u, const Domain& dom, int resolution);
std::vector<GridRow> sample_grid(const Sequence& u, const Domain& dom, int resolution);

} // namespace hexcap

#endif
