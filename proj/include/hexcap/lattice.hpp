#ifndef HEXCAP_LATTICE_HPP
#define HEXCAP_LATTICE_HPP

#include <array>
#include <cstdlib>
#include <memory>
#include <vector>

#include <Eigen/Core>

namespace hexcap {

using Index2 = std::array<int, 2>;
using Mat2i = Eigen::Matrix2i;

struct GroupSpec {
    int j = 6;
    // r^k for k < j, then s r^k
    std::vector<Mat2i> elements;
    Mat2i rotation;
    Mat2i reflection;
};

// Builds D_3 or D_6 acting on lattice indices; matrices come from exact
// arithmetic in Q(sqrt 3) and are checked to be integral.
GroupSpec build_group(int j);

inline Index2 apply(const Mat2i& M, const Index2& n)
{
    return {M(0, 0) * n[0] + M(0, 1) * n[1], M(1, 0) * n[0] + M(1, 1) * n[1]};
}

// Largest box radius over the orbit; both groups permute {|n1|, |n2|, |n1-n2|}.
inline int hex_norm(const Index2& n)
{
    return std::max({std::abs(n[0]), std::abs(n[1]), std::abs(n[0] - n[1])});
}

// n1^2 - n1 n2 + n2^2, so that |L n~|^2 = (pi/d)^2 q(n)
inline long quad_form(const Index2& n)
{
    long a = n[0], b = n[1];
    return a * a - a * b + b * b;
}

std::vector<Index2> orbit(const GroupSpec& g, const Index2& n);
Index2 representative(const GroupSpec& g, const Index2& n);

class OrbitTable {
public:
    OrbitTable(const GroupSpec& g, int N);

    const GroupSpec& group() const { return group_; }
    int j() const { return group_.j; }
    int N() const { return N_; }
    Eigen::Index size() const { return static_cast<Eigen::Index>(reps_.size()); }

    const std::vector<Index2>& reps() const { return reps_; }
    const Index2& rep(Eigen::Index i) const { return reps_[i]; }
    const std::vector<Index2>& members(Eigen::Index i) const { return orbits_[i]; }
    int alpha(Eigen::Index i) const { return static_cast<int>(orbits_[i].size()); }
    int rho(Eigen::Index i) const { return hex_norm(reps_[i]); }

    // Position of the orbit containing k, or -1 if that orbit is not retained.
    Eigen::Index position(const Index2& k) const
    {
        if (std::abs(k[0]) > N_ || std::abs(k[1]) > N_) return -1;
        return lookup_[(k[0] + N_) * (2 * N_ + 1) + (k[1] + N_)];
    }
    Eigen::Index conjugate(Eigen::Index i) const { return conj_[i]; }
    // Number of reps with rho <= M (prefix length).
    Eigen::Index prefix(int M) const;

private:
    GroupSpec group_;
    int N_;
    std::vector<Index2> reps_;
    std::vector<std::vector<Index2>> orbits_;
    std::vector<Eigen::Index> lookup_;
    std::vector<Eigen::Index> conj_;
};

using TablePtr = std::shared_ptr<const OrbitTable>;

TablePtr build_orbit_table(const GroupSpec& g, int N);

// Representative of orbit(-n); n must be retained in the table.
Index2 conjugate_rep(const OrbitTable& t, const Index2& n);

} // namespace hexcap

#endif
