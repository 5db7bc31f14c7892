#ifndef HEXCAP_BRANCH_HPP
#define HEXCAP_BRANCH_HPP

#include <optional>
#include <string>
#include <vector>

#include "hexcap/chebyshev.hpp"
#include "hexcap/proof.hpp"

namespace hexcap {

// A point (mu, u) of the zero set, or a tangent direction.
struct BranchPoint {
    double mu = 0;
    Sequence u;
};

// (mu(s), u(s)) and their tangents as Chebyshev series on s in [-1, 1];
// params.mu holds mu at the start of the continuation.
struct ChebBranch {
    ModelParams params;
    int Nc = 0;
    double s_fix = 0;
    int n_fft = 2;
    ChebSeries<double> mu;
    ChebSeries<Sequence> u;
    ChebSeries<double> mu_dot;
    ChebSeries<Sequence> u_dot;

    BranchPoint at(double s) const { return {cheb_eval(mu, s), cheb_eval(u, s)}; }
    BranchPoint tangent_at(double s) const { return {cheb_eval(mu_dot, s), cheb_eval(u_dot, s)}; }
};

// Unit null vector of [d_mu f, d_u f] at w (Euclidean norm on mu and the
// reduced coefficients), oriented to have positive pairing with prev, or
// mu component of sign `direction` without prev.
BranchPoint tangent_vector(const BranchPoint& w, const ModelParams& p, const BranchPoint* prev = nullptr,
                           int direction = 1);

// Residual |[d_mu f, d_u f] t| in the Euclidean norm.
double tangent_residual(const BranchPoint& w, const BranchPoint& t, const ModelParams& p);

struct ContinuationOptions {
    double tol = 1e-12;
    int maxit = 30;
    int max_halvings = 6;
    int n_fft = 0;  // 0: smallest power of two >= 2 Nc
};

struct ContinuationGrid {
    std::vector<double> s;  // arclength values
    std::vector<BranchPoint> points;
    std::vector<BranchPoint> tangents;
};

ChebBranch continue_branch(const BranchPoint& start, const ModelParams& p, double s_fix, int Nc, int direction,
                           const ContinuationOptions& opt = {}, ContinuationGrid* grid = nullptr);

// Bordered Jacobian [[mu_dot, conj(u_dot)^T], [u, Df(mu, u)]] over {mu} x I^N;
// the first row is the phase condition paired with the tangent.
CMatrix bordered_jacobian(const BranchPoint& w, const BranchPoint& tangent, const ModelParams& p);

enum class LnkMode { conservative, literal };
const char* to_string(LnkMode m);
LnkMode lnk_mode_from_string(const std::string& s);

Interval tail_bound_LNK(const ChebBranch& b, LnkMode mode = LnkMode::conservative);

// Enclosure of mu(s) over s in [-1, 1].
Interval mu_range(const ChebBranch& b);

struct BranchInverse {
    ChebSeries<CMatrix> BN;  // finite bordered blocks
    LnkMode mode = LnkMode::conservative;
    Interval LNK;
    // sup_n of the con norm of 1/lambda_n(mu(s)) over the tail
    Interval tail_norm;
};

BranchInverse build_B(const ChebBranch& b, LnkMode mode = LnkMode::conservative);

// X = C x l1_nu weights: 1 for mu, alpha_n nu^{rho(n)} for u_n.
IntervalVector bordered_weights(const OrbitTable& t, double nu);

struct BranchBounds {
    Interval Y0, Z0, Z1, Z2_base, Z2_slope;
    Interval Y0_tail, Z1_tail;
};

BranchBounds branch_bounds(const ChebBranch& b, const BranchInverse& B, PhiMode mode = PhiMode::per_index);

// The single-solution style bounds at one s, with the bordered B(s) and
// tail 1/L_N(mu(s)); dominated by the uniform bounds.
BranchBounds pointwise_bounds(const ChebBranch& b, const BranchInverse& B, double s,
                              PhiMode mode = PhiMode::per_index);

struct BranchCertificate {
    ModelParams params;
    int Nc = 0;
    double s_fix = 0;
    Interval Y0s, Z0s, Z1s, Z2s_base, Z2s_slope;
    Interval LNK, tail_norm;
    LnkMode lnk_mode = LnkMode::conservative;
    PhiMode phi_mode = PhiMode::per_index;
    double r0 = 0;
    bool success = false;
    Interval margin1, margin2;
    std::string violated;
    std::string digest;

    RadiiCheck recheck() const { return check_radii(Y0s, Z0s, Z1s, Z2s_base, Z2s_slope, r0); }
};

struct BranchProofOptions {
    std::optional<double> r0;
    double r_min = 0.0;
    double r_max = 0.1;
    LnkMode lnk_mode = LnkMode::conservative;
    PhiMode phi_mode = PhiMode::per_index;
};

BranchCertificate prove_branch(const ChebBranch& b, const BranchProofOptions& opt = {});

} // namespace hexcap

#endif
