#ifndef HEXCAP_PROOF_HPP
#define HEXCAP_PROOF_HPP

#include <optional>
#include <string>

#include "hexcap/model.hpp"

namespace hexcap {

// How the finite part of Z1 bounds pi^N (v * pi_N h).
//   uniform:   sup |V| / nu^{N+1} for every n
//   per_index: sup over m outside I^N of |v_{n-m}| / nu^{rho(m)}; never larger
enum class PhiMode { uniform, per_index };

const char* to_string(PhiMode m);
PhiMode phi_mode_from_string(const std::string& s);

struct RadiiCheck {
    bool success = false;
    Interval margin1;  // 1/2 Z2(r) r^2 - (1 - Z0 - Z1) r + Y0, must be < 0
    Interval margin2;  // Z0 + Z1 + Z2(r) r, must be < 1
    std::string violated;
};

// Evaluated at the upper endpoints of every bound.
RadiiCheck check_radii(const Interval& Y0, const Interval& Z0, const Interval& Z1, const Interval& Z2_base,
                       const Interval& Z2_slope, double r0);

// Log-spaced scan upward from max(Y0, r_min); nullopt if nothing passes.
std::optional<double> scan_radius(const Interval& Y0, const Interval& Z0, const Interval& Z1,
                                  const Interval& Z2_base, const Interval& Z2_slope, double r_min = 0.0,
                                  double r_max = 0.1, int per_decade = 50);

struct Y0Bound {
    Interval finite, tail, total;
};
struct Z1Bound {
    Interval finite, tail, total;
    Interval sup_V;  // sup |V| over unfolded I^{2N} without the origin
};
struct Z2Bound {
    Interval base, slope, opnorm_A, q_norm;
};

Y0Bound bound_Y0(const Sequence& u, const ApproxInverse& A, const ModelParams& p);
Interval bound_Z0(const Sequence& u, const ApproxInverse& A, const ModelParams& p);
Z1Bound bound_Z1(const Sequence& u, const ApproxInverse& A, const ModelParams& p, PhiMode mode = PhiMode::per_index);
Z2Bound bound_Z2(const Sequence& u, const ApproxInverse& A, const ModelParams& p);

// phi on the reps of I^N for the potential v (supported on I^{2N}).
IntervalVector phi_vector(const ISequence& v, int N, double nu, PhiMode mode);

struct Certificate {
    ModelParams params;
    Interval Y0, Z0, Z1, Z2_base, Z2_slope;
    Interval Y0_tail, Z1_tail, LN, opnorm_A;
    PhiMode phi_mode = PhiMode::per_index;
    double r0 = 0;
    bool success = false;
    Interval margin1, margin2;
    std::string violated;
    std::string digest;

    RadiiCheck recheck() const { return check_radii(Y0, Z0, Z1, Z2_base, Z2_slope, r0); }
};

struct ProofOptions {
    std::optional<double> r0;
    double r_min = 0.0;
    double r_max = 0.1;
    PhiMode phi_mode = PhiMode::per_index;
};

Certificate prove_solution(const Sequence& u, const ModelParams& p, const ProofOptions& opt = {});

} // namespace hexcap

#endif
