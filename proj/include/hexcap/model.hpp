#ifndef HEXCAP_MODEL_HPP
#define HEXCAP_MODEL_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hexcap/sequence.hpp"

namespace hexcap {

class NumericsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ModelParams {
    int j = 6;
    int N = 8;
    double d = 5.0;
    double mu = 0.0;
    double gamma = 0.0;
    double nu = 1.0;

    void validate() const;
};

// lambda_n = (1 - (pi/d)^2 q(n))^2 + mu
double symbol(const Index2& n, const ModelParams& p);
Interval isymbol(const Index2& n, double d, const Interval& mu);
inline Interval isymbol(const Index2& n, const ModelParams& p) { return isymbol(n, p.d, Interval(p.mu)); }

Eigen::VectorXd symbol_values(const OrbitTable& t, const ModelParams& p);
IntervalVector isymbol_values(const OrbitTable& t, const ModelParams& p);

// lambda u - gamma u*u + u*u*u on the 3N support.
Sequence apply_f(const Sequence& u, const ModelParams& p);
ISequence apply_f(const ISequence& u, const ModelParams& p);

// -gamma u*u + u*u*u
Sequence nonlinear_part(const Sequence& u, const ModelParams& p);
ISequence nonlinear_part(const ISequence& u, const ModelParams& p);

// -2 gamma u + 3 u*u
Sequence dg_potential(const Sequence& u, const ModelParams& p);
ISequence dg_potential(const ISequence& u, const ModelParams& p);

// Galerkin block pi^N Df(u) pi^N on the table of u.
ReducedOperator<Complex> apply_Df(const Sequence& u, const ModelParams& p);
ReducedOperator<CInterval> apply_Df(const ISequence& u, const ModelParams& p);

// Enclosure of min |lambda_m| over m outside I^N; mu may be an interval.
Interval tail_bound_LN(int N, double d, const Interval& mu);
inline Interval tail_bound_LN(const ModelParams& p) { return tail_bound_LN(p.N, p.d, Interval(p.mu)); }

Sequence random_initial_guess(const ModelParams& p, std::uint64_t seed, double amplitude = 1.0);

struct NewtonResult {
    Sequence u;
    double residual = 0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> history;
};

NewtonResult newton_refine(const Sequence& u0, const ModelParams& p, double tol = 1e-12, int maxit = 50);

struct FindOptions {
    double tol = 1e-11;
    int maxit = 60;
    double amplitude = 1.0;
    double min_norm = 1e-3;  // rejects convergence to the trivial state
};

struct FindResult {
    NewtonResult newton;
    std::uint64_t seed = 0;
    int attempts = 0;
};

// Newton from random guesses with seeds seed0, seed0 + 1, ... until one
// converges to a nontrivial state.
std::optional<FindResult> find_solution(const ModelParams& p, std::uint64_t seed0, int attempts,
                                        const FindOptions& opt = {});

struct ApproxInverse {
    ReducedOperator<Complex> AN;
    Interval LN;
    Interval tail_inv_bound;
    ModelParams params;
};

ApproxInverse build_approx_inverse(const Sequence& u, const ModelParams& p);

} // namespace hexcap

#endif
