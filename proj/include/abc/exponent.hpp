#pragma once
// Tilted weight omega_q, the moment functional Omega, its maximization over
// joints, and the strong-converse exponent F(R1,R2) with the convexity and
// slope diagnostics.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "abc/channel.hpp"
#include "abc/prob.hpp"
#include "abc/region.hpp"

namespace abc {

struct ExponentParams {
    double alpha, beta;  // > 0
    double gamma;        // [0,1]
    double mu;           // [0,1/2]
    double lambda;       // >= 0 here; F evaluation requires > 0

    ExponentParams(double a, double b, double g, double m, double l);

    double denominator() const { return 1.0 + lambda * (1.0 + alpha + beta + (2.0 - 3.0 * mu) * gamma); }
    double r1_coeff() const { return gamma * mu + (1.0 - gamma); }
    double r2_coeff() const { return gamma * (1.0 - mu) + (1.0 - gamma); }
};

struct OmegaResult {
    double value = 0.0;      // nats
    JointDistUXYZ argmax_q;
    bool certified = false;  // true only for the lattice-enumeration mode
};

struct OmegaBudget {
    int starts = 32;
    int iters = 200;
    std::uint64_t seed = 0;
    bool lattice = false;      // dense simplex lattice enumeration + top-k polish
    int lattice_den = 6;       // lattice resolution 1/den
    int lattice_refine = 4;    // lattice points polished by ascent afterwards
    std::optional<std::size_t> nu_override;
};

// The tilted weight at one support point of q; -inf when a W numerator is 0.
// Throws on zero-mass points. lambda is ignored.
double omega_weight(const JointDistUXYZ& q, const JointCache& cache, const ChannelPair& ch,
                    const ExponentParams& ep, std::size_t u, std::size_t x, std::size_t y,
                    std::size_t z);
double omega_weight(const JointDistUXYZ& q, const ChannelPair& ch, const ExponentParams& ep,
                    std::size_t u, std::size_t x, std::size_t y, std::size_t z);

// ln sum_q q * exp(lambda * omega), max-shifted; atoms with omega = -inf
// contribute 0; lambda = 0 gives exactly 0.
double omega_functional(const JointDistUXYZ& q, const ChannelPair& ch, const ExponentParams& ep);

// E_q[omega]: the lambda -> 0 slope of omega_functional. May be -inf.
double omega_slope_at_zero(const JointDistUXYZ& q, const ChannelPair& ch, const ExponentParams& ep);

// xi''(lambda): variance of omega under the lambda-tilted distribution,
// written as the pairwise double sum. Always >= 0.
double omega_second_derivative(const JointDistUXYZ& q, const ChannelPair& ch,
                               const ExponentParams& ep);

// max over q of omega_functional, |U| = |Y|+|Z|-1 unless overridden.
OmegaResult omega_max(const ChannelPair& ch, const ExponentParams& ep, const OmegaBudget& budget);

// F^(params)(R1,R2) given a precomputed Omega value for the same (ch, params).
double exponent_at_params(double r1, double r2, const ExponentParams& ep, const OmegaResult& omega);

struct ExponentSearch {
    GridPlan grid{17, 9};        // (gamma, mu) plan for the hyperplane sweep
    RegionBudget region_budget;
    OmegaBudget refine_budget{6, 120, 0, false, 6, 4, {}};
    int max_refined_cells = 200; // Omega ascents spent per exponent() call
    int polish_rounds = 2;       // local coordinate refinement around the best cell
    std::uint64_t seed = 0;
};

// Per-channel reusable state: hyperplane argmaxes per (gamma, mu), the induced
// structured seeds q*, the rate-independent seed table Omega(q*, lambda), and a
// cache of refined Omega estimates keyed by grid cell.
class ExponentContext {
public:
    ExponentContext(const ChannelPair& ch, const ExponentSearch& search);

    struct Value {
        double value;          // clamped at 0
        ExponentParams best;
    };
    Value exponent(double r1, double r2);

    const ChannelPair& channel() const { return ch_; }

private:
    struct GmEntry {
        double gamma, mu;
        double a, b;        // halfplane coefficients (gamma mu + gamma_bar, ...)
        double c_hat;       // hyperplane_value estimate
        JointDistUXYZ q_seed;
    };

    double refined_omega(std::size_t gm, std::size_t la, std::size_t aa, std::size_t bb);
    double omega_ascent(const GmEntry& gm, const ExponentParams& ep, std::uint64_t salt);

    ChannelPair ch_;
    ExponentSearch search_;
    std::vector<GmEntry> gms_;
    std::vector<double> alphas_, betas_, lambdas_;
    std::vector<double> seed_table_;  // [gm * lambdas + la] = Omega(q_seed, lambda)
    std::vector<double> lb_table_;    // per full cell: max(seed, uniform-probe) Omega bound
    std::map<std::uint64_t, double> refined_;
};

ExponentContext::Value exponent(double r1, double r2, const ChannelPair& ch,
                                const ExponentSearch& search);

struct ConvexityReport {
    bool pass = true;
    std::vector<std::pair<double, double>> violations;  // (lambda, second difference)
};

// Second central differences of Omega(q, .) over lambda_grid must clear -1e-9.
ConvexityReport convexity_check(const JointDistUXYZ& q, const ChannelPair& ch,
                                const ExponentParams& ep, const std::vector<double>& lambda_grid);

// Both decompositions of E_q[omega]; the two differ exactly by
// gamma_bar * D(q_{Y|X} || W1 | q_X), which as_printed omits.
struct SlopeDecomposition {
    double e_omega;       // direct expectation
    double full;          // divergence + information decomposition
    double as_printed;    // same but without the gamma_bar divergence term
};
SlopeDecomposition slope_decomposition(const JointDistUXYZ& q, const ChannelPair& ch,
                                       const ExponentParams& ep);

}  // namespace abc
