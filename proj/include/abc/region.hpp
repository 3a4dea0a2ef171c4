#pragma once
// Capacity region of the asymmetric broadcast channel via supporting
// hyperplanes: C^(gamma,mu) values, the relaxed C~ values, boundary polygon
// reconstruction, and membership queries.

#include <array>
#include <cstdint>
#include <vector>

#include "abc/channel.hpp"
#include "abc/prob.hpp"

namespace abc {

struct HyperplaneParams {
    double gamma;  // in [0,1]
    double mu;     // in [0,1/2]

    HyperplaneParams(double g, double m);
};

struct RegionBudget {
    int starts = 4;             // random multi-starts per optimization
    int iters = 120;
    int max_corner_starts = 16; // deterministic p_{X|U} corner initializations
    std::uint64_t seed = 0;
};

struct HyperplaneValue {
    double value;       // nats
    AuxInputLaw argmax;
};

struct TildeValue {
    double value;           // nats
    JointDistUXYZ argmax;
};

struct RegionBoundary {
    struct Halfplane {
        double a, b, c;  // a*R1 + b*R2 <= c
        double gamma, mu;
    };
    std::vector<Halfplane> halfplanes;
    std::vector<std::array<double, 2>> vertices;  // convex polygon, CCW from origin side
    bool complete = true;   // false when an optimizer failed on some grid point
};

enum class Membership { Inside, Outside, Boundary };

struct GridPlan {
    int n_gamma = 65;
    int n_mu = 33;
};

// The three functionals of C(p) for the joint induced by (aux, ch):
// { I(X;Y|U), I(U;Z), I(X;Y) }.
std::array<double, 3> eval_C_p(const AuxInputLaw& aux, const ChannelPair& ch);

// max over P_sh of gamma*mu*I(X;Y|U) + gamma*(1-mu)*I(U;Z) + (1-gamma)*I(X;Y).
HyperplaneValue hyperplane_value(const HyperplaneParams& hp, const ChannelPair& ch,
                                 const RegionBudget& budget);

// Relaxed value over unconstrained joints q with |U| = |Y|+|Z|-1: the same
// weighted information sum minus alpha and beta times the two channel
// divergences. warm points are used as additional ascent starts.
TildeValue tilde_hyperplane_value(double alpha, double beta, const HyperplaneParams& hp,
                                  const ChannelPair& ch, const RegionBudget& budget,
                                  const std::vector<JointDistUXYZ>& warm = {});

RegionBoundary region_boundary(const ChannelPair& ch, const GridPlan& grid,
                               const RegionBudget& budget);

Membership region_membership(double r1, double r2, const RegionBoundary& boundary, double tol);

// Single-user capacity by alternating optimization; stops when the standard
// upper/lower gap drops below tol. Throws carrying the best bracket on
// non-convergence.
double ba_capacity(const StochasticMatrix& w, double tol);

// Embeds a joint into a larger auxiliary alphabet (extra u-slices get zero
// mass); used to seed Omega and C~ searches with region argmaxes.
JointDistUXYZ pad_aux(const JointDistUXYZ& q, std::size_t nu_target);

}  // namespace abc
