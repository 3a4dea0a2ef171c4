#pragma once
// Multi-start exponentiated-gradient ascent over products of probability
// simplices. Deterministic given the seed.

#include <cstdint>
#include <functional>
#include <vector>

namespace abc {

struct AscentOptions {
    int starts = 8;          // RNG starts in addition to caller-provided seeds
    int iters = 200;
    double init_step = 0.5;
    double fd_eps = 1e-7;    // finite-difference probe size
    double tol = 1e-12;      // stop when the step collapses below this
    std::uint64_t seed = 0;
};

struct AscentResult {
    double value;
    std::vector<double> x;
};

using Objective = std::function<double(const std::vector<double>&)>;

// Point layout: concatenation of blocks, each a simplex summing to 1.
// extra_starts are evaluated (after a small interior nudge) alongside the
// seeded random starts; the best ascent outcome wins, ties broken by start
// order.
AscentResult maximize_on_simplices(const std::vector<std::size_t>& blocks, const Objective& f,
                                   const AscentOptions& opts,
                                   const std::vector<std::vector<double>>& extra_starts = {});

// Dirichlet(1) sample per block; used for the random starts above and by the
// property-test generators.
std::vector<double> random_simplex_point(const std::vector<std::size_t>& blocks,
                                         std::uint64_t seed);

}  // namespace abc
