#include "abc/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace abc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void normalize_blocks(std::vector<double>& x, const std::vector<std::size_t>& blocks) {
    std::size_t off = 0;
    for (std::size_t b : blocks) {
        double s = 0.0;
        for (std::size_t i = 0; i < b; ++i) s += x[off + i];
        if (s <= 0.0)
            for (std::size_t i = 0; i < b; ++i) x[off + i] = 1.0 / static_cast<double>(b);
        else
            for (std::size_t i = 0; i < b; ++i) x[off + i] /= s;
        off += b;
    }
}

// Mix toward uniform so every coordinate is strictly positive and the
// multiplicative update can move mass back in.
void interior_nudge(std::vector<double>& x, const std::vector<std::size_t>& blocks, double eps) {
    std::size_t off = 0;
    for (std::size_t b : blocks) {
        for (std::size_t i = 0; i < b; ++i)
            x[off + i] = (1.0 - eps) * x[off + i] + eps / static_cast<double>(b);
        off += b;
    }
}

AscentResult ascend(std::vector<double> x, const std::vector<std::size_t>& blocks,
                    const Objective& f, const AscentOptions& opts) {
    const std::size_t dim = x.size();
    normalize_blocks(x, blocks);
    double fx = f(x);
    if (fx == kNegInf) return {fx, x};

    double step = opts.init_step;
    std::vector<double> grad(dim), cand(dim);
    for (int it = 0; it < opts.iters; ++it) {
        // Forward-difference gradient with per-block renormalization.
        for (std::size_t i = 0; i < dim; ++i) {
            cand = x;
            cand[i] += opts.fd_eps;
            normalize_blocks(cand, blocks);
            double fp = f(cand);
            grad[i] = (fp == kNegInf) ? 0.0 : (fp - fx) / opts.fd_eps;
        }
        double gmax = 0.0;
        for (double g : grad) gmax = std::max(gmax, std::abs(g));
        if (gmax == 0.0) break;

        bool improved = false;
        for (int tries = 0; tries < 30 && !improved; ++tries) {
            for (std::size_t i = 0; i < dim; ++i)
                cand[i] = x[i] * std::exp(step * grad[i] / gmax);
            normalize_blocks(cand, blocks);
            double fc = f(cand);
            if (fc > fx) {
                x = cand;
                fx = fc;
                step *= 1.3;
                improved = true;
            } else {
                step *= 0.5;
                if (step < opts.tol) return {fx, x};
            }
        }
        if (!improved) break;
    }
    return {fx, x};
}

}  // namespace

std::vector<double> random_simplex_point(const std::vector<std::size_t>& blocks,
                                         std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> expo(1.0);
    std::size_t dim = 0;
    for (std::size_t b : blocks) dim += b;
    std::vector<double> x(dim);
    for (double& v : x) v = expo(rng);
    normalize_blocks(x, blocks);
    return x;
}

AscentResult maximize_on_simplices(const std::vector<std::size_t>& blocks, const Objective& f,
                                   const AscentOptions& opts,
                                   const std::vector<std::vector<double>>& extra_starts) {
    std::size_t dim = 0;
    for (std::size_t b : blocks) dim += b;

    std::vector<std::vector<double>> starts;
    starts.reserve(extra_starts.size() + static_cast<std::size_t>(opts.starts) + 1);
    for (const auto& s : extra_starts) {
        std::vector<double> x = s;
        x.resize(dim, 0.0);
        interior_nudge(x, blocks, 1e-4);
        starts.push_back(std::move(x));
    }
    starts.push_back(std::vector<double>(dim, 1.0));  // uniform after normalization
    for (int k = 0; k < opts.starts; ++k)
        starts.push_back(random_simplex_point(blocks, opts.seed * 0x9e3779b97f4a7c15ULL + 0x1234ULL + static_cast<std::uint64_t>(k)));

    AscentResult best{kNegInf, {}};
    for (auto& s : starts) {
        AscentResult r = ascend(std::move(s), blocks, f, opts);
        if (r.value > best.value) best = std::move(r);
    }
    return best;
}

}  // namespace abc
