#include "abc/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "abc/optim.hpp"

namespace abc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Omega(q | W1, W2) evaluated from a flat joint without building a JointCache;
// the hot path of omega_max.
class OmegaEval {
public:
    OmegaEval(const ChannelPair& ch, const ExponentParams& ep, std::size_t nu)
        : alpha_(ep.alpha), beta_(ep.beta), c1_(ep.gamma * ep.mu), c2_(ep.gamma * (1.0 - ep.mu)),
          c3_(1.0 - ep.gamma), lambda_(ep.lambda), nu_(nu), nx_(ch.nx()), ny_(ch.ny()), nz_(ch.nz()),
          lw1_(nx_ * ny_), lw2_(nx_ * nz_), m_u_(nu), m_uy_(nu * ny_), m_uz_(nu * nz_),
          m_uxy_(nu * nx_ * ny_), m_uxz_(nu * nx_ * nz_), m_y_(ny_), m_z_(nz_) {
        for (std::size_t x = 0; x < nx_; ++x) {
            for (std::size_t y = 0; y < ny_; ++y)
                lw1_[x * ny_ + y] = ch.w1(x, y) > 0.0 ? std::log(ch.w1(x, y)) : kNegInf;
            for (std::size_t z = 0; z < nz_; ++z)
                lw2_[x * nz_ + z] = ch.w2(x, z) > 0.0 ? std::log(ch.w2(x, z)) : kNegInf;
        }
    }

    double operator()(const std::vector<double>& q) {
        if (lambda_ == 0.0) return 0.0;
        std::fill(m_u_.begin(), m_u_.end(), 0.0);
        std::fill(m_uy_.begin(), m_uy_.end(), 0.0);
        std::fill(m_uz_.begin(), m_uz_.end(), 0.0);
        std::fill(m_uxy_.begin(), m_uxy_.end(), 0.0);
        std::fill(m_uxz_.begin(), m_uxz_.end(), 0.0);
        std::fill(m_y_.begin(), m_y_.end(), 0.0);
        std::fill(m_z_.begin(), m_z_.end(), 0.0);

        std::size_t i = 0;
        for (std::size_t u = 0; u < nu_; ++u)
            for (std::size_t x = 0; x < nx_; ++x)
                for (std::size_t y = 0; y < ny_; ++y)
                    for (std::size_t z = 0; z < nz_; ++z, ++i) {
                        double m = q[i];
                        if (m == 0.0) continue;
                        m_u_[u] += m;
                        m_uy_[u * ny_ + y] += m;
                        m_uz_[u * nz_ + z] += m;
                        m_uxy_[(u * nx_ + x) * ny_ + y] += m;
                        m_uxz_[(u * nx_ + x) * nz_ + z] += m;
                        m_y_[y] += m;
                        m_z_[z] += m;
                    }

        double tmax = kNegInf;
        terms_.clear();
        i = 0;
        for (std::size_t u = 0; u < nu_; ++u)
            for (std::size_t x = 0; x < nx_; ++x)
                for (std::size_t y = 0; y < ny_; ++y)
                    for (std::size_t z = 0; z < nz_; ++z, ++i) {
                        double m = q[i];
                        if (m == 0.0) continue;
                        double lw1 = lw1_[x * ny_ + y], lw2 = lw2_[x * nz_ + z];
                        // W vanishing in a numerator: exp(lambda*omega) = 0.
                        if (lw1 == kNegInf || lw2 == kNegInf) continue;
                        double lq = std::log(m);
                        double omega =
                            alpha_ * (lw1 - lq + std::log(m_uxz_[(u * nx_ + x) * nz_ + z])) +
                            beta_ * (lw2 - lq + std::log(m_uxy_[(u * nx_ + x) * ny_ + y])) +
                            c1_ * (lw1 - std::log(m_uy_[u * ny_ + y]) + std::log(m_u_[u])) +
                            c2_ * (std::log(m_uz_[u * nz_ + z]) - std::log(m_u_[u]) - std::log(m_z_[z])) +
                            c3_ * (lw1 - std::log(m_y_[y]));
                        double t = lq + lambda_ * omega;
                        terms_.push_back(t);
                        tmax = std::max(tmax, t);
                    }
        if (terms_.empty()) return kNegInf;
        double s = 0.0;
        for (double t : terms_) s += std::exp(t - tmax);
        return tmax + std::log(s);
    }

private:
    double alpha_, beta_, c1_, c2_, c3_, lambda_;
    std::size_t nu_, nx_, ny_, nz_;
    std::vector<double> lw1_, lw2_;
    std::vector<double> m_u_, m_uy_, m_uz_, m_uxy_, m_uxz_, m_y_, m_z_;
    std::vector<double> terms_;
};

double lattice_point_count(std::size_t cells, int den) {
    // C(den + cells - 1, cells - 1)
    double c = 1.0;
    for (std::size_t k = 1; k < cells; ++k) c *= static_cast<double>(den + k) / static_cast<double>(k);
    return c;
}

JointDistUXYZ structured_seed(const ChannelPair& ch, double gamma, double mu,
                              const RegionBudget& budget, std::size_t nu_target) {
    HyperplaneValue hv = hyperplane_value(HyperplaneParams(gamma, mu), ch, budget);
    JointDistUXYZ q = joint_from_aux(hv.argmax, ch);
    if (q.nu <= nu_target) return pad_aux(q, nu_target);
    // target alphabet smaller than the argmax's: fold all U slices together
    JointDistUXYZ folded(nu_target, q.nx, q.ny, q.nz);
    for (std::size_t u = 0; u < q.nu; ++u)
        for (std::size_t x = 0; x < q.nx; ++x)
            for (std::size_t y = 0; y < q.ny; ++y)
                for (std::size_t z = 0; z < q.nz; ++z)
                    folded.at(std::min(u, nu_target - 1), x, y, z) += q(u, x, y, z);
    return folded;
}

}  // namespace

ExponentParams::ExponentParams(double a, double b, double g, double m, double l)
    : alpha(a), beta(b), gamma(g), mu(m), lambda(l) {
    if (!(a > 0.0) || !(b > 0.0)) throw ValidationError("ExponentParams: alpha, beta must be positive");
    if (!(g >= 0.0 && g <= 1.0)) throw ValidationError("ExponentParams: gamma outside [0,1]");
    if (!(m >= 0.0 && m <= 0.5)) throw ValidationError("ExponentParams: mu outside [0,1/2]");
    if (!(l >= 0.0)) throw ValidationError("ExponentParams: lambda must be nonnegative");
}

double omega_weight(const JointDistUXYZ& q, const JointCache& cache, const ChannelPair& ch,
                    const ExponentParams& ep, std::size_t u, std::size_t x, std::size_t y,
                    std::size_t z) {
    double m = q(u, x, y, z);
    if (m <= 0.0) throw ValidationError("omega_weight: evaluation at a zero-mass point");
    double w1 = ch.w1(x, y), w2 = ch.w2(x, z);
    if (w1 <= 0.0 || w2 <= 0.0) return kNegInf;
    double mb = 1.0 - ep.mu, gb = 1.0 - ep.gamma;
    double pu = cache.pU[u];
    return ep.alpha * std::log(w1 / cache.ygxzu(u, x, z, y)) +
           ep.beta * std::log(w2 / cache.zgxyu(u, x, y, z)) +
           ep.gamma * (ep.mu * std::log(w1 * pu / cache.pUY[u * q.ny + y]) +
                       mb * std::log(cache.pUZ[u * q.nz + z] / (pu * cache.pZ[z]))) +
           gb * std::log(w1 / cache.pY[y]);
}

double omega_weight(const JointDistUXYZ& q, const ChannelPair& ch, const ExponentParams& ep,
                    std::size_t u, std::size_t x, std::size_t y, std::size_t z) {
    JointCache cache(q);
    return omega_weight(q, cache, ch, ep, u, x, y, z);
}

double omega_functional(const JointDistUXYZ& q, const ChannelPair& ch, const ExponentParams& ep) {
    q.validate();
    bool any = false;
    for (double m : q.mass)
        if (m > 0.0) any = true;
    if (!any) throw ValidationError("omega_functional: empty support");
    if (ep.lambda == 0.0) return 0.0;

    JointCache cache(q);
    double tmax = kNegInf;
    std::vector<double> terms;
    for (std::size_t u = 0; u < q.nu; ++u)
        for (std::size_t x = 0; x < q.nx; ++x)
            for (std::size_t y = 0; y < q.ny; ++y)
                for (std::size_t z = 0; z < q.nz; ++z) {
                    double m = q(u, x, y, z);
                    if (m == 0.0) continue;
                    double w = omega_weight(q, cache, ch, ep, u, x, y, z);
                    if (w == kNegInf) continue;
                    double t = std::log(m) + ep.lambda * w;
                    terms.push_back(t);
                    tmax = std::max(tmax, t);
                }
    if (terms.empty()) return kNegInf;
    double s = 0.0;
    for (double t : terms) s += std::exp(t - tmax);
    return tmax + std::log(s);
}

double omega_slope_at_zero(const JointDistUXYZ& q, const ChannelPair& ch,
                           const ExponentParams& ep) {
    q.validate();
    JointCache cache(q);
    double acc = 0.0;
    for (std::size_t u = 0; u < q.nu; ++u)
        for (std::size_t x = 0; x < q.nx; ++x)
            for (std::size_t y = 0; y < q.ny; ++y)
                for (std::size_t z = 0; z < q.nz; ++z) {
                    double m = q(u, x, y, z);
                    if (m == 0.0) continue;
                    double w = omega_weight(q, cache, ch, ep, u, x, y, z);
                    if (w == kNegInf) return kNegInf;
                    acc += m * w;
                }
    return acc;
}

double omega_second_derivative(const JointDistUXYZ& q, const ChannelPair& ch,
                               const ExponentParams& ep) {
    q.validate();
    JointCache cache(q);
    std::vector<double> lw, lq;
    for (std::size_t u = 0; u < q.nu; ++u)
        for (std::size_t x = 0; x < q.nx; ++x)
            for (std::size_t y = 0; y < q.ny; ++y)
                for (std::size_t z = 0; z < q.nz; ++z) {
                    double m = q(u, x, y, z);
                    if (m == 0.0) continue;
                    double w = omega_weight(q, cache, ch, ep, u, x, y, z);
                    if (w == kNegInf) continue;
                    lw.push_back(w);
                    lq.push_back(std::log(m) + ep.lambda * w);
                }
    if (lw.empty()) return 0.0;
    double tmax = *std::max_element(lq.begin(), lq.end());
    double s = 0.0;
    for (double t : lq) s += std::exp(t - tmax);
    double mean = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < lw.size(); ++i) {
        double p = std::exp(lq[i] - tmax) / s;
        mean += p * lw[i];
        sq += p * lw[i] * lw[i];
    }
    return sq - mean * mean;
}

OmegaResult omega_max(const ChannelPair& ch, const ExponentParams& ep, const OmegaBudget& budget) {
    const std::size_t nu = budget.nu_override.value_or(ch.aux_size_omega());
    const std::size_t cells = nu * ch.nx() * ch.ny() * ch.nz();

    if (ep.lambda == 0.0) {
        JointDistUXYZ q(nu, ch.nx(), ch.ny(), ch.nz());
        for (double& m : q.mass) m = 1.0 / static_cast<double>(cells);
        return {0.0, std::move(q), true};
    }

    OmegaEval eval(ch, ep, nu);
    std::vector<std::size_t> blocks{cells};

    RegionBudget seed_budget;
    seed_budget.starts = 2;
    seed_budget.iters = 80;
    seed_budget.seed = budget.seed;
    std::vector<std::vector<double>> extra;
    extra.push_back(structured_seed(ch, ep.gamma, ep.mu, seed_budget, nu).mass);

    AscentOptions opts;
    opts.starts = budget.starts;
    opts.iters = budget.iters;
    opts.seed = budget.seed ^ 0x5eedULL;

    if (budget.lattice) {
        if (lattice_point_count(cells, budget.lattice_den) >= static_cast<double>(1u << 24))
            throw ValidationError("omega_max: lattice enumeration over budget");
        const double inv = 1.0 / static_cast<double>(budget.lattice_den);
        std::vector<double> q(cells, 0.0);
        // best lattice points, kept sorted ascending by value
        std::vector<std::pair<double, std::vector<double>>> top;
        const std::size_t keep = static_cast<std::size_t>(std::max(1, budget.lattice_refine));
        auto visit = [&](auto&& self, std::size_t cell, int remaining) -> void {
            if (cell + 1 == cells) {
                q[cell] = remaining * inv;
                double v = eval(q);
                if (top.size() < keep || v > top.front().first) {
                    top.emplace_back(v, q);
                    std::sort(top.begin(), top.end(),
                              [](const auto& a, const auto& b) { return a.first < b.first; });
                    if (top.size() > keep) top.erase(top.begin());
                }
                return;
            }
            for (int c = remaining; c >= 0; --c) {
                q[cell] = c * inv;
                self(self, cell + 1, remaining - c);
            }
            q[cell] = 0.0;
        };
        visit(visit, 0, budget.lattice_den);
        for (auto& t : top) extra.push_back(std::move(t.second));
        auto r = maximize_on_simplices(blocks, [&eval](const std::vector<double>& x) { return eval(x); },
                                       opts, extra);
        double best = r.value;
        if (!top.empty()) best = std::max(best, top.back().first);
        JointDistUXYZ arg(nu, ch.nx(), ch.ny(), ch.nz());
        arg.mass = (r.value >= best) ? r.x : top.back().second;
        return {best, std::move(arg), true};
    }

    auto r = maximize_on_simplices(blocks, [&eval](const std::vector<double>& x) { return eval(x); },
                                   opts, extra);
    JointDistUXYZ arg(nu, ch.nx(), ch.ny(), ch.nz());
    arg.mass = r.x;
    return {r.value, std::move(arg), false};
}

double exponent_at_params(double r1, double r2, const ExponentParams& ep, const OmegaResult& omega) {
    return (ep.lambda * (ep.r1_coeff() * r1 + ep.r2_coeff() * r2) - omega.value) / ep.denominator();
}

ExponentContext::ExponentContext(const ChannelPair& ch, const ExponentSearch& search)
    : ch_(ch), search_(search) {
    for (int e = -6; e <= 6; ++e) alphas_.push_back(std::ldexp(1.0, e));
    betas_ = alphas_;
    for (int e = -10; e <= 4; ++e) lambdas_.push_back(std::ldexp(1.0, e));

    const std::size_t nu = ch_.aux_size_omega();
    const int ng = std::max(2, search_.grid.n_gamma), nm = std::max(2, search_.grid.n_mu);
    for (int i = 0; i < ng; ++i)
        for (int j = 0; j < nm; ++j) {
            double g = static_cast<double>(i) / (ng - 1);
            double m = 0.5 * static_cast<double>(j) / (nm - 1);
            RegionBudget b = search_.region_budget;
            b.seed = search_.seed + static_cast<std::uint64_t>(i * nm + j) * 0x9fULL;
            HyperplaneValue hv = hyperplane_value(HyperplaneParams(g, m), ch_, b);
            GmEntry e;
            e.gamma = g;
            e.mu = m;
            e.a = g * m + (1.0 - g);
            e.b = g * (1.0 - m) + (1.0 - g);
            e.c_hat = hv.value;
            e.q_seed = pad_aux(joint_from_aux(hv.argmax, ch_), nu);
            gms_.push_back(std::move(e));
        }

    seed_table_.resize(gms_.size() * lambdas_.size());
    for (std::size_t gi = 0; gi < gms_.size(); ++gi)
        for (std::size_t li = 0; li < lambdas_.size(); ++li) {
            ExponentParams ep(1.0, 1.0, gms_[gi].gamma, gms_[gi].mu, lambdas_[li]);
            seed_table_[gi * lambdas_.size() + li] = omega_functional(gms_[gi].q_seed, ch_, ep);
        }

    // Uniform-joint probe: under the uniform q every conditional is uniform, so
    // omega = (alpha + gamma*mu + gamma_bar) * ln(|Y| W1) + beta * ln(|Z| W2).
    // Omega at that probe is a cheap per-cell lower bound that rules out the
    // small-alpha cells where the true maximum explodes.
    struct ProbeAtom {
        double lw1, lw2;  // ln(|Y| W1), ln(|Z| W2)
    };
    std::vector<ProbeAtom> atoms;
    for (std::size_t x = 0; x < ch_.nx(); ++x)
        for (std::size_t y = 0; y < ch_.ny(); ++y)
            for (std::size_t z = 0; z < ch_.nz(); ++z)
                if (ch_.w1(x, y) > 0.0 && ch_.w2(x, z) > 0.0)
                    atoms.push_back({std::log(ch_.ny() * ch_.w1(x, y)),
                                     std::log(ch_.nz() * ch_.w2(x, z))});
    const double lq = -std::log(static_cast<double>(ch_.nx() * ch_.ny() * ch_.nz()));

    lb_table_.resize(gms_.size() * lambdas_.size() * alphas_.size() * betas_.size());
    std::size_t idx = 0;
    for (std::size_t gi = 0; gi < gms_.size(); ++gi) {
        double c13 = gms_[gi].gamma * gms_[gi].mu + (1.0 - gms_[gi].gamma);
        for (std::size_t li = 0; li < lambdas_.size(); ++li) {
            double lam = lambdas_[li], seed = seed_table_[gi * lambdas_.size() + li];
            for (std::size_t ai = 0; ai < alphas_.size(); ++ai)
                for (std::size_t bi = 0; bi < betas_.size(); ++bi, ++idx) {
                    double tmax = kNegInf;
                    for (const auto& a : atoms)
                        tmax = std::max(tmax, lam * ((alphas_[ai] + c13) * a.lw1 + betas_[bi] * a.lw2));
                    double s = 0.0;
                    for (const auto& a : atoms)
                        s += std::exp(lq + lam * ((alphas_[ai] + c13) * a.lw1 + betas_[bi] * a.lw2) - tmax);
                    lb_table_[idx] = std::max(seed, atoms.empty() ? kNegInf : tmax + std::log(s));
                }
        }
    }
}

double ExponentContext::omega_ascent(const GmEntry& gm, const ExponentParams& ep,
                                     std::uint64_t salt) {
    OmegaEval eval(ch_, ep, ch_.aux_size_omega());
    AscentOptions opts;
    opts.starts = search_.refine_budget.starts;
    opts.iters = search_.refine_budget.iters;
    opts.seed = search_.seed ^ salt;
    auto r = maximize_on_simplices({gm.q_seed.cells()},
                                   [&eval](const std::vector<double>& x) { return eval(x); }, opts,
                                   {gm.q_seed.mass});
    // The structured seed value is a hard lower bound; the nudged ascent start
    // can sit fractionally below it.
    return std::max(r.value, omega_functional(gm.q_seed, ch_, ep));
}

double ExponentContext::refined_omega(std::size_t gm, std::size_t la, std::size_t aa,
                                      std::size_t bb) {
    std::uint64_t key = ((gm * lambdas_.size() + la) * alphas_.size() + aa) * betas_.size() + bb;
    auto it = refined_.find(key);
    if (it != refined_.end()) return it->second;
    ExponentParams ep(alphas_[aa], betas_[bb], gms_[gm].gamma, gms_[gm].mu, lambdas_[la]);
    double v = std::max(omega_ascent(gms_[gm], ep, key * 0x51ULL + 1), lb_table_[key]);
    refined_.emplace(key, v);
    return v;
}

ExponentContext::Value ExponentContext::exponent(double r1, double r2) {
    struct Cell {
        double f;
        std::uint32_t gm, la, aa, bb;
    };
    const std::size_t nl = lambdas_.size(), na = alphas_.size(), nb = betas_.size();
    std::vector<Cell> cells;
    for (std::size_t gi = 0; gi < gms_.size(); ++gi)
        for (std::size_t li = 0; li < nl; ++li) {
            double lam = lambdas_[li];
            double rate = lam * (gms_[gi].a * r1 + gms_[gi].b * r2);
            for (std::size_t ai = 0; ai < na; ++ai)
                for (std::size_t bi = 0; bi < nb; ++bi) {
                    double num = rate - lb_table_[((gi * nl + li) * na + ai) * nb + bi];
                    if (num <= 0.0) continue;  // the refined value can only be lower
                    ExponentParams ep(alphas_[ai], betas_[bi], gms_[gi].gamma, gms_[gi].mu, lam);
                    cells.push_back({num / ep.denominator(), static_cast<std::uint32_t>(gi),
                                     static_cast<std::uint32_t>(li), static_cast<std::uint32_t>(ai),
                                     static_cast<std::uint32_t>(bi)});
                }
        }
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
        if (a.f != b.f) return a.f > b.f;
        return std::tie(a.gm, a.la, a.aa, a.bb) < std::tie(b.gm, b.la, b.aa, b.bb);
    });

    double best = 0.0;
    ExponentParams best_ep(1.0, 1.0, 0.0, 0.0, lambdas_.front());

    // Guaranteed sweep at the largest alpha, beta for the two most violated
    // hyperplanes: there the relaxation is near-tight and the small-lambda
    // cells certify positivity even when the priority queue is starved.
    {
        std::vector<std::pair<double, std::size_t>> viol;
        for (std::size_t gi = 0; gi < gms_.size(); ++gi)
            viol.emplace_back(gms_[gi].a * r1 + gms_[gi].b * r2 - gms_[gi].c_hat, gi);
        std::sort(viol.begin(), viol.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        for (std::size_t rank = 0; rank < std::min<std::size_t>(2, viol.size()); ++rank) {
            if (viol[rank].first <= 0.0) break;
            std::size_t gi = viol[rank].second;
            for (std::size_t ai = na - 2; ai < na; ++ai)
                for (std::size_t li = 0; li < nl; ++li) {
                    double om = refined_omega(gi, li, ai, ai);
                    ExponentParams ep(alphas_[ai], betas_[ai], gms_[gi].gamma, gms_[gi].mu,
                                      lambdas_[li]);
                    double f = (ep.lambda * (gms_[gi].a * r1 + gms_[gi].b * r2) - om) /
                               ep.denominator();
                    if (f > best) {
                        best = f;
                        best_ep = ep;
                    }
                }
        }
    }

    int spent = 0;
    for (const Cell& c : cells) {
        if (c.f <= best) break;  // upper bounds are sorted: nothing better remains
        if (spent >= search_.max_refined_cells) break;
        ++spent;
        double om = refined_omega(c.gm, c.la, c.aa, c.bb);
        ExponentParams ep(alphas_[c.aa], betas_[c.bb], gms_[c.gm].gamma, gms_[c.gm].mu,
                          lambdas_[c.la]);
        double f = (ep.lambda * (gms_[c.gm].a * r1 + gms_[c.gm].b * r2) - om) / ep.denominator();
        if (f > best) {
            best = f;
            best_ep = ep;
        }
    }

    if (best > 0.0) {
        // local multiplicative polish of the continuous parameters
        std::size_t gm_best = 0;
        for (std::size_t gi = 0; gi < gms_.size(); ++gi)
            if (gms_[gi].gamma == best_ep.gamma && gms_[gi].mu == best_ep.mu) gm_best = gi;
        for (int round = 0; round < search_.polish_rounds; ++round) {
            bool improved = false;
            const double fac[2] = {0.7071067811865476, 1.4142135623730951};
            for (int which = 0; which < 3; ++which)
                for (double f : fac) {
                    ExponentParams ep = best_ep;
                    if (which == 0) ep = ExponentParams(ep.alpha * f, ep.beta, ep.gamma, ep.mu, ep.lambda);
                    if (which == 1) ep = ExponentParams(ep.alpha, ep.beta * f, ep.gamma, ep.mu, ep.lambda);
                    if (which == 2) ep = ExponentParams(ep.alpha, ep.beta, ep.gamma, ep.mu, ep.lambda * f);
                    const GmEntry& gm = gms_[gm_best];
                    double om = std::max(omega_ascent(gm, ep, 0xbeefULL + which * 2 + (f > 1.0)),
                                         omega_functional(gm.q_seed, ch_, ep));
                    double val = (ep.lambda * (gm.a * r1 + gm.b * r2) - om) / ep.denominator();
                    if (val > best) {
                        best = val;
                        best_ep = ep;
                        improved = true;
                    }
                }
            if (!improved) break;
        }
    }

    return {std::max(0.0, best), best_ep};
}

ExponentContext::Value exponent(double r1, double r2, const ChannelPair& ch,
                                const ExponentSearch& search) {
    ExponentContext ctx(ch, search);
    return ctx.exponent(r1, r2);
}

ConvexityReport convexity_check(const JointDistUXYZ& q, const ChannelPair& ch,
                                const ExponentParams& ep, const std::vector<double>& lambda_grid) {
    if (lambda_grid.size() < 5) throw ValidationError("convexity_check: need at least 5 lambdas");
    std::vector<double> lam = lambda_grid;
    std::sort(lam.begin(), lam.end());
    std::vector<double> om(lam.size());
    for (std::size_t i = 0; i < lam.size(); ++i) {
        ExponentParams e(ep.alpha, ep.beta, ep.gamma, ep.mu, lam[i]);
        om[i] = omega_functional(q, ch, e);
    }
    ConvexityReport rep;
    for (std::size_t i = 1; i + 1 < lam.size(); ++i) {
        double w = (lam[i + 1] - lam[i]) / (lam[i + 1] - lam[i - 1]);
        double chord = w * om[i - 1] + (1.0 - w) * om[i + 1];
        double d = chord - om[i];  // >= 0 under convexity
        if (d < -1e-9) {
            rep.pass = false;
            rep.violations.emplace_back(lam[i], d);
        }
    }
    return rep;
}

SlopeDecomposition slope_decomposition(const JointDistUXYZ& q, const ChannelPair& ch,
                                       const ExponentParams& ep) {
    SlopeDecomposition out{};
    out.e_omega = omega_slope_at_zero(q, ch, ep);

    double gb = 1.0 - ep.gamma, mb = 1.0 - ep.mu;
    double i1 = conditional_mutual_information(q, InfoQuantity::IXY_given_U);
    double i2 = conditional_mutual_information(q, InfoQuantity::IUZ);
    double i3 = conditional_mutual_information(q, InfoQuantity::IXY);

    // D(q_{Y|X} || W1 | q_X)
    std::vector<double> m_xy(q.nx * q.ny, 0.0), m_x(q.nx, 0.0);
    for (std::size_t u = 0; u < q.nu; ++u)
        for (std::size_t x = 0; x < q.nx; ++x)
            for (std::size_t y = 0; y < q.ny; ++y)
                for (std::size_t z = 0; z < q.nz; ++z) {
                    m_xy[x * q.ny + y] += q(u, x, y, z);
                    m_x[x] += q(u, x, y, z);
                }
    std::vector<double> cond(q.nx * q.ny, 0.0);
    std::vector<std::size_t> rows(q.nx);
    for (std::size_t x = 0; x < q.nx; ++x) {
        rows[x] = x;
        if (m_x[x] > 0.0)
            for (std::size_t y = 0; y < q.ny; ++y) cond[x * q.ny + y] = m_xy[x * q.ny + y] / m_x[x];
    }
    double d_yx = conditional_kl(cond, q.nx, q.ny, ch.w1, rows, m_x);

    auto term = [](double coef, double kl) { return coef > 0.0 ? -coef * kl : 0.0; };
    double info = ep.gamma * ep.mu * i1 + ep.gamma * mb * i2 + gb * i3;
    double shared = term(ep.alpha, kl_y_given_xzu(q, ch.w1)) +
                    term(ep.beta, kl_z_given_xyu(q, ch.w2)) +
                    term(ep.gamma * ep.mu, kl_y_given_xu(q, ch.w1)) + info;
    out.as_printed = shared;
    out.full = shared + term(gb, d_yx);
    return out;
}

}  // namespace abc
