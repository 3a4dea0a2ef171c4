#include "abc/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "abc/optim.hpp"

namespace abc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Weighted information sum for a structured p = p_U p_{X|U} W1 W2, evaluated
// straight from (p_U, p_{X|U}) without materializing the 4-D joint.
class WeightedInfoEval {
public:
    WeightedInfoEval(const ChannelPair& ch, double c1, double c2, double c3, std::size_t nu)
        : ch_(ch), c1_(c1), c2_(c2), c3_(c3), nu_(nu), nx_(ch.nx()), ny_(ch.ny()), nz_(ch.nz()),
          m_uxy_(nu * nx_ * ny_), m_ux_(nu * nx_), m_uy_(nu * ny_), m_uz_(nu * nz_),
          m_xy_(nx_ * ny_), m_x_(nx_), m_y_(ny_), m_z_(nz_) {}

    // x = [p_U | p_{X|U} row-major], every block normalized by the optimizer.
    double operator()(const std::vector<double>& x) {
        const double* pu = x.data();
        const double* pxgu = x.data() + nu_;
        std::fill(m_uxy_.begin(), m_uxy_.end(), 0.0);
        std::fill(m_ux_.begin(), m_ux_.end(), 0.0);
        std::fill(m_uy_.begin(), m_uy_.end(), 0.0);
        std::fill(m_uz_.begin(), m_uz_.end(), 0.0);
        std::fill(m_xy_.begin(), m_xy_.end(), 0.0);
        std::fill(m_x_.begin(), m_x_.end(), 0.0);
        std::fill(m_y_.begin(), m_y_.end(), 0.0);
        std::fill(m_z_.begin(), m_z_.end(), 0.0);

        for (std::size_t u = 0; u < nu_; ++u)
            for (std::size_t x_ = 0; x_ < nx_; ++x_) {
                double pux = pu[u] * pxgu[u * nx_ + x_];
                if (pux == 0.0) continue;
                m_ux_[u * nx_ + x_] += pux;
                m_x_[x_] += pux;
                for (std::size_t y = 0; y < ny_; ++y) {
                    double m = pux * ch_.w1(x_, y);
                    m_uxy_[(u * nx_ + x_) * ny_ + y] += m;
                    m_uy_[u * ny_ + y] += m;
                    m_xy_[x_ * ny_ + y] += m;
                    m_y_[y] += m;
                }
                for (std::size_t z = 0; z < nz_; ++z) {
                    double m = pux * ch_.w2(x_, z);
                    m_uz_[u * nz_ + z] += m;
                    m_z_[z] += m;
                }
            }

        double i_xy_u = 0.0, i_uz = 0.0, i_xy = 0.0;
        for (std::size_t u = 0; u < nu_; ++u)
            for (std::size_t x_ = 0; x_ < nx_; ++x_)
                for (std::size_t y = 0; y < ny_; ++y) {
                    double m = m_uxy_[(u * nx_ + x_) * ny_ + y];
                    if (m > 0.0)
                        i_xy_u += m * std::log(m * pu[u] / (m_ux_[u * nx_ + x_] * m_uy_[u * ny_ + y]));
                }
        for (std::size_t u = 0; u < nu_; ++u)
            for (std::size_t z = 0; z < nz_; ++z) {
                double m = m_uz_[u * nz_ + z];
                if (m > 0.0) i_uz += m * std::log(m / (pu[u] * m_z_[z]));
            }
        for (std::size_t x_ = 0; x_ < nx_; ++x_)
            for (std::size_t y = 0; y < ny_; ++y) {
                double m = m_xy_[x_ * ny_ + y];
                if (m > 0.0) i_xy += m * std::log(m / (m_x_[x_] * m_y_[y]));
            }
        return c1_ * i_xy_u + c2_ * i_uz + c3_ * i_xy;
    }

private:
    const ChannelPair& ch_;
    double c1_, c2_, c3_;
    std::size_t nu_, nx_, ny_, nz_;
    std::vector<double> m_uxy_, m_ux_, m_uy_, m_uz_, m_xy_, m_x_, m_y_, m_z_;
};

// Relaxed objective over the full joint simplex.
class TildeEval {
public:
    TildeEval(const ChannelPair& ch, double alpha, double beta, double c1, double c2, double c3,
              std::size_t nu)
        : ch_(ch), alpha_(alpha), beta_(beta), c1_(c1), c2_(c2), c3_(c3), nu_(nu), nx_(ch.nx()),
          ny_(ch.ny()), nz_(ch.nz()), m_u_(nu), m_ux_(nu * nx_), m_uy_(nu * ny_), m_uz_(nu * nz_),
          m_uxy_(nu * nx_ * ny_), m_uxz_(nu * nx_ * nz_), m_xy_(nx_ * ny_), m_x_(nx_), m_y_(ny_),
          m_z_(nz_) {}

    double operator()(const std::vector<double>& q) {
        std::fill(m_u_.begin(), m_u_.end(), 0.0);
        std::fill(m_ux_.begin(), m_ux_.end(), 0.0);
        std::fill(m_uy_.begin(), m_uy_.end(), 0.0);
        std::fill(m_uz_.begin(), m_uz_.end(), 0.0);
        std::fill(m_uxy_.begin(), m_uxy_.end(), 0.0);
        std::fill(m_uxz_.begin(), m_uxz_.end(), 0.0);
        std::fill(m_xy_.begin(), m_xy_.end(), 0.0);
        std::fill(m_x_.begin(), m_x_.end(), 0.0);
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
                        m_ux_[u * nx_ + x] += m;
                        m_uy_[u * ny_ + y] += m;
                        m_uz_[u * nz_ + z] += m;
                        m_uxy_[(u * nx_ + x) * ny_ + y] += m;
                        m_uxz_[(u * nx_ + x) * nz_ + z] += m;
                        m_xy_[x * ny_ + y] += m;
                        m_x_[x] += m;
                        m_y_[y] += m;
                        m_z_[z] += m;
                    }

        double d1 = 0.0, d2 = 0.0;
        i = 0;
        for (std::size_t u = 0; u < nu_; ++u)
            for (std::size_t x = 0; x < nx_; ++x)
                for (std::size_t y = 0; y < ny_; ++y)
                    for (std::size_t z = 0; z < nz_; ++z, ++i) {
                        double m = q[i];
                        if (m == 0.0) continue;
                        double w1 = ch_.w1(x, y), w2 = ch_.w2(x, z);
                        if (w1 <= 0.0 || w2 <= 0.0) return kNegInf;
                        d1 += m * std::log(m / (m_uxz_[(u * nx_ + x) * nz_ + z] * w1));
                        d2 += m * std::log(m / (m_uxy_[(u * nx_ + x) * ny_ + y] * w2));
                    }
        // divergences are nonnegative; clamp rounding residue so huge alpha,
        // beta cannot amplify a -1e-17 into a visible objective increase
        double div_term = -alpha_ * std::max(0.0, d1) - beta_ * std::max(0.0, d2);

        double i_xy_u = 0.0, i_uz = 0.0, i_xy = 0.0;
        for (std::size_t u = 0; u < nu_; ++u)
            for (std::size_t x = 0; x < nx_; ++x)
                for (std::size_t y = 0; y < ny_; ++y) {
                    double m = m_uxy_[(u * nx_ + x) * ny_ + y];
                    if (m > 0.0)
                        i_xy_u += m * std::log(m * m_u_[u] / (m_ux_[u * nx_ + x] * m_uy_[u * ny_ + y]));
                }
        for (std::size_t u = 0; u < nu_; ++u)
            for (std::size_t z = 0; z < nz_; ++z) {
                double m = m_uz_[u * nz_ + z];
                if (m > 0.0) i_uz += m * std::log(m / (m_u_[u] * m_z_[z]));
            }
        for (std::size_t x = 0; x < nx_; ++x)
            for (std::size_t y = 0; y < ny_; ++y) {
                double m = m_xy_[x * ny_ + y];
                if (m > 0.0) i_xy += m * std::log(m / (m_x_[x] * m_y_[y]));
            }
        return div_term + c1_ * i_xy_u + c2_ * i_uz + c3_ * i_xy;
    }

private:
    const ChannelPair& ch_;
    double alpha_, beta_, c1_, c2_, c3_;
    std::size_t nu_, nx_, ny_, nz_;
    std::vector<double> m_u_, m_ux_, m_uy_, m_uz_, m_uxy_, m_uxz_, m_xy_, m_x_, m_y_, m_z_;
};

std::vector<std::vector<double>> corner_starts(std::size_t nu, std::size_t nx, int cap) {
    std::vector<std::vector<double>> out;
    // All deterministic p_{X|U}: the optimal conditional is often a corner.
    std::size_t total = 1;
    for (std::size_t u = 0; u < nu; ++u) total *= nx;
    for (std::size_t code = 0; code < total && out.size() < static_cast<std::size_t>(cap); ++code) {
        std::vector<double> x(nu + nu * nx, 0.0);
        for (std::size_t u = 0; u < nu; ++u) x[u] = 1.0 / static_cast<double>(nu);
        std::size_t c = code;
        for (std::size_t u = 0; u < nu; ++u) {
            x[nu + u * nx + (c % nx)] = 1.0;
            c /= nx;
        }
        out.push_back(std::move(x));
    }
    return out;
}

void run_indexed(std::size_t n, const std::function<void(std::size_t)>& task) {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    std::size_t nthreads = std::min<std::size_t>(hw, n);
    if (nthreads <= 1) {
        for (std::size_t i = 0; i < n; ++i) task(i);
        return;
    }
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nthreads; ++t)
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += nthreads) task(i);
        });
    for (auto& th : pool) th.join();
}

std::vector<std::array<double, 2>> clip_polygon(std::vector<std::array<double, 2>> poly, double a,
                                                double b, double c) {
    if (poly.empty()) return poly;
    std::vector<std::array<double, 2>> out;
    out.reserve(poly.size() + 1);
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const auto& p0 = poly[i];
        const auto& p1 = poly[(i + 1) % poly.size()];
        double f0 = a * p0[0] + b * p0[1] - c;
        double f1 = a * p1[0] + b * p1[1] - c;
        if (f0 <= 0.0) out.push_back(p0);
        if ((f0 < 0.0 && f1 > 0.0) || (f0 > 0.0 && f1 <= 0.0)) {
            double t = f0 / (f0 - f1);
            out.push_back({p0[0] + t * (p1[0] - p0[0]), p0[1] + t * (p1[1] - p0[1])});
        }
    }
    return out;
}

}  // namespace

HyperplaneParams::HyperplaneParams(double g, double m) : gamma(g), mu(m) {
    if (!(g >= 0.0 && g <= 1.0)) throw ValidationError("HyperplaneParams: gamma outside [0,1]");
    if (!(m >= 0.0 && m <= 0.5)) throw ValidationError("HyperplaneParams: mu outside [0,1/2]");
}

std::array<double, 3> eval_C_p(const AuxInputLaw& aux, const ChannelPair& ch) {
    JointDistUXYZ q = joint_from_aux(aux, ch);
    return {conditional_mutual_information(q, InfoQuantity::IXY_given_U),
            conditional_mutual_information(q, InfoQuantity::IUZ),
            conditional_mutual_information(q, InfoQuantity::IXY)};
}

HyperplaneValue hyperplane_value(const HyperplaneParams& hp, const ChannelPair& ch,
                                 const RegionBudget& budget) {
    const std::size_t nu = ch.aux_size_region();
    const std::size_t nx = ch.nx();
    const double c1 = hp.gamma * hp.mu;
    const double c2 = hp.gamma * (1.0 - hp.mu);
    const double c3 = 1.0 - hp.gamma;

    WeightedInfoEval eval(ch, c1, c2, c3, nu);
    std::vector<std::size_t> blocks;
    blocks.push_back(nu);
    for (std::size_t u = 0; u < nu; ++u) blocks.push_back(nx);

    AscentOptions opts;
    opts.starts = budget.starts;
    opts.iters = budget.iters;
    opts.seed = budget.seed;
    auto result = maximize_on_simplices(
        blocks, [&eval](const std::vector<double>& x) { return eval(x); }, opts,
        corner_starts(nu, nx, budget.max_corner_starts));

    AuxInputLaw arg;
    arg.p_u = ProbDist(std::vector<double>(result.x.begin(), result.x.begin() + static_cast<long>(nu)));
    arg.p_xgu = StochasticMatrix(nu, nx,
                                 std::vector<double>(result.x.begin() + static_cast<long>(nu), result.x.end()));
    return {result.value, std::move(arg)};
}

TildeValue tilde_hyperplane_value(double alpha, double beta, const HyperplaneParams& hp,
                                  const ChannelPair& ch, const RegionBudget& budget,
                                  const std::vector<JointDistUXYZ>& warm) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw ValidationError("tilde_hyperplane_value: alpha, beta must be positive");
    const std::size_t nu = ch.aux_size_omega();
    const double c1 = hp.gamma * hp.mu;
    const double c2 = hp.gamma * (1.0 - hp.mu);
    const double c3 = 1.0 - hp.gamma;

    TildeEval eval(ch, alpha, beta, c1, c2, c3, nu);
    std::vector<std::size_t> blocks{nu * ch.nx() * ch.ny() * ch.nz()};

    std::vector<std::vector<double>> extra;
    // The structured argmax of the unrelaxed problem has both divergences 0;
    // it anchors the search and guarantees value >= C^(gamma,mu) estimate.
    HyperplaneValue base = hyperplane_value(hp, ch, budget);
    extra.push_back(pad_aux(joint_from_aux(base.argmax, ch), nu).mass);
    for (const auto& q : warm) extra.push_back(pad_aux(q, nu).mass);

    AscentOptions opts;
    opts.starts = budget.starts;
    opts.iters = budget.iters;
    opts.seed = budget.seed ^ 0xabcdULL;
    auto result = maximize_on_simplices(
        blocks, [&eval](const std::vector<double>& q) { return eval(q); }, opts, extra);

    // the exact (un-nudged) seed points are hard floors: at the structured
    // point both divergences vanish, so the value dominates C^(gamma,mu)
    JointDistUXYZ arg(nu, ch.nx(), ch.ny(), ch.nz());
    arg.mass = result.x;
    double best = result.value;
    for (const auto& s : extra) {
        double v = eval(s);
        if (v > best) {
            best = v;
            arg.mass = s;
        }
    }
    return {best, std::move(arg)};
}

RegionBoundary region_boundary(const ChannelPair& ch, const GridPlan& grid,
                               const RegionBudget& budget) {
    if (grid.n_gamma < 1 || grid.n_mu < 1) throw ValidationError("region_boundary: empty grid");
    const std::size_t n = static_cast<std::size_t>(grid.n_gamma) * static_cast<std::size_t>(grid.n_mu);

    RegionBoundary rb;
    rb.halfplanes.resize(n);
    std::vector<char> ok(n, 1);
    run_indexed(n, [&](std::size_t i) {
        int gi = static_cast<int>(i) / grid.n_mu;
        int mi = static_cast<int>(i) % grid.n_mu;
        double g = grid.n_gamma == 1 ? 0.0 : static_cast<double>(gi) / (grid.n_gamma - 1);
        double m = grid.n_mu == 1 ? 0.0 : 0.5 * static_cast<double>(mi) / (grid.n_mu - 1);
        try {
            RegionBudget b = budget;
            b.seed = budget.seed + i * 0x51ULL;
            HyperplaneValue hv = hyperplane_value(HyperplaneParams(g, m), ch, b);
            double gb = 1.0 - g, mb = 1.0 - m;
            rb.halfplanes[i] = {g * m + gb, g * mb + gb, hv.value, g, m};
        } catch (const std::exception&) {
            ok[i] = 0;
        }
    });

    std::vector<RegionBoundary::Halfplane> kept;
    for (std::size_t i = 0; i < n; ++i) {
        if (ok[i])
            kept.push_back(rb.halfplanes[i]);
        else
            rb.complete = false;
    }
    rb.halfplanes = std::move(kept);

    double cmax = 1.0;
    for (const auto& h : rb.halfplanes) cmax = std::max(cmax, h.c);
    std::vector<std::array<double, 2>> poly{
        {0.0, 0.0}, {2.0 * cmax + 1.0, 0.0}, {2.0 * cmax + 1.0, 2.0 * cmax + 1.0}, {0.0, 2.0 * cmax + 1.0}};
    for (const auto& h : rb.halfplanes) poly = clip_polygon(std::move(poly), h.a, h.b, h.c);

    // dedup within 1e-9
    std::vector<std::array<double, 2>> verts;
    for (const auto& p : poly) {
        bool dup = false;
        for (const auto& v : verts)
            if (std::abs(v[0] - p[0]) < 1e-9 && std::abs(v[1] - p[1]) < 1e-9) dup = true;
        if (!dup) verts.push_back(p);
    }
    rb.vertices = std::move(verts);
    return rb;
}

Membership region_membership(double r1, double r2, const RegionBoundary& boundary, double tol) {
    if (r1 < -tol || r2 < -tol) return Membership::Outside;
    // The axes do not count as boundary: (0,0) is interior. Only the region
    // halfplanes classify.
    double slack = kInf;
    for (const auto& h : boundary.halfplanes) {
        double norm = std::hypot(h.a, h.b);
        if (norm <= 0.0) continue;
        slack = std::min(slack, (h.c - h.a * r1 - h.b * r2) / norm);
    }
    if (slack > tol) return Membership::Inside;
    if (slack < -tol) return Membership::Outside;
    return Membership::Boundary;
}

double ba_capacity(const StochasticMatrix& w, double tol) {
    const std::size_t nx = w.in_size, ny = w.out_size;
    std::vector<double> p(nx, 1.0 / static_cast<double>(nx)), py(ny), c(nx);
    double lo = 0.0, hi = kInf;
    const int cap = 200000;
    for (int it = 0; it < cap; ++it) {
        std::fill(py.begin(), py.end(), 0.0);
        for (std::size_t x = 0; x < nx; ++x)
            for (std::size_t y = 0; y < ny; ++y) py[y] += p[x] * w(x, y);
        for (std::size_t x = 0; x < nx; ++x) {
            double d = 0.0;
            for (std::size_t y = 0; y < ny; ++y)
                if (w(x, y) > 0.0) d += w(x, y) * std::log(w(x, y) / py[y]);
            c[x] = d;
        }
        double smax = *std::max_element(c.begin(), c.end());
        double s = 0.0;
        for (std::size_t x = 0; x < nx; ++x) s += p[x] * std::exp(c[x] - smax);
        lo = smax + std::log(s);
        hi = smax;
        if (hi - lo < tol) return 0.5 * (lo + hi);
        double tot = 0.0;
        for (std::size_t x = 0; x < nx; ++x) {
            p[x] *= std::exp(c[x] - smax);
            tot += p[x];
        }
        for (std::size_t x = 0; x < nx; ++x) p[x] /= tot;
    }
    throw ValidationError("ba_capacity: no convergence, bracket [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
}

JointDistUXYZ pad_aux(const JointDistUXYZ& q, std::size_t nu_target) {
    if (nu_target < q.nu) throw ValidationError("pad_aux: target smaller than source");
    JointDistUXYZ out(nu_target, q.nx, q.ny, q.nz);
    for (std::size_t u = 0; u < q.nu; ++u)
        for (std::size_t x = 0; x < q.nx; ++x)
            for (std::size_t y = 0; y < q.ny; ++y)
                for (std::size_t z = 0; z < q.nz; ++z)
                    out.at(u, x, y, z) = q(u, x, y, z);
    return out;
}

}  // namespace abc
