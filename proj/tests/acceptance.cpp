// End-to-end acceptance checks: one pass/fail line per criterion, nonzero exit
// if any fail. Tolerances and time limits are pinned here on purpose.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "abc/exponent.hpp"
#include "abc/region.hpp"
#include "abc/runio.hpp"
#include "abc/verifier.hpp"

using namespace abc;
namespace fs = std::filesystem;

namespace {

const double kLn2 = std::log(2.0);
const double kBscCap01 = kLn2 - (-(0.9 * std::log(0.9) + 0.1 * std::log(0.1)));

ChannelPair mixed_pair() {
    return {StochasticMatrix::bsc(0.1), StochasticMatrix::bsc(0.3)};
}

struct Check {
    int failures = 0;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            ++failures;
            detail << "  violated: " << what << "\n";
        }
    }
};

int g_exit = 0;

void criterion(int num, const std::string& name, double time_limit_s,
               const std::function<void(Check&)>& body) {
    Check c;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.require(false, std::string("unexpected exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.require(secs <= time_limit_s,
              "runtime " + g9(secs) + "s exceeds " + g9(time_limit_s) + "s");
    std::printf("%s criterion %d: %s (%.1fs)\n", c.failures ? "FAIL" : "PASS", num, name.c_str(),
                secs);
    if (c.failures) {
        std::fputs(c.detail.str().c_str(), stdout);
        g_exit = 1;
    }
    std::fflush(stdout);
}

double polygon_max(const RegionBoundary& rb, int coord) {
    double m = 0.0;
    for (const auto& v : rb.vertices) m = std::max(m, v[coord]);
    return m;
}

// largest violation of any region halfplane, normalized to euclidean distance
double max_violation(double r1, double r2, const RegionBoundary& rb) {
    double worst = -1e300;
    for (const auto& h : rb.halfplanes) {
        double norm = std::hypot(h.a, h.b);
        if (norm < 1e-12) continue;
        worst = std::max(worst, (h.a * r1 + h.b * r2 - h.c) / norm);
    }
    return worst;
}

JointDistUXYZ random_joint(std::size_t nu, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.02, 1.0);
    JointDistUXYZ q(nu, 2, 2, 2);
    double s = 0.0;
    for (double& m : q.mass) {
        m = uni(rng);
        s += m;
    }
    for (double& m : q.mass) m /= s;
    return q;
}

BlockCode standard_code(int n, int K, int L, const ChannelPair& ch) {
    std::vector<std::vector<std::size_t>> words;
    for (int kl = 0; kl < K * L; ++kl) {
        std::vector<std::size_t> w;
        int v = kl;
        for (int t = 0; t < n; ++t) {
            w.push_back(static_cast<std::size_t>(v) % ch.nx());
            v /= static_cast<int>(ch.nx());
        }
        words.push_back(w);
    }
    return make_deterministic_code(n, K, L, words, ch);
}

}  // namespace

int main() {
    // 1. single-user capacity of BSC(0.1)
    criterion(1, "alternating-maximization capacity, BSC(0.1)", 1.0, [](Check& c) {
        double cap = ba_capacity(StochasticMatrix::bsc(0.1), 1e-9);
        c.require(std::abs(cap - kBscCap01) <= 1e-6, "capacity off closed form: " + g9(cap));
    });

    // 2. degenerate second channel: the region collapses to a segment
    criterion(2, "region collapse with an uninformative Z channel", 30.0, [](Check& c) {
        ChannelPair ch(StochasticMatrix::identity(2), StochasticMatrix::uniform_rows(2, 2));
        RegionBoundary rb = region_boundary(ch, GridPlan{}, RegionBudget{});
        c.require(rb.complete, "incomplete boundary");
        c.require(polygon_max(rb, 1) <= 1e-3, "max R2 = " + g9(polygon_max(rb, 1)));
        c.require(std::abs(polygon_max(rb, 0) - kLn2) <= 1e-3,
                  "max R1 = " + g9(polygon_max(rb, 0)));
    });

    // 3. identical BSC components: the region is the triangle R1 + R2 <= C
    criterion(3, "identical-BSC triangle and membership queries", 60.0, [](Check& c) {
        ChannelPair ch(StochasticMatrix::bsc(0.1), StochasticMatrix::bsc(0.1));
        RegionBoundary rb = region_boundary(ch, GridPlan{}, RegionBudget{});
        c.require(rb.complete, "incomplete boundary");
        for (const auto& v : rb.vertices) {
            bool on_axis = v[0] <= 1e-6 || v[1] <= 1e-6;
            bool on_diag = std::abs(v[0] + v[1] - kBscCap01) <= 2e-3;
            c.require(on_axis || on_diag,
                      "vertex off triangle: (" + g9(v[0]) + ", " + g9(v[1]) + ")");
        }
        c.require(region_membership(0.0, 0.0, rb, 1e-6) == Membership::Inside, "(0,0) not inside");
        c.require(region_membership(kBscCap01, 0.0, rb, 1e-4) == Membership::Boundary,
                  "(C,0) not boundary");
        c.require(region_membership(kBscCap01 + 0.1, 0.0, rb, 1e-6) == Membership::Outside,
                  "(C+0.1,0) not outside");
    });

    // 4. per-joint lambda diagnostics on random joints
    criterion(4, "moment functional convexity and zero slope on 200 joints", 10.0, [](Check& c) {
        ChannelPair ch = mixed_pair();
        std::vector<double> grid;
        for (int i = 0; i < 9; ++i) grid.push_back(std::ldexp(1.0, i - 6));
        for (std::uint64_t t = 0; t < 200; ++t) {
            JointDistUXYZ q = random_joint(1 + t % 3, 0xace0 + t);
            ExponentParams ep(1.0, 1.0, 0.5, 0.25, 1.0);
            ConvexityReport rep = convexity_check(q, ch, ep, grid);
            c.require(rep.pass, "convexity violation at joint " + std::to_string(t));
            double fd = omega_functional(q, ch, ExponentParams(1.0, 1.0, 0.5, 0.25, 1e-6)) / 1e-6;
            c.require(std::abs(fd - omega_slope_at_zero(q, ch, ep)) <= 1e-4,
                      "slope mismatch at joint " + std::to_string(t));
            if (c.failures) break;
        }
    });

    // 5. the exponent vanishes inside the region and is positive outside it
    criterion(5, "exponent sign pattern at 20 interior and 20 exterior rates", 600.0, [](Check& c) {
        ChannelPair ch = mixed_pair();
        RegionBoundary rb = region_boundary(ch, GridPlan{33, 17}, RegionBudget{});
        c.require(rb.complete, "incomplete boundary");

        // interior: grid scan of the bounding box, keep strictly inside points
        double mr1 = polygon_max(rb, 0), mr2 = polygon_max(rb, 1);
        std::vector<std::array<double, 2>> inside_all;
        for (int i = 0; i < 25; ++i)
            for (int j = 0; j < 25; ++j) {
                double r1 = mr1 * (i + 0.5) / 25.0, r2 = mr2 * (j + 0.5) / 25.0;
                if (region_membership(r1, r2, rb, 1e-6) == Membership::Inside)
                    inside_all.push_back({r1, r2});
            }
        c.require(inside_all.size() >= 20, "could not sample 20 interior rates");
        std::vector<std::array<double, 2>> interior;
        for (std::size_t i = 0; i < inside_all.size() && interior.size() < 20;
             i += std::max<std::size_t>(1, inside_all.size() / 20))
            interior.push_back(inside_all[i]);

        // exterior: each supporting halfplane's polygon support point, pushed
        // outward along that halfplane's own unit normal
        std::vector<std::array<double, 2>> exterior;
        for (const auto& h : rb.halfplanes) {
            double norm = std::hypot(h.a, h.b);
            if (norm < 1e-12) continue;
            std::array<double, 2> sup = rb.vertices.front();
            for (const auto& v : rb.vertices)
                if (h.a * v[0] + h.b * v[1] > h.a * sup[0] + h.b * sup[1]) sup = v;
            double r1 = sup[0] + 0.07 * h.a / norm, r2 = sup[1] + 0.07 * h.b / norm;
            if (r1 < 0.0 || r2 < 0.0) continue;
            if (max_violation(r1, r2, rb) < 0.05) continue;
            bool dup = false;
            for (const auto& e : exterior)
                if (std::abs(e[0] - r1) < 1e-3 && std::abs(e[1] - r2) < 1e-3) dup = true;
            if (dup) continue;
            exterior.push_back({r1, r2});
            if (exterior.size() >= 20) break;
        }
        c.require(exterior.size() >= 20, "could not sample 20 exterior rates, got " +
                                             std::to_string(exterior.size()));

        ExponentContext ctx(ch, ExponentSearch{});
        for (const auto& p : interior)
            c.require(ctx.exponent(p[0], p[1]).value <= 1e-4,
                      "interior F(" + g9(p[0]) + "," + g9(p[1]) + ") > 1e-4");
        for (const auto& p : exterior)
            c.require(ctx.exponent(p[0], p[1]).value >= 1e-6,
                      "exterior F(" + g9(p[0]) + "," + g9(p[1]) + ") < 1e-6");
    });

    // 6. the exponential bound dominates every deterministic blocklength-2 code
    criterion(6, "per-code exponential bound over all deterministic encoders", 600.0,
              [](Check& c) {
        ChannelPair ch = mixed_pair();
        std::vector<ExponentParams> params;
        for (double a : {1.0, 4.0})
            for (double g : {0.0, 0.5, 1.0})
                for (double m : {0.0, 0.5})
                    for (double lam : {0.25, 1.0}) params.emplace_back(a, a, g, m, lam);

        OmegaBudget ob;
        ob.lattice = true;
        ob.lattice_den = 6;
        ob.lattice_refine = 4;
        ob.starts = 8;
        ob.iters = 120;
        std::vector<OmegaResult> omegas;
        for (const auto& ep : params) {
            omegas.push_back(omega_max(ch, ep, ob));
            c.require(omegas.back().certified, "lattice Omega not certified");
        }

        for (auto [K, L] : {std::pair{2, 2}, {4, 2}}) {
            // exhaustive: every map from the K*L messages into length-2 words
            std::size_t n_words = 4, n_msg = static_cast<std::size_t>(K * L);
            std::size_t total = pow_sz(n_words, static_cast<int>(n_msg));
            double worst_pc = 0.0;
            for (std::size_t e = 0; e < total; ++e) {
                std::vector<std::vector<std::size_t>> words;
                std::size_t v = e;
                for (std::size_t m = 0; m < n_msg; ++m) {
                    words.push_back({v % 2, (v / 2) % 2});
                    v /= 4;
                }
                BlockCode code =
                    optimize_decoders(make_deterministic_code(2, K, L, words, ch), ch, 6);
                worst_pc = std::max(worst_pc, exact_correct_probability(code, ch));
            }
            double r1 = std::log(static_cast<double>(K)) / 2.0;
            double r2 = std::log(static_cast<double>(L)) / 2.0;
            for (std::size_t i = 0; i < params.size(); ++i) {
                double f = exponent_at_params(r1, r2, params[i], omegas[i]);
                double bound = 6.0 * std::exp(-2.0 * f);
                c.require(bound - worst_pc >= -1e-12,
                          "bound below max P_c for K=" + std::to_string(K) +
                              " L=" + std::to_string(L) + " tuple " + std::to_string(i));
            }
        }
    });

    // 7. the information-spectrum bound for arbitrary test distributions
    criterion(7, "spectrum bound: 10 codes x (induced + 100 random) x 3 etas", 300.0,
              [](Check& c) {
        ChannelPair ch = mixed_pair();
        std::vector<BlockCode> codes;
        for (auto [n, K, L] : std::vector<std::array<int, 3>>{{1, 1, 1}, {1, 2, 1}, {1, 1, 2},
                                                              {1, 2, 2}, {2, 2, 1}, {2, 1, 2},
                                                              {2, 2, 2}, {2, 4, 1}, {2, 4, 2},
                                                              {2, 2, 4}})
            codes.push_back(optimize_decoders(standard_code(n, K, L, ch), ch));
        for (const auto& code : codes)
            for (double eta : {0.05, 0.1, 0.5}) {
                BoundReport ind = check_lemma1_bound(code, ch, lemma1_induced_q(code, ch), eta);
                c.require(ind.pass, "induced Q fails at eta=" + g9(eta));
                for (std::uint64_t s = 0; s < 100; ++s) {
                    BoundReport rnd =
                        check_lemma1_bound(code, ch, lemma1_random_q(code, ch, s + 1), eta);
                    if (!rnd.pass) {
                        c.require(false, "random Q seed " + std::to_string(s + 1) +
                                             " fails at eta=" + g9(eta));
                        break;
                    }
                }
            }
    });

    // 8. the relaxation tightens to the structured value as the penalties grow
    criterion(8, "relaxation convergence along a doubling penalty ladder", 600.0, [](Check& c) {
        ChannelPair ch = mixed_pair();
        RegionBudget budget;
        std::vector<std::pair<double, double>> gms = {{0.0, 0.0}, {0.1, 0.05}, {0.25, 0.1},
                                                      {0.5, 0.0}, {0.5, 0.25}, {0.5, 0.5},
                                                      {0.75, 0.3}, {1.0, 0.0}, {1.0, 0.25},
                                                      {1.0, 0.5}};
        for (auto [g, m] : gms) {
            HyperplaneParams hp(g, m);
            double c_hat = hyperplane_value(hp, ch, budget).value;
            std::vector<double> alphas;
            for (int i = 0; i <= 20; ++i) alphas.push_back(std::ldexp(1.0, i));
            // from the stiffest penalty down, warm-starting each level with the
            // argmax of the level above (whose objective can only be smaller)
            std::vector<double> est(alphas.size());
            std::vector<JointDistUXYZ> warm;
            for (std::size_t i = alphas.size(); i-- > 0;) {
                TildeValue tv = tilde_hyperplane_value(alphas[i], alphas[i], hp, ch, budget, warm);
                est[i] = tv.value;
                warm = {tv.argmax};
            }
            for (std::size_t i = 0; i + 1 < est.size(); ++i)
                c.require(est[i] >= est[i + 1] - 1e-12,
                          "not monotone at alpha=" + g9(alphas[i]) + " gm=(" + g9(g) + "," +
                              g9(m) + ")");
            c.require(est.back() >= c_hat - 1e-9,
                      "relaxation below structured value at gm=(" + g9(g) + "," + g9(m) + ")");
            c.require(est.back() - c_hat <= 5e-3,
                      "relaxation gap " + g9(est.back() - c_hat) + " at gm=(" + g9(g) + "," +
                          g9(m) + ")");
        }
    });

    // 9. reruns with the same seed reproduce outputs byte for byte
    criterion(9, "bitwise deterministic reruns", 120.0, [](Check& c) {
        ChannelPair ch = mixed_pair();
        RegionBudget b;
        b.starts = 2;
        b.iters = 60;
        b.seed = 11;
        auto emit = [&](const fs::path& path) {
            RegionBoundary rb = region_boundary(ch, GridPlan{9, 5}, b);
            std::vector<std::vector<double>> rows;
            for (const auto& v : rb.vertices) rows.push_back({v[0], v[1]});
            write_csv(path.string(), RunMeta{0x1234, 11}, "r1,r2", rows);
        };
        fs::path dir = fs::temp_directory_path() / "abc_acceptance_repro";
        fs::create_directories(dir);
        emit(dir / "a.csv");
        emit(dir / "b.csv");
        c.require(read_file((dir / "a.csv").string()) == read_file((dir / "b.csv").string()),
                  "region outputs differ between reruns");

        ExponentSearch s;
        s.grid = {9, 5};
        s.region_budget = b;
        ExponentContext c1(ch, s), c2(ch, s);
        double f1 = c1.exponent(0.5, 0.3).value, f2 = c2.exponent(0.5, 0.3).value;
        c.require(f1 == f2, "exponent values differ between reruns");
    });

    return g_exit;
}
