#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "abc/prob.hpp"
#include "doctest.h"

using namespace abc;

namespace {

JointDistUXYZ random_joint(std::size_t nu, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.01, 1.0);
    JointDistUXYZ q(nu, 2, 2, 2);
    double s = 0.0;
    for (double& m : q.mass) {
        m = uni(rng);
        s += m;
    }
    for (double& m : q.mass) m /= s;
    return q;
}

// entropy-based oracle: I(A;B) = H(A) + H(B) - H(AB)
double mi_entropy_oracle(const std::vector<double>& joint, std::size_t na, std::size_t nb) {
    auto h = [](const std::vector<double>& p) {
        double acc = 0.0;
        for (double v : p) acc -= xlogx(v);
        return acc;
    };
    std::vector<double> pa(na, 0.0), pb(nb, 0.0);
    for (std::size_t a = 0; a < na; ++a)
        for (std::size_t b = 0; b < nb; ++b) {
            pa[a] += joint[a * nb + b];
            pb[b] += joint[a * nb + b];
        }
    return h(pa) + h(pb) - h(joint);
}

}  // namespace

TEST_CASE("ProbDist validation") {
    CHECK_THROWS_AS(ProbDist({0.5, 0.6}), ValidationError);       // off by 0.1
    CHECK_THROWS_AS(ProbDist({0.5, -0.5, 1.0}), ValidationError); // negative
    ProbDist ok({0.25, 0.75});
    CHECK(ok[1] == 0.75);

    // within the renormalization window: accepted and rescaled
    ProbDist near({0.5, 0.5 + 3e-10});
    double s = near[0] + near[1];
    CHECK(s == doctest::Approx(1.0).epsilon(1e-14));

    // beyond the window: rejected
    CHECK_THROWS_AS(ProbDist({0.5, 0.5 + 3e-9}), ValidationError);
}

TEST_CASE("ProbDist factories") {
    ProbDist u = ProbDist::uniform(4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(u[i] == 0.25);
    ProbDist p = ProbDist::point(3, 1);
    CHECK(p[0] == 0.0);
    CHECK(p[1] == 1.0);
}

TEST_CASE("StochasticMatrix validation and factories") {
    CHECK_THROWS_AS(StochasticMatrix(1, 2, {0.7, 0.7}), ValidationError);
    StochasticMatrix b = StochasticMatrix::bsc(0.1);
    CHECK(b(0, 0) == 0.9);
    CHECK(b(1, 0) == 0.1);
    StochasticMatrix id = StochasticMatrix::identity(3);
    CHECK(id(2, 2) == 1.0);
    CHECK(id(2, 0) == 0.0);
}

TEST_CASE("entropy") {
    CHECK(entropy(ProbDist::uniform(8)) == doctest::Approx(std::log(8.0)).epsilon(1e-14));
    CHECK(entropy(ProbDist::point(5, 2)) == 0.0);
}

TEST_CASE("mutual information") {
    // independent
    std::vector<double> ind{0.25, 0.25, 0.25, 0.25};
    CHECK(mutual_information(ind, 2, 2) == doctest::Approx(0.0).epsilon(1e-14));
    // perfectly correlated
    std::vector<double> cor{0.5, 0.0, 0.0, 0.5};
    CHECK(mutual_information(cor, 2, 2) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    // random tables against the entropy identity
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(0.01, 1.0);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> j(6);
        double s = 0.0;
        for (double& v : j) {
            v = uni(rng);
            s += v;
        }
        for (double& v : j) v /= s;
        CHECK(mutual_information(j, 2, 3) == doctest::Approx(mi_entropy_oracle(j, 2, 3)).epsilon(1e-10));
    }
}

TEST_CASE("conditional mutual information against brute-force oracle") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        JointDistUXYZ q = random_joint(3, seed);
        // oracle: marginalize independently, different loop order
        std::vector<double> p_uxy(q.nu * q.nx * q.ny, 0.0), p_uz(q.nu * q.nz, 0.0),
            p_xy(q.nx * q.ny, 0.0), p_u(q.nu, 0.0);
        for (std::size_t z = 0; z < q.nz; ++z)
            for (std::size_t y = 0; y < q.ny; ++y)
                for (std::size_t x = 0; x < q.nx; ++x)
                    for (std::size_t u = 0; u < q.nu; ++u) {
                        double m = q(u, x, y, z);
                        p_uxy[(u * q.nx + x) * q.ny + y] += m;
                        p_uz[u * q.nz + z] += m;
                        p_xy[x * q.ny + y] += m;
                        p_u[u] += m;
                    }
        // I(X;Y|U) = sum p(u,x,y) ln( p(u,x,y) p(u) / (p(u,x) p(u,y)) )
        std::vector<double> p_ux(q.nu * q.nx, 0.0), p_uy(q.nu * q.ny, 0.0);
        for (std::size_t u = 0; u < q.nu; ++u)
            for (std::size_t x = 0; x < q.nx; ++x)
                for (std::size_t y = 0; y < q.ny; ++y) {
                    p_ux[u * q.nx + x] += p_uxy[(u * q.nx + x) * q.ny + y];
                    p_uy[u * q.ny + y] += p_uxy[(u * q.nx + x) * q.ny + y];
                }
        double ixy_u = 0.0;
        for (std::size_t u = 0; u < q.nu; ++u)
            for (std::size_t x = 0; x < q.nx; ++x)
                for (std::size_t y = 0; y < q.ny; ++y) {
                    double m = p_uxy[(u * q.nx + x) * q.ny + y];
                    if (m > 0.0)
                        ixy_u += m * std::log(m * p_u[u] / (p_ux[u * q.nx + x] * p_uy[u * q.ny + y]));
                }
        CHECK(conditional_mutual_information(q, InfoQuantity::IXY_given_U) ==
              doctest::Approx(ixy_u).epsilon(1e-10));
        CHECK(conditional_mutual_information(q, InfoQuantity::IUZ) ==
              doctest::Approx(mi_entropy_oracle(p_uz, q.nu, q.nz)).epsilon(1e-10));
        CHECK(conditional_mutual_information(q, InfoQuantity::IXY) ==
              doctest::Approx(mi_entropy_oracle(p_xy, q.nx, q.ny)).epsilon(1e-10));
        // all three are nonnegative
        CHECK(conditional_mutual_information(q, InfoQuantity::IXY_given_U) >= -1e-14);
        CHECK(conditional_mutual_information(q, InfoQuantity::IUZ) >= -1e-14);
    }
}

TEST_CASE("JointCache conditionals") {
    JointDistUXYZ q = random_joint(2, 99);
    JointCache c(q);
    // conditional rows sum to 1 wherever the conditioning cell has mass
    for (std::size_t u = 0; u < q.nu; ++u)
        for (std::size_t x = 0; x < q.nx; ++x)
            for (std::size_t z = 0; z < q.nz; ++z) {
                double s = 0.0;
                for (std::size_t y = 0; y < q.ny; ++y) s += c.ygxzu(u, x, z, y);
                CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
            }
    // Bayes consistency: q(u,x,y,z) = p(y|x,z,u) p(x,z,u)
    for (std::size_t u = 0; u < q.nu; ++u)
        for (std::size_t x = 0; x < q.nx; ++x)
            for (std::size_t y = 0; y < q.ny; ++y)
                for (std::size_t z = 0; z < q.nz; ++z)
                    CHECK(q(u, x, y, z) ==
                          doctest::Approx(c.ygxzu(u, x, z, y) * c.pXZU[(u * q.nx + x) * q.nz + z])
                              .epsilon(1e-12));
}

TEST_CASE("conditional KL") {
    StochasticMatrix w = StochasticMatrix::bsc(0.2);
    std::vector<double> same{0.8, 0.2, 0.2, 0.8};
    std::vector<std::size_t> rows{0, 1};
    std::vector<double> weight{0.5, 0.5};
    CHECK(conditional_kl(same, 2, 2, w, rows, weight) == doctest::Approx(0.0).epsilon(1e-14));

    std::vector<double> other{0.7, 0.3, 0.2, 0.8};
    double d = conditional_kl(other, 2, 2, w, rows, weight);
    double expect = 0.5 * (0.7 * std::log(0.7 / 0.8) + 0.3 * std::log(0.3 / 0.2));
    CHECK(d == doctest::Approx(expect).epsilon(1e-12));
    CHECK(d > 0.0);

    // support violation -> +inf
    StochasticMatrix det = StochasticMatrix::identity(2);
    std::vector<double> full{0.5, 0.5, 0.5, 0.5};
    CHECK(conditional_kl(full, 2, 2, det, rows, weight) == kInf);
    // zero weight masks the violation
    std::vector<double> wz{1.0, 0.0};
    std::vector<double> okrow{1.0, 0.0, 0.5, 0.5};
    CHECK(conditional_kl(okrow, 2, 2, det, rows, wz) == doctest::Approx(0.0));
}

TEST_CASE("channel divergences vanish iff conditionals match") {
    StochasticMatrix w1 = StochasticMatrix::bsc(0.1), w2 = StochasticMatrix::bsc(0.3);
    // structured: q(u,x,y,z) = p(u,x) W1 W2
    JointDistUXYZ q(2, 2, 2, 2);
    std::vector<double> pux{0.1, 0.3, 0.4, 0.2};
    for (std::size_t u = 0; u < 2; ++u)
        for (std::size_t x = 0; x < 2; ++x)
            for (std::size_t y = 0; y < 2; ++y)
                for (std::size_t z = 0; z < 2; ++z)
                    q.at(u, x, y, z) = pux[u * 2 + x] * w1(x, y) * w2(x, z);
    CHECK(kl_y_given_xzu(q, w1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(kl_z_given_xyu(q, w2) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(kl_y_given_xu(q, w1) == doctest::Approx(0.0).epsilon(1e-12));

    JointDistUXYZ r = random_joint(2, 1234);
    CHECK(kl_y_given_xzu(r, w1) > 0.0);
    // oracle for the y|xzu divergence: direct sum
    JointCache c(r);
    double acc = 0.0;
    for (std::size_t u = 0; u < 2; ++u)
        for (std::size_t x = 0; x < 2; ++x)
            for (std::size_t y = 0; y < 2; ++y)
                for (std::size_t z = 0; z < 2; ++z) {
                    double m = r(u, x, y, z);
                    if (m > 0.0) acc += m * std::log(c.ygxzu(u, x, z, y) / w1(x, y));
                }
    CHECK(kl_y_given_xzu(r, w1) == doctest::Approx(acc).epsilon(1e-10));
}

TEST_CASE("joint validate and normalize") {
    JointDistUXYZ q(1, 2, 2, 2);
    for (double& m : q.mass) m = 1.0;
    CHECK_THROWS_AS(q.validate(), ValidationError);
    q.normalize();
    q.validate();
    CHECK(q(0, 0, 0, 0) == doctest::Approx(0.125));
}
