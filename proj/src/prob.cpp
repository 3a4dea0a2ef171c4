#include "abc/prob.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace abc {

namespace {

void check_and_renormalize(std::vector<double>& m, const char* what) {
    double sum = 0.0;
    for (double v : m) {
        if (v < 0.0) throw ValidationError(std::string(what) + ": negative weight");
        sum += v;
    }
    if (std::abs(sum - 1.0) > kProbRenormTol)
        throw ValidationError(std::string(what) + ": weights sum to " + std::to_string(sum));
    if (std::abs(sum - 1.0) > kProbSumTol)
        for (double& v : m) v /= sum;
}

}  // namespace

ProbDist::ProbDist(std::vector<double> m) : mass(std::move(m)) {
    if (mass.empty()) throw ValidationError("ProbDist: empty alphabet");
    check_and_renormalize(mass, "ProbDist");
}

ProbDist ProbDist::uniform(std::size_t n) {
    return ProbDist(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ProbDist ProbDist::point(std::size_t n, std::size_t at) {
    std::vector<double> m(n, 0.0);
    m.at(at) = 1.0;
    return ProbDist(std::move(m));
}

StochasticMatrix::StochasticMatrix(std::size_t in, std::size_t out, std::vector<double> rows)
    : in_size(in), out_size(out), w(std::move(rows)) {
    if (in == 0 || out == 0 || w.size() != in * out)
        throw ValidationError("StochasticMatrix: dimension mismatch");
    for (std::size_t x = 0; x < in; ++x) {
        std::vector<double> r(w.begin() + static_cast<long>(x * out),
                              w.begin() + static_cast<long>((x + 1) * out));
        check_and_renormalize(r, "StochasticMatrix row");
        std::copy(r.begin(), r.end(), w.begin() + static_cast<long>(x * out));
    }
}

ProbDist StochasticMatrix::row(std::size_t x) const {
    return ProbDist(std::vector<double>(w.begin() + static_cast<long>(x * out_size),
                                        w.begin() + static_cast<long>((x + 1) * out_size)));
}

StochasticMatrix StochasticMatrix::identity(std::size_t n) {
    std::vector<double> m(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 1.0;
    return StochasticMatrix(n, n, std::move(m));
}

StochasticMatrix StochasticMatrix::uniform_rows(std::size_t in, std::size_t out) {
    return StochasticMatrix(in, out, std::vector<double>(in * out, 1.0 / static_cast<double>(out)));
}

StochasticMatrix StochasticMatrix::bsc(double p) {
    return StochasticMatrix(2, 2, {1.0 - p, p, p, 1.0 - p});
}

void JointDistUXYZ::validate() const {
    double sum = 0.0;
    for (double v : mass) {
        if (v < 0.0) throw ValidationError("JointDistUXYZ: negative mass");
        sum += v;
    }
    if (std::abs(sum - 1.0) > kProbSumTol)
        throw ValidationError("JointDistUXYZ: mass sums to " + std::to_string(sum));
}

void JointDistUXYZ::normalize() {
    double sum = std::accumulate(mass.begin(), mass.end(), 0.0);
    if (sum <= 0.0) throw ValidationError("JointDistUXYZ: zero total mass");
    for (double& v : mass) v /= sum;
}

JointCache::JointCache(const JointDistUXYZ& q) : nu(q.nu), nx(q.nx), ny(q.ny), nz(q.nz) {
    pU.assign(nu, 0.0);
    pY.assign(ny, 0.0);
    pZ.assign(nz, 0.0);
    pUY.assign(nu * ny, 0.0);
    pUZ.assign(nu * nz, 0.0);
    pXZU.assign(nu * nx * nz, 0.0);
    pXYU.assign(nu * nx * ny, 0.0);
    pYgXZU.assign(nu * nx * nz * ny, 0.0);
    pZgXYU.assign(nu * nx * ny * nz, 0.0);

    std::size_t i = 0;
    for (std::size_t u = 0; u < nu; ++u)
        for (std::size_t x = 0; x < nx; ++x)
            for (std::size_t y = 0; y < ny; ++y)
                for (std::size_t z = 0; z < nz; ++z, ++i) {
                    double m = q.mass[i];
                    if (m == 0.0) continue;
                    pU[u] += m;
                    pY[y] += m;
                    pZ[z] += m;
                    pUY[u * ny + y] += m;
                    pUZ[u * nz + z] += m;
                    pXZU[(u * nx + x) * nz + z] += m;
                    pXYU[(u * nx + x) * ny + y] += m;
                }

    pYgU.assign(nu * ny, 0.0);
    pZgU.assign(nu * nz, 0.0);
    for (std::size_t u = 0; u < nu; ++u) {
        if (pU[u] == 0.0) continue;
        for (std::size_t y = 0; y < ny; ++y) pYgU[u * ny + y] = pUY[u * ny + y] / pU[u];
        for (std::size_t z = 0; z < nz; ++z) pZgU[u * nz + z] = pUZ[u * nz + z] / pU[u];
    }

    i = 0;
    for (std::size_t u = 0; u < nu; ++u)
        for (std::size_t x = 0; x < nx; ++x)
            for (std::size_t y = 0; y < ny; ++y)
                for (std::size_t z = 0; z < nz; ++z, ++i) {
                    double m = q.mass[i];
                    if (m == 0.0) continue;
                    double wxz = pXZU[(u * nx + x) * nz + z];
                    double wxy = pXYU[(u * nx + x) * ny + y];
                    pYgXZU[((u * nx + x) * nz + z) * ny + y] = m / wxz;
                    pZgXYU[((u * nx + x) * ny + y) * nz + z] = m / wxy;
                }
}

double entropy(const ProbDist& p) {
    double h = 0.0;
    for (double v : p.mass) h -= xlogx(v);
    return h;
}

double mutual_information(const std::vector<double>& joint, std::size_t na, std::size_t nb) {
    if (joint.size() != na * nb) throw ValidationError("mutual_information: size mismatch");
    double sum = std::accumulate(joint.begin(), joint.end(), 0.0);
    if (std::abs(sum - 1.0) > kProbRenormTol)
        throw ValidationError("mutual_information: joint sums to " + std::to_string(sum));
    std::vector<double> ma(na, 0.0), mb(nb, 0.0);
    for (std::size_t a = 0; a < na; ++a)
        for (std::size_t b = 0; b < nb; ++b) {
            ma[a] += joint[a * nb + b];
            mb[b] += joint[a * nb + b];
        }
    double mi = 0.0;
    for (std::size_t a = 0; a < na; ++a)
        for (std::size_t b = 0; b < nb; ++b) {
            double m = joint[a * nb + b];
            if (m > 0.0) mi += m * std::log(m / (ma[a] * mb[b]));
        }
    return mi;
}

double conditional_mutual_information(const JointDistUXYZ& joint, InfoQuantity which) {
    joint.validate();
    const std::size_t nu = joint.nu, nx = joint.nx, ny = joint.ny, nz = joint.nz;
    switch (which) {
        case InfoQuantity::IUZ: {
            std::vector<double> uz(nu * nz, 0.0);
            for (std::size_t u = 0; u < nu; ++u)
                for (std::size_t x = 0; x < nx; ++x)
                    for (std::size_t y = 0; y < ny; ++y)
                        for (std::size_t z = 0; z < nz; ++z)
                            uz[u * nz + z] += joint(u, x, y, z);
            return mutual_information(uz, nu, nz);
        }
        case InfoQuantity::IXY: {
            std::vector<double> xy(nx * ny, 0.0);
            for (std::size_t u = 0; u < nu; ++u)
                for (std::size_t x = 0; x < nx; ++x)
                    for (std::size_t y = 0; y < ny; ++y)
                        for (std::size_t z = 0; z < nz; ++z)
                            xy[x * ny + y] += joint(u, x, y, z);
            return mutual_information(xy, nx, ny);
        }
        case InfoQuantity::IXY_given_U: {
            std::vector<double> uxy(nu * nx * ny, 0.0);
            std::vector<double> ux(nu * nx, 0.0), uy(nu * ny, 0.0), pu(nu, 0.0);
            for (std::size_t u = 0; u < nu; ++u)
                for (std::size_t x = 0; x < nx; ++x)
                    for (std::size_t y = 0; y < ny; ++y)
                        for (std::size_t z = 0; z < nz; ++z) {
                            double m = joint(u, x, y, z);
                            uxy[(u * nx + x) * ny + y] += m;
                            ux[u * nx + x] += m;
                            uy[u * ny + y] += m;
                            pu[u] += m;
                        }
            double mi = 0.0;
            for (std::size_t u = 0; u < nu; ++u)
                for (std::size_t x = 0; x < nx; ++x)
                    for (std::size_t y = 0; y < ny; ++y) {
                        double m = uxy[(u * nx + x) * ny + y];
                        if (m > 0.0)
                            mi += m * std::log(m * pu[u] / (ux[u * nx + x] * uy[u * ny + y]));
                    }
            return mi;
        }
    }
    throw ValidationError("conditional_mutual_information: bad selector");
}

double conditional_kl(const std::vector<double>& cond, std::size_t ncond, std::size_t nout,
                      const StochasticMatrix& ref, const std::vector<std::size_t>& ref_row,
                      const std::vector<double>& weight) {
    if (cond.size() != ncond * nout || ref_row.size() != ncond || weight.size() != ncond)
        throw ValidationError("conditional_kl: size mismatch");
    double d = 0.0;
    for (std::size_t c = 0; c < ncond; ++c) {
        if (weight[c] <= 0.0) continue;
        for (std::size_t o = 0; o < nout; ++o) {
            double qc = cond[c * nout + o];
            if (qc <= 0.0) continue;
            double r = ref(ref_row[c], o);
            if (r <= 0.0) return kInf;
            d += weight[c] * qc * std::log(qc / r);
        }
    }
    return d;
}

double kl_y_given_xzu(const JointDistUXYZ& q, const StochasticMatrix& w1) {
    JointCache c(q);
    double d = 0.0;
    for (std::size_t u = 0; u < q.nu; ++u)
        for (std::size_t x = 0; x < q.nx; ++x)
            for (std::size_t y = 0; y < q.ny; ++y)
                for (std::size_t z = 0; z < q.nz; ++z) {
                    double m = q(u, x, y, z);
                    if (m <= 0.0) continue;
                    double r = w1(x, y);
                    if (r <= 0.0) return kInf;
                    d += m * std::log(c.ygxzu(u, x, z, y) / r);
                }
    return d;
}

double kl_z_given_xyu(const JointDistUXYZ& q, const StochasticMatrix& w2) {
    JointCache c(q);
    double d = 0.0;
    for (std::size_t u = 0; u < q.nu; ++u)
        for (std::size_t x = 0; x < q.nx; ++x)
            for (std::size_t y = 0; y < q.ny; ++y)
                for (std::size_t z = 0; z < q.nz; ++z) {
                    double m = q(u, x, y, z);
                    if (m <= 0.0) continue;
                    double r = w2(x, z);
                    if (r <= 0.0) return kInf;
                    d += m * std::log(c.zgxyu(u, x, y, z) / r);
                }
    return d;
}

double kl_y_given_xu(const JointDistUXYZ& q, const StochasticMatrix& w1) {
    const std::size_t nu = q.nu, nx = q.nx, ny = q.ny, nz = q.nz;
    std::vector<double> uxy(nu * nx * ny, 0.0), ux(nu * nx, 0.0);
    for (std::size_t u = 0; u < nu; ++u)
        for (std::size_t x = 0; x < nx; ++x)
            for (std::size_t y = 0; y < ny; ++y)
                for (std::size_t z = 0; z < nz; ++z) {
                    double m = q(u, x, y, z);
                    uxy[(u * nx + x) * ny + y] += m;
                    ux[u * nx + x] += m;
                }
    double d = 0.0;
    for (std::size_t u = 0; u < nu; ++u)
        for (std::size_t x = 0; x < nx; ++x) {
            if (ux[u * nx + x] <= 0.0) continue;
            for (std::size_t y = 0; y < ny; ++y) {
                double m = uxy[(u * nx + x) * ny + y];
                if (m <= 0.0) continue;
                double r = w1(x, y);
                if (r <= 0.0) return kInf;
                d += m * std::log(m / (ux[u * nx + x] * r));
            }
        }
    return d;
}

}  // namespace abc
