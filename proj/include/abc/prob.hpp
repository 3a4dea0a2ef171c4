#pragma once
// Exact finite-probability primitives shared by the region and exponent
// engines. All information quantities are in nats.

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace abc {

inline constexpr double kProbSumTol = 1e-12;      // accepted after construction
inline constexpr double kProbRenormTol = 1e-9;    // inputs worse than this are rejected
inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// xlogy conventions: 0*ln 0 = 0 and 0*ln(0/0) = 0.
inline double xlogx(double x) {
    return x > 0.0 ? x * std::log(x) : 0.0;
}
inline double xlogratio(double x, double num, double den) {
    if (x <= 0.0) return 0.0;
    if (den <= 0.0) return kInf;
    return x * std::log(num / den);
}

// A probability mass function over a finite alphabet.
struct ProbDist {
    std::vector<double> mass;

    ProbDist() = default;
    explicit ProbDist(std::vector<double> m);  // validates, renormalizes within tolerance

    std::size_t size() const { return mass.size(); }
    double operator[](std::size_t i) const { return mass[i]; }

    static ProbDist uniform(std::size_t n);
    static ProbDist point(std::size_t n, std::size_t at);
};

// One ProbDist row per input symbol.
struct StochasticMatrix {
    std::size_t in_size = 0, out_size = 0;
    std::vector<double> w;  // row-major, in_size x out_size

    StochasticMatrix() = default;
    StochasticMatrix(std::size_t in, std::size_t out, std::vector<double> rows);

    double operator()(std::size_t x, std::size_t y) const { return w[x * out_size + y]; }
    double& at(std::size_t x, std::size_t y) { return w[x * out_size + y]; }
    ProbDist row(std::size_t x) const;

    static StochasticMatrix identity(std::size_t n);
    static StochasticMatrix uniform_rows(std::size_t in, std::size_t out);
    static StochasticMatrix bsc(double p);
};

// Joint pmf over U x X x Y x Z, row-major in (u, x, y, z).
struct JointDistUXYZ {
    std::size_t nu = 0, nx = 0, ny = 0, nz = 0;
    std::vector<double> mass;

    JointDistUXYZ() = default;
    JointDistUXYZ(std::size_t u, std::size_t x, std::size_t y, std::size_t z)
        : nu(u), nx(x), ny(y), nz(z), mass(u * x * y * z, 0.0) {}

    std::size_t cells() const { return nu * nx * ny * nz; }
    std::size_t idx(std::size_t u, std::size_t x, std::size_t y, std::size_t z) const {
        return ((u * nx + x) * ny + y) * nz + z;
    }
    double operator()(std::size_t u, std::size_t x, std::size_t y, std::size_t z) const {
        return mass[idx(u, x, y, z)];
    }
    double& at(std::size_t u, std::size_t x, std::size_t y, std::size_t z) {
        return mass[idx(u, x, y, z)];
    }

    void validate() const;   // total mass 1 within kProbSumTol, entries >= 0
    void normalize();
};

// Marginals and conditionals of a JointDistUXYZ, computed once per evaluation.
// Conditionals are left 0 where the conditioning event has zero mass.
struct JointCache {
    std::size_t nu, nx, ny, nz;
    std::vector<double> pU;       // nu
    std::vector<double> pY;       // ny
    std::vector<double> pZ;       // nz
    std::vector<double> pUY;      // nu*ny
    std::vector<double> pUZ;      // nu*nz
    std::vector<double> pYgU;     // nu*ny   p(y|u)
    std::vector<double> pZgU;     // nu*nz   p(z|u)
    std::vector<double> pXZU;     // nu*nx*nz
    std::vector<double> pXYU;     // nu*nx*ny
    std::vector<double> pYgXZU;   // nu*nx*nz*ny  p(y|x,z,u)
    std::vector<double> pZgXYU;   // nu*nx*ny*nz  p(z|x,y,u)

    explicit JointCache(const JointDistUXYZ& q);

    double ygxzu(std::size_t u, std::size_t x, std::size_t z, std::size_t y) const {
        return pYgXZU[((u * nx + x) * nz + z) * ny + y];
    }
    double zgxyu(std::size_t u, std::size_t x, std::size_t y, std::size_t z) const {
        return pZgXYU[((u * nx + x) * ny + y) * nz + z];
    }
};

double entropy(const ProbDist& p);

// joint is row-major na x nb, must sum to 1 within kProbSumTol.
double mutual_information(const std::vector<double>& joint, std::size_t na, std::size_t nb);

enum class InfoQuantity { IXY_given_U, IUZ, IXY };
double conditional_mutual_information(const JointDistUXYZ& joint, InfoQuantity which);

// D(cond || ref | weight): cond is ncond x nout, weight over the ncond
// conditioning cells, ref_row maps each cell to a row of ref. Returns +inf when
// the reference vanishes somewhere cond*weight is positive.
double conditional_kl(const std::vector<double>& cond, std::size_t ncond, std::size_t nout,
                      const StochasticMatrix& ref, const std::vector<std::size_t>& ref_row,
                      const std::vector<double>& weight);

// The two divergences of the relaxed hyperplane objective, plus the
// D(q_{Y|XU} || W1 | q_{XU}) variant used by the slope diagnostic.
double kl_y_given_xzu(const JointDistUXYZ& q, const StochasticMatrix& w1);
double kl_z_given_xyu(const JointDistUXYZ& q, const StochasticMatrix& w2);
double kl_y_given_xu(const JointDistUXYZ& q, const StochasticMatrix& w1);

}  // namespace abc
