#include "holo/weights.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "holo/errors.hpp"

namespace holo {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kRankTol = 1e-8; // relative singular-value threshold
}

double LoopWeights::norm() const {
    double s = 0.0;
    for (double r : rho) s += r * r;
    return std::sqrt(s);
}

LoopWeights compute_weights(double lambda, double u, int eps1, int eps2) {
    if (eps1 * eps1 != 1 || eps2 * eps2 != 1)
        throw std::domain_error("compute_weights: eps1 and eps2 must be +-1");
    const double s3u = std::sin(3.0 * lambda - u);
    const double su = std::sin(u);
    const double s2l = std::sin(2.0 * lambda);

    LoopWeights w;
    w.rho[0] = s3u * su + s2l * std::sin(3.0 * lambda);
    w.rho[1] = w.rho[2] = eps1 * s3u * s2l;
    w.rho[3] = w.rho[4] = eps2 * su * s2l;
    w.rho[5] = w.rho[6] = s3u * su;
    w.rho[7] = s3u * std::sin(2.0 * lambda - u);
    w.rho[8] = -std::sin(lambda - u) * su;
    return w;
}

LoopWeights compute_weights(const LoopParams& p) {
    return compute_weights(p.lambda(), p.u(), p.eps1(), p.eps2());
}

double HoloResiduals::max_abs() const {
    double m = 0.0;
    for (const Complex& c : r) m = std::max(m, std::abs(c));
    return m;
}

namespace {

// Coefficient rows of the four relations in the reduced unknowns
// (rho1, rho2, rho4, rho6, rho8, rho9); the degeneracies rho3 = rho2,
// rho5 = rho4, rho7 = rho6 are already substituted.
std::array<std::array<Complex, 6>, 4> relation_matrix(double n, double theta, double sigma) {
    // Pinned convention: the rhombus angle entering nu is the complement
    // pi - theta (see holo_residuals doc).
    const Complex nu = std::polar(1.0, (kPi - theta) * (sigma + 1.0));
    const Complex zeta = std::polar(1.0, sigma * kPi);
    const Complex zi = 1.0 / zeta;

    std::array<std::array<Complex, 6>, 4> a{};
    // rho1 + nu rho2 - nu zeta^-1 rho4 - rho7
    a[0] = {1.0, nu, -nu * zi, -1.0, 0.0, 0.0};
    // -zeta^-1 rho2 + n rho5 + nu zeta rho7 - nu zeta^-1 (rho8 + n rho9)
    a[1] = {0.0, -zi, n, nu * zeta, -nu * zi, -nu * zi * n};
    // n rho3 - zeta rho4 - nu zeta^-2 rho7 + nu (n rho8 + rho9)
    a[2] = {0.0, n, -zeta, -nu * zi * zi, nu * n, nu};
    // -nu zeta^-2 rho2 + nu zeta rho4 + n rho6 - zeta^-2 rho8 - zeta^2 rho9
    a[3] = {0.0, -nu * zi * zi, nu * zeta, n, -zi * zi, -zeta * zeta};
    return a;
}

} // namespace

HoloResiduals holo_residuals(const LoopWeights& w, double n, double theta, double sigma) {
    const auto a = relation_matrix(n, theta, sigma);
    const std::array<double, 6> x = {w[0], w[1], w[3], w[5], w[7], w[8]};
    HoloResiduals res;
    for (int i = 0; i < 4; ++i) {
        Complex s = 0.0;
        for (int j = 0; j < 6; ++j) s += a[static_cast<size_t>(i)][static_cast<size_t>(j)] * x[static_cast<size_t>(j)];
        res.r[static_cast<size_t>(i)] = s;
    }
    return res;
}

LoopWeights solve_holo_system(double n, double theta, double sigma) {
    const auto a = relation_matrix(n, theta, sigma);

    Eigen::Matrix<double, 8, 6> m;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 6; ++j) {
            m(2 * i, j) = a[static_cast<size_t>(i)][static_cast<size_t>(j)].real();
            m(2 * i + 1, j) = a[static_cast<size_t>(i)][static_cast<size_t>(j)].imag();
        }
    }

    Eigen::JacobiSVD<Eigen::Matrix<double, 8, 6>> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    if (!(sv(5) <= kRankTol * smax))
        throw NoSolutionError("solve_holo_system: no nullspace at these parameters");
    if (sv(4) <= kRankTol * smax)
        throw DegenerateSolutionError("solve_holo_system: nullspace dimension >= 2");

    Eigen::Matrix<double, 6, 1> v = svd.matrixV().col(5);
    LoopWeights w;
    w.rho[0] = v(0);
    w.rho[1] = w.rho[2] = v(1);
    w.rho[3] = w.rho[4] = v(2);
    w.rho[5] = w.rho[6] = v(3);
    w.rho[7] = v(4);
    w.rho[8] = v(5);

    const double nrm = w.norm();
    double sign = (w.rho[0] < 0.0) ? -1.0 : 1.0;
    for (double& r : w.rho) r *= sign / nrm;
    return w;
}

} // namespace holo
