#ifndef HOLO_WEIGHTS_HPP
#define HOLO_WEIGHTS_HPP

#include <array>
#include <complex>

#include "holo/params.hpp"

namespace holo {

// The nine vertex weights rho_1..rho_9, stored 0-indexed.  The construction
// guarantees rho2 == rho3, rho4 == rho5, rho6 == rho7.
struct LoopWeights {
    std::array<double, 9> rho{};

    double operator[](int i) const { return rho[static_cast<size_t>(i)]; }
    double norm() const;
};

// Critical Boltzmann weights:
//   rho1 = sin(3l-u) sin u + sin 2l sin 3l
//   rho2 = rho3 = eps1 sin(3l-u) sin 2l
//   rho4 = rho5 = eps2 sin u sin 2l
//   rho6 = rho7 = sin(3l-u) sin u
//   rho8 = sin(3l-u) sin(2l-u)
//   rho9 = -sin(l-u) sin u
// The raw overload accepts any finite (lambda, u), including analytic
// continuations outside the physical window 0 < u < 3*lambda.
LoopWeights compute_weights(double lambda, double u, int eps1 = +1, int eps2 = +1);
LoopWeights compute_weights(const LoopParams& p);

// Left-hand sides of the four external-connectivity equations.
struct HoloResiduals {
    std::array<Complex, 4> r{};
    double max_abs() const;
};

// The four linear relations that the weights satisfy when u, theta and sigma
// are matched.  Phases:  zeta = e^{i sigma pi}  and  nu = e^{i theta'(sigma+1)}
// with theta' = pi - theta.  The complementary angle is pinned empirically:
// with it, the relations annihilate compute_weights(lambda, u) exactly at
// u = sigma*(theta - pi) + theta for every lambda (and reduce to the verbatim
// phases at theta = pi/2, where both conventions coincide).
HoloResiduals holo_residuals(const LoopWeights& w, double n, double theta, double sigma);

// Recovers the weight direction as the nullspace of the 4-complex-equation
// (8 real x 6 unknown) system in (rho1, rho2, rho4, rho6, rho8, rho9); the
// degeneracies are imposed structurally.  Returns a unit-norm vector with
// rho1 >= 0.  Throws NoSolutionError when the smallest singular value is not
// below 1e-8 of the largest, DegenerateSolutionError when the second-smallest
// is.
LoopWeights solve_holo_system(double n, double theta, double sigma);

} // namespace holo

#endif
