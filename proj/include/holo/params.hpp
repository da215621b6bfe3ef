#ifndef HOLO_PARAMS_HPP
#define HOLO_PARAMS_HPP

#include <complex>

namespace holo {

using Complex = std::complex<double>;

// Loop fugacity n = -2 cos(4 lambda).
double fugacity_from_lambda(double lambda);

// Inverse of fugacity_from_lambda on the dilute branch 4*lambda in (0, pi],
// i.e. lambda in (0, pi/4].  Throws std::domain_error for |n| > 2.
double lambda_from_fugacity(double n);

// Conformal spin sigma = 1 - 3*lambda/pi.
double spin(double lambda);

// Spectral parameter u = sigma*(theta - pi) + theta.  At theta = pi/2 this
// is the isotropic point u = 3*lambda/2 when sigma = spin(lambda).
double spectral_from_angle(double sigma, double theta);

// Inverse of spectral_from_angle: theta = (u + sigma*pi) / (1 + sigma).
// Throws std::domain_error when sigma == -1.
double angle_from_spectral(double sigma, double u);

// Full parameter bundle of the loop model.  Constructed from the two free
// angles; everything else is derived and the consistency constraints are
// enforced.  Immutable after construction.
class LoopParams {
public:
    // Throws std::domain_error if theta is outside (0, pi), eps1/eps2 are
    // not +-1, or the resulting u falls outside (0, 3*lambda).
    LoopParams(double lambda, double theta, int eps1 = +1, int eps2 = +1);

    double lambda() const { return lambda_; }
    double u() const { return u_; }
    double n() const { return n_; }
    double sigma() const { return sigma_; }
    double theta() const { return theta_; }
    int eps1() const { return eps1_; }
    int eps2() const { return eps2_; }
    Complex nu() const { return nu_; }     // e^{i theta (sigma+1)}
    Complex zeta() const { return zeta_; } // e^{i sigma pi}

private:
    double lambda_, u_, n_, sigma_, theta_;
    int eps1_, eps2_;
    Complex nu_, zeta_;
};

} // namespace holo

#endif
