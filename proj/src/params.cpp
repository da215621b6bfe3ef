#include "holo/params.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace holo {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTol = 1e-12;
}

double fugacity_from_lambda(double lambda) {
    return -2.0 * std::cos(4.0 * lambda);
}

double lambda_from_fugacity(double n) {
    if (!(n >= -2.0 && n <= 2.0))
        throw std::domain_error("lambda_from_fugacity: n must lie in [-2, 2]");
    // dilute branch: 4*lambda = acos(-n/2) in (0, pi]
    return std::acos(-n / 2.0) / 4.0;
}

double spin(double lambda) {
    return 1.0 - 3.0 * lambda / kPi;
}

double spectral_from_angle(double sigma, double theta) {
    return sigma * (theta - kPi) + theta;
}

double angle_from_spectral(double sigma, double u) {
    if (sigma == -1.0)
        throw std::domain_error("angle_from_spectral: sigma = -1 is degenerate");
    return (u + sigma * kPi) / (1.0 + sigma);
}

LoopParams::LoopParams(double lambda, double theta, int eps1, int eps2)
    : lambda_(lambda), theta_(theta), eps1_(eps1), eps2_(eps2) {
    if (!std::isfinite(lambda) || !std::isfinite(theta))
        throw std::domain_error("LoopParams: non-finite input");
    if (!(theta > 0.0 && theta < kPi))
        throw std::domain_error("LoopParams: theta must lie in (0, pi)");
    if (eps1 * eps1 != 1 || eps2 * eps2 != 1)
        throw std::domain_error("LoopParams: eps1 and eps2 must be +-1");

    sigma_ = spin(lambda);
    u_ = spectral_from_angle(sigma_, theta);
    n_ = fugacity_from_lambda(lambda);
    if (!(u_ > 0.0 && u_ < 3.0 * lambda))
        throw std::domain_error("LoopParams: u = sigma(theta-pi)+theta outside (0, 3*lambda)");

    nu_ = std::polar(1.0, theta * (sigma_ + 1.0));
    zeta_ = std::polar(1.0, sigma_ * kPi);

    // consistency of the derived quantities
    if (std::abs(n_ + 2.0 * std::cos(4.0 * lambda)) > kTol ||
        std::abs(sigma_ - (1.0 - 3.0 * lambda / kPi)) > kTol ||
        std::abs(std::abs(nu_) - 1.0) > kTol || std::abs(std::abs(zeta_) - 1.0) > kTol)
        throw std::domain_error("LoopParams: derived parameters inconsistent");
}

} // namespace holo
