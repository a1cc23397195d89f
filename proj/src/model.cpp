#include "pdl/model.hpp"

namespace pdl::model {

void ModelParams::validate() const {
    if (hopping <= 0.0) throw std::invalid_argument("ModelParams: hopping J must be > 0");
    if (sites <= 0) throw std::invalid_argument("ModelParams: L must be positive");
    if (x0 < 0 || x0 >= sites) throw std::invalid_argument("ModelParams: x0 out of range");
    if (omega1 < 0.0 || omega2 < omega1)
        throw std::invalid_argument("ModelParams: need 0 <= omega1 <= omega2");
}

void RateSet::validate() const {
    const double rates[] = {gamma0_01, gamma0_02, gamma0_12, loss_01, loss_02, loss_12};
    for (double r : rates)
        if (r < 0.0) throw std::invalid_argument("RateSet: rates must be >= 0");
}

double dispersion(double epsilon, double hopping, double k) {
    if (k < 0.0 || k > kPi) throw std::domain_error("dispersion: k outside [0, pi]");
    return epsilon - 2.0 * hopping * std::cos(k);
}

double wavenumber(double epsilon, double hopping, double omega) {
    const double c = (epsilon - omega) / (2.0 * hopping);
    if (c <= -1.0 || c >= 1.0)
        throw std::domain_error("wavenumber: omega=" + std::to_string(omega) +
                                " outside the open band");
    return std::acos(c);
}

double density_of_states(double epsilon, double hopping, double omega) {
    const double s = std::abs(std::sin(wavenumber(epsilon, hopping, omega)));
    if (s < 1e-9)
        throw std::domain_error("density_of_states: band-edge divergence at omega=" +
                                std::to_string(omega));
    return 1.0 / std::sqrt(2.0 * hopping * s);
}

double rate_from_coupling(double epsilon, double hopping, double g, double omega) {
    const double d = density_of_states(epsilon, hopping, omega);
    return 2.0 * kPi * d * d * g * g;
}

double lattice_rate_from_coupling(double epsilon, double hopping, double g, double omega) {
    const double d = density_of_states(epsilon, hopping, omega);
    return d * d * g * g;
}

RateSet rates_from_lattice(const ModelParams& params) {
    params.validate();
    const auto w = params.transition_frequencies();
    RateSet r;
    r.gamma0_01 = lattice_rate_from_coupling(params.epsilon, params.hopping, params.g01, w.w01);
    r.gamma0_02 = lattice_rate_from_coupling(params.epsilon, params.hopping, params.g02, w.w02());
    r.gamma0_12 = lattice_rate_from_coupling(params.epsilon, params.hopping, params.g12, w.w12);
    return r;
}

}  // namespace pdl::model
