#pragma once

// Physical parameters of the coupled-cavity waveguide and the cyclic
// three-level scatterer, with the tight-binding dispersion, the density
// of states and the coupling -> rate conversions shared by all modules.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pdl::model {

inline constexpr double kPi = std::numbers::pi;

// Transition frequencies of the three-level system, omega0 = 0 convention.
// The closure w02 = w01 + w12 holds by construction.
struct TransitionFrequencies {
    double w01 = 0.59;
    double w12 = 0.51;

    double w02() const { return w01 + w12; }
};

// Lattice + scatterer specification.  The photonic band is
// [epsilon - 2J, epsilon + 2J]; the scatterer sits at site x0 and couples
// all three level pairs to the local field displacement.
struct ModelParams {
    double epsilon = 1.0;
    double hopping = 1.0 / kPi;   // J
    int sites = 1000;             // L
    int x0 = 500;
    double omega1 = 0.59;         // omega0 = 0 enforced
    double omega2 = 1.10;
    double g01 = -0.0225;
    double g12 = 0.03;
    double g02 = 0.03;

    void validate() const;
    double band_bottom() const { return epsilon - 2.0 * hopping; }
    double band_top() const { return epsilon + 2.0 * hopping; }
    TransitionFrequencies transition_frequencies() const {
        return {omega1, omega2 - omega1};
    }
};

// Radiative and non-radiative rates per transition.  These are the
// half-widths that parameterize the scattering poles: the population of a
// level relaxes at twice the sum of the rates of its downward transitions.
struct RateSet {
    double gamma0_01 = 0.0;
    double gamma0_02 = 0.0;
    double gamma0_12 = 0.0;
    double loss_01 = 0.0;
    double loss_02 = 0.0;
    double loss_12 = 0.0;

    double total01() const { return gamma0_01 + loss_01; }
    double total02() const { return gamma0_02 + loss_02; }
    double total12() const { return gamma0_12 + loss_12; }
    void validate() const;
};

// omega(k) = epsilon - 2 J cos k, k in [0, pi].
double dispersion(double epsilon, double hopping, double k);

// Inverse of the dispersion; throws for omega outside the open band.
double wavenumber(double epsilon, double hopping, double omega);

// D(omega) = 1 / sqrt(2 J |sin k(omega)|).  Diverges at the band edges;
// |sin k| < 1e-9 is rejected rather than returning a huge number.
double density_of_states(double epsilon, double hopping, double omega);

// Gamma0 = 2 pi D(omega)^2 g^2.
double rate_from_coupling(double epsilon, double hopping, double g, double omega);

// Gamma0 = D(omega)^2 g^2 = g^2 / (2 J |sin k|): the exact half-width of the
// single-photon resonance produced by an emitter embedded in the tight-binding
// chain (verified against dense scattering).  Differs from rate_from_coupling
// by the 2 pi of the continuum mode-normalization convention.
double lattice_rate_from_coupling(double epsilon, double hopping, double g, double omega);

// RateSet produced by the lattice mapping for the three transitions of
// `params`; this is the set that reproduces the chain dynamics.
RateSet rates_from_lattice(const ModelParams& params);

// Convenience forwarding helpers.
inline double dispersion(const ModelParams& p, double k) {
    return dispersion(p.epsilon, p.hopping, k);
}
inline double wavenumber(const ModelParams& p, double omega) {
    return wavenumber(p.epsilon, p.hopping, omega);
}
inline double density_of_states(const ModelParams& p, double omega) {
    return density_of_states(p.epsilon, p.hopping, omega);
}
inline double group_velocity(const ModelParams& p, double k) {
    return 2.0 * p.hopping * std::sin(k);
}

}  // namespace pdl::model
