#pragma once

// Linear-response solver for the driven three-level scatterer: first order
// in the drive, the quantum optical master equation is solved exactly
// (9-component density-matrix linear solve), and t1(omega) / the leakage
// tau(omega) are reconstructed from the input-output relation.  Serves as
// the independent oracle for the closed forms in pdl::analytics.

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "pdl/model.hpp"

namespace pdl::linresp {

using cplx = std::complex<double>;
using Matrix3c = Eigen::Matrix3cd;
using Matrix9c = Eigen::Matrix<cplx, 9, 9>;
using Vector9c = Eigen::Matrix<cplx, 9, 1>;

// Level energies, per-transition total rates (which damp the free evolution)
// and radiative rates (which set the drive/readout weights).  Optional
// density-of-states profile; when absent the bath is flat and the radiative
// rates are used as given.
struct LindbladSpec {
    model::TransitionFrequencies freqs;
    model::RateSet rates;
    double drive_amplitude = 1e-4;                 // alpha, perturbative scalar
    std::function<double(double)> dos;             // D(omega); empty = flat

    void validate() const;
};

struct SteadyState {
    Matrix3c rho0;         // unperturbed steady state |0><0|
    Matrix3c rho1;         // first-order response per unit drive
    Matrix3c rho(double drive) const { return rho0 + drive * rho1; }
};

// Liouvillian of the free (undriven) master equation as a 9x9 matrix over
// column-stacked rho.  Jump operators |j><i| for each downward transition,
// entering with prefactor 2 Gamma_ij so the Gamma are coherence half-widths.
Matrix9c liouvillian(const LindbladSpec& spec);

// Coupling operator with sqrt(Gamma0) weights (drive and waveguide readout
// carry one factor each, so poles acquire Gamma0_ij numerators).
Matrix3c coupling_operator(const LindbladSpec& spec);

// Stationary solution of (L0 + drive commutator) rho = 0 to first order.
SteadyState steady_state_first_order(const LindbladSpec& spec);

// AC susceptibility of observable B: the retarded kernel
// Tr[B exp(L0 s) rho1] summed over decaying Liouvillian modes,
// chi(omega) = sum_m c_m (-lambda_m) / (-lambda_m - i omega).  Default keeps
// only the resonant (negative-imaginary-frequency) poles; rwa_only = false
// retains the counter-rotating modes too.
cplx susceptibility(double omega, const LindbladSpec& spec, const Matrix3c& observable,
                    bool rwa_only = true);

// Susceptibility of the coupling operator itself.
cplx susceptibility(double omega, const LindbladSpec& spec);

// t1(omega) = 1 - i chi_G(omega), with per-pole DOS reweighting when a
// profile is supplied.
cplx t1_from_lrt(double omega, const LindbladSpec& spec);

// Leakage amplitude into a non-radiative channel on the 0-2 transition,
// tau(omega) = -i sqrt(2 gamma) <sigma02> / <r_in>.
cplx leakage(double omega, const LindbladSpec& spec, double gamma_loss);

}  // namespace pdl::linresp
