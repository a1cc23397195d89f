#pragma once

// Closed-form one-photon scattering of the cyclic three-level scatterer,
// the lossy-absorption model, the two-photon probability and the
// mirror multiple-scattering sums with efficiency maps.

#include <complex>
#include <vector>

#include "pdl/model.hpp"

namespace pdl::analytics {

using cplx = std::complex<double>;

// Mirror placed a phase distance kd behind the scatterer.  r_mirror = -1
// models a lossless hard mirror; kept complex for the general sums.
struct MirrorConfig {
    double kd = model::kPi / 2.0;
    cplx r_mirror = {-1.0, 0.0};

    cplx round_trip_phase() const {  // Phi = exp(2 i k d)
        return std::exp(cplx(0.0, 2.0 * kd));
    }
    void validate() const;
};

// P2 over a (kd, Gamma0_12/Gamma0_02) grid at fixed omega = w02.
struct EfficiencyMap {
    std::vector<double> kd_grid;
    std::vector<double> ratio_grid;
    std::vector<std::vector<double>> p2;  // [ratio][kd]
    double loss_over_radiative02 = 0.0;
    double best_kd = 0.0;
    double best_ratio = 0.0;
    double best_p2 = 0.0;
};

// One-photon transmission amplitude.  Two Lorentzian poles: the 0-1
// resonance of half-width Gamma_01 and the 0-2 resonance whose half-width
// is the total decay rate of level |2>, Gamma_02 + Gamma_12.
cplx t1_closed_form(double omega, const model::RateSet& rates,
                    const model::TransitionFrequencies& freqs);

// r1 = t1 - 1 exactly (point scatterer emits symmetrically).
cplx r1_closed_form(double omega, const model::RateSet& rates,
                    const model::TransitionFrequencies& freqs);

// Near-resonance absorption A(omega) = 2 gamma_02 |r1(omega)|^2 / Gamma_02,
// valid around w02; tapered smoothly to zero outside
// |omega - w02| <= window_halfwidths * Gamma_02 (cosine rolloff over half
// a window beyond that).
double absorption(double omega, const model::RateSet& rates,
                  const model::TransitionFrequencies& freqs,
                  double window_halfwidths = 5.0);

// P2 = 1 - |t1|^2 - |r1|^2 - A, clamped at zero (the two-pole interference
// tail can undershoot by O(Gamma^2 / detuning^2)).
double p2(double omega, const model::RateSet& rates,
          const model::TransitionFrequencies& freqs);

// Total one-photon reflection with the mirror: geometric sum over bounces,
// r_tot = r1 + t1^2 Phi r_M / (1 - r1 Phi r_M).
cplx mirror_reflection_total(double omega, const model::RateSet& rates,
                             const model::TransitionFrequencies& freqs,
                             const MirrorConfig& mirror);

// Total leakage with the mirror, tau_tot = tau (1 + t1 Phi r_M / (1 - r1 Phi r_M)),
// with |tau|^2 = A(omega) by default or an explicit tau amplitude.
cplx mirror_leakage_total(double omega, const model::RateSet& rates,
                          const model::TransitionFrequencies& freqs,
                          const MirrorConfig& mirror);
cplx mirror_leakage_total(cplx tau, double omega, const model::RateSet& rates,
                          const model::TransitionFrequencies& freqs,
                          const MirrorConfig& mirror);

// Two-photon probability with the mirror:
// P2 = 1 - |r_tot|^2 - |t_through|^2 - |tau_tot|^2, where the transmitted
// channel carries the (1 - |r_M|^2) weight that escapes through the mirror.
// Reduces to the no-mirror p2 at r_M = 0 and to the hard-mirror closed form
// at r_M = -1.
double p2_mirror(double omega, const model::RateSet& rates,
                 const model::TransitionFrequencies& freqs,
                 const MirrorConfig& mirror);

// Map P2(omega=w02) over kd x (Gamma0_12/Gamma0_02).  The loss channel is
// sized against the radiative rate, gamma_02 = loss_ratio * Gamma0_02, at
// every grid cell; gamma_01 = gamma_12 = 0.
EfficiencyMap efficiency_map(const model::RateSet& base_rates,
                             const model::TransitionFrequencies& freqs,
                             const std::vector<double>& kd_grid,
                             const std::vector<double>& ratio_grid,
                             double loss_ratio);

}  // namespace pdl::analytics
