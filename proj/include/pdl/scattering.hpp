#pragma once

// Orchestration of the numerical scattering experiment: ground state,
// wavepacket preparation, time evolution, and extraction of spectra,
// populations, momentum occupations and the two-photon amplitude.

#include <array>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pdl/lattice.hpp"
#include "pdl/model.hpp"
#include "pdl/mps.hpp"
#include "pdl/two_photon.hpp"

namespace pdl::scattering {

using cplx = std::complex<double>;

// Exponential-front wavepacket: e^{i k0 x} e^{(x - x_bar)/(2 sigma)} up to the
// front at x_bar, zero beyond it (the profile is supported strictly left of
// the scatterer).
struct WavepacketSpec {
    double k0 = 1.73;
    double x_bar = 420.0;
    double sigma = 2.0;

    void validate(int sites, int x0) const;
};

std::vector<cplx> wavepacket_profile(const WavepacketSpec& wp, int sites, int x0);

// Spectral amplitude of the bare wavepacket at wavenumber k, and the width of
// the usable window where it exceeds `floor` times its peak.
cplx wavepacket_spectrum(const WavepacketSpec& wp, int sites, int x0, double k);
double usable_window_width(const WavepacketSpec& wp, int sites, int x0, double floor);

struct SimulationSchedule {
    double dt = 0.05;
    double t_out = 0.0;
    int snapshot_stride = 100;

    int steps() const { return static_cast<int>(t_out / dt + 0.5); }
    // Readout before any wavefront can reach a boundary:
    // t_out = safety * (L - max(x_bar, L - x0)) / v_g(k0).
    static SimulationSchedule automatic(const model::ModelParams& params,
                                        const WavepacketSpec& wp, double dt = 0.05,
                                        double safety = 0.95);
};

// Ground state of the interacting lattice by imaginary time from the bare
// vacuum.
mps::Mps ground_state(const lattice::LatticeSpec& spec, const mps::TruncationPolicy& policy);

// a^dagger_phi applied to the ground state, normalized.
mps::Mps prepare_input(const lattice::LatticeSpec& spec, const mps::Mps& ground,
                       const WavepacketSpec& wp, const mps::TruncationPolicy& policy);

std::array<double, 3> level_populations(const mps::Mps& state,
                                        const lattice::LatticeSpec& spec);

struct MomentumOccupation {
    std::vector<double> omega;   // per positive FFT wavenumber
    std::vector<double> right;   // <r_w^dag r_w>
    std::vector<double> left;    // <l_w^dag l_w>
    double total = 0.0;          // sum over all modes = total photon number
};

MomentumOccupation momentum_occupation(const mps::Mps& state,
                                       const lattice::LatticeSpec& spec);

struct OnePhotonCoefficients {
    std::vector<double> omega;
    std::vector<cplx> t, r;
    std::vector<bool> masked;    // input spectral weight below the SNR floor
};

// t(w) and r(w) from the one-photon amplitudes of the final and input
// states, projected on travelling waves at arbitrary in-band frequencies.
// The free evolution phase exp(-i w t_out) is removed.
OnePhotonCoefficients one_photon_coefficients(const std::vector<cplx>& f_out,
                                              const std::vector<cplx>& f_in,
                                              const model::ModelParams& params,
                                              const std::vector<double>& omega_grid,
                                              double t_out, double snr_floor = 1e-3);

// P2 = 1 - |t|^2 - |r|^2, clipped into [0, 1]; masked points give NaN.
std::vector<double> p2_from_unitarity(const OnePhotonCoefficients& coeffs);

// <vac| a_x1 a_x2 |psi> over all site pairs.
TwoPhotonAmplitude two_photon_amplitude(const mps::Mps& state,
                                        const lattice::LatticeSpec& spec);

// Two-sided travelling-wave transform of the position amplitude restricted
// to right movers, on an arbitrary in-band frequency grid.
TwoPhotonAmplitude to_energy_basis(const TwoPhotonAmplitude& position_amp,
                                   const model::ModelParams& params,
                                   const std::vector<double>& omega_grid);

// Total two-photon weight of the state, (1/2) ||phi||_F^2.
double two_photon_total(const TwoPhotonAmplitude& position_amp);

// Weight of >= 3-photon configurations from factorial moments of the total
// photon number.
double three_photon_weight(const mps::Mps& state, const lattice::LatticeSpec& spec);

struct SpectrumPoint {
    double k0 = 0.0;
    double omega = 0.0;
    double transmission = 0.0;     // |t|^2 at the carrier
    double reflection = 0.0;
    double p2 = 0.0;               // 1 - T - R
    double p2_direct = 0.0;        // binned pair weight per input weight
    double unitarity_defect = 0.0; // |T_bin + R_bin + P2_bin - 1|
    double three_photon = 0.0;
    double norm_drift = 0.0;
    double discarded_weight = 0.0;
    double wall_seconds = 0.0;
    bool failed = false;
    std::string error;
};

struct SpectrumResult {
    std::vector<SpectrumPoint> points;
    std::map<std::string, std::string> metadata;
};

struct RunArtifacts {
    mps::Mps input;
    mps::Mps final_state;
    std::vector<cplx> f_in, f_out;
    std::vector<double> times;
    std::vector<std::array<double, 3>> populations;
    mps::EvolutionReport report;
};

// One full scattering run at a fixed carrier; the ground state can be shared
// between runs over the same lattice.
RunArtifacts run_scattering(const lattice::LatticeSpec& spec, const mps::Mps& ground,
                            const WavepacketSpec& wp, const SimulationSchedule& schedule,
                            const mps::TruncationPolicy& policy);

SpectrumPoint evaluate_point(const lattice::LatticeSpec& spec, const mps::Mps& ground,
                             const WavepacketSpec& wp_template, double k0,
                             const mps::TruncationPolicy& policy, double dt = 0.05);

// Independent runs over the carrier grid, `threads`-way parallel; failures
// are collected per point and the scan continues.
SpectrumResult spectrum_scan(const model::ModelParams& params, int n_max,
                             const WavepacketSpec& wp_template,
                             const std::vector<double>& k0_grid,
                             const mps::TruncationPolicy& policy, int threads = 1,
                             double dt = 0.05);

}  // namespace pdl::scattering
