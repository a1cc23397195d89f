#include "pdl/scattering.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

namespace pdl::scattering {

void WavepacketSpec::validate(int sites, int x0) const {
    if (sigma <= 0.0) throw std::invalid_argument("WavepacketSpec: sigma must be > 0");
    if (!(x_bar < x0)) throw std::invalid_argument("WavepacketSpec: need x_bar < x0");
    if (x_bar < 1.0 || x_bar >= sites)
        throw std::invalid_argument("WavepacketSpec: front outside the lattice");
}

std::vector<cplx> wavepacket_profile(const WavepacketSpec& wp, int sites, int x0) {
    wp.validate(sites, x0);
    std::vector<cplx> phi(sites, cplx(0.0, 0.0));
    double norm_sq = 0.0;
    for (int x = 0; x < sites; ++x) {
        if (x > wp.x_bar) continue;  // sharp front at x_bar, support left of x0
        const double envelope = std::exp((x - wp.x_bar) / (2.0 * wp.sigma));
        phi[x] = envelope * std::exp(cplx(0.0, wp.k0 * x));
        norm_sq += envelope * envelope;
    }
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& v : phi) v *= inv;
    return phi;
}

cplx wavepacket_spectrum(const WavepacketSpec& wp, int sites, int x0, double k) {
    const auto phi = wavepacket_profile(wp, sites, x0);
    cplx s = 0.0;
    for (int x = 0; x < sites; ++x) s += phi[x] * std::exp(cplx(0.0, -k * x));
    return s;
}

double usable_window_width(const WavepacketSpec& wp, int sites, int x0, double floor) {
    const int n = 2048;
    std::vector<double> mag(n);
    double peak = 0.0;
    for (int i = 0; i < n; ++i) {
        const double k = 0.02 + (model::kPi - 0.04) * i / (n - 1);
        mag[i] = std::abs(wavepacket_spectrum(wp, sites, x0, k));
        peak = std::max(peak, mag[i]);
    }
    int lo = n, hi = -1;
    for (int i = 0; i < n; ++i)
        if (mag[i] >= floor * peak) {
            lo = std::min(lo, i);
            hi = std::max(hi, i);
        }
    if (hi < lo) return 0.0;
    return (hi - lo) * (model::kPi - 0.04) / (n - 1);
}

SimulationSchedule SimulationSchedule::automatic(const model::ModelParams& params,
                                                 const WavepacketSpec& wp, double dt,
                                                 double safety) {
    const double k = wp.k0;
    const double vg = std::abs(model::group_velocity(params, k));
    if (vg < 1e-6) throw std::invalid_argument("schedule: carrier at a band edge");
    const double reach = params.sites - std::max(wp.x_bar, double(params.sites - params.x0));
    SimulationSchedule s;
    s.dt = dt;
    s.t_out = safety * reach / vg;
    s.snapshot_stride = std::max(1, s.steps() / 50);
    return s;
}

mps::Mps ground_state(const lattice::LatticeSpec& spec, const mps::TruncationPolicy& policy) {
    mps::ImaginaryTimeOptions options;
    options.schedule = {{0.2, 200}, {0.05, 300}, {0.01, 300}};
    options.energy_tol = 1e-11;
    return mps::imaginary_time_ground_state(spec.bonds, lattice::hamiltonian_mpo(spec),
                                            lattice::vacuum_state(spec), policy, options);
}

mps::Mps prepare_input(const lattice::LatticeSpec& spec, const mps::Mps& ground,
                       const WavepacketSpec& wp, const mps::TruncationPolicy& policy) {
    const auto phi = wavepacket_profile(wp, spec.params.sites, spec.params.x0);
    std::vector<mps::Matrix> adag(spec.params.sites);
    for (int x = 0; x < spec.params.sites; ++x)
        adag[x] = lattice::site_annihilator(spec, x).adjoint();

    mps::Mps state = ground;
    mps::apply_mpo(state, mps::one_body_mpo(phi, adag), policy);
    state.normalize();
    return state;
}

std::array<double, 3> level_populations(const mps::Mps& state,
                                        const lattice::LatticeSpec& spec) {
    std::array<double, 3> p{};
    for (int level = 0; level < 3; ++level)
        p[level] = state
                       .expectation(spec.scatterer_site(),
                                    lattice::level_projector(spec, level))
                       .real();
    const double total = p[0] + p[1] + p[2];
    if (std::abs(total - 1.0) > 1e-8)
        throw std::runtime_error("level_populations: probabilities sum to " +
                                 std::to_string(total));
    return p;
}

MomentumOccupation momentum_occupation(const mps::Mps& state,
                                       const lattice::LatticeSpec& spec) {
    const int n = spec.params.sites;
    const Eigen::MatrixXcd corr =
        state.correlation_matrix(lattice::annihilator_table(spec));

    // n(k) = (1/L) sum_{xy} e^{i k (x-y)} C(x,y): diagonal of F C F^dag
    Eigen::FFT<double> fft;
    Eigen::MatrixXcd stage(n, n);
    std::vector<cplx> in(n), out(n);
    for (int col = 0; col < n; ++col) {
        for (int x = 0; x < n; ++x) in[x] = corr(x, col);
        fft.fwd(out, in);  // sum_x e^{-i 2 pi m x / L}
        for (int m = 0; m < n; ++m) stage(m, col) = out[m];
    }
    MomentumOccupation occ;
    for (int m = 0; m < n; ++m) {
        for (int y = 0; y < n; ++y) in[y] = std::conj(stage(m, y));
        fft.fwd(out, in);
        const double value = std::real(std::conj(out[m])) / n;
        const int folded = (m <= n / 2) ? m : m - n;  // k = 2 pi folded / L
        const double k = 2.0 * model::kPi * std::abs(folded) / n;
        if (k < 1e-9 || k > model::kPi - 1e-9) {
            occ.total += value;
            continue;  // zero modes carry no direction
        }
        if (folded > 0) {
            occ.omega.push_back(model::dispersion(spec.params, k));
            occ.right.push_back(value);
            occ.left.push_back(0.0);
        } else {
            occ.omega.push_back(model::dispersion(spec.params, k));
            occ.right.push_back(0.0);
            occ.left.push_back(value);
        }
        occ.total += value;
    }
    return occ;
}

OnePhotonCoefficients one_photon_coefficients(const std::vector<cplx>& f_out,
                                              const std::vector<cplx>& f_in,
                                              const model::ModelParams& params,
                                              const std::vector<double>& omega_grid,
                                              double t_out, double snr_floor) {
    const int n = static_cast<int>(f_in.size());
    auto project = [&](const std::vector<cplx>& f, double k) {
        cplx s = 0.0;
        for (int x = 0; x < n; ++x) s += f[x] * std::exp(cplx(0.0, -k * x));
        return s;
    };

    OnePhotonCoefficients out;
    out.omega = omega_grid;
    out.t.resize(omega_grid.size());
    out.r.resize(omega_grid.size());
    out.masked.assign(omega_grid.size(), false);

    double peak = 0.0;
    std::vector<cplx> in_amp(omega_grid.size());
    for (std::size_t i = 0; i < omega_grid.size(); ++i) {
        const double k = model::wavenumber(params, omega_grid[i]);
        in_amp[i] = project(f_in, k);
        peak = std::max(peak, std::abs(in_amp[i]));
    }
    for (std::size_t i = 0; i < omega_grid.size(); ++i) {
        if (std::abs(in_amp[i]) < snr_floor * peak) {
            out.masked[i] = true;
            out.t[i] = out.r[i] = cplx(0.0, 0.0);
            continue;
        }
        const double k = model::wavenumber(params, omega_grid[i]);
        const cplx undo_phase = std::exp(cplx(0.0, omega_grid[i] * t_out));
        out.t[i] = project(f_out, k) * undo_phase / in_amp[i];
        out.r[i] = project(f_out, -k) * undo_phase / in_amp[i];
    }
    return out;
}

std::vector<double> p2_from_unitarity(const OnePhotonCoefficients& coeffs) {
    std::vector<double> p2(coeffs.omega.size());
    for (std::size_t i = 0; i < coeffs.omega.size(); ++i) {
        if (coeffs.masked[i]) {
            p2[i] = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        const double raw = 1.0 - std::norm(coeffs.t[i]) - std::norm(coeffs.r[i]);
        p2[i] = std::clamp(raw, 0.0, 1.0);
    }
    return p2;
}

TwoPhotonAmplitude two_photon_amplitude(const mps::Mps& state,
                                        const lattice::LatticeSpec& spec) {
    TwoPhotonAmplitude amp;
    amp.amplitude = state.vacuum_two_point(lattice::annihilator_table(spec),
                                           lattice::double_annihilator_table(spec));
    amp.basis = TwoPhotonBasis::kPosition;
    amp.axis.resize(spec.params.sites);
    for (int x = 0; x < spec.params.sites; ++x) amp.axis[x] = x;
    return amp;
}

TwoPhotonAmplitude to_energy_basis(const TwoPhotonAmplitude& position_amp,
                                   const model::ModelParams& params,
                                   const std::vector<double>& omega_grid) {
    if (position_amp.basis != TwoPhotonBasis::kPosition)
        throw std::invalid_argument("to_energy_basis: expected a position-basis amplitude");
    const int n = static_cast<int>(position_amp.amplitude.rows());
    const int m = static_cast<int>(omega_grid.size());
    Eigen::MatrixXcd f(m, n);
    for (int i = 0; i < m; ++i) {
        const double k = model::wavenumber(params, omega_grid[i]);
        for (int x = 0; x < n; ++x) f(i, x) = std::exp(cplx(0.0, -k * x));
    }
    TwoPhotonAmplitude out;
    out.amplitude = f * position_amp.amplitude * f.transpose();
    out.basis = TwoPhotonBasis::kRightMovingEnergy;
    out.axis = omega_grid;
    return out;
}

double two_photon_total(const TwoPhotonAmplitude& position_amp) {
    return 0.5 * position_amp.amplitude.squaredNorm();
}

double three_photon_weight(const mps::Mps& state, const lattice::LatticeSpec& spec) {
    const double m1 = state.expectation(lattice::number_mpo(spec, 1)).real();
    const double m2 = state.expectation(lattice::number_mpo(spec, 2)).real();
    const double m3 = state.expectation(lattice::number_mpo(spec, 3)).real();
    // <N(N-1)(N-2)>/6: zero on states with at most two photons
    return (m3 - 3.0 * m2 + 2.0 * m1) / 6.0;
}

RunArtifacts run_scattering(const lattice::LatticeSpec& spec, const mps::Mps& ground,
                            const WavepacketSpec& wp, const SimulationSchedule& schedule,
                            const mps::TruncationPolicy& policy) {
    RunArtifacts run;
    run.input = prepare_input(spec, ground, wp, policy);
    run.f_in = run.input.vacuum_one_point(lattice::annihilator_table(spec));

    run.final_state = run.input;
    auto observer = [&](int /*step*/, double t, mps::Mps& state) {
        run.times.push_back(t);
        run.populations.push_back(level_populations(state, spec));
    };
    run.report = mps::evolve(run.final_state, spec.bonds, schedule.dt, schedule.steps(),
                             policy, observer, schedule.snapshot_stride);
    run.f_out = run.final_state.vacuum_one_point(lattice::annihilator_table(spec));
    return run;
}

namespace {

// Binned unitarity bookkeeping on the FFT wavenumber grid: input, one-photon
// output and pair output falling in an energy window around the carrier.
struct BinnedTriple {
    double transmission = 0.0, reflection = 0.0, pairs = 0.0;
};

BinnedTriple binned_energy_budget(const RunArtifacts& run,
                                  const lattice::LatticeSpec& spec, double omega0,
                                  double half_width) {
    const int n = spec.params.sites;
    Eigen::FFT<double> fft;
    std::vector<cplx> tmp_in(n), tmp_out(n);

    auto grid_omega = [&](int m) -> double {
        const int folded = (m <= n / 2) ? m : m - n;
        const double k = 2.0 * model::kPi * std::abs(folded) / n;
        if (k < 1e-12 || k > model::kPi - 1e-12) return -1.0;  // undefined direction
        return model::dispersion(spec.params, k);
    };
    auto is_right = [&](int m) { return m >= 1 && m <= (n - 1) / 2; };

    for (int x = 0; x < n; ++x) tmp_in[x] = run.f_in[x];
    fft.fwd(tmp_out, tmp_in);
    std::vector<cplx> in_k = tmp_out;
    for (int x = 0; x < n; ++x) tmp_in[x] = run.f_out[x];
    fft.fwd(tmp_out, tmp_in);
    std::vector<cplx> out_k = tmp_out;

    double input_weight = 0.0, trans = 0.0, refl = 0.0;
    for (int m = 0; m < n; ++m) {
        const double w = grid_omega(m);
        if (w < 0.0 || std::abs(w - omega0) > half_width) continue;
        if (is_right(m)) {
            input_weight += std::norm(in_k[m]) / n;
            trans += std::norm(out_k[m]) / n;
        } else {
            refl += std::norm(out_k[m]) / n;
        }
    }

    // pair weight: 2D FFT of the position amplitude
    const TwoPhotonAmplitude pos = two_photon_amplitude(run.final_state, spec);
    Eigen::MatrixXcd stage(n, n);
    for (int col = 0; col < n; ++col) {
        for (int x = 0; x < n; ++x) tmp_in[x] = pos.amplitude(x, col);
        fft.fwd(tmp_out, tmp_in);
        for (int m = 0; m < n; ++m) stage(m, col) = tmp_out[m];
    }
    double pair_weight = 0.0;
    std::vector<double> omega_of(n);
    for (int m = 0; m < n; ++m) omega_of[m] = grid_omega(m);
    for (int m1 = 0; m1 < n; ++m1) {
        if (omega_of[m1] < 0.0) continue;
        for (int x = 0; x < n; ++x) tmp_in[x] = stage(m1, x);
        fft.fwd(tmp_out, tmp_in);
        for (int m2 = 0; m2 < n; ++m2) {
            if (omega_of[m2] < 0.0) continue;
            if (std::abs(omega_of[m1] + omega_of[m2] - omega0) > half_width) continue;
            pair_weight += 0.5 * std::norm(tmp_out[m2]) / (n * n);
        }
    }

    BinnedTriple triple;
    if (input_weight > 0.0) {
        triple.transmission = trans / input_weight;
        triple.reflection = refl / input_weight;
        triple.pairs = pair_weight / input_weight;
    }
    return triple;
}

}  // namespace

SpectrumPoint evaluate_point(const lattice::LatticeSpec& spec, const mps::Mps& ground,
                             const WavepacketSpec& wp_template, double k0,
                             const mps::TruncationPolicy& policy, double dt) {
    const auto start = std::chrono::steady_clock::now();
    SpectrumPoint point;
    point.k0 = k0;
    point.omega = model::dispersion(spec.params, k0);

    WavepacketSpec wp = wp_template;
    wp.k0 = k0;
    const auto schedule = SimulationSchedule::automatic(spec.params, wp, dt);
    const RunArtifacts run = run_scattering(spec, ground, wp, schedule, policy);

    const auto coeffs = one_photon_coefficients(run.f_out, run.f_in, spec.params,
                                                {point.omega}, schedule.t_out);
    point.transmission = std::norm(coeffs.t[0]);
    point.reflection = std::norm(coeffs.r[0]);
    point.p2 = p2_from_unitarity(coeffs)[0];

    const double bin = 0.02;
    const auto triple = binned_energy_budget(run, spec, point.omega, bin);
    point.p2_direct = triple.pairs;
    point.unitarity_defect =
        std::abs(triple.transmission + triple.reflection + triple.pairs - 1.0);
    point.three_photon = three_photon_weight(run.final_state, spec);
    point.norm_drift = run.report.norm_drift;
    point.discarded_weight = run.report.discarded_weight;
    point.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return point;
}

SpectrumResult spectrum_scan(const model::ModelParams& params, int n_max,
                             const WavepacketSpec& wp_template,
                             const std::vector<double>& k0_grid,
                             const mps::TruncationPolicy& policy, int threads,
                             double dt) {
    const lattice::LatticeSpec spec = lattice::build_lattice(params, n_max);
    const mps::Mps ground = ground_state(spec, policy);

    SpectrumResult result;
    result.points.resize(k0_grid.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= k0_grid.size()) return;
            try {
                result.points[i] =
                    evaluate_point(spec, ground, wp_template, k0_grid[i], policy, dt);
            } catch (const std::exception& e) {
                result.points[i].k0 = k0_grid[i];
                result.points[i].failed = true;
                result.points[i].error = e.what();
            }
        }
    };
    std::vector<std::future<void>> pool;
    for (int t = 1; t < threads; ++t) pool.push_back(std::async(std::launch::async, worker));
    worker();
    for (auto& f : pool) f.get();

    result.metadata["L"] = std::to_string(params.sites);
    result.metadata["x0"] = std::to_string(params.x0);
    result.metadata["n_max"] = std::to_string(n_max);
    result.metadata["bond_dim"] = std::to_string(policy.max_bond);
    result.metadata["dt"] = std::to_string(dt);
    result.metadata["sigma"] = std::to_string(wp_template.sigma);
    result.metadata["x_bar"] = std::to_string(wp_template.x_bar);
    return result;
}

}  // namespace pdl::scattering
