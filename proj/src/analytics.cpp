#include "pdl/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pdl::analytics {

namespace {
constexpr cplx kI{0.0, 1.0};
}

void MirrorConfig::validate() const {
    if (std::abs(r_mirror) > 1.0 + 1e-12)
        throw std::invalid_argument("MirrorConfig: |r_mirror| must be <= 1");
}

cplx t1_closed_form(double omega, const model::RateSet& rates,
                    const model::TransitionFrequencies& freqs) {
    rates.validate();
    cplx t = 1.0;
    if (rates.gamma0_01 > 0.0) {
        const cplx d1 = (omega - freqs.w01) + kI * rates.total01();
        t -= kI * rates.gamma0_01 / d1;
    }
    if (rates.gamma0_02 > 0.0) {
        const double level2_width = rates.total02() + rates.total12();
        const cplx d2 = (omega - freqs.w02()) + kI * level2_width;
        t -= kI * rates.gamma0_02 / d2;
    }
    return t;
}

cplx r1_closed_form(double omega, const model::RateSet& rates,
                    const model::TransitionFrequencies& freqs) {
    return t1_closed_form(omega, rates, freqs) - 1.0;
}

double absorption(double omega, const model::RateSet& rates,
                  const model::TransitionFrequencies& freqs,
                  double window_halfwidths) {
    rates.validate();
    if (rates.loss_02 == 0.0) return 0.0;
    const double gamma02_tot = rates.total02();
    const cplx r1 = r1_closed_form(omega, rates, freqs);
    const double a = 2.0 * rates.loss_02 * std::norm(r1) / gamma02_tot;

    // Cosine taper from w to 1.5 w half-widths away from the 0-2 resonance.
    const double u = std::abs(omega - freqs.w02()) / (window_halfwidths * gamma02_tot);
    if (u <= 1.0) return a;
    if (u >= 1.5) return 0.0;
    const double c = std::cos(model::kPi * (u - 1.0));
    return a * c * c;
}

double p2(double omega, const model::RateSet& rates,
          const model::TransitionFrequencies& freqs) {
    const cplx t = t1_closed_form(omega, rates, freqs);
    const double raw = 1.0 - std::norm(t) - std::norm(t - 1.0) -
                       absorption(omega, rates, freqs);
    return std::max(raw, 0.0);
}

namespace {

// Shared bounce-sum denominator 1 - r1 Phi r_M.
cplx bounce_denominator(cplx r1, cplx phi, cplx r_mirror) {
    const cplx d = 1.0 - r1 * phi * r_mirror;
    if (std::abs(d) < 1e-12)
        throw std::domain_error("mirror sum: resonant denominator underflow");
    return d;
}

}  // namespace

cplx mirror_reflection_total(double omega, const model::RateSet& rates,
                             const model::TransitionFrequencies& freqs,
                             const MirrorConfig& mirror) {
    mirror.validate();
    const cplx t = t1_closed_form(omega, rates, freqs);
    const cplx r1 = t - 1.0;
    const cplx phi = mirror.round_trip_phase();
    const cplx den = bounce_denominator(r1, phi, mirror.r_mirror);
    return r1 + t * t * phi * mirror.r_mirror / den;
}

cplx mirror_leakage_total(cplx tau, double omega, const model::RateSet& rates,
                          const model::TransitionFrequencies& freqs,
                          const MirrorConfig& mirror) {
    mirror.validate();
    const cplx t = t1_closed_form(omega, rates, freqs);
    const cplx r1 = t - 1.0;
    const cplx phi = mirror.round_trip_phase();
    const cplx den = bounce_denominator(r1, phi, mirror.r_mirror);
    return tau * (1.0 + t * phi * mirror.r_mirror / den);
}

cplx mirror_leakage_total(double omega, const model::RateSet& rates,
                          const model::TransitionFrequencies& freqs,
                          const MirrorConfig& mirror) {
    const cplx tau = std::sqrt(absorption(omega, rates, freqs));
    return mirror_leakage_total(tau, omega, rates, freqs, mirror);
}

double p2_mirror(double omega, const model::RateSet& rates,
                 const model::TransitionFrequencies& freqs,
                 const MirrorConfig& mirror) {
    mirror.validate();
    const cplx t = t1_closed_form(omega, rates, freqs);
    const cplx r1 = t - 1.0;
    const cplx phi = mirror.round_trip_phase();
    const cplx den = bounce_denominator(r1, phi, mirror.r_mirror);

    const cplx r_tot = r1 + t * t * phi * mirror.r_mirror / den;
    // Single-pass amplitude that escapes through a partially reflecting
    // mirror; its one-way phase is irrelevant to the modulus.
    const double t_mirror_sq = std::max(0.0, 1.0 - std::norm(mirror.r_mirror));
    const double through = t_mirror_sq * std::norm(t / den);
    const double leak = absorption(omega, rates, freqs) *
                        std::norm(1.0 + t * phi * mirror.r_mirror / den);

    const double raw = 1.0 - std::norm(r_tot) - through - leak;
    return std::clamp(raw, 0.0, 1.0);
}

EfficiencyMap efficiency_map(const model::RateSet& base_rates,
                             const model::TransitionFrequencies& freqs,
                             const std::vector<double>& kd_grid,
                             const std::vector<double>& ratio_grid,
                             double loss_ratio) {
    if (kd_grid.empty() || ratio_grid.empty())
        throw std::invalid_argument("efficiency_map: empty grid");
    if (loss_ratio < 0.0)
        throw std::invalid_argument("efficiency_map: loss ratio must be >= 0");

    EfficiencyMap map;
    map.kd_grid = kd_grid;
    map.ratio_grid = ratio_grid;
    map.loss_over_radiative02 = loss_ratio;
    map.p2.assign(ratio_grid.size(), std::vector<double>(kd_grid.size(), 0.0));
    map.best_p2 = -1.0;

    const double omega = freqs.w02();
    for (std::size_t i = 0; i < ratio_grid.size(); ++i) {
        model::RateSet rates = base_rates;
        rates.gamma0_12 = ratio_grid[i] * rates.gamma0_02;
        rates.loss_02 = loss_ratio * rates.gamma0_02;
        rates.loss_01 = rates.loss_12 = 0.0;
        for (std::size_t j = 0; j < kd_grid.size(); ++j) {
            MirrorConfig mirror;
            mirror.kd = kd_grid[j];
            const double value = p2_mirror(omega, rates, freqs, mirror);
            map.p2[i][j] = value;
            if (value > map.best_p2) {
                map.best_p2 = value;
                map.best_kd = kd_grid[j];
                map.best_ratio = ratio_grid[i];
            }
        }
    }
    return map;
}

}  // namespace pdl::analytics
