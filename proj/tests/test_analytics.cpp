#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pdl/analytics.hpp"

using namespace pdl;
using analytics::cplx;

namespace {

model::RateSet paper_rates(double loss02 = 0.0) {
    model::RateSet r;
    r.gamma0_01 = 1.7e-3;
    r.gamma0_02 = 2.3e-3;
    r.gamma0_12 = 3.5e-3;
    r.loss_02 = loss02;
    return r;
}

const model::TransitionFrequencies kFreqs{0.59, 0.51};

model::RateSet random_rates(std::mt19937& rng, double scale = 1e-2) {
    std::uniform_real_distribution<double> dist(0.0, scale);
    model::RateSet r;
    r.gamma0_01 = dist(rng);
    r.gamma0_02 = dist(rng);
    r.gamma0_12 = dist(rng);
    return r;
}

}  // namespace

TEST_CASE("t1 limits") {
    const auto rates = paper_rates();
    CHECK(std::abs(analytics::t1_closed_form(5.0, rates, kFreqs) - 1.0) < 5e-3);

    // two-level limit: perfect mirror at the 0-1 resonance
    model::RateSet two_level;
    two_level.gamma0_01 = 2e-3;
    CHECK(std::abs(analytics::t1_closed_form(kFreqs.w01, two_level, kFreqs)) < 1e-14);
    CHECK(analytics::r1_closed_form(kFreqs.w01, two_level, kFreqs).real() ==
          doctest::Approx(-1.0));
}

TEST_CASE("1 + r1 = t1 at machine precision") {
    std::mt19937 rng(11);
    for (int i = 0; i < 256; ++i) {
        auto rates = random_rates(rng);
        std::uniform_real_distribution<double> wdist(0.3, 1.4);
        const double omega = wdist(rng);
        const cplx t = analytics::t1_closed_form(omega, rates, kFreqs);
        const cplx r = analytics::r1_closed_form(omega, rates, kFreqs);
        CHECK(std::abs(1.0 + r - t) < 1e-14);
    }
}

TEST_CASE("absorption model") {
    CHECK(analytics::absorption(kFreqs.w02(), paper_rates(), kFreqs) == 0.0);

    for (double loss : {1e-4, 2e-4, 4e-4}) {
        const auto rates = paper_rates(loss);
        const double a = analytics::absorption(kFreqs.w02(), rates, kFreqs);
        const double r2 =
            std::norm(analytics::r1_closed_form(kFreqs.w02(), rates, kFreqs));
        // formula structure: A Gamma_02 / |r1|^2 = 2 gamma_02 exactly
        CHECK(a * rates.total02() / r2 == doctest::Approx(2.0 * loss).epsilon(1e-12));
    }

    // tapered to zero far from the 0-2 resonance
    const auto rates = paper_rates(2.3e-4);
    CHECK(analytics::absorption(0.59, rates, kFreqs) == 0.0);
    CHECK(analytics::absorption(kFreqs.w02(), rates, kFreqs) > 0.0);
}

TEST_CASE("p2 without mirror") {
    const auto rates = paper_rates();
    SUBCASE("vanishes on the two-level dip and far detuned") {
        model::RateSet two_level;
        two_level.gamma0_01 = 2e-3;
        CHECK(analytics::p2(kFreqs.w01, two_level, kFreqs) < 1e-12);
        CHECK(analytics::p2(3.0, rates, kFreqs) < 1e-3);
    }
    SUBCASE("peak near w02 approaches one half") {
        const double peak = analytics::p2(kFreqs.w02(), rates, kFreqs);
        CHECK(peak > 0.43);
        CHECK(peak <= 0.5);
    }
    SUBCASE("exactly one half when r1 = -1/2 is engineered") {
        model::RateSet r;
        r.gamma0_02 = 1e-3;
        r.gamma0_12 = 1e-3;  // level-2 width twice the radiative 0-2 rate
        const cplx refl = analytics::r1_closed_form(kFreqs.w02(), r, kFreqs);
        CHECK(std::abs(refl - cplx(-0.5, 0.0)) < 1e-12);
        CHECK(analytics::p2(kFreqs.w02(), r, kFreqs) == doctest::Approx(0.5).epsilon(1e-9));
    }
}

TEST_CASE("half bound over random draws") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> wdist(0.3, 1.4);
    for (int i = 0; i < 2000; ++i) {
        const auto rates = random_rates(rng);
        const double p = analytics::p2(wdist(rng), rates, kFreqs);
        CHECK(p >= 0.0);
        CHECK(p <= 0.5 + 1e-9);
    }
}

TEST_CASE("mirror sums against explicit bounce summation") {
    std::mt19937 rng(37);
    std::uniform_real_distribution<double> wdist(0.55, 1.25), kddist(0.1, 3.0),
        rmdist(0.1, 0.95), phdist(0.0, 2.0 * model::kPi);
    for (int i = 0; i < 64; ++i) {
        const auto rates = random_rates(rng);
        const double omega = wdist(rng);
        analytics::MirrorConfig mirror;
        mirror.kd = kddist(rng);
        mirror.r_mirror = rmdist(rng) * std::exp(cplx(0.0, phdist(rng)));

        const cplx t = analytics::t1_closed_form(omega, rates, kFreqs);
        const cplx r1 = t - 1.0;
        const cplx phi = mirror.round_trip_phase();
        const cplx loop = r1 * phi * mirror.r_mirror;

        cplx r_sum = r1;
        cplx tau_unit_sum = 1.0;
        cplx hop = t * phi * mirror.r_mirror;
        for (int n = 0; n < 200; ++n) {
            r_sum += hop * t * std::pow(loop, n);
            tau_unit_sum += hop * std::pow(loop, n);
            if (std::pow(std::abs(loop), n) < 1e-13) break;
        }
        CHECK(std::abs(analytics::mirror_reflection_total(omega, rates, kFreqs, mirror) -
                       r_sum) < 1e-10);
        const cplx tau{0.37, -0.11};
        CHECK(std::abs(analytics::mirror_leakage_total(tau, omega, rates, kFreqs, mirror) -
                       tau * tau_unit_sum) < 1e-10);
    }
}

TEST_CASE("mirror edge cases") {
    const auto rates = paper_rates(1e-4);
    analytics::MirrorConfig no_mirror;
    no_mirror.kd = 1.2;
    no_mirror.r_mirror = 0.0;
    const double omega = kFreqs.w02();
    CHECK(std::abs(analytics::mirror_reflection_total(omega, rates, kFreqs, no_mirror) -
                   analytics::r1_closed_form(omega, rates, kFreqs)) < 1e-14);
    CHECK(std::abs(analytics::mirror_leakage_total(omega, rates, kFreqs, no_mirror)) ==
          doctest::Approx(std::sqrt(analytics::absorption(omega, rates, kFreqs))));
    CHECK(analytics::p2_mirror(omega, rates, kFreqs, no_mirror) ==
          doctest::Approx(analytics::p2(omega, rates, kFreqs)).epsilon(1e-12));

    // opaque scatterer: geometric series collapses
    model::RateSet two_level;
    two_level.gamma0_01 = 2e-3;
    analytics::MirrorConfig mirror;
    const cplx rtot =
        analytics::mirror_reflection_total(kFreqs.w01, two_level, kFreqs, mirror);
    CHECK(std::abs(rtot - analytics::r1_closed_form(kFreqs.w01, two_level, kFreqs)) <
          1e-13);

    // d = 0: every reflected path cancels, nothing left but downconversion
    analytics::MirrorConfig contact;
    contact.kd = 0.0;
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> wdist(0.4, 1.3);
    for (int i = 0; i < 32; ++i) {
        const auto rr = random_rates(rng);
        CHECK(analytics::p2_mirror(wdist(rng), rr, kFreqs, contact) < 1e-12);
    }
}

TEST_CASE("hard mirror optimum") {
    // kd = pi/2, Gamma0_12 / Gamma0_02 = 2: lossless downconversion is complete
    model::RateSet rates;
    rates.gamma0_01 = 1.7e-3;
    rates.gamma0_02 = 2.3e-3;
    rates.gamma0_12 = 4.6e-3;
    analytics::MirrorConfig mirror;  // kd = pi/2, r_M = -1
    const double omega = kFreqs.w02();
    CHECK(analytics::p2_mirror(omega, rates, kFreqs, mirror) >= 0.99);

    // loss sized at 10% of the level-2 width knocks the maximum to ~0.9
    model::RateSet lossy = rates;
    lossy.loss_02 = rates.gamma0_02 / 3.0;
    lossy.gamma0_12 = 2.0 * rates.gamma0_02;
    const double p2 = analytics::p2_mirror(omega, lossy, kFreqs, mirror);
    const double loss_fraction =
        lossy.loss_02 / (lossy.total02() + lossy.total12());
    CHECK(loss_fraction == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(std::abs(p2 - (1.0 - loss_fraction)) < 0.02);
}

TEST_CASE("efficiency map") {
    model::RateSet base;
    base.gamma0_01 = 1.7e-3;
    base.gamma0_02 = 2.3e-3;

    std::vector<double> kd_grid, ratio_grid;
    for (int i = 0; i <= 80; ++i) kd_grid.push_back(0.02 + i * (model::kPi - 0.04) / 80.0);
    kd_grid.push_back(model::kPi / 2.0);
    for (int i = 0; i <= 60; ++i) ratio_grid.push_back(0.2 + i * 4.8 / 60.0);
    ratio_grid.push_back(2.0);

    SUBCASE("lossless maximum reaches unity") {
        const auto map = analytics::efficiency_map(base, kFreqs, kd_grid, ratio_grid, 0.0);
        CHECK(map.best_p2 > 0.999);
        CHECK(map.best_kd == doctest::Approx(model::kPi / 2.0).epsilon(0.05));
        CHECK(map.best_ratio == doctest::Approx(2.0).epsilon(0.05));
    }
    SUBCASE("conservative loss: optimum stays near (pi/2, 2)") {
        const auto map = analytics::efficiency_map(base, kFreqs, kd_grid, ratio_grid, 0.1);
        CHECK(map.best_kd == doctest::Approx(model::kPi / 2.0).epsilon(0.05));
        CHECK(map.best_ratio == doctest::Approx(2.0).epsilon(0.10));
        const double gamma02 = 0.1 * base.gamma0_02;
        const double claim = 1.0 - gamma02 / (base.gamma0_02 + gamma02);
        CHECK(std::abs(map.best_p2 - claim) < 0.06);
        for (const auto& row : map.p2)
            for (double v : row) {
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
            }
    }
    SUBCASE("periodic in 2 kd") {
        const auto map = analytics::efficiency_map(base, kFreqs, {0.4, 0.4 + model::kPi},
                                                   {1.0, 2.0}, 0.1);
        CHECK(map.p2[0][0] == doctest::Approx(map.p2[0][1]).epsilon(1e-12));
        CHECK(map.p2[1][0] == doctest::Approx(map.p2[1][1]).epsilon(1e-12));
    }
}
