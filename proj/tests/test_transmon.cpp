#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pdl/model.hpp"
#include "pdl/transmon.hpp"

using namespace pdl;

TEST_CASE("harmonic limit") {
    transmon::TransmonSpec spec;
    spec.ec_over_ej = 1e-4;
    spec.ncut = 60;
    const auto eig = transmon::diagonalize(spec);
    const double w01 = eig.omega(1);
    const double w12 = eig.omega(2) - eig.omega(1);
    CHECK(w12 / w01 == doctest::Approx(1.0).epsilon(2e-3));
    CHECK(w01 == doctest::Approx(std::sqrt(8.0 * spec.ec() * spec.ej)).epsilon(1e-2));
}

TEST_CASE("transmon point: spectrum, convergence, selection rules") {
    transmon::TransmonSpec spec;  // E_C/E_J = 1/20
    const auto eig = transmon::diagonalize(spec);

    SUBCASE("negative anharmonicity, cutoff independence") {
        const double w01 = eig.omega(1);
        const double w12 = eig.omega(2) - eig.omega(1);
        CHECK(w12 < w01);
        transmon::TransmonSpec bigger = spec;
        bigger.ncut = 60;
        const auto eig2 = transmon::diagonalize(bigger);
        CHECK((eig.omega - eig2.omega).cwiseAbs().maxCoeff() < 1e-10);
    }

    SUBCASE("frozen reference values at E_C/E_J = 1/20") {
        // convergence-verified dense diagonalization, ncut = 40
        CHECK(eig.omega(1) == doctest::Approx(0.60085919).epsilon(1e-7));
        CHECK(eig.omega(2) == doctest::Approx(1.14527630).epsilon(1e-7));
    }

    SUBCASE("charge and cos(phi) selection rules at ng = 0") {
        const auto q = transmon::charge_matrix_elements(spec, eig);
        const auto c = transmon::cosphi_matrix_elements(spec, eig);
        CHECK(std::abs(q(0, 2)) < 1e-10);
        CHECK(std::abs(q(0, 0)) < 1e-10);
        CHECK(std::abs(q(1, 1)) < 1e-10);
        CHECK(std::abs(q(2, 2)) < 1e-10);
        CHECK(std::abs(c(0, 1)) < 1e-10);
        CHECK(std::abs(c(1, 2)) < 1e-10);
        CHECK(std::abs(q(0, 1)) > 1e-3);
        CHECK(std::abs(q(1, 2)) > 1e-3);
        CHECK(std::abs(c(0, 2)) > 1e-3);
        CHECK((q - q.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((c - c.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        for (int i = 0; i < 2; ++i) {
            CHECK(c(i, i) > 0.0);
            CHECK(c(i, i) < 1.0);
        }
    }
}

TEST_CASE("ratio sweep") {
    transmon::TransmonSpec base;
    std::vector<double> ratios;
    for (int i = 1; i <= 24; ++i) ratios.push_back(0.01 + (0.25 - 0.01) * i / 24.0);
    ratios.push_back(1.0 / 20.0);
    const auto rows = transmon::sweep_ratio(base, ratios);

    for (const auto& row : rows) {
        CHECK(row.w12 < row.w01);               // anharmonicity sign everywhere
        CHECK(std::abs(row.q02) < 1e-10);       // selection rules hold across the sweep
        CHECK(std::abs(row.q01) > 0.0);
    }
    // continuity: no jumps between neighbouring ratios
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
        CHECK(std::abs(rows[i].q01 - rows[i - 1].q01) < 0.2);
        CHECK(std::abs(rows[i].c02 - rows[i - 1].c02) < 0.2);
    }
    // matrix elements grow toward the harmonic (small E_C) end
    CHECK(std::abs(rows.front().q01) > std::abs(rows[rows.size() - 3].q01));

    // the dedicated single point agrees with the matching sweep row
    transmon::TransmonSpec point;
    const auto eig = transmon::diagonalize(point);
    const auto q = transmon::charge_matrix_elements(point, eig);
    const auto& last = rows.back();
    CHECK(last.ratio == doctest::Approx(1.0 / 20.0));
    CHECK(last.q01 == doctest::Approx(q(0, 1)).epsilon(1e-12));
    CHECK(last.w01 == doctest::Approx(eig.omega(1)).epsilon(1e-12));
}

TEST_CASE("coupling assembly") {
    transmon::TransmonSpec spec;
    const auto eig = transmon::diagonalize(spec);

    SUBCASE("inductive channel owns g02, capacitive channel owns g01 and g12") {
        const auto g = transmon::build_couplings(spec, eig, 0.7, 1.3);
        CHECK(std::abs(g.cap02) < 1e-10);
        CHECK(std::abs(g.ind01) < 1e-10);
        CHECK(std::abs(g.ind12) < 1e-10);
        CHECK(std::abs(g.g02) > 0.0);
        CHECK_FALSE(g.no_cyclic_structure);

        const auto no_ind = transmon::build_couplings(spec, eig, 0.7, 0.0);
        CHECK(no_ind.g02 == doctest::Approx(0.0));
    }

    SUBCASE("external phase pi/2 maximizes the inductive channel") {
        const auto at_quarter = transmon::build_couplings(spec, eig, 1.0, 1.0);
        transmon::TransmonSpec off = spec;
        off.phi_ext = 0.7;
        const auto eig_off = transmon::diagonalize(off);
        const auto detuned = transmon::build_couplings(off, eig_off, 1.0, 1.0);
        CHECK(std::abs(at_quarter.g02) > std::abs(detuned.g02));

        transmon::TransmonSpec flat = spec;
        flat.phi_ext = 0.0;
        const auto none = transmon::build_couplings(flat, transmon::diagonalize(flat), 1.0, 1.0);
        CHECK(none.no_cyclic_structure);
    }
}

TEST_CASE("inductive knob tuning hits the target rate ratio") {
    transmon::TransmonSpec spec;
    const auto eig = transmon::diagonalize(spec);

    // rescale the transmon spectrum onto the reference chain and read the
    // density of states at the mapped transition frequencies
    const double scale = 0.59 / eig.omega(1);
    const double w12 = scale * (eig.omega(2) - eig.omega(1));
    const double w02 = scale * eig.omega(2);
    const double eps = 1.0, j = 1.0 / model::kPi;
    const double d12 = model::density_of_states(eps, j, w12);
    const double d02 = model::density_of_states(eps, j, w02);

    const double knob = transmon::tune_inductive_knob(spec, eig, 1.0, 2.0, d12, d02);
    const auto g = transmon::build_couplings(spec, eig, 1.0, knob);
    const double r12 = model::rate_from_coupling(eps, j, g.g12, w12);
    const double r02 = model::rate_from_coupling(eps, j, g.g02, w02);
    CHECK(r12 / r02 == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("spec validation") {
    transmon::TransmonSpec bad;
    bad.ec_over_ej = 0.0;
    CHECK_THROWS(transmon::diagonalize(bad));
    bad = transmon::TransmonSpec{};
    bad.ncut = 3;
    CHECK_THROWS(transmon::diagonalize(bad));
}
