#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "pdl/analytics.hpp"
#include "pdl/linresp.hpp"

using namespace pdl;
using linresp::cplx;
using linresp::LindbladSpec;
using linresp::Matrix3c;

namespace {

LindbladSpec paper_spec(double loss02 = 0.0) {
    LindbladSpec spec;
    spec.freqs = {0.59, 0.51};
    spec.rates.gamma0_01 = 1.7e-3;
    spec.rates.gamma0_02 = 2.3e-3;
    spec.rates.gamma0_12 = 3.5e-3;
    spec.rates.loss_02 = loss02;
    return spec;
}

}  // namespace

TEST_CASE("undriven steady state is the ground projector") {
    const auto ss = linresp::steady_state_first_order(paper_spec());
    CHECK((ss.rho(0.0) - ss.rho0).cwiseAbs().maxCoeff() == 0.0);
    CHECK(std::abs(ss.rho0(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(ss.rho0.trace() - 1.0) < 1e-15);
    for (int i = 0; i < 3; ++i) CHECK(ss.rho(1e-4)(i, i).real() >= -1e-12);
}

TEST_CASE("no drive path without the 0-2 coupling") {
    auto spec = paper_spec();
    spec.rates.gamma0_02 = 0.0;
    const auto ss = linresp::steady_state_first_order(spec);
    CHECK(std::abs(ss.rho1(2, 0)) < 1e-15);
    CHECK(std::abs(ss.rho1(1, 0)) > 0.0);
}

TEST_CASE("first-order coherences match a dense Liouvillian kernel solve") {
    // Independent route: stationary state of the full driven Liouvillian
    // (L0 + lambda [G, .]) found as its numerical null vector.  Coherences
    // are odd in lambda, so dividing by lambda reproduces rho1 to O(lambda^2).
    const auto spec = paper_spec(2.3e-4);
    const auto ss = linresp::steady_state_first_order(spec);

    const double lambda = 3e-5;
    const Matrix3c g = linresp::coupling_operator(spec);
    Eigen::MatrixXcd driven = Eigen::MatrixXcd(linresp::liouvillian(spec));
    const Matrix3c id = Matrix3c::Identity();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    // vec index (row i + 3 col j); commutator -i lambda [G, rho]
                    const int r = i + 3 * j, c = k + 3 * l;
                    cplx v = 0.0;
                    if (j == l) v += g(i, k);
                    if (i == k) v -= g(l, j);
                    driven(r, c) += cplx(0.0, -1.0) * lambda * v;
                }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(driven, Eigen::ComputeFullV);
    Eigen::VectorXcd null_vec = svd.matrixV().col(8);
    Matrix3c rho = Eigen::Map<Matrix3c>(null_vec.data());
    rho /= rho.trace();

    CHECK(std::abs(rho(1, 0) / lambda - ss.rho1(1, 0)) < 1e-10);
    CHECK(std::abs(rho(2, 0) / lambda - ss.rho1(2, 0)) < 1e-10);
    CHECK(std::abs(rho(2, 1) / lambda) < 1e-10);
}

TEST_CASE("pole sum equals quadrature of the retarded kernel") {
    const auto spec = paper_spec();
    const Matrix3c g = linresp::coupling_operator(spec);
    const auto ss = linresp::steady_state_first_order(spec);
    const Eigen::MatrixXcd l0 = Eigen::MatrixXcd(linresp::liouvillian(spec));

    // RK4 integration of d rho/ds = L0 rho from rho1, accumulating
    // chi = Gr(0) + i omega Int Gr(s) exp(i omega s) ds.
    auto quadrature = [&](double omega) {
        Eigen::VectorXcd v =
            Eigen::Map<const Eigen::VectorXcd>(ss.rho1.data(), 9);
        auto trace_g = [&](const Eigen::VectorXcd& vec) {
            const Matrix3c rho = Eigen::Map<const Matrix3c>(vec.data());
            return (g * rho).trace();
        };
        const double dt = 5e-3, t_max = 12000.0;
        const cplx gr0 = trace_g(v);
        cplx integral = 0.0;
        double s = 0.0;
        while (s < t_max) {
            const cplx f0 = trace_g(v) * std::exp(cplx(0.0, omega * s));
            const Eigen::VectorXcd k1 = l0 * v;
            const Eigen::VectorXcd k2 = l0 * (v + 0.5 * dt * k1);
            const Eigen::VectorXcd k3 = l0 * (v + 0.5 * dt * k2);
            const Eigen::VectorXcd k4 = l0 * (v + dt * k3);
            v += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            s += dt;
            const cplx f1 = trace_g(v) * std::exp(cplx(0.0, omega * s));
            integral += 0.5 * dt * (f0 + f1);
        }
        return gr0 + cplx(0.0, omega) * integral;
    };

    for (double omega : {0.45, 1.0997}) {
        const cplx full = linresp::susceptibility(omega, spec, g, false);
        CHECK(std::abs(full - quadrature(omega)) < 1e-6);
    }

    // single-pole limit: lone 0-1 coupling gives an exact Lorentzian
    auto two_level = paper_spec();
    two_level.rates.gamma0_02 = two_level.rates.gamma0_12 = 0.0;
    const double gamma = two_level.rates.gamma0_01;
    for (double omega : {0.55, 0.59, 0.62}) {
        const cplx chi = linresp::susceptibility(omega, two_level);
        const cplx lorentz = gamma / ((omega - 0.59) + cplx(0.0, gamma));
        CHECK(std::abs(chi - lorentz) < 1e-12);
    }

    // far from every pole the response is bounded by Gamma/detuning
    const cplx tail = linresp::susceptibility(2.5, spec);
    CHECK(std::abs(tail) < (1.7e-3 + 2.3e-3) / 1.0);
}

TEST_CASE("t1 from linear response matches the closed form") {
    for (double loss : {0.0, 2.3e-4}) {
        const auto spec = paper_spec(loss);
        double max_dev = 0.0;
        for (int i = 0; i <= 400; ++i) {
            const double omega = 0.3 + 1.1 * i / 400.0;
            const cplx lrt = linresp::t1_from_lrt(omega, spec);
            const cplx closed = analytics::t1_closed_form(omega, spec.rates, spec.freqs);
            max_dev = std::max(max_dev, std::abs(lrt - closed));
        }
        CHECK(max_dev < 1e-3);
    }
}

TEST_CASE("t1 is drive independent and vanishes at the two-level resonance") {
    auto spec = paper_spec();
    spec.drive_amplitude = 1e-4;
    auto spec_half = spec;
    spec_half.drive_amplitude = 5e-5;
    const cplx a = linresp::t1_from_lrt(0.8, spec);
    const cplx b = linresp::t1_from_lrt(0.8, spec_half);
    CHECK(a == b);

    auto two_level = paper_spec();
    two_level.rates.gamma0_02 = two_level.rates.gamma0_12 = 0.0;
    CHECK(std::abs(linresp::t1_from_lrt(0.59, two_level)) < 1e-12);
}

TEST_CASE("leakage amplitude") {
    const auto spec = paper_spec(2.3e-4);
    CHECK(linresp::leakage(0.9, spec, 0.0) == cplx(0.0, 0.0));

    const cplx tau1 = linresp::leakage(1.0, spec, 1e-4);
    const cplx tau4 = linresp::leakage(1.0, spec, 4e-4);
    CHECK(std::abs(tau4 / tau1) == doctest::Approx(2.0).epsilon(1e-12));

    // |tau(w02)|^2 agrees with the approximate absorption model at the
    // 10% level (that model divides by the total rather than radiative rate)
    const double w02 = spec.freqs.w02();
    const double a_model = analytics::absorption(w02, spec.rates, spec.freqs);
    const double a_lrt = std::norm(linresp::leakage(w02, spec, spec.rates.loss_02));
    CHECK(a_lrt == doctest::Approx(a_model).epsilon(0.11));
    CHECK(a_lrt != doctest::Approx(a_model).epsilon(1e-4));
}

TEST_CASE("dos-weighted t1 reduces to flat at constant profile") {
    auto spec = paper_spec();
    auto flat = linresp::t1_from_lrt(0.8, spec);
    spec.dos = [](double) { return 0.7; };
    auto weighted = linresp::t1_from_lrt(0.8, spec);
    CHECK(std::abs(flat - weighted) < 1e-12);
}

TEST_CASE("spec validation") {
    LindbladSpec bad;
    bad.rates = model::RateSet{};
    CHECK_THROWS(linresp::steady_state_first_order(bad));
}
