#include "pdl/linresp.hpp"

#include <stdexcept>

namespace pdl::linresp {

namespace {

constexpr cplx kI{0.0, 1.0};

Vector9c vec(const Matrix3c& m) {
    return Eigen::Map<const Vector9c>(m.data());
}

Matrix3c unvec(const Vector9c& v) {
    return Eigen::Map<const Matrix3c>(v.data());
}

// vec(A rho B) = (B^T kron A) vec(rho)
Matrix9c kron_left_right(const Matrix3c& a, const Matrix3c& b) {
    Matrix9c out = Matrix9c::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            out.block<3, 3>(3 * i, 3 * j) = b.transpose()(i, j) * a;
    return out;
}

struct Transition {
    int upper, lower;
    double total;  // coherence half-width contribution
};

std::vector<Transition> transitions(const LindbladSpec& spec) {
    return {{1, 0, spec.rates.total01()},
            {2, 0, spec.rates.total02()},
            {2, 1, spec.rates.total12()}};
}

}  // namespace

void LindbladSpec::validate() const {
    rates.validate();
    if (rates.total01() + rates.total02() <= 0.0)
        throw std::invalid_argument("LindbladSpec: ground-coupled rates all zero");
    if (freqs.w01 < 0.0 || freqs.w12 < 0.0)
        throw std::invalid_argument("LindbladSpec: negative transition frequency");
}

Matrix3c coupling_operator(const LindbladSpec& spec) {
    Matrix3c g = Matrix3c::Zero();
    g(0, 1) = g(1, 0) = std::sqrt(spec.rates.gamma0_01);
    g(1, 2) = g(2, 1) = std::sqrt(spec.rates.gamma0_12);
    g(0, 2) = g(2, 0) = std::sqrt(spec.rates.gamma0_02);
    return g;
}

Matrix9c liouvillian(const LindbladSpec& spec) {
    Matrix3c h = Matrix3c::Zero();
    h(1, 1) = spec.freqs.w01;
    h(2, 2) = spec.freqs.w02();

    const Matrix3c id = Matrix3c::Identity();
    Matrix9c l0 = -kI * (kron_left_right(h, id) - kron_left_right(id, h));
    for (const auto& t : transitions(spec)) {
        if (t.total == 0.0) continue;
        Matrix3c jump = Matrix3c::Zero();
        jump(t.lower, t.upper) = 1.0;
        const Matrix3c jj = jump.adjoint() * jump;
        l0 += 2.0 * t.total *
              (kron_left_right(jump, jump.adjoint()) -
               0.5 * (kron_left_right(jj, id) + kron_left_right(id, jj)));
    }
    return l0;
}

SteadyState steady_state_first_order(const LindbladSpec& spec) {
    spec.validate();
    SteadyState out;
    out.rho0 = Matrix3c::Zero();
    out.rho0(0, 0) = 1.0;

    // First order in the drive: L0 rho1 = i [G, rho0].  The right-hand side
    // is traceless and supported on the coherence sectors, where L0 is
    // regular; the minimum-norm solve leaves the singular trace mode alone.
    const Matrix3c g = coupling_operator(spec);
    const Matrix3c rhs = kI * (g * out.rho0 - out.rho0 * g);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(
        Eigen::MatrixXcd(liouvillian(spec)));
    const Vector9c rho1 = cod.solve(Eigen::VectorXcd(vec(rhs)));
    out.rho1 = unvec(rho1);
    return out;
}

cplx susceptibility(double omega, const LindbladSpec& spec, const Matrix3c& observable,
                    bool rwa_only) {
    const SteadyState ss = steady_state_first_order(spec);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(Eigen::MatrixXcd(liouvillian(spec)));
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("susceptibility: Liouvillian eigensolve failed");

    const Eigen::VectorXcd coeffs = eig.eigenvectors().partialPivLu().solve(
        Eigen::VectorXcd(vec(ss.rho1)));

    cplx chi = 0.0;
    for (int m = 0; m < 9; ++m) {
        const cplx lambda = eig.eigenvalues()(m);
        // Resonant poles rotate at -i omega_ij with omega_ij > 0; the
        // counter-rotating partners carry positive imaginary frequency.
        if (rwa_only && lambda.imag() >= -1e-9) continue;
        const Matrix3c mode = unvec(Vector9c(eig.eigenvectors().col(m)));
        const cplx weight = (observable * mode).trace() * coeffs(m);
        chi += weight * (-lambda) / (-lambda - kI * omega);
    }
    return chi;
}

cplx susceptibility(double omega, const LindbladSpec& spec) {
    return susceptibility(omega, spec, coupling_operator(spec));
}

cplx t1_from_lrt(double omega, const LindbladSpec& spec) {
    if (!spec.dos) return 1.0 - kI * susceptibility(omega, spec);

    // DOS-weighted variant: each pole numerator Gamma0_ij was fixed at the
    // transition frequency; rescale by (D(omega)/D(omega_ij))^2.
    const SteadyState ss = steady_state_first_order(spec);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(Eigen::MatrixXcd(liouvillian(spec)));
    const Eigen::VectorXcd coeffs = eig.eigenvectors().partialPivLu().solve(
        Eigen::VectorXcd(vec(ss.rho1)));
    const Matrix3c g = coupling_operator(spec);

    cplx chi = 0.0;
    const double d_at_omega = spec.dos(omega);
    for (int m = 0; m < 9; ++m) {
        const cplx lambda = eig.eigenvalues()(m);
        if (lambda.imag() >= -1e-9) continue;
        const double mode_freq = -lambda.imag();
        const double d_ref = spec.dos(mode_freq);
        const Matrix3c mode = unvec(Vector9c(eig.eigenvectors().col(m)));
        const cplx weight = (g * mode).trace() * coeffs(m) *
                            (d_at_omega * d_at_omega) / (d_ref * d_ref);
        chi += weight * (-lambda) / (-lambda - kI * omega);
    }
    return 1.0 - kI * chi;
}

cplx leakage(double omega, const LindbladSpec& spec, double gamma_loss) {
    if (gamma_loss < 0.0) throw std::invalid_argument("leakage: gamma must be >= 0");
    if (gamma_loss == 0.0) return 0.0;
    Matrix3c sigma02 = Matrix3c::Zero();
    sigma02(0, 2) = sigma02(2, 0) = 1.0;
    return -kI * std::sqrt(2.0 * gamma_loss) * susceptibility(omega, spec, sigma02);
}

}  // namespace pdl::linresp
