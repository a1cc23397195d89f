#include "pdl/transmon.hpp"

#include <cmath>
#include <stdexcept>

namespace pdl::transmon {

namespace {

Eigen::MatrixXd charge_hamiltonian(const TransmonSpec& spec, int ncut) {
    const int dim = 2 * ncut + 1;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int idx = 0; idx < dim; ++idx) {
        const double n = idx - ncut;
        h(idx, idx) = 4.0 * spec.ec() * (n - spec.ng) * (n - spec.ng);
        if (idx + 1 < dim) h(idx, idx + 1) = h(idx + 1, idx) = -0.5 * spec.ej;
    }
    return h;
}

Eigen::Vector3d lowest_three(const TransmonSpec& spec, int ncut,
                             Eigen::MatrixXd* vectors) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(charge_hamiltonian(spec, ncut));
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("transmon: eigensolve failed");
    Eigen::Vector3d w = solver.eigenvalues().head<3>();
    w.array() -= w(0);
    if (vectors) *vectors = solver.eigenvectors().leftCols<3>();
    return w;
}

}  // namespace

void TransmonSpec::validate() const {
    if (ec_over_ej <= 0.0 || ej <= 0.0)
        throw std::invalid_argument("TransmonSpec: E_C and E_J must be > 0");
    if (ncut < 5) throw std::invalid_argument("TransmonSpec: cutoff too small");
}

Eigenpairs diagonalize(const TransmonSpec& spec) {
    spec.validate();
    Eigenpairs out;
    out.ncut = spec.ncut;
    out.omega = lowest_three(spec, spec.ncut, &out.vectors);

    const Eigen::Vector3d check = lowest_three(spec, spec.ncut + 5, nullptr);
    if ((out.omega - check).cwiseAbs().maxCoeff() > 1e-10)
        throw std::runtime_error("transmon: spectrum not converged at ncut=" +
                                 std::to_string(spec.ncut));

    // Deterministic eigenvector gauge: largest-magnitude entry positive.
    for (int m = 0; m < 3; ++m) {
        int imax = 0;
        out.vectors.col(m).cwiseAbs().maxCoeff(&imax);
        if (out.vectors(imax, m) < 0.0) out.vectors.col(m) *= -1.0;
    }
    return out;
}

Eigen::Matrix3d charge_matrix_elements(const TransmonSpec& spec, const Eigenpairs& eig) {
    const int dim = 2 * eig.ncut + 1;
    Eigen::VectorXd n(dim);
    for (int idx = 0; idx < dim; ++idx) n(idx) = idx - eig.ncut;
    (void)spec;
    return eig.vectors.transpose() * n.asDiagonal() * eig.vectors;
}

Eigen::Matrix3d cosphi_matrix_elements(const TransmonSpec& spec, const Eigenpairs& eig) {
    const int dim = 2 * eig.ncut + 1;
    Eigen::MatrixXd cosphi = Eigen::MatrixXd::Zero(dim, dim);
    for (int idx = 0; idx + 1 < dim; ++idx)
        cosphi(idx, idx + 1) = cosphi(idx + 1, idx) = 0.5;
    (void)spec;
    return eig.vectors.transpose() * cosphi * eig.vectors;
}

CyclicCouplings build_couplings(const TransmonSpec& spec, const Eigenpairs& eig,
                                double capacitive_prefactor, double inductive_prefactor) {
    const Eigen::Matrix3d q = charge_matrix_elements(spec, eig);
    const Eigen::Matrix3d c = cosphi_matrix_elements(spec, eig);
    const double s = std::sin(spec.phi_ext);

    CyclicCouplings out;
    out.cap01 = capacitive_prefactor * q(0, 1);
    out.cap12 = capacitive_prefactor * q(1, 2);
    out.cap02 = capacitive_prefactor * q(0, 2);
    out.ind01 = inductive_prefactor * s * c(0, 1);
    out.ind12 = inductive_prefactor * s * c(1, 2);
    out.ind02 = inductive_prefactor * s * c(0, 2);
    out.g01 = out.cap01 + out.ind01;
    out.g12 = out.cap12 + out.ind12;
    out.g02 = out.cap02 + out.ind02;
    out.no_cyclic_structure = std::abs(s) < 1e-12;
    return out;
}

std::vector<SweepRow> sweep_ratio(const TransmonSpec& base,
                                  const std::vector<double>& ratios) {
    std::vector<SweepRow> rows;
    rows.reserve(ratios.size());
    for (double ratio : ratios) {
        if (ratio <= 0.0) throw std::invalid_argument("sweep_ratio: ratio must be > 0");
        TransmonSpec spec = base;
        spec.ec_over_ej = ratio;
        const Eigenpairs eig = diagonalize(spec);
        const Eigen::Matrix3d q = charge_matrix_elements(spec, eig);
        const Eigen::Matrix3d c = cosphi_matrix_elements(spec, eig);
        rows.push_back({ratio, eig.omega(1), eig.omega(2) - eig.omega(1),
                        q(0, 1), q(1, 2), q(0, 2),
                        c(0, 0), c(1, 1), c(2, 2), c(0, 2)});
    }
    return rows;
}

double tune_inductive_knob(const TransmonSpec& spec, const Eigenpairs& eig,
                           double capacitive_prefactor, double target_ratio,
                           double dos12, double dos02) {
    if (target_ratio <= 0.0 || dos12 <= 0.0 || dos02 <= 0.0)
        throw std::invalid_argument("tune_inductive_knob: positive inputs required");

    auto ratio_at = [&](double knob) {
        const CyclicCouplings g = build_couplings(spec, eig, capacitive_prefactor, knob);
        const double r12 = dos12 * dos12 * g.g12 * g.g12;
        const double r02 = dos02 * dos02 * g.g02 * g.g02;
        return r12 / r02;
    };

    // Gamma ratio decreases monotonically as the inductive knob opens g02.
    double lo = 1e-8, hi = 1e8;
    if (ratio_at(lo) < target_ratio || ratio_at(hi) > target_ratio)
        throw std::runtime_error("tune_inductive_knob: target outside reachable range");
    for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);
        (ratio_at(mid) > target_ratio ? lo : hi) = mid;
    }
    return std::sqrt(lo * hi);
}

}  // namespace pdl::transmon
