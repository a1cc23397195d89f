#pragma once

// Charge-basis transmon: diagonalization, charge / cos(phi) matrix elements
// for the lowest three levels, and the assembly of the cyclic coupling set
// from the capacitive and inductive channels.

#include <Eigen/Dense>
#include <vector>

namespace pdl::transmon {

struct TransmonSpec {
    double ec_over_ej = 1.0 / 20.0;
    double ej = 1.0;                 // energy scale; E_C = ec_over_ej * ej
    double ng = 0.0;                 // offset charge
    int ncut = 40;                   // charge states n in [-ncut, ncut]
    double phi_ext = 1.5707963267948966;  // external phase, pi/2 default

    double ec() const { return ec_over_ej * ej; }
    void validate() const;
};

struct Eigenpairs {
    Eigen::Vector3d omega;           // lowest three, shifted so omega0 = 0
    Eigen::MatrixXd vectors;         // (2 ncut + 1) x 3, sign-fixed
    int ncut = 0;
};

struct CyclicCouplings {
    double g01 = 0.0, g12 = 0.0, g02 = 0.0;
    double cap01 = 0.0, cap12 = 0.0, cap02 = 0.0;  // capacitive channel parts
    double ind01 = 0.0, ind12 = 0.0, ind02 = 0.0;  // inductive channel parts
    bool no_cyclic_structure = false;  // sin(phi_ext) = 0: g02 path closed
};

struct SweepRow {
    double ratio;                    // E_C / E_J
    double w01, w12;
    double q01, q12, q02;
    double c00, c11, c22, c02;
};

// Lowest three eigenpairs in the charge basis.  Throws unless the spectrum
// is converged: the three eigenvalues must move by < 1e-10 when the cutoff
// grows by 5.
Eigenpairs diagonalize(const TransmonSpec& spec);

// <i| n |j> in units of 2e.
Eigen::Matrix3d charge_matrix_elements(const TransmonSpec& spec, const Eigenpairs& eig);

// <i| cos(phi) |j>.
Eigen::Matrix3d cosphi_matrix_elements(const TransmonSpec& spec, const Eigenpairs& eig);

// g_ij = capacitive * <i|q|j> + inductive * sin(phi_ext) * <i|cos phi|j>.
CyclicCouplings build_couplings(const TransmonSpec& spec, const Eigenpairs& eig,
                                double capacitive_prefactor, double inductive_prefactor);

std::vector<SweepRow> sweep_ratio(const TransmonSpec& base,
                                  const std::vector<double>& ratios);

// Inductive knob that makes Gamma0_12 / Gamma0_02 hit `target_ratio` given
// the DOS values at the (rescaled) transition frequencies, with the
// capacitive knob held fixed.  Solved by bisection on the ratio, which is
// monotone in the knob.
double tune_inductive_knob(const TransmonSpec& spec, const Eigenpairs& eig,
                           double capacitive_prefactor, double target_ratio,
                           double dos12, double dos02);

}  // namespace pdl::transmon
