#pragma once

// Schmidt decomposition of the emitted two-photon wavefunction, von Neumann
// entropy (full and per-mode), and m-mode reconstruction with fidelity.

#include <Eigen/Dense>

#include "pdl/two_photon.hpp"

namespace pdl::entangle {

struct SchmidtDecomposition {
    Eigen::VectorXd lambdas;        // singular values, descending, sum of squares 1
    Eigen::MatrixXcd left_modes;    // phi_{x,m} as columns
    Eigen::MatrixXcd right_modes;   // chi_{x,m} as columns
    TwoPhotonBasis basis = TwoPhotonBasis::kPosition;
    int rank = 0;                   // modes above the numerical floor
};

// Scale to unit Frobenius norm; zero input is an error.
TwoPhotonAmplitude normalize(const TwoPhotonAmplitude& amp);

// amp(x1,x2) = sum_m lambda_m left(x1,m) right(x2,m); degenerate singular
// values are tie-broken by the first moment of |left mode|^2 so the output
// is deterministic.
SchmidtDecomposition schmidt(const TwoPhotonAmplitude& amp);

// S_VN over the first m modes (all modes when m < 0), in bits or nats.
double entropy(const SchmidtDecomposition& dec, int modes = -1, bool base2 = true);

struct Reconstruction {
    TwoPhotonAmplitude amplitude;   // m-mode truncation, renormalized
    double fidelity = 0.0;          // overlap with the full two-photon state
};

// Truncate to the leading m modes.  The fidelity of the symmetrized
// two-photon state equals the retained Schmidt weight sum_{n<=m} lambda_n^2.
Reconstruction reconstruct(const SchmidtDecomposition& dec, int modes);

}  // namespace pdl::entangle
