#pragma once

// Dense bipartite two-photon amplitude, shared between the scattering
// extraction code and the entanglement analysis.

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace pdl {

enum class TwoPhotonBasis { kPosition, kRightMovingEnergy };

struct TwoPhotonAmplitude {
    Eigen::MatrixXcd amplitude;     // symmetric under index swap
    TwoPhotonBasis basis = TwoPhotonBasis::kPosition;
    std::vector<double> axis;       // site index or omega per row/column
    bool normalized = false;        // unit Frobenius norm

    double frobenius_norm() const { return amplitude.norm(); }
    double max_asymmetry() const {
        return (amplitude - amplitude.transpose()).cwiseAbs().maxCoeff();
    }
};

}  // namespace pdl
