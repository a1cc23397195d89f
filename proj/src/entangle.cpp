#include "pdl/entangle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pdl::entangle {

TwoPhotonAmplitude normalize(const TwoPhotonAmplitude& amp) {
    const double n = amp.frobenius_norm();
    if (n <= 0.0 || !std::isfinite(n))
        throw std::invalid_argument("normalize: zero or non-finite amplitude");
    TwoPhotonAmplitude out = amp;
    out.amplitude /= n;
    out.normalized = true;
    return out;
}

SchmidtDecomposition schmidt(const TwoPhotonAmplitude& amp_in) {
    const TwoPhotonAmplitude amp = amp_in.normalized ? amp_in : normalize(amp_in);

    Eigen::BDCSVD<Eigen::MatrixXcd> svd(amp.amplitude,
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
    SchmidtDecomposition dec;
    dec.basis = amp.basis;
    dec.lambdas = svd.singularValues();
    dec.left_modes = svd.matrixU();
    // A = U S V^H, so the right mode functions are the conjugated V columns:
    // A(x1,x2) = sum_m lambda_m U(x1,m) conj(V)(x2,m).
    dec.right_modes = svd.matrixV().conjugate();

    const double floor = 1e-12 * (dec.lambdas.size() ? dec.lambdas(0) : 0.0);
    dec.rank = 0;
    for (int m = 0; m < dec.lambdas.size(); ++m)
        if (dec.lambdas(m) > floor) ++dec.rank;

    // Deterministic order inside degenerate groups: ascending first moment
    // of the left-mode weight.
    auto first_moment = [&](int m) {
        double w = 0.0;
        for (int x = 0; x < dec.left_modes.rows(); ++x)
            w += x * std::norm(dec.left_modes(x, m));
        return w;
    };
    for (int m = 0; m + 1 < dec.rank; ++m) {
        int g = m;
        while (g + 1 < dec.rank &&
               std::abs(dec.lambdas(g + 1) - dec.lambdas(m)) < 1e-12 * dec.lambdas(0))
            ++g;
        if (g == m) continue;
        std::vector<int> order(g - m + 1);
        std::iota(order.begin(), order.end(), m);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return first_moment(a) < first_moment(b);
        });
        Eigen::MatrixXcd lm = dec.left_modes, rm = dec.right_modes;
        for (std::size_t k = 0; k < order.size(); ++k) {
            dec.left_modes.col(m + k) = lm.col(order[k]);
            dec.right_modes.col(m + k) = rm.col(order[k]);
        }
        m = g;
    }
    return dec;
}

double entropy(const SchmidtDecomposition& dec, int modes, bool base2) {
    const int m = modes < 0 ? dec.rank : std::min(modes, dec.rank);
    if (modes >= 0 && modes < 1) throw std::out_of_range("entropy: modes must be >= 1");
    double s = 0.0;
    for (int n = 0; n < m; ++n) {
        const double p = dec.lambdas(n) * dec.lambdas(n);
        if (p > 0.0) s -= p * std::log(p);
    }
    return base2 ? s / std::log(2.0) : s;
}

Reconstruction reconstruct(const SchmidtDecomposition& dec, int modes) {
    if (modes < 1 || modes > dec.lambdas.size())
        throw std::out_of_range("reconstruct: mode count out of range");

    double retained = 0.0;
    Eigen::MatrixXcd amp =
        Eigen::MatrixXcd::Zero(dec.left_modes.rows(), dec.right_modes.rows());
    for (int m = 0; m < modes; ++m) {
        amp += dec.lambdas(m) * dec.left_modes.col(m) *
               dec.right_modes.col(m).transpose();
        retained += dec.lambdas(m) * dec.lambdas(m);
    }

    Reconstruction out;
    out.amplitude.amplitude = amp / std::sqrt(retained);
    out.amplitude.basis = dec.basis;
    out.amplitude.normalized = true;
    out.fidelity = retained;  // |<Psi2|Psi2m>|^2 of the symmetrized states
    return out;
}

}  // namespace pdl::entangle
