#include "pdl/lattice.hpp"

#include <stdexcept>

namespace pdl::lattice {

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Bare three-level operator |i><j|.
Matrix level_op(int i, int j) {
    Matrix m = Matrix::Zero(3, 3);
    m(i, j) = 1.0;
    return m;
}

Matrix scatterer_levels(const model::ModelParams& p) {
    Matrix m = Matrix::Zero(3, 3);
    m(1, 1) = p.omega1;
    m(2, 2) = p.omega2;
    return m;
}

Matrix bare_coupling(const model::ModelParams& p) {
    Matrix g = Matrix::Zero(3, 3);
    g(0, 1) = g(1, 0) = p.g01;
    g(1, 2) = g(2, 1) = p.g12;
    g(0, 2) = g(2, 0) = p.g02;
    return g;
}

// Full on-site Hamiltonian of site x.
Matrix onsite_term(const LatticeSpec& spec, int x) {
    const auto& p = spec.params;
    const int m = spec.photon_dim();
    const Matrix n_ph = boson_number(spec.n_max);
    if (x != p.x0) return p.epsilon * n_ph;

    const Matrix a = boson_annihilator(spec.n_max);
    const Matrix id_ph = Matrix::Identity(m, m);
    const Matrix id3 = Matrix::Identity(3, 3);
    return kron(id3, p.epsilon * n_ph) + kron(scatterer_levels(p), id_ph) +
           kron(bare_coupling(p), a + a.adjoint().eval());
}

}  // namespace

Matrix boson_annihilator(int n_max) {
    Matrix a = Matrix::Zero(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

Matrix boson_number(int n_max) {
    Matrix n = Matrix::Zero(n_max + 1, n_max + 1);
    for (int k = 0; k <= n_max; ++k) n(k, k) = k;
    return n;
}

Matrix site_annihilator(const LatticeSpec& spec, int x) {
    const Matrix a = boson_annihilator(spec.n_max);
    if (x != spec.params.x0) return a;
    return kron(Matrix::Identity(3, 3), a);
}

Matrix site_number(const LatticeSpec& spec, int x) {
    const Matrix n = boson_number(spec.n_max);
    if (x != spec.params.x0) return n;
    return kron(Matrix::Identity(3, 3), n);
}

Matrix level_projector(const LatticeSpec& spec, int level) {
    return kron(level_op(level, level),
                Matrix::Identity(spec.photon_dim(), spec.photon_dim()));
}

Matrix coupling_operator(const LatticeSpec& spec) {
    return kron(bare_coupling(spec.params),
                Matrix::Identity(spec.photon_dim(), spec.photon_dim()));
}

LatticeSpec build_lattice(const model::ModelParams& params, int n_max) {
    params.validate();
    if (n_max < 1) throw std::invalid_argument("build_lattice: n_max must be >= 1");

    LatticeSpec spec;
    spec.params = params;
    spec.n_max = n_max;
    spec.dims.assign(params.sites, n_max + 1);
    spec.dims[params.x0] = 3 * (n_max + 1);

    // Fold on-site terms into bonds: half weight each side in the bulk, full
    // weight for the chain ends.
    const int n_sites = params.sites;
    spec.bonds.bonds.resize(n_sites - 1);
    const Matrix a = boson_annihilator(n_max);
    for (int b = 0; b < n_sites - 1; ++b) {
        const Matrix left_a = site_annihilator(spec, b);
        const Matrix right_a = site_annihilator(spec, b + 1);
        const int dl = spec.dims[b], dr = spec.dims[b + 1];
        const Matrix id_l = Matrix::Identity(dl, dl), id_r = Matrix::Identity(dr, dr);

        Matrix h = -params.hopping * (kron(left_a.adjoint().eval(), right_a) +
                                      kron(left_a, right_a.adjoint().eval()));
        const double wl = (b == 0) ? 1.0 : 0.5;
        const double wr = (b == n_sites - 2) ? 1.0 : 0.5;
        h += wl * kron(onsite_term(spec, b), id_r);
        h += wr * kron(id_l, onsite_term(spec, b + 1));
        spec.bonds.bonds[b] = h;
    }
    (void)a;
    return spec;
}

mps::Mpo hamiltonian_mpo(const LatticeSpec& spec) {
    const auto& p = spec.params;
    const int n_sites = p.sites;
    mps::Mpo mpo;
    mpo.sites.resize(n_sites);
    for (int x = 0; x < n_sites; ++x) {
        const int d = spec.dims[x];
        const Matrix id = Matrix::Identity(d, d);
        const Matrix a = site_annihilator(spec, x);
        const Matrix adag = a.adjoint();
        const Matrix h = onsite_term(spec, x);
        auto& w = mpo.sites[x];
        if (x == 0) {
            w.wl = 1;
            w.wr = 4;
            w.ops = {id, a, adag, h};
        } else if (x == n_sites - 1) {
            w.wl = 4;
            w.wr = 1;
            w.ops = {h, -p.hopping * adag, -p.hopping * a, id};
        } else {
            w.wl = w.wr = 4;
            w.ops.assign(16, Matrix());
            w.at(0, 0) = id;
            w.at(0, 1) = a;
            w.at(0, 2) = adag;
            w.at(0, 3) = h;
            w.at(1, 3) = -p.hopping * adag;
            w.at(2, 3) = -p.hopping * a;
            w.at(3, 3) = id;
        }
    }
    return mpo;
}

mps::Mpo number_mpo(const LatticeSpec& spec, int power) {
    if (power < 1 || power > 3) throw std::invalid_argument("number_mpo: power in [1,3]");
    const int n_sites = spec.params.sites;
    const int width = power + 1;

    mps::Mpo mpo;
    mpo.sites.resize(n_sites);
    for (int x = 0; x < n_sites; ++x) {
        const int d = spec.dims[x];
        const Matrix id = Matrix::Identity(d, d);
        const Matrix n1 = site_number(spec, x);

        // Pascal-triangle MPO for (sum_x n_x)^power: W(i, j) = C(j-i in {0..}) n^{j-i}
        auto& w = mpo.sites[x];
        auto entry = [&](int i, int j) -> Matrix {
            const int k = j - i;
            if (k < 0) return Matrix();
            double binom = 1.0;
            for (int t = 0; t < k; ++t) binom = binom * double(power - i - t) / double(t + 1);
            Matrix nk = id;
            for (int t = 0; t < k; ++t) nk = nk * n1;
            return binom * nk;
        };
        if (x == 0) {
            w.wl = 1;
            w.wr = width;
            w.ops.resize(width);
            for (int j = 0; j < width; ++j) w.at(0, j) = entry(0, j);
        } else if (x == n_sites - 1) {
            w.wl = width;
            w.wr = 1;
            w.ops.resize(width);
            for (int i = 0; i < width; ++i) w.at(i, 0) = entry(i, power);
        } else {
            w.wl = w.wr = width;
            w.ops.assign(width * width, Matrix());
            for (int i = 0; i < width; ++i)
                for (int j = i; j < width; ++j) w.at(i, j) = entry(i, j);
        }
    }
    return mpo;
}

mps::Mps vacuum_state(const LatticeSpec& spec) {
    return mps::Mps::product_state(spec.dims, std::vector<int>(spec.dims.size(), 0));
}

std::vector<Matrix> annihilator_table(const LatticeSpec& spec) {
    std::vector<Matrix> out(spec.params.sites);
    for (int x = 0; x < spec.params.sites; ++x) out[x] = site_annihilator(spec, x);
    return out;
}

std::vector<Matrix> double_annihilator_table(const LatticeSpec& spec) {
    std::vector<Matrix> out(spec.params.sites);
    for (int x = 0; x < spec.params.sites; ++x) {
        const Matrix a = site_annihilator(spec, x);
        out[x] = a * a;
    }
    return out;
}

}  // namespace pdl::lattice
