#include "pdl/mps.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace pdl::mps {

namespace {

// Stack site blocks as ((left, phys) x right) for left-moving QR / SVD.
Matrix stack_left(const SiteTensor& t) {
    const int dl = t.left_dim(), dr = t.right_dim(), d = t.phys_dim();
    Matrix m(dl * d, dr);
    for (int s = 0; s < d; ++s)
        for (int i = 0; i < dl; ++i) m.row(i * d + s) = t.blocks[s].row(i);
    return m;
}

// Stack site blocks as (left x (phys, right)).
Matrix stack_right(const SiteTensor& t) {
    const int dl = t.left_dim(), dr = t.right_dim(), d = t.phys_dim();
    Matrix m(dl, d * dr);
    for (int s = 0; s < d; ++s) m.middleCols(s * dr, dr) = t.blocks[s];
    return m;
}

SiteTensor unstack_left(const Matrix& m, int d) {
    const int dl = static_cast<int>(m.rows()) / d, dr = static_cast<int>(m.cols());
    SiteTensor t;
    t.blocks.assign(d, Matrix(dl, dr));
    for (int s = 0; s < d; ++s)
        for (int i = 0; i < dl; ++i) t.blocks[s].row(i) = m.row(i * d + s);
    return t;
}

SiteTensor unstack_right(const Matrix& m, int d) {
    const int dl = static_cast<int>(m.rows()), dr = static_cast<int>(m.cols()) / d;
    SiteTensor t;
    t.blocks.assign(d, Matrix(dl, dr));
    for (int s = 0; s < d; ++s) t.blocks[s] = m.middleCols(s * dr, dr);
    return t;
}

struct SvdResult {
    Matrix u, vdag;
    Eigen::VectorXd sigma;
    double discarded = 0.0;
};

SvdResult truncated_svd(const Matrix& m, const TruncationPolicy& policy) {
    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double total = sv.squaredNorm();

    int keep = 0;
    const double floor = sv.size() ? policy.rel_cutoff * sv(0) : 0.0;
    while (keep < sv.size() && keep < policy.max_bond && sv(keep) > floor) ++keep;
    keep = std::max(keep, 1);

    SvdResult out;
    out.u = svd.matrixU().leftCols(keep);
    out.vdag = svd.matrixV().leftCols(keep).adjoint();
    out.sigma = sv.head(keep);
    if (total > 0.0) out.discarded = std::max(0.0, 1.0 - out.sigma.squaredNorm() / total);
    return out;
}

}  // namespace

Mps::Mps(std::vector<SiteTensor> tensors) : sites_(std::move(tensors)), center_(-1) {
    for (int x = 0; x + 1 < size(); ++x)
        if (sites_[x].right_dim() != sites_[x + 1].left_dim())
            throw std::invalid_argument("Mps: inconsistent bond dimensions");
    if (size() > 0 && (sites_.front().left_dim() != 1 || sites_.back().right_dim() != 1))
        throw std::invalid_argument("Mps: boundary bonds must have dimension 1");
}

Mps Mps::product_state(const std::vector<int>& dims, const std::vector<int>& locals) {
    if (dims.size() != locals.size())
        throw std::invalid_argument("product_state: dims/locals size mismatch");
    std::vector<SiteTensor> tensors(dims.size());
    for (std::size_t x = 0; x < dims.size(); ++x) {
        if (locals[x] < 0 || locals[x] >= dims[x])
            throw std::out_of_range("product_state: local index out of range");
        tensors[x].blocks.assign(dims[x], Matrix::Zero(1, 1));
        tensors[x].blocks[locals[x]](0, 0) = 1.0;
    }
    Mps state(std::move(tensors));
    state.center_ = 0;
    return state;
}

int Mps::bond_dim(int b) const {
    if (b <= 0) return sites_.front().left_dim();
    if (b >= size()) return sites_.back().right_dim();
    return sites_[b].left_dim();
}

int Mps::max_bond_dim() const {
    int d = 1;
    for (int b = 0; b <= size(); ++b) d = std::max(d, bond_dim(b));
    return d;
}

double Mps::norm() const {
    return std::sqrt(std::max(0.0, overlap(*this).real()));
}

void Mps::normalize() {
    const double n = norm();
    if (n <= 0.0) throw std::runtime_error("Mps::normalize: zero state");
    scale(1.0 / n);
}

void Mps::scale(cplx factor) {
    const int x = center_ >= 0 ? center_ : 0;
    for (auto& block : sites_[x].blocks) block *= factor;
}

void Mps::push_right(int x) {
    const int d = phys_dim(x);
    const Matrix m = stack_left(sites_[x]);
    const int k = static_cast<int>(std::min(m.rows(), m.cols()));
    Eigen::HouseholderQR<Matrix> qr(m);
    const Matrix q = qr.householderQ() * Matrix::Identity(m.rows(), k);
    const Matrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    sites_[x] = unstack_left(q, d);
    for (auto& block : sites_[x + 1].blocks) block = r * block;
}

void Mps::push_left(int x) {
    const int d = phys_dim(x);
    const Matrix m = stack_right(sites_[x]);
    const int k = static_cast<int>(std::min(m.rows(), m.cols()));
    Eigen::HouseholderQR<Matrix> qr(m.adjoint());
    const Matrix q = qr.householderQ() * Matrix::Identity(m.cols(), k);
    const Matrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    sites_[x] = unstack_right(q.adjoint(), d);
    const Matrix l = r.adjoint();
    for (auto& block : sites_[x - 1].blocks) block = block * l;
}

void Mps::canonicalize(int center) {
    if (center < 0 || center >= size()) throw std::out_of_range("canonicalize: bad center");
    for (int x = 0; x < center; ++x) push_right(x);
    for (int x = size() - 1; x > center; --x) push_left(x);
    center_ = center;
}

void Mps::move_center(int target) {
    if (target < 0 || target >= size()) throw std::out_of_range("move_center: bad target");
    if (center_ < 0) {
        canonicalize(target);
        return;
    }
    while (center_ < target) push_right(center_++);
    while (center_ > target) push_left(center_--);
}

double Mps::canonical_defect() const {
    if (center_ < 0) return 1.0;
    double worst = 0.0;
    for (int x = 0; x < size(); ++x) {
        if (x == center_) continue;
        Matrix g;
        if (x < center_) {
            g = Matrix::Zero(sites_[x].right_dim(), sites_[x].right_dim());
            for (const auto& b : sites_[x].blocks) g += b.adjoint() * b;
        } else {
            g = Matrix::Zero(sites_[x].left_dim(), sites_[x].left_dim());
            for (const auto& b : sites_[x].blocks) g += b * b.adjoint();
        }
        worst = std::max(worst,
                         (g - Matrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff());
    }
    return worst;
}

cplx Mps::overlap(const Mps& other) const {
    if (other.size() != size()) throw std::invalid_argument("overlap: size mismatch");
    Matrix env = Matrix::Ones(1, 1);
    for (int x = 0; x < size(); ++x) {
        if (phys_dim(x) != other.phys_dim(x))
            throw std::invalid_argument("overlap: physical dimension mismatch");
        Matrix next = Matrix::Zero(sites_[x].right_dim(), other.sites_[x].right_dim());
        for (int s = 0; s < phys_dim(x); ++s)
            next += sites_[x].blocks[s].adjoint() * env * other.sites_[x].blocks[s];
        env = std::move(next);
    }
    return env(0, 0);
}

cplx Mps::expectation(int x, const Matrix& op) const {
    if (x < 0 || x >= size()) throw std::out_of_range("expectation: bad site");
    if (op.rows() != phys_dim(x) || op.cols() != phys_dim(x))
        throw std::invalid_argument("expectation: operator dimension mismatch");
    Matrix env = Matrix::Ones(1, 1);
    Matrix env_norm = Matrix::Ones(1, 1);
    for (int y = 0; y < size(); ++y) {
        const auto& t = sites_[y];
        Matrix next = Matrix::Zero(t.right_dim(), t.right_dim());
        Matrix next_norm = Matrix::Zero(t.right_dim(), t.right_dim());
        for (int s = 0; s < t.phys_dim(); ++s)
            next_norm += t.blocks[s].adjoint() * env_norm * t.blocks[s];
        if (y == x) {
            for (int sp = 0; sp < t.phys_dim(); ++sp)
                for (int s = 0; s < t.phys_dim(); ++s) {
                    if (op(sp, s) == cplx(0.0, 0.0)) continue;
                    next += op(sp, s) * t.blocks[sp].adjoint() * env * t.blocks[s];
                }
        } else {
            for (int s = 0; s < t.phys_dim(); ++s)
                next += t.blocks[s].adjoint() * env * t.blocks[s];
        }
        env = std::move(next);
        env_norm = std::move(next_norm);
    }
    return env(0, 0) / env_norm(0, 0);
}

cplx Mps::expectation(const Mpo& op) const {
    if (op.size() != size()) throw std::invalid_argument("expectation: MPO size mismatch");
    std::vector<Matrix> env{Matrix::Ones(1, 1)};
    Matrix env_norm = Matrix::Ones(1, 1);
    for (int x = 0; x < size(); ++x) {
        const auto& t = sites_[x];
        const auto& w = op.sites[x];
        if (static_cast<int>(env.size()) != w.wl)
            throw std::invalid_argument("expectation: MPO bond mismatch");
        std::vector<Matrix> next(w.wr, Matrix::Zero(t.right_dim(), t.right_dim()));
        for (int a = 0; a < w.wl; ++a)
            for (int b = 0; b < w.wr; ++b) {
                const Matrix& o = w.at(a, b);
                if (o.size() == 0) continue;
                for (int sp = 0; sp < t.phys_dim(); ++sp)
                    for (int s = 0; s < t.phys_dim(); ++s) {
                        if (o(sp, s) == cplx(0.0, 0.0)) continue;
                        next[b] += o(sp, s) * t.blocks[sp].adjoint() * env[a] * t.blocks[s];
                    }
            }
        Matrix next_norm = Matrix::Zero(t.right_dim(), t.right_dim());
        for (int s = 0; s < t.phys_dim(); ++s)
            next_norm += t.blocks[s].adjoint() * env_norm * t.blocks[s];
        env = std::move(next);
        env_norm = std::move(next_norm);
    }
    return env[0](0, 0) / env_norm(0, 0);
}

cplx Mps::vacuum_amplitude(const std::vector<std::pair<int, Matrix>>& insertions) const {
    Matrix row = Matrix::Ones(1, 1);
    std::size_t next = 0;
    for (int x = 0; x < size(); ++x) {
        const auto& t = sites_[x];
        Matrix m;
        if (next < insertions.size() && insertions[next].first == x) {
            const Matrix& op = insertions[next].second;
            m = Matrix::Zero(t.left_dim(), t.right_dim());
            for (int s = 0; s < t.phys_dim(); ++s)
                if (op(0, s) != cplx(0.0, 0.0)) m += op(0, s) * t.blocks[s];
            ++next;
        } else {
            m = t.blocks[0];
        }
        row = row * m;
    }
    if (next != insertions.size())
        throw std::invalid_argument("vacuum_amplitude: sites must be increasing and in range");
    return row(0, 0) / norm();
}

std::vector<cplx> Mps::vacuum_one_point(const std::vector<Matrix>& op_per_site) const {
    const int n = size();
    std::vector<Matrix> prefix(n + 1), suffix(n + 1);
    prefix[0] = Matrix::Ones(1, 1);
    for (int x = 0; x < n; ++x) prefix[x + 1] = prefix[x] * sites_[x].blocks[0];
    suffix[n] = Matrix::Ones(1, 1);
    for (int x = n - 1; x >= 0; --x) suffix[x] = sites_[x].blocks[0] * suffix[x + 1];

    const double nrm = norm();
    std::vector<cplx> f(n);
    for (int x = 0; x < n; ++x) {
        const auto& t = sites_[x];
        Matrix m = Matrix::Zero(t.left_dim(), t.right_dim());
        for (int s = 0; s < t.phys_dim(); ++s)
            if (op_per_site[x](0, s) != cplx(0.0, 0.0)) m += op_per_site[x](0, s) * t.blocks[s];
        f[x] = (prefix[x] * m * suffix[x + 1])(0, 0) / nrm;
    }
    return f;
}

Matrix Mps::vacuum_two_point(const std::vector<Matrix>& op_per_site,
                             const std::vector<Matrix>& op2_per_site) const {
    const int n = size();
    std::vector<Matrix> prefix(n + 1), suffix(n + 1);
    prefix[0] = Matrix::Ones(1, 1);
    for (int x = 0; x < n; ++x) prefix[x + 1] = prefix[x] * sites_[x].blocks[0];
    suffix[n] = Matrix::Ones(1, 1);
    for (int x = n - 1; x >= 0; --x) suffix[x] = sites_[x].blocks[0] * suffix[x + 1];

    auto op_row = [&](int x, const std::vector<Matrix>& ops) {
        const auto& t = sites_[x];
        Matrix m = Matrix::Zero(t.left_dim(), t.right_dim());
        for (int s = 0; s < t.phys_dim(); ++s)
            if (ops[x](0, s) != cplx(0.0, 0.0)) m += ops[x](0, s) * t.blocks[s];
        return m;
    };

    const double nrm = norm();
    Matrix out = Matrix::Zero(n, n);
    for (int x1 = 0; x1 < n; ++x1) {
        out(x1, x1) = (prefix[x1] * op_row(x1, op2_per_site) * suffix[x1 + 1])(0, 0) / nrm;
        Matrix walker = prefix[x1] * op_row(x1, op_per_site);
        for (int x2 = x1 + 1; x2 < n; ++x2) {
            out(x1, x2) = (walker * op_row(x2, op_per_site) * suffix[x2 + 1])(0, 0) / nrm;
            out(x2, x1) = out(x1, x2);
            walker = walker * sites_[x2].blocks[0];
        }
    }
    return out;
}

Matrix Mps::correlation_matrix(const std::vector<Matrix>& op_per_site) const {
    Mps work = *this;
    work.canonicalize(size() - 1);
    const int n = size();

    // right density matrices in bond space
    std::vector<Matrix> rho(n + 1);
    rho[n] = Matrix::Ones(1, 1);
    for (int x = n - 1; x >= 0; --x) {
        const auto& t = work.sites_[x];
        rho[x] = Matrix::Zero(t.left_dim(), t.left_dim());
        for (int s = 0; s < t.phys_dim(); ++s)
            rho[x] += t.blocks[s] * rho[x + 1] * t.blocks[s].adjoint();
    }
    const double norm_sq = rho[0](0, 0).real();

    auto transfer_op = [&](int x, const Matrix& env, const Matrix& op) {
        const auto& t = work.sites_[x];
        Matrix next = Matrix::Zero(t.right_dim(), t.right_dim());
        for (int sp = 0; sp < t.phys_dim(); ++sp)
            for (int s = 0; s < t.phys_dim(); ++s) {
                if (op(sp, s) == cplx(0.0, 0.0)) continue;
                next += op(sp, s) * t.blocks[sp].adjoint() * env * t.blocks[s];
            }
        return next;
    };
    auto transfer_id = [&](int x, const Matrix& env) {
        const auto& t = work.sites_[x];
        Matrix next = Matrix::Zero(t.right_dim(), t.right_dim());
        for (int s = 0; s < t.phys_dim(); ++s)
            next += t.blocks[s].adjoint() * env * t.blocks[s];
        return next;
    };

    Matrix out = Matrix::Zero(n, n);
    for (int x = 0; x < n; ++x) {
        // diagonal: number-like operator opdag * op
        const Matrix big = op_per_site[x].adjoint() * op_per_site[x];
        const Matrix id_left = Matrix::Identity(work.sites_[x].left_dim(),
                                                work.sites_[x].left_dim());
        out(x, x) = (transfer_op(x, id_left, big) * rho[x + 1]).trace() / norm_sq;

        Matrix env = transfer_op(x, id_left, op_per_site[x].adjoint());
        for (int y = x + 1; y < n; ++y) {
            const Matrix closed = transfer_op(y, env, op_per_site[y]);
            out(x, y) = (closed * rho[y + 1]).trace() / norm_sq;
            out(y, x) = std::conj(out(x, y));
            if (y + 1 < n) env = transfer_id(y, env);
        }
    }
    return out;
}

double Mps::apply_two_site(int b, const Matrix& gate, const TruncationPolicy& policy,
                           bool toward_right) {
    if (b < 0 || b + 1 >= size()) throw std::out_of_range("apply_two_site: bad bond");
    if (center_ != b && center_ != b + 1) move_center(b);

    const int d1 = phys_dim(b), d2 = phys_dim(b + 1);
    const int dl = sites_[b].left_dim(), dr = sites_[b + 1].right_dim();

    // two-site wavefunction, blocks indexed by s1 * d2 + s2
    std::vector<Matrix> theta(d1 * d2);
    for (int s1 = 0; s1 < d1; ++s1)
        for (int s2 = 0; s2 < d2; ++s2)
            theta[s1 * d2 + s2] = sites_[b].blocks[s1] * sites_[b + 1].blocks[s2];

    std::vector<Matrix> rotated(d1 * d2, Matrix::Zero(dl, dr));
    for (int r = 0; r < d1 * d2; ++r)
        for (int c = 0; c < d1 * d2; ++c) {
            if (gate(r, c) == cplx(0.0, 0.0)) continue;
            rotated[r] += gate(r, c) * theta[c];
        }

    Matrix m(dl * d1, d2 * dr);
    for (int s1 = 0; s1 < d1; ++s1)
        for (int s2 = 0; s2 < d2; ++s2)
            for (int i = 0; i < dl; ++i)
                m.block(i * d1 + s1, s2 * dr, 1, dr) = rotated[s1 * d2 + s2].row(i);

    SvdResult svd = truncated_svd(m, policy);
    const int k = static_cast<int>(svd.sigma.size());
    discarded_ += svd.discarded;

    SiteTensor left, right;
    left.blocks.assign(d1, Matrix::Zero(dl, k));
    right.blocks.assign(d2, Matrix::Zero(k, dr));
    const Matrix weighted_u = svd.u * svd.sigma.asDiagonal();
    const Matrix weighted_v = svd.sigma.asDiagonal() * svd.vdag;
    for (int s1 = 0; s1 < d1; ++s1)
        for (int i = 0; i < dl; ++i)
            left.blocks[s1].row(i) = (toward_right ? svd.u : weighted_u).row(i * d1 + s1);
    for (int s2 = 0; s2 < d2; ++s2)
        right.blocks[s2] = (toward_right ? weighted_v : svd.vdag).middleCols(s2 * dr, dr);

    sites_[b] = std::move(left);
    sites_[b + 1] = std::move(right);
    center_ = toward_right ? b + 1 : b;
    return svd.discarded;
}

void Mps::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("Mps::save: cannot open " + path);
    const char magic[8] = {'P', 'D', 'L', 'M', 'P', 'S', '0', '1'};
    out.write(magic, 8);
    const std::int64_t n = size();
    out.write(reinterpret_cast<const char*>(&n), 8);
    for (const auto& t : sites_) {
        const std::int64_t dims[3] = {t.phys_dim(), t.left_dim(), t.right_dim()};
        out.write(reinterpret_cast<const char*>(dims), 24);
        for (const auto& block : t.blocks)
            for (int i = 0; i < block.rows(); ++i)
                for (int j = 0; j < block.cols(); ++j) {
                    const double re = block(i, j).real(), im = block(i, j).imag();
                    out.write(reinterpret_cast<const char*>(&re), 8);
                    out.write(reinterpret_cast<const char*>(&im), 8);
                }
    }
    if (!out) throw std::runtime_error("Mps::save: write failed for " + path);
}

Mps Mps::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("Mps::load: cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (std::string(magic, 8) != "PDLMPS01")
        throw std::runtime_error("Mps::load: bad header in " + path);
    std::int64_t n = 0;
    in.read(reinterpret_cast<char*>(&n), 8);
    std::vector<SiteTensor> tensors(n);
    for (auto& t : tensors) {
        std::int64_t dims[3];
        in.read(reinterpret_cast<char*>(dims), 24);
        t.blocks.assign(dims[0], Matrix(dims[1], dims[2]));
        for (auto& block : t.blocks)
            for (int i = 0; i < block.rows(); ++i)
                for (int j = 0; j < block.cols(); ++j) {
                    double re = 0.0, im = 0.0;
                    in.read(reinterpret_cast<char*>(&re), 8);
                    in.read(reinterpret_cast<char*>(&im), 8);
                    block(i, j) = cplx(re, im);
                }
    }
    if (!in) throw std::runtime_error("Mps::load: truncated file " + path);
    return Mps(std::move(tensors));
}

// ---------------------------------------------------------------------------

Mpo one_body_mpo(const std::vector<cplx>& coeffs, const std::vector<Matrix>& op_per_site) {
    const int n = static_cast<int>(coeffs.size());
    if (n == 0 || op_per_site.size() != coeffs.size())
        throw std::invalid_argument("one_body_mpo: bad inputs");

    Mpo mpo;
    mpo.sites.resize(n);
    for (int x = 0; x < n; ++x) {
        const int d = static_cast<int>(op_per_site[x].rows());
        const Matrix id = Matrix::Identity(d, d);
        const Matrix scaled = coeffs[x] * op_per_site[x];
        auto& w = mpo.sites[x];
        if (n == 1) {
            w.wl = w.wr = 1;
            w.ops = {scaled};
        } else if (x == 0) {
            w.wl = 1;
            w.wr = 2;
            w.ops = {scaled, id};
        } else if (x == n - 1) {
            w.wl = 2;
            w.wr = 1;
            w.ops = {id, scaled};
        } else {
            w.wl = w.wr = 2;
            w.ops = {id, Matrix(), scaled, id};
        }
    }
    return mpo;
}

double apply_mpo(Mps& state, const Mpo& op, const TruncationPolicy& policy) {
    if (op.size() != state.size()) throw std::invalid_argument("apply_mpo: size mismatch");
    const int n = state.size();

    std::vector<SiteTensor> expanded(n);
    for (int x = 0; x < n; ++x) {
        const auto& t = state.site(x);
        const auto& w = op.sites[x];
        const int d = t.phys_dim(), dl = t.left_dim(), dr = t.right_dim();
        expanded[x].blocks.assign(d, Matrix::Zero(w.wl * dl, w.wr * dr));
        for (int a = 0; a < w.wl; ++a)
            for (int b = 0; b < w.wr; ++b) {
                const Matrix& o = w.at(a, b);
                if (o.size() == 0) continue;
                for (int sp = 0; sp < d; ++sp)
                    for (int s = 0; s < d; ++s) {
                        if (o(sp, s) == cplx(0.0, 0.0)) continue;
                        expanded[x].blocks[sp].block(a * dl, b * dr, dl, dr) +=
                            o(sp, s) * t.blocks[s];
                    }
            }
    }

    Mps result(std::move(expanded));
    result.canonicalize(n - 1);
    // right-to-left truncation sweep
    double discarded = 0.0;
    for (int x = n - 1; x > 0; --x) {
        const auto& t = result.site(x);
        const int d = t.phys_dim(), dl = t.left_dim(), dr = t.right_dim();
        Matrix m(dl, d * dr);
        for (int s = 0; s < d; ++s) m.middleCols(s * dr, dr) = t.blocks[s];
        SvdResult svd = truncated_svd(m, policy);
        const int k = static_cast<int>(svd.sigma.size());
        discarded += svd.discarded;
        SiteTensor replacement;
        replacement.blocks.assign(d, Matrix(k, dr));
        for (int s = 0; s < d; ++s)
            replacement.blocks[s] = svd.vdag.middleCols(s * dr, dr);
        result.site(x) = std::move(replacement);
        const Matrix carry = svd.u * svd.sigma.asDiagonal();
        for (auto& block : result.site(x - 1).blocks) block = block * carry;
    }
    result.canonicalize(0);
    state = std::move(result);
    return discarded;
}

// ---------------------------------------------------------------------------

namespace {

// Third-order Ruth composition for H = A + B: exp(-i dt H) is approximated by
// exp(-i c1 dt A) exp(-i d1 dt B) ... applied right-to-left.
constexpr double kRuthA[3] = {7.0 / 24.0, 3.0 / 4.0, -1.0 / 24.0};
constexpr double kRuthB[3] = {2.0 / 3.0, -2.0 / 3.0, 1.0};

struct GateLayer {
    int parity = 0;                // bonds with b % 2 == parity
    std::vector<Matrix> gates;     // indexed by bond
};

struct BondEigen {
    Matrix vectors;
    Eigen::VectorXd values;
};

std::vector<BondEigen> decompose_bonds(const BondHamiltonian& ham) {
    std::vector<BondEigen> out(ham.size());
    for (int b = 0; b < ham.size(); ++b) {
        Eigen::SelfAdjointEigenSolver<Matrix> eig(ham.bonds[b]);
        if (eig.info() != Eigen::Success)
            throw std::runtime_error("evolve: bond eigendecomposition failed");
        out[b] = {eig.eigenvectors(), eig.eigenvalues()};
    }
    return out;
}

Matrix bond_gate(const BondEigen& e, cplx exponent_scale) {
    // exp(exponent_scale * h)
    Eigen::VectorXcd phases =
        (exponent_scale * e.values.cast<cplx>().array()).exp();
    return e.vectors * phases.asDiagonal() * e.vectors.adjoint();
}

void apply_layer(Mps& state, const GateLayer& layer, const TruncationPolicy& policy,
                 bool left_to_right) {
    const int n_bonds = state.size() - 1;
    if (left_to_right) {
        for (int b = layer.parity; b < n_bonds; b += 2) {
            state.move_center(b);
            state.apply_two_site(b, layer.gates[b], policy, true);
        }
    } else {
        int b0 = n_bonds - 1;
        if (b0 % 2 != layer.parity) --b0;
        for (int b = b0; b >= 0; b -= 2) {
            state.move_center(b + 1);
            state.apply_two_site(b, layer.gates[b], policy, false);
        }
    }
}

}  // namespace

EvolutionReport evolve(Mps& state, const BondHamiltonian& ham, double dt, int steps,
                       const TruncationPolicy& policy, const StepObserver& observer,
                       int stride) {
    if (dt <= 0.0) throw std::invalid_argument("evolve: dt must be > 0");
    if (ham.size() != state.size() - 1)
        throw std::invalid_argument("evolve: bond count mismatch");

    const auto eigens = decompose_bonds(ham);
    // Layers in application order: B(d3), A(c3), B(d2), A(c2), B(d1), A(c1).
    // A acts on even bonds, B on odd bonds.
    std::vector<GateLayer> layers(6);
    const cplx minus_i_dt = -cplx(0.0, 1.0) * dt;
    for (int k = 0; k < 3; ++k) {
        GateLayer b_layer, a_layer;
        b_layer.parity = 1;
        a_layer.parity = 0;
        b_layer.gates.resize(ham.size());
        a_layer.gates.resize(ham.size());
        for (int b = 0; b < ham.size(); ++b) {
            if (b % 2 == 1) b_layer.gates[b] = bond_gate(eigens[b], minus_i_dt * kRuthB[2 - k]);
            else a_layer.gates[b] = bond_gate(eigens[b], minus_i_dt * kRuthA[2 - k]);
        }
        layers[2 * k] = std::move(b_layer);
        layers[2 * k + 1] = std::move(a_layer);
    }

    EvolutionReport report;
    state.reset_discard();
    for (int step = 0; step < steps; ++step) {
        bool forward = true;
        for (const auto& layer : layers) {
            apply_layer(state, layer, policy, forward);
            forward = !forward;
        }
        const double n = state.norm();
        report.norm_drift = std::max(report.norm_drift, std::abs(n - 1.0));
        if (policy.renormalize) state.scale(1.0 / n);
        if (state.accumulated_discard() > policy.max_total_discard)
            throw std::runtime_error(
                "evolve: truncation weight " + std::to_string(state.accumulated_discard()) +
                " exceeded budget at step " + std::to_string(step + 1) +
                " (max bond " + std::to_string(state.max_bond_dim()) + ")");
        if (observer && ((step + 1) % stride == 0 || step + 1 == steps))
            observer(step + 1, (step + 1) * dt, state);
    }
    report.steps = steps;
    report.discarded_weight = state.accumulated_discard();
    return report;
}

Mps imaginary_time_ground_state(const BondHamiltonian& ham, const Mpo& h_mpo,
                                const Mps& initial, const TruncationPolicy& policy,
                                const ImaginaryTimeOptions& options,
                                std::vector<double>* energy_trace) {
    const auto eigens = decompose_bonds(ham);
    Mps state = initial;
    state.canonicalize(0);
    state.normalize();

    double energy = state.expectation(h_mpo).real();
    if (energy_trace) energy_trace->push_back(energy);

    for (const auto& [dtau, sweeps] : options.schedule) {
        // Strang split: A(dtau/2) even, B(dtau) odd, A(dtau/2) even
        std::vector<GateLayer> layers(3);
        layers[0].parity = 0;
        layers[1].parity = 1;
        layers[2].parity = 0;
        for (auto& layer : layers) layer.gates.resize(ham.size());
        for (int b = 0; b < ham.size(); ++b) {
            if (b % 2 == 0) {
                layers[0].gates[b] = bond_gate(eigens[b], cplx(-0.5 * dtau, 0.0));
                layers[2].gates[b] = layers[0].gates[b];
            } else {
                layers[1].gates[b] = bond_gate(eigens[b], cplx(-dtau, 0.0));
            }
        }

        for (int sweep = 0; sweep < sweeps; ++sweep) {
            bool forward = true;
            for (const auto& layer : layers) {
                apply_layer(state, layer, policy, forward);
                forward = !forward;
            }
            state.normalize();
            if ((sweep + 1) % options.check_every == 0 || sweep + 1 == sweeps) {
                const double next = state.expectation(h_mpo).real();
                if (energy_trace) energy_trace->push_back(next);
                const bool stalled =
                    std::abs(next - energy) < options.energy_tol * std::max(1.0, std::abs(next));
                energy = next;
                if (stalled) break;
            }
        }
    }
    state.reset_discard();
    return state;
}

}  // namespace pdl::mps
