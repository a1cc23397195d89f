#pragma once

// Matrix-product engine: states, operators, expectation values, MPO
// application with truncation, two-site gate evolution (third-order
// Suzuki-Trotter in real time, Strang splitting in imaginary time) and
// the imaginary-time ground-state search.

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace pdl::mps {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

struct TruncationPolicy {
    int max_bond = 10;
    double rel_cutoff = 1e-8;        // drop singular values below rel_cutoff * sigma_max
    bool renormalize = true;         // rescale the state after each evolution step
    double max_total_discard = 1e-2; // abort threshold for accumulated weight
};

// Per-site tensor stored as d blocks of (left bond x right bond) matrices.
struct SiteTensor {
    std::vector<Matrix> blocks;

    int phys_dim() const { return static_cast<int>(blocks.size()); }
    int left_dim() const { return blocks.empty() ? 0 : static_cast<int>(blocks[0].rows()); }
    int right_dim() const { return blocks.empty() ? 0 : static_cast<int>(blocks[0].cols()); }
};

// Matrix product operator; W[x] is a (wl x wr) grid of d x d operator
// blocks, empty matrices standing for zero.
struct MpoSite {
    int wl = 1, wr = 1;
    std::vector<Matrix> ops;  // wl * wr entries, row-major

    const Matrix& at(int a, int b) const { return ops[a * wr + b]; }
    Matrix& at(int a, int b) { return ops[a * wr + b]; }
};

struct Mpo {
    std::vector<MpoSite> sites;
    int size() const { return static_cast<int>(sites.size()); }
};

class Mps {
  public:
    Mps() = default;
    explicit Mps(std::vector<SiteTensor> tensors);

    // Norm-1 product state |locals[0], locals[1], ...>, all bonds 1.
    static Mps product_state(const std::vector<int>& dims, const std::vector<int>& locals);

    int size() const { return static_cast<int>(sites_.size()); }
    int phys_dim(int x) const { return sites_[x].phys_dim(); }
    int bond_dim(int b) const;  // b in [0, L]; 1 at the ends
    int max_bond_dim() const;
    const SiteTensor& site(int x) const { return sites_[x]; }
    SiteTensor& site(int x) { return sites_[x]; }
    int center() const { return center_; }

    double norm() const;
    void normalize();
    void scale(cplx factor);

    // Move the orthogonality center with exact QR/LQ pushes.
    void canonicalize(int center = 0);
    void move_center(int target);
    // Largest isometry violation over left-(right-)normalized sites.
    double canonical_defect() const;

    cplx overlap(const Mps& other) const;  // <this|other>
    cplx expectation(int x, const Matrix& op) const;
    cplx expectation(const Mpo& op) const;

    // <vac| prod_i op_i(x_i) |psi> with strictly increasing sites and the
    // all-zeros product state as the reference vacuum.
    cplx vacuum_amplitude(const std::vector<std::pair<int, Matrix>>& insertions) const;

    // One-body amplitudes f(x) = <vac| op(x) |psi> for every site at once.
    std::vector<cplx> vacuum_one_point(const std::vector<Matrix>& op_per_site) const;

    // Two-body amplitudes m(x1, x2) = <vac| op(x1) op(x2) |psi>, x1 < x2, plus
    // the diagonal from op2_per_site (the two-operator product on one site).
    Matrix vacuum_two_point(const std::vector<Matrix>& op_per_site,
                            const std::vector<Matrix>& op2_per_site) const;

    // C(x, y) = <psi| opdag(x) op(y) |psi> / <psi|psi> for all pairs.
    Matrix correlation_matrix(const std::vector<Matrix>& op_per_site) const;

    // Apply a two-site gate at bond b; singular weights move toward
    // `toward_right ? b+1 : b`.  Returns the discarded relative weight.
    double apply_two_site(int b, const Matrix& gate, const TruncationPolicy& policy,
                          bool toward_right);

    double accumulated_discard() const { return discarded_; }
    void reset_discard() { discarded_ = 0.0; }

    void save(const std::string& path) const;
    static Mps load(const std::string& path);

  private:
    void push_right(int x);  // QR: make site x left-normalized
    void push_left(int x);   // LQ: make site x right-normalized

    std::vector<SiteTensor> sites_;
    int center_ = 0;
    double discarded_ = 0.0;
};

// States and operators -------------------------------------------------------

// MPO for sum_x coeff[x] * op[x] with operator bond dimension 2.
Mpo one_body_mpo(const std::vector<cplx>& coeffs, const std::vector<Matrix>& op_per_site);

// Contract an MPO into the state exactly, then compress back to the policy.
// Returns the discarded relative weight of the compression sweep.
double apply_mpo(Mps& state, const Mpo& op, const TruncationPolicy& policy);

// Evolution -------------------------------------------------------------------

// Nearest-neighbour Hamiltonian as per-bond Hermitian matrices h[b] acting on
// (d_b x d_{b+1}); on-site terms are expected to be folded into the bonds.
struct BondHamiltonian {
    std::vector<Matrix> bonds;
    int size() const { return static_cast<int>(bonds.size()); }
};

struct EvolutionReport {
    int steps = 0;
    double norm_drift = 0.0;       // max |norm - 1| seen before renormalization
    double discarded_weight = 0.0; // total truncation weight
};

using StepObserver = std::function<void(int step, double time, Mps& state)>;

// Real-time evolution exp(-i H t) with the third-order Ruth composition of
// the even/odd bond split.  The observer runs after every `stride` steps.
EvolutionReport evolve(Mps& state, const BondHamiltonian& ham, double dt, int steps,
                       const TruncationPolicy& policy, const StepObserver& observer = {},
                       int stride = 1);

struct ImaginaryTimeOptions {
    std::vector<std::pair<double, int>> schedule = {{0.1, 300}, {0.02, 400}, {0.005, 400}};
    double energy_tol = 1e-10;  // stop a stage when the per-sweep drop stalls
    int check_every = 10;
};

// Imaginary-time search for the ground state, normalizing throughout;
// energy measured through the Hamiltonian MPO.
Mps imaginary_time_ground_state(const BondHamiltonian& ham, const Mpo& h_mpo,
                                const Mps& initial, const TruncationPolicy& policy,
                                const ImaginaryTimeOptions& options = {},
                                std::vector<double>* energy_trace = nullptr);

}  // namespace pdl::mps
