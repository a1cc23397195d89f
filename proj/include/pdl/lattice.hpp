#pragma once

// Concrete lattice realization of the model: local operator algebra for the
// truncated bosonic sites and the composite scatterer site (level (x) photon),
// bond Hamiltonians for gate evolution and the MPO forms used for energy and
// photon-number moments.

#include <Eigen/Dense>
#include <vector>

#include "pdl/model.hpp"
#include "pdl/mps.hpp"

namespace pdl::lattice {

using Matrix = Eigen::MatrixXcd;

struct LatticeSpec {
    model::ModelParams params;
    int n_max = 3;

    std::vector<int> dims;            // physical dimension per site
    mps::BondHamiltonian bonds;       // hopping + folded on-site terms

    int scatterer_site() const { return params.x0; }
    int photon_dim() const { return n_max + 1; }
};

// Bosonic operators on the (n_max + 1)-dimensional photon space.
Matrix boson_annihilator(int n_max);
Matrix boson_number(int n_max);

// Site-resolved operators (composite structure at the scatterer).
Matrix site_annihilator(const LatticeSpec& spec, int x);
Matrix site_number(const LatticeSpec& spec, int x);
// Projector |level><level| (x) identity on the photon space.
Matrix level_projector(const LatticeSpec& spec, int level);
// Cyclic coupling operator G (x) identity, scatterer site only.
Matrix coupling_operator(const LatticeSpec& spec);

LatticeSpec build_lattice(const model::ModelParams& params, int n_max = 3);

// Hamiltonian as an MPO (operator bond dimension 4) for energy measurements.
mps::Mpo hamiltonian_mpo(const LatticeSpec& spec);

// MPOs for N, N^2, N^3 with N the total photon number; used for
// multi-photon weight diagnostics.
mps::Mpo number_mpo(const LatticeSpec& spec, int power);

// All-vacuum product state with the scatterer deexcited.
mps::Mps vacuum_state(const LatticeSpec& spec);

// Per-site matrices for vacuum projections of photon operators.
std::vector<Matrix> annihilator_table(const LatticeSpec& spec);
std::vector<Matrix> double_annihilator_table(const LatticeSpec& spec);

}  // namespace pdl::lattice
