// Registry of scar-tower model families and brute-force tower oracles.
#pragma once

#include "scartower/core.hpp"
#include "scartower/tensor.hpp"

#include <optional>

namespace scartower {

enum class ModelKind { aklt, xx_spin_half, domain_wall, dicke, xx_spin1 };

struct Couplings {
    double lambda = 1.0;
    double h = 1.0;
    double J = 1.0;
};

struct ModelSpec {
    std::string name;
    ModelKind kind = ModelKind::aklt;
    int d = 2;
    double k = 0.0;     // excitation momentum
    int q = 1;          // charge increment per excitation
    int span = 1;       // sites touched by one local creation operator
    Couplings couplings;
    Boundary boundary = Boundary::open;

    Observable hamiltonian(int L) const;
    Observable charge(int L) const;
    // J^dag = sum_j e^{ikj} O_j^dag, j = 1..L; terms falling off the chain are dropped.
    Observable creation(int L) const;
    // O_j^dag for 1-based j, or nothing when it falls off the chain.
    std::optional<LocalOperator> local_creation(int j, int L) const;

    // Charge of a basis configuration minus the smallest possible charge.
    int shifted_charge(const std::vector<int>& digits) const;
    double min_charge(int L) const;
    double base_charge(int L) const;
    int charge_range(int L) const;  // largest shifted charge

    // Exact tower energy E_n where the tower is exact.
    std::optional<double> tower_energy(int L, int n) const;
    std::optional<double> spacing() const;
    std::vector<double> level_charges() const;  // onsite charge per level; empty when not onsite
};

std::vector<std::string> model_names();
ModelSpec make_model(const std::string& name, const Couplings& c = {});
ModelSpec make_model(const std::string& name, const Couplings& c, Boundary boundary);

// AKLT site tensors indexed by level (m = -1, 0, +1).
std::vector<Mat> aklt_tensors();
MPS aklt_mps(int L);

StateVector base_state(const ModelSpec& model, int L);

struct TowerState {
    int n = 0;
    std::optional<double> energy;
    bool annihilated = false;
    StateVector state;     // normalized; empty when annihilated
    double norm_sq_raw = 0.0;
    double residual = 0.0;  // ||(H - E)|psi>|| with E the exact energy, or <H> otherwise
    double charge = 0.0;
};

TowerState exact_tower(const ModelSpec& model, int L, int n);

struct EnergyCheck {
    double energy = 0.0;
    double residual = 0.0;
};
EnergyCheck hamiltonian_residual(const ModelSpec& model, const StateVector& state);
double residual_at(const ModelSpec& model, const StateVector& state, double energy);

struct SectorWeight {
    double charge = 0.0;
    double weight = 0.0;
};
std::vector<SectorWeight> charge_sector_weights(const ModelSpec& model, const StateVector& state,
                                                bool include_empty = false);

// Resource state prod_j (sqrt(1-w) I + e^{ikj} sqrt(w) O_j^dag) |Psi_0>.
MPS build_resource_mps(const ModelSpec& model, int L, double w);
MPO mpo_from_product(const ModelSpec& model, int L, double w);
StateVector resource_state(const ModelSpec& model, int L, double w);  // normalized

}  // namespace scartower
