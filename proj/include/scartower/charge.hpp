// Global-charge measurement: projector oracle and phase-estimation circuit.
#pragma once

#include "scartower/models.hpp"

#include <optional>

namespace scartower {

struct Projection {
    double probability = 0.0;
    bool empty = false;      // probability below the sector floor
    StateVector post_state;  // normalized, unset when empty
};

Projection project_charge(const StateVector& state, const ModelSpec& model, double charge);

struct SectorEntry {
    double charge = 0.0;
    int shifted = 0;  // charge minus the model's minimum charge
    double probability = 0.0;
    StateVector post_state;
};
std::vector<SectorEntry> sector_decompose(const StateVector& state, const ModelSpec& model);

struct PEAConfig {
    int m = 3;
    // Added to the charge before the modulo-2^m encoding; unset means -min_charge.
    std::optional<double> charge_offset;
    std::uint64_t seed = 0;
    // Order in which the commuting local phase factors are applied (wire order by default).
    std::vector<int> factor_order;
};

struct PEAOutcome {
    std::vector<int> bits;  // s_0 (least significant) ... s_{m-1}
    int charge_mod = 0;
    double probability = 0.0;
    StateVector post_state;
};

// Pre-measurement state: system wires followed by ancillas a_0 .. a_{m-1}.
struct PEACircuit {
    StateVector state;
    int system_wires = 0;
    int m = 0;
    double offset = 0.0;
    bool aliasing = false;  // 2^m does not exceed the charge range
    std::vector<double> readout_probability;  // indexed by register value
};

PEACircuit pea_circuit(const StateVector& state, const ModelSpec& model, const PEAConfig& config);
PEAOutcome pea_branch(const PEACircuit& circuit, int value);
PEAOutcome pea_sample(const PEACircuit& circuit, Rng& rng);
PEAOutcome phase_estimate(const StateVector& state, const ModelSpec& model, const PEAConfig& config);

// Ancillas sit after the system with a_0 first, so the trailing index digits
// list a_0 as most significant. Register value sum_l a_l 2^l is the bit reversal.
std::size_t register_value(std::size_t tail, int m);

// Dense inverse quantum Fourier transform on an m-qubit register.
Mat inverse_qft(int m);

}  // namespace scartower
