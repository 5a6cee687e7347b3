// Controlled translation, momentum readout and matrix-product unitaries.
#pragma once

#include "scartower/charge.hpp"

namespace scartower {

enum class TranslateMode { direct, protocol };

// T|x_1 x_2 ... x_L> = |x_2 ... x_L x_1>: wire j reads the input's wire j+1.
StateVector translate(const StateVector& state, int power = 1);
Mat translation_matrix(int L, int d);

// All wires except `control` form the chain, in wire order.
StateVector controlled_translate(const StateVector& state, int control, TranslateMode mode, Rng& rng);

// One Bell-measurement branch of the protocol. outcomes[j] = a*d + b labels the
// Bell state (I x X^a Z^b) sum_i |ii>/sqrt(d) found on pair j. The returned state
// is normalized; `probability` receives the branch weight.
StateVector protocol_branch(const StateVector& state, int control, const std::vector<int>& outcomes, double* probability);
int protocol_branch_count(int L, int d);  // d^{2(L-2)}

struct ParityResult {
    int bit = 0;
    double probability = 0.0;
    StateVector post_state;
    double off_axis_weight = 0.0;  // weight on translation eigenvalues other than +-1
    bool warning = false;
};
ParityResult momentum_parity_measure(const StateVector& state, Rng& rng);
// Both branches without sampling: element 0 is the T = +1 outcome.
std::vector<ParityResult> momentum_parity_branches(const StateVector& state);

// Projector onto lattice momentum p (eigenvalue e^{2 pi i p/L} of T).
StateVector momentum_project(const StateVector& state, int p);

struct MomentumPEA {
    int m = 0;
    std::vector<double> readout_probability;
    StateVector pre_measure;
};
MomentumPEA momentum_pea_circuit(const StateVector& state, int m);
PEAOutcome momentum_pea(const StateVector& state, int m, Rng& rng);

// Translation-invariant four-leg tensor: data[out*d + in] is a bond x bond matrix.
struct MPU {
    std::string name;
    int d = 2;
    int chi = 1;
    std::vector<Mat> data;

    const Mat& at(int out, int in) const { return data[static_cast<std::size_t>(out * d + in)]; }
    void validate() const;
};

MPU identity_mpu(int d = 2);
MPU translation_mpu(int d = 2);
MPU czx_mpu();
std::vector<MPU> builtin_mpus();
MPU builtin_mpu(const std::string& name, int d = 2);

// Periodic contraction over L sites; rows index outputs.
Mat mpu_to_dense(const MPU& mpu, int L);

struct PauliLabel {
    int a = 0, b = 0;
};

enum class PushSide { left, right };

struct CorrectionEntry {
    PauliLabel pauli;
    bool correctable = false;
    PushSide side = PushSide::left;  // bond carrying the error
    Mat phys_correction;             // acts on the output leg
    PauliLabel pushed;               // emerges on the opposite bond
    double residual = 0.0;
    double gluing_residual = 0.0;
};

struct CorrectionTable {
    std::string name;
    std::vector<CorrectionEntry> entries;
    bool all_correctable() const;
};

CorrectionTable mpu_correctable(const MPU& mpu);

// Smallest residual of the transfer-level gluing identity over candidate pushed Paulis,
// for an error entering on the given side.
double gluing_residual(const MPU& mpu, PauliLabel pauli, PushSide side, PauliLabel* best = nullptr);

MPU random_mpu_tensor(int d, int chi, Rng& rng);

}  // namespace scartower
