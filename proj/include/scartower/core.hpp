// Dense qudit statevector engine.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace scartower {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DimensionError : Error {
    using Error::Error;
};
struct SizeGuardError : Error {
    using Error::Error;
};
struct NumericalError : Error {
    using Error::Error;
};
struct DomainError : Error {
    using Error::Error;
};

// Amplitude-count cap for any allocated state. Default 2^27.
std::size_t amplitude_cap();
void set_amplitude_cap(std::size_t cap);
void check_size(const std::vector<int>& dims);

// Counter-based generator: output i of stream (seed, stream) is a pure
// function of (seed, stream, i).
class Rng {
public:
    using result_type = std::uint64_t;
    explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}
    result_type operator()();
    double uniform();  // [0, 1)
    Rng split(std::uint64_t stream) const { return Rng(seed_, stream_ * 0x9E3779B97F4A7C15ULL + stream + 1); }
    std::uint64_t seed() const { return seed_; }
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type(0); }

private:
    std::uint64_t seed_, stream_, counter_ = 0;
};

enum class WireRole { system, control, ancilla, bell_half };
const char* role_name(WireRole r);

class StateVector {
public:
    StateVector() = default;
    // |0...0> on the given wires.
    explicit StateVector(std::vector<int> dims, std::vector<WireRole> roles = {});
    StateVector(std::vector<int> dims, Vec amps, std::vector<WireRole> roles = {});

    static StateVector basis(const std::vector<int>& dims, const std::vector<int>& digits);
    static StateVector product(const std::vector<Vec>& locals);

    const std::vector<int>& dims() const { return dims_; }
    const std::vector<WireRole>& roles() const { return roles_; }
    int num_wires() const { return static_cast<int>(dims_.size()); }
    std::size_t size() const { return static_cast<std::size_t>(amps_.size()); }
    const Vec& amps() const { return amps_; }
    Vec& amps() { return amps_; }
    cplx operator[](std::size_t i) const { return amps_[static_cast<Eigen::Index>(i)]; }

    std::vector<std::size_t> strides() const;
    std::vector<int> digits(std::size_t index) const;
    std::size_t index(const std::vector<int>& digits) const;

    double norm() const { return amps_.norm(); }
    StateVector normalized() const;
    void normalize();

    // Tensor product with |0> on new wires placed after the existing ones.
    StateVector append_wires(const std::vector<int>& dims, WireRole role) const;

private:
    std::vector<int> dims_;
    std::vector<WireRole> roles_;
    Vec amps_;
};

struct LocalOperator {
    std::vector<int> support;
    Mat matrix;

    LocalOperator() = default;
    LocalOperator(std::vector<int> s, Mat m) : support(std::move(s)), matrix(std::move(m)) {}

    static LocalOperator unitary(std::vector<int> s, Mat m);
    static LocalOperator hermitian(std::vector<int> s, Mat m);
};

bool is_unitary(const Mat& m, double tol = 1e-10);
bool is_hermitian(const Mat& m, double tol = 1e-10);

// Sum of local terms plus a multiple of the identity.
struct Observable {
    std::vector<LocalOperator> terms;
    cplx constant = 0.0;

    Observable& add(LocalOperator op) {
        terms.push_back(std::move(op));
        return *this;
    }
};

StateVector apply_local(const StateVector& state, const LocalOperator& op);
// Applies ops in list order (ops[0] acts first) to the control-|1> slice.
StateVector controlled_apply(const StateVector& state, int control, const std::vector<LocalOperator>& ops);
StateVector apply_observable(const StateVector& state, const Observable& obs);

// New wire i is old wire order[i].
StateVector permute_wires(const StateVector& state, const std::vector<int>& order);
// Slice with the listed wires fixed to the given digits; those wires are removed.
StateVector fix_wires(const StateVector& state, const std::vector<int>& wires, const std::vector<int>& values);

cplx inner(const StateVector& a, const StateVector& b);
double fidelity(const StateVector& a, const StateVector& b);  // |<a|b>| / (|a||b|)
cplx expectation(const StateVector& state, const Observable& obs);

// Projective measurements.
struct Projector {
    int label = 0;
    std::function<StateVector(const StateVector&)> apply;
};

struct MeasurementOutcome {
    int outcome_index = 0;
    double probability = 0.0;
    StateVector post_state;
};

// Projectors diagonal in the computational basis, grouped by label(index).
std::vector<Projector> diagonal_projectors(const std::vector<int>& dims,
                                           const std::function<int(std::size_t)>& label);

// Every branch with its probability; zero-probability branches keep an empty post_state.
std::vector<MeasurementOutcome> branch_decompose(const StateVector& state, const std::vector<Projector>& family);
MeasurementOutcome born_measure(const StateVector& state, const std::vector<Projector>& family, Rng& rng);

inline constexpr double kSectorFloor = 1e-14;

// Von Neumann entropy (nats) across block_a | rest.
double schmidt_entropy(const StateVector& state, const std::vector<int>& block_a);
// First `cut` wires against the rest.
double schmidt_entropy(const StateVector& state, int cut);

double qfi(const StateVector& state, const Observable& generator);

// Spin-s matrices in the basis m = -s, ..., s (index 0 is m = -s).
struct SpinOps {
    Mat Sz, Sp, Sm, Sx, Sy;
};
SpinOps spin_ops(double s);

// Qudit Pauli X^a Z^b with X|i> = |i+1>, Z|i> = e^{2 pi i i/d}|i>.
Mat qudit_pauli(int d, int a, int b);
Mat kron(const Mat& a, const Mat& b);

StateVector random_state(const std::vector<int>& dims, Rng& rng);
Mat random_unitary(int n, Rng& rng);

}  // namespace scartower
