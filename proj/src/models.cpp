#include "scartower/models.hpp"

#include <cmath>
#include <map>

namespace scartower {

namespace {

cplx phase(double k, int j) {
    if (k == 0.0) return 1.0;
    if (k == kPi) return (j % 2) ? -1.0 : 1.0;
    return std::polar(1.0, k * j);
}

Mat pauli_z() {
    Mat z = Mat::Zero(2, 2);
    z(0, 0) = -1.0;
    z(1, 1) = 1.0;
    return z;
}

Mat pauli_x() {
    Mat x = Mat::Zero(2, 2);
    x(0, 1) = x(1, 0) = 1.0;
    return x;
}

Mat spin_dot(const SpinOps& s) {
    return kron(s.Sz, s.Sz) + 0.5 * (kron(s.Sp, s.Sm) + kron(s.Sm, s.Sp));
}

Mat xy_coupling(const SpinOps& s) {
    return 0.5 * (kron(s.Sp, s.Sm) + kron(s.Sm, s.Sp));
}

// Nearest-neighbour bonds as 0-based wire pairs.
std::vector<std::pair<int, int>> bonds(int L, Boundary b) {
    std::vector<std::pair<int, int>> out;
    for (int j = 0; j + 1 < L; ++j) out.emplace_back(j, j + 1);
    if (b == Boundary::periodic && L > 2) out.emplace_back(L - 1, 0);
    return out;
}

void require_length(int L) {
    if (L < 2) throw DomainError("chain length must be at least 2");
}

Mat single_site_creation(ModelKind kind) {
    switch (kind) {
        case ModelKind::aklt:
        case ModelKind::xx_spin1: {
            auto s = spin_ops(1.0);
            return 0.5 * s.Sp * s.Sp;
        }
        case ModelKind::dicke: return spin_ops(0.5).Sp;
        default: return Mat();
    }
}

}  // namespace

std::vector<std::string> model_names() { return {"aklt", "xx_spin_half", "domain_wall", "dicke", "xx_spin1"}; }

ModelSpec make_model(const std::string& name, const Couplings& c) {
    ModelSpec m;
    m.name = name;
    m.couplings = c;
    if (name == "aklt") {
        m.kind = ModelKind::aklt;
        m.d = 3;
        m.k = kPi;
        m.q = 2;
        m.boundary = Boundary::periodic;
    } else if (name == "xx_spin_half") {
        m.kind = ModelKind::xx_spin_half;
        m.d = 2;
        m.k = kPi;
        m.q = 2;
        m.span = 2;
    } else if (name == "domain_wall") {
        m.kind = ModelKind::domain_wall;
        m.d = 2;
        m.k = kPi;
        m.q = 2;
        m.span = 3;
    } else if (name == "dicke") {
        m.kind = ModelKind::dicke;
        m.d = 2;
        m.k = 0.0;
        m.q = 1;
    } else if (name == "xx_spin1") {
        m.kind = ModelKind::xx_spin1;
        m.d = 3;
        m.k = kPi;
        m.q = 2;
    } else {
        std::string valid;
        for (const auto& n : model_names()) valid += (valid.empty() ? "" : ", ") + n;
        throw DomainError("unknown model '" + name + "' (valid: " + valid + ")");
    }
    return m;
}

ModelSpec make_model(const std::string& name, const Couplings& c, Boundary boundary) {
    ModelSpec m = make_model(name, c);
    m.boundary = boundary;
    return m;
}

Observable ModelSpec::hamiltonian(int L) const {
    require_length(L);
    Observable H;
    const auto& c = couplings;
    switch (kind) {
        case ModelKind::aklt: {
            auto s = spin_ops(1.0);
            Mat x = spin_dot(s);
            Mat h = Mat::Identity(9, 9) / 3.0 + 0.5 * x + x * x / 6.0;
            for (auto [a, b] : bonds(L, boundary)) H.add(LocalOperator::hermitian({a, b}, h));
            break;
        }
        case ModelKind::xx_spin_half: {
            // sx sx + sy sy = 4 (Sx Sx + Sy Sy)
            Mat h = 4.0 * c.J * xy_coupling(spin_ops(0.5));
            for (auto [a, b] : bonds(L, boundary)) H.add(LocalOperator::hermitian({a, b}, h));
            break;
        }
        case ModelKind::domain_wall: {
            Mat x = pauli_x(), z = pauli_z(), id = Mat::Identity(2, 2);
            Mat flip = c.lambda * (kron(kron(id, x), id) - kron(kron(z, x), z));
            for (int j = 1; j + 1 < L; ++j) H.add(LocalOperator::hermitian({j - 1, j, j + 1}, flip));
            if (boundary == Boundary::periodic && L > 2) {
                H.add(LocalOperator::hermitian({L - 2, L - 1, 0}, flip));
                H.add(LocalOperator::hermitian({L - 1, 0, 1}, flip));
            }
            for (int j = 0; j < L; ++j) H.add(LocalOperator::hermitian({j}, c.h * z));
            for (auto [a, b] : bonds(L, boundary)) H.add(LocalOperator::hermitian({a, b}, c.J * kron(z, z)));
            break;
        }
        case ModelKind::dicke: {
            Mat h = c.J * spin_dot(spin_ops(0.5));
            for (auto [a, b] : bonds(L, boundary)) H.add(LocalOperator::hermitian({a, b}, h));
            break;
        }
        case ModelKind::xx_spin1: {
            auto s = spin_ops(1.0);
            Mat h = c.J * xy_coupling(s);
            for (auto [a, b] : bonds(L, boundary)) H.add(LocalOperator::hermitian({a, b}, h));
            double field = 10.0 * c.J;
            for (int j = 0; j < L; ++j) H.add(LocalOperator::hermitian({j}, field * s.Sz));
            break;
        }
    }
    return H;
}

Observable ModelSpec::charge(int L) const {
    Observable Q;
    if (kind == ModelKind::domain_wall) {
        Mat z = pauli_z();
        Mat wall = 0.5 * (Mat::Identity(4, 4) - kron(z, z));
        for (auto [a, b] : bonds(L, boundary)) Q.add(LocalOperator::hermitian({a, b}, wall));
        return Q;
    }
    Mat sz = spin_ops(d == 3 ? 1.0 : 0.5).Sz;
    for (int j = 0; j < L; ++j) Q.add(LocalOperator::hermitian({j}, sz));
    return Q;
}

std::optional<LocalOperator> ModelSpec::local_creation(int j, int L) const {
    const int w = j - 1;
    switch (kind) {
        case ModelKind::aklt:
        case ModelKind::xx_spin1:
        case ModelKind::dicke: return LocalOperator({w}, single_site_creation(kind));
        case ModelKind::xx_spin_half: {
            Mat sp = spin_ops(0.5).Sp;
            if (j < L) return LocalOperator({w, w + 1}, kron(sp, sp));
            if (boundary == Boundary::periodic) return LocalOperator({L - 1, 0}, kron(sp, sp));
            return std::nullopt;
        }
        case ModelKind::domain_wall: {
            Mat p = Mat::Zero(2, 2);
            p(0, 0) = 1.0;
            Mat op = kron(kron(p, spin_ops(0.5).Sp), p);
            if (j >= 2 && j <= L - 1) return LocalOperator({w - 1, w, w + 1}, op);
            if (boundary == Boundary::periodic) return LocalOperator({(w + L - 1) % L, w, (w + 1) % L}, op);
            return std::nullopt;
        }
    }
    return std::nullopt;
}

Observable ModelSpec::creation(int L) const {
    Observable J;
    for (int j = 1; j <= L; ++j) {
        auto op = local_creation(j, L);
        if (!op) continue;
        op->matrix *= phase(k, j);
        J.add(std::move(*op));
    }
    return J;
}

int ModelSpec::shifted_charge(const std::vector<int>& digits) const {
    int q_sum = 0;
    const int L = static_cast<int>(digits.size());
    if (kind == ModelKind::domain_wall) {
        for (auto [a, b] : bonds(L, boundary)) q_sum += digits[a] != digits[b];
        return q_sum;
    }
    for (int s : digits) q_sum += s;
    return q_sum;
}

double ModelSpec::min_charge(int L) const {
    switch (kind) {
        case ModelKind::aklt:
        case ModelKind::xx_spin1: return -L;
        case ModelKind::xx_spin_half:
        case ModelKind::dicke: return -0.5 * L;
        case ModelKind::domain_wall: return 0.0;
    }
    return 0.0;
}

double ModelSpec::base_charge(int L) const { return kind == ModelKind::aklt ? 0.0 : min_charge(L); }

int ModelSpec::charge_range(int L) const {
    switch (kind) {
        case ModelKind::aklt:
        case ModelKind::xx_spin1: return 2 * L;
        case ModelKind::xx_spin_half:
        case ModelKind::dicke: return L;
        case ModelKind::domain_wall: return static_cast<int>(bonds(L, boundary).size());
    }
    return L;
}

std::optional<double> ModelSpec::tower_energy(int L, int n) const {
    const auto& c = couplings;
    const int nb = static_cast<int>(bonds(L, boundary).size());
    switch (kind) {
        case ModelKind::aklt: return 2.0 * n;
        case ModelKind::xx_spin_half: return 0.0;
        case ModelKind::domain_wall: return -c.h * L + c.J * nb + n * (2 * c.h - 4 * c.J);
        case ModelKind::dicke: return c.J * nb / 4.0;
        case ModelKind::xx_spin1: return 10.0 * c.J * (2 * n - L);
    }
    return std::nullopt;
}

std::optional<double> ModelSpec::spacing() const {
    switch (kind) {
        case ModelKind::aklt: return 2.0;
        case ModelKind::xx_spin_half:
        case ModelKind::dicke: return 0.0;
        case ModelKind::domain_wall: return 2 * couplings.h - 4 * couplings.J;
        case ModelKind::xx_spin1: return 20.0 * couplings.J;
    }
    return std::nullopt;
}

std::vector<double> ModelSpec::level_charges() const {
    if (kind == ModelKind::domain_wall) return {};
    if (d == 3) return {-1.0, 0.0, 1.0};
    return {-0.5, 0.5};
}

std::vector<Mat> aklt_tensors() {
    Mat sp = Mat::Zero(2, 2), sm = Mat::Zero(2, 2), sz = Mat::Zero(2, 2);
    sp(0, 1) = 1.0;
    sm(1, 0) = 1.0;
    sz(0, 0) = 1.0;
    sz(1, 1) = -1.0;
    return {-std::sqrt(2.0 / 3.0) * sm, -std::sqrt(1.0 / 3.0) * sz, std::sqrt(2.0 / 3.0) * sp};
}

MPS aklt_mps(int L) {
    MPS mps;
    mps.boundary = Boundary::periodic;
    auto A = aklt_tensors();
    for (int j = 1; j <= L; ++j) mps.tensors.push_back({j, A});
    return mps;
}

StateVector base_state(const ModelSpec& model, int L) {
    require_length(L);
    check_size(std::vector<int>(L, model.d));
    if (model.kind == ModelKind::aklt) {
        if (model.boundary != Boundary::periodic) throw DomainError("aklt base state is built for periodic chains only");
        return contract_to_statevector(aklt_mps(L)).normalized();
    }
    return StateVector(std::vector<int>(L, model.d));
}

double residual_at(const ModelSpec& model, const StateVector& state, double energy) {
    StateVector h = apply_observable(state, model.hamiltonian(state.num_wires()));
    return (h.amps() - energy * state.amps()).norm();
}

EnergyCheck hamiltonian_residual(const ModelSpec& model, const StateVector& state) {
    for (int d : state.dims())
        if (d != model.d) throw DimensionError("state wires do not match the model's local dimension");
    StateVector h = apply_observable(state, model.hamiltonian(state.num_wires()));
    EnergyCheck e;
    e.energy = inner(state, h).real();
    e.residual = (h.amps() - e.energy * state.amps()).norm();
    return e;
}

TowerState exact_tower(const ModelSpec& model, int L, int n) {
    if (n < 0 || n > L) throw DomainError("excitation count outside 0..L");
    TowerState t;
    t.n = n;
    t.energy = model.tower_energy(L, n);
    StateVector s = base_state(model, L);
    Observable J = model.creation(L);
    for (int i = 0; i < n; ++i) s = apply_observable(s, J);
    t.norm_sq_raw = s.amps().squaredNorm();
    if (t.norm_sq_raw <= 1e-20) {
        t.annihilated = true;
        return t;
    }
    s.normalize();
    t.charge = expectation(s, model.charge(L)).real();
    t.residual = t.energy ? residual_at(model, s, *t.energy) : hamiltonian_residual(model, s).residual;
    t.state = std::move(s);
    return t;
}

std::vector<SectorWeight> charge_sector_weights(const ModelSpec& model, const StateVector& state, bool include_empty) {
    const int L = state.num_wires();
    std::map<int, double> acc;
    if (include_empty)
        for (int c = 0; c <= model.charge_range(L); ++c) acc[c] = 0.0;
    double total = state.amps().squaredNorm();
    for (std::size_t i = 0; i < state.size(); ++i) {
        double p = std::norm(state[i]);
        int c = model.shifted_charge(state.digits(i));
        acc[c] += p;
    }
    std::vector<SectorWeight> out;
    for (auto [c, p] : acc) {
        if (!include_empty && p / total <= kSectorFloor) continue;
        out.push_back({model.min_charge(L) + c, p / total});
    }
    return out;
}

MPS build_resource_mps(const ModelSpec& model, int L, double w) {
    require_length(L);
    if (!(w >= 0.0 && w <= 1.0)) throw DomainError("weight w must lie in [0, 1]");
    const double a = std::sqrt(1.0 - w), b = std::sqrt(w);
    if (model.span == 1) {
        Mat O = single_site_creation(model.kind);
        MPS base = model.kind == ModelKind::aklt ? aklt_mps(L) : product_mps(std::vector<Vec>(L, Vec::Unit(model.d, 0)));
        if (model.kind == ModelKind::aklt && model.boundary != Boundary::periodic)
            throw DomainError("aklt resource state is built for periodic chains only");
        MPS out = base;
        for (int j = 1; j <= L; ++j) {
            const auto& A = base.tensors[j - 1].data;
            auto& C = out.tensors[j - 1].data;
            cplx ph = phase(model.k, j);
            for (int s = 0; s < model.d; ++s) {
                Mat B = Mat::Zero(A[0].rows(), A[0].cols());
                for (int mu = 0; mu < model.d; ++mu)
                    if (O(s, mu) != 0.0) B += O(s, mu) * A[mu];
                C[s] = a * A[s] + ph * b * B;
            }
        }
        return out;
    }
    if (model.kind == ModelKind::xx_spin_half && model.boundary == Boundary::open) {
        MPS out;
        out.boundary = Boundary::open;
        for (int j = 1; j <= L; ++j) {
            Mat c0 = Mat::Zero(2, 2), c1 = Mat::Zero(2, 2);
            c0(0, 0) = a;
            c1(1, 0) = a;
            c1(0, 1) = phase(model.k, j) * b;
            out.tensors.push_back({j, {c0, c1}});
        }
        out.left = Vec::Unit(2, 0);
        out.right = Vec::Unit(2, 0);
        return out;
    }
    return apply_mpo(mpo_from_product(model, L, w), product_mps(std::vector<Vec>(L, Vec::Unit(model.d, 0))));
}

MPO mpo_from_product(const ModelSpec& model, int L, double w) {
    require_length(L);
    if (!(w >= 0.0 && w <= 1.0)) throw DomainError("weight w must lie in [0, 1]");
    if (model.span > 3) throw DomainError("unsupported creation-operator support size");
    const double a = std::sqrt(1.0 - w), b = std::sqrt(w);
    std::vector<Gate> gates;
    for (int j = 1; j <= L; ++j) {
        auto op = model.local_creation(j, L);
        if (!op) {
            gates.push_back({0, 0, Mat::Constant(1, 1, a)});
            continue;
        }
        int first = op->support.front();
        for (std::size_t t = 1; t < op->support.size(); ++t)
            if (op->support[t] != first + static_cast<int>(t))
                throw DomainError("product MPO needs creation operators on consecutive open-chain sites");
        Mat R = a * Mat::Identity(op->matrix.rows(), op->matrix.cols()) + phase(model.k, j) * b * op->matrix;
        gates.push_back({first, static_cast<int>(op->support.size()), R});
    }
    return mpo_from_gates(L, model.d, gates);
}

StateVector resource_state(const ModelSpec& model, int L, double w) {
    return contract_to_statevector(build_resource_mps(model, L, w)).normalized();
}

}  // namespace scartower
