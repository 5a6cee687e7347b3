#include "scartower/charge.hpp"

#include <cmath>
#include <map>
#include <numeric>

namespace scartower {

Projection project_charge(const StateVector& state, const ModelSpec& model, double charge) {
    const int L = state.num_wires();
    double shifted = charge - model.min_charge(L);
    long target = std::lround(shifted);
    if (std::abs(shifted - static_cast<double>(target)) > 1e-8 || target < 0 || target > model.charge_range(L))
        throw DomainError("charge value is not on the model's charge lattice");
    Vec a = Vec::Zero(static_cast<Eigen::Index>(state.size()));
    for (std::size_t i = 0; i < state.size(); ++i)
        if (model.shifted_charge(state.digits(i)) == target) a[static_cast<Eigen::Index>(i)] = state[i];
    Projection p;
    p.probability = a.squaredNorm() / state.amps().squaredNorm();
    if (p.probability < kSectorFloor) {
        p.empty = true;
        return p;
    }
    p.post_state = StateVector(state.dims(), a.normalized(), state.roles());
    return p;
}

std::vector<SectorEntry> sector_decompose(const StateVector& state, const ModelSpec& model) {
    const int L = state.num_wires();
    std::map<int, Vec> parts;
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (state[i] == 0.0) continue;
        int c = model.shifted_charge(state.digits(i));
        auto it = parts.find(c);
        if (it == parts.end()) it = parts.emplace(c, Vec::Zero(static_cast<Eigen::Index>(state.size()))).first;
        it->second[static_cast<Eigen::Index>(i)] = state[i];
    }
    const double total = state.amps().squaredNorm();
    std::vector<SectorEntry> out;
    for (auto& [c, v] : parts) {
        SectorEntry e;
        e.shifted = c;
        e.charge = model.min_charge(L) + c;
        e.probability = v.squaredNorm() / total;
        if (e.probability < kSectorFloor) continue;
        e.post_state = StateVector(state.dims(), v.normalized(), state.roles());
        out.push_back(std::move(e));
    }
    return out;
}

std::size_t register_value(std::size_t tail, int m) {
    std::size_t v = 0;
    for (int l = 0; l < m; ++l) v |= ((tail >> (m - 1 - l)) & 1u) << l;
    return v;
}

Mat inverse_qft(int m) {
    const Eigen::Index M = Eigen::Index(1) << m;
    Mat f(M, M);
    for (Eigen::Index j = 0; j < M; ++j)
        for (Eigen::Index k = 0; k < M; ++k)
            f(j, k) = std::polar(1.0 / std::sqrt(static_cast<double>(M)), -2 * kPi * static_cast<double>((j * k) % M) / M);
    return f;
}

PEACircuit pea_circuit(const StateVector& state, const ModelSpec& model, const PEAConfig& config) {
    if (config.m < 1 || config.m > 10) throw DomainError("ancilla count must be in 1..10");
    const int L = state.num_wires();
    PEACircuit c;
    c.system_wires = L;
    c.m = config.m;
    c.offset = config.charge_offset.value_or(-model.min_charge(L));
    c.aliasing = (1 << config.m) <= model.charge_range(L);
    StateVector s = state.append_wires(std::vector<int>(config.m, 2), WireRole::ancilla);
    Mat h(2, 2);
    h << 1, 1, 1, -1;
    h /= std::sqrt(2.0);
    for (int l = 0; l < config.m; ++l) s = apply_local(s, LocalOperator({L + l}, h));

    Observable Q = model.charge(L);
    std::vector<int> order = config.factor_order;
    if (order.empty()) {
        order.resize(Q.terms.size());
        std::iota(order.begin(), order.end(), 0);
    }
    if (order.size() != Q.terms.size()) throw DimensionError("factor order does not match the charge terms");
    const double M = static_cast<double>(1 << config.m);
    for (int l = 0; l < config.m; ++l) {
        const double theta = 2 * kPi * static_cast<double>(1 << l) / M;
        std::vector<LocalOperator> factors;
        for (std::size_t t = 0; t < order.size(); ++t) {
            const auto& term = Q.terms[static_cast<std::size_t>(order[t])];
            Mat u = Mat::Zero(term.matrix.rows(), term.matrix.cols());
            for (Eigen::Index i = 0; i < u.rows(); ++i) u(i, i) = std::polar(1.0, theta * term.matrix(i, i).real());
            if (t == 0) u *= std::polar(1.0, theta * c.offset);
            factors.emplace_back(term.support, std::move(u));
        }
        s = controlled_apply(s, L + l, factors);
    }
    std::vector<int> reg;
    for (int l = config.m - 1; l >= 0; --l) reg.push_back(L + l);
    s = apply_local(s, LocalOperator(reg, inverse_qft(config.m)));

    const std::size_t R = std::size_t(1) << config.m;
    c.readout_probability.assign(R, 0.0);
    for (std::size_t i = 0; i < s.size(); ++i) c.readout_probability[register_value(i % R, config.m)] += std::norm(s[i]);
    c.state = std::move(s);
    return c;
}

PEAOutcome pea_branch(const PEACircuit& c, int value) {
    const std::size_t R = std::size_t(1) << c.m;
    PEAOutcome o;
    o.charge_mod = value;
    for (int l = 0; l < c.m; ++l) o.bits.push_back((value >> l) & 1);
    o.probability = c.readout_probability[static_cast<std::size_t>(value)];
    if (o.probability < kSectorFloor) return o;
    const std::size_t N = c.state.size() / R;
    Vec a(static_cast<Eigen::Index>(N));
    const std::size_t tail = register_value(static_cast<std::size_t>(value), c.m);
    for (std::size_t i = 0; i < N; ++i) a[static_cast<Eigen::Index>(i)] = c.state[i * R + tail];
    std::vector<int> dims(c.state.dims().begin(), c.state.dims().begin() + c.system_wires);
    std::vector<WireRole> roles(c.state.roles().begin(), c.state.roles().begin() + c.system_wires);
    o.post_state = StateVector(dims, a.normalized(), roles);
    return o;
}

PEAOutcome pea_sample(const PEACircuit& c, Rng& rng) {
    double total = std::accumulate(c.readout_probability.begin(), c.readout_probability.end(), 0.0);
    double r = rng.uniform() * total, acc = 0.0;
    int pick = static_cast<int>(c.readout_probability.size()) - 1;
    for (std::size_t v = 0; v < c.readout_probability.size(); ++v) {
        acc += c.readout_probability[v];
        if (r < acc) {
            pick = static_cast<int>(v);
            break;
        }
    }
    while (pick > 0 && c.readout_probability[static_cast<std::size_t>(pick)] < kSectorFloor) --pick;
    if (c.readout_probability[static_cast<std::size_t>(pick)] < kSectorFloor)
        throw NumericalError("sampled sector below probability floor");
    return pea_branch(c, pick);
}

PEAOutcome phase_estimate(const StateVector& state, const ModelSpec& model, const PEAConfig& config) {
    Rng rng(config.seed);
    return pea_sample(pea_circuit(state, model, config), rng);
}

}  // namespace scartower
