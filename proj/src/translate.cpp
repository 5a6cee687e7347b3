#include "scartower/translate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace scartower {

namespace {

// Cyclic shift of the listed chain wires by `power` sites, restricted to the
// control-|1> slice when control >= 0.
StateVector shift_chain(const StateVector& state, const std::vector<int>& chain, int control, int power) {
    const int L = static_cast<int>(chain.size());
    const int r = ((power % L) + L) % L;
    if (r == 0) return state;
    for (int w : chain)
        if (state.dims()[w] != state.dims()[chain[0]]) throw DimensionError("chain wires must share one qudit dimension");
    const auto strides = state.strides();
    Vec out = state.amps();
    std::vector<int> dg;
    for (std::size_t i = 0; i < state.size(); ++i) {
        dg = state.digits(i);
        if (control >= 0 && dg[control] == 0) continue;
        // Output wire chain[j] reads input wire chain[j + r].
        std::size_t src = i;
        for (int j = 0; j < L; ++j) {
            int w = chain[(j + r) % L];
            src = src - strides[w] * static_cast<std::size_t>(dg[w]) + strides[w] * static_cast<std::size_t>(dg[chain[j]]);
        }
        out[static_cast<Eigen::Index>(i)] = state[src];
    }
    return StateVector(state.dims(), std::move(out), state.roles());
}

std::vector<int> chain_wires(const StateVector& state, int control) {
    std::vector<int> chain;
    for (int w = 0; w < state.num_wires(); ++w)
        if (w != control) chain.push_back(w);
    return chain;
}

Mat swap_matrix(int d) {
    Mat s = Mat::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) s(j * d + i, i * d + j) = 1.0;
    return s;
}

Mat hadamard() {
    Mat h(2, 2);
    h << 1, 1, 1, -1;
    return h / std::sqrt(2.0);
}

// Columns are the Bell states (I x X^a Z^b) sum_i |ii>/sqrt(d), column a*d+b.
Mat bell_basis(int d) {
    Mat v = Mat::Zero(d * d, d * d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            Mat p = qudit_pauli(d, a, b);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) v(i * d + j, a * d + b) = p(j, i) / std::sqrt(static_cast<double>(d));
        }
    return v;
}

struct ProtocolPrep {
    StateVector state;  // after swaps and the Bell-basis rotation
    int L = 0, d = 0, control = 0, n = 0;
    std::vector<int> sys;
    int x(int p) const { return sys[static_cast<std::size_t>(L - p)]; }  // protocol site p (1-based)
    int a(int k) const { return n + 2 * (k - 1); }
    int b(int k) const { return n + 2 * (k - 1) + 1; }
    std::vector<int> measured() const {
        std::vector<int> w;
        for (int k = 1; k <= L - 2; ++k) {
            w.push_back(b(k));
            w.push_back(x(k + 1));
        }
        return w;
    }
};

// The chain is read in reverse (protocol site p sits on chain wire L-p) so that
// the protocol realizes T rather than its inverse.
ProtocolPrep protocol_prepare(const StateVector& state, int control) {
    if (control < 0 || control >= state.num_wires() || state.dims()[control] != 2)
        throw DimensionError("control wire must be a qubit inside the state");
    ProtocolPrep P;
    P.control = control;
    P.n = state.num_wires();
    P.sys = chain_wires(state, control);
    P.L = static_cast<int>(P.sys.size());
    if (P.L < 3) throw DomainError("protocol needs at least three chain sites");
    P.d = state.dims()[P.sys[0]];
    for (int w : P.sys)
        if (state.dims()[w] != P.d) throw DimensionError("mixed qudit dimensions on the chain");
    const int d = P.d;
    std::vector<int> dims = state.dims();
    std::vector<WireRole> roles = state.roles();
    roles[control] = WireRole::control;
    Vec phi = Vec::Zero(d * d);
    for (int i = 0; i < d; ++i) phi[i * d + i] = 1.0 / std::sqrt(static_cast<double>(d));
    Vec amps = state.amps();
    for (int k = 1; k <= P.L - 2; ++k) {
        dims.push_back(d);
        dims.push_back(d);
        roles.push_back(WireRole::bell_half);
        roles.push_back(WireRole::bell_half);
        check_size(dims);
        amps = kron(amps, phi);
    }
    StateVector s(dims, std::move(amps), roles);
    const Mat sw = swap_matrix(d);
    std::vector<LocalOperator> cu;
    for (int k = 1; k <= P.L - 2; ++k) cu.emplace_back(std::vector<int>{P.a(k), P.x(k)}, sw);
    cu.emplace_back(std::vector<int>{P.x(P.L - 1), P.x(P.L)}, sw);
    s = controlled_apply(s, control, cu);
    const Mat vt = bell_basis(d).adjoint();
    for (int k = 1; k <= P.L - 2; ++k) s = apply_local(s, LocalOperator({P.b(k), P.x(k + 1)}, vt));
    P.state = std::move(s);
    return P;
}

StateVector protocol_finish(const ProtocolPrep& P, const std::vector<int>& outcomes, double* probability) {
    const int d = P.d;
    if (static_cast<int>(outcomes.size()) != P.L - 2) throw DimensionError("one Bell outcome per pair is required");
    std::vector<int> wires = P.measured(), values;
    for (int o : outcomes) {
        if (o < 0 || o >= d * d) throw DimensionError("Bell outcome out of range");
        values.push_back(o / d);
        values.push_back(o % d);
    }
    StateVector s = fix_wires(P.state, wires, values);
    // Surviving big-state wire ids, in order.
    std::vector<int> alive;
    for (int w = 0; w < P.state.num_wires(); ++w)
        if (std::find(wires.begin(), wires.end(), w) == wires.end()) alive.push_back(w);
    auto pos = [&](int big) { return static_cast<int>(std::find(alive.begin(), alive.end(), big) - alive.begin()); };
    const int ctl = pos(P.control);

    double prob = s.amps().squaredNorm() / P.state.amps().squaredNorm();
    if (probability) *probability = prob;
    if (prob < kSectorFloor) throw NumericalError("Bell branch below probability floor");

    Mat x = Mat::Zero(2, 2);
    x(0, 1) = x(1, 0) = 1.0;
    // Control 0: Pauli feedback on each a_k.
    std::vector<LocalOperator> zero_ops, one_ops;
    for (int k = 1; k <= P.L - 2; ++k) {
        int o = outcomes[static_cast<std::size_t>(k - 1)];
        Mat p = qudit_pauli(d, o / d, o % d);
        zero_ops.emplace_back(std::vector<int>{pos(P.a(k))}, p);
        one_ops.emplace_back(std::vector<int>{pos(P.x(1))}, p);
    }
    s = apply_local(s, LocalOperator({ctl}, x));
    s = controlled_apply(s, ctl, zero_ops);
    s = apply_local(s, LocalOperator({ctl}, x));
    s = controlled_apply(s, ctl, one_ops);

    // Output register: protocol position 1 <- x_1, k+1 <- a_k, L <- x_L.
    std::vector<int> order(static_cast<std::size_t>(P.n));
    for (int w = 0; w < P.n; ++w) {
        if (w == P.control) {
            order[w] = ctl;
            continue;
        }
        int i = static_cast<int>(std::find(P.sys.begin(), P.sys.end(), w) - P.sys.begin());
        int p = P.L - i;
        int src = p == 1 ? P.x(1) : (p == P.L ? P.x(P.L) : P.a(p - 1));
        order[w] = pos(src);
    }
    StateVector out = permute_wires(s, order);
    out.normalize();
    return out;
}

}  // namespace

StateVector translate(const StateVector& state, int power) {
    std::vector<int> chain(static_cast<std::size_t>(state.num_wires()));
    std::iota(chain.begin(), chain.end(), 0);
    return shift_chain(state, chain, -1, power);
}

Mat translation_matrix(int L, int d) {
    check_size(std::vector<int>(L, d));
    std::vector<int> dims(L, d);
    StateVector probe(dims);
    Eigen::Index N = static_cast<Eigen::Index>(probe.size());
    Mat t(N, N);
    for (Eigen::Index c = 0; c < N; ++c) t.col(c) = translate(StateVector(dims, Vec::Unit(N, c))).amps();
    return t;
}

StateVector controlled_translate(const StateVector& state, int control, TranslateMode mode, Rng& rng) {
    if (control < 0 || control >= state.num_wires() || state.dims()[control] != 2)
        throw DimensionError("control wire must be a qubit inside the state");
    if (mode == TranslateMode::direct) return shift_chain(state, chain_wires(state, control), control, 1);
    ProtocolPrep P = protocol_prepare(state, control);
    // Joint distribution of all Bell readouts.
    const auto wires = P.measured();
    const int d = P.d;
    const std::size_t combos = static_cast<std::size_t>(protocol_branch_count(P.L, d));
    std::vector<double> prob(combos, 0.0);
    for (std::size_t i = 0; i < P.state.size(); ++i) {
        double w = std::norm(P.state[i]);
        if (w == 0.0) continue;
        auto dg = P.state.digits(i);
        std::size_t key = 0;
        for (int wire : wires) key = key * d + dg[wire];
        prob[key] += w;
    }
    double total = std::accumulate(prob.begin(), prob.end(), 0.0);
    double r = rng.uniform() * total, acc = 0.0;
    std::size_t pick = combos - 1;
    for (std::size_t c = 0; c < combos; ++c) {
        acc += prob[c];
        if (r < acc) {
            pick = c;
            break;
        }
    }
    while (pick > 0 && prob[pick] < kSectorFloor * total) --pick;
    std::vector<int> outcomes(static_cast<std::size_t>(P.L - 2));
    for (int k = P.L - 2; k >= 1; --k) {
        outcomes[static_cast<std::size_t>(k - 1)] = static_cast<int>(pick % static_cast<std::size_t>(d * d));
        pick /= static_cast<std::size_t>(d * d);
    }
    return protocol_finish(P, outcomes, nullptr);
}

StateVector protocol_branch(const StateVector& state, int control, const std::vector<int>& outcomes, double* probability) {
    return protocol_finish(protocol_prepare(state, control), outcomes, probability);
}

int protocol_branch_count(int L, int d) {
    long long n = 1;
    for (int k = 0; k < 2 * (L - 2); ++k) n *= d;
    return static_cast<int>(n);
}

StateVector momentum_project(const StateVector& state, int p) {
    const int L = state.num_wires();
    Vec acc = Vec::Zero(static_cast<Eigen::Index>(state.size()));
    StateVector cur = state;
    for (int r = 0; r < L; ++r) {
        acc += std::polar(1.0 / L, -2 * kPi * static_cast<double>(p) * r / L) * cur.amps();
        cur = translate(cur);
    }
    return StateVector(state.dims(), std::move(acc), state.roles());
}

std::vector<ParityResult> momentum_parity_branches(const StateVector& state) {
    const int L = state.num_wires();
    // Weight outside T = +-1 is the weight outside T^2 = 1; average over powers of T^2.
    const int period = L / std::gcd(L, 2);
    Vec avg = state.amps();
    StateVector cur = state;
    for (int r = 1; r < period; ++r) {
        cur = translate(cur, 2);
        avg += cur.amps();
    }
    double off = std::max(0.0, state.amps().squaredNorm() - (avg / period).squaredNorm());
    StateVector s = state.append_wires({2}, WireRole::ancilla);
    const Mat h = hadamard();
    s = apply_local(s, LocalOperator({L}, h));
    s = shift_chain(s, chain_wires(s, L), L, 1);
    s = apply_local(s, LocalOperator({L}, h));
    std::vector<ParityResult> out(2);
    for (int bit = 0; bit < 2; ++bit) {
        StateVector branch = fix_wires(s, {L}, {bit});
        ParityResult& r = out[static_cast<std::size_t>(bit)];
        r.bit = bit;
        r.off_axis_weight = off;
        r.warning = off > 1e-10;
        r.probability = branch.amps().squaredNorm() / state.amps().squaredNorm();
        if (r.probability >= kSectorFloor) r.post_state = branch.normalized();
    }
    return out;
}

ParityResult momentum_parity_measure(const StateVector& state, Rng& rng) {
    auto br = momentum_parity_branches(state);
    int bit = rng.uniform() < br[0].probability ? 0 : 1;
    if (br[static_cast<std::size_t>(bit)].probability < kSectorFloor) bit = 1 - bit;
    return br[static_cast<std::size_t>(bit)];
}

MomentumPEA momentum_pea_circuit(const StateVector& state, int m) {
    const int L = state.num_wires();
    if (m < 1 || (1 << m) != L) throw DomainError("momentum phase estimation needs L = 2^m");
    StateVector s = state.append_wires(std::vector<int>(m, 2), WireRole::ancilla);
    std::vector<int> chain(static_cast<std::size_t>(L));
    std::iota(chain.begin(), chain.end(), 0);
    const Mat h = hadamard();
    for (int l = 0; l < m; ++l) s = apply_local(s, LocalOperator({L + l}, h));
    for (int l = 0; l < m; ++l) s = shift_chain(s, chain, L + l, 1 << l);
    std::vector<int> reg;
    for (int l = m - 1; l >= 0; --l) reg.push_back(L + l);
    s = apply_local(s, LocalOperator(reg, inverse_qft(m)));
    MomentumPEA out;
    out.m = m;
    const std::size_t R = std::size_t(1) << m;
    out.readout_probability.assign(R, 0.0);
    for (std::size_t i = 0; i < s.size(); ++i) out.readout_probability[register_value(i % R, m)] += std::norm(s[i]);
    out.pre_measure = std::move(s);
    return out;
}

PEAOutcome momentum_pea(const StateVector& state, int m, Rng& rng) {
    MomentumPEA c = momentum_pea_circuit(state, m);
    PEACircuit pc;
    pc.state = std::move(c.pre_measure);
    pc.system_wires = state.num_wires();
    pc.m = m;
    pc.readout_probability = std::move(c.readout_probability);
    return pea_sample(pc, rng);
}

}  // namespace scartower
