#include "scartower/arovas.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace scartower {

namespace {

Mat heisenberg_bond() {
    const SpinOps s = spin_ops(1.0);
    return kron(s.Sz, s.Sz) + 0.5 * (kron(s.Sp, s.Sm) + kron(s.Sm, s.Sp));
}

// exp(i theta B) for hermitian B through its eigenbasis.
Mat exp_i(const Mat& B, double theta) {
    Eigen::SelfAdjointEigenSolver<Mat> es(B);
    Vec ph(B.rows());
    for (Eigen::Index i = 0; i < B.rows(); ++i) ph[i] = std::polar(1.0, theta * es.eigenvalues()[i]);
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

void check_even(int L) {
    if (L < 4 || L % 2) throw DomainError("Arovas construction needs an even periodic chain with L >= 4");
}

StateVector aklt_ground(int L) { return contract_to_statevector(aklt_mps(L)).normalized(); }

std::vector<int> bond_support(int j, int L) { return {j - 1, j % L}; }

}  // namespace

Observable arovas_creation(int L) {
    check_even(L);
    const Mat b = heisenberg_bond();
    Observable J;
    for (int j = 1; j <= L; ++j) J.add(LocalOperator::hermitian(bond_support(j, L), (j % 2 ? -1.0 : 1.0) * b));
    return J;
}

ArovasOracle arovas_oracle(int L) {
    check_even(L);
    check_size(std::vector<int>(L, 3));
    StateVector raw = apply_observable(aklt_ground(L), arovas_creation(L));
    ArovasOracle o;
    o.raw_norm = raw.norm();
    if (o.raw_norm < 1e-12) throw NumericalError("creation operator annihilates the ground state");
    o.state = raw.normalized();
    const ModelSpec aklt = make_model("aklt");
    EnergyCheck e = hamiltonian_residual(aklt, o.state);
    o.energy = e.energy;
    o.residual = e.residual;
    o.translation = inner(o.state, translate(o.state)).real();
    o.charge = expectation(o.state, aklt.charge(L)).real();
    return o;
}

TrotterPlan make_trotter_plan(int L, double alpha) {
    check_even(L);
    TrotterPlan p;
    p.L = L;
    p.alpha = alpha;
    for (int j = 1; j <= L; ++j) (j % 2 ? p.odd_bonds : p.even_bonds).push_back(j);
    const Mat b = heisenberg_bond();
    p.even_half = exp_i(b, alpha / 2);
    p.odd_full = exp_i(b, -alpha);
    return p;
}

StateVector trotter_u(const TrotterPlan& plan, const StateVector& state) {
    if (state.num_wires() != plan.L) throw DimensionError("state length does not match the Trotter plan");
    StateVector s = state;
    for (int j : plan.even_bonds) s = apply_local(s, LocalOperator(bond_support(j, plan.L), plan.even_half));
    for (int j : plan.odd_bonds) s = apply_local(s, LocalOperator(bond_support(j, plan.L), plan.odd_full));
    for (int j : plan.even_bonds) s = apply_local(s, LocalOperator(bond_support(j, plan.L), plan.even_half));
    return s;
}

RepeatReport prepare_arovas(int L, double alpha, int max_rounds, Rng& rng) {
    if (max_rounds < 1) throw DomainError("max_rounds must be at least 1");
    if (alpha < 0.0) throw DomainError("alpha must be non-negative");
    const TrotterPlan plan = make_trotter_plan(L, alpha);
    StateVector psi = aklt_ground(L);
    RepeatReport rep;
    for (int r = 1; r <= max_rounds; ++r) {
        rep.rounds_used = r;
        ParityResult pr = momentum_parity_measure(trotter_u(plan, psi), rng);
        psi = pr.post_state;
        if (pr.bit == 1) {
            rep.succeeded = true;
            break;
        }
    }
    rep.final_state = psi;
    if (rep.succeeded) {
        rep.fidelity_to_oracle = std::min(1.0, fidelity(arovas_oracle(L).state, psi));
        rep.error = 1.0 - rep.fidelity_to_oracle;
    }
    return rep;
}

double round_success_probability(int L, double alpha) {
    const TrotterPlan plan = make_trotter_plan(L, alpha);
    return momentum_parity_branches(trotter_u(plan, aklt_ground(L)))[1].probability;
}

double failed_round_fidelity(int L, double alpha) {
    const TrotterPlan plan = make_trotter_plan(L, alpha);
    const StateVector g = aklt_ground(L);
    auto br = momentum_parity_branches(trotter_u(plan, g));
    return fidelity(g, br[0].post_state);
}

RoundStatistics exact_round_statistics(int L, double alpha, int max_rounds) {
    if (max_rounds < 1) throw DomainError("max_rounds must be at least 1");
    const TrotterPlan plan = make_trotter_plan(L, alpha);
    const StateVector target = arovas_oracle(L).state;
    StateVector psi = aklt_ground(L);
    RoundStatistics st;
    st.max_rounds = max_rounds;
    double alive = 1.0, rounds = 0.0, err = 0.0;
    for (int r = 1; r <= max_rounds; ++r) {
        auto br = momentum_parity_branches(trotter_u(plan, psi));
        const double p = br[1].probability;
        const double e = p > kSectorFloor ? 1.0 - std::min(1.0, fidelity(target, br[1].post_state)) : 1.0;
        st.success_prob.push_back(p);
        st.success_error.push_back(e);
        const double first = alive * p;
        st.success_within += first;
        rounds += r * first;
        err += e * first;
        alive *= 1.0 - p;
        if (br[0].probability <= kSectorFloor) break;
        psi = br[0].post_state;
    }
    st.p_first = st.success_prob.front();
    st.mean_rounds = rounds + alive * max_rounds;
    if (st.success_within > 0.0) {
        st.mean_rounds_success = rounds / st.success_within;
        st.mean_error = err / st.success_within;
    }
    return st;
}

}  // namespace scartower
