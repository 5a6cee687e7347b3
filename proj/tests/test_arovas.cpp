#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "scartower/arovas.hpp"

#include <cmath>

using namespace scartower;

namespace {

Mat dot_ss() {
    oracle::Spin s = oracle::spin(1.0);
    Mat sx = 0.5 * (s.p + s.m), sy = cplx(0, -0.5) * (s.p - s.m);
    return oracle::kron(sx, sx) + oracle::kron(sy, sy) + oracle::kron(s.z, s.z);
}

// Bond (j, j+1), 1-based, periodic.
Mat bond(int L, int j) {
    std::vector<int> dims(static_cast<std::size_t>(L), 3);
    return oracle::embed(dims, {j - 1, j % L}, dot_ss());
}

Mat sign_sum(int L, int parity) {
    const auto N = static_cast<Eigen::Index>(std::pow(3, L));
    Mat out = Mat::Zero(N, N);
    for (int j = 1; j <= L; ++j)
        if (j % 2 == parity) out += (j % 2 ? -1.0 : 1.0) * bond(L, j);
    return out;
}

Mat expi(const Mat& h, double t) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    Vec ph = (cplx(0, t) * es.eigenvalues().cast<cplx>()).array().exp();
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

struct Dense {
    Mat creation, trotter, exact;
};

Dense dense(int L, double a) {
    Mat e = sign_sum(L, 0), o = sign_sum(L, 1);
    return {e + o, expi(e, a / 2) * expi(o, a) * expi(e, a / 2), expi(e + o, a)};
}

Vec aklt(int L) { return oracle::ground_state(oracle::dense_aklt_hamiltonian(L)); }

}  // namespace

TEST_CASE("oracle state is an eigenstate at momentum pi") {
    for (int L : {4, 6}) {
        ArovasOracle o = arovas_oracle(L);
        Vec ref = dense(L, 0.0).creation * aklt(L);
        CHECK(o.raw_norm == doctest::Approx(ref.norm()).epsilon(1e-10));
        CHECK(oracle::fidelity(ref, o.state.amps()) > 1 - 1e-10);
        Mat H = oracle::dense_aklt_hamiltonian(L);
        Vec a = o.state.amps();
        CHECK(((H * a) - o.energy * a).norm() < 1e-8);
        CHECK(o.residual < 1e-8);
        CHECK(o.translation == doctest::Approx(-1.0));
        CHECK(std::abs(o.charge) < 1e-10);
    }
    CHECK_THROWS_AS(arovas_oracle(5), DomainError);
    CHECK_THROWS_AS(arovas_oracle(2), DomainError);
}

TEST_CASE("Trotter step equals the dense split product") {
    Rng rng(3);
    for (int L : {4, 6}) {
        const double a = 0.3;
        Dense d = dense(L, a);
        TrotterPlan plan = make_trotter_plan(L, a);
        StateVector psi = random_state(std::vector<int>(L, 3), rng);
        CHECK((trotter_u(plan, psi).amps() - d.trotter * psi.amps()).norm() < 1e-10);
    }
}

TEST_CASE("Trotter error on AKLT is third order") {
    const int L = 4;
    Vec g = aklt(L);
    std::vector<double> err;
    for (double a : {0.2, 0.1, 0.05}) {
        Dense d = dense(L, a);
        err.push_back((d.trotter * g - d.exact * g).norm());
    }
    CHECK(err[0] / err[1] > 7.0);
    CHECK(err[1] / err[2] > 7.5);
}

TEST_CASE("weak step puts i alpha J on the pi sector") {
    const int L = 4;
    Vec g = aklt(L);
    Mat J = dense(L, 0.0).creation;
    std::vector<double> defect;
    for (double a : {0.08, 0.04, 0.02}) {
        StateVector out = trotter_u(make_trotter_plan(L, a), StateVector(std::vector<int>(L, 3), g));
        Vec pi = out.amps() - g * g.dot(out.amps());
        defect.push_back((pi - cplx(0, a) * J * g).norm());
    }
    // second order in alpha
    CHECK(defect[0] / defect[1] > 3.5);
    CHECK(defect[1] / defect[2] > 3.5);
    CHECK(defect[0] < 0.08 * 0.08 * 10);
}

TEST_CASE("round probabilities match the momentum projector") {
    const int L = 4;
    Vec g = aklt(L);
    Mat T = oracle::translation(L, 3);
    const auto N = T.rows();
    Mat proj_pi = 0.5 * (Mat::Identity(N, N) - T);
    for (double a : {0.04, 0.16}) {
        Vec u = dense(L, a).trotter * g;
        double p1 = (proj_pi * u).squaredNorm();
        CHECK(round_success_probability(L, a) == doctest::Approx(p1).epsilon(1e-9));
        Vec fail = (u - proj_pi * u).normalized();
        CHECK(failed_round_fidelity(L, a) == doctest::Approx(oracle::fidelity(fail, g)).epsilon(1e-9));
    }
    for (double a : {0.04, 0.08}) CHECK(failed_round_fidelity(6, a) >= 1 - 10 * a * a * a);
}

TEST_CASE("Trotter step is unitary") {
    TrotterPlan plan = make_trotter_plan(4, 0.37);
    for (std::uint64_t k = 0; k < 100; ++k) {
        Rng rng(11, k);
        StateVector psi = random_state(std::vector<int>(4, 3), rng);
        CHECK(std::abs(trotter_u(plan, psi).amps().norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("repeat until success") {
    Rng rng(1);
    RepeatReport none = prepare_arovas(4, 0.0, 5, rng);
    CHECK_FALSE(none.succeeded);
    CHECK(none.rounds_used == 5);
    int wins = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        Rng r(2, s);
        RepeatReport rep = prepare_arovas(4, 0.3, 200, r);
        if (!rep.succeeded) continue;
        ++wins;
        CHECK(rep.rounds_used >= 1);
        CHECK(rep.error == doctest::Approx(1 - rep.fidelity_to_oracle));
        ArovasOracle o = arovas_oracle(4);
        CHECK(rep.fidelity_to_oracle == doctest::Approx(fidelity(rep.final_state, o.state)).epsilon(1e-10));
    }
    CHECK(wins > 0);
}

TEST_CASE("exact round statistics agree with sampled runs") {
    RoundStatistics one = exact_round_statistics(4, 0.3, 1);
    CHECK(one.success_within == doctest::Approx(round_success_probability(4, 0.3)).epsilon(1e-10));
    CHECK(one.mean_rounds == doctest::Approx(1.0));
    const int cap = 30, seeds = 2000;
    RoundStatistics st = exact_round_statistics(4, 0.3, cap);
    double rounds = 0.0, err = 0.0;
    int ok = 0;
    for (std::uint64_t s = 0; s < seeds; ++s) {
        Rng r(7, s);
        RepeatReport rep = prepare_arovas(4, 0.3, cap, r);
        rounds += rep.rounds_used;
        if (rep.succeeded) {
            ++ok;
            err += rep.error;
        }
    }
    // binomial and geometric spreads at 2000 samples
    CHECK(std::abs(ok / double(seeds) - st.success_within) < 4 * std::sqrt(0.25 / seeds));
    CHECK(std::abs(rounds / seeds - st.mean_rounds) < 4 * cap / std::sqrt(double(seeds)));
    CHECK(std::abs(err / ok - st.mean_error) < 0.1 * st.mean_error + 1e-3);
}
