#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "scartower/core.hpp"

#include <cmath>

using namespace scartower;

TEST_CASE("mixed radix digits with wire 0 most significant") {
    std::vector<int> dims{2, 3, 2};
    StateVector s(dims);
    CHECK(s.size() == 12);
    CHECK(s.index({1, 2, 0}) == 1 * 6 + 2 * 2 + 0);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(s.index(s.digits(i)) == i);
    StateVector b = StateVector::basis(dims, {0, 1, 1});
    CHECK(std::abs(b[3] - cplx(1.0)) < 1e-15);
}

TEST_CASE("apply_local matches the dense embedding") {
    Rng rng(11);
    std::vector<int> dims{2, 3, 2, 3};
    const std::vector<std::vector<int>> supports{{0}, {1}, {3, 1}, {0, 2}, {2, 0, 3}, {3, 2, 1, 0}};
    for (const auto& sup : supports) {
        int local = 1;
        for (int w : sup) local *= dims[w];
        Mat m = Mat::Random(local, local);
        StateVector psi = random_state(dims, rng);
        Vec expect = oracle::embed(dims, sup, m) * psi.amps();
        StateVector got = apply_local(psi, LocalOperator(sup, m));
        CHECK((got.amps() - expect).norm() < 1e-12);
    }
}

TEST_CASE("controlled_apply acts only on the control-one slice") {
    Rng rng(3);
    std::vector<int> dims{2, 2, 3};
    Mat u1 = random_unitary(2, rng), u2 = random_unitary(6, rng);
    StateVector psi = random_state(dims, rng);
    StateVector got = controlled_apply(psi, 0, {LocalOperator({1}, u1), LocalOperator({1, 2}, u2)});
    Mat p0 = Mat::Zero(2, 2), p1 = Mat::Zero(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    Mat U = oracle::embed(dims, {1, 2}, u2) * oracle::embed(dims, {1}, u1);
    Mat full = oracle::embed(dims, {0}, p0) + oracle::embed(dims, {0}, p1) * U;
    CHECK((got.amps() - full * psi.amps()).norm() < 1e-12);
}

TEST_CASE("unitary evolution preserves the norm") {
    Rng rng(5);
    std::vector<int> dims{3, 2, 3, 2};
    for (int t = 0; t < 100; ++t) {
        StateVector psi = random_state(dims, rng);
        Mat u = random_unitary(6, rng);
        StateVector out = apply_local(psi, LocalOperator::unitary({t % 4, (t + 1) % 4}, dims[t % 4] * dims[(t + 1) % 4] == 6 ? u : Mat(random_unitary(dims[t % 4] * dims[(t + 1) % 4], rng))));
        CHECK(std::abs(out.norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("factory checks reject bad operators") {
    Mat m = Mat::Zero(2, 2);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(LocalOperator::unitary({0}, m), NumericalError);
    CHECK_THROWS_AS(LocalOperator::hermitian({0}, m), NumericalError);
    StateVector s(std::vector<int>{2, 2});
    CHECK_THROWS_AS(apply_local(s, LocalOperator({0}, Mat::Identity(3, 3))), DimensionError);
}

TEST_CASE("permute and fix wires") {
    Rng rng(8);
    std::vector<int> dims{2, 3, 4};
    StateVector psi = random_state(dims, rng);
    StateVector p = permute_wires(psi, {2, 0, 1});
    CHECK(p.dims() == std::vector<int>{4, 2, 3});
    for (std::size_t i = 0; i < psi.size(); ++i) {
        auto dg = psi.digits(i);
        CHECK(std::abs(p[p.index({dg[2], dg[0], dg[1]})] - psi[i]) < 1e-15);
    }
    StateVector f = fix_wires(psi, {1}, {2});
    CHECK(f.dims() == std::vector<int>{2, 4});
    CHECK(std::abs(f[f.index({1, 3})] - psi[psi.index({1, 2, 3})]) < 1e-15);
}

TEST_CASE("measurement branches resolve the identity and are projective") {
    Rng rng(21);
    std::vector<int> dims{2, 2, 2, 2};
    StateVector psi = random_state(dims, rng);
    auto family = diagonal_projectors(dims, [&](std::size_t i) {
        int c = 0;
        for (int x : psi.digits(i)) c += x;
        return c;
    });
    auto branches = branch_decompose(psi, family);
    double total = 0.0;
    for (const auto& b : branches) {
        total += b.probability;
        if (b.probability < kSectorFloor) continue;
        auto again = branch_decompose(b.post_state, family);
        for (const auto& a : again)
            CHECK(std::abs(a.probability - (a.outcome_index == b.outcome_index ? 1.0 : 0.0)) < 1e-12);
    }
    CHECK(std::abs(total - 1.0) < 1e-12);
}

TEST_CASE("Born sampling follows branch weights") {
    std::vector<int> dims{2};
    Vec a(2);
    a << std::sqrt(0.3), std::sqrt(0.7);
    StateVector psi(dims, a);
    auto family = diagonal_projectors(dims, [](std::size_t i) { return static_cast<int>(i); });
    int ones = 0;
    const int shots = 20000;
    for (int k = 0; k < shots; ++k) {
        Rng rng(99, static_cast<std::uint64_t>(k));
        ones += born_measure(psi, family, rng).outcome_index;
    }
    CHECK(std::abs(ones / double(shots) - 0.7) < 0.015);
}

TEST_CASE("Schmidt entropy: Bell pairs, symmetry and the dense oracle") {
    for (int d : {2, 3}) {
        Vec v = Vec::Zero(d * d);
        for (int i = 0; i < d; ++i) v[i * d + i] = 1.0 / std::sqrt(double(d));
        StateVector bell(std::vector<int>{d, d}, v);
        CHECK(std::abs(schmidt_entropy(bell, 1) - std::log(double(d))) < 1e-12);
    }
    Rng rng(4);
    std::vector<int> dims{2, 3, 2, 2};
    for (int t = 0; t < 20; ++t) {
        StateVector psi = random_state(dims, rng);
        for (int cut = 1; cut < 4; ++cut) {
            std::vector<int> a, b;
            for (int k = 0; k < 4; ++k) (k < cut ? a : b).push_back(k);
            double sa = schmidt_entropy(psi, a), sb = schmidt_entropy(psi, b);
            CHECK(std::abs(sa - sb) < 1e-10);
            CHECK(std::abs(sa - oracle::vn_entropy_of(oracle::reduced_first(psi.amps(), dims, cut))) < 1e-10);
        }
    }
}

TEST_CASE("QFI is four times the generator variance") {
    Rng rng(6);
    std::vector<int> dims{2, 2, 2};
    StateVector psi = random_state(dims, rng);
    Observable G;
    SpinOps s = spin_ops(0.5);
    for (int j = 0; j < 3; ++j) G.add(LocalOperator::hermitian({j}, s.Sx));
    Mat g = oracle::dense_observable(dims, G);
    cplx m1 = psi.amps().dot(g * psi.amps());
    cplx m2 = psi.amps().dot(g * g * psi.amps());
    CHECK(std::abs(qfi(psi, G) - 4.0 * (m2.real() - m1.real() * m1.real())) < 1e-12);
}

TEST_CASE("spin and qudit Pauli algebra") {
    for (double sp : {0.5, 1.0, 1.5}) {
        SpinOps s = spin_ops(sp);
        CHECK((s.Sz * s.Sp - s.Sp * s.Sz - s.Sp).norm() < 1e-12);
        CHECK((s.Sz(0, 0) - cplx(-sp)) == cplx(0.0));
        oracle::Spin o = oracle::spin(sp);
        CHECK((s.Sp - o.p).norm() < 1e-12);
    }
    for (int d : {2, 3, 4}) {
        Mat X = qudit_pauli(d, 1, 0), Z = qudit_pauli(d, 0, 1);
        cplx omega = std::polar(1.0, 2 * kPi / d);
        CHECK((Z * X - omega * X * Z).norm() < 1e-12);
        CHECK((qudit_pauli(d, 1, 1) - X * Z).norm() < 1e-12);
    }
}

TEST_CASE("size guard and counter-based RNG") {
    const std::size_t old = amplitude_cap();
    set_amplitude_cap(1000);
    CHECK_THROWS_AS(StateVector(std::vector<int>(10, 2)), SizeGuardError);
    set_amplitude_cap(old);
    Rng a(7, 1), b(7, 1), c(7, 2);
    bool differ = false;
    for (int i = 0; i < 10; ++i) {
        auto x = a(), y = b(), z = c();
        CHECK(x == y);
        differ = differ || x != z;
    }
    CHECK(differ);
}
