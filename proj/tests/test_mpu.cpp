#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "scartower/translate.hpp"

#include <cmath>

using namespace scartower;

namespace {

// Checks the pushing identity directly on the tensor entries.
double push_defect(const MPU& u, const CorrectionEntry& e) {
    const Mat P = qudit_pauli(u.chi, e.pauli.a, e.pauli.b);
    const Mat Pt = qudit_pauli(u.chi, e.pushed.a, e.pushed.b);
    double worst = 0.0;
    for (int s = 0; s < u.d; ++s)
        for (int i = 0; i < u.d; ++i) {
            Mat lhs = e.side == PushSide::left ? Mat(P * u.at(s, i)) : Mat(u.at(s, i) * P);
            Mat rhs = Mat::Zero(u.chi, u.chi);
            for (int t = 0; t < u.d; ++t)
                rhs += e.phys_correction(s, t) * (e.side == PushSide::left ? Mat(u.at(t, i) * Pt) : Mat(Pt * u.at(t, i)));
            worst = std::max(worst, (lhs - rhs).norm());
        }
    return worst;
}

}  // namespace

TEST_CASE("builtin MPUs contract to the expected operators") {
    for (int L = 2; L <= 5; ++L) {
        CHECK((mpu_to_dense(identity_mpu(), L) - Mat::Identity(1 << L, 1 << L)).norm() < 1e-12);
        CHECK((mpu_to_dense(translation_mpu(), L) - oracle::translation(L, 2)).norm() < 1e-12);
        Mat c = mpu_to_dense(czx_mpu(), L);
        CHECK((c * c.adjoint() - Mat::Identity(1 << L, 1 << L)).norm() < 1e-10);
    }
    CHECK((mpu_to_dense(translation_mpu(3), 3) - oracle::translation(3, 3)).norm() < 1e-12);
}

TEST_CASE("identity and translation are correctable for every bond Pauli") {
    for (const MPU& u : {identity_mpu(), translation_mpu(), translation_mpu(3)}) {
        CorrectionTable t = mpu_correctable(u);
        CHECK(t.entries.size() == static_cast<std::size_t>(u.chi * u.chi));
        CHECK(t.all_correctable());
        for (const auto& e : t.entries) {
            CHECK(e.residual <= 1e-8);
            CHECK(push_defect(u, e) < 1e-8);
            CHECK(is_unitary(e.phys_correction, 1e-8));
            CHECK(e.gluing_residual <= 1e-8);
        }
    }
}

TEST_CASE("CZX table entries satisfy the pushing identity") {
    CorrectionTable t = mpu_correctable(czx_mpu());
    for (const auto& e : t.entries)
        if (e.correctable) {
            CHECK(push_defect(czx_mpu(), e) < 1e-8);
            CHECK(e.gluing_residual <= 1e-8);
        }
    // X on the bond: the correction is not unique. The pair (I, Z) works
    // as well as the one the search settles on.
    const auto& x = t.entries[2];
    REQUIRE(x.pauli.a == 1);
    REQUIRE(x.pauli.b == 0);
    CHECK(x.correctable);
    CorrectionEntry alt{{1, 0}, true, PushSide::left, Mat::Identity(2, 2), {0, 1}};
    CHECK(push_defect(czx_mpu(), alt) < 1e-12);
}

TEST_CASE("CZX dense form is a product of X and CZ layers") {
    const int L = 4;
    std::vector<int> dims(L, 2);
    Mat xs = Mat::Identity(16, 16), cz = Mat::Identity(16, 16);
    Mat x = qudit_pauli(2, 1, 0);
    Mat czg = Mat::Identity(4, 4);
    czg(3, 3) = -1.0;
    for (int j = 0; j < L; ++j) {
        xs = oracle::embed(dims, {j}, x) * xs;
        cz = oracle::embed(dims, {j, (j + 1) % L}, czg) * cz;
    }
    CHECK((mpu_to_dense(czx_mpu(), L) - xs * cz).norm() < 1e-12);
}

TEST_CASE("a generic random tensor fails the gluing identity") {
    Rng rng(9);
    MPU u = random_mpu_tensor(2, 2, rng);
    CHECK_FALSE(mpu_correctable(u).all_correctable());
    for (PauliLabel p : {PauliLabel{1, 0}, PauliLabel{0, 1}, PauliLabel{1, 1}}) {
        CHECK(gluing_residual(u, p, PushSide::left) > 1e-3);
        CHECK(gluing_residual(u, p, PushSide::right) > 1e-3);
    }
}

TEST_CASE("MPU validation") {
    MPU u{"bad", 2, 2, {Mat::Zero(2, 2)}};
    CHECK_THROWS_AS(u.validate(), DimensionError);
    CHECK_THROWS_AS(builtin_mpu("nope"), DomainError);
}
