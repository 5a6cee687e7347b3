#include "scartower/translate.hpp"

#include <Eigen/QR>

#include <cmath>
#include <limits>
#include <random>

namespace scartower {

void MPU::validate() const {
    if (d < 1 || chi < 1) throw DimensionError("MPU dimensions must be positive");
    if (static_cast<int>(data.size()) != d * d) throw DimensionError("MPU needs d*d bond matrices");
    for (const auto& m : data)
        if (m.rows() != chi || m.cols() != chi) throw DimensionError("MPU bond matrix has the wrong shape");
}

MPU identity_mpu(int d) {
    MPU u{"identity", d, 1, {}};
    for (int o = 0; o < d; ++o)
        for (int i = 0; i < d; ++i) u.data.push_back(Mat::Constant(1, 1, o == i ? 1.0 : 0.0));
    return u;
}

MPU translation_mpu(int d) {
    MPU u{"translation", d, d, {}};
    for (int o = 0; o < d; ++o)
        for (int i = 0; i < d; ++i) {
            Mat m = Mat::Zero(d, d);
            m(i, o) = 1.0;  // left bond copies the input, right bond carries the output
            u.data.push_back(m);
        }
    return u;
}

MPU czx_mpu() {
    MPU u{"czx", 2, 2, {}};
    for (int o = 0; o < 2; ++o)
        for (int i = 0; i < 2; ++i) {
            Mat m = Mat::Zero(2, 2);
            if (o == 1 - i)
                for (int a = 0; a < 2; ++a) m(a, i) = (a == 1 && i == 1) ? -1.0 : 1.0;
            u.data.push_back(m);
        }
    return u;
}

std::vector<MPU> builtin_mpus() { return {identity_mpu(), translation_mpu(), czx_mpu()}; }

MPU builtin_mpu(const std::string& name, int d) {
    if (name == "identity") return identity_mpu(d);
    if (name == "translation") return translation_mpu(d);
    if (name == "czx") return czx_mpu();
    throw DomainError("unknown builtin MPU '" + name + "' (valid: identity, translation, czx)");
}

Mat mpu_to_dense(const MPU& mpu, int L) {
    mpu.validate();
    std::vector<int> dims(L, mpu.d);
    check_size(dims);
    std::size_t N = 1;
    for (int k = 0; k < L; ++k) N *= mpu.d;
    if (N * N > amplitude_cap()) throw SizeGuardError("dense MPU exceeds the amplitude cap");
    Mat out(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
    std::vector<int> so(L), si(L);
    for (std::size_t r = 0; r < N; ++r) {
        std::size_t t = r;
        for (int k = L - 1; k >= 0; --k) {
            so[k] = static_cast<int>(t % mpu.d);
            t /= mpu.d;
        }
        for (std::size_t c = 0; c < N; ++c) {
            std::size_t u = c;
            for (int k = L - 1; k >= 0; --k) {
                si[k] = static_cast<int>(u % mpu.d);
                u /= mpu.d;
            }
            Mat acc = mpu.at(so[0], si[0]);
            for (int k = 1; k < L && !acc.isZero(0); ++k) acc = acc * mpu.at(so[k], si[k]);
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = acc.trace();
        }
    }
    return out;
}

bool CorrectionTable::all_correctable() const {
    for (const auto& e : entries)
        if (!e.correctable) return false;
    return true;
}

namespace {

struct Push {
    Mat U;
    double residual = std::numeric_limits<double>::infinity();
};

// Left:  P M^{s,i} = sum_s' U_{s s'} M^{s',i} Pt
// Right: M^{s,i} P = sum_s' U_{s s'} Pt M^{s',i}
Push solve_push(const MPU& u, const Mat& P, const Mat& Pt, PushSide side) {
    const int d = u.d;
    const Eigen::Index K = static_cast<Eigen::Index>(d) * u.chi * u.chi;
    Mat lhs(d, K), rhs(d, K);
    for (int s = 0; s < d; ++s)
        for (int i = 0; i < d; ++i) {
            Mat l = side == PushSide::left ? Mat(P * u.at(s, i)) : Mat(u.at(s, i) * P);
            Mat r = side == PushSide::left ? Mat(u.at(s, i) * Pt) : Mat(Pt * u.at(s, i));
            lhs.block(s, i * u.chi * u.chi, 1, u.chi * u.chi) = Eigen::Map<const Eigen::RowVectorXcd>(l.data(), u.chi * u.chi);
            rhs.block(s, i * u.chi * u.chi, 1, u.chi * u.chi) = Eigen::Map<const Eigen::RowVectorXcd>(r.data(), u.chi * u.chi);
        }
    Push p;
    // U rhs = lhs in the least-squares sense.
    p.U = rhs.transpose().completeOrthogonalDecomposition().solve(lhs.transpose()).transpose();
    double scale = std::max(1.0, lhs.norm());
    p.residual = (p.U * rhs - lhs).norm() / scale;
    p.residual = std::max(p.residual, (p.U.adjoint() * p.U - Mat::Identity(d, d)).cwiseAbs().maxCoeff());
    return p;
}

Mat transfer(const MPU& u) {
    Mat E = Mat::Zero(u.chi * u.chi, u.chi * u.chi);
    for (const auto& m : u.data) E += kron(m, m.conjugate());
    return E;
}

double gluing_for(const Mat& E, const Mat& P, const Mat& Pt, PushSide side) {
    Mat pp = kron(P, P.conjugate()), tt = kron(Pt, Pt.conjugate());
    Mat diff = side == PushSide::left ? Mat(pp * E - E * tt) : Mat(E * pp - tt * E);
    return diff.norm() / std::max(1.0, E.norm());
}

}  // namespace

double gluing_residual(const MPU& mpu, PauliLabel pauli, PushSide side, PauliLabel* best) {
    mpu.validate();
    const Mat E = transfer(mpu);
    const Mat P = qudit_pauli(mpu.chi, pauli.a, pauli.b);
    double r = std::numeric_limits<double>::infinity();
    for (int a = 0; a < mpu.chi; ++a)
        for (int b = 0; b < mpu.chi; ++b) {
            double g = gluing_for(E, P, qudit_pauli(mpu.chi, a, b), side);
            if (g < r) {
                r = g;
                if (best) *best = {a, b};
            }
        }
    return r;
}

CorrectionTable mpu_correctable(const MPU& mpu) {
    mpu.validate();
    CorrectionTable table;
    table.name = mpu.name;
    const Mat E = transfer(mpu);
    for (int a = 0; a < mpu.chi; ++a)
        for (int b = 0; b < mpu.chi; ++b) {
            CorrectionEntry e;
            e.pauli = {a, b};
            const Mat P = qudit_pauli(mpu.chi, a, b);
            double best = std::numeric_limits<double>::infinity();
            for (PushSide side : {PushSide::left, PushSide::right}) {
                for (int ta = 0; ta < mpu.chi && !e.correctable; ++ta)
                    for (int tb = 0; tb < mpu.chi && !e.correctable; ++tb) {
                        const Mat Pt = qudit_pauli(mpu.chi, ta, tb);
                        Push p = solve_push(mpu, P, Pt, side);
                        if (p.residual <= 1e-8 || p.residual < best) {
                            best = std::min(best, p.residual);
                            e.side = side;
                            e.phys_correction = p.U;
                            e.pushed = {ta, tb};
                            e.residual = p.residual;
                            e.correctable = p.residual <= 1e-8;
                        }
                    }
                if (e.correctable) break;
            }
            if (e.correctable) {
                e.gluing_residual = gluing_for(E, P, qudit_pauli(mpu.chi, e.pushed.a, e.pushed.b), e.side);
            } else {
                e.gluing_residual = std::min(gluing_residual(mpu, e.pauli, PushSide::left),
                                             gluing_residual(mpu, e.pauli, PushSide::right));
            }
            table.entries.push_back(std::move(e));
        }
    return table;
}

MPU random_mpu_tensor(int d, int chi, Rng& rng) {
    std::normal_distribution<double> nd;
    MPU u{"random", d, chi, {}};
    for (int k = 0; k < d * d; ++k) {
        Mat m(chi, chi);
        for (int i = 0; i < chi; ++i)
            for (int j = 0; j < chi; ++j) {
                double re = nd(rng);
                double im = nd(rng);
                m(i, j) = cplx(re, im);
            }
        u.data.push_back(m);
    }
    return u;
}

}  // namespace scartower
