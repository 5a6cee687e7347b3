#include "scartower/tensor.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace scartower {

const char* boundary_name(Boundary b) { return b == Boundary::periodic ? "periodic" : "open"; }

Boundary parse_boundary(const std::string& s) {
    if (s == "periodic") return Boundary::periodic;
    if (s == "open") return Boundary::open;
    throw DomainError("unknown boundary '" + s + "' (valid: periodic, open)");
}

int MPS::max_bond() const {
    int m = 0;
    for (const auto& t : tensors) m = std::max({m, t.left_dim(), t.right_dim()});
    return m;
}

std::vector<int> MPS::phys_dims() const {
    std::vector<int> d;
    for (const auto& t : tensors) d.push_back(t.phys_dim());
    return d;
}

void MPS::validate() const {
    if (tensors.empty()) throw DimensionError("empty MPS");
    for (std::size_t j = 0; j < tensors.size(); ++j) {
        const auto& t = tensors[j];
        if (t.data.empty()) throw DimensionError("site tensor without physical levels");
        for (const auto& m : t.data)
            if (m.rows() != t.left_dim() || m.cols() != t.right_dim())
                throw DimensionError("inconsistent bond shape within a site tensor");
        if (j + 1 < tensors.size() && t.right_dim() != tensors[j + 1].left_dim())
            throw DimensionError("bond mismatch between sites " + std::to_string(j + 1) + " and " + std::to_string(j + 2));
    }
    if (boundary == Boundary::periodic) {
        if (tensors.front().left_dim() != tensors.back().right_dim())
            throw DimensionError("periodic MPS with mismatched closing bond");
    } else {
        if (left.size() != tensors.front().left_dim() || right.size() != tensors.back().right_dim())
            throw DimensionError("boundary vector size mismatch");
    }
}

int MPO::max_bond() const {
    int m = 0;
    for (const auto& t : tensors) m = std::max({m, t.left_dim(), t.right_dim()});
    return m;
}

void MPO::validate() const {
    if (tensors.empty()) throw DimensionError("empty MPO");
    for (std::size_t j = 0; j < tensors.size(); ++j) {
        const auto& t = tensors[j];
        if (static_cast<int>(t.data.size()) != t.d_out * t.d_in) throw DimensionError("MPO leg count mismatch");
        for (const auto& m : t.data)
            if (m.rows() != t.left_dim() || m.cols() != t.right_dim()) throw DimensionError("inconsistent MPO bond shape");
        if (j + 1 < tensors.size() && t.right_dim() != tensors[j + 1].left_dim()) throw DimensionError("MPO bond mismatch");
    }
    if (left.size() != tensors.front().left_dim() || right.size() != tensors.back().right_dim())
        throw DimensionError("MPO boundary vector size mismatch");
}

StateVector contract_to_statevector(const MPS& mps) {
    mps.validate();
    auto dims = mps.phys_dims();
    check_size(dims);
    const bool periodic = mps.boundary == Boundary::periodic;
    const Eigen::Index c0 = periodic ? mps.tensors.front().left_dim() : 1;
    // Rows: (configuration, initial bond); columns: current bond.
    Mat acc = periodic ? Mat(Mat::Identity(c0, c0)) : Mat(mps.left.transpose());
    for (const auto& t : mps.tensors) {
        const int d = t.phys_dim();
        const Eigen::Index ncfg = acc.rows() / c0;
        Mat next(acc.rows() * d, t.right_dim());
        for (Eigen::Index c = 0; c < ncfg; ++c)
            for (int s = 0; s < d; ++s)
                next.middleRows((c * d + s) * c0, c0).noalias() = acc.middleRows(c * c0, c0) * t.data[s];
        acc = std::move(next);
    }
    const Eigen::Index n = acc.rows() / c0;
    Vec amps(n);
    for (Eigen::Index c = 0; c < n; ++c)
        amps[c] = periodic ? acc.middleRows(c * c0, c0).trace() : cplx((acc.row(c) * mps.right)(0));
    return StateVector(dims, std::move(amps));
}

namespace {

// Pieces[t][o*d+i] is the left x right matrix of the t-th site of the gate.
std::vector<std::vector<Mat>> split_gate(const Mat& R, int d, int m) {
    const Eigen::Index D = R.rows();
    // Reorder to (o1 i1)(o2 i2)... with site 1 most significant.
    Eigen::Index dd = static_cast<Eigen::Index>(d) * d;
    Vec flat(D * D);
    std::vector<int> o(m), in(m);
    for (Eigen::Index r = 0; r < D; ++r)
        for (Eigen::Index c = 0; c < D; ++c) {
            Eigen::Index rr = r, cc = c;
            for (int t = m - 1; t >= 0; --t) {
                o[t] = static_cast<int>(rr % d);
                in[t] = static_cast<int>(cc % d);
                rr /= d;
                cc /= d;
            }
            Eigen::Index idx = 0;
            for (int t = 0; t < m; ++t) idx = idx * dd + o[t] * d + in[t];
            flat[idx] = R(r, c);
        }
    std::vector<std::vector<Mat>> pieces(m);
    Eigen::Index left = 1, rest = D * D;
    Vec cur = flat;
    for (int t = 0; t < m; ++t) {
        rest /= dd;
        Mat M(left * dd, rest);
        for (Eigen::Index a = 0; a < left; ++a)
            for (Eigen::Index p = 0; p < dd; ++p)
                for (Eigen::Index b = 0; b < rest; ++b) M(a * dd + p, b) = cur[(a * dd + p) * rest + b];
        Mat U, V;
        Eigen::Index rank;
        if (t == m - 1) {
            U = M;
            rank = 1;
            V = Mat::Ones(1, 1);
        } else {
            Eigen::BDCSVD<Mat> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
            const auto& sv = svd.singularValues();
            double smax = sv.size() ? sv[0] : 0.0;
            rank = 0;
            while (rank < sv.size() && sv[rank] > 1e-14 * smax) ++rank;
            rank = std::max<Eigen::Index>(rank, 1);
            U = svd.matrixU().leftCols(rank) * sv.head(rank).asDiagonal();
            V = svd.matrixV().leftCols(rank).adjoint();
        }
        const Eigen::Index right = t == m - 1 ? 1 : rank;
        pieces[t].assign(static_cast<std::size_t>(dd), Mat::Zero(left, right));
        for (Eigen::Index a = 0; a < left; ++a)
            for (Eigen::Index p = 0; p < dd; ++p)
                for (Eigen::Index k = 0; k < right; ++k) pieces[t][p](a, k) = U(a * dd + p, k);
        if (t < m - 1) {
            Vec nxt(rank * rest);
            for (Eigen::Index k = 0; k < rank; ++k)
                for (Eigen::Index b = 0; b < rest; ++b) nxt[k * rest + b] = V(k, b);
            cur = std::move(nxt);
            left = rank;
        }
    }
    return pieces;
}

}  // namespace

MPO mpo_from_gates(int L, int d, const std::vector<Gate>& gates) {
    if (L < 1) throw DimensionError("chain length must be positive");
    MPO mpo;
    // Per site: composed tensor, starting from identity with bond 1.
    std::vector<std::vector<Mat>> site(L);
    for (int k = 0; k < L; ++k) {
        site[k].assign(static_cast<std::size_t>(d) * d, Mat::Zero(1, 1));
        for (int s = 0; s < d; ++s) site[k][static_cast<std::size_t>(s * d + s)](0, 0) = 1.0;
    }
    for (const auto& g : gates) {
        if (g.num_sites == 0) {
            mpo.scale *= g.matrix(0, 0);
            continue;
        }
        Eigen::Index D = 1;
        for (int t = 0; t < g.num_sites; ++t) D *= d;
        if (g.matrix.rows() != D || g.matrix.cols() != D) throw DimensionError("gate matrix does not match its support");
        if (g.first_site < 0 || g.first_site + g.num_sites > L) throw DimensionError("gate outside the chain");
        auto pieces = split_gate(g.matrix, d, g.num_sites);
        for (int t = 0; t < g.num_sites; ++t) {
            int k = g.first_site + t;
            // Existing site operator sits to the left in the product.
            std::vector<Mat> comp(static_cast<std::size_t>(d) * d);
            const auto& A = site[k];
            const auto& B = pieces[t];
            for (int o = 0; o < d; ++o)
                for (int i = 0; i < d; ++i) {
                    Mat acc = Mat::Zero(A[0].rows() * B[0].rows(), A[0].cols() * B[0].cols());
                    for (int v = 0; v < d; ++v) {
                        const Mat& a = A[static_cast<std::size_t>(o * d + v)];
                        const Mat& b = B[static_cast<std::size_t>(v * d + i)];
                        if (a.isZero(0) || b.isZero(0)) continue;
                        acc += kron(a, b);
                    }
                    comp[static_cast<std::size_t>(o * d + i)] = std::move(acc);
                }
            site[k] = std::move(comp);
        }
    }
    for (int k = 0; k < L; ++k) {
        MPOTensor t;
        t.site = k + 1;
        t.d_out = t.d_in = d;
        t.data = std::move(site[k]);
        mpo.tensors.push_back(std::move(t));
    }
    mpo.left = Vec::Ones(mpo.tensors.front().left_dim());
    mpo.right = Vec::Ones(mpo.tensors.back().right_dim());
    mpo.validate();
    return mpo;
}

MPS apply_mpo(const MPO& mpo, const MPS& mps) {
    mpo.validate();
    mps.validate();
    if (mpo.length() != mps.length()) throw DimensionError("MPO and MPS lengths differ");
    const bool trivial_bonds = mpo.max_bond() == 1;
    if (mps.boundary == Boundary::periodic && !trivial_bonds)
        throw DimensionError("periodic MPS needs an MPO with unit bonds");
    MPS out;
    out.boundary = mps.boundary;
    for (int j = 0; j < mps.length(); ++j) {
        const auto& W = mpo.tensors[j];
        const auto& A = mps.tensors[j];
        if (W.d_in != A.phys_dim()) throw DimensionError("MPO input leg does not match MPS physical leg");
        MPSTensor t;
        t.site = A.site;
        for (int o = 0; o < W.d_out; ++o) {
            Mat acc = Mat::Zero(W.left_dim() * A.left_dim(), W.right_dim() * A.right_dim());
            for (int i = 0; i < W.d_in; ++i) acc += kron(W.at(o, i), A.data[i]);
            t.data.push_back(std::move(acc));
        }
        out.tensors.push_back(std::move(t));
    }
    if (mps.boundary == Boundary::open) {
        out.left = kron(mpo.left, mps.left);
        out.right = kron(mpo.right, mps.right);
    } else {
        out.tensors.front().data = [&] {
            auto d = out.tensors.front().data;
            for (auto& m : d) m *= mpo.left[0] * mpo.right[0];
            return d;
        }();
    }
    for (auto& m : out.tensors.front().data) m *= mpo.scale;
    return out;
}

StateVector apply_mpo(const MPO& mpo, const StateVector& state) {
    mpo.validate();
    const int L = mpo.length();
    if (state.num_wires() != L) throw DimensionError("MPO length differs from wire count");
    const auto strides = state.strides();
    const auto& dims = state.dims();
    const Eigen::Index N = static_cast<Eigen::Index>(state.size());
    // acc.row(b) holds the partially transformed amplitudes for bond value b.
    Mat acc(mpo.left.size(), N);
    for (Eigen::Index b = 0; b < mpo.left.size(); ++b) acc.row(b) = mpo.left[b] * state.amps().transpose();
    for (int j = 0; j < L; ++j) {
        const auto& W = mpo.tensors[j];
        if (W.d_in != dims[j] || W.d_out != dims[j]) throw DimensionError("MPO leg does not match wire dimension");
        Mat next = Mat::Zero(W.right_dim(), N);
        const Eigen::Index st = static_cast<Eigen::Index>(strides[j]);
        const Eigen::Index block = st * dims[j];
        for (int o = 0; o < W.d_out; ++o)
            for (int i = 0; i < W.d_in; ++i) {
                const Mat& w = W.at(o, i);
                if (w.isZero(0)) continue;
                for (Eigen::Index hi = 0; hi < N; hi += block)
                    for (Eigen::Index lo = 0; lo < st; ++lo) {
                        Eigen::Index src = hi + i * st + lo, dst = hi + o * st + lo;
                        next.col(dst) += w.transpose() * acc.col(src);
                    }
            }
        acc = std::move(next);
    }
    Vec amps = (mpo.right.transpose() * acc).transpose() * mpo.scale;
    return StateVector(dims, std::move(amps), state.roles());
}

Mat mpo_to_dense(const MPO& mpo) {
    std::vector<int> dims;
    for (const auto& t : mpo.tensors) dims.push_back(t.d_in);
    check_size(dims);
    StateVector probe(dims);
    const Eigen::Index N = static_cast<Eigen::Index>(probe.size());
    Mat out(N, N);
    for (Eigen::Index c = 0; c < N; ++c) {
        Vec e = Vec::Zero(N);
        e[c] = 1.0;
        out.col(c) = apply_mpo(mpo, StateVector(dims, e)).amps();
    }
    return out;
}

MPS product_mps(const std::vector<Vec>& locals) {
    MPS mps;
    mps.boundary = Boundary::open;
    int j = 1;
    for (const auto& v : locals) {
        MPSTensor t;
        t.site = j++;
        for (Eigen::Index s = 0; s < v.size(); ++s) t.data.push_back(Mat::Constant(1, 1, v[s]));
        mps.tensors.push_back(std::move(t));
    }
    mps.left = Vec::Ones(1);
    mps.right = Vec::Ones(1);
    return mps;
}

SectorLogWeights sector_weights_transfer(const MPS& mps, const std::vector<int>& level_charge) {
    mps.validate();
    const int lo = *std::min_element(level_charge.begin(), level_charge.end());
    const int hi = *std::max_element(level_charge.begin(), level_charge.end());
    const int span = hi - lo;
    const bool periodic = mps.boundary == Boundary::periodic;
    const Eigen::Index c0 = mps.tensors.front().left_dim();
    // poly[c] is the coefficient of z^c (shifted charge) of the running transfer product.
    std::vector<Mat> poly(1);
    if (periodic) {
        poly[0] = Mat::Identity(c0 * c0, c0 * c0);
    } else {
        poly[0] = kron(mps.left.transpose(), mps.left.adjoint());
    }
    double log_scale = 0.0;
    for (const auto& t : mps.tensors) {
        if (static_cast<int>(level_charge.size()) != t.phys_dim())
            throw DimensionError("charge table does not match physical dimension");
        std::vector<Mat> E(t.phys_dim());
        for (int s = 0; s < t.phys_dim(); ++s) E[s] = kron(t.data[s], t.data[s].conjugate());
        std::vector<Mat> next(poly.size() + span, Mat::Zero(poly[0].rows(), E[0].cols()));
        for (std::size_t c = 0; c < poly.size(); ++c) {
            if (poly[c].isZero(0)) continue;
            for (int s = 0; s < t.phys_dim(); ++s) next[c + (level_charge[s] - lo)] += poly[c] * E[s];
        }
        double mx = 0.0;
        for (const auto& m : next) mx = std::max(mx, m.cwiseAbs().maxCoeff());
        if (mx > 0.0) {
            for (auto& m : next) m /= mx;
            log_scale += std::log(mx);
        }
        poly = std::move(next);
    }
    SectorLogWeights out;
    out.qmin = lo * mps.length();
    const double ninf = -std::numeric_limits<double>::infinity();
    for (const auto& m : poly) {
        double v = periodic ? m.trace().real() : (m * kron(mps.right, mps.right.conjugate()))(0, 0).real();
        out.log_weight.push_back(v > 0.0 ? std::log(v) + log_scale : ninf);
    }
    return out;
}

}  // namespace scartower
