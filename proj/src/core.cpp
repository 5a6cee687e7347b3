#include "scartower/core.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <memory>
#include <atomic>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

namespace scartower {

namespace {

std::atomic<std::size_t> g_cap{std::size_t(1) << 27};

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::size_t product_of(const std::vector<int>& dims) {
    std::size_t n = 1;
    for (int d : dims) {
        if (d < 1) throw DimensionError("wire dimension must be positive");
        if (n > amplitude_cap() / static_cast<std::size_t>(d) + 1)
            return amplitude_cap() + 1;
        n *= static_cast<std::size_t>(d);
    }
    return n;
}

// Visits every index whose digits on `fixed` wires are zero, plus an
// optional control wire pinned to 1.
template <class F>
void for_each_base(const std::vector<int>& dims, const std::vector<std::size_t>& strides,
                   const std::vector<int>& fixed, int control, F&& f) {
    std::vector<int> free;
    for (int w = 0; w < static_cast<int>(dims.size()); ++w)
        if (w != control && std::find(fixed.begin(), fixed.end(), w) == fixed.end()) free.push_back(w);
    std::size_t base = control >= 0 ? strides[control] : 0;
    std::vector<int> ctr(free.size(), 0);
    while (true) {
        f(base);
        int k = static_cast<int>(free.size()) - 1;
        for (; k >= 0; --k) {
            int w = free[k];
            if (++ctr[k] < dims[w]) {
                base += strides[w];
                break;
            }
            base -= strides[w] * static_cast<std::size_t>(dims[w] - 1);
            ctr[k] = 0;
        }
        if (k < 0) return;
    }
}

void apply_in_place(StateVector& s, const LocalOperator& op, int control) {
    const auto& dims = s.dims();
    const int nw = s.num_wires();
    std::size_t D = 1;
    for (int w : op.support) {
        if (w < 0 || w >= nw) throw DimensionError("support wire out of range");
        if (w == control) throw DimensionError("control wire inside operator support");
        D *= static_cast<std::size_t>(dims[w]);
    }
    {
        auto sorted = op.support;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw DimensionError("repeated wire in support");
    }
    if (static_cast<std::size_t>(op.matrix.rows()) != D || static_cast<std::size_t>(op.matrix.cols()) != D)
        throw DimensionError("operator dimension does not match support");
    const auto strides = s.strides();
    std::vector<std::size_t> offs(D, 0);
    for (std::size_t c = 0; c < D; ++c) {
        std::size_t rem = c, off = 0;
        for (int k = static_cast<int>(op.support.size()) - 1; k >= 0; --k) {
            int w = op.support[k];
            off += (rem % dims[w]) * strides[w];
            rem /= dims[w];
        }
        offs[c] = off;
    }
    Vec in(static_cast<Eigen::Index>(D)), out(static_cast<Eigen::Index>(D));
    Vec& a = s.amps();
    for_each_base(dims, strides, op.support, control, [&](std::size_t base) {
        for (std::size_t c = 0; c < D; ++c) in[c] = a[base + offs[c]];
        out.noalias() = op.matrix * in;
        for (std::size_t c = 0; c < D; ++c) a[base + offs[c]] = out[c];
    });
}

}  // namespace

std::size_t amplitude_cap() { return g_cap.load(); }
void set_amplitude_cap(std::size_t cap) { g_cap.store(cap); }

void check_size(const std::vector<int>& dims) {
    std::size_t n = product_of(dims);
    if (n > amplitude_cap())
        throw SizeGuardError("state needs more than " + std::to_string(amplitude_cap()) +
                             " amplitudes (cap); raise the cap or shrink the chain");
}

Rng::result_type Rng::operator()() {
    return splitmix(splitmix(seed_ ^ splitmix(stream_)) + counter_++);
}

double Rng::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

const char* role_name(WireRole r) {
    switch (r) {
        case WireRole::system: return "system";
        case WireRole::control: return "control";
        case WireRole::ancilla: return "ancilla";
        case WireRole::bell_half: return "bell-half";
    }
    return "system";
}

StateVector::StateVector(std::vector<int> dims, std::vector<WireRole> roles)
    : dims_(std::move(dims)), roles_(std::move(roles)) {
    check_size(dims_);
    if (roles_.empty()) roles_.assign(dims_.size(), WireRole::system);
    if (roles_.size() != dims_.size()) throw DimensionError("role list length differs from wire count");
    amps_ = Vec::Zero(static_cast<Eigen::Index>(product_of(dims_)));
    amps_[0] = 1.0;
}

StateVector::StateVector(std::vector<int> dims, Vec amps, std::vector<WireRole> roles)
    : dims_(std::move(dims)), roles_(std::move(roles)), amps_(std::move(amps)) {
    check_size(dims_);
    if (roles_.empty()) roles_.assign(dims_.size(), WireRole::system);
    if (roles_.size() != dims_.size()) throw DimensionError("role list length differs from wire count");
    if (static_cast<std::size_t>(amps_.size()) != product_of(dims_))
        throw DimensionError("amplitude count differs from product of wire dimensions");
}

StateVector StateVector::basis(const std::vector<int>& dims, const std::vector<int>& digits) {
    StateVector s(dims);
    s.amps_[0] = 0.0;
    s.amps_[static_cast<Eigen::Index>(s.index(digits))] = 1.0;
    return s;
}

StateVector StateVector::product(const std::vector<Vec>& locals) {
    std::vector<int> dims;
    for (const auto& v : locals) dims.push_back(static_cast<int>(v.size()));
    check_size(dims);
    Vec acc = Vec::Ones(1);
    for (const auto& v : locals) {
        Vec next(acc.size() * v.size());
        for (Eigen::Index i = 0; i < acc.size(); ++i) next.segment(i * v.size(), v.size()) = acc[i] * v;
        acc = std::move(next);
    }
    return StateVector(dims, acc);
}

std::vector<std::size_t> StateVector::strides() const {
    std::vector<std::size_t> st(dims_.size(), 1);
    for (int w = static_cast<int>(dims_.size()) - 2; w >= 0; --w) st[w] = st[w + 1] * dims_[w + 1];
    return st;
}

std::vector<int> StateVector::digits(std::size_t index) const {
    std::vector<int> out(dims_.size());
    for (int w = static_cast<int>(dims_.size()) - 1; w >= 0; --w) {
        out[w] = static_cast<int>(index % dims_[w]);
        index /= dims_[w];
    }
    return out;
}

std::size_t StateVector::index(const std::vector<int>& digits) const {
    if (digits.size() != dims_.size()) throw DimensionError("digit count differs from wire count");
    std::size_t idx = 0;
    for (std::size_t w = 0; w < dims_.size(); ++w) {
        if (digits[w] < 0 || digits[w] >= dims_[w]) throw DimensionError("digit out of range");
        idx = idx * dims_[w] + digits[w];
    }
    return idx;
}

StateVector StateVector::normalized() const {
    StateVector s = *this;
    s.normalize();
    return s;
}

void StateVector::normalize() {
    double n = amps_.norm();
    if (!(n > 0.0)) throw NumericalError("cannot normalize a zero state");
    amps_ /= n;
}

StateVector StateVector::append_wires(const std::vector<int>& dims, WireRole role) const {
    auto nd = dims_;
    auto nr = roles_;
    std::size_t extra = 1;
    for (int d : dims) {
        nd.push_back(d);
        nr.push_back(role);
        extra *= d;
    }
    check_size(nd);
    Vec a = Vec::Zero(amps_.size() * static_cast<Eigen::Index>(extra));
    for (Eigen::Index i = 0; i < amps_.size(); ++i) a[i * static_cast<Eigen::Index>(extra)] = amps_[i];
    return StateVector(nd, std::move(a), nr);
}

bool is_unitary(const Mat& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m.adjoint() * m - Mat::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tol;
}

bool is_hermitian(const Mat& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

LocalOperator LocalOperator::unitary(std::vector<int> s, Mat m) {
    if (!is_unitary(m)) throw NumericalError("operator declared unitary is not");
    return LocalOperator(std::move(s), std::move(m));
}

LocalOperator LocalOperator::hermitian(std::vector<int> s, Mat m) {
    if (!is_hermitian(m)) throw NumericalError("operator declared hermitian is not");
    return LocalOperator(std::move(s), std::move(m));
}

StateVector apply_local(const StateVector& state, const LocalOperator& op) {
    StateVector out = state;
    apply_in_place(out, op, -1);
    return out;
}

StateVector controlled_apply(const StateVector& state, int control, const std::vector<LocalOperator>& ops) {
    if (control < 0 || control >= state.num_wires()) throw DimensionError("control wire out of range");
    if (state.dims()[control] != 2) throw DimensionError("control wire must be a qubit");
    StateVector out = state;
    for (const auto& op : ops) apply_in_place(out, op, control);
    return out;
}

StateVector apply_observable(const StateVector& state, const Observable& obs) {
    StateVector out(state.dims(), state.amps() * obs.constant, state.roles());
    for (const auto& t : obs.terms) {
        StateVector tmp = state;
        apply_in_place(tmp, t, -1);
        out.amps() += tmp.amps();
    }
    return out;
}

StateVector permute_wires(const StateVector& state, const std::vector<int>& order) {
    const int nw = state.num_wires();
    if (static_cast<int>(order.size()) != nw) throw DimensionError("permutation length differs from wire count");
    std::vector<int> dims(nw);
    std::vector<WireRole> roles(nw);
    std::vector<char> seen(nw, 0);
    for (int i = 0; i < nw; ++i) {
        int w = order[i];
        if (w < 0 || w >= nw || seen[w]) throw DimensionError("invalid wire permutation");
        seen[w] = 1;
        dims[i] = state.dims()[w];
        roles[i] = state.roles()[w];
    }
    const auto old_strides = state.strides();
    Vec a(static_cast<Eigen::Index>(state.size()));
    std::vector<int> ctr(nw, 0);
    std::size_t src = 0;
    for (std::size_t dst = 0; dst < state.size(); ++dst) {
        a[static_cast<Eigen::Index>(dst)] = state[src];
        for (int i = nw - 1; i >= 0; --i) {
            int w = order[i];
            if (++ctr[i] < dims[i]) {
                src += old_strides[w];
                break;
            }
            src -= old_strides[w] * static_cast<std::size_t>(dims[i] - 1);
            ctr[i] = 0;
        }
    }
    return StateVector(dims, std::move(a), roles);
}

StateVector fix_wires(const StateVector& state, const std::vector<int>& wires, const std::vector<int>& values) {
    if (wires.size() != values.size()) throw DimensionError("wire and value lists differ in length");
    const int nw = state.num_wires();
    std::vector<int> keep;
    std::vector<int> dims;
    std::vector<WireRole> roles;
    for (int w = 0; w < nw; ++w)
        if (std::find(wires.begin(), wires.end(), w) == wires.end()) {
            keep.push_back(w);
            dims.push_back(state.dims()[w]);
            roles.push_back(state.roles()[w]);
        }
    if (keep.empty()) throw DimensionError("cannot fix every wire");
    const auto strides = state.strides();
    std::size_t base = 0;
    for (std::size_t i = 0; i < wires.size(); ++i) {
        if (values[i] < 0 || values[i] >= state.dims()[wires[i]]) throw DimensionError("fixed digit out of range");
        base += strides[wires[i]] * static_cast<std::size_t>(values[i]);
    }
    std::size_t n = 1;
    for (int d : dims) n *= static_cast<std::size_t>(d);
    Vec a(static_cast<Eigen::Index>(n));
    std::vector<int> ctr(keep.size(), 0);
    std::size_t src = base;
    for (std::size_t dst = 0; dst < n; ++dst) {
        a[static_cast<Eigen::Index>(dst)] = state[src];
        for (int i = static_cast<int>(keep.size()) - 1; i >= 0; --i) {
            int w = keep[i];
            if (++ctr[i] < dims[i]) {
                src += strides[w];
                break;
            }
            src -= strides[w] * static_cast<std::size_t>(dims[i] - 1);
            ctr[i] = 0;
        }
    }
    return StateVector(dims, std::move(a), roles);
}

cplx inner(const StateVector& a, const StateVector& b) {
    if (a.dims() != b.dims()) throw DimensionError("inner product of differently shaped states");
    return a.amps().dot(b.amps());
}

double fidelity(const StateVector& a, const StateVector& b) {
    double na = a.norm(), nb = b.norm();
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::abs(inner(a, b)) / (na * nb);
}

cplx expectation(const StateVector& state, const Observable& obs) {
    return inner(state, apply_observable(state, obs));
}

std::vector<Projector> diagonal_projectors(const std::vector<int>& dims,
                                           const std::function<int(std::size_t)>& label) {
    std::size_t n = product_of(dims);
    std::map<int, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[label(i)].push_back(i);
    std::vector<Projector> out;
    for (auto& [lab, idx] : groups) {
        auto shared = std::make_shared<std::vector<std::size_t>>(std::move(idx));
        out.push_back({lab, [shared](const StateVector& s) {
                           Vec a = Vec::Zero(static_cast<Eigen::Index>(s.size()));
                           for (std::size_t i : *shared) a[i] = s.amps()[i];
                           return StateVector(s.dims(), std::move(a), s.roles());
                       }});
    }
    return out;
}

std::vector<MeasurementOutcome> branch_decompose(const StateVector& state, const std::vector<Projector>& family) {
    std::vector<MeasurementOutcome> out;
    Vec sum = Vec::Zero(static_cast<Eigen::Index>(state.size()));
    double total = 0.0;
    for (const auto& p : family) {
        StateVector proj = p.apply(state);
        sum += proj.amps();
        double prob = proj.amps().squaredNorm();
        total += prob;
        MeasurementOutcome mo;
        mo.outcome_index = p.label;
        mo.probability = prob;
        if (prob >= kSectorFloor) {
            proj.normalize();
            mo.post_state = std::move(proj);
        }
        out.push_back(std::move(mo));
    }
    if ((sum - state.amps()).norm() > 1e-10 * std::max(1.0, state.norm()) || std::abs(total - state.amps().squaredNorm()) > 1e-10)
        throw NumericalError("projector family does not resolve the identity");
    return out;
}

MeasurementOutcome born_measure(const StateVector& state, const std::vector<Projector>& family, Rng& rng) {
    auto branches = branch_decompose(state, family);
    double total = 0.0;
    for (const auto& b : branches) total += b.probability;
    double r = rng.uniform() * total, acc = 0.0;
    std::size_t pick = branches.size() - 1;
    for (std::size_t i = 0; i < branches.size(); ++i) {
        acc += branches[i].probability;
        if (r < acc) {
            pick = i;
            break;
        }
    }
    while (branches[pick].probability < kSectorFloor && pick > 0) --pick;
    if (branches[pick].probability < kSectorFloor) throw NumericalError("sampled sector below probability floor");
    branches[pick].probability /= total;
    return std::move(branches[pick]);
}

double schmidt_entropy(const StateVector& state, const std::vector<int>& block_a) {
    const int nw = state.num_wires();
    std::vector<char> in_a(nw, 0);
    for (int w : block_a) {
        if (w < 0 || w >= nw) throw DimensionError("cut wire out of range");
        in_a[w] = 1;
    }
    std::vector<int> a, b;
    for (int w = 0; w < nw; ++w) (in_a[w] ? a : b).push_back(w);
    if (a.empty() || b.empty()) throw DimensionError("empty side of the cut");
    std::size_t da = 1, db = 1;
    for (int w : a) da *= state.dims()[w];
    for (int w : b) db *= state.dims()[w];
    Mat m(static_cast<Eigen::Index>(da), static_cast<Eigen::Index>(db));
    for (std::size_t i = 0; i < state.size(); ++i) {
        auto dg = state.digits(i);
        std::size_t ia = 0, ib = 0;
        for (int w : a) ia = ia * state.dims()[w] + dg[w];
        for (int w : b) ib = ib * state.dims()[w] + dg[w];
        m(static_cast<Eigen::Index>(ia), static_cast<Eigen::Index>(ib)) = state[i];
    }
    Mat rho = da <= db ? Mat(m * m.adjoint()) : Mat(m.adjoint() * m);
    rho /= rho.trace().real();
    Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        double l = es.eigenvalues()[i];
        if (l > 1e-300) s -= l * std::log(l);
    }
    return std::max(0.0, s);
}

double schmidt_entropy(const StateVector& state, int cut) {
    std::vector<int> a(std::max(0, cut));
    std::iota(a.begin(), a.end(), 0);
    return schmidt_entropy(state, a);
}

double qfi(const StateVector& state, const Observable& generator) {
    for (const auto& t : generator.terms)
        if (!is_hermitian(t.matrix)) throw NumericalError("generator term is not hermitian");
    if (std::abs(generator.constant.imag()) > 1e-12) throw NumericalError("generator constant is not real");
    StateVector g = apply_observable(state, generator);
    double mean = inner(state, g).real();
    double sq = g.amps().squaredNorm();
    return std::max(0.0, 4.0 * (sq - mean * mean));
}

SpinOps spin_ops(double s) {
    int d = static_cast<int>(std::lround(2 * s)) + 1;
    SpinOps o;
    o.Sz = Mat::Zero(d, d);
    o.Sp = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        double m = -s + i;
        o.Sz(i, i) = m;
        if (i + 1 < d) o.Sp(i + 1, i) = std::sqrt(s * (s + 1) - m * (m + 1));
    }
    o.Sm = o.Sp.adjoint();
    o.Sx = (o.Sp + o.Sm) * 0.5;
    o.Sy = (o.Sp - o.Sm) * cplx(0, -0.5);
    return o;
}

Mat qudit_pauli(int d, int a, int b) {
    Mat m = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        int ai = ((a % d) + d) % d, bi = ((b % d) + d) % d;
        m((i + ai) % d, i) = std::polar(1.0, 2 * kPi * bi * i / d);
    }
    // Exact values for qubits.
    if (d == 2) m = m.unaryExpr([](cplx z) { return cplx(std::round(z.real()), std::round(z.imag())); });
    return m;
}

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

StateVector random_state(const std::vector<int>& dims, Rng& rng) {
    check_size(dims);
    std::normal_distribution<double> nd;
    Vec a(static_cast<Eigen::Index>(product_of(dims)));
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        double re = nd(rng);
        double im = nd(rng);
        a[i] = cplx(re, im);
    }
    return StateVector(dims, a.normalized());
}

Mat random_unitary(int n, Rng& rng) {
    std::normal_distribution<double> nd;
    Mat g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double re = nd(rng);
            double im = nd(rng);
            g(i, j) = cplx(re, im);
        }
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ() * Mat::Identity(n, n);
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) q.col(j) *= std::polar(1.0, std::arg(r(j, j)));
    return q;
}

}  // namespace scartower
