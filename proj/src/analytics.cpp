#include "scartower/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace scartower {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double lfact(double x) { return std::lgamma(x + 1.0); }

void normalize_logs(DistributionSpec& d) {
    double mx = *std::max_element(d.log_weights.begin(), d.log_weights.end());
    if (!std::isfinite(mx)) throw NumericalError("distribution has no support");
    double s = 0.0;
    for (double l : d.log_weights) s += std::isfinite(l) ? std::exp(l - mx) : 0.0;
    d.p.resize(d.log_weights.size());
    for (std::size_t n = 0; n < d.p.size(); ++n)
        d.p[n] = std::isfinite(d.log_weights[n]) ? std::exp(d.log_weights[n] - mx) / s : 0.0;
}

void check_w(double w) {
    if (!(w >= 0.0 && w <= 1.0)) throw DomainError("weight w must lie in [0, 1]");
}

}  // namespace

double DistributionSpec::log_p(std::size_t n) const {
    return p[n] > 0.0 ? std::log(p[n]) : kNegInf;
}

int tower_max(const ModelSpec& model, int L) {
    switch (model.kind) {
        case ModelKind::aklt:
        case ModelKind::xx_spin_half: return L / 2;
        case ModelKind::domain_wall: return (L - 1) / 2;
        case ModelKind::dicke:
        case ModelKind::xx_spin1: return L;
    }
    return L;
}

double log_tower_norm(const ModelSpec& model, int L, int n) {
    switch (model.kind) {
        case ModelKind::aklt: return lfact(L / 2.0 + n) - lfact(L / 2.0 - n);
        case ModelKind::xx_spin_half: return lfact(n) + lfact(L - n) - lfact(L - 2 * n);
        case ModelKind::domain_wall: return lfact(L - n - 1) + lfact(n) - lfact(L - 2 * n - 1);
        case ModelKind::dicke:
        case ModelKind::xx_spin1: return 2 * lfact(n) + lfact(L) - lfact(n) - lfact(L - n);
    }
    return 0.0;
}

DistributionSpec pn_analytic(const ModelSpec& model, int L, double w) {
    check_w(w);
    if (L < 2) throw DomainError("chain length must be at least 2");
    DistributionSpec d;
    d.model = model.name;
    d.L = L;
    d.w = w;
    d.method = "closed-form";
    const int nmax = tower_max(model, L);
    if (w == 0.0 || w == 1.0) {
        if (w == 1.0 && nmax != L) throw DomainError("resource state vanishes at w = 1 for this model");
        d.log_weights.assign(static_cast<std::size_t>(nmax + 1), kNegInf);
        d.log_weights[w == 0.0 ? 0 : static_cast<std::size_t>(nmax)] = 0.0;
        normalize_logs(d);
        return d;
    }
    for (int n = 0; n <= nmax; ++n)
        d.log_weights.push_back(log_tower_norm(model, L, n) + n * std::log(w) + (L - n) * std::log1p(-w) - 2 * lfact(n));
    normalize_logs(d);
    return d;
}

DistributionSpec pn_transfer(const ModelSpec& model, int L, double w) {
    check_w(w);
    if (model.kind == ModelKind::domain_wall) throw DomainError("transfer method needs an onsite charge");
    MPS mps = build_resource_mps(model, L, w);
    std::vector<int> level(static_cast<std::size_t>(model.d));
    for (int s = 0; s < model.d; ++s) level[static_cast<std::size_t>(s)] = s;
    SectorLogWeights sw = sector_weights_transfer(mps, level);
    const int base = static_cast<int>(std::lround(model.base_charge(L) - model.min_charge(L)));
    DistributionSpec d;
    d.model = model.name;
    d.L = L;
    d.w = w;
    d.method = "transfer";
    for (int n = 0; n <= tower_max(model, L); ++n) {
        int c = base + n * model.q - sw.qmin;
        d.log_weights.push_back(c >= 0 && c < static_cast<int>(sw.log_weight.size()) ? sw.log_weight[static_cast<std::size_t>(c)] : kNegInf);
    }
    normalize_logs(d);
    return d;
}

DistributionSpec pn_brute(const ModelSpec& model, int L, double w) {
    StateVector s = resource_state(model, L, w);
    auto weights = charge_sector_weights(model, s, true);
    DistributionSpec d;
    d.model = model.name;
    d.L = L;
    d.w = w;
    d.method = "brute";
    const double q0 = model.base_charge(L);
    for (int n = 0; n <= tower_max(model, L); ++n) {
        double target = q0 + n * model.q, p = 0.0;
        for (const auto& sw : weights)
            if (std::abs(sw.charge - target) < 1e-8) p = sw.weight;
        d.log_weights.push_back(p > 0.0 ? std::log(p) : kNegInf);
    }
    normalize_logs(d);
    return d;
}

GaussianFit gaussian_params_analytic(const ModelSpec& model, int L, double w) {
    check_w(w);
    GaussianFit g;
    g.method = "analytic";
    switch (model.kind) {
        case ModelKind::aklt:
            g.n0 = std::sqrt(w) * L / 2.0;
            g.delta = std::sqrt(g.n0 * (1 - w) / (2 * (2 - w)));
            break;
        case ModelKind::xx_spin_half:
        case ModelKind::domain_wall: {
            double q = (1 - std::sqrt((1 - w) / (1 + 3 * w))) / 2;
            g.n0 = q * L;
            g.delta = std::sqrt(g.n0 * (1 - q) * (1 - 2 * q));
            break;
        }
        case ModelKind::dicke:
        case ModelKind::xx_spin1:
            g.n0 = w * L;
            g.delta = std::sqrt(g.n0 * (1 - w));
            break;
    }
    return g;
}

GaussianFit fit_gaussian(const DistributionSpec& dist) {
    const double mx = *std::max_element(dist.p.begin(), dist.p.end());
    int support = 0;
    for (double p : dist.p) support += p > 1e-300;
    if (support < 5) throw DomainError("fit needs at least five support points");
    std::vector<double> xs, ys;
    for (std::size_t n = 0; n < dist.p.size(); ++n)
        if (dist.p[n] >= 1e-3 * mx && dist.p[n] > 0.0) {
            xs.push_back(static_cast<double>(n));
            ys.push_back(std::log(dist.p[n]));
        }
    if (xs.size() < 3) throw DomainError("fit window holds fewer than three points");
    const double xm = [&] {
        double s = 0;
        for (double x : xs) s += x;
        return s / xs.size();
    }();
    Eigen::MatrixXd A(xs.size(), 3);
    Eigen::VectorXd b(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double t = xs[i] - xm;
        A(static_cast<Eigen::Index>(i), 0) = 1.0;
        A(static_cast<Eigen::Index>(i), 1) = t;
        A(static_cast<Eigen::Index>(i), 2) = t * t;
        b[static_cast<Eigen::Index>(i)] = ys[i];
    }
    Eigen::Vector3d c = A.colPivHouseholderQr().solve(b);
    if (!(c[2] < 0.0)) throw NumericalError("log-distribution is not concave over the fit window");
    GaussianFit g;
    g.method = "least-squares-fit";
    g.n0 = xm - c[1] / (2 * c[2]);
    g.delta = std::sqrt(-1.0 / (2 * c[2]));
    g.goodness = std::sqrt((A * c - b).squaredNorm() / static_cast<double>(xs.size()));
    return g;
}

ToleranceReport tolerance_probability(const DistributionSpec& dist, double n0, double delta_rel) {
    if (!(delta_rel > 0.0 && delta_rel < 1.0)) throw DomainError("relative tolerance must lie in (0, 1)");
    const double lo = (1 - delta_rel) * n0, hi = (1 + delta_rel) * n0;
    if (std::floor(hi) <= lo || (std::floor(hi) == hi && hi - 1 <= lo)) throw DomainError("empty tolerance window");
    ToleranceReport r;
    r.n0 = n0;
    r.delta_rel = delta_rel;
    for (std::size_t n = 0; n < dist.p.size(); ++n) {
        double x = static_cast<double>(n);
        if (x > lo && x < hi) r.p_within += dist.p[n];
    }
    r.p_within = std::clamp(r.p_within, 0.0, 1.0);
    r.epsilon = 1.0 - r.p_within;
    return r;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw DomainError("linear fit needs matching arrays of two or more points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
    return f;
}

double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i)
        s += std::abs((i < a.size() ? a[i] : 0.0) - (i < b.size() ? b[i] : 0.0));
    return 0.5 * s;
}

double stationary_point(const DistributionSpec& dist) {
    auto it = std::max_element(dist.p.begin(), dist.p.end());
    std::size_t k = static_cast<std::size_t>(it - dist.p.begin());
    if (k == 0 || k + 1 >= dist.p.size()) return static_cast<double>(k);
    double lm = std::log(dist.p[k - 1]), l0 = std::log(dist.p[k]), lp = std::log(dist.p[k + 1]);
    double den = lm - 2 * l0 + lp;
    return den < 0 ? k + 0.5 * (lm - lp) / den : static_cast<double>(k);
}

}  // namespace scartower
