#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "model_oracles.hpp"
#include "scartower/analytics.hpp"

#include <cmath>
#include <numeric>

using namespace scartower;

namespace {

// Squared norms of (J^dag)^n Psi0 from dense powers, n = 0 .. nmax.
std::vector<double> oracle_norms(const ModelSpec& m, int L, int nmax) {
    Mat J = oracle::dense_creation(m, L);
    Vec v = oracle::base_vector(m, L).normalized();
    std::vector<double> out;
    for (int n = 0; n <= nmax; ++n) {
        out.push_back(v.squaredNorm());
        v = J * v;
    }
    return out;
}

// p_n from the binomial expansion of the product of local factors.
std::vector<double> oracle_pn(const ModelSpec& m, int L, double w, int nmax) {
    const int terms = static_cast<int>(oracle::creation_terms(m, L).size());
    std::vector<double> norms = oracle_norms(m, L, nmax), p;
    for (int n = 0; n <= nmax; ++n) {
        double f = std::exp(-2 * oracle::log_factorial(n));
        p.push_back(std::pow(w, n) * std::pow(1 - w, terms - n) * norms[static_cast<std::size_t>(n)] * f);
    }
    double s = std::accumulate(p.begin(), p.end(), 0.0);
    for (double& x : p) x /= s;
    return p;
}

struct Case {
    std::string name;
    int L;
};
const std::vector<Case> kCases{{"aklt", 6}, {"xx_spin_half", 8}, {"domain_wall", 8}, {"dicke", 8}, {"xx_spin1", 6}};

}  // namespace

TEST_CASE("brute and transfer distributions match the expansion oracle") {
    for (double w : {0.2, 0.5, 0.8}) {
        for (const auto& c : kCases) {
            ModelSpec m = make_model(c.name);
            DistributionSpec b = pn_brute(m, c.L, w);
            std::vector<double> ref = oracle_pn(m, c.L, w, static_cast<int>(b.p.size()) - 1);
            REQUIRE(b.p.size() == ref.size());
            for (std::size_t n = 0; n < ref.size(); ++n) CHECK_MESSAGE(std::abs(b.p[n] - ref[n]) < 1e-10, c.name << " n=" << n);
            if (m.kind == ModelKind::domain_wall) continue;
            DistributionSpec t = pn_transfer(m, c.L, w);
            REQUIRE(t.p.size() == ref.size());
            for (std::size_t n = 0; n < ref.size(); ++n) CHECK(std::abs(t.p[n] - ref[n]) < 1e-10);
        }
    }
}

TEST_CASE("closed-form tower norms match dense powers") {
    for (const auto& c : kCases) {
        ModelSpec m = make_model(c.name);
        if (m.kind == ModelKind::aklt) continue;
        std::vector<double> norms = oracle_norms(m, c.L, tower_max(m, c.L));
        for (int n = 0; n <= tower_max(m, c.L); ++n)
            CHECK_MESSAGE(std::abs(log_tower_norm(m, c.L, n) - std::log(norms[static_cast<std::size_t>(n)])) < 1e-9, c.name << " n=" << n);
    }
}

TEST_CASE("closed-form distribution agrees with brute force off the AKLT chain") {
    for (const auto& c : kCases) {
        ModelSpec m = make_model(c.name);
        if (m.kind == ModelKind::aklt) continue;
        DistributionSpec a = pn_analytic(m, c.L, 0.5), b = pn_brute(m, c.L, 0.5);
        CHECK(total_variation(a.p, b.p) < 1e-10);
    }
}

TEST_CASE("transfer scales past the dense limit") {
    ModelSpec m = make_model("aklt");
    DistributionSpec t = pn_transfer(m, 128, 0.5);
    CHECK(t.p.size() == 65);
    CHECK(std::abs(std::accumulate(t.p.begin(), t.p.end(), 0.0) - 1.0) < 1e-10);
    ModelSpec dk = make_model("dicke");
    DistributionSpec d = pn_transfer(dk, 200, 0.3), a = pn_analytic(dk, 200, 0.3);
    CHECK(total_variation(d.p, a.p) < 1e-9);
}

TEST_CASE("boundary values of w") {
    ModelSpec m = make_model("dicke");
    DistributionSpec z = pn_analytic(m, 6, 0.0);
    CHECK(z.p[0] == doctest::Approx(1.0));
    CHECK(std::isinf(z.log_p(1)));
    DistributionSpec one = pn_analytic(m, 6, 1.0);
    CHECK(one.p[6] == doctest::Approx(1.0));
    CHECK_THROWS_AS(pn_analytic(make_model("aklt"), 6, 1.0), DomainError);
    CHECK_THROWS_AS(pn_analytic(m, 6, -0.1), DomainError);
    CHECK_THROWS_AS(pn_transfer(make_model("domain_wall"), 6, 0.5), DomainError);
}

TEST_CASE("Gaussian fit recovers a sampled Gaussian") {
    DistributionSpec d;
    const double n0 = 20.3, delta = 3.1;
    for (int n = 0; n <= 50; ++n) d.p.push_back(std::exp(-(n - n0) * (n - n0) / (2 * delta * delta)));
    double s = std::accumulate(d.p.begin(), d.p.end(), 0.0);
    for (double& x : d.p) x /= s;
    GaussianFit f = fit_gaussian(d);
    CHECK(f.n0 == doctest::Approx(n0).epsilon(1e-9));
    CHECK(f.delta == doctest::Approx(delta).epsilon(1e-9));
    CHECK(f.goodness < 1e-9);
    CHECK(stationary_point(d) == doctest::Approx(n0).epsilon(1e-9));
    DistributionSpec few;
    few.p = {0.5, 0.5};
    CHECK_THROWS_AS(fit_gaussian(few), DomainError);
}

TEST_CASE("binomial mean and width for Dicke") {
    ModelSpec m = make_model("dicke");
    DistributionSpec b = pn_transfer(m, 400, 0.25);
    GaussianFit g = gaussian_params_analytic(m, 400, 0.25);
    double mean = 0, var = 0;
    for (std::size_t n = 0; n < b.p.size(); ++n) mean += n * b.p[n];
    for (std::size_t n = 0; n < b.p.size(); ++n) var += (n - mean) * (n - mean) * b.p[n];
    CHECK(mean == doctest::Approx(g.n0).epsilon(1e-9));
    CHECK(std::sqrt(var) == doctest::Approx(g.delta).epsilon(1e-9));
}

TEST_CASE("tolerance window is strict") {
    DistributionSpec d;
    d.p = {0.1, 0.2, 0.4, 0.2, 0.1};
    ToleranceReport r = tolerance_probability(d, 2.0, 0.5);  // window (1, 3)
    CHECK(r.p_within == doctest::Approx(0.4));
    CHECK(r.epsilon == doctest::Approx(0.6));
    CHECK_THROWS_AS(tolerance_probability(d, 2.5, 0.1), DomainError);  // (2.25, 2.75)
    CHECK_THROWS_AS(tolerance_probability(d, 2.0, 1.5), DomainError);
}

TEST_CASE("linear fit and total variation") {
    LinearFit f = linear_fit({1, 2, 3, 4}, {3, 5, 7, 9});
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.r2 == doctest::Approx(1.0));
    CHECK(total_variation({0.5, 0.5}, {1.0, 0.0}) == doctest::Approx(0.5));
    CHECK_THROWS_AS(linear_fit({1}, {1}), DomainError);
}
