// Outcome distributions p_n, Gaussian approximations and tolerance figures.
#pragma once

#include "scartower/models.hpp"

namespace scartower {

struct DistributionSpec {
    std::string model;
    int L = 0;
    double w = 0.0;
    std::string method;            // closed-form | transfer | brute
    std::vector<double> p;         // indexed by n = 0, 1, ...
    std::vector<double> log_weights;  // unnormalized log p_n
    double log_p(std::size_t n) const;
};

// Closed-form p_n from the tower norms (log-gamma arithmetic).
DistributionSpec pn_analytic(const ModelSpec& model, int L, double w);
// Exact p_n from the resource MPS via a charge-resolved transfer product.
DistributionSpec pn_transfer(const ModelSpec& model, int L, double w);
// Exact p_n from the dense resource state.
DistributionSpec pn_brute(const ModelSpec& model, int L, double w);

// Closed-form log N_n for the models that have one.
double log_tower_norm(const ModelSpec& model, int L, int n);
int tower_max(const ModelSpec& model, int L);

struct GaussianFit {
    double n0 = 0.0;
    double delta = 0.0;
    std::string method;  // analytic | least-squares-fit
    double goodness = 0.0;  // rms residual of the quadratic fit to log p
};

GaussianFit gaussian_params_analytic(const ModelSpec& model, int L, double w);
// Quadratic fit of log p_n over p_n >= 1e-3 max.
GaussianFit fit_gaussian(const DistributionSpec& dist);

struct ToleranceReport {
    double n0 = 0.0;
    double delta_rel = 0.0;
    double p_within = 0.0;
    double epsilon = 0.0;
};
ToleranceReport tolerance_probability(const DistributionSpec& dist, double n0, double delta_rel);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

double total_variation(const std::vector<double>& a, const std::vector<double>& b);

// Index of the largest p_n refined by a parabola through its neighbours.
double stationary_point(const DistributionSpec& dist);

}  // namespace scartower
