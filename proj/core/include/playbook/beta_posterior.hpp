#pragma once

#include <string>
#include <vector>

#include "playbook/errors.hpp"

namespace playbook {

/// One game's worth of evidence: successes over corner-kicks observed.
struct GameObservation {
    int trials = 0;
    int successes = 0;
};

/// Belief about a formation's success probability. Conjugate to the binomial
/// likelihood, so sequential updating stays in closed form.
struct BetaPosterior {
    double alpha = 2.0;
    double beta = 2.0;
};

struct PosteriorSummary {
    double mean = 0.0;
    double variance = 0.0;
};

/// Narrowest interval holding `mass` of the posterior.
struct HdiInterval {
    double lo = 0.0;
    double hi = 1.0;
    double mass = 0.95;

    double width() const { return hi - lo; }
};

struct DensityPoint {
    double pdf = 0.0;
    double cdf = 0.0;
};

/// Folds one observation into the posterior: (a, b) -> (a + k, b + n - k).
/// Associative over batches.
BetaPosterior update(const BetaPosterior& prior, const GameObservation& obs);

double mean(const BetaPosterior& p);
double variance(const BetaPosterior& p);
PosteriorSummary summary(const BetaPosterior& p);

/// Density and regularized-incomplete-beta CDF at x in [0, 1].
DensityPoint eval(const BetaPosterior& p, double x);
double pdf(const BetaPosterior& p, double x);
double cdf(const BetaPosterior& p, double x);

/// Inverse CDF, solved by safeguarded Newton; |cdf(quantile(t)) - t| <= 1e-11.
double quantile(const BetaPosterior& p, double prob);

/// Highest density interval for a unimodal posterior (alpha > 1, beta > 1),
/// found by golden-section search over the lower-tail probability. Throws
/// NotUnimodal otherwise; callers wanting a fallback can use
/// equal_tailed_interval and flag it.
HdiInterval hdi(const BetaPosterior& p, double mass = 0.95);

HdiInterval equal_tailed_interval(const BetaPosterior& p, double mass = 0.95);

double log_beta_function(double a, double b);
double regularized_incomplete_beta(double a, double b, double x);

/// Row of the posterior trace export.
struct TraceRow {
    int round = 0;
    std::string formation_id;
    double alpha = 0.0;
    double beta = 0.0;
};

/// CSV: round,formation_id,alpha,beta,mean,variance,hdi_lo,hdi_hi
std::string posterior_trace_csv(const std::vector<TraceRow>& rows,
                                double hdi_mass = 0.95);

}  // namespace playbook
