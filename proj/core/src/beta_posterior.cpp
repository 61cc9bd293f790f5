#include "playbook/beta_posterior.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace playbook {

namespace {

void check_shape(const BetaPosterior& p) {
    if (!(p.alpha > 0.0) || !(p.beta > 0.0)) {
        throw DomainError("beta parameters must be positive");
    }
}

// Continued fraction for the regularized incomplete beta, modified Lentz.
double incbeta_cf(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 3e-16;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 600; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

}  // namespace

double log_beta_function(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double regularized_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front =
        a * std::log(x) + b * std::log1p(-x) - log_beta_function(a, b);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * incbeta_cf(a, b, x) / a;
    }
    return 1.0 - front * incbeta_cf(b, a, 1.0 - x) / b;
}

BetaPosterior update(const BetaPosterior& prior, const GameObservation& obs) {
    check_shape(prior);
    if (obs.trials < 0 || obs.successes < 0 || obs.successes > obs.trials) {
        throw InvalidObservation("need 0 <= successes <= trials, got " +
                                 std::to_string(obs.successes) + "/" +
                                 std::to_string(obs.trials));
    }
    return {prior.alpha + obs.successes,
            prior.beta + (obs.trials - obs.successes)};
}

double mean(const BetaPosterior& p) {
    check_shape(p);
    return p.alpha / (p.alpha + p.beta);
}

double variance(const BetaPosterior& p) {
    check_shape(p);
    const double s = p.alpha + p.beta;
    return p.alpha * p.beta / (s * s * (s + 1.0));
}

PosteriorSummary summary(const BetaPosterior& p) {
    return {mean(p), variance(p)};
}

double pdf(const BetaPosterior& p, double x) {
    check_shape(p);
    if (x < 0.0 || x > 1.0) {
        throw DomainError("density argument outside [0, 1]");
    }
    if (x == 0.0 || x == 1.0) {
        const double shape = (x == 0.0) ? p.alpha : p.beta;
        if (shape > 1.0) return 0.0;
        if (shape == 1.0) return std::exp(-log_beta_function(p.alpha, p.beta));
        return std::numeric_limits<double>::infinity();
    }
    return std::exp((p.alpha - 1.0) * std::log(x) +
                    (p.beta - 1.0) * std::log1p(-x) -
                    log_beta_function(p.alpha, p.beta));
}

double cdf(const BetaPosterior& p, double x) {
    check_shape(p);
    if (x < 0.0 || x > 1.0) {
        throw DomainError("CDF argument outside [0, 1]");
    }
    return regularized_incomplete_beta(p.alpha, p.beta, x);
}

DensityPoint eval(const BetaPosterior& p, double x) {
    return {pdf(p, x), cdf(p, x)};
}

double quantile(const BetaPosterior& p, double prob) {
    check_shape(p);
    if (prob < 0.0 || prob > 1.0) {
        throw DomainError("quantile probability outside [0, 1]");
    }
    if (prob == 0.0) return 0.0;
    if (prob == 1.0) return 1.0;

    double lo = 0.0;
    double hi = 1.0;
    double x = p.alpha / (p.alpha + p.beta);
    for (int it = 0; it < 200; ++it) {
        const double f = regularized_incomplete_beta(p.alpha, p.beta, x) - prob;
        if (f > 0.0) {
            hi = x;
        } else {
            lo = x;
        }
        if (std::fabs(f) < 1e-13 || hi - lo < 1e-16) break;
        bool stepped = false;
        const double d = pdf(p, x);
        if (d > 0.0 && std::isfinite(d)) {
            const double nx = x - f / d;
            if (nx > lo && nx < hi) {
                x = nx;
                stepped = true;
            }
        }
        if (!stepped) x = 0.5 * (lo + hi);
    }
    return x;
}

HdiInterval equal_tailed_interval(const BetaPosterior& p, double mass) {
    if (!(mass > 0.0 && mass < 1.0)) {
        throw DomainError("interval mass must be in (0, 1)");
    }
    const double tail = (1.0 - mass) / 2.0;
    return {quantile(p, tail), quantile(p, tail + mass), mass};
}

HdiInterval hdi(const BetaPosterior& p, double mass) {
    check_shape(p);
    if (!(mass > 0.0 && mass < 1.0)) {
        throw DomainError("interval mass must be in (0, 1)");
    }
    if (p.alpha <= 1.0 || p.beta <= 1.0) {
        throw NotUnimodal("HDI needs alpha > 1 and beta > 1; got Beta(" +
                          std::to_string(p.alpha) + ", " +
                          std::to_string(p.beta) + ")");
    }

    // The interval [Q(t), Q(t + mass)] has unimodal width in t, so golden
    // section over the lower-tail probability narrows the search. Width is
    // quadratically flat at the optimum, which limits a pure width search to
    // about 1e-7 in t; the density balance f(Q(t)) = f(Q(t + mass)) changes
    // sign exactly at the optimum and stays well-conditioned, so a bisection
    // on it finishes the job.
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0;
    double b = 1.0 - mass;
    auto width_at = [&](double t) {
        return quantile(p, t + mass) - quantile(p, t);
    };
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double w1 = width_at(x1);
    double w2 = width_at(x2);
    while (b - a > 1e-6) {
        if (w1 <= w2) {
            b = x2;
            x2 = x1;
            w2 = w1;
            x1 = b - gr * (b - a);
            w1 = width_at(x1);
        } else {
            a = x1;
            x1 = x2;
            w1 = w2;
            x2 = a + gr * (b - a);
            w2 = width_at(x2);
        }
    }

    auto density_gap = [&](double t) {
        return pdf(p, quantile(p, t)) - pdf(p, quantile(p, t + mass));
    };
    double lo_t = std::max(0.0, a - 1e-6);
    double hi_t = std::min(1.0 - mass, b + 1e-6);
    if (density_gap(lo_t) > 0.0 || density_gap(hi_t) < 0.0) {
        // bracket missed the balance point; widen to the full range
        lo_t = 0.0;
        hi_t = 1.0 - mass;
    }
    for (int it = 0; it < 60 && hi_t - lo_t > 1e-13; ++it) {
        const double mid = 0.5 * (lo_t + hi_t);
        if (density_gap(mid) < 0.0) {
            lo_t = mid;
        } else {
            hi_t = mid;
        }
    }
    const double t = 0.5 * (lo_t + hi_t);
    return {quantile(p, t), quantile(p, t + mass), mass};
}

std::string posterior_trace_csv(const std::vector<TraceRow>& rows,
                                double hdi_mass) {
    std::string out = "round,formation_id,alpha,beta,mean,variance,hdi_lo,hdi_hi\n";
    char buf[256];
    for (const auto& r : rows) {
        const BetaPosterior p{r.alpha, r.beta};
        const auto s = summary(p);
        const auto h = hdi(p, hdi_mass);
        std::snprintf(buf, sizeof buf, "%d,%s,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n",
                      r.round, r.formation_id.c_str(), r.alpha, r.beta, s.mean,
                      s.variance, h.lo, h.hi);
        out += buf;
    }
    return out;
}

}  // namespace playbook
