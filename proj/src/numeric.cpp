#include "mwalk/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mwalk::numeric {

MeanSd mean_sd(std::span<const double> xs) {
    MeanSd out;
    out.count = xs.size();
    if (xs.empty()) return out;
    double s = 0.0;
    for (double x : xs) s += x;
    out.mean = s / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - out.mean) * (x - out.mean);
        out.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return out;
}

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("linear_fit: need >= 2 paired points");
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

namespace {

// Series expansion of P(a,x), valid for x < a+1.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < 10000; ++k) {
        term *= x / (a + k);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a,x), valid for x >= a+1 (Lentz).
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_p(double a, double x) {
    if (x < 0 || a <= 0) throw std::invalid_argument("gamma_p: domain");
    if (x == 0) return 0.0;
    return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
    if (x < 0 || a <= 0) throw std::invalid_argument("gamma_q: domain");
    if (x == 0) return 1.0;
    return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double chi_square_pvalue(double stat, int dof) {
    if (dof <= 0) throw std::invalid_argument("chi_square_pvalue: dof");
    if (stat <= 0) return 1.0;
    return gamma_q(0.5 * dof, 0.5 * stat);
}

double chi_square_test(std::span<const double> observed, std::span<const double> expected,
                       double min_expected, double* stat_out, int* dof_out) {
    if (observed.size() != expected.size() || observed.empty())
        throw std::invalid_argument("chi_square_test: size mismatch");
    // Merge sparse bins left to right.
    std::vector<double> obs, exp;
    double co = 0, ce = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        co += observed[i];
        ce += expected[i];
        if (ce >= min_expected) {
            obs.push_back(co);
            exp.push_back(ce);
            co = ce = 0;
        }
    }
    if (ce > 0 || co > 0) {
        if (exp.empty()) {
            obs.push_back(co);
            exp.push_back(ce);
        } else {
            obs.back() += co;
            exp.back() += ce;
        }
    }
    if (obs.size() < 2) throw std::invalid_argument("chi_square_test: too few usable bins");
    double stat = 0.0;
    for (std::size_t i = 0; i < obs.size(); ++i) stat += (obs[i] - exp[i]) * (obs[i] - exp[i]) / exp[i];
    const int dof = static_cast<int>(obs.size()) - 1;
    if (stat_out) *stat_out = stat;
    if (dof_out) *dof_out = dof;
    return chi_square_pvalue(stat, dof);
}

double ks_statistic(std::span<const double> sorted_cdf_values) {
    const double n = static_cast<double>(sorted_cdf_values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted_cdf_values.size(); ++i) {
        const double f = sorted_cdf_values[i];
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

double ks_pvalue(double d, std::size_t n) {
    const double sn = std::sqrt(static_cast<double>(n));
    const double lambda = (sn + 0.12 + 0.11 / sn) * d;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = 2.0 * ((k & 1) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
        sum += term;
        if (std::abs(term) < 1e-12) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

double binomial_log_pmf(long k, long n, double p) {
    if (k < 0 || k > n) return -1e300;
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
           k * std::log(p) + (n - k) * std::log1p(-p);
}

double tail_exponential_rate(std::vector<double> samples, double quantile) {
    if (samples.size() < 10) throw std::invalid_argument("tail_exponential_rate: too few samples");
    std::sort(samples.begin(), samples.end());
    const std::size_t cut = static_cast<std::size_t>(quantile * static_cast<double>(samples.size()));
    const double u = samples[cut];
    double excess = 0.0;
    std::size_t m = 0;
    for (std::size_t i = cut; i < samples.size(); ++i) {
        if (samples[i] > u) {
            excess += samples[i] - u;
            ++m;
        }
    }
    if (m == 0 || excess <= 0) throw std::runtime_error("tail_exponential_rate: degenerate tail");
    return static_cast<double>(m) / excess;
}

}  // namespace mwalk::numeric
