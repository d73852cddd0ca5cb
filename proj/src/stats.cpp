/*
* Copyright (C) 2026 fertdiff contributors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*/
#include "fertdiff/stats.h"
#include "fertdiff/error.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fertdiff
{

namespace
{

void require_same_nonempty(std::span<const double> a, std::span<const double> b, const char* who)
{
    if (a.size() != b.size()) {
        throw std::invalid_argument(std::string(who) + ": series lengths differ");
    }
    if (a.empty()) {
        throw std::invalid_argument(std::string(who) + ": empty series");
    }
}

} // namespace

double mean(std::span<const double> x)
{
    if (x.empty()) {
        throw std::invalid_argument("mean: empty sample");
    }
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_std(std::span<const double> x)
{
    if (x.size() < 2) {
        return 0.0;
    }
    const double mu = mean(x);
    double ss = 0.0;
    for (double v : x) {
        ss += (v - mu) * (v - mu);
    }
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

double quantile_sorted(std::span<const double> sorted, double q)
{
    if (sorted.empty()) {
        throw std::invalid_argument("quantile_sorted: empty sample");
    }
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double rmse(std::span<const double> observed, std::span<const double> simulated)
{
    require_same_nonempty(observed, simulated, "rmse");
    double ss = 0.0;
    for (std::size_t t = 0; t < observed.size(); ++t) {
        const double e = simulated[t] - observed[t];
        ss += e * e;
    }
    return std::sqrt(ss / static_cast<double>(observed.size()));
}

FitMetrics fit_metrics(std::span<const double> observed, std::span<const double> simulated)
{
    require_same_nonempty(observed, simulated, "fit_metrics");
    const double n = static_cast<double>(observed.size());
    const double y_bar = mean(observed);
    double ss_res = 0.0, ss_tot = 0.0, abs_sum = 0.0;
    for (std::size_t t = 0; t < observed.size(); ++t) {
        const double e = observed[t] - simulated[t];
        ss_res += e * e;
        abs_sum += std::abs(e);
        ss_tot += (observed[t] - y_bar) * (observed[t] - y_bar);
    }
    if (!(ss_tot > 0.0)) {
        throw NumericError("fit_metrics: observed series has zero variance, R^2 undefined");
    }
    return {std::sqrt(ss_res / n), abs_sum / n, 1.0 - ss_res / ss_tot};
}

double logistic(double t, double K, double r, double t0)
{
    return K / (1.0 + std::exp(-r * (t - t0)));
}

namespace
{

double logistic_sse(std::span<const double> y, double first_year, double K, double r, double t0)
{
    double sse = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double e = logistic(first_year + static_cast<double>(i), K, r, t0) - y[i];
        sse += e * e;
    }
    return sse;
}

constexpr double kMinRate = 1e-8;

} // namespace

LogisticFit fit_logistic(std::span<const double> y, double first_year)
{
    if (y.size() < 4) {
        throw std::invalid_argument("fit_logistic: need at least 4 points");
    }
    for (double v : y) {
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
            throw std::invalid_argument("fit_logistic: values must lie in [0, 1]");
        }
    }
    const auto [lo_it, hi_it] = std::minmax_element(y.begin(), y.end());
    if (*hi_it - *lo_it < 1e-12) {
        throw NumericError("fit_logistic: constant series has no S-curve");
    }

    const double t_first = first_year;
    const double t_last = first_year + static_cast<double>(y.size() - 1);
    const double k_lo = *hi_it;

    // coarse grid
    double best_sse = std::numeric_limits<double>::infinity();
    Eigen::Vector3d p(k_lo, 1.0, 0.5 * (t_first + t_last));
    constexpr int k_steps = 20;
    constexpr int r_steps = 60;
    const int t_steps = static_cast<int>(std::ceil((t_last - t_first) / 0.25));
    for (int a = 0; a <= k_steps; ++a) {
        const double K = k_lo + (1.0 - k_lo) * a / k_steps;
        for (int b = 1; b <= r_steps; ++b) {
            const double r = 3.0 * b / r_steps;
            for (int c = 0; c <= t_steps; ++c) {
                const double t0 = std::min(t_last, t_first + 0.25 * c);
                const double sse = logistic_sse(y, first_year, K, r, t0);
                if (sse < best_sse) {
                    best_sse = sse;
                    p = {K, r, t0};
                }
            }
        }
    }

    // damped refinement; K is held at its upper bound while the gradient pushes past it
    const std::size_t n = y.size();
    Eigen::MatrixXd J(n, 3);
    Eigen::VectorXd e(n);
    double lambda = 1e-3;
    double sse = best_sse;
    int steps = 0;
    for (; steps < 500; ++steps) {
        for (std::size_t i = 0; i < n; ++i) {
            const double t = first_year + static_cast<double>(i);
            const double s = 1.0 / (1.0 + std::exp(-p[1] * (t - p[2])));
            const auto row = static_cast<Eigen::Index>(i);
            e[row] = p[0] * s - y[i];
            J(row, 0) = s;
            J(row, 1) = p[0] * s * (1.0 - s) * (t - p[2]);
            J(row, 2) = -p[0] * p[1] * s * (1.0 - s);
        }
        Eigen::Vector3d g = J.transpose() * e;
        Eigen::Matrix3d H = J.transpose() * J;
        const bool k_pinned = p[0] >= 1.0 && g[0] < 0.0;
        if (k_pinned) {
            g[0] = 0.0;
            H.row(0).setZero();
            H.col(0).setZero();
            H(0, 0) = 1.0;
        }
        if (g.norm() < 1e-8) {
            break;
        }
        bool accepted = false;
        while (!accepted && lambda < 1e12) {
            Eigen::Matrix3d A = H;
            A.diagonal() += lambda * H.diagonal().cwiseMax(1e-12);
            Eigen::Vector3d delta = A.ldlt().solve(-g);
            Eigen::Vector3d trial = p + delta;
            trial[0] = std::clamp(trial[0], 1e-12, 1.0);
            trial[1] = std::max(trial[1], kMinRate);
            const double trial_sse = logistic_sse(y, first_year, trial[0], trial[1], trial[2]);
            if (trial_sse < sse) {
                p = trial;
                sse = trial_sse;
                lambda = std::max(lambda / 10.0, 1e-15);
                accepted = true;
            }
            else {
                lambda *= 10.0;
            }
        }
        if (!accepted) {
            break; // no descent direction left at machine precision
        }
    }

    LogisticFit fit;
    fit.K = p[0];
    fit.r = p[1];
    fit.t0 = p[2];
    fit.residual_rmse = std::sqrt(sse / static_cast<double>(n));
    fit.refinement_steps = steps;
    return fit;
}

double ks_statistic(std::span<const double> a, std::span<const double> b)
{
    if (a.empty() || b.empty()) {
        throw std::invalid_argument("ks_statistic: samples must be non-empty");
    }
    std::vector<double> x(a.begin(), a.end()), z(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(z.begin(), z.end());
    const auto n = static_cast<std::int64_t>(x.size());
    const auto m = static_cast<std::int64_t>(z.size());
    std::int64_t i = 0, j = 0, best = 0;
    while (i < n && j < m) {
        const double v = std::min(x[static_cast<std::size_t>(i)], z[static_cast<std::size_t>(j)]);
        while (i < n && x[static_cast<std::size_t>(i)] == v) {
            ++i;
        }
        while (j < m && z[static_cast<std::size_t>(j)] == v) {
            ++j;
        }
        best = std::max(best, std::abs(i * m - j * n));
    }
    return static_cast<double>(best) / static_cast<double>(n * m);
}

double ks_asymptotic_pvalue(double d, std::size_t n, std::size_t m)
{
    if (n == 0 || m == 0) {
        throw std::invalid_argument("ks_asymptotic_pvalue: empty sample");
    }
    const double ne = static_cast<double>(n) * static_cast<double>(m) / static_cast<double>(n + m);
    const double root = std::sqrt(ne);
    const double lambda = (root + 0.12 + 0.11 / root) * d;
    if (lambda < 0.2) {
        return 1.0; // the series equals 1 to double precision here
    }
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j < 100000; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += sign * term;
        if (term < 1e-12) {
            break;
        }
        sign = -sign;
    }
    const double p = 2.0 * sum;
    return std::clamp(p, std::numeric_limits<double>::min(), 1.0);
}

double ks_exact_pvalue(double d, std::size_t n, std::size_t m)
{
    if (n == 0 || m == 0) {
        throw std::invalid_argument("ks_exact_pvalue: empty sample");
    }
    if (n > 30 || m > 30) {
        throw std::invalid_argument("ks_exact_pvalue: exact p-values are limited to samples of at most 30");
    }
    const auto nn = static_cast<std::int64_t>(n);
    const auto mm = static_cast<std::int64_t>(m);
    // D * n * m is an integer for any attainable statistic
    const auto d_scaled = static_cast<std::int64_t>(std::llround(d * static_cast<double>(nn * mm)));
    if (d_scaled <= 0) {
        return 1.0;
    }
    // paths from (0,0) to (n,m) that stay strictly inside |i*m - j*n| < d_scaled
    std::vector<double> row(m + 1, 0.0);
    for (std::int64_t i = 0; i <= nn; ++i) {
        for (std::int64_t j = 0; j <= mm; ++j) {
            const auto idx = static_cast<std::size_t>(j);
            if (std::abs(i * mm - j * nn) >= d_scaled) {
                row[idx] = 0.0;
                continue;
            }
            if (i == 0 && j == 0) {
                row[idx] = 1.0;
                continue;
            }
            const double from_left = j > 0 ? row[idx - 1] : 0.0;
            const double from_above = i > 0 ? row[idx] : 0.0;
            row[idx] = from_left + from_above;
        }
    }
    const double inside = row[m];
    double total = 1.0; // C(n + m, n)
    for (std::size_t k = 1; k <= n; ++k) {
        total = total * static_cast<double>(m + k) / static_cast<double>(k);
    }
    return std::clamp(1.0 - inside / total, std::numeric_limits<double>::min(), 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b, KsPValue method)
{
    KsResult r;
    r.d_statistic = ks_statistic(a, b);
    r.p_value = method == KsPValue::exact ? ks_exact_pvalue(r.d_statistic, a.size(), b.size())
                                           : ks_asymptotic_pvalue(r.d_statistic, a.size(), b.size());
    return r;
}

double silverman_bandwidth(std::span<const double> sample)
{
    if (sample.size() < 2) {
        throw NumericError("silverman_bandwidth: need at least two observations");
    }
    const double sd = sample_std(sample);
    if (!(sd > 0.0)) {
        throw NumericError("silverman_bandwidth: sample has zero spread");
    }
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
    const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
    return 0.9 * spread * std::pow(static_cast<double>(sample.size()), -0.2);
}

double kde_at(std::span<const double> sample, double bandwidth, double x)
{
    const double norm = 1.0 / (static_cast<double>(sample.size()) * bandwidth * std::sqrt(2.0 * std::numbers::pi));
    double sum = 0.0;
    for (double xi : sample) {
        const double u = (x - xi) / bandwidth;
        sum += std::exp(-0.5 * u * u);
    }
    return norm * sum;
}

DensityEstimate kde(std::span<const double> sample, const GridSpec& spec)
{
    if (spec.points < 2) {
        throw std::invalid_argument("kde: grid needs at least two points");
    }
    DensityEstimate est;
    est.bandwidth = silverman_bandwidth(sample);
    const auto [mn, mx] = std::minmax_element(sample.begin(), sample.end());
    const double lo = spec.lo.value_or(*mn - spec.pad_bandwidths * est.bandwidth);
    const double hi = spec.hi.value_or(*mx + spec.pad_bandwidths * est.bandwidth);
    est.grid.resize(spec.points);
    est.density.resize(spec.points);
    const double step = (hi - lo) / static_cast<double>(spec.points - 1);
    for (std::size_t k = 0; k < spec.points; ++k) {
        est.grid[k] = lo + step * static_cast<double>(k);
        est.density[k] = kde_at(sample, est.bandwidth, est.grid[k]);
    }
    return est;
}

double trapezoid(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size()) {
        throw std::invalid_argument("trapezoid: size mismatch");
    }
    double area = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        area += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    }
    return area;
}

std::optional<int> threshold_year(std::span<const double> series, double x, int first_year)
{
    if (!(x > 0.0 && x < 1.0)) {
        throw std::invalid_argument("threshold_year: threshold must lie in (0, 1)");
    }
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series[i] >= x) {
            return first_year + static_cast<int>(i);
        }
    }
    return std::nullopt;
}

PeakVelocity peak_velocity(std::span<const double> series, int first_year)
{
    if (series.size() < 2) {
        throw std::invalid_argument("peak_velocity: need at least two points");
    }
    PeakVelocity best{series[1] - series[0], first_year + 1};
    for (std::size_t i = 2; i < series.size(); ++i) {
        const double v = series[i] - series[i - 1];
        if (v > best.peak) {
            best = {v, first_year + static_cast<int>(i)};
        }
    }
    return best;
}

ConvergenceReport convergence(std::span<const double> per_run_totals)
{
    if (per_run_totals.size() < 2) {
        throw std::invalid_argument("convergence: need at least two runs");
    }
    ConvergenceReport rep;
    rep.running_mean.reserve(per_run_totals.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < per_run_totals.size(); ++k) {
        sum += per_run_totals[k];
        rep.running_mean.push_back(sum / static_cast<double>(k + 1));
    }
    rep.final_mean = rep.running_mean.back();
    if (rep.final_mean == 0.0) {
        throw NumericError("convergence: mean is zero, coefficient of variation undefined");
    }
    rep.cv = sample_std(per_run_totals) / std::abs(rep.final_mean);
    return rep;
}

SampleSummary summarize(std::span<const double> sample, double tail_threshold)
{
    if (sample.empty()) {
        throw std::invalid_argument("summarize: empty sample");
    }
    SampleSummary s;
    s.mean = mean(sample);
    const double sd = sample_std(sample);
    s.variance = sd * sd;
    const auto above = std::count_if(sample.begin(), sample.end(), [tail_threshold](double v) {
        return v > tail_threshold;
    });
    s.tail_mass = static_cast<double>(above) / static_cast<double>(sample.size());
    return s;
}

} // namespace fertdiff
