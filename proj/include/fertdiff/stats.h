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
#ifndef FERTDIFF_STATS_H
#define FERTDIFF_STATS_H

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace fertdiff
{

double mean(std::span<const double> x);

/// Sample standard deviation (n - 1 denominator); 0 for a single value.
double sample_std(std::span<const double> x);

/// Linear-interpolation quantile of an already sorted sample, q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

struct FitMetrics {
    double rmse = 0.0;
    double mae = 0.0;
    double r2 = 0.0;
};

double rmse(std::span<const double> observed, std::span<const double> simulated);

/// RMSE, MAE and R^2 of simulated against observed. R^2 needs non-constant observations.
FitMetrics fit_metrics(std::span<const double> observed, std::span<const double> simulated);

/// K / (1 + exp(-r (t - t0)))
double logistic(double t, double K, double r, double t0);

struct LogisticFit {
    double K = 0.0;
    double r = 0.0;
    double t0 = 0.0;
    double residual_rmse = 0.0;
    int refinement_steps = 0;

    double operator()(double t) const
    {
        return logistic(t, K, r, t0);
    }
};

/**
 * Least-squares logistic S-curve through y[i] observed at t = first_year + i.
 * A coarse grid over K in [max(y), 1], r in (0, 3] and t0 in [first, last]
 * seeds a damped Gauss-Newton (Levenberg-Marquardt) refinement that keeps
 * K in (0, 1] and r > 0. Stops when the projected gradient norm drops below
 * 1e-8 or after 500 steps. Throws NumericError on a constant series.
 */
LogisticFit fit_logistic(std::span<const double> y, double first_year = 1.0);

struct KsResult {
    double d_statistic = 0.0;
    double p_value = 1.0;
};

enum class KsPValue
{
    asymptotic,
    /// permutation distribution by lattice-path counting; no-ties assumption, both samples <= 30
    exact,
};

/// Sup-distance between the two empirical CDFs, computed by a merged sweep.
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// Kolmogorov tail probability with the (sqrt(ne) + 0.12 + 0.11/sqrt(ne)) small-sample correction.
double ks_asymptotic_pvalue(double d, std::size_t n, std::size_t m);

/// P(D >= d) under random relabelling of n + m distinct pooled values.
double ks_exact_pvalue(double d, std::size_t n, std::size_t m);

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b,
                       KsPValue method = KsPValue::asymptotic);

struct DensityEstimate {
    std::vector<double> grid;
    std::vector<double> density;
    double bandwidth = 0.0;
};

struct GridSpec {
    std::size_t points = 512;
    double pad_bandwidths = 4.0;
    /// explicit range; when unset the grid spans [min - pad*h, max + pad*h]
    std::optional<double> lo;
    std::optional<double> hi;
};

/// 0.9 * min(sd, IQR/1.34) * n^(-1/5); falls back to sd when the IQR is zero.
double silverman_bandwidth(std::span<const double> sample);

/// Gaussian kernel density at x.
double kde_at(std::span<const double> sample, double bandwidth, double x);

/// Gaussian KDE on an even grid. Throws NumericError for n < 2 or zero spread.
DensityEstimate kde(std::span<const double> sample, const GridSpec& spec = {});

double trapezoid(std::span<const double> x, std::span<const double> y);

/// First year (first_year + index) with series >= x, if any. x must lie in (0, 1).
std::optional<int> threshold_year(std::span<const double> series, double x, int first_year = 1);

struct PeakVelocity {
    double peak = 0.0;
    int year = 0;
};

/// Largest first difference and the year it lands in; earliest year wins ties.
PeakVelocity peak_velocity(std::span<const double> series, int first_year = 1);

struct ConvergenceReport {
    std::vector<double> running_mean;
    double final_mean = 0.0;
    double cv = 0.0; ///< sample std / mean, as a fraction
};

ConvergenceReport convergence(std::span<const double> per_run_totals);

struct SampleSummary {
    double mean = 0.0;
    double variance = 0.0;
    double tail_mass = 0.0; ///< share strictly above the threshold
};

SampleSummary summarize(std::span<const double> sample, double tail_threshold = 1.25);

} // namespace fertdiff

#endif // FERTDIFF_STATS_H
