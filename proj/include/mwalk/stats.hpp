#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mwalk/east.hpp"
#include "mwalk/gf2.hpp"
#include "mwalk/numeric.hpp"
#include "mwalk/spectral.hpp"
#include "mwalk/walk.hpp"

namespace mwalk::stats {

// Row-pattern tallies across k tracked vectors: the counted patterns fix the
// first k-2 entries to zero and the last two to (0,1) / (1,0) / (0,0) /
// (1,1) respectively.  For k = 2 the four buckets partition the rows.
struct PatternCounts {
    long target = 0;  // (0,...,0,1)
    long n1 = 0;      // (0,...,1,0)
    long n2 = 0;      // (0,...,0,0)
    long n3 = 0;      // (0,...,1,1)
    long rows = 0;    // rows scanned
};

// Rows 1..i_k - 1 of a block state (entries at or below a column's diagonal
// are structural, not pattern data).
PatternCounts pattern_counts(const walk::ColumnBlock& b);
// Abstract k-tuple of vectors scanned over rows 1..rows.
PatternCounts pattern_counts(std::span<const gf2::BitVec> vs, int rows);

// Exact occupation integral, per row, of the (0,...,0,1) pattern over the
// window [t1, t2]; a row is good when its integral reaches
// (t2 - t1) / 2^(k+1).
struct GoodRowReport {
    double t1 = 0, t2 = 0;
    int k = 0;
    double threshold = 0;
    std::vector<double> occupation;  // rows 1..i_k - 1
    std::vector<int> good_rows;
};
GoodRowReport good_rows(const walk::ColumnBlock& m0, const noise::NoiseField& w, double t1,
                        double t2);

// Time-average of f along an East-on-[m] run over A (a union of intervals),
// computed exactly from the piecewise-constant trajectory; f is indexed by
// the spectral-module East state codec.
struct TimeAverage {
    double integral = 0;
    double measure = 0;
    bool defined = false;
    double deviation() const { return defined ? std::abs(integral) / measure : 0.0; }
};
TimeAverage time_average_east(int m, std::uint64_t start_state, std::span<const double> f,
                              std::span<const std::pair<double, double>> A, std::uint64_t seed);

// The Chernoff-type bound 2/pi_min * exp(-gap * delta^2 |A| / (1+2b)^2).
double chernoff_bound(double gap, double delta, double measure, double b, double pi_min);

struct ChernoffReport {
    int runs = 0;
    int exceed = 0;
    double delta = 0;
    double measure = 0;
    double bound = 0;
    double frequency() const { return runs ? static_cast<double>(exceed) / runs : 0.0; }
};
// Ensemble exceedance frequency of |avg_A f| >= delta against the bound.
ChernoffReport chernoff_check_east(int m, std::uint64_t start_state, std::span<const double> f,
                                   std::span<const std::pair<double, double>> A, double delta,
                                   double b, int runs, std::uint64_t seed);

// Empirical tail of |X(t) - vhat*t| with the stretched-exponential fit
// -log P vs (a^2/t)^(1/3); the paper-side constants are unspecified, so this
// reports the fit, never a pass/fail constant.
struct FrontTailEstimate {
    std::vector<double> a;
    std::vector<double> p;
    numeric::LinearFit fit;       // over points with 0 < p < 1 in the valid regime
    int fit_points = 0;
    bool sparse_tail = false;     // fewer than 10 exceedances somewhere in the grid
    double valid_a_min = 0;       // sqrt(t) log^(3/2) t
};
FrontTailEstimate front_tail_estimate(std::span<const int> front_at_t, double t, double vhat,
                                      std::span<const double> a_grid);

// P(X(t) < n) per grid time: an upper bound proxy for the single-column TV
// profile.  Runs are independent seeds; aggregation is order-independent.
struct TvProxyProfile {
    int n = 0;
    int runs = 0;
    std::vector<double> times;
    std::vector<double> proxy;
    std::vector<double> se;
};
TvProxyProfile tv_proxy_profile(int n, std::span<const double> ts, int runs, std::uint64_t seed);

// Crossing time of a monotone profile at `level` by linear interpolation;
// NaN when the profile never crosses.
double profile_crossing(const TvProxyProfile& p, double level);

// Discrete-time rank experiment: evolve the row-major walk from the identity
// and record the F_2 rank of rows [r0,r1] x columns [c0,c1] at each step of
// the schedule.
struct RankTrajectory {
    std::uint64_t seed = 0;
    std::vector<std::pair<long long, int>> ranks;  // (step, rank)
};
std::vector<RankTrajectory> rank_experiment(int n, std::pair<int, int> rows,
                                            std::pair<int, int> cols,
                                            std::span<const long long> schedule,
                                            std::span<const std::uint64_t> seeds);

}  // namespace mwalk::stats
