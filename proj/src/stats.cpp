#include "mwalk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mwalk/parallel.hpp"
#include "mwalk/rng.hpp"

namespace mwalk::stats {

namespace {

PatternCounts tally(int k, int rows, auto&& bit_at /* (row, j) -> bool */) {
    if (k < 2) throw std::invalid_argument("pattern_counts: need k >= 2");
    PatternCounts out;
    out.rows = rows;
    for (int x = 1; x <= rows; ++x) {
        bool head_zero = true;
        for (int j = 0; j < k - 2 && head_zero; ++j) head_zero = !bit_at(x, j);
        if (!head_zero) continue;
        const bool a = bit_at(x, k - 2), b = bit_at(x, k - 1);
        if (!a && b)
            ++out.target;
        else if (a && !b)
            ++out.n1;
        else if (!a && !b)
            ++out.n2;
        else
            ++out.n3;
    }
    return out;
}

}  // namespace

PatternCounts pattern_counts(const walk::ColumnBlock& b) {
    return tally(b.k(), b.indices.back() - 1,
                 [&b](int row, int j) { return b.get(row, j); });
}

PatternCounts pattern_counts(std::span<const gf2::BitVec> vs, int rows) {
    for (const auto& v : vs)
        if (v.len() < rows) throw std::invalid_argument("pattern_counts: vector shorter than row range");
    return tally(static_cast<int>(vs.size()), rows,
                 [vs](int row, int j) { return vs[static_cast<std::size_t>(j)].get(row - 1); });
}

GoodRowReport good_rows(const walk::ColumnBlock& m0, const noise::NoiseField& w, double t1,
                        double t2) {
    if (!(0 <= t1 && t1 <= t2) || t2 > w.horizon() * (1 + 1e-15) + 1e-12)
        throw std::invalid_argument("good_rows: bad window");
    const int k = m0.k();
    const int nrows = m0.indices.back() - 1;
    GoodRowReport rep;
    rep.t1 = t1;
    rep.t2 = t2;
    rep.k = k;
    rep.threshold = (t2 - t1) / std::pow(2.0, k + 1);
    rep.occupation.assign(static_cast<std::size_t>(nrows), 0.0);

    walk::ColumnBlock m = m0;
    auto matches = [&m, k](int row) {
        for (int j = 0; j < k - 1; ++j)
            if (m.get(row, j)) return false;
        return m.get(row, k - 1);
    };

    std::vector<std::uint8_t> match(static_cast<std::size_t>(nrows));
    std::vector<double> last(static_cast<std::size_t>(nrows), t1);
    auto evs = w.events();
    std::size_t i = 0;
    for (; i < evs.size() && evs[i].time <= t1; ++i) walk::apply_ring(m, evs[i].row, evs[i].mark);
    for (int x = 1; x <= nrows; ++x) match[static_cast<std::size_t>(x - 1)] = matches(x);

    for (; i < evs.size() && evs[i].time <= t2; ++i) {
        const int x = evs[i].row;
        walk::apply_ring(m, x, evs[i].mark);
        if (x <= nrows) {
            auto& mx = match[static_cast<std::size_t>(x - 1)];
            const std::uint8_t now = matches(x);
            if (now != mx) {
                if (mx) rep.occupation[static_cast<std::size_t>(x - 1)] += evs[i].time - last[static_cast<std::size_t>(x - 1)];
                last[static_cast<std::size_t>(x - 1)] = evs[i].time;
                mx = now;
            }
        }
    }
    for (int x = 1; x <= nrows; ++x) {
        if (match[static_cast<std::size_t>(x - 1)])
            rep.occupation[static_cast<std::size_t>(x - 1)] += t2 - last[static_cast<std::size_t>(x - 1)];
        if (rep.occupation[static_cast<std::size_t>(x - 1)] >= rep.threshold) rep.good_rows.push_back(x);
    }
    return rep;
}

TimeAverage time_average_east(int m, std::uint64_t start_state, std::span<const double> f,
                              std::span<const std::pair<double, double>> A, std::uint64_t seed) {
    if (f.size() != (1ull << m)) throw std::invalid_argument("time_average_east: f must index 2^m states");
    TimeAverage out;
    for (const auto& [s, e] : A) out.measure += e - s;
    if (out.measure <= 0) return out;  // undefined, flagged
    out.defined = true;
    double t_end = 0;
    for (const auto& [s, e] : A) t_end = std::max(t_end, e);

    // Uniformized single-stream driver, exact piecewise-constant integral.
    rng::Stream stream(rng::substream_seed(seed, 0));
    std::uint64_t state = start_state;
    double t = 0.0;
    auto add = [&](double lo, double hi, std::uint64_t u) {
        for (const auto& [s, e] : A) {
            const double a = std::max(lo, s), b = std::min(hi, e);
            if (b > a) out.integral += (b - a) * f[u];
        }
    };
    while (t < t_end) {
        const double tn = t + stream.next_exp() / m;
        add(t, std::min(tn, t_end), state);
        if (tn >= t_end) break;
        t = tn;
        const int site = 1 + static_cast<int>(stream.next_below(static_cast<std::uint32_t>(m)));
        const bool facil = site == 1 || ((state >> (site - 2)) & 1);
        if (facil && stream.next_bit()) state ^= 1ull << (site - 1);
    }
    return out;
}

double chernoff_bound(double gap, double delta, double measure, double b, double pi_min) {
    return 2.0 / pi_min * std::exp(-gap * delta * delta * measure / ((1.0 + 2.0 * b) * (1.0 + 2.0 * b)));
}

ChernoffReport chernoff_check_east(int m, std::uint64_t start_state, std::span<const double> f,
                                   std::span<const std::pair<double, double>> A, double delta,
                                   double b, int runs, std::uint64_t seed) {
    ChernoffReport rep;
    rep.runs = runs;
    rep.delta = delta;
    for (const auto& [s, e] : A) rep.measure += e - s;
    const auto space = spectral::StateSpace::east_chain(m);
    const double gap = spectral::spectral_gap(spectral::build_generator(space));
    rep.bound = chernoff_bound(gap, delta, rep.measure, b, 1.0 / static_cast<double>(space.dim()));

    std::vector<std::uint8_t> exceeded(static_cast<std::size_t>(runs), 0);
    par::parallel_for(static_cast<std::size_t>(runs), [&](std::size_t r) {
        const auto avg = time_average_east(m, start_state, f, A, rng::substream_seed(seed, r));
        exceeded[r] = avg.defined && avg.deviation() >= delta;
    });
    for (auto e : exceeded) rep.exceed += e;
    return rep;
}

FrontTailEstimate front_tail_estimate(std::span<const int> front_at_t, double t, double vhat,
                                      std::span<const double> a_grid) {
    FrontTailEstimate est;
    est.valid_a_min = std::sqrt(t) * std::pow(std::log(t), 1.5);
    const double center = vhat * t;
    std::vector<double> xs, ys;
    for (double a : a_grid) {
        long hits = 0;
        for (int x : front_at_t)
            if (std::abs(static_cast<double>(x) - center) >= a) ++hits;
        const double p = static_cast<double>(hits) / static_cast<double>(front_at_t.size());
        est.a.push_back(a);
        est.p.push_back(p);
        if (hits > 0 && hits < 10) est.sparse_tail = true;
        if (p > 0.0 && p < 1.0) {
            xs.push_back(std::cbrt(a * a / t));
            ys.push_back(-std::log(p));
        }
    }
    est.fit_points = static_cast<int>(xs.size());
    if (xs.size() >= 2) est.fit = numeric::linear_fit(xs, ys);
    return est;
}

TvProxyProfile tv_proxy_profile(int n, std::span<const double> ts, int runs, std::uint64_t seed) {
    if (n < 1 || runs < 1) throw std::invalid_argument("tv_proxy_profile: bad parameters");
    TvProxyProfile out;
    out.n = n;
    out.runs = runs;
    out.times.assign(ts.begin(), ts.end());
    // The crossing bound lives on the infinite lattice; size the buffer so
    // the front cannot feel the right edge over the whole grid.
    double t_max = 0.0;
    for (double t : ts) t_max = std::max(t_max, t);
    const int L = n + static_cast<int>(0.30 * t_max) + 64;
    std::vector<std::vector<std::uint8_t>> below(static_cast<std::size_t>(runs));
    par::parallel_for(static_cast<std::size_t>(runs), [&](std::size_t r) {
        const auto fronts = east::front_at_times(L, rng::substream_seed(seed, r), ts);
        auto& row = below[r];
        row.resize(ts.size());
        for (std::size_t i = 0; i < ts.size(); ++i) row[i] = fronts[i] < n;
    });
    for (std::size_t i = 0; i < ts.size(); ++i) {
        long c = 0;
        for (int r = 0; r < runs; ++r) c += below[static_cast<std::size_t>(r)][i];
        const double p = static_cast<double>(c) / static_cast<double>(runs);
        out.proxy.push_back(p);
        out.se.push_back(std::sqrt(p * (1.0 - p) / static_cast<double>(runs)));
    }
    return out;
}

double profile_crossing(const TvProxyProfile& p, double level) {
    for (std::size_t i = 1; i < p.times.size(); ++i) {
        const double a = p.proxy[i - 1], b = p.proxy[i];
        if (a >= level && b < level) {
            const double w = (a - level) / (a - b);
            return p.times[i - 1] + w * (p.times[i] - p.times[i - 1]);
        }
    }
    return std::nan("");
}

std::vector<RankTrajectory> rank_experiment(int n, std::pair<int, int> rows,
                                            std::pair<int, int> cols,
                                            std::span<const long long> schedule,
                                            std::span<const std::uint64_t> seeds) {
    if (rows.first < 1 || rows.second > n || cols.first < 1 || cols.second > n)
        throw std::invalid_argument("rank_experiment: block out of range");
    if (!std::is_sorted(schedule.begin(), schedule.end()))
        throw std::invalid_argument("rank_experiment: schedule must be increasing");
    std::vector<RankTrajectory> out(seeds.size());
    par::parallel_for(seeds.size(), [&](std::size_t s) {
        auto& traj = out[s];
        traj.seed = seeds[s];
        auto m = walk::RowMajorMatrix::identity(n);
        rng::Stream stream(rng::substream_seed(seeds[s], 0));
        long long done = 0;
        for (long long target : schedule) {
            walk::discrete_steps(m, target - done, stream);
            done = target;
            traj.ranks.emplace_back(target, m.block_rank(rows.first, rows.second, cols.first, cols.second));
        }
    });
    return out;
}

}  // namespace mwalk::stats
