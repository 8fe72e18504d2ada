// Batch driver for the matrix-walk / East toolkit.  Every file-producing
// subcommand writes one CSV plus a sidecar <out>.manifest.json that is
// sufficient to reproduce the run bit for bit.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mwalk/east.hpp"
#include "mwalk/gf2.hpp"
#include "mwalk/io.hpp"
#include "mwalk/noise.hpp"
#include "mwalk/numeric.hpp"
#include "mwalk/parallel.hpp"
#include "mwalk/rng.hpp"
#include "mwalk/spectral.hpp"
#include "mwalk/stats.hpp"
#include "mwalk/walk.hpp"

using namespace mwalk;
using nlohmann::json;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

// "a..b" inclusive or a single value.
std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
    const auto dots = spec.find("..");
    std::vector<std::uint64_t> out;
    if (dots == std::string::npos) {
        out.push_back(std::stoull(spec));
        return out;
    }
    const std::uint64_t a = std::stoull(spec.substr(0, dots));
    const std::uint64_t b = std::stoull(spec.substr(dots + 2));
    if (b < a || b - a > 1000000) throw CLI::ValidationError("--seeds", "bad range");
    for (std::uint64_t s = a; s <= b; ++s) out.push_back(s);
    return out;
}

std::vector<double> parse_grid(const std::string& spec) {
    // "a:b:step" or comma list.
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        const auto c1 = spec.find(':');
        const auto c2 = spec.find(':', c1 + 1);
        if (c2 == std::string::npos) throw CLI::ValidationError("--t-grid", "want a:b:step");
        const double a = std::stod(spec.substr(0, c1));
        const double b = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
        const double step = std::stod(spec.substr(c2 + 1));
        if (step <= 0 || b < a) throw CLI::ValidationError("--t-grid", "want a <= b, step > 0");
        for (double t = a; t <= b + 1e-9; t += step) out.push_back(t);
        return out;
    }
    std::string rest = spec;
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        out.push_back(std::stod(rest.substr(0, comma)));
        if (comma == std::string::npos) break;
        rest = rest.substr(comma + 1);
    }
    return out;
}

std::pair<int, int> parse_range(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("range", "want lo:hi");
    return {std::stoi(spec.substr(0, colon)), std::stoi(spec.substr(colon + 1))};
}

std::vector<int> parse_columns(const std::string& spec, int n) {
    std::vector<int> out;
    if (spec.empty()) {
        for (int i = 1; i <= n; ++i) out.push_back(i);
        return out;
    }
    std::string rest = spec;
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        out.push_back(std::stoi(rest.substr(0, comma)));
        if (comma == std::string::npos) break;
        rest = rest.substr(comma + 1);
    }
    return out;
}

int run_simulate_walk(int n, double t, int q, std::uint64_t seed, const std::string& columns,
                      const std::string& mode, double sample_dt, const std::string& out_path) {
    Timer timer;
    const auto cols = parse_columns(columns, n);
    std::vector<double> ts;
    for (double s = 0.0; s <= t + 1e-12; s += sample_dt) ts.push_back(std::min(s, t));
    if (ts.empty()) ts.push_back(0.0);

    long free_entries = 0;
    for (int c : cols) free_entries += c - 1;
    if (free_entries > 4096) {
        std::fprintf(stderr, "simulate-walk: %ld tracked entries exceed the CSV cap of 4096\n", free_entries);
        return 2;
    }

    io::Csv csv(out_path);
    std::vector<std::string> names{"time"};
    for (int c : cols)
        for (int r = 1; r < c; ++r) names.push_back("m_" + std::to_string(r) + "_" + std::to_string(c));
    csv.header(names);

    auto emit = [&](double time, auto&& entry_at /*(col_pos, row)->int*/) {
        csv.field(time);
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (int r = 1; r < cols[j]; ++r) csv.field(entry_at(static_cast<int>(j), r));
        csv.row();
    };

    if (mode == "discrete") {
        // t is a step count; sample_dt a step interval.
        auto m = walk::RowMajorMatrix::identity(n);
        rng::Stream stream(rng::substream_seed(seed, 0));
        long long done = 0;
        for (double s : ts) {
            const long long target = static_cast<long long>(s);
            walk::discrete_steps(m, target - done, stream);
            done = target;
            emit(s, [&](int j, int r) { return static_cast<int>(m.get(r, cols[static_cast<std::size_t>(j)])); });
        }
    } else if (q == 2) {
        const auto f = noise::NoiseField::sample(n, t, 2, seed);
        const auto states = walk::evolve_sampled(walk::ColumnBlock::identity(n, cols), f, ts);
        for (std::size_t i = 0; i < ts.size(); ++i)
            emit(ts[i], [&](int j, int r) { return static_cast<int>(states[i].get(r, j)); });
    } else {
        const auto f = noise::NoiseField::sample(n, t, q, seed);
        const auto states = walk::evolve_fq_sampled(walk::FqColumnBlock::identity(n, q, cols), f, ts);
        for (std::size_t i = 0; i < ts.size(); ++i)
            emit(ts[i], [&](int j, int r) { return static_cast<int>(states[i].cols[static_cast<std::size_t>(j)][r - 1]); });
    }
    csv.close();
    io::write_manifest(out_path, "simulate-walk",
                       json{{"n", n}, {"t", t}, {"q", q}, {"columns", columns}, {"mode", mode}, {"sample_dt", sample_dt},
                            {"layout", "time, then M(r,c) row-major per tracked column"}},
                       {seed}, timer.seconds());
    return 0;
}

int run_simulate_east(int n, double t, std::uint64_t seed, double density, double sample_dt,
                      const std::string& out_path) {
    Timer timer;
    int q = 0;
    for (int cand = 2; cand <= 251; ++cand)
        if (gf2::is_prime(cand) && std::abs(density - static_cast<double>(cand - 1) / cand) < 1e-9) q = cand;
    if (q == 0) {
        std::fprintf(stderr, "simulate-east: density must be 1/2 or (q-1)/q for a prime q <= 251\n");
        return 2;
    }
    const auto f = noise::NoiseField::sample(n + 1, t, q, seed);
    auto s = east::EastState::zeros(n, 1);
    io::Csv csv(out_path);
    std::vector<std::string> names{"time", "front"};
    for (int x = 1; x <= n; ++x) names.push_back("x" + std::to_string(x));
    csv.header(names);
    auto evs = f.events();
    std::size_t i = 0;
    const bool xor_rule = q == 2;
    for (double ts = 0.0; ts <= t + 1e-12; ts += sample_dt) {
        while (i < evs.size() && evs[i].time <= ts) {
            const int x = evs[i].row;
            const std::uint8_t facil = (x == 1) ? s.boundary : s.bits[static_cast<std::size_t>(x - 2)];
            if (facil) {
                auto& b = s.bits[static_cast<std::size_t>(x - 1)];
                b = xor_rule ? static_cast<std::uint8_t>(b ^ (evs[i].mark & 1))
                             : static_cast<std::uint8_t>(evs[i].mark != 0);
            }
            ++i;
        }
        csv.field(ts);
        csv.field(east::front(s));
        for (int x = 1; x <= n; ++x) csv.field(static_cast<int>(s.get(x)));
        csv.row();
    }
    csv.close();
    io::write_manifest(out_path, "simulate-east",
                       json{{"n", n}, {"t", t}, {"density", density}, {"q", q}, {"sample_dt", sample_dt}},
                       {seed}, timer.seconds());
    return 0;
}

int run_front_velocity(int L, double T, int runs, std::uint64_t seed, const std::string& out_path,
                       const std::string& traj_out) {
    Timer timer;
    std::vector<double> slopes(static_cast<std::size_t>(runs));
    std::vector<int> finals(static_cast<std::size_t>(runs));
    std::vector<int> truncated(static_cast<std::size_t>(runs));
    const double dt = std::max(1.0, T / 4000.0);
    par::parallel_for(static_cast<std::size_t>(runs), [&](std::size_t r) {
        const auto traj = east::front_trajectory(L, T, rng::substream_seed(seed, r), dt);
        slopes[r] = east::front_velocity(traj);
        finals[r] = traj.front.back();
        truncated[r] = traj.truncated;
    });
    io::Csv csv(out_path);
    csv.header({"run", "seed", "slope", "final_front", "truncated"});
    std::vector<std::uint64_t> seeds;
    for (int r = 0; r < runs; ++r) {
        seeds.push_back(rng::substream_seed(seed, static_cast<std::uint64_t>(r)));
        csv.row(static_cast<long long>(r), seeds.back(), slopes[static_cast<std::size_t>(r)],
                finals[static_cast<std::size_t>(r)], truncated[static_cast<std::size_t>(r)]);
    }
    csv.close();

    if (!traj_out.empty()) {
        io::Csv tcsv(traj_out);
        tcsv.header({"run", "time", "front"});
        for (int r = 0; r < std::min(runs, 4); ++r) {
            const auto traj = east::front_trajectory(L, T, rng::substream_seed(seed, static_cast<std::uint64_t>(r)), dt);
            for (std::size_t i = 0; i < traj.times.size(); ++i)
                tcsv.row(static_cast<long long>(r), traj.times[i], traj.front[i]);
        }
        tcsv.close();
        io::write_manifest(traj_out, "front-velocity --traj-out",
                           json{{"L", L}, {"T", T}, {"runs", std::min(runs, 4)}, {"sample_dt", dt}}, seeds,
                           timer.seconds());
    }

    const auto ms = numeric::mean_sd(slopes);
    const double half_ci = 1.96 * ms.sd / std::sqrt(static_cast<double>(runs));
    std::printf("v_hat = %.5f  (95%% CI +- %.5f, %d runs, L=%d, T=%g)\n", ms.mean, half_ci, runs, L, T);
    io::write_manifest(out_path, "front-velocity",
                       json{{"L", L}, {"T", T}, {"runs", runs}, {"sample_dt", dt}, {"v_hat", ms.mean},
                            {"ci95_half_width", half_ci}},
                       seeds, timer.seconds());
    return 0;
}

int run_spectral_verify(int max_n, const std::string& out_path) {
    Timer timer;
    if (max_n < 2 || max_n > 6) {
        std::fprintf(stderr, "spectral-verify: --max-n must be in [2,6]\n");
        return 2;
    }
    json pairs = json::array();
    double max_diff = 0.0;

    std::vector<double> east_gap(static_cast<std::size_t>(max_n), 0.0);  // gap of East on [m]
    for (int m = 1; m <= max_n - 1; ++m)
        east_gap[static_cast<std::size_t>(m)] =
            spectral::spectral_gap(spectral::build_generator(spectral::StateSpace::east_chain(m)));

    auto check_block = [&](int n, const std::vector<int>& cols) {
        int bits = 0;
        for (int c : cols) bits += c - 1;
        if (bits == 0) return;  // single first column: one-point space
        const bool full = static_cast<int>(cols.size()) == n;
        if (!full && bits > 14) return;  // sweep cap; full walks always run
        const auto g = spectral::build_generator(spectral::StateSpace::walk_block(n, cols));
        const double gw = spectral::spectral_gap(g);
        const double ge = east_gap[static_cast<std::size_t>(cols.back() - 1)];
        const double diff = std::abs(gw - ge);
        max_diff = std::max(max_diff, diff);
        pairs.push_back(json{{"n", n},
                             {"columns", cols},
                             {"states", 1ull << bits},
                             {"gap_walk", gw},
                             {"gap_east", ge},
                             {"abs_diff", diff}});
    };

    // Full walks for n = 2..max_n.
    for (int n = 2; n <= max_n; ++n) {
        std::vector<int> all;
        for (int i = 1; i <= n; ++i) all.push_back(i);
        check_block(n, all);
    }
    // All column subsets of [1, max_n] with state space <= 2^14.
    for (std::uint32_t mask = 1; mask < (1u << max_n); ++mask) {
        std::vector<int> cols;
        for (int i = 1; i <= max_n; ++i)
            if (mask >> (i - 1) & 1) cols.push_back(i);
        if (static_cast<int>(cols.size()) == max_n) continue;  // already done as full walk
        check_block(max_n, cols);
    }

    json report;
    report["pairs"] = std::move(pairs);
    report["max_abs_diff"] = max_diff;
    report["tolerance"] = 1e-9;
    report["pass"] = max_diff < 1e-9;
    {
        std::ofstream out(out_path);
        out << report.dump(2) << '\n';
    }
    io::write_manifest(out_path, "spectral-verify", json{{"max_n", max_n}}, {}, timer.seconds());
    std::printf("max |gap difference| = %.3e over %zu pairs\n", max_diff, report["pairs"].size());
    return max_diff < 1e-9 ? 0 : 1;
}

int run_tv_exact(int n, const std::string& grid, const std::string& chain, const std::string& columns,
                 const std::string& out_path) {
    Timer timer;
    const auto ts = parse_grid(grid);
    spectral::StateSpace space = chain == "east"
                                     ? spectral::StateSpace::east_chain(n)
                                     : spectral::StateSpace::walk_block(n, parse_columns(columns, n));
    const auto g = spectral::build_generator(space);
    const auto curve = spectral::exact_tv_curve(g, 0, ts);
    io::Csv csv(out_path);
    csv.header({"t", "tv"});
    for (const auto& [t, tv] : curve) csv.row(t, tv);
    csv.close();
    io::write_manifest(out_path, "tv-exact",
                       json{{"n", n}, {"chain", chain}, {"columns", columns}, {"t_grid", grid},
                            {"states", g.dim}},
                       {}, timer.seconds());
    return 0;
}

int run_tv_proxy(int n, const std::string& grid, int runs, std::uint64_t seed, const std::string& out_path) {
    Timer timer;
    const auto ts = parse_grid(grid);
    const auto prof = stats::tv_proxy_profile(n, ts, runs, seed);
    io::Csv csv(out_path);
    csv.header({"t", "proxy", "se"});
    for (std::size_t i = 0; i < prof.times.size(); ++i) csv.row(prof.times[i], prof.proxy[i], prof.se[i]);
    csv.close();
    io::write_manifest(out_path, "tv-proxy", json{{"n", n}, {"runs", runs}, {"t_grid", grid}}, {seed},
                       timer.seconds());
    return 0;
}

int run_persistence(int n, int trials, std::uint64_t seed, const std::string& out_path) {
    Timer timer;
    const auto taus = east::persistence_sample(n, trials, seed);
    io::Csv csv(out_path);
    csv.header({"trial", "tau"});
    for (std::size_t i = 0; i < taus.size(); ++i) csv.row(static_cast<long long>(i), taus[i]);
    csv.close();
    const double rate = numeric::tail_exponential_rate(taus, 0.9);
    double gap = 0.0;
    if (n <= 20) gap = spectral::spectral_gap(spectral::build_generator(spectral::StateSpace::east_chain(n)));
    std::printf("fitted decay rate %.5f, exact gap %.5f\n", rate, gap);
    io::write_manifest(out_path, "persistence",
                       json{{"n", n}, {"trials", trials}, {"fitted_rate", rate}, {"exact_gap", gap}}, {seed},
                       timer.seconds());
    return 0;
}

int run_pattern_stats(int n, int k, double window, int runs, std::uint64_t seed, const std::string& out_path) {
    Timer timer;
    std::vector<int> cols;
    for (int c = n - k + 1; c <= n; ++c) cols.push_back(c);
    io::Csv csv(out_path);
    csv.header({"run", "target", "n1", "n2", "n3", "good_rows", "max_occupation"});
    for (int r = 0; r < runs; ++r) {
        rng::Stream s(rng::substream_seed(seed, static_cast<std::uint64_t>(r)));
        auto m0 = walk::ColumnBlock::identity(n, cols);
        for (int j = 0; j < m0.k(); ++j)
            for (int row = 1; row < m0.indices[static_cast<std::size_t>(j)]; ++row)
                if (s.next_bit()) m0.cols[static_cast<std::size_t>(j)].set(row - 1, true);
        const auto pc = stats::pattern_counts(m0);
        const auto f = noise::NoiseField::sample(n, window, 2, s.next_u64());
        const auto rep = stats::good_rows(m0, f, 0.0, window);
        double max_occ = 0.0;
        for (double o : rep.occupation) max_occ = std::max(max_occ, o);
        csv.row(static_cast<long long>(r), pc.target, pc.n1, pc.n2, pc.n3,
                static_cast<long long>(rep.good_rows.size()), max_occ);
    }
    csv.close();
    io::write_manifest(out_path, "pattern-stats",
                       json{{"n", n}, {"k", k}, {"window", window}, {"runs", runs}}, {seed}, timer.seconds());
    return 0;
}

int run_rank_experiment(int n, const std::string& rows, const std::string& cols,
                        const std::string& schedule, const std::string& seeds_spec,
                        const std::string& out_path) {
    Timer timer;
    const auto row_range = parse_range(rows);
    const auto col_range = parse_range(cols);
    std::vector<long long> steps;
    for (double v : parse_grid(schedule)) steps.push_back(static_cast<long long>(v));
    const auto seeds = parse_seeds(seeds_spec);
    const auto trajs = stats::rank_experiment(n, row_range, col_range, steps, seeds);
    io::Csv csv(out_path);
    csv.header({"seed", "step", "rank"});
    for (const auto& t : trajs)
        for (const auto& [step, rank] : t.ranks) csv.row(t.seed, step, rank);
    csv.close();
    const int rdim = row_range.second - row_range.first + 1;
    const int cdim = col_range.second - col_range.first + 1;
    const int min_dim = std::min(rdim, cdim);
    // Equilibrium probability that the block misses full min-dimension rank:
    // ~ 2^-(|rdim - cdim| + 1) for independent fair entries.
    const double miss_log2 = -(std::abs(rdim - cdim) + 1);
    json params{{"n", n},         {"rows", rows},     {"cols", cols},
                {"schedule", schedule}, {"min_dim", min_dim}};
    params["equilibrium_rank_deficit_log2_prob"] = miss_log2;
    if (rdim > cdim)
        params["note"] = "block has more rows than columns; rank is capped at the column count, "
                         "so rank < row-count is structural, not a mixing signal";
    io::write_manifest(out_path, "rank-experiment", params, seeds, timer.seconds());
    return 0;
}

int run_front_frame(double t_burn, double t_run, std::uint64_t seed, int window,
                    const std::string& out_path) {
    Timer timer;
    const auto frame = east::front_frame_sample(t_burn, t_run, seed, window);
    json j;
    j["window"] = frame.window;
    j["depth_freq"] = frame.freq;
    j["depth_samples"] = frame.samples;
    {
        std::ofstream out(out_path);
        out << j.dump(2) << '\n';
    }
    io::write_manifest(out_path, "front-frame",
                       json{{"t_burn", t_burn}, {"t_run", t_run}, {"window", window}}, {seed},
                       timer.seconds());
    return 0;
}

int run_duality_check(int n, int cases, std::uint64_t seed, int q) {
    rng::Stream s(seed);
    for (int c = 0; c < cases; ++c) {
        const int dim = 2 + static_cast<int>(s.next_below(static_cast<std::uint32_t>(std::max(1, n - 1))));
        const auto f = noise::NoiseField::sample(dim, 0.2 + 2.0 * s.next_unit(), q, s.next_u64());
        const auto view = noise::restrict(f, 1, dim - 1, 0.0, f.horizon());
        if (q == 2) {
            gf2::BitVec y(dim), z(dim);
            for (int i = 0; i < dim; ++i) {
                if (s.next_bit()) y.set(i, true);
                if (s.next_bit()) z.set(i, true);
            }
            const bool lhs = walk::dot(z, walk::primal_map(view, y));
            const bool rhs = walk::dot(walk::adjoint_map(view, z), y);
            if (lhs != rhs) {
                std::fprintf(stderr, "duality violated: case %d, n=%d, q=2, seed=%llu\n", c, dim,
                             static_cast<unsigned long long>(f.seed()));
                std::fprintf(stderr, "  Y=%s Z=%s lhs=%d rhs=%d\n", y.to_string().c_str(),
                             z.to_string().c_str(), lhs, rhs);
                return 1;
            }
        } else {
            gf2::FqVec y(dim, q), z(dim, q);
            for (int i = 0; i < dim; ++i) {
                y[i] = s.next_mark(static_cast<std::uint32_t>(q));
                z[i] = s.next_mark(static_cast<std::uint32_t>(q));
            }
            const int lhs = walk::dot(z, walk::primal_map(view, y));
            const int rhs = walk::dot(walk::adjoint_map(view, z), y);
            if (lhs != rhs) {
                std::fprintf(stderr, "duality violated: case %d, n=%d, q=%d, lhs=%d rhs=%d\n", c, dim, q,
                             lhs, rhs);
                return 1;
            }
        }
    }
    std::printf("duality-check: %d cases at q=%d, all exact\n", cases, q);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"matrix-walk / East process simulator and exact-analysis toolkit"};
    app.require_subcommand(1);

    // simulate-walk
    int sw_n = 16, sw_q = 2;
    double sw_t = 10.0, sw_dt = 1.0;
    std::uint64_t sw_seed = 1;
    std::string sw_cols, sw_mode = "continuous", sw_out = "walk.csv";
    auto* sw = app.add_subcommand("simulate-walk", "evolve the matrix walk and dump tracked entries");
    sw->add_option("--n", sw_n)->check(CLI::Range(2, 1 << 20));
    sw->add_option("--t", sw_t)->check(CLI::NonNegativeNumber);
    sw->add_option("--q", sw_q)->check(CLI::Range(2, 251));
    sw->add_option("--seed", sw_seed);
    sw->add_option("--columns", sw_cols, "comma list, default all");
    sw->add_option("--mode", sw_mode)->check(CLI::IsMember({"continuous", "discrete"}));
    sw->add_option("--sample-dt", sw_dt)->check(CLI::PositiveNumber);
    sw->add_option("--out", sw_out)->required();

    // simulate-east
    int se_n = 100;
    double se_t = 100.0, se_density = 0.5, se_dt = 1.0;
    std::uint64_t se_seed = 1;
    std::string se_out = "east.csv";
    auto* se = app.add_subcommand("simulate-east", "evolve the East chain and dump configurations");
    se->add_option("--n", se_n)->check(CLI::Range(1, 1 << 20));
    se->add_option("--t", se_t)->check(CLI::NonNegativeNumber);
    se->add_option("--seed", se_seed);
    se->add_option("--density", se_density);
    se->add_option("--sample-dt", se_dt)->check(CLI::PositiveNumber);
    se->add_option("--out", se_out)->required();

    // front-velocity
    int fv_L = 2000, fv_runs = 30;
    double fv_T = 9000.0;
    std::uint64_t fv_seed = 1;
    std::string fv_out = "velocity.csv", fv_traj;
    auto* fv = app.add_subcommand("front-velocity", "front speed estimate over an ensemble");
    fv->add_option("--L", fv_L)->check(CLI::Range(2, 1 << 20));
    fv->add_option("--T", fv_T)->check(CLI::PositiveNumber);
    fv->add_option("--runs", fv_runs)->check(CLI::Range(1, 100000));
    fv->add_option("--seed", fv_seed);
    fv->add_option("--out", fv_out)->required();
    fv->add_option("--traj-out", fv_traj, "also dump a few (t, front) trajectories");

    // spectral-verify
    int sv_max_n = 6;
    std::string sv_out = "theorem_a.json";
    auto* sv = app.add_subcommand("spectral-verify", "gap-equality sweep report");
    sv->add_option("--max-n", sv_max_n)->check(CLI::Range(2, 6));
    sv->add_option("--out", sv_out)->required();

    // tv-exact / tv-proxy
    int te_n = 4;
    std::string te_grid = "0:20:1", te_chain = "walk", te_cols, te_out = "tv_exact.csv";
    auto* te = app.add_subcommand("tv-exact", "exact total-variation curve (small state spaces)");
    te->add_option("--n", te_n)->check(CLI::Range(1, 1 << 20));
    te->add_option("--t-grid", te_grid);
    te->add_option("--chain", te_chain)->check(CLI::IsMember({"walk", "east"}));
    te->add_option("--columns", te_cols);
    te->add_option("--out", te_out)->required();

    int tp_n = 200, tp_runs = 200;
    std::string tp_grid, tp_out = "tv_proxy.csv";
    std::uint64_t tp_seed = 1;
    auto* tp = app.add_subcommand("tv-proxy", "front-crossing proxy for the TV profile");
    tp->add_option("--n", tp_n)->check(CLI::Range(1, 1 << 20));
    tp->add_option("--t-grid", tp_grid)->required();
    tp->add_option("--runs", tp_runs)->check(CLI::Range(1, 1000000));
    tp->add_option("--seed", tp_seed);
    tp->add_option("--out", tp_out)->required();

    // persistence
    int pe_n = 3, pe_trials = 100000;
    std::uint64_t pe_seed = 1;
    std::string pe_out = "persistence.csv";
    auto* pe = app.add_subcommand("persistence", "legal-ring waiting times from stationarity");
    pe->add_option("--n", pe_n)->check(CLI::Range(1, 64));
    pe->add_option("--trials", pe_trials)->check(CLI::Range(10, 10000000));
    pe->add_option("--seed", pe_seed);
    pe->add_option("--out", pe_out)->required();

    // pattern-stats
    int ps_n = 256, ps_k = 2, ps_runs = 100;
    double ps_window = 50.0;
    std::uint64_t ps_seed = 1;
    std::string ps_out = "patterns.csv";
    auto* ps = app.add_subcommand("pattern-stats", "pattern tallies and good rows from stationarity");
    ps->add_option("--n", ps_n)->check(CLI::Range(3, 1 << 16));
    ps->add_option("--k", ps_k)->check(CLI::Range(2, 32));
    ps->add_option("--window", ps_window)->check(CLI::PositiveNumber);
    ps->add_option("--runs", ps_runs)->check(CLI::Range(1, 1000000));
    ps->add_option("--seed", ps_seed);
    ps->add_option("--out", ps_out)->required();

    // rank-experiment
    int re_n = 1000;
    std::string re_rows = "1:333", re_cols = "747:1000", re_schedule = "6666667,40000000";
    std::string re_seeds = "1..5", re_out = "rank.csv";
    auto* re = app.add_subcommand("rank-experiment", "block rank along the discrete-time walk");
    re->add_option("--n", re_n)->check(CLI::Range(2, 1 << 14));
    re->add_option("--rows", re_rows);
    re->add_option("--cols", re_cols);
    re->add_option("--schedule", re_schedule);
    re->add_option("--seeds", re_seeds);
    re->add_option("--out", re_out)->required();

    // front-frame
    double ff_burn = 500.0, ff_run = 5000.0;
    int ff_window = 40;
    std::uint64_t ff_seed = 1;
    std::string ff_out = "front_frame.json";
    auto* ff = app.add_subcommand("front-frame", "site marginals in the frame of the front");
    ff->add_option("--t-burn", ff_burn)->check(CLI::NonNegativeNumber);
    ff->add_option("--t-run", ff_run)->check(CLI::PositiveNumber);
    ff->add_option("--window", ff_window)->check(CLI::Range(1, 4096));
    ff->add_option("--seed", ff_seed);
    ff->add_option("--out", ff_out)->required();

    // duality-check
    int dc_n = 32, dc_cases = 1000, dc_q = 2;
    std::uint64_t dc_seed = 1;
    auto* dc = app.add_subcommand("duality-check", "exit nonzero if the duality identity ever fails");
    dc->add_option("--n", dc_n)->check(CLI::Range(2, 4096));
    dc->add_option("--cases", dc_cases)->check(CLI::Range(1, 10000000));
    dc->add_option("--seed", dc_seed);
    dc->add_option("--q", dc_q)->check(CLI::Range(2, 251));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sw->parsed()) return run_simulate_walk(sw_n, sw_t, sw_q, sw_seed, sw_cols, sw_mode, sw_dt, sw_out);
        if (se->parsed()) return run_simulate_east(se_n, se_t, se_seed, se_density, se_dt, se_out);
        if (fv->parsed()) return run_front_velocity(fv_L, fv_T, fv_runs, fv_seed, fv_out, fv_traj);
        if (sv->parsed()) return run_spectral_verify(sv_max_n, sv_out);
        if (te->parsed()) return run_tv_exact(te_n, te_grid, te_chain, te_cols, te_out);
        if (tp->parsed()) return run_tv_proxy(tp_n, tp_grid, tp_runs, tp_seed, tp_out);
        if (pe->parsed()) return run_persistence(pe_n, pe_trials, pe_seed, pe_out);
        if (ps->parsed()) return run_pattern_stats(ps_n, ps_k, ps_window, ps_runs, ps_seed, ps_out);
        if (re->parsed()) return run_rank_experiment(re_n, re_rows, re_cols, re_schedule, re_seeds, re_out);
        if (ff->parsed()) return run_front_frame(ff_burn, ff_run, ff_seed, ff_window, ff_out);
        if (dc->parsed()) {
            if (dc_q != 2) return run_duality_check(dc_n, dc_cases, dc_seed, dc_q);
            // Default sweep mirrors the acceptance mix: q in {2, 3, 5}.
            for (int q : {2, 3, 5}) {
                const int rc = run_duality_check(dc_n, dc_cases, dc_seed + static_cast<std::uint64_t>(q), q);
                if (rc) return rc;
            }
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "invalid parameters: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
