#include "mwalk/east.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "mwalk/gf2.hpp"
#include "mwalk/rng.hpp"

namespace mwalk::east {

namespace {

void require_rows(const noise::NoiseField& w, int L) {
    if (w.n() != L + 1) throw std::invalid_argument("east: field must have rows 1..L (n = L+1)");
}

// density -> field order for the (q-1)/q family; 0.5 maps to q = 2.
int density_to_q(double density) {
    for (int q = 2; q <= 251; ++q) {
        if (!gf2::is_prime(q)) continue;
        if (std::abs(density - static_cast<double>(q - 1) / q) < 1e-9) return q;
    }
    throw std::invalid_argument("east: density must be 1/2 or (q-1)/q, q prime <= 251");
}

}  // namespace

int front(const EastState& s) {
    for (int x = s.L; x >= 1; --x)
        if (s.get(x)) return x;
    return 0;
}

EastState evolve(EastState s, const noise::NoiseField& w, double t) {
    require_rows(w, s.L);
    const bool xor_rule = w.q() == 2;
    for (const noise::RingEvent& e : w.events()) {
        if (e.time > t) break;
        const int x = e.row;
        const std::uint8_t facil = (x == 1) ? s.boundary : s.bits[static_cast<std::size_t>(x - 2)];
        if (!facil) continue;
        auto& b = s.bits[static_cast<std::size_t>(x - 1)];
        b = xor_rule ? static_cast<std::uint8_t>(b ^ (e.mark & 1)) : static_cast<std::uint8_t>(e.mark != 0);
    }
    return s;
}

BitTrajectory evolve_traj(const EastState& s0, const noise::NoiseField& w, double t) {
    require_rows(w, s0.L);
    BitTrajectory traj;
    traj.L = s0.L;
    traj.initial = s0.bits;
    EastState s = s0;
    const bool xor_rule = w.q() == 2;
    for (const noise::RingEvent& e : w.events()) {
        if (e.time > t) break;
        const int x = e.row;
        const std::uint8_t facil = (x == 1) ? s.boundary : s.bits[static_cast<std::size_t>(x - 2)];
        if (!facil) continue;
        auto& b = s.bits[static_cast<std::size_t>(x - 1)];
        const std::uint8_t nb =
            xor_rule ? static_cast<std::uint8_t>(b ^ (e.mark & 1)) : static_cast<std::uint8_t>(e.mark != 0);
        if (nb != b) {
            b = nb;
            traj.steps.push_back({e.time, x, nb});
        }
    }
    return traj;
}

FqEastState evolve_fq(FqEastState s, const noise::NoiseField& w, double t) {
    require_rows(w, s.L);
    if (w.q() != s.q) throw std::invalid_argument("east: field order mismatch");
    for (const noise::RingEvent& e : w.events()) {
        if (e.time > t) break;
        const int x = e.row;
        const std::uint8_t below = (x == 1) ? s.boundary_val : s.vals[static_cast<std::size_t>(x - 2)];
        auto& v = s.vals[static_cast<std::size_t>(x - 1)];
        v = static_cast<std::uint8_t>((v + e.mark * below) % s.q);
    }
    return s;
}

BitTrajectory evolve_fq_traj(const FqEastState& s0, const noise::NoiseField& w, double t) {
    require_rows(w, s0.L);
    if (w.q() != s0.q) throw std::invalid_argument("east: field order mismatch");
    BitTrajectory traj;
    traj.L = s0.L;
    traj.initial.reserve(static_cast<std::size_t>(s0.L));
    for (auto v : s0.vals) traj.initial.push_back(v != 0);
    FqEastState s = s0;
    for (const noise::RingEvent& e : w.events()) {
        if (e.time > t) break;
        const int x = e.row;
        const std::uint8_t below = (x == 1) ? s.boundary_val : s.vals[static_cast<std::size_t>(x - 2)];
        auto& v = s.vals[static_cast<std::size_t>(x - 1)];
        const std::uint8_t nv = static_cast<std::uint8_t>((v + e.mark * below) % s.q);
        if ((nv != 0) != (v != 0)) traj.steps.push_back({e.time, x, static_cast<std::uint8_t>(nv != 0)});
        v = nv;
    }
    return traj;
}

namespace {

// Uniformized Gillespie driver restricted to the active sites [1, front+1].
// Sites right of front+1 have a zero left neighbor, so their rings cannot
// change the state and are never generated.
class FrontSim {
  public:
    FrontSim(int L, std::uint64_t seed, double density)
        : L_(L),
          q_(density_to_q(density)),
          bits_(static_cast<std::size_t>(L), 0),
          stream_(rng::substream_seed(seed, 0)) {
        if (L < 1) throw std::invalid_argument("FrontSim: L must be >= 1");
        schedule();
    }

    void advance_to(double target) {
        while (t_next_ <= target) {
            t_ = t_next_;
            fire();
            schedule();
        }
        t_ = target;
    }

    int front() const { return front_; }
    double time() const { return t_; }
    bool truncated() const { return truncated_; }
    double truncated_at() const { return truncated_at_; }
    std::uint8_t bit(int site) const { return bits_[static_cast<std::size_t>(site - 1)]; }

  private:
    int rate() const { return std::min(front_ + 1, L_); }

    void schedule() { t_next_ = t_ + stream_.next_exp() / rate(); }

    void fire() {
        const int site = 1 + static_cast<int>(stream_.next_below(static_cast<std::uint32_t>(rate())));
        const std::uint8_t facil = (site == 1) ? 1 : bits_[static_cast<std::size_t>(site - 2)];
        if (!facil) return;
        auto& b = bits_[static_cast<std::size_t>(site - 1)];
        const std::uint8_t nb = q_ == 2 ? static_cast<std::uint8_t>(b ^ stream_.next_bit())
                                        : static_cast<std::uint8_t>(stream_.next_mark(static_cast<std::uint32_t>(q_)) != 0);
        if (nb == b) return;
        b = nb;
        if (nb) {
            if (site > front_) {
                // One ring advances the front by at most one site.
                assert(site == front_ + 1);
                front_ = site;
                if (front_ == L_ && !truncated_) {
                    truncated_ = true;
                    truncated_at_ = t_;
                }
            }
        } else if (site == front_) {
            int y = site - 1;
            while (y >= 1 && !bits_[static_cast<std::size_t>(y - 1)]) --y;
            front_ = std::max(y, 0);
        }
    }

    int L_;
    int q_;
    std::vector<std::uint8_t> bits_;
    rng::Stream stream_;
    int front_ = 0;
    double t_ = 0.0;
    double t_next_ = 0.0;
    bool truncated_ = false;
    double truncated_at_ = 0.0;
};

}  // namespace

FrontTrajectory front_trajectory(int L, double T, std::uint64_t seed, double sample_dt, double density) {
    if (L < 1 || T < 0 || sample_dt <= 0) throw std::invalid_argument("front_trajectory: bad parameters");
    FrontTrajectory out;
    out.L = L;
    out.horizon = T;
    out.seed = seed;
    out.density = density;
    out.sample_dt = sample_dt;
    FrontSim sim(L, seed, density);
    for (double ts = 0.0; ts <= T + 1e-12; ts += sample_dt) {
        const double target = std::min(ts, T);
        sim.advance_to(target);
        out.times.push_back(target);
        out.front.push_back(sim.front());
    }
    out.truncated = sim.truncated();
    out.truncated_at = sim.truncated_at();
    return out;
}

std::vector<int> front_at_times(int L, std::uint64_t seed, std::span<const double> ts, double density) {
    FrontSim sim(L, seed, density);
    std::vector<int> out;
    out.reserve(ts.size());
    for (double t : ts) {
        sim.advance_to(t);
        out.push_back(sim.front());
    }
    return out;
}

double front_velocity(const FrontTrajectory& traj) {
    std::vector<double> xs, ys;
    const double lo = traj.horizon / 2.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        if (traj.times[i] >= lo) {
            xs.push_back(traj.times[i]);
            ys.push_back(static_cast<double>(traj.front[i]));
        }
    }
    if (xs.size() < 2) throw std::invalid_argument("front_velocity: too few samples past T/2");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / n, my = sy / n;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    return sxy / sxx;
}

std::vector<double> persistence_sample(int n, int trials, std::uint64_t seed) {
    if (n < 1 || trials < 1) throw std::invalid_argument("persistence_sample: bad parameters");
    // Hard timeout at 1e4 expected sweeps; tau is a.s. finite and its mean is
    // O(1/gap), so hitting this flags a bug rather than a slow sample.
    const double timeout = 1e4;
    std::vector<double> taus;
    taus.reserve(static_cast<std::size_t>(trials));
    for (int trial = 0; trial < trials; ++trial) {
        rng::Stream s(rng::substream_seed(seed, static_cast<std::uint64_t>(trial)));
        std::vector<std::uint8_t> bits(static_cast<std::size_t>(n));
        for (auto& b : bits) b = s.next_bit();
        double t = 0.0;
        for (;;) {
            t += s.next_exp() / n;
            if (t > timeout) throw std::runtime_error("persistence_sample: timeout");
            const int site = 1 + static_cast<int>(s.next_below(static_cast<std::uint32_t>(n)));
            const std::uint8_t facil = (site == 1) ? 1 : bits[static_cast<std::size_t>(site - 2)];
            if (site == n && facil) {
                taus.push_back(t);
                break;
            }
            if (facil) bits[static_cast<std::size_t>(site - 1)] ^= s.next_bit();
        }
    }
    return taus;
}

FrontFrame front_frame_sample(double t_burn, double t_run, std::uint64_t seed, int window, double sample_dt) {
    if (window < 0 || t_burn < 0 || t_run <= 0 || sample_dt <= 0)
        throw std::invalid_argument("front_frame_sample: bad parameters");
    // 0.25 > v_* leaves headroom so the front stays clear of the right edge.
    const int L = static_cast<int>(0.25 * (t_burn + t_run)) + 2 * window + 128;
    FrontFrame out;
    out.window = window;
    out.samples.assign(static_cast<std::size_t>(window), 0);
    std::vector<double> sums(static_cast<std::size_t>(window), 0.0);
    FrontSim sim(L, seed, 0.5);
    sim.advance_to(t_burn);
    for (double ts = t_burn + sample_dt; ts <= t_burn + t_run + 1e-12; ts += sample_dt) {
        sim.advance_to(ts);
        const int X = sim.front();
        for (int d = 1; d <= window; ++d) {
            if (X - d >= 1) {
                sums[static_cast<std::size_t>(d - 1)] += sim.bit(X - d);
                ++out.samples[static_cast<std::size_t>(d - 1)];
            }
        }
    }
    out.freq.assign(static_cast<std::size_t>(window), 0.0);
    for (int d = 0; d < window; ++d)
        out.freq[static_cast<std::size_t>(d)] =
            out.samples[static_cast<std::size_t>(d)] > 0
                ? sums[static_cast<std::size_t>(d)] / static_cast<double>(out.samples[static_cast<std::size_t>(d)])
                : 0.0;
    return out;
}

}  // namespace mwalk::east
