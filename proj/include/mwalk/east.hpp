#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mwalk/noise.hpp"

namespace mwalk::east {

// East chain on sites 1..L with the 1's facilitating: site x may change only
// when its left neighbor (site x-1, or the frozen boundary for x = 1) holds
// a 1.
struct EastState {
    int L = 0;
    std::uint8_t boundary = 1;  // frozen value at site 0
    std::vector<std::uint8_t> bits;

    static EastState zeros(int L, std::uint8_t boundary = 1) {
        EastState s;
        s.L = L;
        s.boundary = boundary;
        s.bits.assign(static_cast<std::size_t>(L), 0);
        return s;
    }
    std::uint8_t get(int site) const { return bits[static_cast<std::size_t>(site - 1)]; }

    friend bool operator==(const EastState&, const EastState&) = default;
};

// Rightmost site holding a 1, or 0 when none.
int front(const EastState& s);

// Piecewise-constant bit record: only actual value changes are logged, so two
// runs coincide as trajectories iff their logs are identical.
struct BitTrajectory {
    int L = 0;
    std::vector<std::uint8_t> initial;
    struct Step {
        double time;
        std::int32_t site;
        std::uint8_t bit;
        friend bool operator==(const Step&, const Step&) = default;
    };
    std::vector<Step> steps;

    friend bool operator==(const BitTrajectory&, const BitTrajectory&) = default;
};

// Field-driven evolution; ring at row x acts on site x.  Requires
// field.n() == L + 1.  For q = 2 the resample is bit ^= mark (the exact
// matrix-walk coupling); for q > 2 the bit is refreshed to (mark != 0),
// a Bernoulli((q-1)/q) draw.
EastState evolve(EastState s, const noise::NoiseField& w, double t);
BitTrajectory evolve_traj(const EastState& s, const noise::NoiseField& w, double t);

// F_q-valued variant used for exact trajectory coupling with the matrix walk
// at q > 2: site values evolve by v(x) += mark * v(x-1) and the exposed East
// configuration is the nonzero pattern.
struct FqEastState {
    int L = 0;
    int q = 2;
    std::uint8_t boundary_val = 1;
    std::vector<std::uint8_t> vals;

    static FqEastState zeros(int L, int q) {
        FqEastState s;
        s.L = L;
        s.q = q;
        s.vals.assign(static_cast<std::size_t>(L), 0);
        return s;
    }
};
FqEastState evolve_fq(FqEastState s, const noise::NoiseField& w, double t);
BitTrajectory evolve_fq_traj(const FqEastState& s, const noise::NoiseField& w, double t);

// Standalone front simulator.  Uses a single-stream uniformized driver over
// the active sites [1, front+1] (rings right of front+1 are no-ops, so they
// are never generated); exact in law, O(1) memory per site, but not
// ring-for-ring comparable with a NoiseField replay.  Coupling tests use the
// field-driven evolve above.
struct FrontTrajectory {
    int L = 0;
    double horizon = 0.0;
    std::uint64_t seed = 0;
    double density = 0.5;
    double sample_dt = 1.0;
    std::vector<double> times;
    std::vector<int> front;
    bool truncated = false;   // front reached L before the horizon
    double truncated_at = 0;
};

FrontTrajectory front_trajectory(int L, double T, std::uint64_t seed, double sample_dt,
                                 double density = 0.5);

// Front positions at the given increasing times (same driver).
std::vector<int> front_at_times(int L, std::uint64_t seed, std::span<const double> ts,
                                double density = 0.5);

// Least-squares slope of the samples in [T/2, T]; discards the burn-in.
double front_velocity(const FrontTrajectory& traj);

// Stationary persistence times: each trial starts from uniform bits on [1,n]
// (boundary 1) and returns the first time site n's clock rings with site n-1
// holding a 1.
std::vector<double> persistence_sample(int n, int trials, std::uint64_t seed);

// Occupation frequencies of the W sites behind the front, sampled every
// sample_dt over [t_burn, t_burn + t_run]; freq[d-1] is the mean of the bit
// at distance d behind the front.
struct FrontFrame {
    int window = 0;
    std::vector<long> samples;  // valid samples per depth
    std::vector<double> freq;
};
FrontFrame front_frame_sample(double t_burn, double t_run, std::uint64_t seed, int window,
                              double sample_dt = 1.0);

}  // namespace mwalk::east
