#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mwalk::noise {

// One clock ring: row x rings at `time` carrying an F_q mark (a fair bit for
// q = 2).
struct RingEvent {
    double time;
    std::int32_t row;  // 1-based, in [1, n-1]
    std::uint8_t mark;

    friend bool operator==(const RingEvent&, const RingEvent&) = default;
};

// The sampled randomness on [0, horizon]: independent rate-1 Poisson clocks
// on rows 1..n-1 with i.i.d. uniform F_q marks.  Immutable after sampling;
// events are kept globally sorted by (time, row).
class NoiseField {
  public:
    // Row x draws from SplitMix64 stream substream_seed(seed, x): first a
    // Poisson(T) count, then that many Uniform[0,T) times (sorted), then the
    // marks in time order.
    static NoiseField sample(int n, double horizon, int q, std::uint64_t seed);

    int n() const { return n_; }
    double horizon() const { return horizon_; }
    int q() const { return q_; }
    std::uint64_t seed() const { return seed_; }
    std::span<const RingEvent> events() const { return events_; }

    // Time reversal at t: every event (s, x, m) with s <= t becomes
    // (t - s, x, m).  An involution on [0, t] preserving (row, mark) pairs.
    NoiseField adjoint(double t) const;

    // Keep rows 1..m and relabel x -> m+1-x.  Used to feed the walk's
    // column-marginal coordinates to an East run over the same randomness.
    NoiseField reversed_rows(int m) const;

    // Replay tooling: a copy with the mark at (row, time) replaced.
    NoiseField with_mark(int row, double time, std::uint8_t mark) const;

    std::string dump_json() const;
    static NoiseField load_json(const std::string& text);
    void dump_binary(std::ostream& os) const;
    static NoiseField load_binary(std::istream& is);

    friend bool operator==(const NoiseField&, const NoiseField&) = default;

  private:
    NoiseField() = default;

    int n_ = 2;
    double horizon_ = 0.0;
    int q_ = 2;
    std::uint64_t seed_ = 0;
    std::vector<RingEvent> events_;
};

// A read-only restriction of a field to rows in [row_lo, row_hi] and times in
// [t_lo, t_hi].  Restrictions compose by intersecting.
class NoiseView {
  public:
    NoiseView(const NoiseField& f, int row_lo, int row_hi, double t_lo, double t_hi);

    const NoiseField& field() const { return *field_; }
    int row_lo() const { return row_lo_; }
    int row_hi() const { return row_hi_; }
    double t_lo() const { return t_lo_; }
    double t_hi() const { return t_hi_; }

    template <class F>
    void for_each(F&& f) const {
        auto evs = field_->events();
        for (std::size_t i = first_; i < evs.size(); ++i) {
            const RingEvent& e = evs[i];
            if (e.time > t_hi_) break;
            if (e.row >= row_lo_ && e.row <= row_hi_) f(e);
        }
    }

    template <class F>
    void for_each_reverse(F&& f) const {
        auto evs = field_->events();
        std::size_t i = evs.size();
        while (i > first_) {
            const RingEvent& e = evs[--i];
            if (e.time > t_hi_) continue;
            if (e.row >= row_lo_ && e.row <= row_hi_) f(e);
        }
    }

    std::vector<RingEvent> collect() const;
    std::size_t count() const;

  private:
    const NoiseField* field_;
    int row_lo_, row_hi_;
    double t_lo_, t_hi_;
    std::size_t first_;  // index of first event with time >= t_lo
};

NoiseView restrict(const NoiseField& f, int row_lo, int row_hi, double t_lo, double t_hi);
NoiseView restrict(const NoiseView& v, int row_lo, int row_hi, double t_lo, double t_hi);

}  // namespace mwalk::noise
