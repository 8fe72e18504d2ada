#include "mwalk/noise.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"
#include "mwalk/gf2.hpp"
#include "mwalk/rng.hpp"

namespace mwalk::noise {

namespace {

bool event_order(const RingEvent& a, const RingEvent& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.row < b.row;
}

void check_params(int n, double horizon, int q) {
    if (n < 2) throw std::invalid_argument("NoiseField: n must be >= 2");
    if (!(horizon >= 0.0)) throw std::invalid_argument("NoiseField: horizon must be >= 0");
    if (!gf2::is_prime(q) || q > 251) throw std::invalid_argument("NoiseField: q must be prime in [2,251]");
}

}  // namespace

NoiseField NoiseField::sample(int n, double horizon, int q, std::uint64_t seed) {
    check_params(n, horizon, q);
    NoiseField f;
    f.n_ = n;
    f.horizon_ = horizon;
    f.q_ = q;
    f.seed_ = seed;

    std::vector<double> times;
    for (int row = 1; row <= n - 1; ++row) {
        rng::Stream s(rng::substream_seed(seed, static_cast<std::uint64_t>(row)));
        const std::uint64_t m = s.next_poisson(horizon);
        times.clear();
        times.reserve(m);
        for (std::uint64_t k = 0; k < m; ++k) times.push_back(s.next_unit() * horizon);
        std::sort(times.begin(), times.end());
        // Exact duplicates have probability ~0; nudge keeps within-row times
        // strictly increasing.
        for (std::size_t k = 1; k < times.size(); ++k)
            if (times[k] <= times[k - 1]) times[k] = std::nextafter(times[k - 1], horizon + 1.0);
        for (double t : times)
            f.events_.push_back(RingEvent{t, row, s.next_mark(static_cast<std::uint32_t>(q))});
    }
    std::sort(f.events_.begin(), f.events_.end(), event_order);
    return f;
}

NoiseField NoiseField::adjoint(double t) const {
    if (t > horizon_) throw std::invalid_argument("adjoint: t beyond horizon");
    NoiseField out;
    out.n_ = n_;
    out.horizon_ = t;
    out.q_ = q_;
    out.seed_ = seed_;
    for (auto it = events_.rbegin(); it != events_.rend(); ++it)
        if (it->time <= t) out.events_.push_back(RingEvent{t - it->time, it->row, it->mark});
    std::sort(out.events_.begin(), out.events_.end(), event_order);
    return out;
}

NoiseField NoiseField::reversed_rows(int m) const {
    if (m < 1 || m > n_ - 1) throw std::invalid_argument("reversed_rows: m out of range");
    NoiseField out;
    out.n_ = m + 1;
    out.horizon_ = horizon_;
    out.q_ = q_;
    out.seed_ = seed_;
    for (const RingEvent& e : events_)
        if (e.row <= m) out.events_.push_back(RingEvent{e.time, m + 1 - e.row, e.mark});
    std::sort(out.events_.begin(), out.events_.end(), event_order);
    return out;
}

NoiseField NoiseField::with_mark(int row, double time, std::uint8_t mark) const {
    NoiseField out = *this;
    for (RingEvent& e : out.events_) {
        if (e.row == row && e.time == time) {
            e.mark = mark;
            return out;
        }
    }
    throw std::invalid_argument("with_mark: no event at (row, time)");
}

std::string NoiseField::dump_json() const {
    nlohmann::json j;
    j["n"] = n_;
    j["horizon"] = horizon_;
    j["q"] = q_;
    j["seed"] = seed_;
    j["prng"] = "splitmix64";
    auto evs = nlohmann::json::array();
    for (const RingEvent& e : events_) evs.push_back({e.time, e.row, e.mark});
    j["events"] = std::move(evs);
    return j.dump();
}

NoiseField NoiseField::load_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    NoiseField f;
    f.n_ = j.at("n").get<int>();
    f.horizon_ = j.at("horizon").get<double>();
    f.q_ = j.at("q").get<int>();
    f.seed_ = j.at("seed").get<std::uint64_t>();
    check_params(f.n_, f.horizon_, f.q_);
    for (const auto& e : j.at("events"))
        f.events_.push_back(RingEvent{e.at(0).get<double>(), e.at(1).get<std::int32_t>(), e.at(2).get<std::uint8_t>()});
    if (!std::is_sorted(f.events_.begin(), f.events_.end(), event_order))
        throw std::invalid_argument("NoiseField: events not sorted");
    return f;
}

void NoiseField::dump_binary(std::ostream& os) const {
    const char magic[8] = {'M', 'W', 'N', 'O', 'I', 'S', 'E', '1'};
    os.write(magic, 8);
    auto put = [&os](const void* p, std::size_t k) { os.write(static_cast<const char*>(p), static_cast<std::streamsize>(k)); };
    std::int64_t n64 = n_, q64 = q_, count = static_cast<std::int64_t>(events_.size());
    put(&n64, 8);
    put(&horizon_, 8);
    put(&q64, 8);
    put(&seed_, 8);
    put(&count, 8);
    for (const RingEvent& e : events_) {
        put(&e.time, 8);
        put(&e.row, 4);
        put(&e.mark, 1);
    }
}

NoiseField NoiseField::load_binary(std::istream& is) {
    char magic[8];
    is.read(magic, 8);
    if (!is || std::string(magic, 8) != "MWNOISE1") throw std::invalid_argument("NoiseField: bad magic");
    auto get = [&is](void* p, std::size_t k) { is.read(static_cast<char*>(p), static_cast<std::streamsize>(k)); };
    NoiseField f;
    std::int64_t n64, q64, count;
    get(&n64, 8);
    get(&f.horizon_, 8);
    get(&q64, 8);
    get(&f.seed_, 8);
    get(&count, 8);
    f.n_ = static_cast<int>(n64);
    f.q_ = static_cast<int>(q64);
    check_params(f.n_, f.horizon_, f.q_);
    f.events_.resize(static_cast<std::size_t>(count));
    for (RingEvent& e : f.events_) {
        get(&e.time, 8);
        get(&e.row, 4);
        get(&e.mark, 1);
    }
    if (!is) throw std::invalid_argument("NoiseField: truncated stream");
    if (!std::is_sorted(f.events_.begin(), f.events_.end(), event_order))
        throw std::invalid_argument("NoiseField: events not sorted");
    return f;
}

NoiseView::NoiseView(const NoiseField& f, int row_lo, int row_hi, double t_lo, double t_hi)
    : field_(&f), row_lo_(row_lo), row_hi_(row_hi), t_lo_(t_lo), t_hi_(t_hi) {
    auto evs = f.events();
    first_ = static_cast<std::size_t>(
        std::lower_bound(evs.begin(), evs.end(), t_lo,
                         [](const RingEvent& e, double t) { return e.time < t; }) -
        evs.begin());
}

std::vector<RingEvent> NoiseView::collect() const {
    std::vector<RingEvent> out;
    for_each([&out](const RingEvent& e) { out.push_back(e); });
    return out;
}

std::size_t NoiseView::count() const {
    std::size_t c = 0;
    for_each([&c](const RingEvent&) { ++c; });
    return c;
}

NoiseView restrict(const NoiseField& f, int row_lo, int row_hi, double t_lo, double t_hi) {
    return NoiseView(f, row_lo, row_hi, t_lo, t_hi);
}

NoiseView restrict(const NoiseView& v, int row_lo, int row_hi, double t_lo, double t_hi) {
    return NoiseView(v.field(), std::max(v.row_lo(), row_lo), std::min(v.row_hi(), row_hi),
                     std::max(v.t_lo(), t_lo), std::min(v.t_hi(), t_hi));
}

}  // namespace mwalk::noise
