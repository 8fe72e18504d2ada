#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "mwalk/noise.hpp"
#include "mwalk/numeric.hpp"
#include "mwalk/rng.hpp"

using namespace mwalk;
using noise::NoiseField;
using noise::RingEvent;

TEST_CASE("empty horizon and determinism") {
    const auto f0 = NoiseField::sample(4, 0.0, 2, 1);
    CHECK(f0.events().empty());

    const auto a = NoiseField::sample(8, 12.5, 3, 99);
    const auto b = NoiseField::sample(8, 12.5, 3, 99);
    CHECK(a == b);

    const auto c = NoiseField::sample(8, 12.5, 3, 100);
    CHECK(a.events().size() != c.events().size());

    CHECK_THROWS_AS(NoiseField::sample(4, 1.0, 4, 1), std::invalid_argument);
    CHECK_THROWS_AS(NoiseField::sample(1, 1.0, 2, 1), std::invalid_argument);
}

TEST_CASE("field invariants: ordering, ranges, marks") {
    const auto f = NoiseField::sample(6, 50.0, 5, 3);
    double prev = -1.0;
    std::map<int, double> last_in_row;
    for (const RingEvent& e : f.events()) {
        CHECK(e.time >= 0.0);
        CHECK(e.time <= f.horizon());
        CHECK(e.row >= 1);
        CHECK(e.row <= 5);
        CHECK(e.mark < 5);
        CHECK(e.time >= prev);
        prev = e.time;
        if (last_in_row.count(e.row)) CHECK(e.time > last_in_row[e.row]);
        last_in_row[e.row] = e.time;
    }
}

TEST_CASE("mean event count matches (n-1) T") {
    // n = 4, T = 10: 3 rows, expected 30 events per field.
    const int fields = 10000;
    double total = 0;
    for (int s = 0; s < fields; ++s) total += static_cast<double>(NoiseField::sample(4, 10.0, 2, 1000 + s).events().size());
    const double mean = total / fields;
    const double se = std::sqrt(30.0 / fields);
    CHECK(std::abs(mean - 30.0) < 3 * se);
}

TEST_CASE("restriction filters and composes") {
    const auto f = NoiseField::sample(6, 20.0, 2, 17);
    const auto all = noise::restrict(f, 1, 5, 0.0, 20.0).collect();
    CHECK(all.size() == f.events().size());

    CHECK(noise::restrict(f, 3, 2, 0.0, 20.0).count() == 0);
    CHECK(noise::restrict(f, 1, 5, 5.0, 5.0).count() == 0);

    const auto outer = noise::restrict(f, 2, 5, 2.0, 15.0);
    const auto nested = noise::restrict(outer, 1, 3, 4.0, 20.0).collect();
    const auto direct = noise::restrict(f, 2, 3, 4.0, 15.0).collect();
    CHECK(nested == direct);

    // Hand-built check on a sampled field: events in rows [2,3], t in [1,9].
    std::vector<RingEvent> manual;
    for (const RingEvent& e : f.events())
        if (e.row >= 2 && e.row <= 3 && e.time >= 1.0 && e.time <= 9.0) manual.push_back(e);
    CHECK(noise::restrict(f, 2, 3, 1.0, 9.0).collect() == manual);
}

TEST_CASE("adjoint reverses, preserves row/mark multiset, and is an involution") {
    const auto f = NoiseField::sample(5, 8.0, 3, 23);
    const double t = 6.0;
    const auto rev = f.adjoint(t);

    std::size_t upto = 0;
    for (const RingEvent& e : f.events())
        if (e.time <= t) ++upto;
    CHECK(rev.events().size() == upto);
    CHECK(rev.horizon() == t);

    std::multiset<std::pair<int, int>> a, b;
    for (const RingEvent& e : f.events())
        if (e.time <= t) a.insert({e.row, e.mark});
    for (const RingEvent& e : rev.events()) {
        b.insert({e.row, e.mark});
        CHECK(e.time >= 0.0);
        CHECK(e.time <= t);
    }
    CHECK(a == b);

    const auto twice = rev.adjoint(t);
    std::vector<RingEvent> orig;
    for (const RingEvent& e : f.events())
        if (e.time <= t) orig.push_back(e);
    CHECK(std::vector<RingEvent>(twice.events().begin(), twice.events().end()) == orig);

    CHECK(NoiseField::sample(4, 0.0, 2, 1).adjoint(0.0).events().empty());
}

TEST_CASE("adjoint on a hand-built field") {
    // Events {(0.3, row 1, a), (0.9, row 2, b)}, reversed at t = 1:
    // {(0.1, row 2, b), (0.7, row 1, a)}.
    auto f = NoiseField::load_json(R"({"n":3,"horizon":1.0,"q":5,"seed":0,
        "events":[[0.3,1,2],[0.9,2,4]]})");
    const auto rev = f.adjoint(1.0);
    REQUIRE(rev.events().size() == 2);
    CHECK(rev.events()[0].time == doctest::Approx(0.1));
    CHECK(rev.events()[0].row == 2);
    CHECK(rev.events()[0].mark == 4);
    CHECK(rev.events()[1].time == doctest::Approx(0.7));
    CHECK(rev.events()[1].row == 1);
    CHECK(rev.events()[1].mark == 2);
}

TEST_CASE("json and binary dumps round-trip") {
    const auto f = NoiseField::sample(7, 9.0, 3, 5);
    CHECK(NoiseField::load_json(f.dump_json()) == f);

    std::stringstream ss;
    f.dump_binary(ss);
    CHECK(NoiseField::load_binary(ss) == f);
}

TEST_CASE("row reversal relabels rows and keeps times") {
    const auto f = NoiseField::sample(6, 10.0, 2, 31);
    const auto rev = f.reversed_rows(4);
    CHECK(rev.n() == 5);
    std::size_t kept = 0;
    for (const RingEvent& e : f.events())
        if (e.row <= 4) ++kept;
    CHECK(rev.events().size() == kept);
    for (const RingEvent& e : rev.events()) {
        CHECK(e.row >= 1);
        CHECK(e.row <= 4);
    }
    // Same multiset of times per relabeled row.
    for (int r = 1; r <= 4; ++r) {
        std::vector<double> orig, mapped;
        for (const RingEvent& e : f.events())
            if (e.row == r) orig.push_back(e.time);
        for (const RingEvent& e : rev.events())
            if (e.row == 5 - r) mapped.push_back(e.time);
        CHECK(orig == mapped);
    }
}

TEST_CASE("per-row inter-arrival times pass a KS test against Exp(1)") {
    // One row, long horizon: gaps between consecutive rings are Exp(1) up to
    // an O(1/T) censoring correction, far below KS resolution here.
    const auto f = NoiseField::sample(2, 106000.0, 2, 424242);
    std::vector<double> gaps;
    double prev = 0.0;
    bool first = true;
    for (const RingEvent& e : f.events()) {
        if (!first) gaps.push_back(e.time - prev);
        prev = e.time;
        first = false;
        if (gaps.size() == 100000) break;
    }
    REQUIRE(gaps.size() == 100000);
    std::sort(gaps.begin(), gaps.end());
    std::vector<double> cdf;
    cdf.reserve(gaps.size());
    for (double g : gaps) cdf.push_back(-std::expm1(-g));
    const double p = numeric::ks_pvalue(numeric::ks_statistic(cdf), gaps.size());
    CHECK(p > 1e-3);
}

TEST_CASE("poisson counts have the right variance too") {
    rng::Stream s(77);
    const double mean = 700.0;  // exercises the chunked sampler
    const int n = 4000;
    std::vector<double> xs;
    for (int i = 0; i < n; ++i) xs.push_back(static_cast<double>(s.next_poisson(mean)));
    const auto ms = numeric::mean_sd(xs);
    CHECK(std::abs(ms.mean - mean) < 4 * std::sqrt(mean / n));
    CHECK(ms.sd * ms.sd == doctest::Approx(mean).epsilon(0.1));
}
