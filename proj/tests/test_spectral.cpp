#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "mwalk/noise.hpp"
#include "mwalk/numeric.hpp"
#include "mwalk/rng.hpp"
#include "mwalk/spectral.hpp"
#include "mwalk/walk.hpp"

using namespace mwalk;
using spectral::Generator;
using spectral::StateSpace;

TEST_CASE("codec round-trips") {
    const auto space = StateSpace::walk_block(6, {2, 4, 5});
    CHECK(space.dim() == (1ull << (1 + 3 + 4)));
    for (std::uint64_t idx : {std::uint64_t{0}, std::uint64_t{1}, std::uint64_t{77}, space.dim() - 1}) {
        const auto b = space.state_of(idx);
        CHECK(b.shape_ok());
        CHECK(space.index_of(b) == idx);
    }

    const auto east_sp = StateSpace::east_chain(5);
    const auto s = east_sp.east_state_of(0b10110);
    CHECK(s.get(2));
    CHECK(s.get(3));
    CHECK(s.get(5));
    CHECK(east_sp.index_of(s) == 0b10110);

    CHECK_THROWS_AS(StateSpace::walk_block(30, {21, 22}), std::invalid_argument);
}

TEST_CASE("generators are symmetric with zero row sums") {
    for (const auto& space : {StateSpace::walk_block(5, {2, 3, 5}), StateSpace::walk_block(4, {1, 2, 3, 4})}) {
        const auto g = spectral::build_generator(space);
        const auto a = g.dense();
        const std::uint64_t d = g.dim;
        for (std::uint64_t i = 0; i < d; ++i) {
            double rowsum = 0;
            for (std::uint64_t j = 0; j < d; ++j) {
                rowsum += a[i * d + j];
                CHECK(a[i * d + j] == a[j * d + i]);
                if (i != j) CHECK(a[i * d + j] >= 0.0);
            }
            CHECK(std::abs(rowsum) < 1e-12);
        }
    }
}

TEST_CASE("two-state chains: eigenvalues {0, -1} and gap 1") {
    const auto walk2 = spectral::build_generator(StateSpace::walk_block(2, {1, 2}));
    const auto eig = spectral::jacobi_eigenvalues(walk2.dense(), 2);
    CHECK(eig[0] == doctest::Approx(-1.0));
    CHECK(eig[1] == doctest::Approx(0.0));
    CHECK(spectral::spectral_gap(walk2) == doctest::Approx(1.0));

    const auto east1 = spectral::build_generator(StateSpace::east_chain(1));
    CHECK(spectral::spectral_gap(east1) == doctest::Approx(1.0));
}

TEST_CASE("gap equality between walk and East at small sizes") {
    for (int n = 2; n <= 5; ++n) {
        std::vector<int> all;
        for (int i = 1; i <= n; ++i) all.push_back(i);
        const double gw = spectral::spectral_gap(spectral::build_generator(StateSpace::walk_block(n, all)));
        const double ge = spectral::spectral_gap(spectral::build_generator(StateSpace::east_chain(n - 1)));
        CHECK(std::abs(gw - ge) < 1e-9);
    }
}

TEST_CASE("lanczos path agrees with jacobi beyond the dense cap") {
    // D = 512 forces the sparse path; compare against the dense answer.
    const auto space = StateSpace::walk_block(6, {5, 6});  // 4+5 = 9 bits
    const auto g = spectral::build_generator(space);
    REQUIRE(g.dim == 512);
    const double sparse_gap = spectral::spectral_gap(g);

    const auto eig = spectral::jacobi_eigenvalues(g.dense(), g.dim);
    const double dense_gap = -eig[g.dim - 2];
    CHECK(std::abs(sparse_gap - dense_gap) < 1e-9);
}

TEST_CASE("exact distribution: t=0, mass conservation, convergence to uniform") {
    const auto g = spectral::build_generator(StateSpace::east_chain(4));
    std::vector<double> p0(g.dim, 0.0);
    p0[3] = 1.0;
    CHECK(spectral::exact_distribution(g, p0, 0.0) == p0);

    const double gap = spectral::spectral_gap(g);
    for (double t : {0.3, 1.0, 7.0, 50.0 / gap}) {
        const auto pt = spectral::exact_distribution(g, p0, t);
        double mass = 0;
        for (double p : pt) mass += p;
        CHECK(std::abs(mass - 1.0) < 1e-12);
    }
    const auto pinf = spectral::exact_distribution(g, p0, 50.0 / gap);
    for (double p : pinf) CHECK(std::abs(p - 1.0 / static_cast<double>(g.dim)) < 1e-9);

    std::vector<double> bad(g.dim, 0.0);
    bad[0] = 0.5;
    CHECK_THROWS_AS(spectral::exact_distribution(g, bad, 1.0), std::invalid_argument);
}

TEST_CASE("tv curve: start value, monotonicity, asymptotic slope") {
    const auto space = StateSpace::walk_block(4, {1, 2, 3, 4});
    const auto g = spectral::build_generator(space);
    const double gap = spectral::spectral_gap(g);
    const double D = static_cast<double>(g.dim);

    std::vector<double> ts;
    for (double t = 0.0; t <= 30.0 / gap; t += 1.0 / gap) ts.push_back(t);
    const auto curve = spectral::exact_tv_curve(g, 0, ts);

    CHECK(curve.front().second == doctest::Approx(1.0 - 1.0 / D));
    for (std::size_t i = 1; i < curve.size(); ++i) CHECK(curve[i].second <= curve[i - 1].second + 1e-10);

    // log TV decays at rate gap: slope between 20/gap and 30/gap.
    const double t1 = 20.0 / gap, t2 = 30.0 / gap;
    const auto seg = spectral::exact_tv_curve(g, 0, std::vector<double>{t1, t2});
    const double slope = (std::log(seg[1].second) - std::log(seg[0].second)) / (t2 - t1);
    CHECK(slope == doctest::Approx(-gap).epsilon(0.02));
}

TEST_CASE("simulation frequencies match the exact distribution (chi-square)") {
    const auto space = StateSpace::walk_block(3, {1, 2, 3});
    const auto g = spectral::build_generator(space);
    REQUIRE(g.dim == 8);
    const double t = 1.5;
    const int runs = 60000;
    std::vector<double> counts(8, 0.0);
    for (int r = 0; r < runs; ++r) {
        const auto f = noise::NoiseField::sample(3, t, 2, 90000 + r);
        const auto m = walk::evolve(walk::ColumnBlock::identity_full(3), f, t);
        counts[space.index_of(m)] += 1.0;
    }
    std::vector<double> p0(8, 0.0);
    p0[0] = 1.0;
    const auto pt = spectral::exact_distribution(g, p0, t);
    std::vector<double> expected;
    for (double p : pt) expected.push_back(p * runs);
    CHECK(numeric::chi_square_test(counts, expected, 5.0) > 1e-3);
}
