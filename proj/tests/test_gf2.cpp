#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "mwalk/gf2.hpp"
#include "mwalk/rng.hpp"

using namespace mwalk;
using gf2::BitVec;

namespace {

BitVec random_vec(int len, rng::Stream& s) {
    BitVec v(len);
    for (int i = 0; i < len; ++i)
        if (s.next_bit()) v.set(i, true);
    return v;
}

}  // namespace

TEST_CASE("xor_add basics") {
    const BitVec v = BitVec::parse("10110");
    CHECK(xor_add(v, v).is_zero());

    const BitVec e1 = BitVec::basis(5, 0), e2 = BitVec::basis(5, 1);
    CHECK(xor_add(e1, e2) == BitVec::parse("11000"));

    CHECK(xor_add(BitVec::parse("10110"), BitVec::parse("01100")) == BitVec::parse("11010"));

    CHECK_THROWS_AS(xor_add(BitVec(3), BitVec(4)), std::invalid_argument);
}

TEST_CASE("xor_add group laws on random triples") {
    rng::Stream s(42);
    for (int trial = 0; trial < 200; ++trial) {
        const int len = 1 + static_cast<int>(s.next_below(130));
        const BitVec a = random_vec(len, s), b = random_vec(len, s), c = random_vec(len, s);
        CHECK(xor_add(a, b) == xor_add(b, a));
        CHECK(xor_add(xor_add(a, b), c) == xor_add(a, xor_add(b, c)));
        CHECK(xor_add(a, a).is_zero());
    }
}

TEST_CASE("rank examples") {
    std::vector<BitVec> basis;
    for (int i = 0; i < 7; ++i) basis.push_back(BitVec::basis(7, i));
    CHECK(gf2::rank(basis, 7) == 7);

    const BitVec v = BitVec::parse("0101");
    std::vector<BitVec> twice{v, v};
    CHECK(gf2::rank(twice, 4) == 1);

    std::vector<BitVec> dep{BitVec::parse("110"), BitVec::parse("011"), BitVec::parse("101")};
    CHECK(gf2::rank(dep, 3) == 2);

    CHECK_THROWS_AS(gf2::rank(twice, 5), std::invalid_argument);
}

TEST_CASE("rank invariant under permutation and row additions") {
    rng::Stream s(7);
    for (int trial = 0; trial < 100; ++trial) {
        const int dim = 2 + static_cast<int>(s.next_below(10));
        const int m = 1 + static_cast<int>(s.next_below(12));
        std::vector<BitVec> vs;
        for (int i = 0; i < m; ++i) vs.push_back(random_vec(dim, s));
        const int r = gf2::rank(vs, dim);

        std::vector<BitVec> shuffled = vs;
        for (std::size_t i = shuffled.size(); i > 1; --i)
            std::swap(shuffled[i - 1], shuffled[s.next_below(static_cast<std::uint32_t>(i))]);
        CHECK(gf2::rank(shuffled, dim) == r);

        if (m >= 2) {
            std::vector<BitVec> added = vs;
            const std::size_t i = s.next_below(static_cast<std::uint32_t>(m));
            std::size_t j = s.next_below(static_cast<std::uint32_t>(m));
            if (j == i) j = (j + 1) % m;
            added[i].xor_in(added[j]);
            CHECK(gf2::rank(added, dim) == r);
        }
    }
}

TEST_CASE("spans examples") {
    std::vector<BitVec> two{BitVec::basis(2, 0), BitVec::basis(2, 1)};
    CHECK(gf2::spans(two, 2));

    std::vector<BitVec> same{BitVec::basis(2, 0), BitVec::basis(2, 0)};
    CHECK(!gf2::spans(same, 2));

    std::vector<BitVec> low{BitVec::parse("110"), BitVec::parse("011")};
    CHECK(!gf2::spans(low, 3));
}

TEST_CASE("random_combination basics") {
    std::vector<BitVec> vs{BitVec::parse("101"), BitVec::parse("011")};
    std::vector<std::uint8_t> zeros{0, 0};
    CHECK(gf2::random_combination(vs, zeros).is_zero());

    std::vector<BitVec> e1{BitVec::basis(3, 0)};
    std::vector<std::uint8_t> one{1};
    CHECK(gf2::random_combination(e1, one) == BitVec::basis(3, 0));

    CHECK_THROWS_AS(gf2::random_combination(vs, one), std::invalid_argument);
}

// The combination over all mark patterns is uniform iff the set spans
// (exhaustive over marks, random vector sets).
TEST_CASE("uniformity of the random combination iff the set spans") {
    rng::Stream s(2024);
    for (int trial = 0; trial < 60; ++trial) {
        const int dim = 1 + static_cast<int>(s.next_below(8));
        const int k = 1 + static_cast<int>(s.next_below(12));
        std::vector<BitVec> vs;
        for (int i = 0; i < k; ++i) vs.push_back(random_vec(dim, s));

        std::vector<long> hist(1ull << dim, 0);
        std::vector<std::uint8_t> marks(static_cast<std::size_t>(k));
        for (std::uint32_t pat = 0; pat < (1u << k); ++pat) {
            for (int i = 0; i < k; ++i) marks[static_cast<std::size_t>(i)] = (pat >> i) & 1;
            const BitVec out = gf2::random_combination(vs, marks);
            std::uint64_t idx = 0;
            for (int b = 0; b < dim; ++b)
                if (out.get(b)) idx |= 1ull << b;
            ++hist[idx];
        }
        bool uniform = true;
        for (long h : hist) uniform = uniform && h == (1l << k) / (1l << dim);
        CHECK(uniform == gf2::spans(vs, dim));
    }
}

TEST_CASE("FqVec arithmetic") {
    gf2::FqVec v(4, 5);
    v[0] = 3;
    v[2] = 4;
    gf2::FqVec w(4, 5);
    w[0] = 4;
    w[3] = 2;
    v.axpy(2, w);  // v += 2w mod 5
    CHECK(v[0] == (3 + 2 * 4) % 5);
    CHECK(v[2] == 4);
    CHECK(v[3] == 4);

    CHECK_THROWS_AS(gf2::FqVec(3, 4), std::invalid_argument);
    CHECK_THROWS_AS(gf2::FqVec(3, 256), std::invalid_argument);
    CHECK(gf2::is_prime(251));
    CHECK(!gf2::is_prime(1));
}
