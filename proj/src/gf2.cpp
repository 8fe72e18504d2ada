#include "mwalk/gf2.hpp"

namespace mwalk::gf2 {

int rank(std::span<const BitVec> vs, int dim) {
    // pivots[b] is a reduced vector whose lowest set bit is b.
    std::vector<BitVec> pivots(static_cast<std::size_t>(dim));
    std::vector<bool> have(static_cast<std::size_t>(dim), false);
    int r = 0;
    for (const BitVec& v0 : vs) {
        if (v0.len() != dim) throw std::invalid_argument("rank: dimension mismatch");
        BitVec v = v0;
        for (;;) {
            auto b = v.lowest_set();
            if (!b) break;
            if (!have[static_cast<std::size_t>(*b)]) {
                have[static_cast<std::size_t>(*b)] = true;
                pivots[static_cast<std::size_t>(*b)] = std::move(v);
                ++r;
                break;
            }
            v.xor_in(pivots[static_cast<std::size_t>(*b)]);
        }
    }
    return r;
}

BitVec random_combination(std::span<const BitVec> vs, std::span<const std::uint8_t> marks) {
    if (vs.size() != marks.size()) throw std::invalid_argument("random_combination: |marks| != |vs|");
    BitVec acc(vs.empty() ? 0 : vs.front().len());
    for (std::size_t i = 0; i < vs.size(); ++i)
        if (marks[i] & 1) acc.xor_in(vs[i]);
    return acc;
}

}  // namespace mwalk::gf2
