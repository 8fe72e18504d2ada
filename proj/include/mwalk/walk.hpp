#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mwalk/east.hpp"
#include "mwalk/gf2.hpp"
#include "mwalk/noise.hpp"
#include "mwalk/rng.hpp"

namespace mwalk::walk {

// Marginal state of the matrix walk on a strictly increasing set of tracked
// columns.  Column j is stored as its full n coordinates: coordinate
// indices[j] carries the structural 1 and everything above it is 0.  The full
// unit upper-triangular matrix is the block on all n columns.
struct ColumnBlock {
    int n = 0;
    std::vector<int> indices;       // 1-based column labels
    std::vector<gf2::BitVec> cols;  // cols[j].get(i-1) == M(i, indices[j])

    static ColumnBlock identity(int n, std::vector<int> indices);
    static ColumnBlock identity_full(int n);

    int k() const { return static_cast<int>(indices.size()); }
    bool get(int row, int pos) const { return cols[static_cast<std::size_t>(pos)].get(row - 1); }
    bool shape_ok() const;

    friend bool operator==(const ColumnBlock&, const ColumnBlock&) = default;
};

using UnitUpperMatrix = ColumnBlock;

struct FqColumnBlock {
    int n = 0;
    int q = 2;
    std::vector<int> indices;
    std::vector<gf2::FqVec> cols;

    static FqColumnBlock identity(int n, int q, std::vector<int> indices);
    int k() const { return static_cast<int>(indices.size()); }
    bool shape_ok() const;

    friend bool operator==(const FqColumnBlock&, const FqColumnBlock&) = default;
};

// One ring applied in place: row x of every tracked column gains mark times
// its row-(x+1) entry.
void apply_ring(ColumnBlock& b, int row, std::uint8_t mark);
void apply_ring(FqColumnBlock& b, int row, std::uint8_t mark);

ColumnBlock evolve(ColumnBlock m0, const noise::NoiseField& w, double t);
FqColumnBlock evolve_fq(FqColumnBlock m0, const noise::NoiseField& w, double t);

// States at the requested increasing sample times (clamped to t <= horizon).
std::vector<ColumnBlock> evolve_sampled(const ColumnBlock& m0, const noise::NoiseField& w,
                                        std::span<const double> ts);
std::vector<FqColumnBlock> evolve_fq_sampled(const FqColumnBlock& m0, const noise::NoiseField& w,
                                             std::span<const double> ts);

// Event log of a block evolution; only state-changing events are kept.
// `flips` bit j set means tracked column j toggled its row-`row` entry.
struct BlockTrajectory {
    ColumnBlock initial;
    struct Event {
        double time;
        std::int32_t row;
        std::uint64_t flips;
    };
    std::vector<Event> events;
    double t_end = 0.0;
};
BlockTrajectory evolve_traj(const ColumnBlock& m0, const noise::NoiseField& w, double t);

// Column `column` of the trajectory in East coordinates: site s holds entry
// M(column - s, column), the structural 1 becomes the frozen boundary.
east::BitTrajectory column_marginal(const BlockTrajectory& traj, int column);

// Same marginal for the F_q walk, projected to its nonzero pattern.
east::BitTrajectory fq_column_marginal(const FqColumnBlock& m0, const noise::NoiseField& w,
                                       double t, int column);

// Primal map: the events of the view applied to a column vector in
// increasing time order, Y(x) += mark * Y(x+1).
gf2::BitVec primal_map(const noise::NoiseView& v, gf2::BitVec y);
gf2::FqVec primal_map(const noise::NoiseView& v, gf2::FqVec y);

// Adjoint map on row vectors: the column operations Z(x+1) += mark * Z(x)
// applied in increasing time order of the reversed randomness (i.e. the
// view's events taken backwards), so that Z.(primal Y) == (adjoint Z).Y.
gf2::BitVec adjoint_map(const noise::NoiseView& v, gf2::BitVec z);
gf2::FqVec adjoint_map(const noise::NoiseView& v, gf2::FqVec z);

// Dot products over F_2 / F_q (coordinates are 1-based labels, bit i-1).
bool dot(const gf2::BitVec& a, const gf2::BitVec& b);
int dot(const gf2::FqVec& a, const gf2::FqVec& b);

// Linear decomposition of the target column (the block's last) over the
// marks of the qualifying rings at `row` inside [t1, t2]:
//   M_target(t) = base + sum_j alpha_j * mark_j * term_j.
// A ring qualifies when the row+1 entries across the block satisfy
// `pattern` (default: all zero except the last, which is 1).  base replays
// the target column with the qualifying rings deleted; term_j evolves e_row
// through rows [1, row-1] on (tau_j, t].  None of base, alpha, term depend
// on the qualifying marks.
using RowPattern = std::function<bool(std::span<const std::uint8_t>)>;

struct ColumnDecomposition {
    gf2::BitVec base;  // A_0
    struct Term {
        double time;        // tau_j
        bool alpha;         // row+1 entry of the target column at tau_j
        std::uint8_t mark;  // xi_j
        gf2::BitVec vec;    // A_j
    };
    std::vector<Term> terms;

    gf2::BitVec reconstruct() const;
};

ColumnDecomposition decompose_column(const noise::NoiseField& w, int row, double t1, double t2,
                                     const ColumnBlock& m0, double t,
                                     const RowPattern& pattern = {});

// Span certificate for I = [a, b] and ring times t_1 < ... < t_k <= t:
//  - direct: do the restrictions to I of Phi_{I,[t_j,t]}(w, e_b) span
//    F_2^{b-a+1}?
//  - adjoint: for every nonzero Z supported on I, does some j give the
//    East-style run on the reversed randomness value 1 at b at time t - t_j?
// The two are computed by independent routes and must agree.
struct SpanCertificate {
    bool direct = false;
    bool adjoint = false;
};
bool span_direct(const noise::NoiseField& w, int a, int b, std::span<const double> times, double t);
SpanCertificate span_certificate(const noise::NoiseField& w, int a, int b,
                                 std::span<const double> times, double t);

// Row-major full-matrix mirror for the rank experiment: a row addition is a
// single packed-word XOR sweep.
class RowMajorMatrix {
  public:
    static RowMajorMatrix identity(int n);

    int n() const { return n_; }
    bool get(int i, int j) const {
        const std::size_t b = static_cast<std::size_t>(j - 1);
        return (w_[static_cast<std::size_t>(i - 1) * wpr_ + (b >> 6)] >> (b & 63)) & 1ull;
    }

    // row x += row x+1
    void add_row_below(int x) {
        std::uint64_t* dst = w_.data() + static_cast<std::size_t>(x - 1) * wpr_;
        const std::uint64_t* src = dst + wpr_;
        for (std::size_t k = 0; k < wpr_; ++k) dst[k] ^= src[k];
    }

    // Rank over F_2 of the block rows [r0, r1] x columns [c0, c1].
    int block_rank(int r0, int r1, int c0, int c1) const;

  private:
    int n_ = 0;
    std::size_t wpr_ = 0;
    std::vector<std::uint64_t> w_;
};

// Discrete-time driver: per step a uniform row in [1, n-1] and a fair bit.
// `steps` of it correspond to continuous time steps/n.
void discrete_steps(RowMajorMatrix& m, long long steps, rng::Stream& stream);

}  // namespace mwalk::walk
