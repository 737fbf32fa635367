// chacon_map.hpp — exact rational model of the Chacon cutting-and-stacking
// construction, the coding map, interval-set dynamics, and the
// empty-intersection time sets E_k.
//
// Stage 0 is the single level [0, 2/3).  Stage k cuts the stage-(k-1) stack
// into three equal columns, inserts one spacer cut from the unused part of
// [2/3, 1), and restacks left | middle | spacer | right.  Stage k has
//   height h_k = (3^(k+1) - 1) / 2,   level width w_k = 2 * 3^-(k+1),
//   total measure 1 - 3^-(k+1).
// The map sends each level to the one above it by translation; the pointwise
// limit is the Chacon map.  Levels are half-open [lo, lo + w) so the
// translation system is a true partial bijection.
//
// Points are addressed as (stage, level, offset) with exact rational offsets.
// level_of/position_of walk the column structure recursively, so no stage
// table is ever materialized for point dynamics.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "weakmix/rational.hpp"

namespace weakmix {

struct RationalInterval {
    Rat lo, hi; // [lo, hi)
    Rat length() const { return hi - lo; }
};

struct TowerStage {
    int k = 0;
    std::vector<RationalInterval> levels; // bottom to top
    Rat width;
    long long height = 0;
};

struct TranslationPiece {
    RationalInterval domain;
    Rat offset;
};

struct PiecewiseTranslation {
    int stage = 0;
    std::vector<TranslationPiece> pieces;
};

// Disjoint, sorted, merged list of half-open intervals.
struct IntervalSet {
    std::vector<RationalInterval> parts;
    Rat total_measure() const;
    static IntervalSet of(std::vector<RationalInterval> raw); // normalizes
    std::string to_json_text() const; // [[num_lo, exp_lo, num_hi, exp_hi], ...]
    static IntervalSet from_json_text(const std::string& text);
};

IntervalSet intersect(const IntervalSet& a, const IntervalSet& b);

enum class MapDirection { forward, inverse };

class ChaconMap {
  public:
    explicit ChaconMap(int max_stage = 20) : max_stage_(max_stage) {}

    int max_stage() const { return max_stage_; }

    static long long height(int k);          // h_k
    static Rat width(int k);                 // w_k
    static Rat spacer_lo(int k);             // 1 - 3^-k, k >= 1
    static Rat stage_measure(int k);         // 1 - 3^-(k+1)

    // Materialized stage (levels bottom to top).  Memory grows like 3^k.
    TowerStage build_stage(int k) const;
    PiecewiseTranslation stage_map(int k) const;

    // Point location: (level, offset) of x in the stage-k tower, or nullopt
    // when x lies in the unused tail [1 - 3^-(k+1), 1).
    struct Loc {
        long long level;
        Rat offset;
    };
    std::optional<Loc> locate(const Rat& x, int k) const;
    Rat position(int k, long long level, const Rat& offset) const;

    // One application of the map (or its inverse) at the smallest stage that
    // defines it.  Throws undefined_point past max_stage.
    Rat apply(const Rat& x, MapDirection dir = MapDirection::forward) const;

    // Itinerary over I0 = [0, 2/3), I1 = [2/3, 1): w_i = '0' or '1'.
    std::string code_orbit(const Rat& x, long long n) const;

    // Exact image C^n(s) (preimage for n < 0).  Escalates stages per piece;
    // throws stage_cap_exceeded when a piece cannot be resolved by max_stage
    // (images of sets touching a tower top are infinite unions of intervals).
    IntervalSet map_interval_set(const IntervalSet& s, long long n) const;

    // A_k = [0, 2 * 3^-(k+1)), the stage-k base level.
    static IntervalSet base_interval(int k);

    // E_k ∩ [1, N]: times n with mu(A_k ∩ C^-n A_k) = 0, exact.
    //
    // A_k is the union of its copies in any deeper tower; the copy heights
    // follow P_k = {0}, P_{m+1} = P_m ∪ (P_m + h_m) ∪ (P_m + 2 h_m + 1), and
    // mu(A_k ∩ C^-n A_k) > 0 iff n is a difference of two copy heights.
    // Differences ≤ N stabilize once h_m > N, so the computation is exact.
    std::vector<long long> empty_intersection_times(int k, long long N) const;

    // Membership test for the complement of E_k (n realizable as a height
    // difference), via digit decomposition n = Σ ε_m, ε_m ∈ {0, ±h_m,
    // ±(h_m+1), ±(2h_m+1)}.  Exact for any N; used for large sweeps.
    bool intersection_time(int k, long long n) const;

    // Decided part of {x : code_orbit(x, |w|) = w} as a union of stage-m
    // levels, plus the measure of the still-undecided remainder (top-window
    // levels and the unused tail).  Throws empty_cell when w is not a factor.
    struct CellResult {
        IntervalSet cell;
        Rat undecided;
        int stage;
    };
    CellResult coding_cell(const std::string& w, int stage = -1) const;

    // Same, for cylinders of the beta-subshift: the first symbol 2/0 split
    // needs one predecessor symbol, so levels start at height 1.
    CellResult beta_coding_cell(const std::string& w_beta, int stage = -1) const;

  private:
    int max_stage_;
    void map_piece(std::vector<RationalInterval>& out, RationalInterval piece, int stage,
                   MapDirection dir) const;
};

// Tower coding word of stage k: symbol per level, '0' for levels in I0,
// '1' for the spacers; equals the alpha fixed-point prefix of length h_k.
std::string tower_word(int k);

} // namespace weakmix
