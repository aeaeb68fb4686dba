/* dynamics.hpp -- the odometer factor and finite-horizon verification of the
 * marker-return, multiple-return, openness and proximality statements.
 *
 * Everything here is a pure read over a finished Construction. Asymptotic
 * statements are verified through the finite witnesses their proofs provide:
 * explicit scan horizons, explicit return-time bounds, explicit planted
 * preimages.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hbs/builder.hpp"
#include "hbs/words.hpp"

namespace hbs {

// Compatible residue tower: coords[k] in [0, p_k), coords agree downward.
struct OdometerPoint {
    std::vector<std::int64_t> coords;
};

// Checks y_k' == y_k mod p_k for all k' >= k.
bool odometer_compatible(const Construction& c, const OdometerPoint& y);

// Coordinatewise (y_k + m) mod p_k; preserves compatibility.
OdometerPoint odometer_add(const Construction& c, const OdometerPoint& y, std::int64_t m);

// The zero point up to level K.
OdometerPoint odometer_zero(std::int32_t K);

// sigma^shift of the limit point, usable on [0, horizon).
class FiniteOrbitPoint {
public:
    FiniteOrbitPoint(const Construction& c, std::int64_t shift, std::int64_t horizon);

    Symbol at(std::int64_t j) const;
    std::int64_t shift() const { return shift_; }
    std::int64_t horizon() const { return horizon_; }
    Word window(std::int64_t pos, std::int64_t len) const;
    IndexableSeq seq() const;

private:
    const Construction* c_;
    std::int64_t shift_;
    std::int64_t horizon_;
};

// Marker phase: the unique r in [0, p_k) such that the occurrences of the
// level-(k-1) prefix-catalog family in the scanned window sit exactly on
// r + p_k N. Scans [0, 2 p_k]; occurrences off a single residue raise
// consistency_error, no occurrence raises undecidable_error.
std::int64_t compute_r(const Construction& c, const FiniteOrbitPoint& x, std::int32_t k);

// Occurrence positions of the level-(k-1) prefix family in x within
// [0, horizon), by direct scan. The family test is structural.
std::vector<std::int64_t> marker_family_occurrences(const Construction& c,
                                                    const FiniteOrbitPoint& x,
                                                    std::int32_t k, std::int64_t horizon);

// Odometer projection up to level K: coords[k] = (p_k - r_k(x)) mod p_k.
OdometerPoint project(const Construction& c, const FiniteOrbitPoint& x, std::int32_t K);

// Block index m with x*[m p_{k+1} .. m p_{k+1} + p_k) equal to the level-k
// prefix-catalog word A. Resolves through the fiber-gadget registry for
// level-0 ids; verified by direct reads before returning.
std::optional<std::int64_t> marker_hit(const Construction& c, std::int32_t k, PreId A);

// Multiple-return search: smallest m < 2(n_{k+2}+1) such that with
// t = n p_K + m p_{k+1}, x|_[i t, i t + p_k) = x|_[0, p_k) for i = 1..d.
struct MultiReturn {
    std::optional<std::int64_t> m;
    std::int64_t bound = 0;     // exclusive search bound on m
    std::int64_t step = 0;      // t for the returned m
};
MultiReturn multi_return_search(const Construction& c, const FiniteOrbitPoint& x,
                                std::int32_t d, std::int32_t k, std::int32_t K,
                                std::int64_t n);

// A position t < horizon where x and y agree on a p_K-window. Requires equal
// projections up to level K+2. Alignment is found structurally and verified
// by direct reads.
std::optional<std::int64_t> proximal_witness(const Construction& c,
                                             const FiniteOrbitPoint& x,
                                             const FiniteOrbitPoint& y, std::int32_t K,
                                             std::int64_t horizon);

// The four positional cases of the residue-transport argument.
enum class TransportCase { HeadBlock, Interior, TailShift, TailLast };
TransportCase classify_transport(const Construction& c, std::int32_t k, std::int64_t y_k,
                                 std::int64_t y_k1);

// Residue transport: given a verified occurrence of w at m p_k + y_k, find
// m' with x*[m' p_{k+1} + y_{k+1} ..) in [w]. Scans the block lattice; the
// planted coverage words bound the scan by the slot count two levels up.
std::optional<std::int64_t> open_transport(const Construction& c, const Word& w,
                                           std::int32_t k, std::int64_t m,
                                           std::int64_t y_k, std::int64_t y_k1);

// Iterated transport toward a compatible odometer target. Returns the
// realized point and the deepest coordinate matched (at least from_level+1
// when coverage is planted at the next level).
struct PreimageSample {
    std::int64_t shift = 0;
    std::int32_t matched_depth = 0;
};
PreimageSample preimage_sample(const Construction& c, const OdometerPoint& y_target,
                               std::int32_t from_level, const Word& w,
                               const FiniteOrbitPoint& xref);

// One approximation per level-0 prefix-catalog member, pairwise distinct
// within the first p_1 symbols, projections matching the zero point up to
// the gadget level. Only the zero fiber is materialized.
std::vector<FiniteOrbitPoint> fiber_samples(const Construction& c, const OdometerPoint& y,
                                            std::int32_t k0);

}  // namespace hbs
