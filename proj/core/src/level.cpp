#include "hbs/level.hpp"

namespace hbs {

namespace {

std::uint64_t binom(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (std::int64_t i = 1; i <= k; ++i)
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

}  // namespace

std::uint64_t s2_size(std::int64_t n) {
    return 1 + 2 * binom(n, 3) + 3 * binom(n, 4);
}

std::uint64_t s2_image_count(const std::vector<std::int64_t>& m, std::int64_t n) {
    // Strata by Hamming distance between the vector and its image.
    //   d=0: identity.
    //   d=2: one content swap (i j) with different letters; realizable with a
    //        dummy pair or a third equal-letter position.
    //   d=3: a 3-cycle over three pairwise distinct letters, two rotations.
    //   d=4: two disjoint content swaps; (a,b,a,b) quadruples collapse their
    //        two pairings to one image.
    std::int64_t total = 0;
    bool has_dummy = false;
    for (std::int64_t cnt : m) {
        total += cnt;
        if (cnt >= 2) has_dummy = true;
    }
    if (total != n) throw argument_error("s2_image_count: multiplicities must sum to n");
    if (!has_dummy && n > 1)
        throw argument_error("s2_image_count: requires a repeated letter");

    const std::size_t A = m.size();
    std::uint64_t swaps = 0;
    for (std::size_t a = 0; a < A; ++a)
        for (std::size_t b = a + 1; b < A; ++b)
            swaps += static_cast<std::uint64_t>(m[a]) * static_cast<std::uint64_t>(m[b]);

    std::uint64_t cycles = 0;
    for (std::size_t a = 0; a < A; ++a)
        for (std::size_t b = a + 1; b < A; ++b)
            for (std::size_t c = b + 1; c < A; ++c)
                cycles += 2ull * static_cast<std::uint64_t>(m[a]) *
                          static_cast<std::uint64_t>(m[b]) * static_cast<std::uint64_t>(m[c]);

    // Ordered pairs of swappable position pairs sharing at least one
    // position: sum over positions p of deg(p)^2 counts each ordered pair by
    // |P1 n P2|, and |P1 n P2| = 2 exactly when P1 = P2.
    std::uint64_t deg_sq = 0;
    for (std::size_t a = 0; a < A; ++a)
        deg_sq += static_cast<std::uint64_t>(m[a]) *
                  static_cast<std::uint64_t>(n - m[a]) * static_cast<std::uint64_t>(n - m[a]);
    const std::uint64_t disjoint_ordered = swaps * swaps - (deg_sq - 2 * swaps) - swaps;
    std::uint64_t dpairs = disjoint_ordered / 2;
    for (std::size_t a = 0; a < A; ++a)
        for (std::size_t b = a + 1; b < A; ++b)
            dpairs -= binom(m[a], 2) * binom(m[b], 2);

    return 1 + swaps + cycles + dpairs;
}

}  // namespace hbs
