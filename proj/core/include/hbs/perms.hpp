/* perms.hpp -- two-fold products of transpositions acting on {1..n}.
 *
 * S(n) is the set of transpositions (i j), 1 <= i < j <= n. The toolkit works
 * with the composition set S2(n) = { t1 o t2 : t1, t2 in S(n) }, whose members
 * move at most 4 points and (for n >= 5) always fix a point. A PermPair stores
 * the two transpositions, not a dense map.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hbs/errors.hpp"

namespace hbs {

struct Transposition {
    std::int32_t i = 1, j = 2;  // 1 <= i < j <= n

    std::int32_t apply(std::int32_t x) const {
        if (x == i) return j;
        if (x == j) return i;
        return x;
    }
    bool operator==(const Transposition&) const = default;
};

class PermPair {
public:
    // Represents t1 o t2 on {1..n}: apply(x) = t1(t2(x)).
    PermPair(std::int32_t n, Transposition t1, Transposition t2);

    // (1 2)(1 2), the identity element of S2(n). Requires n >= 2.
    static PermPair identity(std::int32_t n);

    std::int32_t n() const { return n_; }
    Transposition t1() const { return t1_; }
    Transposition t2() const { return t2_; }

    std::int32_t apply(std::int32_t x) const { return t1_.apply(t2_.apply(x)); }

    // t2 o t1, again a member of S2(n).
    PermPair inverse() const { return PermPair(n_, t2_, t1_); }

    bool is_identity() const;

    // Points x with apply(x) != x, ascending. At most 4 of them.
    std::vector<std::int32_t> displaced() const;

    // Dense one-based function table (index 0 unused).
    std::vector<std::int32_t> table() const;

    bool same_map(const PermPair& other) const;

private:
    std::int32_t n_;
    Transposition t1_, t2_;
};

// All n(n-1)/2 transpositions of {1..n}, lexicographic. Requires n >= 2.
std::vector<Transposition> transpositions(std::int32_t n);

// Deduplicated S2(n) as maps; contains the identity; size <= n^4.
// Enumeration order is lexicographic on (t1 index, t2 index), first
// representative kept, so the identity comes first.
std::vector<PermPair> s2_enumerate(std::int32_t n);

// Smallest m with phi(m) = m. Guaranteed to exist for n >= 5.
std::int32_t fixed_point(const PermPair& phi);

// Output position l holds blocks[phi(l)], 1-based slots. |blocks| must be n.
template <typename T>
std::vector<T> apply_block_perm(const PermPair& phi, const std::vector<T>& blocks) {
    if (static_cast<std::int32_t>(blocks.size()) != phi.n())
        throw argument_error("apply_block_perm: |blocks| != n");
    std::vector<T> out(blocks.size());
    for (std::int32_t l = 1; l <= phi.n(); ++l)
        out[static_cast<std::size_t>(l - 1)] = blocks[static_cast<std::size_t>(phi.apply(l) - 1)];
    return out;
}

// Some phi in S2(n) with phi(l1) = s1 and phi(l2) = s2, for distinct targets
// l1 != l2 and distinct sources s1 != s2. Constructive recipe with a bounded
// fallback enumeration over the points involved; nullopt when none exists
// (only possible for very small n).
std::optional<PermPair> find_two_constraint_perm(std::int32_t n, std::int32_t l1,
                                                 std::int32_t s1, std::int32_t l2,
                                                 std::int32_t s2);

}  // namespace hbs
