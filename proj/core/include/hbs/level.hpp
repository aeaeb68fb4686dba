/* level.hpp -- per-level construction state: slot partitions, marker words,
 * classed suffix alphabets, and the registries of hierarchical word
 * descriptors (prefix-catalog words and suffix-universe words).
 *
 * Words are never flattened eagerly. A level-k word is a descriptor over the
 * level-k marker's suffix vector: an optional slot permutation (two
 * transpositions) over an optional set of free-slot edits. Level -1 "words"
 * are the base letters 0 and 1; every level-0 word starts with the literal
 * symbol 2.
 */

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "hbs/partition.hpp"
#include "hbs/perms.hpp"
#include "hbs/words.hpp"

namespace hbs {

// Index into the per-level suffix-word registry. At level -1 the ids are the
// literal letters 0 and 1.
using SuffId = std::int32_t;

// Index into the per-level prefix-catalog registry. Id 0 is always the
// marker word of that level (identity permutation over the marker chain).
using PreId = std::int32_t;

// A level-k prefix-catalog word: the slot permutation applied to the level-k
// marker suffix vector, over the prefix word `prefix` of level k-1.
// At level 0 `prefix` is ignored (the literal symbol 2).
struct PreDescriptor {
    PreId prefix = 0;
    PermPair perm;
    bool operator==(const PreDescriptor&) const = default;
};

// A level-k suffix-universe word: slot s holds base[perm(s)] where base is
// the level-k marker suffix vector with `edits` applied (sorted by slot,
// contents are level-(k-1) suffix ids). Membership in the suffix universe
// additionally requires the word not to be a prefix-catalog word; the
// builder only interns descriptors it has checked.
struct SuffDescriptor {
    PreId prefix = 0;
    PermPair perm;
    std::vector<std::pair<std::int32_t, SuffId>> edits;
    bool operator==(const SuffDescriptor&) const = default;
};

// Role a level-k partition class plays: class 1 is the free class (and
// always contains slot index 0); classes q >= 2 force the classed letter
// alphabet[q-2] at their slots.
struct LevelData {
    std::int32_t k = 0;
    std::int64_t slot_count = 0;      // number of suffix slots per word
    std::int64_t block_len = 0;       // word length at this level
    std::int64_t prev_block_len = 1;  // word length one level down
    std::int32_t cert_d = 1;          // multiplicity the partition certifies
    std::int32_t cert_c = 1;          // deletion budget the certificate covers
    Partition partition;              // classes over {0..slot_count}
    std::vector<SuffId> alphabet;     // classed level-(k-1) suffix words
    std::vector<SuffId> marker_suffix;  // slot s in [1..slot_count] -> suffix id
    std::map<std::int64_t, SuffId> planted;  // free slots not filled round-robin
    std::uint64_t prefix_catalog_count = 0;  // cumulative count (saturating)
    std::uint64_t prefix_images = 0;         // distinct marker-vector images
    std::uint64_t s2_count = 0;              // |S2(slot_count)|

    LevelData() : partition(1, {1}) {}

    std::int32_t Q() const { return partition.Q(); }
    // Class of slot l, or 0 for the free class.
    bool slot_is_free(std::int64_t l) const { return partition.label(l) == 1; }
    // The forced letter at slot l (requires a non-free slot).
    SuffId forced_letter(std::int64_t l) const {
        return alphabet[static_cast<std::size_t>(partition.label(l) - 2)];
    }
};

// Count of distinct images of a letter vector under all of S2(n), computed
// from the letter multiplicities. Requires some letter to occur twice (the
// vectors this toolkit builds always do); validated against enumeration in
// the tests.
std::uint64_t s2_image_count(const std::vector<std::int64_t>& multiplicities,
                             std::int64_t n);

// |S2(n)| = 1 + 2*C(n,3) + 3*C(n,4): identity, 3-cycles, double swaps.
std::uint64_t s2_size(std::int64_t n);

}  // namespace hbs
