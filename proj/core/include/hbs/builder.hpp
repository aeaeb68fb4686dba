/* builder.hpp -- the inductive marker construction.
 *
 * Level by level the builder obtains a certified slot partition, extends the
 * marker word, fixes the classed two-letter suffix alphabet for the next
 * level, and plants the witness words (slot-coverage, phase flips, fiber
 * gadgets) that later verification stages read back out of the limit point.
 *
 * The limit point is never materialized: symbols are resolved by descending
 * the descriptor tree in O(depth) steps.
 */

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hbs/config.hpp"
#include "hbs/level.hpp"
#include "hbs/partition.hpp"
#include "hbs/words.hpp"

namespace hbs {

class Construction {
public:
    static Construction build(const BuildConfig& cfg);

    const BuildConfig& config() const { return cfg_; }
    // Highest built level index.
    std::int32_t depth() const { return static_cast<std::int32_t>(levels_.size()) - 1; }
    const LevelData& level(std::int32_t k) const;
    // Word length at level k; block_len(-1) = 1.
    std::int64_t block_len(std::int32_t k) const;
    std::int64_t slot_count(std::int32_t k) const { return level(k).slot_count; }

    // ---- limit-point access -------------------------------------------
    std::int64_t x_star_len() const { return block_len(depth()); }
    Symbol x_star_at(std::int64_t pos) const;
    IndexableSeq x_star_prefix(std::int64_t len) const;
    Word x_star_window(std::int64_t pos, std::int64_t len) const;

    // ---- descriptor access --------------------------------------------
    const std::vector<PreDescriptor>& pre_registry(std::int32_t k) const;
    const std::vector<SuffDescriptor>& suffix_registry(std::int32_t k) const;
    PreId intern_pre(std::int32_t k, const PreDescriptor& d);
    SuffId intern_suffix(std::int32_t k, const SuffDescriptor& d);

    Symbol pre_symbol(std::int32_t k, PreId id, std::int64_t off) const;
    Symbol suffix_symbol(std::int32_t k, SuffId id, std::int64_t off) const;
    Word flatten_pre(std::int32_t k, PreId id) const;
    Word flatten_suffix(std::int32_t k, SuffId id) const;

    // Content of slot s (1-based) of a word given by descriptor.
    SuffId pre_slot_content(std::int32_t k, PreId id, std::int64_t s) const;
    SuffId suffix_slot_content(std::int32_t k, SuffId id, std::int64_t s) const;
    // Content of slot s of the level-k marker word.
    SuffId marker_slot_content(std::int32_t k, std::int64_t s) const;

    // Identity of the level-k block of the limit point at block index b:
    // either a prefix-catalog word or a suffix-universe word.
    struct BlockRef {
        bool is_prefix = false;
        PreId pre = 0;
        SuffId suff = 0;
    };
    BlockRef resolve_block(std::int32_t k, std::int64_t index) const;

    // ---- level-0 catalog (fully materialized) --------------------------
    const std::vector<Word>& level0_universe() const { return level0_universe_; }
    std::int64_t level0_prefix_count() const;
    Word level0_prefix_word(PreId id) const;

    // ---- membership -----------------------------------------------------
    enum class Membership { Prefix, Suffix, None };
    Membership membership(const Word& flat, std::int32_t k) const;
    bool is_prefix_word(const Word& flat, std::int32_t k) const;

    // ---- construction operations ---------------------------------------
    struct EmbedResult {
        std::optional<PreId> prefix_id;  // absent when the prefix catalog
                                         // cannot carry the constraints
        SuffId suffix_id = 0;
        std::int32_t out_level = 0;
    };

    // Both a prefix-catalog word and a suffix word of level k+1 starting
    // with A and holding w1, w2 at slots l1 < l2 (1-based).
    EmbedResult embed_free(std::int32_t k, PreId A, std::int64_t l1, std::int64_t l2,
                           SuffId w1, SuffId w2);

    // A level-(k+1) suffix word starting with A whose free-slot blocks differ
    // from the marker's at >= 9 slots, so no slot permutation maps it into
    // the prefix catalog.
    SuffId choose_robust_suffix(std::int32_t k, PreId A);

    // Corollary-style deep embedding: words of level k_target+1 holding A at
    // offset l0 (a multiple of block_len(k+1)) and w at offset l1 (a multiple
    // of block_len(k) that is not one of block_len(k+1)). The suffix side is
    // always realized; the prefix side only where the prefix catalog can
    // carry it (see notes()).
    EmbedResult embed_free_deep(std::int32_t k, PreId A, SuffId w, std::int64_t l0,
                                std::int64_t l1, std::int32_t k_target);

    // ---- planted structure ----------------------------------------------
    struct Gadget {
        std::int64_t marker_slot = 0;  // free slot of the top marker
        PreId chain_bottom = 0;        // level-0 prefix id realized at depth
    };
    const std::vector<Gadget>& fiber_gadgets() const { return gadgets_; }
    std::int32_t gadget_level() const { return gadget_level_; }

    // Occurrence slots of suffix word w in the level-(k+1) marker vector.
    std::vector<std::int64_t> marker_occurrences(std::int32_t k1, SuffId w) const;

    const std::vector<std::string>& notes() const { return notes_; }

private:
    Construction() = default;

    void build_level(std::int32_t k, const LevelPlan& plan);
    void assemble_marker(std::int32_t k);
    void make_classed_pair(std::int32_t k);
    std::vector<SuffId> make_slot_coverage(std::int32_t j);
    void make_gadgets(std::int32_t k);
    void build_level0_catalog();
    Partition level0_fallback_partition() const;

    std::vector<std::int64_t> free_slots(std::int32_t k) const;
    std::vector<std::pair<std::int32_t, SuffId>> robust_edits(
        std::int32_t k, const std::vector<std::int64_t>& avoid) const;

    // embed core: place up to two (slot, word) constraints over prefix A.
    EmbedResult embed_constraints(std::int32_t k, PreId A,
                                  std::vector<std::pair<std::int64_t, SuffId>> cons);

    BuildConfig cfg_;
    std::vector<LevelData> levels_;
    std::vector<std::vector<PreDescriptor>> pre_reg_;
    std::vector<std::vector<SuffDescriptor>> suff_reg_;
    std::vector<std::map<std::vector<std::int64_t>, PreId>> pre_intern_;
    std::vector<std::map<std::vector<std::int64_t>, SuffId>> suff_intern_;
    std::vector<std::vector<SuffId>> classed_;  // classed pair per level
    std::vector<Word> level0_universe_;
    std::vector<Gadget> gadgets_;
    std::vector<SuffId> gadget_words_;
    std::int32_t gadget_level_ = -1;
    std::vector<std::string> notes_;
};

}  // namespace hbs
