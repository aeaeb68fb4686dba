#include "hbs/builder.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace hbs {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out))
        throw infeasible_error("level sizes overflow 64-bit positions");
    return out;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
    return a * b;
}

bool strict_size_ok(std::int64_t n) {
    // Conservative integer reading of 2^(sqrt(n)-1) > n^4 + 2.
    std::int64_t s = 0;
    while ((s + 1) * (s + 1) <= n) ++s;
    if (s - 1 >= 63) return true;
    const unsigned __int128 lhs = (unsigned __int128){1} << (s - 1);
    const unsigned __int128 n128 = static_cast<unsigned __int128>(n);
    return lhs > n128 * n128 * n128 * n128 + 2;
}

}  // namespace

std::vector<LevelPlan> toy_level_plan(std::int32_t depth) {
    // Level 2 carries the multiplicity-3 certificate used by the
    // multiple-return grid (word level 0, d <= 3); levels 0 and 1 keep the
    // prefix catalog small; deeper levels host planted witness words.
    // The worst-offset density n / (Q^{2d} d) needs to sit near 5 for the
    // repair loop to close; sizes below reflect that per certificate
    // multiplicity. The product of all (n_k + 1) must stay inside 63-bit
    // positions, so escalation caps are tight.
    static const LevelPlan base[] = {
        {9, 1, 1, -1.0, 4, 9},         // 0: fixed size bounds the prefix catalog
        {820, 2, 1, -1.0, 36, 900},    // 1
        {12000, 3, 1, -1.0, 48, 0},    // 2
        {130, 1, 2, 0.5, 40, 140},     // 3
        {130, 1, 2, 0.5, 40, 140},     // 4
        {130, 1, 2, 0.5, 40, 140},     // 5
        {130, 1, 2, 0.5, 40, 140},     // 6
        {280, 1, 2, 0.55, 140, 0},     // 7
    };
    std::vector<LevelPlan> plans;
    for (std::int32_t k = 0; k <= depth; ++k)
        plans.push_back(base[std::min<std::int32_t>(k, 7)]);
    // The top level hosts the fiber gadgets and needs a wide free class.
    if (depth >= 3) {
        LevelPlan& top = plans[static_cast<std::size_t>(depth)];
        top.n_target = std::max<std::int64_t>(top.n_target, 280);
        top.star_min = std::max<std::int64_t>(top.star_min, 140);
        top.star_share = 0.55;
        top.n_cap = 0;
    }
    return plans;
}

const LevelData& Construction::level(std::int32_t k) const {
    if (k < 0 || k > depth()) throw depth_error("level index outside built range");
    return levels_[static_cast<std::size_t>(k)];
}

std::int64_t Construction::block_len(std::int32_t k) const {
    if (k == -1) return 1;
    return level(k).block_len;
}

const std::vector<PreDescriptor>& Construction::pre_registry(std::int32_t k) const {
    if (k < 0 || k > depth()) throw depth_error("pre_registry level outside built range");
    return pre_reg_[static_cast<std::size_t>(k)];
}

const std::vector<SuffDescriptor>& Construction::suffix_registry(std::int32_t k) const {
    if (k < 0 || k > depth()) throw depth_error("suffix_registry level outside built range");
    return suff_reg_[static_cast<std::size_t>(k)];
}

std::vector<std::int64_t> Construction::free_slots(std::int32_t k) const {
    const LevelData& lv = level(k);
    std::vector<std::int64_t> out;
    for (std::int64_t s = 1; s <= lv.slot_count; ++s)
        if (lv.slot_is_free(s)) out.push_back(s);
    return out;
}

std::vector<std::pair<std::int32_t, SuffId>> Construction::robust_edits(
    std::int32_t k, const std::vector<std::int64_t>& avoid) const {
    const LevelData& lv = level(k);
    const auto& alpha = lv.alphabet;
    std::vector<std::pair<std::int32_t, SuffId>> edits;
    std::int32_t skip = 0;
    for (std::int64_t s : free_slots(k)) {
        if (edits.size() >= 9) break;
        if (lv.planted.count(s)) continue;
        if (std::find(avoid.begin(), avoid.end(), s) != avoid.end()) continue;
        if (skip++ % 2 != 0) continue;  // spread the edited slots out
        const SuffId cur = lv.marker_suffix[static_cast<std::size_t>(s)];
        const SuffId flip = (cur == alpha[0]) ? alpha[1] : alpha[0];
        edits.push_back({static_cast<std::int32_t>(s), flip});
    }
    if (edits.size() < 9)
        throw infeasible_error("robust_edits: fewer than 9 editable free slots at level " +
                               std::to_string(k));
    return edits;
}

// ---------------------------------------------------------------------------
// Interning

namespace {

using Key = std::vector<std::int64_t>;

}  // namespace

PreId Construction::intern_pre(std::int32_t k, const PreDescriptor& d) {
    auto& reg = pre_reg_[static_cast<std::size_t>(k)];
    const LevelData& lv = level(k);
    // Canonical key: prefix id plus the slot/content differences of the
    // permuted marker vector against the marker vector itself.
    Key key{d.prefix};
    std::vector<std::pair<std::int64_t, SuffId>> diffs;
    for (std::int32_t s : d.perm.displaced()) {
        if (s > lv.slot_count) continue;
        const SuffId got = lv.marker_suffix[static_cast<std::size_t>(d.perm.apply(s))];
        if (got != lv.marker_suffix[static_cast<std::size_t>(s)])
            diffs.push_back({s, got});
    }
    std::sort(diffs.begin(), diffs.end());
    for (auto& [s, v] : diffs) {
        key.push_back(s);
        key.push_back(v);
    }
    auto& interned = pre_intern_[static_cast<std::size_t>(k)];
    auto it = interned.find(key);
    if (it != interned.end()) return it->second;
    reg.push_back(d);
    const PreId id = static_cast<PreId>(reg.size()) - 1;
    interned.emplace(std::move(key), id);
    return id;
}

SuffId Construction::intern_suffix(std::int32_t k, const SuffDescriptor& d) {
    auto& reg = suff_reg_[static_cast<std::size_t>(k)];
    const LevelData& lv = level(k);
    Key key{d.prefix};
    // Candidate slots where the content can differ from the marker vector:
    // displaced slots and preimages of edited slots.
    std::vector<std::int64_t> cand;
    for (std::int32_t s : d.perm.displaced()) cand.push_back(s);
    const PermPair inv = d.perm.inverse();
    for (const auto& [slot, value] : d.edits) {
        (void)value;
        cand.push_back(inv.apply(slot));
    }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    std::vector<std::pair<std::int64_t, SuffId>> diffs;
    for (std::int64_t s : cand) {
        if (s < 1 || s > lv.slot_count) continue;
        const std::int64_t b = d.perm.apply(static_cast<std::int32_t>(s));
        SuffId got = lv.marker_suffix[static_cast<std::size_t>(b)];
        for (const auto& [slot, value] : d.edits)
            if (slot == b) got = value;
        if (got != lv.marker_suffix[static_cast<std::size_t>(s)]) diffs.push_back({s, got});
    }
    for (auto& [s, v] : diffs) {
        key.push_back(s);
        key.push_back(v);
    }
    auto& interned = suff_intern_[static_cast<std::size_t>(k)];
    auto it = interned.find(key);
    if (it != interned.end()) return it->second;
    reg.push_back(d);
    const SuffId id = static_cast<SuffId>(reg.size()) - 1;
    interned.emplace(std::move(key), id);
    return id;
}

// ---------------------------------------------------------------------------
// Build

Construction Construction::build(const BuildConfig& cfg) {
    Construction c;
    c.cfg_ = cfg;

    if (cfg.regime == Regime::Strict) {
        // Strict regime: level-0 spine only. Accepted sizes must satisfy the
        // exponential-versus-polynomial inequality; the next level would need
        // one partition class per suffix word, which is astronomically many,
        // so catalogs stay implicit and construction stops after the spine.
        std::int64_t n = std::max<std::int64_t>(cfg.strict_floor, 101);
        while (!strict_size_ok(n)) ++n;
        LevelPlan plan{n, 1, 6, -1.0, 9, n + n / 4};
        c.levels_.reserve(1);
        c.pre_reg_.resize(1);
        c.suff_reg_.resize(1);
        c.pre_intern_.resize(1);
        c.suff_intern_.resize(1);
        c.classed_.resize(1);
        c.build_level(0, plan);
        c.notes_.push_back(
            "strict regime: level-0 spine only; the level-1 partition would need "
            "one class per level-0 suffix word (at least 2^" +
            std::to_string(c.level(0).partition.class_size(1)) +
            " classes), so deeper levels and full catalogs stay implicit");
        if (cfg.depth > 0)
            c.notes_.push_back("requested depth " + std::to_string(cfg.depth) +
                               " reduced to 0 in the strict regime");
        return c;
    }

    const std::int32_t depth = cfg.depth;
    if (depth < 0) throw argument_error("build: depth >= 0 required");
    const auto plans = toy_level_plan(depth);
    c.levels_.reserve(static_cast<std::size_t>(depth) + 1);
    c.pre_reg_.resize(static_cast<std::size_t>(depth) + 1);
    c.suff_reg_.resize(static_cast<std::size_t>(depth) + 1);
    c.pre_intern_.resize(static_cast<std::size_t>(depth) + 1);
    c.suff_intern_.resize(static_cast<std::size_t>(depth) + 1);
    c.classed_.resize(static_cast<std::size_t>(depth) + 1);
    for (std::int32_t k = 0; k <= depth; ++k)
        c.build_level(k, plans[static_cast<std::size_t>(k)]);
    return c;
}

Partition Construction::level0_fallback_partition() const {
    // A hand-checked labeling of {0..9}: the doubled string realizes every
    // ordered class pair in every tail window.
    return Partition(3, {1, 1, 2, 2, 3, 3, 1, 3, 2, 1});
}

void Construction::build_level(std::int32_t k, const LevelPlan& plan) {
    const std::int32_t Q = (k == 0) ? 3 : 1 + static_cast<std::int32_t>(
                                               classed_[static_cast<std::size_t>(k - 1)].size());

    SearchSpec sp;
    sp.d = plan.cert_d;
    sp.c = plan.cert_c;
    sp.Q = Q;
    sp.N = plan.n_target;
    sp.start_n = plan.n_target;
    sp.max_n = plan.n_cap > 0 ? plan.n_cap : plan.n_target;
    sp.seed = mix_seed(cfg_.seed, static_cast<std::uint64_t>(k));
    sp.budget = cfg_.partition_budget;
    sp.min_label1_size = plan.star_min;
    sp.label1_share = plan.star_share;

    std::optional<Partition> part;
    try {
        part = search_partition(sp).partition;
    } catch (const search_failure&) {
        if (k == 0 && cfg_.regime == Regime::Toy) {
            part = level0_fallback_partition();
            Certificate cert;
            // The fallback must pass the same gate a searched partition does.
            std::string why;
            auto goods_ok = verify_exhaustive(*part, sp.d, sp.c, 1u << 20, &why);
            if (!goods_ok)
                throw consistency_error("level-0 fallback partition invalid: " + why);
            notes_.push_back("level 0: seeded search failed, canonical labeling used");
        } else {
            throw;
        }
    }

    LevelData lv;
    lv.k = k;
    lv.partition = *part;
    lv.slot_count = lv.partition.n();
    lv.prev_block_len = (k == 0) ? 1 : level(k - 1).block_len;
    lv.block_len = checked_mul(lv.prev_block_len, lv.slot_count + 1);
    lv.cert_d = plan.cert_d;
    lv.cert_c = plan.cert_c;
    lv.alphabet = (k == 0) ? std::vector<SuffId>{0, 1}
                           : classed_[static_cast<std::size_t>(k - 1)];
    if (static_cast<std::int32_t>(lv.alphabet.size()) != Q - 1)
        throw consistency_error("alphabet size does not match partition class count");
    lv.s2_count = s2_size(lv.slot_count);
    levels_.push_back(std::move(lv));

    assemble_marker(k);

    // Prefix-catalog count: every level multiplies by the number of distinct
    // slot-permutation images of its marker vector.
    {
        LevelData& me = levels_[static_cast<std::size_t>(k)];
        std::map<SuffId, std::int64_t> mult;
        for (std::int64_t s = 1; s <= me.slot_count; ++s)
            ++mult[me.marker_suffix[static_cast<std::size_t>(s)]];
        std::vector<std::int64_t> ms;
        for (auto& [id, m] : mult) ms.push_back(m);
        const std::uint64_t images = s2_image_count(ms, me.slot_count);
        const std::uint64_t below = (k == 0) ? 1 : level(k - 1).prefix_catalog_count;
        me.prefix_images = images;
        me.prefix_catalog_count = sat_mul(below, images);
    }

    // Chain word: identity image of the marker, always prefix id 0.
    const PreId chain = intern_pre(
        k, PreDescriptor{(k == 0) ? 0 : 0, PermPair::identity(
                                              static_cast<std::int32_t>(level(k).slot_count))});
    if (chain != 0) throw consistency_error("chain word must intern as prefix id 0");

    if (k == 0 && cfg_.regime == Regime::Toy) build_level0_catalog();
    make_classed_pair(k);
}

void Construction::assemble_marker(std::int32_t k) {
    LevelData& lv = levels_[static_cast<std::size_t>(k)];
    lv.marker_suffix.assign(static_cast<std::size_t>(lv.slot_count) + 1, -1);
    for (std::int64_t s = 1; s <= lv.slot_count; ++s)
        if (!lv.slot_is_free(s))
            lv.marker_suffix[static_cast<std::size_t>(s)] = lv.forced_letter(s);

    auto frees = free_slots(k);
    std::size_t next = 0;

    // Planted words: slot-coverage for the previous level from level 5 on,
    // fiber gadgets at the top level.
    if (cfg_.regime == Regime::Toy && k >= 5) {
        for (SuffId w : make_slot_coverage(k - 1)) {
            if (next >= frees.size())
                throw infeasible_error("marker at level " + std::to_string(k) +
                                       " has too few free slots for coverage words");
            lv.planted[frees[next]] = w;
            lv.marker_suffix[static_cast<std::size_t>(frees[next])] = w;
            ++next;
        }
    }
    if (cfg_.regime == Regime::Toy && k == cfg_.depth && k >= 3) {
        make_gadgets(k);
        for (std::size_t gi = 0; gi < gadgets_.size(); ++gi) {
            if (next >= frees.size())
                throw infeasible_error("marker at level " + std::to_string(k) +
                                       " has too few free slots for fiber gadgets");
            gadgets_[gi].marker_slot = frees[next];
            lv.planted[frees[next]] = gadget_words_[gi];
            lv.marker_suffix[static_cast<std::size_t>(frees[next])] = gadget_words_[gi];
            ++next;
        }
    }

    // Remaining free slots round-robin over the classed alphabet, so every
    // letter occurs in every marker beyond its forced class.
    std::size_t rr = 0;
    for (; next < frees.size(); ++next, ++rr)
        lv.marker_suffix[static_cast<std::size_t>(frees[next])] =
            lv.alphabet[rr % lv.alphabet.size()];
}

void Construction::build_level0_catalog() {
    const LevelData& lv = level(0);
    const std::int32_t n = static_cast<std::int32_t>(lv.slot_count);
    if (n > 24) throw infeasible_error("level-0 catalog materialization needs a small n");
    const auto perms = s2_enumerate(n);

    // Prefix catalog: all images of the marker, identity first (so the
    // marker itself is id 0), later duplicates dropped.
    for (const PermPair& phi : perms) intern_pre(0, PreDescriptor{0, phi});
    if (static_cast<std::uint64_t>(pre_reg_[0].size()) != lv.prefix_catalog_count)
        throw consistency_error("level-0 prefix catalog count mismatch");

    // Universe: every bit choice on free slots, forced bits on classes,
    // closed under all slot permutations.
    std::vector<Symbol> base(static_cast<std::size_t>(n) + 1, 0);
    base[0] = 2;
    for (std::int64_t s = 1; s <= n; ++s)
        base[static_cast<std::size_t>(s)] =
            lv.slot_is_free(s) ? -1 : static_cast<Symbol>(lv.forced_letter(s));
    const auto frees = free_slots(0);
    std::vector<std::vector<Symbol>> seen;
    for (std::uint32_t mask = 0; mask < (1u << frees.size()); ++mask) {
        auto word = base;
        for (std::size_t i = 0; i < frees.size(); ++i)
            word[static_cast<std::size_t>(frees[i])] = (mask >> i) & 1;
        for (const PermPair& phi : perms) {
            std::vector<Symbol> img(word);
            for (std::int32_t s = 1; s <= n; ++s)
                img[static_cast<std::size_t>(s)] =
                    word[static_cast<std::size_t>(phi.apply(s))];
            seen.push_back(std::move(img));
        }
    }
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    level0_universe_.reserve(seen.size());
    for (auto& syms : seen) level0_universe_.push_back(Word(std::move(syms)));
}

void Construction::make_classed_pair(std::int32_t k) {
    const LevelData& lv = level(k);
    std::vector<SuffId>& pair = classed_[static_cast<std::size_t>(k)];

    if (k == 0) {
        // One-flip and two-flip words over free slots carrying the same bit:
        // both flips move the letter count the same way, so neither word is
        // a (count-preserving) slot permutation of the marker.
        std::vector<std::int64_t> zeros, ones;
        for (std::int64_t s : free_slots(0))
            (lv.marker_suffix[static_cast<std::size_t>(s)] == 0 ? zeros : ones).push_back(s);
        auto& grp = zeros.size() >= 2 ? zeros : ones;
        if (grp.size() < 2)
            throw infeasible_error("level 0 needs two free slots with equal bits");
        auto flip = [&](std::int64_t s) -> std::pair<std::int32_t, SuffId> {
            const SuffId cur = lv.marker_suffix[static_cast<std::size_t>(s)];
            return {static_cast<std::int32_t>(s), cur == 0 ? 1 : 0};
        };
        const auto id = PermPair::identity(static_cast<std::int32_t>(lv.slot_count));
        pair.push_back(intern_suffix(0, SuffDescriptor{0, id, {flip(grp[0])}}));
        pair.push_back(intern_suffix(0, SuffDescriptor{0, id, {flip(grp[0]), flip(grp[1])}}));
        return;
    }

    const auto idp = PermPair::identity(static_cast<std::int32_t>(lv.slot_count));
    if (k <= 2) {
        // Sparse pair: two disjoint 9-slot edit sets with pairwise slot gaps
        // of at least 2 (so any two adjacent slots are clean in one of the
        // pair), away from the first and last slot.
        std::vector<std::int64_t> picks;
        std::int64_t last = -10;
        for (std::int64_t s : free_slots(k)) {
            if (picks.size() >= 18) break;
            if (s <= 1 || s >= lv.slot_count) continue;
            if (lv.planted.count(s)) continue;
            if (s - last < 2) continue;
            picks.push_back(s);
            last = s;
        }
        if (picks.size() < 18)
            throw infeasible_error("level " + std::to_string(k) +
                                   ": not enough spread free slots for the classed pair");
        auto mk = [&](std::size_t from) {
            std::vector<std::pair<std::int32_t, SuffId>> edits;
            for (std::size_t i = from; i < from + 9; ++i) {
                const SuffId cur = lv.marker_suffix[static_cast<std::size_t>(picks[i])];
                edits.push_back({static_cast<std::int32_t>(picks[i]),
                                 cur == lv.alphabet[0] ? lv.alphabet[1] : lv.alphabet[0]});
            }
            return intern_suffix(k, SuffDescriptor{0, idp, std::move(edits)});
        };
        pair.push_back(mk(0));
        pair.push_back(mk(9));
        return;
    }

    // Dense pair: one word per letter with every unplanted free slot set to
    // that letter. Covers (letter @ free slot) for the residue transports.
    for (SuffId target : lv.alphabet) {
        std::vector<std::pair<std::int32_t, SuffId>> edits;
        for (std::int64_t s : free_slots(k)) {
            if (lv.planted.count(s)) continue;
            if (lv.marker_suffix[static_cast<std::size_t>(s)] != target)
                edits.push_back({static_cast<std::int32_t>(s), target});
        }
        if (edits.size() < 9)
            throw infeasible_error("level " + std::to_string(k) +
                                   ": dense classed word has fewer than 9 edits");
        pair.push_back(intern_suffix(k, SuffDescriptor{0, idp, std::move(edits)}));
    }
}

std::vector<SuffId> Construction::make_slot_coverage(std::int32_t j) {
    // Words placing classed letter a at the slots of the other letter's
    // class; (letter @ free slot) is covered by the dense classed pair and
    // (letter @ own class) by every word.
    const LevelData& lv = level(j);
    struct Demand {
        SuffId letter;
        std::int64_t slot;
    };
    std::vector<Demand> demands;
    for (std::size_t a = 0; a < lv.alphabet.size(); ++a) {
        for (std::int64_t q = 1; q <= lv.slot_count; ++q) {
            const std::int32_t lab = lv.partition.label(q);
            if (lab >= 2 && lab != static_cast<std::int32_t>(a) + 2)
                demands.push_back({lv.alphabet[a], q});
        }
    }
    std::vector<SuffId> words;
    auto members_of = [&](SuffId letter) {
        for (std::size_t a = 0; a < lv.alphabet.size(); ++a)
            if (lv.alphabet[a] == letter)
                return lv.partition.class_members(static_cast<std::int32_t>(a) + 2);
        throw consistency_error("coverage letter not in alphabet");
    };
    std::size_t rot = 0;
    auto pick_source = [&](SuffId letter, const std::vector<std::int64_t>& avoid) {
        const auto mem = members_of(letter);
        for (std::size_t t = 0; t < mem.size(); ++t) {
            const std::int64_t r = mem[(rot + t) % mem.size()];
            if (r >= 1 && std::find(avoid.begin(), avoid.end(), r) == avoid.end())
                return r;
        }
        throw consistency_error("coverage source exhausted");
    };
    std::size_t i = 0;
    while (i < demands.size()) {
        const Demand d1 = demands[i++];
        std::vector<std::int64_t> used{d1.slot};
        const std::int64_t r1 = pick_source(d1.letter, used);
        used.push_back(r1);
        ++rot;
        const Transposition t2{static_cast<std::int32_t>(std::min(d1.slot, r1)),
                               static_cast<std::int32_t>(std::max(d1.slot, r1))};
        Transposition t1{1, 2};
        bool second_taken = false;
        if (i < demands.size() &&
            std::find(used.begin(), used.end(), demands[i].slot) == used.end()) {
            const Demand d2 = demands[i];
            used.push_back(d2.slot);
            const std::int64_t r2 = pick_source(d2.letter, used);
            used.push_back(r2);
            t1 = Transposition{static_cast<std::int32_t>(std::min(d2.slot, r2)),
                               static_cast<std::int32_t>(std::max(d2.slot, r2))};
            second_taken = true;
            ++i;
        } else {
            // Dummy pair over two free slots carrying the same letter, so
            // the extra swap does not change the word's content.
            std::int64_t da = -1, db = -1;
            for (std::int64_t s : free_slots(j)) {
                if (lv.planted.count(s)) continue;
                if (std::find(used.begin(), used.end(), s) != used.end()) continue;
                if (da < 0) {
                    da = s;
                } else if (lv.marker_suffix[static_cast<std::size_t>(s)] ==
                           lv.marker_suffix[static_cast<std::size_t>(da)]) {
                    db = s;
                    break;
                }
            }
            if (db < 0) throw infeasible_error("no dummy pair for coverage word");
            used.push_back(da);
            used.push_back(db);
            t1 = Transposition{static_cast<std::int32_t>(std::min(da, db)),
                               static_cast<std::int32_t>(std::max(da, db))};
        }
        (void)second_taken;
        PermPair phi(static_cast<std::int32_t>(lv.slot_count), t1, t2);
        auto edits = robust_edits(j, used);
        words.push_back(intern_suffix(j, SuffDescriptor{0, phi, std::move(edits)}));
    }
    return words;
}

void Construction::make_gadgets(std::int32_t k) {
    // One witness word per level-0 prefix-catalog member: its prefix chain
    // bottoms out at that word, so shifting the limit point to the gadget's
    // slot exhibits the member at a deep lattice position.
    gadget_level_ = k - 1;
    const std::int64_t count = level0_prefix_count();
    const auto edits = robust_edits(gadget_level_, {});
    for (PreId j = 0; j < count; ++j) {
        PreId chain = j;
        for (std::int32_t t = 1; t <= gadget_level_ - 1; ++t)
            chain = intern_pre(
                t, PreDescriptor{chain, PermPair::identity(static_cast<std::int32_t>(
                                            level(t).slot_count))});
        const SuffId w = intern_suffix(
            gadget_level_,
            SuffDescriptor{chain,
                           PermPair::identity(
                               static_cast<std::int32_t>(level(gadget_level_).slot_count)),
                           edits});
        gadgets_.push_back(Gadget{0, j});
        gadget_words_.push_back(w);
    }
}

std::int64_t Construction::level0_prefix_count() const {
    return static_cast<std::int64_t>(level(0).prefix_catalog_count);
}

Word Construction::level0_prefix_word(PreId id) const {
    return flatten_pre(0, id);
}

std::vector<std::int64_t> Construction::marker_occurrences(std::int32_t k1, SuffId w) const {
    const LevelData& lv = level(k1);
    std::vector<std::int64_t> occ;
    for (std::int64_t s = 1; s <= lv.slot_count; ++s)
        if (lv.marker_suffix[static_cast<std::size_t>(s)] == w) occ.push_back(s);
    return occ;
}

}  // namespace hbs
