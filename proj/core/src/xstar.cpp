#include <algorithm>

#include "hbs/builder.hpp"

namespace hbs {

namespace {

SuffId edited_content(const SuffDescriptor& d, std::int64_t base_slot, SuffId fallback) {
    auto it = std::lower_bound(
        d.edits.begin(), d.edits.end(), base_slot,
        [](const std::pair<std::int32_t, SuffId>& e, std::int64_t s) { return e.first < s; });
    if (it != d.edits.end() && it->first == base_slot) return it->second;
    return fallback;
}

}  // namespace

Symbol Construction::pre_symbol(std::int32_t k, PreId id, std::int64_t off) const {
    while (true) {
        const LevelData& lv = level(k);
        if (off < 0 || off >= lv.block_len)
            throw range_error("pre_symbol: offset outside the word");
        const PreDescriptor& d = pre_reg_[static_cast<std::size_t>(k)][static_cast<std::size_t>(id)];
        if (k == 0) {
            if (off == 0) return 2;
            const std::int32_t b = d.perm.apply(static_cast<std::int32_t>(off));
            return static_cast<Symbol>(lv.marker_suffix[static_cast<std::size_t>(b)]);
        }
        const std::int64_t slot = off / lv.prev_block_len;
        if (slot == 0) {
            id = d.prefix;
            --k;
            continue;
        }
        const std::int32_t b = d.perm.apply(static_cast<std::int32_t>(slot));
        return suffix_symbol(k - 1, lv.marker_suffix[static_cast<std::size_t>(b)],
                             off % lv.prev_block_len);
    }
}

Symbol Construction::suffix_symbol(std::int32_t k, SuffId id, std::int64_t off) const {
    while (true) {
        if (k == -1) return static_cast<Symbol>(id);
        const LevelData& lv = level(k);
        if (off < 0 || off >= lv.block_len)
            throw range_error("suffix_symbol: offset outside the word");
        const SuffDescriptor& d =
            suff_reg_[static_cast<std::size_t>(k)][static_cast<std::size_t>(id)];
        if (k == 0) {
            if (off == 0) return 2;
            const std::int32_t b = d.perm.apply(static_cast<std::int32_t>(off));
            return static_cast<Symbol>(
                edited_content(d, b, lv.marker_suffix[static_cast<std::size_t>(b)]));
        }
        const std::int64_t slot = off / lv.prev_block_len;
        if (slot == 0) return pre_symbol(k - 1, d.prefix, off);
        const std::int32_t b = d.perm.apply(static_cast<std::int32_t>(slot));
        id = edited_content(d, b, lv.marker_suffix[static_cast<std::size_t>(b)]);
        off %= lv.prev_block_len;
        --k;
    }
}

SuffId Construction::pre_slot_content(std::int32_t k, PreId id, std::int64_t s) const {
    const LevelData& lv = level(k);
    if (s < 1 || s > lv.slot_count) throw range_error("pre_slot_content: slot out of range");
    const PreDescriptor& d = pre_reg_[static_cast<std::size_t>(k)][static_cast<std::size_t>(id)];
    return lv.marker_suffix[static_cast<std::size_t>(d.perm.apply(static_cast<std::int32_t>(s)))];
}

SuffId Construction::suffix_slot_content(std::int32_t k, SuffId id, std::int64_t s) const {
    const LevelData& lv = level(k);
    if (s < 1 || s > lv.slot_count)
        throw range_error("suffix_slot_content: slot out of range");
    const SuffDescriptor& d =
        suff_reg_[static_cast<std::size_t>(k)][static_cast<std::size_t>(id)];
    const std::int32_t b = d.perm.apply(static_cast<std::int32_t>(s));
    return edited_content(d, b, lv.marker_suffix[static_cast<std::size_t>(b)]);
}

SuffId Construction::marker_slot_content(std::int32_t k, std::int64_t s) const {
    const LevelData& lv = level(k);
    if (s < 1 || s > lv.slot_count)
        throw range_error("marker_slot_content: slot out of range");
    return lv.marker_suffix[static_cast<std::size_t>(s)];
}

Symbol Construction::x_star_at(std::int64_t pos) const {
    return pre_symbol(depth(), 0, pos);
}

IndexableSeq Construction::x_star_prefix(std::int64_t len) const {
    if (len < 1 || len > x_star_len())
        throw depth_error("x_star_prefix: built depth exposes only " +
                          std::to_string(x_star_len()) + " symbols");
    return IndexableSeq{[this](std::int64_t i) { return x_star_at(i); }, len};
}

Word Construction::x_star_window(std::int64_t pos, std::int64_t len) const {
    if (pos < 0 || len < 1 || pos + len > x_star_len())
        throw range_error("x_star_window: window outside the built prefix");
    std::vector<Symbol> syms;
    syms.reserve(static_cast<std::size_t>(len));
    for (std::int64_t i = 0; i < len; ++i) syms.push_back(x_star_at(pos + i));
    return Word(std::move(syms));
}

Construction::BlockRef Construction::resolve_block(std::int32_t kt, std::int64_t index) const {
    std::int64_t off = 0;
    if (__builtin_mul_overflow(index, block_len(kt), &off) || off < 0 ||
        off >= x_star_len())
        throw range_error("resolve_block: block outside the built prefix");
    std::int32_t k = depth();
    BlockRef ref{true, 0, 0};
    while (k > kt) {
        const LevelData& lv = level(k);
        const std::int64_t slot = off / lv.prev_block_len;
        if (ref.is_prefix) {
            const PreDescriptor& d =
                pre_reg_[static_cast<std::size_t>(k)][static_cast<std::size_t>(ref.pre)];
            if (slot == 0) {
                ref.pre = d.prefix;
                --k;
                continue;
            }
            const std::int32_t b = d.perm.apply(static_cast<std::int32_t>(slot));
            ref.is_prefix = false;
            ref.suff = lv.marker_suffix[static_cast<std::size_t>(b)];
        } else {
            const SuffDescriptor& d =
                suff_reg_[static_cast<std::size_t>(k)][static_cast<std::size_t>(ref.suff)];
            if (slot == 0) {
                ref.is_prefix = true;
                ref.pre = d.prefix;
                --k;
                continue;
            }
            const std::int32_t b = d.perm.apply(static_cast<std::int32_t>(slot));
            ref.suff = edited_content(d, b, lv.marker_suffix[static_cast<std::size_t>(b)]);
        }
        off %= lv.prev_block_len;
        --k;
    }
    return ref;
}

Word Construction::flatten_pre(std::int32_t k, PreId id) const {
    const std::int64_t len = block_len(k);
    if (len > (1 << 22)) throw too_large_error("flatten_pre: word too long to materialize");
    std::vector<Symbol> syms;
    syms.reserve(static_cast<std::size_t>(len));
    for (std::int64_t i = 0; i < len; ++i) syms.push_back(pre_symbol(k, id, i));
    return Word(std::move(syms));
}

Word Construction::flatten_suffix(std::int32_t k, SuffId id) const {
    const std::int64_t len = block_len(k);
    if (len > (1 << 22)) throw too_large_error("flatten_suffix: word too long to materialize");
    std::vector<Symbol> syms;
    syms.reserve(static_cast<std::size_t>(len));
    for (std::int64_t i = 0; i < len; ++i) syms.push_back(suffix_symbol(k, id, i));
    return Word(std::move(syms));
}

// ---------------------------------------------------------------------------
// Membership

namespace {

std::vector<std::int64_t> one_set(const Word& w) {
    std::vector<std::int64_t> out;
    for (std::int64_t i = 1; i < w.length(); ++i)
        if (w.at(i) == 1) out.push_back(i);
    return out;
}

std::size_t set_minus_size(const std::vector<std::int64_t>& a,
                           const std::vector<std::int64_t>& b) {
    std::size_t missing = 0;
    for (std::int64_t x : a)
        if (!std::binary_search(b.begin(), b.end(), x)) ++missing;
    return missing;
}

}  // namespace

bool Construction::is_prefix_word(const Word& flat, std::int32_t k) const {
    const LevelData& lv = level(k);
    if (flat.length() != lv.block_len)
        throw argument_error("is_prefix_word: wrong word length for level");
    if (k == 0) {
        if (flat.at(0) != 2) return false;
        for (std::int64_t i = 1; i < flat.length(); ++i)
            if (flat.at(i) != 0 && flat.at(i) != 1) return false;
        const Word marker = flatten_pre(0, 0);
        auto sw = one_set(flat);
        auto sm = one_set(marker);
        if (sw.size() != sm.size()) return false;
        return set_minus_size(sm, sw) <= 2;
    }
    // Block 0 must be a prefix word one level down; the slot vector must be
    // a two-transposition image of the marker vector.
    const std::int64_t prev = lv.prev_block_len;
    if (!is_prefix_word(subword(flat, 0, prev), k - 1)) return false;
    std::vector<std::string> blocks(static_cast<std::size_t>(lv.slot_count) + 1);
    for (std::int64_t s = 1; s <= lv.slot_count; ++s)
        blocks[static_cast<std::size_t>(s)] = subword(flat, s * prev, (s + 1) * prev).to_string();
    std::vector<std::string> target(static_cast<std::size_t>(lv.slot_count) + 1);
    for (std::int64_t s = 1; s <= lv.slot_count; ++s)
        target[static_cast<std::size_t>(s)] =
            flatten_suffix(k - 1, lv.marker_suffix[static_cast<std::size_t>(s)]).to_string();

    std::vector<std::int64_t> mismatched;
    for (std::int64_t s = 1; s <= lv.slot_count; ++s)
        if (blocks[static_cast<std::size_t>(s)] != target[static_cast<std::size_t>(s)])
            mismatched.push_back(s);
    if (mismatched.empty()) return true;
    if (mismatched.size() > 4) return false;

    // Candidate permutations over the mismatched slots, their possible
    // sources, and a couple of helpers.
    std::vector<std::int64_t> support(mismatched);
    for (std::int64_t s : mismatched) {
        std::int32_t found = 0;
        for (std::int64_t m = 1; m <= lv.slot_count && found < 6; ++m) {
            if (blocks[static_cast<std::size_t>(m)] == target[static_cast<std::size_t>(s)] &&
                std::find(support.begin(), support.end(), m) == support.end()) {
                support.push_back(m);
                ++found;
            }
        }
    }
    for (std::int64_t m = 1; m <= lv.slot_count && support.size() < 14; ++m)
        if (std::find(support.begin(), support.end(), m) == support.end())
            support.push_back(m);

    std::vector<Transposition> cand;
    for (std::size_t a = 0; a < support.size(); ++a)
        for (std::size_t b = a + 1; b < support.size(); ++b)
            cand.push_back(Transposition{static_cast<std::int32_t>(std::min(support[a], support[b])),
                                         static_cast<std::int32_t>(std::max(support[a], support[b]))});
    for (const Transposition& t1 : cand) {
        for (const Transposition& t2 : cand) {
            PermPair phi(static_cast<std::int32_t>(lv.slot_count), t1, t2);
            bool ok = true;
            for (std::int64_t s : mismatched)
                if (phi.apply(static_cast<std::int32_t>(s)) == s) { ok = false; break; }
            if (!ok) continue;
            for (std::int32_t s : phi.displaced()) {
                if (blocks[static_cast<std::size_t>(s)] !=
                    target[static_cast<std::size_t>(phi.apply(s))]) {
                    ok = false;
                    break;
                }
            }
            if (ok) return true;
        }
    }
    return false;
}

Construction::Membership Construction::membership(const Word& flat, std::int32_t k) const {
    const LevelData& lv = level(k);
    if (flat.length() != lv.block_len)
        throw argument_error("membership: word length does not match the level");
    if (is_prefix_word(flat, k)) return Membership::Prefix;

    if (k == 0) {
        if (flat.at(0) != 2) return Membership::None;
        for (const Word& u : level0_universe_)
            if (u == flat) return Membership::Suffix;
        return Membership::None;
    }

    // Universe test: every block is a suffix word one level down except
    // block 0 (a prefix word), and some slot permutation restores the forced
    // class letters.
    const std::int64_t prev = lv.prev_block_len;
    if (!is_prefix_word(subword(flat, 0, prev), k - 1)) return Membership::None;
    std::vector<std::string> blocks(static_cast<std::size_t>(lv.slot_count) + 1);
    for (std::int64_t s = 1; s <= lv.slot_count; ++s)
        blocks[static_cast<std::size_t>(s)] = subword(flat, s * prev, (s + 1) * prev).to_string();
    std::vector<std::string> letters(lv.alphabet.size());
    for (std::size_t a = 0; a < lv.alphabet.size(); ++a)
        letters[a] = flatten_suffix(k - 1, lv.alphabet[a]).to_string();

    std::vector<std::int64_t> mismatched;
    for (std::int64_t s = 1; s <= lv.slot_count; ++s) {
        if (lv.slot_is_free(s)) continue;
        const std::size_t a = static_cast<std::size_t>(lv.partition.label(s) - 2);
        if (blocks[static_cast<std::size_t>(s)] != letters[a]) mismatched.push_back(s);
    }

    // All blocks must live in the suffix universe one level down.
    for (std::int64_t s = 1; s <= lv.slot_count; ++s) {
        const Word block = subword(flat, s * prev, (s + 1) * prev);
        if (membership(block, k - 1) != Membership::Suffix) return Membership::None;
    }

    if (mismatched.empty()) return Membership::Suffix;
    if (mismatched.size() > 4) return Membership::None;

    std::vector<std::int64_t> support(mismatched);
    auto needed = [&](std::int64_t s) -> const std::string& {
        return letters[static_cast<std::size_t>(lv.partition.label(s) - 2)];
    };
    for (std::int64_t s : mismatched) {
        std::int32_t found = 0;
        for (std::int64_t m = 1; m <= lv.slot_count && found < 6; ++m) {
            if (blocks[static_cast<std::size_t>(m)] == needed(s) &&
                std::find(support.begin(), support.end(), m) == support.end()) {
                support.push_back(m);
                ++found;
            }
        }
    }
    for (std::int64_t m = 1; m <= lv.slot_count && support.size() < 14; ++m)
        if (std::find(support.begin(), support.end(), m) == support.end())
            support.push_back(m);

    std::vector<Transposition> cand;
    for (std::size_t a = 0; a < support.size(); ++a)
        for (std::size_t b = a + 1; b < support.size(); ++b)
            cand.push_back(Transposition{static_cast<std::int32_t>(std::min(support[a], support[b])),
                                         static_cast<std::int32_t>(std::max(support[a], support[b]))});
    for (const Transposition& t1 : cand) {
        for (const Transposition& t2 : cand) {
            PermPair phi(static_cast<std::int32_t>(lv.slot_count), t1, t2);
            bool ok = true;
            for (std::int64_t s : mismatched)
                if (phi.apply(static_cast<std::int32_t>(s)) == s) { ok = false; break; }
            if (!ok) continue;
            for (std::int64_t s = 1; s <= lv.slot_count && ok; ++s) {
                if (lv.slot_is_free(s)) continue;
                const std::int32_t b = phi.apply(static_cast<std::int32_t>(s));
                if (blocks[static_cast<std::size_t>(b)] != needed(s)) ok = false;
            }
            if (ok) return Membership::Suffix;
        }
    }
    return Membership::None;
}

// ---------------------------------------------------------------------------
// Embedding operations

namespace {

PermPair one_constraint_perm(std::int32_t n, std::int64_t l, std::int64_t s) {
    if (l == s) return PermPair::identity(n);
    const Transposition t2{static_cast<std::int32_t>(std::min(l, s)),
                           static_cast<std::int32_t>(std::max(l, s))};
    // t1 must fix s; any pair avoiding s works.
    for (std::int32_t x = 1; x <= n; ++x) {
        for (std::int32_t y = x + 1; y <= n; ++y) {
            if (x == s || y == s) continue;
            PermPair phi(n, Transposition{x, y}, t2);
            if (phi.apply(static_cast<std::int32_t>(l)) == s) return phi;
        }
    }
    throw consistency_error("one_constraint_perm: no permutation found");
}

}  // namespace

Construction::EmbedResult Construction::embed_constraints(
    std::int32_t k, PreId A, std::vector<std::pair<std::int64_t, SuffId>> cons) {
    const std::int32_t k1 = k + 1;
    if (k1 > depth()) throw depth_error("embed: level above the built depth");
    const LevelData& lv = level(k1);
    const std::int32_t n = static_cast<std::int32_t>(lv.slot_count);
    if (A < 0 || A >= static_cast<PreId>(pre_reg_[static_cast<std::size_t>(k)].size()))
        throw argument_error("embed: unknown prefix id");
    for (auto& [slot, w] : cons) {
        (void)w;
        if (slot < 1 || slot > n) throw argument_error("embed: slot outside [1..n]");
    }
    if (cons.size() == 2 && cons[0].first == cons[1].first)
        throw argument_error("embed: slots must be distinct");

    EmbedResult res;
    res.out_level = k1;

    // Prefix-catalog side: realizable when the marker vector carries every
    // requested word somewhere.
    {
        bool ok = true;
        std::vector<std::int64_t> srcs;
        for (auto& [slot, w] : cons) {
            (void)slot;
            auto occ = marker_occurrences(k1, w);
            std::int64_t pick = -1;
            for (std::int64_t cand : occ)
                if (std::find(srcs.begin(), srcs.end(), cand) == srcs.end()) {
                    pick = cand;
                    break;
                }
            if (pick < 0) { ok = false; break; }
            srcs.push_back(pick);
        }
        if (ok) {
            PermPair phi = PermPair::identity(n);
            if (cons.size() == 1) {
                phi = one_constraint_perm(n, cons[0].first, srcs[0]);
            } else if (cons.size() == 2) {
                auto found = find_two_constraint_perm(n, static_cast<std::int32_t>(cons[0].first),
                                                      static_cast<std::int32_t>(srcs[0]),
                                                      static_cast<std::int32_t>(cons[1].first),
                                                      static_cast<std::int32_t>(srcs[1]));
                if (!found) throw consistency_error("embed: no two-constraint permutation");
                phi = *found;
            }
            const PreId out = intern_pre(k1, PreDescriptor{A, phi});
            for (auto& [slot, w] : cons)
                if (pre_slot_content(k1, out, slot) != w)
                    throw consistency_error("embed: prefix-side postcondition failed");
            res.prefix_id = out;
        }
    }

    // Suffix side: a robust word over the same prefix; exotic constraint
    // words are routed through edited free slots.
    {
        std::vector<std::int64_t> avoid;
        for (auto& [slot, w] : cons) {
            (void)w;
            avoid.push_back(slot);
        }
        auto edits = robust_edits(k1, avoid);
        auto base_content = [&](std::int64_t s) -> SuffId {
            for (auto& [es, ev] : edits)
                if (es == s) return ev;
            return lv.marker_suffix[static_cast<std::size_t>(s)];
        };
        std::vector<std::int64_t> srcs;
        for (auto& [slot, w] : cons) {
            (void)slot;
            std::int64_t pick = -1;
            for (std::int64_t m = 1; m <= n; ++m) {
                if (base_content(m) != w) continue;
                if (std::find(srcs.begin(), srcs.end(), m) != srcs.end()) continue;
                pick = m;
                break;
            }
            if (pick < 0) {
                // Route the word through an edited free slot.
                for (std::int64_t f : free_slots(k1)) {
                    if (lv.planted.count(f)) continue;
                    bool taken = std::find(srcs.begin(), srcs.end(), f) != srcs.end() ||
                                 std::find(avoid.begin(), avoid.end(), f) != avoid.end();
                    for (auto& [es, ev] : edits) {
                        (void)ev;
                        if (es == f) taken = true;
                    }
                    if (taken) continue;
                    pick = f;
                    edits.push_back({static_cast<std::int32_t>(f), w});
                    break;
                }
                if (pick < 0)
                    throw infeasible_error("embed: no free slot left for an exotic word");
            }
            srcs.push_back(pick);
        }
        PermPair phi = PermPair::identity(n);
        if (cons.size() == 1) {
            phi = one_constraint_perm(n, cons[0].first, srcs[0]);
        } else if (cons.size() == 2) {
            auto found = find_two_constraint_perm(n, static_cast<std::int32_t>(cons[0].first),
                                                  static_cast<std::int32_t>(srcs[0]),
                                                  static_cast<std::int32_t>(cons[1].first),
                                                  static_cast<std::int32_t>(srcs[1]));
            if (!found) throw consistency_error("embed: no two-constraint permutation");
            phi = *found;
        }
        std::sort(edits.begin(), edits.end());
        res.suffix_id = intern_suffix(k1, SuffDescriptor{A, phi, std::move(edits)});
        for (auto& [slot, w] : cons)
            if (suffix_slot_content(k1, res.suffix_id, slot) != w)
                throw consistency_error("embed: suffix-side postcondition failed");
    }
    return res;
}

Construction::EmbedResult Construction::embed_free(std::int32_t k, PreId A, std::int64_t l1,
                                                   std::int64_t l2, SuffId w1, SuffId w2) {
    if (!(1 <= l1 && l1 < l2 && l2 <= level(k + 1).slot_count))
        throw argument_error("embed_free: require 1 <= l1 < l2 <= slot count");
    return embed_constraints(k, A, {{l1, w1}, {l2, w2}});
}

SuffId Construction::choose_robust_suffix(std::int32_t k, PreId A) {
    return embed_constraints(k, A, {}).suffix_id;
}

Construction::EmbedResult Construction::embed_free_deep(std::int32_t k, PreId A, SuffId w,
                                                        std::int64_t l0, std::int64_t l1,
                                                        std::int32_t kt) {
    if (kt < k) throw argument_error("embed_free_deep: target level below base level");
    if (kt + 1 > depth()) throw depth_error("embed_free_deep: target above built depth");
    const std::int64_t pk = block_len(k);
    const std::int64_t pk1 = block_len(k + 1);
    const std::int64_t span = block_len(kt + 1);
    if (l0 < 0 || l0 >= span || l0 % pk1 != 0)
        throw argument_error("embed_free_deep: l0 must be a multiple of the level-(k+1) length");
    if (l1 < 0 || l1 >= span || l1 % pk != 0 || l1 % pk1 == 0)
        throw argument_error(
            "embed_free_deep: l1 must be a level-k multiple that is not a level-(k+1) one");

    if (kt == k) {
        // l0 is forced to 0 here; the prefix part carries A.
        return embed_constraints(k, A, {{l1 / pk, w}});
    }

    const std::int64_t pkt = block_len(kt);
    const std::int64_t lp0 = l0 / pkt, r0 = l0 % pkt;
    const std::int64_t lp1 = l1 / pkt, r1 = l1 % pkt;
    EmbedResult sub = embed_free_deep(k, A, w, r0, r1, kt - 1);

    auto need_pre = [&]() -> PreId {
        if (!sub.prefix_id)
            throw infeasible_error(
                "embed_free_deep: the prefix catalog cannot carry an exotic inner word "
                "(toy catalogs class only two suffix words per level)");
        return *sub.prefix_id;
    };

    if (lp0 == 0 && lp1 == 0) return embed_constraints(kt, need_pre(), {});
    if (lp0 == 0) return embed_constraints(kt, need_pre(), {{lp1, sub.suffix_id}});
    if (lp1 == 0) return embed_constraints(kt, need_pre(), {{lp0, sub.suffix_id}});
    if (lp0 == lp1) return embed_constraints(kt, 0, {{lp0, sub.suffix_id}});
    return embed_constraints(kt, 0, {{lp0, sub.suffix_id}, {lp1, sub.suffix_id}});
}

}  // namespace hbs
