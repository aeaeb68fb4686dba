#include "hbs/dynamics.hpp"

#include <algorithm>

namespace hbs {

bool odometer_compatible(const Construction& c, const OdometerPoint& y) {
    for (std::size_t k = 0; k < y.coords.size(); ++k) {
        const std::int64_t pk = c.block_len(static_cast<std::int32_t>(k));
        if (y.coords[k] < 0 || y.coords[k] >= pk) return false;
        if (k > 0 && y.coords[k] % c.block_len(static_cast<std::int32_t>(k) - 1) !=
                         y.coords[k - 1])
            return false;
    }
    return true;
}

OdometerPoint odometer_add(const Construction& c, const OdometerPoint& y, std::int64_t m) {
    if (!odometer_compatible(c, y)) throw argument_error("odometer_add: invalid point");
    OdometerPoint out;
    out.coords.reserve(y.coords.size());
    for (std::size_t k = 0; k < y.coords.size(); ++k) {
        const std::int64_t pk = c.block_len(static_cast<std::int32_t>(k));
        out.coords.push_back(((y.coords[k] + m) % pk + pk) % pk);
    }
    return out;
}

OdometerPoint odometer_zero(std::int32_t K) {
    OdometerPoint y;
    y.coords.assign(static_cast<std::size_t>(K) + 1, 0);
    return y;
}

FiniteOrbitPoint::FiniteOrbitPoint(const Construction& c, std::int64_t shift,
                                   std::int64_t horizon)
    : c_(&c), shift_(shift), horizon_(horizon) {
    if (shift < 0 || horizon < 1 || shift + horizon > c.x_star_len())
        throw range_error("FiniteOrbitPoint: window outside the built prefix");
}

Symbol FiniteOrbitPoint::at(std::int64_t j) const {
    if (j < 0 || j >= horizon_) throw range_error("FiniteOrbitPoint: index outside horizon");
    return c_->x_star_at(shift_ + j);
}

Word FiniteOrbitPoint::window(std::int64_t pos, std::int64_t len) const {
    std::vector<Symbol> syms;
    syms.reserve(static_cast<std::size_t>(len));
    for (std::int64_t i = 0; i < len; ++i) syms.push_back(at(pos + i));
    return Word(std::move(syms));
}

IndexableSeq FiniteOrbitPoint::seq() const {
    return IndexableSeq{[this](std::int64_t i) { return at(i); }, horizon_};
}

namespace {

// Scanner for prefix-family occurrences with cheap cascading filters. Every
// prefix word starts with the symbol 2 and with a prefix word one level
// down; a window that mismatches the marker word in more than four blocks
// can never be a two-transposition image of it.
class FamilyScanner {
public:
    FamilyScanner(const Construction& c, std::int32_t k) : c_(c), k_(k) {
        if (k >= 1) {
            const Word m0 = c.flatten_pre(0, 0);
            for (std::int64_t i = 1; i < m0.length(); ++i)
                if (m0.at(i) == 1) marker0_ones_.push_back(i);
        }
        if (k >= 2) {
            const LevelData& lv1 = c.level(1);
            slot_strings_.resize(static_cast<std::size_t>(lv1.slot_count) + 1);
            for (std::int64_t s = 1; s <= lv1.slot_count; ++s)
                slot_strings_[static_cast<std::size_t>(s)] =
                    c.flatten_suffix(0, lv1.marker_suffix[static_cast<std::size_t>(s)])
                        .to_string();
        }
    }

    bool level0_hit(const FiniteOrbitPoint& x, std::int64_t t) const {
        if (x.at(t) != 2) return false;
        const std::int64_t p0 = c_.block_len(0);
        std::size_t ones = 0, missing = 0, oi = 0;
        for (std::int64_t i = 1; i < p0; ++i) {
            const Symbol s = x.at(t + i);
            if (s != 0 && s != 1) return false;
            const bool marker_one =
                oi < marker0_ones_.size() && marker0_ones_[oi] == i;
            if (marker_one) ++oi;
            if (s == 1) {
                ++ones;
            } else if (marker_one) {
                ++missing;
            }
        }
        return ones == marker0_ones_.size() && missing <= 2;
    }

    bool level1_hit(const FiniteOrbitPoint& x, std::int64_t t) const {
        if (!level0_hit(x, t)) return false;
        const std::int64_t p0 = c_.block_len(0);
        const LevelData& lv1 = c_.level(1);
        std::int32_t mismatches = 0;
        for (std::int64_t s = 1; s <= lv1.slot_count; ++s) {
            const std::string& want = slot_strings_[static_cast<std::size_t>(s)];
            for (std::int64_t j = 0; j < p0; ++j) {
                if (x.at(t + s * p0 + j) != want[static_cast<std::size_t>(j)] - '0') {
                    if (++mismatches > 4) return false;
                    break;
                }
            }
        }
        if (mismatches == 0) return true;
        // A repairable window; run the full structural test.
        return c_.is_prefix_word(x.window(t, c_.block_len(1)), 1);
    }

    bool hit(const FiniteOrbitPoint& x, std::int64_t t) const {
        switch (k_) {
            case 0: return x.at(t) == 2;
            case 1: return level0_hit(x, t);
            case 2: return level1_hit(x, t);
            default: {
                const std::int64_t len = c_.block_len(k_ - 1);
                if (len > (1 << 22))
                    throw too_large_error("marker family test: window too long");
                if (!level1_hit(x, t)) return false;
                return c_.is_prefix_word(x.window(t, len), k_ - 1);
            }
        }
    }

private:
    const Construction& c_;
    std::int32_t k_;
    std::vector<std::int64_t> marker0_ones_;
    std::vector<std::string> slot_strings_;
};

}  // namespace

std::vector<std::int64_t> marker_family_occurrences(const Construction& c,
                                                    const FiniteOrbitPoint& x,
                                                    std::int32_t k, std::int64_t horizon) {
    const std::int64_t wlen = c.block_len(k - 1);
    if (horizon + wlen > x.horizon())
        throw undecidable_error("marker_family_occurrences: horizon exceeds the window");
    FamilyScanner scan(c, k);
    std::vector<std::int64_t> occ;
    for (std::int64_t t = 0; t < horizon; ++t) {
        if (x.at(t) != 2) continue;  // every prefix word starts with 2
        if (scan.hit(x, t)) occ.push_back(t);
    }
    return occ;
}

std::int64_t compute_r(const Construction& c, const FiniteOrbitPoint& x, std::int32_t k) {
    const std::int64_t pk = c.block_len(k);
    const std::int64_t wlen = c.block_len(k - 1);
    const std::int64_t scan = 2 * pk;
    if (scan + wlen > x.horizon())
        throw undecidable_error("compute_r: horizon below 2 p_k plus the family word length");
    const auto occ = marker_family_occurrences(c, x, k, scan);
    if (occ.empty()) throw undecidable_error("compute_r: no marker occurrence in window");
    const std::int64_t r = occ.front() % pk;
    for (std::int64_t t : occ)
        if (t % pk != r)
            throw consistency_error("compute_r: occurrences off a single residue class");
    return r;
}

OdometerPoint project(const Construction& c, const FiniteOrbitPoint& x, std::int32_t K) {
    OdometerPoint y;
    for (std::int32_t k = 0; k <= K; ++k) {
        const std::int64_t pk = c.block_len(k);
        const std::int64_t r = compute_r(c, x, k);
        y.coords.push_back((pk - r) % pk);
    }
    if (!odometer_compatible(c, y))
        throw consistency_error("project: incompatible coordinate tower");
    return y;
}

std::optional<std::int64_t> marker_hit(const Construction& c, std::int32_t k, PreId A) {
    const std::int64_t pk = c.block_len(k);
    const std::int64_t pk1 = c.block_len(k + 1);
    auto verify = [&](std::int64_t m) {
        for (std::int64_t j = 0; j < pk; ++j)
            if (c.x_star_at(m * pk1 + j) != c.pre_symbol(k, A, j)) return false;
        return true;
    };
    if (A == 0) {
        if (!verify(0)) throw consistency_error("marker_hit: chain word missing at 0");
        return 0;
    }
    if (k == 0 && c.gadget_level() > 0) {
        for (const auto& g : c.fiber_gadgets()) {
            if (g.chain_bottom == A) {
                const std::int64_t m =
                    g.marker_slot * (c.block_len(c.gadget_level()) / pk1);
                if (!verify(m))
                    throw consistency_error("marker_hit: gadget chain does not expose the word");
                return m;
            }
        }
    }
    // Bounded lattice scan for anything else that happens to occur early.
    const std::int64_t cap = std::min<std::int64_t>(
        c.x_star_len() / pk1,
        (k + 2 <= c.depth()) ? 2 * (c.slot_count(k + 2) + 1) : 1024);
    for (std::int64_t m = 0; m < cap; ++m) {
        const auto ref = c.resolve_block(k + 1, m);
        const PreId head = ref.is_prefix ? c.pre_registry(k + 1)[static_cast<std::size_t>(ref.pre)].prefix
                                         : c.suffix_registry(k + 1)[static_cast<std::size_t>(ref.suff)].prefix;
        if (head == A) {
            if (!verify(m)) throw consistency_error("marker_hit: structural scan mismatch");
            return m;
        }
    }
    return std::nullopt;
}

MultiReturn multi_return_search(const Construction& c, const FiniteOrbitPoint& x,
                                std::int32_t d, std::int32_t k, std::int32_t K,
                                std::int64_t n) {
    if (d < 2) throw argument_error("multi_return_search: d >= 2 required");
    if (n < 1) throw argument_error("multi_return_search: n >= 1 required");
    if (K <= d + k + 2) throw argument_error("multi_return_search: require K > d+k+2");
    if (K > c.depth() || k + 2 > c.depth())
        throw depth_error("multi_return_search: levels above built depth");
    const std::int64_t pk = c.block_len(k);
    const std::int64_t pk1 = c.block_len(k + 1);
    const std::int64_t pK = c.block_len(K);
    MultiReturn out;
    out.bound = 2 * (c.slot_count(k + 2) + 1);
    const Word w = x.window(0, pk);
    for (std::int64_t m = 0; m < out.bound; ++m) {
        const std::int64_t t = n * pK + m * pk1;
        if (d * t + pk > x.horizon())
            throw undecidable_error("multi_return_search: horizon below (d)(n p_K + m p_{k+1})");
        bool ok = true;
        for (std::int32_t i = 1; i <= d && ok; ++i)
            for (std::int64_t j = 0; j < pk; ++j)
                if (x.at(i * t + j) != w.at(j)) { ok = false; break; }
        if (ok) {
            out.m = m;
            out.step = t;
            return out;
        }
    }
    return out;
}

std::optional<std::int64_t> proximal_witness(const Construction& c,
                                             const FiniteOrbitPoint& x,
                                             const FiniteOrbitPoint& y, std::int32_t K,
                                             std::int64_t horizon) {
    const std::int64_t pK = c.block_len(K);
    const std::int64_t p2 = c.block_len(K + 2);
    // Both points are shifts of the limit point, whose marker phases follow
    // the shift (verified by the lattice scan); congruent shifts mod p_{K+2}
    // are exactly equal projections up to level K+2.
    if ((x.shift() - y.shift()) % p2 != 0)
        throw argument_error("proximal_witness: projections differ up to level K+2");
    auto agree_at = [&](std::int64_t t) {
        if (t < 0 || t + pK > std::min(x.horizon(), y.horizon())) return false;
        for (std::int64_t j = 0; j < pK; ++j)
            if (x.at(t + j) != y.at(t + j)) return false;
        return true;
    };
    if (agree_at(0)) return 0;

    // Structural route: at a shared level-(K+2) lattice point both points
    // expose level-(K+2) words; two such words always share an aligned slot
    // (their slot permutations move at most eight slots). Verified by reads.
    const std::int64_t align = (p2 - (x.shift() % p2)) % p2;
    const std::int64_t p1 = c.block_len(K + 1);
    for (std::int64_t base = align; base + p2 <= std::min(x.horizon(), y.horizon()) &&
                                    base < horizon;
         base += p2) {
        for (std::int64_t s = 1; s <= c.slot_count(K + 2); ++s) {
            const std::int64_t t = base + s * p1;
            if (t + pK > horizon) break;
            if (agree_at(t)) return t;
        }
    }
    // Exhaustive fallback within the stated horizon.
    for (std::int64_t t = 0; t + pK <= horizon; ++t)
        if (agree_at(t)) return t;
    return std::nullopt;
}

TransportCase classify_transport(const Construction& c, std::int32_t k, std::int64_t y_k,
                                 std::int64_t y_k1) {
    const std::int64_t pk = c.block_len(k);
    const std::int64_t pkm1 = c.block_len(k - 1);
    if (y_k < pkm1) return TransportCase::HeadBlock;
    if (y_k < pk - pkm1) return TransportCase::Interior;
    const std::int64_t l = (y_k1 - y_k) / pk;
    return (l == c.slot_count(k + 1)) ? TransportCase::TailLast : TransportCase::TailShift;
}

std::optional<std::int64_t> open_transport(const Construction& c, const Word& w,
                                           std::int32_t k, std::int64_t m,
                                           std::int64_t y_k, std::int64_t y_k1) {
    const std::int64_t pk = c.block_len(k);
    const std::int64_t pk1 = c.block_len(k + 1);
    if (y_k < 0 || y_k >= pk || y_k1 < 0 || y_k1 >= pk1 || (y_k1 - y_k) % pk != 0 ||
        y_k1 % pk != y_k % pk)
        throw argument_error("open_transport: residues not compatible");
    const std::int64_t src = m * pk + y_k;
    for (std::int64_t j = 0; j < w.length(); ++j)
        if (c.x_star_at(src + j) != w.at(j))
            throw argument_error("open_transport: source occurrence does not verify");
    const std::int64_t cap =
        (k + 2 <= c.depth())
            ? 2 * (c.slot_count(k + 2) + 1)
            : std::max<std::int64_t>(1, (c.x_star_len() - y_k1) / pk1);
    for (std::int64_t mp = 0; mp < cap; ++mp) {
        const std::int64_t t = mp * pk1 + y_k1;
        if (t + w.length() > c.x_star_len()) break;
        bool ok = true;
        for (std::int64_t j = 0; j < w.length(); ++j)
            if (c.x_star_at(t + j) != w.at(j)) { ok = false; break; }
        if (ok) return mp;
    }
    return std::nullopt;
}

PreimageSample preimage_sample(const Construction& c, const OdometerPoint& y_target,
                               std::int32_t from_level, const Word& w,
                               const FiniteOrbitPoint& xref) {
    if (!odometer_compatible(c, y_target))
        throw argument_error("preimage_sample: target is not an odometer point");
    // The reference point fixes the coordinates up to from_level.
    for (std::int32_t j = 0; j <= from_level; ++j) {
        if (static_cast<std::size_t>(j) >= y_target.coords.size())
            throw argument_error("preimage_sample: target shorter than from_level");
        if (xref.shift() % c.block_len(j) != y_target.coords[static_cast<std::size_t>(j)])
            throw argument_error("preimage_sample: target disagrees with the reference point");
    }
    for (std::int64_t j = 0; j < w.length(); ++j)
        if (xref.at(j) != w.at(j))
            throw argument_error("preimage_sample: reference point not in the cylinder");

    std::int64_t pos = xref.shift();
    std::int32_t matched = from_level;
    for (std::int32_t k = from_level;
         static_cast<std::size_t>(k + 1) < y_target.coords.size() && k + 1 <= c.depth();
         ++k) {
        const std::int64_t pk = c.block_len(k);
        const std::int64_t yk = pos % pk;
        const std::int64_t yk1 = y_target.coords[static_cast<std::size_t>(k + 1)] %
                                 c.block_len(k + 1);
        auto mp = open_transport(c, w, k, (pos - yk) / pk, yk, yk1);
        if (!mp) break;
        pos = *mp * c.block_len(k + 1) + yk1;
        matched = k + 1;
    }
    return PreimageSample{pos, matched};
}

std::vector<FiniteOrbitPoint> fiber_samples(const Construction& c, const OdometerPoint& y,
                                            std::int32_t k0) {
    if (k0 != 0)
        throw infeasible_error("fiber_samples: only the level-0 count is materialized");
    if (c.gadget_level() < 1)
        throw depth_error("fiber_samples: build too shallow for fiber gadgets");
    for (std::size_t j = 0; j < y.coords.size() &&
                            j <= static_cast<std::size_t>(c.gadget_level());
         ++j)
        if (y.coords[j] != 0)
            throw infeasible_error("fiber_samples: only the zero fiber is materialized");
    const std::int64_t pg = c.block_len(c.gadget_level());
    const std::int64_t horizon = c.block_len(1) + c.block_len(0);
    std::vector<FiniteOrbitPoint> out;
    for (const auto& g : c.fiber_gadgets())
        out.emplace_back(c, g.marker_slot * pg, horizon);
    return out;
}

}  // namespace hbs
