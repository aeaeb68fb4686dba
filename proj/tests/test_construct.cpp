#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hbs/builder.hpp"

using namespace hbs;

namespace {

Construction& toy1() {
    static Construction c = Construction::build(BuildConfig::toy(5, 1));
    return c;
}

Construction& toy2() {
    static Construction c = Construction::build(BuildConfig::toy(5, 2));
    return c;
}

Word permute_suffix_blocks(const Construction& c, const Word& flat, std::int32_t k,
                           const PermPair& phi) {
    const std::int64_t prev = c.block_len(k - 1);
    std::vector<Symbol> out(flat.symbols());
    for (std::int64_t s = 1; s <= c.slot_count(k); ++s) {
        const std::int64_t src = phi.apply(static_cast<std::int32_t>(s));
        for (std::int64_t j = 0; j < prev; ++j)
            out[static_cast<std::size_t>(s * prev + j)] = flat.at(src * prev + j);
    }
    return Word(std::move(out));
}

}  // namespace

TEST_CASE("level 0 shape and catalog") {
    Construction& c = toy1();
    CHECK(c.block_len(0) == c.slot_count(0) + 1);
    CHECK(c.x_star_at(0) == 2);
    const std::int64_t n0 = c.slot_count(0);
    CHECK(c.level0_prefix_count() <= n0 * n0 * n0 * n0);
    CHECK(static_cast<std::uint64_t>(c.level0_prefix_count()) ==
          c.level(0).prefix_catalog_count);
    // membership agrees with the materialized universe, exhaustively
    std::int64_t prefix_seen = 0;
    for (const Word& u : c.level0_universe()) {
        const auto m = c.membership(u, 0);
        CHECK(m != Construction::Membership::None);
        if (m == Construction::Membership::Prefix) ++prefix_seen;
    }
    CHECK(prefix_seen == c.level0_prefix_count());
}

TEST_CASE("level-0 classed pair is robust under every slot permutation") {
    Construction& c = toy1();
    const auto& pair = c.suffix_registry(0);
    REQUIRE(pair.size() >= 2);
    const std::int32_t n0 = static_cast<std::int32_t>(c.slot_count(0));
    for (SuffId id : {SuffId{0}, SuffId{1}}) {
        const Word w = c.flatten_suffix(0, id);
        CHECK(c.membership(w, 0) == Construction::Membership::Suffix);
        for (const PermPair& phi : s2_enumerate(n0)) {
            const Word img = permute_suffix_blocks(c, w, 0, phi);
            CHECK_FALSE(c.is_prefix_word(img, 0));
        }
    }
}

TEST_CASE("marker nesting and symbol access agree with eager flattening") {
    Construction& c = toy1();
    const Word m0 = c.flatten_pre(0, 0);
    const Word m1 = c.flatten_pre(1, 0);
    for (std::int64_t i = 0; i < m0.length(); ++i) CHECK(m1.at(i) == m0.at(i));
    for (std::int64_t i = 0; i < m1.length(); ++i) CHECK(c.pre_symbol(1, 0, i) == m1.at(i));
    // lazy access against the eager flatten of a random catalog word
    std::mt19937_64 rng(2);
    const auto perms = s2_enumerate(static_cast<std::int32_t>(c.slot_count(1)) >= 12
                                        ? 12
                                        : static_cast<std::int32_t>(c.slot_count(1)));
    (void)perms;
    const Word s1 = c.flatten_suffix(1, c.suffix_registry(1).size() > 0 ? 0 : 0);
    for (int rep = 0; rep < 200; ++rep) {
        const std::int64_t pos = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(s1.length()));
        CHECK(c.suffix_symbol(1, 0, pos) == s1.at(pos));
    }
    CHECK_THROWS_AS(c.pre_symbol(0, 0, c.block_len(0)), range_error);
}

TEST_CASE("embedding places classed words at requested slots") {
    Construction& c = toy1();
    const auto& alpha = c.level(1).alphabet;
    REQUIRE(alpha.size() == 2);
    const std::int64_t l1 = 3, l2 = 7;
    for (PreId A : {PreId{0}, PreId{2}}) {
        auto res = c.embed_free(0, A, l1, l2, alpha[0], alpha[1]);
        REQUIRE(res.prefix_id.has_value());
        const Word pre = c.flatten_pre(1, *res.prefix_id);
        const Word suf = c.flatten_suffix(1, res.suffix_id);
        const Word w1 = c.flatten_suffix(0, alpha[0]);
        const Word w2 = c.flatten_suffix(0, alpha[1]);
        const Word a = c.flatten_pre(0, A);
        const std::int64_t p0 = c.block_len(0);
        for (const Word& out : {pre, suf}) {
            CHECK(subword(out, 0, p0) == a);
            CHECK(subword(out, l1 * p0, (l1 + 1) * p0) == w1);
            CHECK(subword(out, l2 * p0, (l2 + 1) * p0) == w2);
        }
        CHECK(c.membership(suf, 1) == Construction::Membership::Suffix);
        CHECK(c.is_prefix_word(pre, 1));
    }
    // equal words need two distinct marker occurrences
    auto res = c.embed_free(0, 0, 2, 5, alpha[0], alpha[0]);
    const Word suf = c.flatten_suffix(1, res.suffix_id);
    const Word w1 = c.flatten_suffix(0, alpha[0]);
    const std::int64_t p0 = c.block_len(0);
    CHECK(subword(suf, 2 * p0, 3 * p0) == w1);
    CHECK(subword(suf, 5 * p0, 6 * p0) == w1);
    CHECK_THROWS_AS(c.embed_free(0, 0, 5, 5, alpha[0], alpha[1]), argument_error);
}

TEST_CASE("robust suffix words stay outside the prefix catalog") {
    Construction& c = toy1();
    const SuffId out = c.choose_robust_suffix(0, 1);
    std::int64_t edits = 0;
    for (std::int64_t s = 1; s <= c.slot_count(1); ++s) {
        if (!c.level(1).slot_is_free(s)) continue;
        if (c.suffix_slot_content(1, out, s) != c.marker_slot_content(1, s)) ++edits;
    }
    CHECK(edits >= 9);
    const Word flat = c.flatten_suffix(1, out);
    CHECK_FALSE(c.is_prefix_word(flat, 1));
    std::mt19937_64 rng(13);
    const std::int32_t n1 = static_cast<std::int32_t>(c.slot_count(1));
    for (int rep = 0; rep < 25; ++rep) {
        const std::int32_t i = 1 + static_cast<std::int32_t>(rng() % (n1 - 1));
        const std::int32_t j = i + 1 + static_cast<std::int32_t>(rng() % (n1 - i));
        const std::int32_t i2 = 1 + static_cast<std::int32_t>(rng() % (n1 - 1));
        const std::int32_t j2 = i2 + 1 + static_cast<std::int32_t>(rng() % (n1 - i2));
        const PermPair phi(n1, Transposition{i, j}, Transposition{i2, j2});
        CHECK_FALSE(c.is_prefix_word(permute_suffix_blocks(c, flat, 1, phi), 1));
    }
}

TEST_CASE("membership classifies corrupted markers as outside the catalog") {
    Construction& c = toy1();
    const Word marker = c.flatten_pre(1, 0);
    CHECK(c.membership(marker, 1) == Construction::Membership::Prefix);
    // overwrite five forced blocks with the other letter: beyond any
    // two-transposition repair
    std::vector<Symbol> broken(marker.symbols());
    const auto& lv = c.level(1);
    const Word w0 = c.flatten_suffix(0, lv.alphabet[0]);
    const Word w1 = c.flatten_suffix(0, lv.alphabet[1]);
    std::int32_t changed = 0;
    for (std::int64_t s = 1; s <= lv.slot_count && changed < 5; ++s) {
        if (lv.partition.label(s) != 2) continue;
        for (std::int64_t j = 0; j < c.block_len(0); ++j)
            broken[static_cast<std::size_t>(s * c.block_len(0) + j)] = w1.at(j);
        ++changed;
    }
    (void)w0;
    CHECK(c.membership(Word(std::move(broken)), 1) == Construction::Membership::None);
    CHECK_THROWS_AS(c.membership(Word::from_string("201"), 1), argument_error);
}

TEST_CASE("deep embedding verifies by direct reads") {
    Construction& c = toy2();
    const auto& alpha = c.level(1).alphabet;
    const std::int64_t p0 = c.block_len(0), p1 = c.block_len(1);

    // base case: the target level equals the base level
    auto base = c.embed_free_deep(0, 2, alpha[0], 0, 4 * p0, 0);
    const Word bw = c.flatten_suffix(1, base.suffix_id);
    CHECK(subword(bw, 0, p0) == c.flatten_pre(0, 2));
    CHECK(subword(bw, 4 * p0, 5 * p0) == c.flatten_suffix(0, alpha[0]));

    // one level of recursion; read the two windows lazily
    const std::int64_t l0 = 3 * p1;
    const std::int64_t l1 = 5 * p1 + 2 * p0;
    auto deep = c.embed_free_deep(0, 2, alpha[1], l0, l1, 1);
    CHECK(deep.out_level == 2);
    const Word a = c.flatten_pre(0, 2);
    const Word w = c.flatten_suffix(0, alpha[1]);
    for (std::int64_t j = 0; j < p0; ++j) {
        CHECK(c.suffix_symbol(2, deep.suffix_id, l0 + j) == a.at(j));
        CHECK(c.suffix_symbol(2, deep.suffix_id, l1 + j) == w.at(j));
    }
    CHECK_THROWS_AS(c.embed_free_deep(0, 2, alpha[1], 0, 3 * p1, 1), argument_error);
}

TEST_CASE("strict regime builds the level-0 spine only") {
    const Construction s = Construction::build([] {
        BuildConfig cfg;
        cfg.regime = Regime::Strict;
        cfg.seed = 2;
        cfg.depth = 1;
        return cfg;
    }());
    CHECK(s.depth() == 0);
    CHECK(s.x_star_at(0) == 2);
    const std::int64_t n = s.slot_count(0);
    CHECK(n > 100);
    // accepted size satisfies 2^(sqrt(n)-1) > n^4 + 2 (conservative reading)
    std::int64_t r = 0;
    while ((r + 1) * (r + 1) <= n) ++r;
    const long double lhs = std::pow(2.0L, static_cast<long double>(r - 1));
    const long double rhs = static_cast<long double>(n) * n * n * n + 2;
    CHECK(lhs > rhs);
    CHECK(s.notes().size() >= 2);
    CHECK(s.level(0).cert_c == 6);
}

TEST_CASE("toy builds are deterministic per seed") {
    const Construction a = Construction::build(BuildConfig::toy(9, 1));
    const Construction b = Construction::build(BuildConfig::toy(9, 1));
    CHECK(a.level(0).partition.labels() == b.level(0).partition.labels());
    CHECK(a.level(1).partition.labels() == b.level(1).partition.labels());
    CHECK(a.level(1).marker_suffix == b.level(1).marker_suffix);
}
