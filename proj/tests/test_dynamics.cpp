#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hbs/dynamics.hpp"

using namespace hbs;

namespace {

Construction& deep() {
    static Construction c = Construction::build(BuildConfig::toy(1, 7));
    return c;
}

}  // namespace

TEST_CASE("marker phases of the limit point are zero") {
    Construction& c = deep();
    const std::int64_t p1 = c.block_len(1);
    FiniteOrbitPoint x(c, 0, 2 * p1 + c.block_len(0) + 2 + 2 * c.block_len(1));
    CHECK(compute_r(c, x, 0) == 0);
    CHECK(compute_r(c, x, 1) == 0);
    CHECK(project(c, x, 1).coords == odometer_zero(1).coords);
}

TEST_CASE("marker phases follow the shift") {
    Construction& c = deep();
    for (std::int64_t m : {std::int64_t{1}, std::int64_t{17}, c.block_len(0),
                           c.block_len(1) + 3}) {
        for (std::int32_t k = 0; k <= 1; ++k) {
            const std::int64_t pk = c.block_len(k);
            FiniteOrbitPoint xs(c, m, 2 * pk + c.block_len(k - 1) + 2);
            CHECK(compute_r(c, xs, k) == ((-m) % pk + pk) % pk);
        }
    }
}

TEST_CASE("return sets of the limit point hit the marker family on the lattice") {
    Construction& c = deep();
    const std::int64_t p1 = c.block_len(1);
    const std::int64_t H = 3 * p1;
    std::vector<Word> family;
    for (PreId i = 0; i < c.level0_prefix_count(); ++i)
        family.push_back(c.level0_prefix_word(i));
    const auto seq = c.x_star_prefix(H + c.block_len(0) + 1);
    const ReturnSet rs = return_set_family(seq, family, H);
    CHECK(rs.times() == std::vector<std::int64_t>{0, p1, 2 * p1});
}

TEST_CASE("odometer arithmetic") {
    Construction& c = deep();
    const OdometerPoint zero = odometer_zero(3);
    const OdometerPoint one = odometer_add(c, zero, 1);
    for (std::size_t k = 0; k < one.coords.size(); ++k) CHECK(one.coords[k] == 1);
    OdometerPoint y;
    for (std::int32_t k = 0; k <= 3; ++k) y.coords.push_back(5 % c.block_len(k));
    const auto shifted = odometer_add(c, y, c.block_len(3));
    CHECK(shifted.coords == y.coords);
    std::mt19937_64 rng(4);
    for (int rep = 0; rep < 1000; ++rep) {
        OdometerPoint p;
        const std::int64_t m0 =
            static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(c.block_len(3)));
        for (std::int32_t k = 0; k <= 3; ++k) p.coords.push_back(m0 % c.block_len(k));
        const std::int64_t add = static_cast<std::int64_t>(rng() % 100000);
        CHECK(odometer_compatible(c, odometer_add(c, p, add)));
    }
    OdometerPoint badp;
    badp.coords = {1, 0};
    CHECK_FALSE(odometer_compatible(c, badp));
}

TEST_CASE("every level-0 catalog word is hit on the block lattice") {
    Construction& c = deep();
    CHECK(marker_hit(c, 0, 0) == 0);
    const std::int64_t p0 = c.block_len(0), p1 = c.block_len(1);
    for (PreId A = 0; A < c.level0_prefix_count(); ++A) {
        const auto m = marker_hit(c, 0, A);
        REQUIRE(m.has_value());
        const Word expect = c.level0_prefix_word(A);
        for (std::int64_t j = 0; j < p0; ++j)
            CHECK(c.x_star_at(*m * p1 + j) == expect.at(j));
    }
}

TEST_CASE("multiple returns on the smallest admissible grid point") {
    Construction& c = deep();
    const std::int32_t d = 2, K = 5;
    const std::int64_t horizon = (d + 2) * c.block_len(K) + c.block_len(0) + 2;
    FiniteOrbitPoint x(c, 0, horizon);
    const auto r = multi_return_search(c, x, d, 0, K, 1);
    REQUIRE(r.m.has_value());
    CHECK(*r.m < r.bound);
    for (std::int32_t i = 1; i <= d; ++i)
        for (std::int64_t j = 0; j < c.block_len(0); ++j)
            CHECK(x.at(i * r.step + j) == x.at(j));
    CHECK_THROWS_AS(multi_return_search(c, x, d, 0, 4, 1), argument_error);
}

TEST_CASE("proximal witnesses") {
    Construction& c = deep();
    const std::int64_t p0 = c.block_len(0), p2 = c.block_len(2);
    const std::int64_t H = 3 * p2;
    FiniteOrbitPoint x(c, 5, H + p2 + p0);
    FiniteOrbitPoint y(c, 5, H + p2 + p0);
    CHECK(proximal_witness(c, x, y, 0, H) == 0);
    FiniteOrbitPoint z(c, 5 + p2, H + p2 + p0);
    const auto t = proximal_witness(c, x, z, 0, H);
    REQUIRE(t.has_value());
    for (std::int64_t j = 0; j < p0; ++j) CHECK(x.at(*t + j) == z.at(*t + j));
    FiniteOrbitPoint off(c, 6, H + p2 + p0);
    CHECK_THROWS_AS(proximal_witness(c, x, off, 0, H), argument_error);
}

TEST_CASE("residue transport at the trivial target") {
    Construction& c = deep();
    const Word w = c.x_star_window(0, c.block_len(0));
    const auto mp = open_transport(c, w, 3, 0, 0, 0);
    REQUIRE(mp.has_value());
    CHECK(*mp == 0);
    CHECK_THROWS_AS(open_transport(c, w, 3, 0, 0, 7), argument_error);
}

TEST_CASE("preimage sampling degenerates to the reference point") {
    Construction& c = deep();
    const std::int64_t pos = 12345 % c.block_len(2);
    const Word w = c.x_star_window(pos, c.block_len(0));
    FiniteOrbitPoint xref(c, pos, c.block_len(0) + 2);
    OdometerPoint y;
    for (std::int32_t j = 0; j <= 4; ++j) y.coords.push_back(pos % c.block_len(j));
    const auto res = preimage_sample(c, y, 4, w, xref);
    CHECK(res.matched_depth == 4);
    CHECK(res.shift == pos);

    OdometerPoint badp;
    badp.coords = {0, 1};
    CHECK_THROWS_AS(preimage_sample(c, badp, 1, w, xref), argument_error);
}

TEST_CASE("fiber samples expose every level-0 catalog word") {
    Construction& c = deep();
    const auto samples = fiber_samples(c, odometer_zero(c.gadget_level()), 0);
    CHECK(static_cast<std::int64_t>(samples.size()) == c.level0_prefix_count());
    // spot distinctness and projections
    REQUIRE(samples.size() >= 2);
    bool differ = false;
    for (std::int64_t t = 0; t < c.block_len(1) && !differ; ++t)
        differ = samples[0].at(t) != samples[1].at(t);
    CHECK(differ);
    for (std::size_t i = 0; i < 3 && i < samples.size(); ++i)
        CHECK(samples[i].shift() % c.block_len(2) == 0);
    CHECK_THROWS_AS(fiber_samples(c, odometer_zero(2), 1), infeasible_error);
}

TEST_CASE("prefix views guard their depth") {
    Construction& c = deep();
    CHECK_THROWS_AS(c.x_star_prefix(c.x_star_len() + 1), depth_error);
    const auto seq = c.x_star_prefix(100);
    CHECK(seq.at(0) == 2);
}
