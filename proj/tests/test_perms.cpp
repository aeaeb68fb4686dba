#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hbs/level.hpp"
#include "hbs/perms.hpp"

using namespace hbs;

TEST_CASE("transposition sets") {
    CHECK(transpositions(2).size() == 1);
    CHECK(transpositions(3).size() == 3);
    CHECK(transpositions(4).size() == 6);
    CHECK_THROWS_AS(transpositions(1), argument_error);
}

TEST_CASE("two-fold composition set") {
    CHECK(s2_enumerate(2).size() == 1);  // only the identity
    CHECK(s2_enumerate(3).size() == 3);  // identity and the two 3-cycles
    for (std::int32_t n = 2; n <= 8; ++n) {
        const auto s2 = s2_enumerate(n);
        CHECK(s2.size() == s2_size(n));
        CHECK(s2.size() <= static_cast<std::size_t>(n) * n * n * n);
        CHECK(s2.front().is_identity());
        for (const PermPair& phi : s2) CHECK(phi.displaced().size() <= 4);
    }
}

TEST_CASE("fixed points") {
    CHECK(fixed_point(PermPair::identity(5)) == 1);
    const PermPair phi(5, Transposition{1, 2}, Transposition{3, 4});
    CHECK(fixed_point(phi) == 5);
    const PermPair bad(4, Transposition{1, 2}, Transposition{3, 4});
    CHECK_THROWS_AS(fixed_point(bad), no_fixed_point);
    for (std::int32_t n = 5; n <= 9; ++n)
        for (const PermPair& p : s2_enumerate(n)) CHECK_NOTHROW(fixed_point(p));
}

TEST_CASE("block permutation action") {
    const std::vector<int> blocks{10, 20, 30, 40, 50};
    CHECK(apply_block_perm(PermPair::identity(5), blocks) == blocks);
    // an involution applied through both transpositions is the identity
    const PermPair invol(5, Transposition{1, 2}, Transposition{1, 2});
    CHECK(apply_block_perm(invol, blocks) == blocks);
    CHECK_THROWS_AS(apply_block_perm(PermPair::identity(4), blocks), argument_error);
}

TEST_CASE("block permutation matches the composition oracle") {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 200; ++rep) {
        const std::int32_t n = 4 + static_cast<std::int32_t>(rng() % 6);
        const auto ts = transpositions(n);
        const Transposition t1 = ts[rng() % ts.size()];
        const Transposition t2 = ts[rng() % ts.size()];
        const PermPair phi(n, t1, t2);
        std::vector<int> blocks;
        for (std::int32_t i = 0; i < n; ++i) blocks.push_back(100 + i);
        const auto out = apply_block_perm(phi, blocks);
        for (std::int32_t l = 1; l <= n; ++l) {
            // oracle: compose the two transpositions as functions
            const std::int32_t img = t1.apply(t2.apply(l));
            CHECK(out[static_cast<std::size_t>(l - 1)] ==
                  blocks[static_cast<std::size_t>(img - 1)]);
        }
        // inverse round trip
        CHECK(apply_block_perm(phi, apply_block_perm(phi.inverse(), blocks)) == blocks);
    }
}

TEST_CASE("two-constraint permutations exist (exhaustive small sizes)") {
    for (std::int32_t n = 4; n <= 7; ++n) {
        for (std::int32_t l1 = 1; l1 <= n; ++l1)
            for (std::int32_t l2 = l1 + 1; l2 <= n; ++l2)
                for (std::int32_t s1 = 1; s1 <= n; ++s1)
                    for (std::int32_t s2 = 1; s2 <= n; ++s2) {
                        if (s1 == s2) continue;
                        auto phi = find_two_constraint_perm(n, l1, s1, l2, s2);
                        REQUIRE(phi.has_value());
                        CHECK(phi->apply(l1) == s1);
                        CHECK(phi->apply(l2) == s2);
                    }
    }
}

TEST_CASE("image count formula matches enumeration") {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 60; ++rep) {
        const std::int32_t n = 4 + static_cast<std::int32_t>(rng() % 6);
        const std::int32_t letters = 2 + static_cast<std::int32_t>(rng() % 3);
        std::vector<std::int32_t> vec(static_cast<std::size_t>(n));
        for (auto& v : vec) v = static_cast<std::int32_t>(rng() % letters);
        vec[0] = vec[static_cast<std::size_t>(n - 1)];  // guarantee a repeated letter
        std::vector<std::int64_t> mult(static_cast<std::size_t>(letters), 0);
        for (std::int32_t v : vec) ++mult[static_cast<std::size_t>(v)];
        std::vector<std::int64_t> nonzero;
        for (std::int64_t m : mult)
            if (m > 0) nonzero.push_back(m);

        std::vector<std::vector<std::int32_t>> images;
        for (const PermPair& phi : s2_enumerate(n)) {
            std::vector<std::int32_t> img(vec.size());
            for (std::int32_t l = 1; l <= n; ++l)
                img[static_cast<std::size_t>(l - 1)] =
                    vec[static_cast<std::size_t>(phi.apply(l) - 1)];
            images.push_back(std::move(img));
        }
        std::sort(images.begin(), images.end());
        images.erase(std::unique(images.begin(), images.end()), images.end());
        CHECK(s2_image_count(nonzero, n) == images.size());
    }
}
