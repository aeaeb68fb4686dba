#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hbs/words.hpp"

using namespace hbs;

TEST_CASE("subword basics") {
    const Word w = Word::from_string("2011");
    CHECK(subword(w, 1, 3).to_string() == "01");
    CHECK(subword(w, 0, 4).to_string() == "2011");
    CHECK_THROWS_AS(subword(w, 2, 2), range_error);
    CHECK_THROWS_AS(subword(w, 0, 5), range_error);
    CHECK_THROWS_AS(subword(w, -1, 2), range_error);
}

TEST_CASE("concat basics") {
    CHECK(concat({Word::from_string("20"), Word::from_string("11")}).to_string() == "2011");
    CHECK(concat({Word::from_string("1")}).to_string() == "1");
    CHECK_THROWS_AS(concat({}), argument_error);
    CHECK_THROWS_AS(Word::from_string(""), argument_error);
}

TEST_CASE("slicing and concat round trip") {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<Symbol> syms;
        const int len = 2 + static_cast<int>(rng() % 30);
        for (int i = 0; i < len; ++i) syms.push_back(static_cast<Symbol>(rng() % 3));
        const Word w(syms);
        for (std::int64_t i = 1; i < w.length(); ++i)
            CHECK(concat({subword(w, 0, i), subword(w, i, w.length())}) == w);
    }
}

TEST_CASE("metric values") {
    const Word x = Word::from_string("2011");
    CHECK(metric(x, x, true).num() == 0);
    const MetricValue d0 = metric(Word::from_string("01"), Word::from_string("11"));
    CHECK(d0.num() == 1);
    CHECK(d0.den() == 1);
    const MetricValue d2 = metric(Word::from_string("201"), Word::from_string("200"));
    CHECK(d2.num() == 1);
    CHECK(d2.den() == 4);
    CHECK_THROWS_AS(metric(Word::from_string("20"), Word::from_string("201")),
                    undecidable_error);
}

TEST_CASE("metric is an ultrametric on decidable triples") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 400; ++rep) {
        std::vector<Symbol> a, b, c;
        const int len = 8;
        for (int i = 0; i < len; ++i) {
            a.push_back(static_cast<Symbol>(rng() % 2));
            b.push_back(static_cast<Symbol>(rng() % 2));
            c.push_back(static_cast<Symbol>(rng() % 2));
        }
        const Word x(a), y(b), z(c);
        try {
            const MetricValue xz = metric(x, z);
            const MetricValue xy = metric(x, y);
            const MetricValue yz = metric(y, z);
            const MetricValue mx = xy <= yz ? yz : xy;
            CHECK(xz <= mx);
        } catch (const undecidable_error&) {
            // some pair agreed on the full range; triple not decidable
        }
    }
}

TEST_CASE("cylinder membership") {
    CHECK(cylinder_contains(Word::from_string("2"), Word::from_string("2011")));
    CHECK_FALSE(cylinder_contains(Word::from_string("20"), Word::from_string("21")));
    CHECK_THROWS_AS(cylinder_contains(Word::from_string("2011"), Word::from_string("201")),
                    undecidable_error);
}

TEST_CASE("return sets") {
    const std::string text = "0101010";
    IndexableSeq seq{[&](std::int64_t i) { return Symbol(text[static_cast<std::size_t>(i)] - '0'); },
                     static_cast<std::int64_t>(text.size())};
    const ReturnSet rs = return_set(seq, Word::from_string("01"), 5);
    CHECK(rs.times() == std::vector<std::int64_t>{0, 2, 4});
    CHECK_THROWS_AS(return_set(seq, Word::from_string("01"), 6), undecidable_error);
    CHECK_THROWS_AS(ReturnSet(5, {5}), argument_error);
    CHECK(ReturnSet(5, {3, 1, 3}).times() == std::vector<std::int64_t>{1, 3});
}

TEST_CASE("return set agrees with the naive oracle") {
    std::mt19937_64 rng(23);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<Symbol> text;
        for (int i = 0; i < 200; ++i) text.push_back(static_cast<Symbol>(rng() % 2));
        IndexableSeq seq{[&](std::int64_t i) { return text[static_cast<std::size_t>(i)]; },
                         static_cast<std::int64_t>(text.size())};
        std::vector<Symbol> ws;
        const int wl = 1 + static_cast<int>(rng() % 4);
        for (int i = 0; i < wl; ++i) ws.push_back(static_cast<Symbol>(rng() % 2));
        const Word w(ws);
        const std::int64_t H = 200 - w.length();
        // independent oracle: direct position-by-position comparison
        std::vector<std::int64_t> expect;
        for (std::int64_t m = 0; m < H; ++m) {
            bool hit = true;
            for (std::int64_t j = 0; j < w.length(); ++j)
                if (text[static_cast<std::size_t>(m + j)] != w.at(j)) { hit = false; break; }
            if (hit) expect.push_back(m);
        }
        CHECK(return_set(seq, w, H).times() == expect);
    }
}
