/* words.hpp -- finite words over a finite alphabet, the shift metric,
 * cylinder tests, and finite-horizon return-time sets.
 *
 * The base alphabet is {0,1,2}; block alphabets are dense integer ranges
 * (registry indices of higher-level words). A Word is an immutable value.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hbs/errors.hpp"

namespace hbs {

using Symbol = std::int32_t;

class Word {
public:
    // Empty words are rejected: every word has length >= 1.
    explicit Word(std::vector<Symbol> symbols);

    // Parses a word over the base alphabet "012".
    static Word from_string(const std::string& text);

    std::int64_t length() const { return static_cast<std::int64_t>(syms_.size()); }
    Symbol at(std::int64_t i) const;
    const std::vector<Symbol>& symbols() const { return syms_; }

    // Renders a base-alphabet word back as a string over "012".
    std::string to_string() const;

    bool operator==(const Word&) const = default;

private:
    std::vector<Symbol> syms_;
};

// w|_[i,j): the subword w_i ... w_{j-1}. Requires 0 <= i < j <= |w|.
Word subword(const Word& w, std::int64_t i, std::int64_t j);

// Concatenation of a nonempty sequence of words; lengths add.
Word concat(const std::vector<Word>& ws);

// Value of the shift metric: either zero or a dyadic 2^-exponent.
struct MetricValue {
    bool is_zero = false;
    std::int64_t exponent = 0;  // value = 2^-exponent when !is_zero

    std::uint64_t num() const { return is_zero ? 0 : 1; }
    std::uint64_t den() const;

    // Numeric order on {0} union {2^-k}. Smaller value = larger exponent.
    bool operator<=(const MetricValue& o) const;
};

// rho(x, y) = 2^{-min{i : x_i != y_i}} computed on finite prefixes.
// If the prefixes agree on the whole compared range the distance is 0 only
// when the caller declares the sequences equal; otherwise it is undecidable
// from the data given.
MetricValue metric(const Word& x, const Word& y, bool declared_equal = false);

// [w] membership: x|_[0,|w|) == w. The prefix of x must cover |w| symbols.
bool cylinder_contains(const Word& w, const Word& x_prefix);

// A lazily indexable one-sided symbol sequence: at(i) valid for 0 <= i < length.
struct IndexableSeq {
    std::function<Symbol(std::int64_t)> at;
    std::int64_t length = 0;
};

// Finite-horizon return-time set: times into [0, horizon), sorted, unique.
class ReturnSet {
public:
    ReturnSet(std::int64_t horizon, std::vector<std::int64_t> times);

    std::int64_t horizon() const { return horizon_; }
    const std::vector<std::int64_t>& times() const { return times_; }

    bool operator==(const ReturnSet&) const = default;

private:
    std::int64_t horizon_;
    std::vector<std::int64_t> times_;
};

// {m < H : x|_[m, m+|w|) = w}. x must be indexable on [0, H + |w|).
ReturnSet return_set(const IndexableSeq& x, const Word& w, std::int64_t horizon);

// Union of per-word return sets over a word family.
ReturnSet return_set_family(const IndexableSeq& x, const std::vector<Word>& family,
                            std::int64_t horizon);

}  // namespace hbs
