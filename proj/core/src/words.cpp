#include "hbs/words.hpp"

#include <algorithm>

namespace hbs {

Word::Word(std::vector<Symbol> symbols) : syms_(std::move(symbols)) {
    if (syms_.empty()) throw argument_error("Word: empty words are rejected");
}

Word Word::from_string(const std::string& text) {
    std::vector<Symbol> syms;
    syms.reserve(text.size());
    for (char ch : text) {
        if (ch < '0' || ch > '2') throw argument_error("Word::from_string: symbol outside {0,1,2}");
        syms.push_back(ch - '0');
    }
    return Word(std::move(syms));
}

Symbol Word::at(std::int64_t i) const {
    if (i < 0 || i >= length()) throw range_error("Word::at: index out of range");
    return syms_[static_cast<std::size_t>(i)];
}

std::string Word::to_string() const {
    std::string out;
    out.reserve(syms_.size());
    for (Symbol s : syms_) {
        if (s < 0 || s > 2) throw argument_error("Word::to_string: not a base-alphabet word");
        out.push_back(static_cast<char>('0' + s));
    }
    return out;
}

Word subword(const Word& w, std::int64_t i, std::int64_t j) {
    if (i < 0 || i >= j || j > w.length())
        throw range_error("subword: require 0 <= i < j <= |w|");
    std::vector<Symbol> part(w.symbols().begin() + i, w.symbols().begin() + j);
    return Word(std::move(part));
}

Word concat(const std::vector<Word>& ws) {
    if (ws.empty()) throw argument_error("concat: empty sequence");
    std::vector<Symbol> syms;
    std::int64_t total = 0;
    for (const Word& w : ws) total += w.length();
    syms.reserve(static_cast<std::size_t>(total));
    for (const Word& w : ws)
        syms.insert(syms.end(), w.symbols().begin(), w.symbols().end());
    return Word(std::move(syms));
}

std::uint64_t MetricValue::den() const {
    if (is_zero) return 1;
    if (exponent > 62) throw range_error("MetricValue::den: exponent too large for u64");
    return std::uint64_t{1} << exponent;
}

bool MetricValue::operator<=(const MetricValue& o) const {
    if (is_zero) return true;
    if (o.is_zero) return false;
    return exponent >= o.exponent;
}

MetricValue metric(const Word& x, const Word& y, bool declared_equal) {
    const std::int64_t range = std::min(x.length(), y.length());
    for (std::int64_t i = 0; i < range; ++i) {
        if (x.at(i) != y.at(i)) return MetricValue{false, i};
    }
    if (declared_equal) return MetricValue{true, 0};
    throw undecidable_error("metric: prefixes agree on compared range and were not declared equal");
}

bool cylinder_contains(const Word& w, const Word& x_prefix) {
    if (x_prefix.length() < w.length())
        throw undecidable_error("cylinder_contains: prefix shorter than the cylinder word");
    for (std::int64_t i = 0; i < w.length(); ++i)
        if (x_prefix.at(i) != w.at(i)) return false;
    return true;
}

ReturnSet::ReturnSet(std::int64_t horizon, std::vector<std::int64_t> times)
    : horizon_(horizon), times_(std::move(times)) {
    if (horizon_ < 1) throw argument_error("ReturnSet: horizon must be >= 1");
    std::sort(times_.begin(), times_.end());
    times_.erase(std::unique(times_.begin(), times_.end()), times_.end());
    if (!times_.empty() && (times_.front() < 0 || times_.back() >= horizon_))
        throw argument_error("ReturnSet: entries must lie in [0, horizon)");
}

ReturnSet return_set(const IndexableSeq& x, const Word& w, std::int64_t horizon) {
    return return_set_family(x, {w}, horizon);
}

ReturnSet return_set_family(const IndexableSeq& x, const std::vector<Word>& family,
                            std::int64_t horizon) {
    if (family.empty()) throw argument_error("return_set_family: empty family");
    std::int64_t longest = 0;
    for (const Word& w : family) longest = std::max(longest, w.length());
    if (x.length < horizon + longest)
        throw undecidable_error("return_set: sequence not indexable on [0, horizon + |w|)");
    std::vector<std::int64_t> hits;
    for (std::int64_t m = 0; m < horizon; ++m) {
        for (const Word& w : family) {
            bool match = true;
            for (std::int64_t j = 0; j < w.length(); ++j) {
                if (x.at(m + j) != w.at(j)) { match = false; break; }
            }
            if (match) { hits.push_back(m); break; }
        }
    }
    return ReturnSet(horizon, std::move(hits));
}

}  // namespace hbs
