/* errors.hpp -- error taxonomy shared by all library components. */

#pragma once

#include <stdexcept>
#include <string>

namespace hbs {

// Index or position outside the valid range of a word or view.
struct range_error : std::out_of_range {
    explicit range_error(const std::string& what) : std::out_of_range(what) {}
};

// Malformed argument (empty input, length mismatch, bad congruence, ...).
struct argument_error : std::invalid_argument {
    explicit argument_error(const std::string& what) : std::invalid_argument(what) {}
};

// A comparison or scan was asked on prefixes too short to decide it.
struct undecidable_error : std::runtime_error {
    explicit undecidable_error(const std::string& what) : std::runtime_error(what) {}
};

// Randomized search ran out of its attempt budget.
struct search_failure : std::runtime_error {
    explicit search_failure(const std::string& what) : std::runtime_error(what) {}
};

// Exhaustive verification was asked on an instance above the configured work limit.
struct too_large_error : std::runtime_error {
    explicit too_large_error(const std::string& what) : std::runtime_error(what) {}
};

// Certificate is missing entries it is required to cover.
struct incomplete_certificate : std::runtime_error {
    explicit incomplete_certificate(const std::string& what) : std::runtime_error(what) {}
};

// A permutation had no fixed point where one was required.
struct no_fixed_point : std::runtime_error {
    explicit no_fixed_point(const std::string& what) : std::runtime_error(what) {}
};

// Requested construction depth or scan horizon exceeds what was built.
struct depth_error : std::runtime_error {
    explicit depth_error(const std::string& what) : std::runtime_error(what) {}
};

// Toy-regime parameters cannot host the requested structure.
struct infeasible_error : std::runtime_error {
    explicit infeasible_error(const std::string& what) : std::runtime_error(what) {}
};

// An invariant the construction guarantees failed at runtime; indicates a bug.
struct consistency_error : std::logic_error {
    explicit consistency_error(const std::string& what) : std::logic_error(what) {}
};

}  // namespace hbs
