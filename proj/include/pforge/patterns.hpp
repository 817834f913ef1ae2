#pragma once

// n-adequate patterns modulo m: n vectors in (Z/mZ)^l (or Z^l when m = 0) all of
// whose nonempty subset-sums have the same sequence of nonzero entries.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pforge/group.hpp"

namespace pforge {

class Pattern {
  public:
    /// Throws StructuralError unless rows are nonempty, equal-length, nonzero,
    /// pairwise distinct and (for m >= 2) reduced into [0, m).
    static Pattern make(std::int64_t m, std::vector<std::vector<std::int64_t>> rows);

    std::int64_t m() const { return m_; }
    std::size_t n() const { return rows_.size(); }
    std::size_t l() const { return rows_.front().size(); }
    const std::vector<std::vector<std::int64_t>> &rows() const { return rows_; }

    bool operator==(const Pattern &) const = default;

  private:
    Pattern(std::int64_t m, std::vector<std::vector<std::int64_t>> rows) : m_(m), rows_(std::move(rows)) {}
    std::int64_t m_;
    std::vector<std::vector<std::int64_t>> rows_;
};

struct AdequacyWitness {
    std::uint64_t first_mask = 0; // bit i set = row i in the subset
    std::uint64_t second_mask = 0;
    std::vector<std::int64_t> first_sigma;
    std::vector<std::int64_t> second_sigma;
};

struct AdequacyReport {
    bool adequate = false;
    std::vector<std::int64_t> signature; // set when adequate
    std::optional<AdequacyWitness> witness; // set when not
};

AdequacyReport is_adequate(const Pattern &p);

/// ((1, -1, 0), (0, 1, -1)) with -1 written as m - 1 when m >= 2.
Pattern canonical_2_adequate(std::int64_t m);

struct SearchConfig {
    int n = 2;
    std::int64_t m = 2;
    int l_min = 1;
    int l_max = 1;
    std::int64_t entry_bound = 0; // required (>= 1) iff m == 0
    bool deterministic = true;
    unsigned threads = 1;
    std::uint64_t node_cap = UINT64_MAX;
    // Row order, unit scaling and zero-column removal. Off = plain row-tuple DFS.
    bool symmetry_pruning = true;
};

/// Throws StructuralError on an invalid configuration.
void validate(const SearchConfig &cfg);

enum class SearchStatus { Found, Exhausted, Inconclusive };

struct SearchOutcome {
    SearchStatus status = SearchStatus::Exhausted;
    std::optional<Pattern> pattern;
    std::uint64_t nodes = 0;
    int n = 0;
    std::int64_t m = 0;
    int l_min = 0;
    int l_max = 0;
    std::int64_t entry_bound = 0;
    int l_reached = 0; // last length examined
};

/// Exhaustive search over l = l_min..l_max. In deterministic mode the Found
/// pattern is the least adequate pattern (row-concatenated lexicographic order)
/// of the least length, and the whole outcome is independent of cfg.threads.
SearchOutcome search(const SearchConfig &cfg);

/// y_i = sum_j rows[i][j] * g[beta[j]], rows right-padded with zeros up to beta.size().
/// Requires g independent and every g of order m (infinite order when m = 0).
std::vector<Element> lift(const Pattern &p, std::span<const Element> g, std::span<const std::size_t> beta);

/// Brute-force search for n nonzero elements of G = (Z/mZ)^l whose FS set is
/// monochromatic under sigma; returns them as a pattern (first in enumeration order).
std::optional<Pattern> sigma_colouring_check(const GroupSpec &G, std::size_t n);

std::string to_string(SearchStatus s);

} // namespace pforge
