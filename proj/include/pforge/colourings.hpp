#pragma once

// The explicit colourings behind the negative partition results: branch-splitting
// matrices on Boolean groups, squared norms, the prime-wise sigma tuple, and two
// valuation-parity colourings.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pforge/colour_token.hpp"
#include "pforge/group.hpp"

namespace pforge {

/// A branch through the full binary tree of height kappa.
struct BinaryBranch {
    std::vector<std::uint8_t> bits;

    /// Parses "0101"; throws StructuralError on other characters.
    static BinaryBranch parse(std::string_view s);
    std::string str() const;
    std::size_t length() const { return bits.size(); }

    auto operator<=>(const BinaryBranch &) const = default;
};

/// Finite set of equal-length branches, sorted lexicographically. The group
/// operation is symmetric difference; the empty set is zero.
class BranchSet {
  public:
    BranchSet() = default;
    /// Sorts and checks distinctness and common length.
    static BranchSet make(std::vector<BinaryBranch> elems);

    const std::vector<BinaryBranch> &elems() const { return elems_; }
    std::size_t size() const { return elems_.size(); }
    bool empty() const { return elems_.empty(); }

    friend BranchSet operator^(const BranchSet &x, const BranchSet &y);
    auto operator<=>(const BranchSet &) const = default;

  private:
    std::vector<BinaryBranch> elems_;
};

/// Every BranchSet over branches of length kappa with 1..max_size members, in
/// (size, lexicographic) order.
std::vector<BranchSet> enumerate_branch_sets(std::size_t kappa, std::size_t max_size);

/// Least index where f and g differ; nullopt (TOP) when f == g.
std::optional<std::uint32_t> delta(const BinaryBranch &f, const BinaryBranch &g);

/// The |x| x |x| matrix of pairwise delta values over x in lexicographic order.
ColourToken delta_colouring(const BranchSet &x);

ColourToken sum_squares_colouring(const Element &x);
ColourToken product_sigma_colouring(const Element &x);
ColourToken subgroup_colouring(const Element &x);
ColourToken valuation_colouring(const Element &x, std::int64_t a);

/// Exponent of prime p in nonzero rational q (negative when p divides the denominator).
std::int64_t valuation(const Scalar &q, std::int64_t p);

using ElementColouring = std::function<ColourToken(const Element &)>;

/// "sigma", "sum_squares", "product_sigma", "subgroup_parity", "valuation:a=<prime>".
/// "delta" colours BranchSets and is handled separately. Throws StructuralError
/// on unknown ids.
ElementColouring colouring_by_id(std::string_view id);

bool is_prime_number(std::int64_t p);

} // namespace pforge
