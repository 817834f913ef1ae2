#pragma once

// Finite-rank abelian groups presented as direct sums of cyclic, Pruefer-truncation,
// integer and rational factors, with the finite-sum machinery built on top.

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <variant>
#include <vector>

#include "pforge/colour_token.hpp"
#include "pforge/errors.hpp"

namespace pforge {

/// Residues modulo `modulus`.
struct Cyclic {
    std::int64_t modulus = 2;
    bool operator==(const Cyclic &) const = default;
};

/// The subgroup {a / p^k mod 1} of the torus, stored as numerators a in [0, p^k).
struct PrimePower {
    std::int64_t prime = 2;
    int exponent = 1;
    std::int64_t modulus() const;
    bool operator==(const PrimePower &) const = default;
};

/// The integers; enumeration is clipped to [-bound, bound].
struct IntegerBox {
    std::int64_t bound = 1;
    bool operator==(const IntegerBox &) const = default;
};

/// Rationals with denominator dividing `denominator`; enumeration covers
/// a / denominator for |a| <= bound * denominator.
struct RationalBox {
    std::int64_t denominator = 1;
    std::int64_t bound = 1;
    bool operator==(const RationalBox &) const = default;
};

using FactorSpec = std::variant<Cyclic, PrimePower, IntegerBox, RationalBox>;

/// nullopt means infinite order.
using Order = std::optional<std::uint64_t>;

class Element;

/// The ambient group. Cheap to copy; factors are shared and immutable.
class GroupSpec {
  public:
    explicit GroupSpec(std::vector<FactorSpec> factors);

    static GroupSpec cyclic_power(std::int64_t modulus, std::size_t rank);
    static GroupSpec prime_power_power(std::int64_t prime, int exponent, std::size_t rank);
    static GroupSpec integer_box(std::int64_t bound, std::size_t rank);

    std::size_t rank() const { return factors_->size(); }
    const FactorSpec &factor(std::size_t i) const { return (*factors_)[i]; }
    const std::vector<FactorSpec> &factors() const { return *factors_; }

    bool is_finite() const;
    bool is_torsion_free() const;
    bool is_finite_factor(std::size_t i) const;
    // Modulus of a finite factor (m for Cyclic, p^k for PrimePower).
    std::int64_t factor_modulus(std::size_t i) const;

    /// The p with i in I_p: the prime of a PrimePower, the least prime dividing a
    /// Cyclic modulus, 0 for IntegerBox and RationalBox.
    std::int64_t prime_class(std::size_t i) const;
    /// Distinct prime classes present, ascending (0 first when present).
    std::vector<std::int64_t> prime_classes() const;

    /// Number of elements produced by enumerate().
    std::uint64_t enumeration_size() const;

    Element zero() const;
    /// Canonicalizes each coordinate; throws StructuralError on invalid values.
    Element make(std::vector<Scalar> coords) const;
    Element make_ints(std::initializer_list<std::int64_t> coords) const;
    Element basis(std::size_t i) const;

    /// All elements of the (box-clipped) group in lexicographic order of
    /// canonical coordinate tuples. Throws SizeError beyond `limit` elements.
    std::vector<Element> enumerate(std::uint64_t limit = std::uint64_t{1} << 24) const;

    bool operator==(const GroupSpec &other) const {
        return factors_ == other.factors_ || *factors_ == *other.factors_;
    }

  private:
    std::shared_ptr<const std::vector<FactorSpec>> factors_;
};

/// A coefficient vector over a GroupSpec, always in canonical form.
class Element {
  public:
    const GroupSpec &spec() const { return spec_; }
    const std::vector<Scalar> &coords() const { return coords_; }
    const Scalar &operator[](std::size_t i) const { return coords_[i]; }
    std::size_t rank() const { return coords_.size(); }

    bool is_zero() const;

    friend Element operator+(const Element &x, const Element &y);
    friend Element operator-(const Element &x, const Element &y);
    friend Element operator-(const Element &x);
    friend Element operator*(std::int64_t k, const Element &x);

    bool operator==(const Element &other) const { return coords_ == other.coords_; }
    bool operator<(const Element &other) const { return coords_ < other.coords_; }

  private:
    friend class GroupSpec;
    Element(GroupSpec spec, std::vector<Scalar> coords) : spec_(std::move(spec)), coords_(std::move(coords)) {}
    void reduce();

    GroupSpec spec_;
    std::vector<Scalar> coords_;
};

Element add(const Element &x, const Element &y);
Element neg(const Element &x);

/// Indices with nonzero coordinate, ascending.
std::vector<std::size_t> supp(const Element &x);

/// Nonzero coordinates read in increasing index order.
ColourToken sigma(const Element &x);
std::vector<Scalar> sigma_entries(const Element &x);

/// x with every coordinate outside I_p zeroed.
Element project_p(const Element &x, std::int64_t p);

Order order(const Element &x);

inline constexpr std::size_t kDefaultFsLimit = 20;

/// One formal subset-sum: the generating index set (bit i = X[i]) and its value.
struct FormalSum {
    std::uint64_t mask;
    Element value;
};

/// All 2^|X| - 1 formal subset-sums in mask order.
std::vector<FormalSum> fs_formal(std::span<const Element> xs, std::size_t limit = kDefaultFsLimit);
/// FS(X) as a value set (collisions merged), sorted.
std::vector<Element> fs_set(std::span<const Element> xs, std::size_t limit = kDefaultFsLimit);

/// rows x cols matrix of elements over one GroupSpec, row-major.
class IndexedMatrix {
  public:
    IndexedMatrix(std::size_t rows, std::size_t cols, std::vector<Element> entries);
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const Element &at(std::size_t row, std::size_t col) const { return entries_[row * cols_ + col]; }
    const std::vector<Element> &entries() const { return entries_; }
    bool entries_distinct() const;

  private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Element> entries_;
};

/// One FS_matrix formal sum: for each column, 0 = skipped, r + 1 = row r chosen.
struct MatrixFormalSum {
    std::vector<std::size_t> choice;
    Element value;
};

std::vector<MatrixFormalSum> fs_matrix_formal(const IndexedMatrix &m, std::size_t limit = kDefaultFsLimit);
std::vector<Element> fs_matrix(const IndexedMatrix &m, std::size_t limit = kDefaultFsLimit);

/// Smallest subgroup containing gens; throws ClosureOverflow past `cap` elements.
std::vector<Element> subgroup_closure(const GroupSpec &spec, std::span<const Element> gens, std::size_t cap);

/// Exact membership test x in <gens> by integer lattice reduction. Works for
/// every GroupSpec, finite or not.
bool in_subgroup(const Element &x, std::span<const Element> gens);

/// Outcome of a greedy independent-sequence scan.
struct IndependentScan {
    std::vector<Element> kept;
    bool complete = false; // kept.size() reached the target
};

IndependentScan independent_sequence(std::span<const Element> pool, std::size_t target);

/// True when no term lies in the subgroup generated by its predecessors.
bool is_independent(std::span<const Element> seq);

} // namespace pforge
