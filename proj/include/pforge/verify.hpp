#pragma once

// Exhaustive desk-scale certificates. Every enumeration is bounded, counted in
// nodes rather than time, and reproducible across thread counts.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "pforge/colourings.hpp"
#include "pforge/group.hpp"

namespace pforge {

enum class CertStatus { Verified, CounterexampleFound, Inconclusive };

std::string to_string(CertStatus s);

/// Version tag of the canonical element enumeration order.
inline constexpr const char *kOrderVersion = "lex-v1";

struct Certificate {
    std::string claim;
    nlohmann::json domain;
    CertStatus status = CertStatus::Verified;
    std::uint64_t enumerated = 0;
    std::optional<nlohmann::json> witness; // re-checked before it is reported

    nlohmann::json to_json() const;
};

struct Budget {
    std::uint64_t max_nodes = UINT64_MAX;
    unsigned threads = 1;
};

/// First n-subset X of G \ {0} (in index order) with FS(X) monochromatic under
/// the colouring, else Verified.
Certificate find_monochromatic_fs(const std::string &colouring_id, const GroupSpec &G, std::size_t n,
                                  const Budget &budget = {});

/// Same over the Boolean group of BranchSets with 1..max_set branches of length kappa,
/// coloured by delta_colouring.
Certificate find_monochromatic_fs_delta(std::size_t kappa, std::size_t max_set, std::size_t n,
                                        const Budget &budget = {});

/// The kappa x 2 matrix x_{xi,0} = g_beta - g_{alpha_xi}, x_{xi,1} = g_{gamma_xi} - g_beta.
IndexedMatrix fs_matrix_from_split(std::span<const Element> g, std::span<const std::size_t> alphas,
                                   std::size_t beta, std::span<const std::size_t> gammas);

/// Checks the telescoping identities c(x_{xi,0}) = d(alpha_xi, beta), c(x_{eta,1}) = d(beta, gamma_eta),
/// c(x_{xi,0} + x_{eta,1}) = d(alpha_xi, gamma_eta) with d({a < b}) = c(g_b - g_a), plus
/// pairwise distinctness of the matrix entries. Throws PreconditionError on bad ordering or
/// dependent g.
Certificate check_fs_matrix_identities(std::span<const Element> g, std::span<const std::size_t> alphas,
                                       std::size_t beta, std::span<const std::size_t> gammas,
                                       const ElementColouring &c);

/// No three distinct integer vectors in [-B, B]^d with all seven of x, y, z, x+y, x+z, y+z,
/// x+y+z of equal norm.
Certificate no_seven_norms(std::size_t dim, std::int64_t bound, const Budget &budget = {});

/// No a, b (b != 0) with {a, a+b, a+2b} monochromatic.
Certificate find_monochromatic_ap(const std::string &colouring_id, const GroupSpec &G, const Budget &budget = {});

/// Every nontrivial cyclic subgroup (every nontrivial subgroup with all_subgroups) meets
/// both colours off zero.
Certificate find_monochromatic_subgroup(const std::string &colouring_id, const GroupSpec &G,
                                        bool all_subgroups = false, const Budget &budget = {});

/// valuation_colouring(x, a) != valuation_colouring(a x, a) for all nonzero x in [-B, B]^d.
Certificate find_monochromatic_span(std::int64_t a, std::size_t dim, std::int64_t bound,
                                    const Budget &budget = {});

/// Sunflower: every pair of members intersects exactly in root.
struct DeltaSystem {
    std::vector<std::size_t> members; // indices into the input family
    std::vector<std::vector<std::int64_t>> subfamily;
    std::vector<std::int64_t> root;
};

enum class DeltaSearchMode { Auto, Exhaustive, Greedy };

/// Family members must be sets (sorted, distinct entries) of one common cardinality.
/// Greedy mode can miss systems; Exhaustive and Auto cannot.
std::optional<DeltaSystem> delta_system_find(const std::vector<std::vector<std::int64_t>> &family,
                                             std::size_t target, DeltaSearchMode mode = DeltaSearchMode::Auto);

/// Finite shadow of the support-growth argument for product_sigma: if FS(X) is
/// monochromatic with colour of total length s, then no s + 1 members of X have
/// supports forming a Delta-system. Throws PreconditionError when FS(X) is not
/// monochromatic.
Certificate fs_support_growth_check(const GroupSpec &G, std::span<const Element> xs);

struct Extraction {
    bool success = false;
    std::string stage; // "done", "delta-system" or "order"
    std::int64_t prime = 0;
    std::int64_t multiplier = 0;
    std::vector<std::size_t> root;
    std::size_t block_size = 0;
    std::vector<Element> elements;
};

/// From elements of one common finite order m, extract `target` distinct elements of
/// prime order p (p | m; least prime factor when p = 0) with pairwise disjoint supports.
Extraction prime_exponent_extract(std::span<const Element> elements, std::size_t target, std::int64_t p = 0);

} // namespace pforge
