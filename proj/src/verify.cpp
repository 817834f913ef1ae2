#include "pforge/verify.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "pforge/json_io.hpp"
#include "pforge/parallel.hpp"

namespace pforge {

std::string to_string(CertStatus s) {
    switch (s) {
    case CertStatus::Verified:
        return "verified";
    case CertStatus::CounterexampleFound:
        return "counterexample";
    case CertStatus::Inconclusive:
        return "inconclusive";
    }
    return "unknown";
}

nlohmann::json Certificate::to_json() const {
    return {{"claim", claim},
            {"domain", domain},
            {"status", to_string(status)},
            {"enumerated", enumerated},
            {"order", kOrderVersion},
            {"witness", witness ? *witness : nlohmann::json(nullptr)}};
}

namespace {

using Indices = std::vector<std::size_t>;

template <class T> struct Merged {
    std::optional<T> hit;
    std::uint64_t nodes = 0;
    bool inconclusive = false;
};

// Walks shard results in index order; the first truncation or budget overrun
// makes the run inconclusive, the first hit wins.
template <class T> Merged<T> merge_in_order(const OrderedRun<T> &run, std::uint64_t cap) {
    Merged<T> m;
    for (const auto &r : run.results) {
        if (!r)
            continue;
        m.nodes += r->nodes;
        if (r->truncated || m.nodes > cap) {
            m.inconclusive = true;
            m.nodes = std::min(m.nodes, cap);
            return m;
        }
        if (r->hit) {
            m.hit = r->hit;
            return m;
        }
    }
    return m;
}

// n-subsets of a domain with monochromatic FS, depth-first in index order below
// a fixed first element.
template <class E, class Add> class MonoFsShard {
  public:
    MonoFsShard(const std::vector<E> &domain, const std::vector<ColourToken> &colours, Add add,
                const std::function<ColourToken(const E &)> &colour, std::size_t n, std::uint64_t cap)
        : domain_(domain), colours_(colours), add_(add), colour_(colour), n_(n), cap_(cap) {}

    ShardResult<Indices> run(std::size_t first) {
        ShardResult<Indices> r;
        nodes_ = 1;
        chosen_ = {first};
        sums_ = {domain_[first]};
        reference_ = &colours_[first];
        if (n_ == 1 || extend(first + 1))
            r.hit = chosen_;
        r.nodes = nodes_;
        r.truncated = truncated_;
        return r;
    }

  private:
    bool extend(std::size_t start) {
        for (std::size_t j = start; j < domain_.size(); ++j) {
            if (domain_.size() - j < n_ - chosen_.size())
                return false;
            if (++nodes_ > cap_) {
                truncated_ = true;
                return false;
            }
            if (colours_[j] != *reference_)
                continue;
            std::vector<E> added;
            added.reserve(sums_.size());
            bool ok = true;
            for (const auto &s : sums_) {
                E t = add_(s, domain_[j]);
                if (colour_(t) != *reference_) {
                    ok = false;
                    break;
                }
                added.push_back(std::move(t));
            }
            if (!ok)
                continue;
            const std::size_t before = sums_.size();
            sums_.push_back(domain_[j]);
            sums_.insert(sums_.end(), added.begin(), added.end());
            chosen_.push_back(j);
            if (chosen_.size() == n_ || extend(j + 1))
                return true;
            if (truncated_)
                return false;
            chosen_.pop_back();
            sums_.erase(sums_.begin() + static_cast<std::ptrdiff_t>(before), sums_.end());
        }
        return false;
    }

    const std::vector<E> &domain_;
    const std::vector<ColourToken> &colours_;
    Add add_;
    const std::function<ColourToken(const E &)> &colour_;
    std::size_t n_;
    std::uint64_t cap_;
    std::uint64_t nodes_ = 0;
    bool truncated_ = false;
    Indices chosen_;
    std::vector<E> sums_;
    const ColourToken *reference_ = nullptr;
};

template <class E, class Add>
Merged<Indices> mono_fs_search(const std::vector<E> &domain, Add add, const std::function<ColourToken(const E &)> &colour,
                               std::size_t n, const Budget &budget) {
    if (n == 0)
        throw PreconditionError("monochromatic FS search needs n >= 1");
    std::vector<ColourToken> colours;
    colours.reserve(domain.size());
    for (const auto &e : domain)
        colours.push_back(colour(e));
    const std::size_t shards = domain.size() >= n ? domain.size() - n + 1 : 0;
    auto run = run_ordered<Indices>(shards, budget.threads, true, [&](std::size_t first) {
        MonoFsShard<E, Add> shard(domain, colours, add, colour, n, budget.max_nodes);
        return shard.run(first);
    });
    return merge_in_order(run, budget.max_nodes);
}

bool all_same(const std::vector<ColourToken> &cs) {
    return std::all_of(cs.begin(), cs.end(), [&](const auto &c) { return c == cs.front(); });
}

std::vector<std::int64_t> intersect(const std::vector<std::int64_t> &a, const std::vector<std::int64_t> &b) {
    std::vector<std::int64_t> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool disjoint(const std::vector<std::int64_t> &a, const std::vector<std::int64_t> &b) {
    return intersect(a, b).empty();
}

std::vector<std::int64_t> difference(const std::vector<std::int64_t> &a, const std::vector<std::int64_t> &b) {
    std::vector<std::int64_t> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<std::int64_t> support_set(const Element &x) {
    std::vector<std::int64_t> out;
    for (auto i : supp(x))
        out.push_back(static_cast<std::int64_t>(i));
    return out;
}

json elements_to_json(std::span<const Element> xs) {
    json out = json::array();
    for (const auto &x : xs)
        out.push_back(element_to_json(x));
    return out;
}

// Index of x in GroupSpec::enumerate() order; finite specs only.
std::size_t finite_index(const Element &x) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < x.rank(); ++i)
        idx = idx * static_cast<std::size_t>(x.spec().factor_modulus(i)) +
              static_cast<std::size_t>(x[i].get_num().get_si());
    return idx;
}

std::vector<Element> nonzero_elements(const GroupSpec &G) {
    std::vector<Element> out;
    for (auto &e : G.enumerate(std::uint64_t{1} << 20))
        if (!e.is_zero())
            out.push_back(std::move(e));
    return out;
}

// Pairwise-disjoint subfamily of `target` sets, greedy first then backtracking.
std::optional<Indices> pack_disjoint(const std::vector<std::vector<std::int64_t>> &sets, std::size_t target) {
    if (target == 0)
        return Indices{};
    if (sets.size() < target)
        return std::nullopt;
    {
        Indices picked;
        std::set<std::int64_t> used;
        for (std::size_t i = 0; i < sets.size() && picked.size() < target; ++i) {
            if (std::none_of(sets[i].begin(), sets[i].end(), [&](auto v) { return used.count(v) > 0; })) {
                picked.push_back(i);
                used.insert(sets[i].begin(), sets[i].end());
            }
        }
        if (picked.size() == target)
            return picked;
    }
    Indices chosen;
    auto rec = [&](auto &&self, std::size_t start) -> bool {
        if (chosen.size() == target)
            return true;
        for (std::size_t i = start; i + (target - chosen.size()) <= sets.size(); ++i) {
            bool ok = true;
            for (auto c : chosen)
                ok = ok && disjoint(sets[i], sets[c]);
            if (!ok)
                continue;
            chosen.push_back(i);
            if (self(self, i + 1))
                return true;
            chosen.pop_back();
        }
        return false;
    };
    if (rec(rec, 0))
        return chosen;
    return std::nullopt;
}

} // namespace

Certificate find_monochromatic_fs(const std::string &colouring_id, const GroupSpec &G, std::size_t n,
                                  const Budget &budget) {
    const ElementColouring colour = colouring_by_id(colouring_id);
    Certificate cert;
    cert.claim = "monochromatic_fs";
    cert.domain = {{"colouring", colouring_id}, {"group", to_json(G)}, {"n", n}, {"excludes_zero", true}};
    const auto domain = nonzero_elements(G);
    const auto merged = mono_fs_search(
        domain, [](const Element &a, const Element &b) { return a + b; }, colour, n, budget);
    cert.enumerated = merged.nodes;
    if (merged.inconclusive) {
        cert.status = CertStatus::Inconclusive;
        return cert;
    }
    if (!merged.hit) {
        cert.status = CertStatus::Verified;
        return cert;
    }
    std::vector<Element> xs;
    for (auto i : *merged.hit)
        xs.push_back(domain[i]);
    std::vector<ColourToken> colours;
    for (const auto &s : fs_set(xs))
        colours.push_back(colour(s));
    if (!all_same(colours))
        throw std::logic_error("monochromatic FS witness failed its re-check");
    cert.status = CertStatus::CounterexampleFound;
    cert.witness = json{{"X", elements_to_json(xs)}, {"colour", colours.front().to_json()}};
    return cert;
}

Certificate find_monochromatic_fs_delta(std::size_t kappa, std::size_t max_set, std::size_t n, const Budget &budget) {
    Certificate cert;
    cert.claim = "monochromatic_fs";
    cert.domain = {{"colouring", "delta"}, {"kappa", kappa}, {"max_set", max_set}, {"n", n}, {"excludes_zero", true}};
    const auto domain = enumerate_branch_sets(kappa, max_set);
    const std::function<ColourToken(const BranchSet &)> colour = delta_colouring;
    const auto merged = mono_fs_search(
        domain, [](const BranchSet &a, const BranchSet &b) { return a ^ b; }, colour, n, budget);
    cert.enumerated = merged.nodes;
    if (merged.inconclusive) {
        cert.status = CertStatus::Inconclusive;
        return cert;
    }
    if (!merged.hit) {
        cert.status = CertStatus::Verified;
        return cert;
    }
    std::vector<BranchSet> xs;
    for (auto i : *merged.hit)
        xs.push_back(domain[i]);
    std::vector<ColourToken> colours;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << xs.size()); ++mask) {
        BranchSet s;
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (mask >> i & 1u)
                s = s ^ xs[i];
        colours.push_back(delta_colouring(s));
    }
    if (!all_same(colours))
        throw std::logic_error("delta FS witness failed its re-check");
    json wx = json::array();
    for (const auto &x : xs)
        wx.push_back(to_json(x));
    cert.status = CertStatus::CounterexampleFound;
    cert.witness = json{{"X", wx}, {"colour", colours.front().to_json()}};
    return cert;
}

namespace {

void check_split(std::size_t g_size, std::span<const std::size_t> alphas, std::size_t beta,
                 std::span<const std::size_t> gammas) {
    if (alphas.empty() || alphas.size() != gammas.size())
        throw PreconditionError("alphas and gammas must be nonempty and of equal length");
    auto increasing = [](std::span<const std::size_t> v) {
        return std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
    };
    if (!increasing(alphas) || !increasing(gammas))
        throw PreconditionError("alphas and gammas must be strictly increasing");
    if (!(alphas.back() < beta && beta < gammas.front()))
        throw PreconditionError("need sup alpha < beta < min gamma");
    if (gammas.back() >= g_size)
        throw PreconditionError("index beyond the generator list");
}

} // namespace

IndexedMatrix fs_matrix_from_split(std::span<const Element> g, std::span<const std::size_t> alphas, std::size_t beta,
                                   std::span<const std::size_t> gammas) {
    check_split(g.size(), alphas, beta, gammas);
    std::vector<Element> entries;
    for (std::size_t xi = 0; xi < alphas.size(); ++xi) {
        entries.push_back(g[beta] - g[alphas[xi]]);
        entries.push_back(g[gammas[xi]] - g[beta]);
    }
    return IndexedMatrix(alphas.size(), 2, std::move(entries));
}

Certificate check_fs_matrix_identities(std::span<const Element> g, std::span<const std::size_t> alphas,
                                       std::size_t beta, std::span<const std::size_t> gammas,
                                       const ElementColouring &c) {
    check_split(g.size(), alphas, beta, gammas);
    if (!is_independent(g))
        throw PreconditionError("generators are not independent");

    Certificate cert;
    cert.claim = "fs_matrix_identities";
    cert.domain = {{"g", elements_to_json(g)},
                   {"alphas", std::vector<std::size_t>(alphas.begin(), alphas.end())},
                   {"beta", beta},
                   {"gammas", std::vector<std::size_t>(gammas.begin(), gammas.end())}};

    const IndexedMatrix m = fs_matrix_from_split(g, alphas, beta, gammas);
    auto d = [&](std::size_t lo, std::size_t hi) { return c(g[hi] - g[lo]); };
    auto fail = [&](std::string what, std::size_t xi, std::size_t eta) {
        cert.status = CertStatus::CounterexampleFound;
        cert.witness = json{{"identity", std::move(what)}, {"xi", xi}, {"eta", eta}};
        return cert;
    };

    ++cert.enumerated;
    if (!m.entries_distinct())
        return fail("entries_distinct", 0, 0);
    const std::size_t kappa = alphas.size();
    for (std::size_t xi = 0; xi < kappa; ++xi) {
        ++cert.enumerated;
        if (c(m.at(xi, 0)) != d(alphas[xi], beta))
            return fail("column0", xi, xi);
        ++cert.enumerated;
        if (c(m.at(xi, 1)) != d(beta, gammas[xi]))
            return fail("column1", xi, xi);
    }
    for (std::size_t xi = 0; xi < kappa; ++xi) {
        for (std::size_t eta = 0; eta < kappa; ++eta) {
            ++cert.enumerated;
            const Element sum = m.at(xi, 0) + m.at(eta, 1);
            if (sum != g[gammas[eta]] - g[alphas[xi]])
                return fail("telescoping", xi, eta);
            if (c(sum) != d(alphas[xi], gammas[eta]))
                return fail("mixed_sum", xi, eta);
        }
    }
    cert.status = CertStatus::Verified;
    return cert;
}

Certificate no_seven_norms(std::size_t dim, std::int64_t bound, const Budget &budget) {
    if (dim == 0 || bound < 0)
        throw PreconditionError("no_seven_norms needs dim >= 1 and bound >= 0");
    Certificate cert;
    cert.claim = "no_seven_norms";
    cert.domain = {{"dim", dim}, {"bound", bound}};

    const auto side = static_cast<std::uint64_t>(2 * bound + 1);
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < dim; ++i) {
        count *= side;
        if (count > (std::uint64_t{1} << 22)) {
            cert.status = CertStatus::Inconclusive;
            return cert;
        }
    }
    using Vec = std::vector<std::int64_t>;
    std::vector<Vec> vecs;
    std::vector<std::int64_t> norms;
    for (std::uint64_t code = 0; code < count; ++code) {
        Vec v(dim);
        std::uint64_t rest = code;
        for (std::size_t i = dim; i > 0; --i) {
            v[i - 1] = static_cast<std::int64_t>(rest % side) - bound;
            rest /= side;
        }
        std::int64_t n2 = 0;
        for (auto e : v)
            n2 += e * e;
        vecs.push_back(std::move(v));
        norms.push_back(n2);
    }
    std::map<std::int64_t, Indices> by_norm;
    for (std::size_t i = 0; i < vecs.size(); ++i)
        by_norm[norms[i]].push_back(i);

    auto norm2 = [&](std::initializer_list<const Vec *> vs) {
        std::int64_t total = 0;
        for (std::size_t k = 0; k < dim; ++k) {
            std::int64_t s = 0;
            for (const auto *v : vs)
                s += (*v)[k];
            total += s * s;
        }
        return total;
    };

    auto run = run_ordered<Indices>(vecs.size(), budget.threads, true, [&](std::size_t i) {
        ShardResult<Indices> r;
        const std::int64_t rr = norms[i];
        const auto &cls = by_norm.at(rr);
        const Vec &x = vecs[i];
        for (auto j : cls) {
            if (j <= i)
                continue;
            if (++r.nodes > budget.max_nodes) {
                r.truncated = true;
                return r;
            }
            if (norm2({&x, &vecs[j]}) != rr)
                continue;
            for (auto k : cls) {
                if (k <= j)
                    continue;
                if (++r.nodes > budget.max_nodes) {
                    r.truncated = true;
                    return r;
                }
                const Vec &z = vecs[k];
                if (norm2({&x, &z}) == rr && norm2({&vecs[j], &z}) == rr && norm2({&x, &vecs[j], &z}) == rr) {
                    r.hit = Indices{i, j, k};
                    return r;
                }
            }
        }
        return r;
    });
    const auto merged = merge_in_order(run, budget.max_nodes);
    cert.enumerated = merged.nodes;
    if (merged.inconclusive) {
        cert.status = CertStatus::Inconclusive;
    }
    else if (merged.hit) {
        const auto &h = *merged.hit;
        cert.status = CertStatus::CounterexampleFound;
        cert.witness = json{{"x", vecs[h[0]]}, {"y", vecs[h[1]]}, {"z", vecs[h[2]]}};
    }
    else {
        cert.status = CertStatus::Verified;
    }
    return cert;
}

Certificate find_monochromatic_ap(const std::string &colouring_id, const GroupSpec &G, const Budget &budget) {
    if (!G.is_finite())
        throw PreconditionError("arithmetic progression search needs a finite group");
    const ElementColouring colour = colouring_by_id(colouring_id);
    Certificate cert;
    cert.claim = "monochromatic_ap";
    cert.domain = {{"colouring", colouring_id}, {"group", to_json(G)}};

    const auto elems = G.enumerate(std::uint64_t{1} << 16);
    std::vector<ColourToken> colours;
    for (const auto &e : elems)
        colours.push_back(colour(e));

    auto run = run_ordered<Indices>(elems.size(), budget.threads, true, [&](std::size_t a) {
        ShardResult<Indices> r;
        for (std::size_t b = 0; b < elems.size(); ++b) {
            if (elems[b].is_zero())
                continue;
            if (++r.nodes > budget.max_nodes) {
                r.truncated = true;
                return r;
            }
            const Element ab = elems[a] + elems[b];
            const Element abb = ab + elems[b];
            if (colours[a] == colours[finite_index(ab)] && colours[a] == colours[finite_index(abb)]) {
                r.hit = Indices{a, b};
                return r;
            }
        }
        return r;
    });
    const auto merged = merge_in_order(run, budget.max_nodes);
    cert.enumerated = merged.nodes;
    if (merged.inconclusive) {
        cert.status = CertStatus::Inconclusive;
    }
    else if (merged.hit) {
        const Element &a = elems[(*merged.hit)[0]];
        const Element &b = elems[(*merged.hit)[1]];
        const ColourToken ca = colour(a);
        if (b.is_zero() || colour(a + b) != ca || colour(a + b + b) != ca)
            throw std::logic_error("arithmetic progression witness failed its re-check");
        cert.status = CertStatus::CounterexampleFound;
        cert.witness = json{{"a", element_to_json(a)}, {"b", element_to_json(b)}, {"colour", ca.to_json()}};
    }
    else {
        cert.status = CertStatus::Verified;
    }
    return cert;
}

Certificate find_monochromatic_subgroup(const std::string &colouring_id, const GroupSpec &G, bool all_subgroups,
                                        const Budget &budget) {
    if (!G.is_finite())
        throw PreconditionError("subgroup search needs a finite group");
    const ElementColouring colour = colouring_by_id(colouring_id);
    Certificate cert;
    cert.claim = "monochromatic_subgroup";
    cert.domain = {{"colouring", colouring_id}, {"group", to_json(G)}, {"all_subgroups", all_subgroups}};

    const auto elems = G.enumerate(all_subgroups ? 4096 : std::uint64_t{1} << 16);
    std::vector<std::optional<ColourToken>> colours(elems.size());
    for (std::size_t i = 0; i < elems.size(); ++i)
        if (!elems[i].is_zero())
            colours[i] = colour(elems[i]);

    using Members = std::vector<bool>;
    auto monochromatic = [&](const Members &h) {
        const ColourToken *first = nullptr;
        for (std::size_t i = 0; i < h.size(); ++i) {
            if (!h[i] || !colours[i])
                continue;
            if (!first)
                first = &*colours[i];
            else if (*colours[i] != *first)
                return false;
        }
        return first != nullptr;
    };
    auto report = [&](const Members &h) {
        std::vector<Element> members;
        for (std::size_t i = 0; i < h.size(); ++i)
            if (h[i])
                members.push_back(elems[i]);
        cert.status = CertStatus::CounterexampleFound;
        cert.witness = json{{"subgroup", elements_to_json(members)}};
        return cert;
    };

    std::set<Members> subgroups;
    for (std::size_t i = 0; i < elems.size(); ++i) {
        if (elems[i].is_zero())
            continue;
        if (++cert.enumerated > budget.max_nodes) {
            cert.status = CertStatus::Inconclusive;
            return cert;
        }
        Members h(elems.size(), false);
        Element y = elems[i];
        while (!y.is_zero()) {
            h[finite_index(y)] = true;
            y = y + elems[i];
        }
        h[finite_index(y)] = true;
        if (!all_subgroups && monochromatic(h))
            return report(h);
        subgroups.insert(std::move(h));
    }
    if (all_subgroups) {
        // Every subgroup is a join of cyclic ones; close under pairwise joins.
        std::vector<Members> frontier(subgroups.begin(), subgroups.end());
        while (!frontier.empty()) {
            std::vector<Members> fresh;
            const std::vector<Members> known(subgroups.begin(), subgroups.end());
            for (const auto &h : frontier) {
                for (const auto &k : known) {
                    Members join(elems.size(), false);
                    for (std::size_t a = 0; a < elems.size(); ++a) {
                        if (!h[a])
                            continue;
                        for (std::size_t b = 0; b < elems.size(); ++b)
                            if (k[b])
                                join[finite_index(elems[a] + elems[b])] = true;
                    }
                    if (subgroups.insert(join).second)
                        fresh.push_back(std::move(join));
                }
            }
            frontier = std::move(fresh);
        }
        for (const auto &h : subgroups) {
            ++cert.enumerated;
            if (monochromatic(h))
                return report(h);
        }
    }
    cert.status = CertStatus::Verified;
    return cert;
}

Certificate find_monochromatic_span(std::int64_t a, std::size_t dim, std::int64_t bound, const Budget &budget) {
    if (!is_prime_number(a))
        throw PreconditionError("span check needs a prime a");
    Certificate cert;
    cert.claim = "monochromatic_span";
    cert.domain = {{"a", a}, {"dim", dim}, {"bound", bound}};
    const GroupSpec G = GroupSpec::integer_box(bound, dim);
    for (const auto &x : G.enumerate()) {
        if (x.is_zero())
            continue;
        if (++cert.enumerated > budget.max_nodes) {
            cert.status = CertStatus::Inconclusive;
            return cert;
        }
        const Element ax = a * x;
        const ColourToken cx = valuation_colouring(x, a);
        if (cx == valuation_colouring(ax, a)) {
            cert.status = CertStatus::CounterexampleFound;
            cert.witness = json{{"x", element_to_json(x)}, {"ax", element_to_json(ax)}, {"colour", cx.to_json()}};
            return cert;
        }
    }
    cert.status = CertStatus::Verified;
    return cert;
}

namespace {

std::optional<Indices> delta_exhaustive(const std::vector<std::vector<std::int64_t>> &family, std::size_t target) {
    Indices chosen;
    std::vector<std::int64_t> root;
    auto rec = [&](auto &&self, std::size_t start) -> bool {
        if (chosen.size() == target)
            return true;
        for (std::size_t i = start; i + (target - chosen.size()) <= family.size(); ++i) {
            const auto &s = family[i];
            if (chosen.size() == 1) {
                root = intersect(s, family[chosen[0]]);
            }
            else if (chosen.size() > 1) {
                bool ok = true;
                for (auto c : chosen)
                    ok = ok && intersect(s, family[c]) == root;
                if (!ok)
                    continue;
            }
            chosen.push_back(i);
            if (self(self, i + 1))
                return true;
            chosen.pop_back();
        }
        return false;
    };
    if (rec(rec, 0))
        return chosen;
    return std::nullopt;
}

std::optional<Indices> delta_greedy(const std::vector<std::vector<std::int64_t>> &family, std::size_t target) {
    std::set<std::vector<std::int64_t>> roots{{}};
    for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t j = i + 1; j < family.size(); ++j)
            roots.insert(intersect(family[i], family[j]));
    std::vector<std::vector<std::int64_t>> ordered(roots.begin(), roots.end());
    std::stable_sort(ordered.begin(), ordered.end(), [](const auto &a, const auto &b) { return a.size() < b.size(); });
    for (const auto &r : ordered) {
        Indices picked;
        std::set<std::int64_t> used;
        for (std::size_t i = 0; i < family.size() && picked.size() < target; ++i) {
            const auto &s = family[i];
            if (!std::includes(s.begin(), s.end(), r.begin(), r.end()))
                continue;
            const auto petal = difference(s, r);
            if (std::any_of(petal.begin(), petal.end(), [&](auto v) { return used.count(v) > 0; }))
                continue;
            picked.push_back(i);
            used.insert(petal.begin(), petal.end());
        }
        if (picked.size() == target)
            return picked;
    }
    return std::nullopt;
}

} // namespace

std::optional<DeltaSystem> delta_system_find(const std::vector<std::vector<std::int64_t>> &family, std::size_t target,
                                             DeltaSearchMode mode) {
    for (const auto &s : family) {
        if (!std::is_sorted(s.begin(), s.end()) || std::adjacent_find(s.begin(), s.end()) != s.end())
            throw PreconditionError("family members must be sorted sets");
        if (s.size() != family.front().size())
            throw PreconditionError("family members must have equal cardinality");
    }
    DeltaSystem out;
    if (target == 0)
        return out;
    if (family.size() < target)
        return std::nullopt;

    std::optional<Indices> picked;
    constexpr std::size_t kExhaustiveThreshold = 20;
    switch (mode) {
    case DeltaSearchMode::Exhaustive:
        picked = delta_exhaustive(family, target);
        break;
    case DeltaSearchMode::Greedy:
        picked = delta_greedy(family, target);
        break;
    case DeltaSearchMode::Auto:
        if (family.size() <= kExhaustiveThreshold)
            picked = delta_exhaustive(family, target);
        else if (!(picked = delta_greedy(family, target)))
            picked = delta_exhaustive(family, target);
        break;
    }
    if (!picked)
        return std::nullopt;
    out.members = *picked;
    for (auto i : out.members)
        out.subfamily.push_back(family[i]);
    out.root = out.subfamily.size() == 1 ? out.subfamily[0] : intersect(out.subfamily[0], out.subfamily[1]);
    return out;
}

Certificate fs_support_growth_check(const GroupSpec &G, std::span<const Element> xs) {
    if (xs.empty())
        throw PreconditionError("support growth check needs a nonempty X");
    for (const auto &x : xs)
        if (!(x.spec() == G))
            throw StructuralError("X is not over the given group spec");

    std::vector<ColourToken> colours;
    for (const auto &s : fs_set(xs))
        colours.push_back(product_sigma_colouring(s));
    if (!all_same(colours))
        throw PreconditionError("input error: FS(X) is not monochromatic under product_sigma");

    Certificate cert;
    cert.claim = "fs_support_growth";
    cert.domain = {{"group", to_json(G)}, {"X", elements_to_json(xs)}};
    std::size_t s = 0;
    for (const auto &part : colours.front().as<ColourToken::Tuple>().items)
        s += part.as<ColourToken::Seq>().entries.size();

    std::vector<std::vector<std::int64_t>> supports;
    for (const auto &x : xs)
        supports.push_back(support_set(x));
    cert.enumerated = supports.size();
    const auto system = delta_system_find(supports, s + 1);
    if (!system) {
        cert.status = CertStatus::Verified;
        return cert;
    }
    // Petals of a Delta-system add up without cancellation, so the sum's support
    // outgrows s; FS(X) could not then have been monochromatic.
    Element sum = G.zero();
    std::vector<Element> members;
    for (auto i : system->members) {
        sum = sum + xs[i];
        members.push_back(xs[i]);
    }
    cert.status = CertStatus::CounterexampleFound;
    cert.witness = json{{"members", elements_to_json(members)},
                        {"root", system->root},
                        {"sum_support", supp(sum).size()},
                        {"colour_support", s}};
    return cert;
}

Extraction prime_exponent_extract(std::span<const Element> elements, std::size_t target, std::int64_t p) {
    if (elements.empty())
        throw PreconditionError("prime_exponent_extract needs input elements");
    const Order m_order = order(elements.front());
    if (!m_order)
        throw PreconditionError("inputs must have finite order");
    const auto m = static_cast<std::int64_t>(*m_order);
    if (m == 1)
        throw PreconditionError("inputs of order 1 carry no prime");
    for (const auto &x : elements)
        if (order(x) != m_order)
            throw PreconditionError("inputs must share one order");
    if (p == 0) {
        for (p = 2; m % p != 0; ++p) {
        }
    }
    if (!is_prime_number(p) || m % p != 0)
        throw PreconditionError("p must be a prime dividing the common order");

    Extraction ex;
    ex.prime = p;
    ex.multiplier = m / p;
    if (target == 0) {
        ex.success = true;
        ex.stage = "done";
        return ex;
    }

    std::vector<std::vector<std::int64_t>> supports;
    for (const auto &x : elements)
        supports.push_back(support_set(x));

    // Blocks of indices into `elements` whose sums have pairwise disjoint supports
    // and vanish on the root.
    std::vector<Indices> blocks;
    if (auto picked = pack_disjoint(supports, target)) {
        ex.block_size = 1;
        for (auto i : *picked)
            blocks.push_back({i});
    }
    else {
        std::set<std::vector<std::int64_t>> roots;
        for (std::size_t i = 0; i < supports.size(); ++i)
            for (std::size_t j = i + 1; j < supports.size(); ++j)
                if (auto r = intersect(supports[i], supports[j]); !r.empty())
                    roots.insert(std::move(r));
        std::vector<std::vector<std::int64_t>> ordered(roots.begin(), roots.end());
        std::stable_sort(ordered.begin(), ordered.end(),
                         [](const auto &a, const auto &b) { return a.size() < b.size(); });
        const auto needed = target * static_cast<std::size_t>(m);
        for (const auto &r : ordered) {
            // Pigeonhole on the restriction to the root.
            std::map<std::vector<Scalar>, Indices> classes;
            for (std::size_t i = 0; i < elements.size(); ++i) {
                if (!std::includes(supports[i].begin(), supports[i].end(), r.begin(), r.end()))
                    continue;
                std::vector<Scalar> restriction;
                for (auto idx : r)
                    restriction.push_back(elements[i][static_cast<std::size_t>(idx)]);
                classes[restriction].push_back(i);
            }
            for (const auto &[restriction, members] : classes) {
                std::vector<std::vector<std::int64_t>> petals;
                for (auto i : members)
                    petals.push_back(difference(supports[i], r));
                auto picked = pack_disjoint(petals, needed);
                if (!picked)
                    continue;
                ex.root.assign(r.begin(), r.end());
                ex.block_size = static_cast<std::size_t>(m);
                for (std::size_t b = 0; b < target; ++b) {
                    Indices block;
                    for (std::size_t k = 0; k < static_cast<std::size_t>(m); ++k)
                        block.push_back(members[(*picked)[b * static_cast<std::size_t>(m) + k]]);
                    blocks.push_back(std::move(block));
                }
                break;
            }
            if (!blocks.empty())
                break;
        }
    }
    if (blocks.empty()) {
        ex.stage = "delta-system";
        return ex;
    }

    const GroupSpec &spec = elements.front().spec();
    for (const auto &block : blocks) {
        Element y = spec.zero();
        for (auto i : block)
            y = y + elements[i];
        Element z = ex.multiplier * y;
        if (order(z) != Order(static_cast<std::uint64_t>(p))) {
            ex.stage = "order";
            ex.elements.clear();
            return ex;
        }
        ex.elements.push_back(std::move(z));
    }
    ex.success = true;
    ex.stage = "done";
    return ex;
}

} // namespace pforge
