#include "pforge/patterns.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <set>

#include "pforge/parallel.hpp"

namespace pforge {

namespace {

constexpr std::size_t kMaxRows = 20;

std::vector<std::int64_t> pattern_sigma(std::span<const std::int64_t> v) {
    std::vector<std::int64_t> out;
    for (auto e : v)
        if (e != 0)
            out.push_back(e);
    return out;
}

std::int64_t reduce_entry(std::int64_t v, std::int64_t m) {
    if (m == 0)
        return v;
    v %= m;
    return v < 0 ? v + m : v;
}

} // namespace

Pattern Pattern::make(std::int64_t m, std::vector<std::vector<std::int64_t>> rows) {
    if (m < 0 || m == 1)
        throw StructuralError("pattern modulus must be 0 or >= 2");
    if (rows.empty())
        throw StructuralError("pattern needs at least one row");
    if (rows.size() > kMaxRows)
        throw SizeError("pattern has more than 20 rows");
    const std::size_t l = rows.front().size();
    if (l == 0)
        throw StructuralError("pattern rows must be nonempty");
    for (const auto &r : rows) {
        if (r.size() != l)
            throw StructuralError("pattern rows have different lengths");
        if (m >= 2)
            for (auto e : r)
                if (e < 0 || e >= m)
                    throw StructuralError("pattern entry " + std::to_string(e) + " not reduced modulo " +
                                          std::to_string(m));
        if (std::all_of(r.begin(), r.end(), [](auto e) { return e == 0; }))
            throw StructuralError("pattern rows must be nonzero");
    }
    std::set<std::vector<std::int64_t>> distinct(rows.begin(), rows.end());
    if (distinct.size() != rows.size())
        throw StructuralError("pattern rows must be pairwise distinct");
    return Pattern(m, std::move(rows));
}

AdequacyReport is_adequate(const Pattern &p) {
    const std::size_t n = p.n();
    const std::size_t l = p.l();
    AdequacyReport report;
    std::vector<std::vector<std::int64_t>> sums(std::size_t{1} << n, std::vector<std::int64_t>(l, 0));
    std::vector<std::int64_t> reference;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        const auto low = static_cast<std::size_t>(std::countr_zero(mask));
        const auto &rest = sums[mask & (mask - 1)];
        auto &s = sums[mask];
        for (std::size_t j = 0; j < l; ++j)
            s[j] = reduce_entry(rest[j] + p.rows()[low][j], p.m());
        auto sig = pattern_sigma(s);
        if (mask == 1) {
            reference = std::move(sig);
            continue;
        }
        if (sig != reference) {
            report.witness = AdequacyWitness{1, mask, reference, std::move(sig)};
            return report;
        }
    }
    if (reference.empty()) {
        report.witness = AdequacyWitness{1, 1, reference, reference};
        return report;
    }
    report.adequate = true;
    report.signature = std::move(reference);
    return report;
}

Pattern canonical_2_adequate(std::int64_t m) {
    const std::int64_t minus_one = m == 0 ? -1 : m - 1;
    return Pattern::make(m, {{1, minus_one, 0}, {0, 1, minus_one}});
}

std::string to_string(SearchStatus s) {
    switch (s) {
    case SearchStatus::Found:
        return "found";
    case SearchStatus::Exhausted:
        return "exhausted";
    case SearchStatus::Inconclusive:
        return "inconclusive";
    }
    return "unknown";
}

void validate(const SearchConfig &cfg) {
    if (cfg.n < 1 || static_cast<std::size_t>(cfg.n) > kMaxRows)
        throw StructuralError("search: n must be in [1, 20]");
    if (cfg.m < 0 || cfg.m == 1 || cfg.m > 127)
        throw StructuralError("search: m must be 0 or in [2, 127]");
    if (cfg.l_min < 1 || cfg.l_min > cfg.l_max)
        throw StructuralError("search: need 1 <= l_min <= l_max");
    if (cfg.m == 0 && cfg.entry_bound < 1)
        throw StructuralError("search: entry bound B >= 1 is required when m = 0");
    if (cfg.m != 0 && cfg.entry_bound != 0)
        throw StructuralError("search: entry bound only applies when m = 0");
    if (cfg.m == 0 && cfg.entry_bound > 63)
        throw StructuralError("search: entry bound must be <= 63");
    const double base = cfg.m == 0 ? 2.0 * static_cast<double>(cfg.entry_bound) + 1.0 : static_cast<double>(cfg.m);
    if (std::pow(base, cfg.l_max) > 4.0e9)
        throw SizeError("search: alphabet^l_max exceeds the enumerable range");
}

namespace {

using Entry = std::int32_t;
using Rows = std::vector<std::vector<std::int64_t>>;

// Fixed-length vectors over the entry alphabet, stored flat.
struct Layout {
    std::size_t l = 0;
    Entry m = 0;
    std::vector<Entry> alphabet; // ascending
    std::vector<Entry> units;    // excluding 1

    Entry add(Entry a, Entry b) const {
        if (m == 0)
            return a + b;
        const Entry s = a + b;
        return s >= m ? s - m : s;
    }
    Entry mul(Entry u, Entry a) const { return m == 0 ? u * a : static_cast<Entry>((u * a) % m); }

    static bool less(const Entry *a, const Entry *b, std::size_t l) {
        return std::lexicographical_compare(a, a + l, b, b + l);
    }

    // sigma(x + y) == k; y may be null.
    bool sum_has_sigma(const Entry *x, const Entry *y, const std::vector<Entry> &k) const {
        std::size_t p = 0;
        for (std::size_t j = 0; j < l; ++j) {
            const Entry v = y ? add(x[j], y[j]) : x[j];
            if (v == 0)
                continue;
            if (p == k.size() || v != k[p])
                return false;
            ++p;
        }
        return p == k.size();
    }
};

Layout make_layout(const SearchConfig &cfg, std::size_t l) {
    Layout L;
    L.l = l;
    L.m = static_cast<Entry>(cfg.m);
    if (cfg.m == 0) {
        const auto b = static_cast<Entry>(cfg.entry_bound);
        for (Entry v = -b; v <= b; ++v)
            L.alphabet.push_back(v);
        L.units = {-1};
    }
    else {
        for (Entry v = 0; v < L.m; ++v)
            L.alphabet.push_back(v);
        for (Entry u = 2; u < L.m; ++u)
            if (std::gcd(u, L.m) == 1)
                L.units.push_back(u);
    }
    return L;
}

// All vectors of length l whose nonzero entries read k in order, in lexicographic
// order. Shared across workers for one length.
class SigmaClassCache {
  public:
    explicit SigmaClassCache(const Layout &L) : L_(L) {}

    const std::vector<Entry> &get(const std::vector<Entry> &k) {
        std::lock_guard lock(mutex_);
        auto it = cache_.find(k);
        if (it != cache_.end())
            return it->second;
        return cache_.emplace(k, build(k)).first->second;
    }

  private:
    std::vector<Entry> build(const std::vector<Entry> &k) const {
        const std::size_t l = L_.l;
        const std::size_t w = k.size();
        std::vector<std::vector<Entry>> vecs;
        std::vector<bool> pick(l, false);
        std::fill(pick.end() - static_cast<std::ptrdiff_t>(w), pick.end(), true);
        do {
            std::vector<Entry> v(l, 0);
            std::size_t p = 0;
            for (std::size_t j = 0; j < l; ++j)
                if (pick[j])
                    v[j] = k[p++];
            vecs.push_back(std::move(v));
        } while (std::next_permutation(pick.begin(), pick.end()));
        std::sort(vecs.begin(), vecs.end());
        std::vector<Entry> flat;
        flat.reserve(vecs.size() * l);
        for (const auto &v : vecs)
            flat.insert(flat.end(), v.begin(), v.end());
        return flat;
    }

    const Layout &L_;
    std::mutex mutex_;
    std::map<std::vector<Entry>, std::vector<Entry>> cache_;
};

// Depth-first search below one fixed first row.
class RowSearch {
  public:
    RowSearch(const Layout &L, std::size_t n, bool prune, bool allow_zero_columns, std::uint64_t cap)
        : L_(L), n_(n), prune_(prune), allow_zero_columns_(allow_zero_columns), cap_(cap), rows_(n * L.l) {}

    ShardResult<Rows> run(const std::vector<Entry> &first, SigmaClassCache &cache) {
        ShardResult<Rows> result;
        const std::size_t l = L_.l;
        std::copy(first.begin(), first.end(), rows_.begin());
        if (!count_node()) {
            result.truncated = true;
            result.nodes = nodes_;
            return result;
        }
        k_.clear();
        for (auto e : first)
            if (e != 0)
                k_.push_back(e);

        if (prune_ && !first_row_canonical(first.data())) {
            result.nodes = nodes_;
            return result;
        }
        if (n_ == 1) {
            if (leaf_ok())
                result.hit = current_rows(1);
            result.nodes = nodes_;
            return result;
        }

        const auto &klass = cache.get(k_);
        const std::size_t total = klass.size() / l;
        std::vector<Entry> cands;
        for (std::size_t i = 0; i < total; ++i) {
            const Entry *y = klass.data() + i * l;
            if (prune_) {
                if (!Layout::less(first.data(), y, l) || !scaled_not_below_first(y))
                    continue;
            }
            else if (std::equal(y, y + l, first.begin())) {
                continue;
            }
            if (L_.sum_has_sigma(y, first.data(), k_))
                cands.insert(cands.end(), y, y + l);
        }
        std::vector<Entry> fs(first.begin(), first.end());
        if (dfs(1, fs, cands))
            result.hit = current_rows(n_);
        result.truncated = truncated_;
        result.nodes = nodes_;
        return result;
    }

  private:
    bool count_node() {
        ++nodes_;
        if (nodes_ > cap_) {
            truncated_ = true;
            return false;
        }
        return true;
    }

    // depth = rows already placed; fs = their nonempty subset-sums; every
    // candidate y already satisfies sigma(y + s) = k for all s in fs.
    bool dfs(std::size_t depth, const std::vector<Entry> &fs, const std::vector<Entry> &cands) {
        const std::size_t l = L_.l;
        const std::size_t count = cands.size() / l;
        const std::size_t fs_count = fs.size() / l;
        for (std::size_t idx = 0; idx < count; ++idx) {
            if (!count_node())
                return false;
            const Entry *x = cands.data() + idx * l;
            std::copy(x, x + l, rows_.begin() + static_cast<std::ptrdiff_t>(depth * l));
            if (depth + 1 == n_) {
                if (leaf_ok())
                    return true;
                continue;
            }
            std::vector<Entry> next_fs = fs;
            next_fs.reserve((2 * fs_count + 1) * l);
            next_fs.insert(next_fs.end(), x, x + l);
            for (std::size_t s = 0; s < fs_count; ++s)
                for (std::size_t j = 0; j < l; ++j)
                    next_fs.push_back(L_.add(x[j], fs[s * l + j]));

            std::vector<Entry> next;
            for (std::size_t j = prune_ ? idx + 1 : 0; j < count; ++j) {
                if (j == idx)
                    continue;
                const Entry *y = cands.data() + j * l;
                bool ok = L_.sum_has_sigma(y, x, k_);
                for (std::size_t s = fs_count; ok && s < 2 * fs_count + 1; ++s)
                    if (s != fs_count)
                        ok = L_.sum_has_sigma(y, next_fs.data() + s * l, k_);
                if (ok)
                    next.insert(next.end(), y, y + l);
            }
            if (dfs(depth + 1, next_fs, next))
                return true;
            if (truncated_)
                return false;
        }
        return false;
    }

    bool first_row_canonical(const Entry *first) const {
        std::vector<Entry> scaled(L_.l);
        for (auto u : L_.units) {
            for (std::size_t j = 0; j < L_.l; ++j)
                scaled[j] = L_.mul(u, first[j]);
            if (Layout::less(scaled.data(), first, L_.l))
                return false;
        }
        return true;
    }

    bool scaled_not_below_first(const Entry *y) const {
        std::vector<Entry> scaled(L_.l);
        for (auto u : L_.units) {
            for (std::size_t j = 0; j < L_.l; ++j)
                scaled[j] = L_.mul(u, y[j]);
            if (Layout::less(scaled.data(), rows_.data(), L_.l))
                return false;
        }
        return true;
    }

    bool leaf_ok() const {
        const std::size_t l = L_.l;
        if (!allow_zero_columns_) {
            for (std::size_t j = 0; j < l; ++j) {
                bool zero = true;
                for (std::size_t i = 0; i < n_ && zero; ++i)
                    zero = rows_[i * l + j] == 0;
                if (zero)
                    return false;
            }
        }
        if (!prune_)
            return true;
        // Orbit-minimal under unit scaling followed by row sorting.
        std::vector<std::vector<Entry>> original(n_), scaled(n_);
        for (std::size_t i = 0; i < n_; ++i)
            original[i].assign(rows_.begin() + static_cast<std::ptrdiff_t>(i * l),
                               rows_.begin() + static_cast<std::ptrdiff_t>((i + 1) * l));
        for (auto u : L_.units) {
            for (std::size_t i = 0; i < n_; ++i) {
                scaled[i].resize(l);
                for (std::size_t j = 0; j < l; ++j)
                    scaled[i][j] = L_.mul(u, original[i][j]);
            }
            std::sort(scaled.begin(), scaled.end());
            if (scaled < original)
                return false;
        }
        return true;
    }

    Rows current_rows(std::size_t count) const {
        Rows out(count, std::vector<std::int64_t>(L_.l));
        for (std::size_t i = 0; i < count; ++i)
            for (std::size_t j = 0; j < L_.l; ++j)
                out[i][j] = rows_[i * L_.l + j];
        return out;
    }

    const Layout &L_;
    std::size_t n_;
    bool prune_;
    bool allow_zero_columns_;
    std::uint64_t cap_;
    std::vector<Entry> rows_;
    std::vector<Entry> k_;
    std::uint64_t nodes_ = 0;
    bool truncated_ = false;
};

} // namespace

SearchOutcome search(const SearchConfig &cfg) {
    validate(cfg);
    SearchOutcome outcome;
    outcome.n = cfg.n;
    outcome.m = cfg.m;
    outcome.l_min = cfg.l_min;
    outcome.l_max = cfg.l_max;
    outcome.entry_bound = cfg.entry_bound;

    std::uint64_t used = 0;
    for (int l = cfg.l_min; l <= cfg.l_max; ++l) {
        outcome.l_reached = l;
        const Layout L = make_layout(cfg, static_cast<std::size_t>(l));
        const std::size_t base = L.alphabet.size();
        std::size_t task_count = 1;
        for (int j = 0; j < l; ++j)
            task_count *= base;

        // A zero column at length l > l_min would leave an adequate pattern of
        // length l - 1, which the previous level already ruled out.
        const bool allow_zero_columns = !cfg.symmetry_pruning || l == cfg.l_min;
        const std::uint64_t remaining = cfg.node_cap - used;
        SigmaClassCache cache(L);

        auto task = [&](std::size_t index) -> ShardResult<Rows> {
            std::vector<Entry> first(L.l);
            std::size_t rest = index;
            bool zero = true;
            for (std::size_t j = L.l; j > 0; --j) {
                first[j - 1] = L.alphabet[rest % base];
                rest /= base;
                zero = zero && first[j - 1] == 0;
            }
            if (zero)
                return {};
            // Over Z/2 sigma only sees the weight, so columns may be permuted
            // freely and the least row can be taken to be 0...01...1.
            if (cfg.symmetry_pruning && cfg.m == 2 && !std::is_sorted(first.begin(), first.end()))
                return {};
            RowSearch rs(L, static_cast<std::size_t>(cfg.n), cfg.symmetry_pruning, allow_zero_columns, remaining);
            return rs.run(first, cache);
        };
        auto run = run_ordered<Rows>(task_count, cfg.threads, cfg.deterministic, task);

        std::uint64_t level_nodes = 0;
        for (std::size_t i = 0; i < task_count; ++i) {
            const auto &r = run.results[i];
            if (!r)
                continue;
            level_nodes += r->nodes;
            if (r->truncated || level_nodes > remaining) {
                outcome.status = SearchStatus::Inconclusive;
                outcome.nodes = used + std::min(level_nodes, remaining);
                return outcome;
            }
            if (r->hit) {
                outcome.status = SearchStatus::Found;
                outcome.pattern = Pattern::make(cfg.m, *r->hit);
                outcome.nodes = used + level_nodes;
                return outcome;
            }
        }
        used += level_nodes;
    }
    outcome.status = SearchStatus::Exhausted;
    outcome.nodes = used;
    return outcome;
}

std::vector<Element> lift(const Pattern &p, std::span<const Element> g, std::span<const std::size_t> beta) {
    if (beta.size() < p.l())
        throw PreconditionError("lift: need at least l positions in beta");
    if (g.empty())
        throw PreconditionError("lift: empty generator list");
    for (auto b : beta)
        if (b >= g.size())
            throw PreconditionError("lift: beta position out of range");
    {
        std::set<std::size_t> distinct(beta.begin(), beta.end());
        if (distinct.size() != beta.size())
            throw PreconditionError("lift: beta positions must be distinct");
    }
    for (const auto &x : g) {
        const Order o = order(x);
        if (p.m() == 0 ? o.has_value() : (!o || *o != static_cast<std::uint64_t>(p.m())))
            throw PreconditionError("lift: generator order does not match the pattern modulus");
    }
    if (!is_independent(g))
        throw PreconditionError("lift: generators are not independent");

    const GroupSpec &spec = g.front().spec();
    std::vector<Element> out;
    for (const auto &row : p.rows()) {
        Element y = spec.zero();
        for (std::size_t j = 0; j < row.size(); ++j)
            if (row[j] != 0)
                y = y + row[j] * g[beta[j]];
        out.push_back(std::move(y));
    }
    return out;
}

std::optional<Pattern> sigma_colouring_check(const GroupSpec &G, std::size_t n) {
    std::int64_t m = 0;
    for (const auto &f : G.factors()) {
        const auto *c = std::get_if<Cyclic>(&f);
        if (!c || (m != 0 && c->modulus != m))
            throw PreconditionError("sigma_colouring_check: all factors must be Cyclic(m) with one m");
        m = c->modulus;
    }
    if (n == 0 || n > kMaxRows)
        throw PreconditionError("sigma_colouring_check: n must be in [1, 20]");

    std::vector<Element> domain;
    for (auto &e : G.enumerate())
        if (!e.is_zero())
            domain.push_back(std::move(e));

    std::vector<std::size_t> chosen;
    std::vector<Element> sums;
    std::vector<Scalar> colour;

    // Depth-first over increasing index tuples, keeping FS(chosen) monochromatic.
    auto extend = [&](auto &&self, std::size_t start) -> bool {
        if (chosen.size() == n)
            return true;
        for (std::size_t i = start; i < domain.size(); ++i) {
            const Element &x = domain[i];
            const bool first = chosen.empty();
            if (!first && sigma_entries(x) != colour)
                continue;
            std::vector<Element> added{x};
            bool ok = true;
            for (const auto &s : sums) {
                Element t = s + x;
                if (sigma_entries(t) != colour) {
                    ok = false;
                    break;
                }
                added.push_back(std::move(t));
            }
            if (!ok)
                continue;
            if (first)
                colour = sigma_entries(x);
            const std::size_t before = sums.size();
            sums.insert(sums.end(), added.begin(), added.end());
            chosen.push_back(i);
            if (self(self, i + 1))
                return true;
            chosen.pop_back();
            sums.resize(before, G.zero());
        }
        return false;
    };
    if (!extend(extend, 0))
        return std::nullopt;

    std::vector<std::vector<std::int64_t>> rows;
    for (auto i : chosen) {
        std::vector<std::int64_t> row;
        for (const auto &c : domain[i].coords())
            row.push_back(c.get_num().get_si());
        rows.push_back(std::move(row));
    }
    return Pattern::make(m, std::move(rows));
}

} // namespace pforge
