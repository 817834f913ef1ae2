#pragma once

// Deliberately naive reference implementations. Nothing here calls into the
// search or verify code paths.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

namespace oracle {

using Vec = std::vector<std::int64_t>;

inline std::int64_t reduce(std::int64_t v, std::int64_t m) {
    if (m == 0)
        return v;
    return ((v % m) + m) % m;
}

inline Vec nonzero_entries(const Vec &v) {
    Vec out;
    for (auto e : v)
        if (e != 0)
            out.push_back(e);
    return out;
}

inline Vec add(const Vec &a, const Vec &b, std::int64_t m) {
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = reduce(a[i] + b[i], m);
    return out;
}

// Every nonempty subset sum, by bitmask.
inline std::vector<Vec> subset_sums(const std::vector<Vec> &rows, std::int64_t m) {
    std::vector<Vec> out;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << rows.size()); ++mask) {
        Vec s(rows.front().size(), 0);
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (mask >> i & 1u)
                s = add(s, rows[i], m);
        out.push_back(s);
    }
    return out;
}

inline bool adequate(const std::vector<Vec> &rows, std::int64_t m) {
    std::set<Vec> sigmas;
    for (const auto &s : subset_sums(rows, m))
        sigmas.insert(nonzero_entries(s));
    return sigmas.size() == 1;
}

// All vectors of length l over the alphabet, lexicographic, zero excluded.
inline std::vector<Vec> all_vectors(std::size_t l, const Vec &alphabet) {
    std::vector<Vec> out;
    Vec v(l, alphabet.front());
    std::vector<std::size_t> digit(l, 0);
    while (true) {
        for (std::size_t i = 0; i < l; ++i)
            v[i] = alphabet[digit[i]];
        if (std::any_of(v.begin(), v.end(), [](auto e) { return e != 0; }))
            out.push_back(v);
        std::size_t pos = l;
        while (pos > 0 && digit[pos - 1] + 1 == alphabet.size())
            digit[--pos] = 0;
        if (pos == 0)
            break;
        ++digit[pos - 1];
    }
    return out;
}

inline Vec alphabet_for(std::int64_t m, std::int64_t bound) {
    Vec a;
    if (m == 0)
        for (std::int64_t v = -bound; v <= bound; ++v)
            a.push_back(v);
    else
        for (std::int64_t v = 0; v < m; ++v)
            a.push_back(v);
    return a;
}

// Lexicographically least n-subset (rows increasing) of length-l vectors that is
// adequate. Pairs are pre-filtered, since any two rows of an adequate pattern are
// themselves adequate.
inline std::optional<std::vector<Vec>> least_adequate(std::size_t n, std::int64_t m, std::int64_t bound,
                                                      std::size_t l) {
    const auto vecs = all_vectors(l, alphabet_for(m, bound));
    const std::size_t N = vecs.size();
    std::vector<std::vector<bool>> pair_ok(N, std::vector<bool>(N, false));
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j)
            pair_ok[i][j] = pair_ok[j][i] = adequate({vecs[i], vecs[j]}, m);

    std::vector<std::size_t> pick;
    std::optional<std::vector<Vec>> found;
    auto rec = [&](auto &&self, std::size_t start) -> bool {
        if (pick.size() == n) {
            std::vector<Vec> rows;
            for (auto i : pick)
                rows.push_back(vecs[i]);
            if (!adequate(rows, m))
                return false;
            found = rows;
            return true;
        }
        for (std::size_t i = start; i < N; ++i) {
            bool ok = true;
            for (auto p : pick)
                ok = ok && pair_ok[p][i];
            if (!ok)
                continue;
            pick.push_back(i);
            if (self(self, i + 1))
                return true;
            pick.pop_back();
        }
        return false;
    };
    if (n == 1) {
        if (N > 0)
            return std::vector<Vec>{vecs[0]};
        return std::nullopt;
    }
    rec(rec, 0);
    return found;
}

// First length (from 1) carrying an adequate pattern, with the least one.
inline std::optional<std::pair<std::size_t, std::vector<Vec>>> first_adequate(std::size_t n, std::int64_t m,
                                                                              std::int64_t bound, std::size_t l_max) {
    for (std::size_t l = 1; l <= l_max; ++l)
        if (auto p = least_adequate(n, m, bound, l))
            return std::make_pair(l, *p);
    return std::nullopt;
}

inline std::int64_t norm2(const Vec &v) {
    std::int64_t s = 0;
    for (auto e : v)
        s += e * e;
    return s;
}

} // namespace oracle
