// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "cli_runner.hpp"
#include "oracles.hpp"
#include "pforge/json_io.hpp"
#include "pforge/patterns.hpp"
#include "pforge/verify.hpp"

using namespace pforge;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string &title, const std::function<Verdict()> &body) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = body();
    }
    catch (const std::exception &e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.pass)
        ++failures;
    std::ostringstream line;
    line.precision(2);
    line << std::fixed << (v.pass ? "PASS" : "FAIL") << " [" << id << "] " << title << " -- " << v.detail << " ("
         << secs << "s)";
    std::cout << line.str() << std::endl;
}

SearchOutcome run_search(int n, std::int64_t m, int l_max, std::int64_t bound = 0, int l_min = 1) {
    SearchConfig cfg;
    cfg.n = n;
    cfg.m = m;
    cfg.l_min = l_min;
    cfg.l_max = l_max;
    cfg.entry_bound = bound;
    return search(cfg);
}

std::vector<std::vector<std::int64_t>> to_rows(const std::vector<oracle::Vec> &v) {
    return {v.begin(), v.end()};
}

Verdict criterion_canonical() {
    for (std::int64_t m = 2; m <= 12; ++m) {
        const Pattern p = canonical_2_adequate(m);
        if (p.rows() != std::vector<std::vector<std::int64_t>>{{1, m - 1, 0}, {0, 1, m - 1}})
            return {false, "unexpected rows for m=" + std::to_string(m)};
        const auto r = is_adequate(p);
        if (!r.adequate || r.signature != std::vector<std::int64_t>{1, m - 1})
            return {false, "m=" + std::to_string(m) + " not adequate with signature (1, m-1)"};
        if (!oracle::adequate(to_rows({{1, m - 1, 0}, {0, 1, m - 1}}), m))
            return {false, "oracle disagrees at m=" + std::to_string(m)};
    }
    const auto z = is_adequate(Pattern::make(0, {{1, -1, 0}, {0, 1, -1}}));
    if (!z.adequate || z.signature != std::vector<std::int64_t>{1, -1})
        return {false, "m=0 pattern not adequate with signature (1, -1)"};
    return {true, "m=2..12 and m=0 adequate with signature (1, m-1)"};
}

Verdict criterion_mod2() {
    std::ostringstream d;
    for (int n : {2, 3, 4}) {
        const auto o = run_search(n, 2, 1 << n);
        if (o.status != SearchStatus::Found || !o.pattern)
            return {false, "n=" + std::to_string(n) + " status " + to_string(o.status)};
        if (!is_adequate(*o.pattern).adequate || !oracle::adequate(o.pattern->rows(), 2))
            return {false, "n=" + std::to_string(n) + " pattern is not adequate"};
        d << "n=" << n << " l=" << o.pattern->l() << " nodes=" << o.nodes << "; ";
    }
    return {true, d.str() + "all patterns re-checked"};
}

Verdict criterion_mod3() {
    std::ostringstream d;
    for (int l_max = 3; l_max <= 9; ++l_max) {
        const auto o = run_search(3, 3, l_max, 0, l_max);
        if (o.status == SearchStatus::Found) {
            if (!o.pattern || !is_adequate(*o.pattern).adequate)
                return {false, "found pattern fails is_adequate"};
            return {true, "found at l=" + std::to_string(o.pattern->l())};
        }
        if (o.status != SearchStatus::Exhausted)
            return {false, "l=" + std::to_string(l_max) + " " + to_string(o.status)};
    }
    // Independent corroboration of the empty result on the shorter lengths.
    for (std::size_t l = 1; l <= 5; ++l)
        if (oracle::least_adequate(3, 3, 0, l))
            return {false, "naive oracle finds a pattern at l=" + std::to_string(l) + " but search did not"};
    return {true, "INCONCLUSIVE-DOCUMENTED: no 3-adequate pattern mod 3 with l <= 9 (cap reached; "
                  "naive oracle agrees for l <= 5)"};
}

Verdict criterion_mod0() {
    const auto o = run_search(3, 0, 4, 2);
    const auto naive = oracle::first_adequate(3, 0, 2, 4);
    if (o.status != SearchStatus::Exhausted)
        return {false, "search status " + to_string(o.status)};
    if (naive)
        return {false, "naive oracle found a pattern"};
    return {true, "search exhausted (" + std::to_string(o.nodes) + " nodes) and naive oracle found none"};
}

Verdict criterion_norms() {
    std::ostringstream d;
    for (auto [dim, b] : std::vector<std::pair<std::size_t, std::int64_t>>{{1, 5}, {2, 3}, {3, 3}}) {
        const auto c = no_seven_norms(dim, b);
        if (c.status != CertStatus::Verified)
            return {false, "(d,B)=(" + std::to_string(dim) + "," + std::to_string(b) + ") " + to_string(c.status)};
        d << "(" << dim << "," << b << ") verified, " << c.enumerated << " nodes; ";
    }
    return {true, d.str()};
}

// Independent pair scan over subsets of {0..7} encoded as bitmasks.
bool naive_delta_pairs_clean() {
    auto colour = [](std::uint32_t set) {
        std::vector<int> members;
        for (int b = 0; b < 8; ++b)
            if (set >> b & 1u)
                members.push_back(b);
        std::vector<int> m;
        for (int f : members)
            for (int g : members) {
                int first = -1;
                for (int bit = 2; bit >= 0 && first < 0; --bit)
                    if (((f ^ g) >> bit) & 1)
                        first = 2 - bit;
                m.push_back(first);
            }
        return m;
    };
    std::vector<std::uint32_t> sets;
    for (std::uint32_t s = 1; s < 256; ++s)
        if (std::popcount(s) <= 3)
            sets.push_back(s);
    for (std::size_t i = 0; i < sets.size(); ++i)
        for (std::size_t j = i + 1; j < sets.size(); ++j) {
            const auto x = sets[i], y = sets[j];
            if (colour(x) == colour(y) && colour(x) == colour(x ^ y))
                return false;
        }
    return true;
}

Verdict criterion_delta() {
    const auto c = find_monochromatic_fs_delta(3, 3, 2);
    if (c.status != CertStatus::Verified)
        return {false, "certificate " + to_string(c.status)};
    if (!naive_delta_pairs_clean())
        return {false, "naive pair scan found a monochromatic triple"};
    return {true, "verified over " + std::to_string(c.enumerated) + " nodes; naive pair scan agrees"};
}

Verdict criterion_ap() {
    std::ostringstream d;
    for (const auto &G : {GroupSpec::prime_power_power(3, 1, 3), GroupSpec::prime_power_power(5, 1, 2),
                          GroupSpec::prime_power_power(3, 2, 2)}) {
        const auto c = find_monochromatic_ap("product_sigma", G);
        if (c.status != CertStatus::Verified)
            return {false, to_json(G).dump() + " " + to_string(c.status)};
        d << G.enumeration_size() << "-element group verified; ";
    }
    const auto two = find_monochromatic_ap("product_sigma", GroupSpec::cyclic_power(2, 2));
    if (two.status != CertStatus::CounterexampleFound)
        return {false, "(Z/2)^2 did not yield a counterexample"};
    d << "(Z/2)^2 counterexample " << two.witness->dump();
    return {true, d.str()};
}

Verdict criterion_subgroup() {
    for (auto [p, k] : std::vector<std::pair<std::int64_t, int>>{{3, 1}, {3, 2}, {5, 1}, {7, 1}, {5, 2}}) {
        const auto c = find_monochromatic_subgroup("subgroup_parity", GroupSpec::prime_power_power(p, k, 1));
        if (c.status != CertStatus::Verified)
            return {false, "Z/" + std::to_string(p) + "^" + std::to_string(k) + " " + to_string(c.status)};
    }
    return {true, "all five cyclic groups verified"};
}

Verdict criterion_span() {
    const auto Z = GroupSpec::integer_box(10, 3);
    std::uint64_t checked = 0;
    for (std::int64_t a : {2, 3, 5}) {
        for (const auto &x : Z.enumerate()) {
            if (x.is_zero())
                continue;
            const int cx = valuation_colouring(x, a).as<ColourToken::Bit>().value;
            const int cax = valuation_colouring(a * x, a).as<ColourToken::Bit>().value;
            if (cax != 1 - cx)
                return {false, "invariant fails at a=" + std::to_string(a)};
            ++checked;
        }
        const auto c = find_monochromatic_span(a, 3, 10);
        if (c.status != CertStatus::Verified)
            return {false, "span certificate " + to_string(c.status) + " for a=" + std::to_string(a)};
    }
    return {true, std::to_string(checked) + " (x, a) pairs flip colour; span certificates verified"};
}

Verdict criterion_identities() {
    const auto G = GroupSpec::cyclic_power(5, 8);
    std::vector<Element> g;
    for (std::size_t i = 0; i < 8; ++i)
        g.push_back(G.basis(i));
    std::mt19937_64 rng(20240611);
    for (int trial = 0; trial < 50; ++trial) {
        const std::uint64_t seed = rng();
        const int colours = 2 + static_cast<int>(rng() % 5);
        // A fixed random function of the element's coordinates.
        const ElementColouring c = [seed, colours](const Element &x) {
            std::uint64_t h = seed;
            for (const auto &v : x.coords())
                h = (h ^ static_cast<std::uint64_t>(v.get_num().get_si())) * 0x9E3779B97F4A7C15ull;
            h ^= h >> 29;
            return ColourToken::integer(Scalar(static_cast<long>(h % static_cast<std::uint64_t>(colours))));
        };
        const std::size_t kappa = 1 + rng() % 3;
        std::vector<std::size_t> idx(8);
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng);
        idx.resize(2 * kappa + 1);
        std::sort(idx.begin(), idx.end());
        const std::vector<std::size_t> alphas(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(kappa));
        const std::size_t beta = idx[kappa];
        const std::vector<std::size_t> gammas(idx.begin() + static_cast<std::ptrdiff_t>(kappa) + 1, idx.end());
        const auto cert = check_fs_matrix_identities(g, alphas, beta, gammas, c);
        if (cert.status != CertStatus::Verified)
            return {false, "trial " + std::to_string(trial) + ": " + cert.witness->dump()};
    }
    return {true, "50 random colourings and splits verified"};
}

Verdict criterion_round_trip() {
    int found = 0, cases = 0;
    for (int n = 1; n <= 3; ++n)
        for (std::int64_t m : {2, 3})
            for (int l = 1; l <= 4; ++l) {
                ++cases;
                const auto G = GroupSpec::cyclic_power(m, static_cast<std::size_t>(l));
                const auto o = run_search(n, m, l);
                const auto c = find_monochromatic_fs("sigma", G, static_cast<std::size_t>(n));
                const bool pattern = o.status == SearchStatus::Found;
                const bool mono = c.status == CertStatus::CounterexampleFound;
                const std::string where = "(n,m,l)=(" + std::to_string(n) + "," + std::to_string(m) + "," +
                                          std::to_string(l) + ")";
                if (o.status == SearchStatus::Inconclusive || c.status == CertStatus::Inconclusive)
                    return {false, where + " inconclusive"};
                if (pattern != mono)
                    return {false, where + " search and FS oracle disagree"};
                if (!pattern)
                    continue;
                ++found;
                std::vector<Element> basis;
                for (int i = 0; i < l; ++i)
                    basis.push_back(G.basis(static_cast<std::size_t>(i)));
                std::vector<std::size_t> beta(o.pattern->l());
                std::iota(beta.begin(), beta.end(), 0);
                const auto ys = lift(*o.pattern, basis, beta);
                const auto signature = is_adequate(*o.pattern).signature;
                std::set<std::vector<Scalar>> sigmas;
                for (const auto &s : fs_set(ys))
                    sigmas.insert(sigma_entries(s));
                std::vector<Scalar> expected;
                for (auto v : signature)
                    expected.emplace_back(static_cast<long>(v));
                if (sigmas.size() != 1 || *sigmas.begin() != expected)
                    return {false, where + " lifted FS-set does not carry the signature"};
            }
    return {true, std::to_string(cases) + " regions agree, " + std::to_string(found) + " lifts carry the signature"};
}

Verdict criterion_metamorphic() {
    std::mt19937_64 rng(99);
    int adequate_seen = 0;
    for (std::int64_t m : {2, 3, 5}) {
        std::vector<Pattern> seeds{canonical_2_adequate(m)};
        for (int l = 1; l <= 4; ++l)
            if (auto o = run_search(2, m, l); o.pattern)
                seeds.push_back(*o.pattern);
        if (m == 2)
            seeds.push_back(*run_search(3, 2, 7).pattern);

        for (int trial = 0; trial < 1000; ++trial) {
            std::vector<std::vector<std::int64_t>> rows;
            if (trial % 3 == 0) {
                rows = seeds[rng() % seeds.size()].rows();
            }
            else {
                const std::size_t n = 1 + rng() % 4;
                const std::size_t l = 1 + rng() % 5;
                std::set<std::vector<std::int64_t>> distinct;
                for (int attempt = 0; distinct.size() < n && attempt < 100; ++attempt) {
                    std::vector<std::int64_t> v(l);
                    for (auto &e : v)
                        e = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(m));
                    if (std::any_of(v.begin(), v.end(), [](auto e) { return e != 0; }))
                        distinct.insert(v);
                }
                rows.assign(distinct.begin(), distinct.end());
            }
            const auto base = is_adequate(Pattern::make(m, rows));
            if (base.adequate != oracle::adequate(rows, m))
                return {false, "is_adequate disagrees with the oracle"};
            adequate_seen += base.adequate;

            auto permuted = rows;
            std::shuffle(permuted.begin(), permuted.end(), rng);
            const auto rp = is_adequate(Pattern::make(m, permuted));
            if (rp.adequate != base.adequate || rp.signature != base.signature)
                return {false, "row permutation changed adequacy"};

            std::vector<std::int64_t> units;
            for (std::int64_t u = 1; u < m; ++u)
                if (std::gcd(u, m) == 1)
                    units.push_back(u);
            const std::int64_t u = units[rng() % units.size()];
            auto scaled = rows;
            for (auto &r : scaled)
                for (auto &e : r)
                    e = (e * u) % m;
            const auto rs = is_adequate(Pattern::make(m, scaled));
            auto expected = base.signature;
            for (auto &e : expected)
                e = (e * u) % m;
            if (rs.adequate != base.adequate || rs.signature != expected)
                return {false, "unit scaling changed adequacy"};

            auto padded = rows;
            const std::size_t at = rng() % (rows.front().size() + 1);
            for (auto &r : padded)
                r.insert(r.begin() + static_cast<std::ptrdiff_t>(at), 0);
            const auto rz = is_adequate(Pattern::make(m, padded));
            if (rz.adequate != base.adequate || rz.signature != base.signature)
                return {false, "zero column changed adequacy"};
        }
    }
    return {true, "3000 patterns (" + std::to_string(adequate_seen) + " adequate) invariant under all three maps"};
}

Verdict criterion_determinism() {
    const std::vector<std::string> commands{"search --n 2 --m 2 --l-max 4", "search --n 3 --m 2 --l-max 8",
                                            "search --n 4 --m 2 --l-max 16", "search --n 3 --m 3 --l-max 9",
                                            "search --n 3 --m 0 --entry-bound 2 --l-max 4"};
    for (const auto &cmd : commands) {
        const auto one = run_cli(cmd + " --threads 1");
        const auto eight = run_cli(cmd + " --threads 8");
        if (one.out.empty() || one.out != eight.out || one.exit_code != eight.exit_code)
            return {false, "'" + cmd + "' differs between 1 and 8 threads"};
    }
    return {true, std::to_string(commands.size()) + " commands byte-identical at 1 and 8 threads"};
}

} // namespace

int main() {
    report(1, "canonical 2-adequate pattern", criterion_canonical);
    report(2, "mod-2 existence for n = 2, 3, 4", criterion_mod2);
    report(3, "(3,3) existence up to l = 9", criterion_mod3);
    report(4, "modulo-0 impossibility at n = 3, B = 2, l <= 4", criterion_mod0);
    report(5, "no seven equal norms", criterion_norms);
    report(6, "delta colouring admits no monochromatic pair sums", criterion_delta);
    report(7, "arithmetic progressions under product sigma", criterion_ap);
    report(8, "cyclic subgroups under subgroup parity", criterion_subgroup);
    report(9, "valuation colouring flips under multiplication", criterion_span);
    report(10, "FS matrix identities under random colourings", criterion_identities);
    report(11, "pattern search and sigma-colouring FS round trip", criterion_round_trip);
    report(12, "metamorphic adequacy invariances", criterion_metamorphic);
    report(13, "determinism across thread counts", criterion_determinism);
    std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
    return failures == 0 ? 0 : 1;
}
