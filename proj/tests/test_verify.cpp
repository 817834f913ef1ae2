#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "pforge/errors.hpp"
#include "pforge/json_io.hpp"
#include "pforge/verify.hpp"

using namespace pforge;

namespace {

// Naive: is there a monochromatic 3-term progression a, a+b, a+2b with b != 0?
bool naive_ap(const GroupSpec &G, const ElementColouring &c) {
    const auto all = G.enumerate();
    for (const auto &a : all)
        for (const auto &b : all)
            if (!b.is_zero() && c(a) == c(a + b) && c(a) == c(a + b + b))
                return true;
    return false;
}

bool naive_seven_norms(std::size_t d, std::int64_t B) {
    const auto vecs = oracle::all_vectors(d, oracle::alphabet_for(0, B));
    auto sum = [](std::initializer_list<oracle::Vec> vs) {
        oracle::Vec s(vs.begin()->size(), 0);
        for (const auto &v : vs)
            s = oracle::add(s, v, 0);
        return s;
    };
    for (std::size_t i = 0; i < vecs.size(); ++i)
        for (std::size_t j = i + 1; j < vecs.size(); ++j)
            for (std::size_t k = j + 1; k < vecs.size(); ++k) {
                const auto &x = vecs[i], &y = vecs[j], &z = vecs[k];
                const auto r = oracle::norm2(x);
                if (oracle::norm2(y) == r && oracle::norm2(z) == r && oracle::norm2(sum({x, y})) == r &&
                    oracle::norm2(sum({x, z})) == r && oracle::norm2(sum({y, z})) == r &&
                    oracle::norm2(sum({x, y, z})) == r)
                    return true;
            }
    return false;
}

bool is_delta_system(const std::vector<std::vector<std::int64_t>> &sets) {
    if (sets.size() < 2)
        return true;
    std::vector<std::int64_t> root;
    std::set_intersection(sets[0].begin(), sets[0].end(), sets[1].begin(), sets[1].end(), std::back_inserter(root));
    for (std::size_t i = 0; i < sets.size(); ++i)
        for (std::size_t j = i + 1; j < sets.size(); ++j) {
            std::vector<std::int64_t> r;
            std::set_intersection(sets[i].begin(), sets[i].end(), sets[j].begin(), sets[j].end(),
                                  std::back_inserter(r));
            if (r != root)
                return false;
        }
    return true;
}

// Brute force over all subfamilies of the given size.
bool naive_has_delta_system(const std::vector<std::vector<std::int64_t>> &family, std::size_t target) {
    const std::size_t n = family.size();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != target)
            continue;
        std::vector<std::vector<std::int64_t>> pick;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1u)
                pick.push_back(family[i]);
        if (is_delta_system(pick))
            return true;
    }
    return false;
}

} // namespace

TEST_CASE("certificate JSON shape") {
    const auto cert = no_seven_norms(1, 2);
    const auto j = cert.to_json();
    CHECK(j.at("status") == "verified");
    CHECK(j.at("witness").is_null());
    CHECK(j.at("order") == "lex-v1");
    CHECK(j.contains("enumerated"));
    CHECK(j.contains("domain"));
}

TEST_CASE("no_seven_norms agrees with a triple loop") {
    for (auto [d, B] : std::vector<std::pair<std::size_t, std::int64_t>>{{1, 3}, {2, 2}, {3, 1}}) {
        CAPTURE(d);
        const auto cert = no_seven_norms(d, B);
        CHECK((cert.status == CertStatus::CounterexampleFound) == naive_seven_norms(d, B));
    }
    const auto capped = no_seven_norms(3, 2, Budget{5, 1});
    CHECK(capped.status == CertStatus::Inconclusive);
}

TEST_CASE("monochromatic FS under sigma matches pattern existence") {
    const auto G = GroupSpec::cyclic_power(2, 3);
    const auto c2 = find_monochromatic_fs("sigma", G, 2);
    CHECK(c2.status == CertStatus::CounterexampleFound);
    REQUIRE(c2.witness);
    const auto c3 = find_monochromatic_fs("sigma", G, 3);
    CHECK(c3.status == CertStatus::Verified);
    const auto threaded = find_monochromatic_fs("sigma", G, 3, Budget{UINT64_MAX, 4});
    CHECK(threaded.to_json() == c3.to_json());
    CHECK(find_monochromatic_fs("sigma", G, 3, Budget{3, 1}).status == CertStatus::Inconclusive);
}

TEST_CASE("monochromatic FS witnesses are genuine") {
    const auto G = GroupSpec::integer_box(1, 3);
    const auto cert = find_monochromatic_fs("sum_squares", G, 2);
    REQUIRE(cert.status == CertStatus::CounterexampleFound);
    std::vector<Element> xs;
    for (const auto &e : cert.witness->at("X"))
        xs.push_back(element_from_json(G, e));
    std::set<std::string> colours;
    for (const auto &s : fs_set(xs))
        colours.insert(sum_squares_colouring(s).canonical());
    CHECK(colours.size() == 1);
    CHECK(find_monochromatic_fs("sum_squares", G, 3).status == CertStatus::Verified);
}

TEST_CASE("delta colouring has no monochromatic pair sums at small kappa") {
    CHECK(find_monochromatic_fs_delta(2, 4, 2).status == CertStatus::Verified);
    CHECK(find_monochromatic_fs_delta(3, 3, 2).status == CertStatus::Verified);
    // Singletons are all coloured [["TOP"]], but their sums are pairs.
    CHECK(find_monochromatic_fs_delta(3, 1, 1).status == CertStatus::CounterexampleFound);
}

TEST_CASE("arithmetic progressions agree with the naive double loop") {
    for (const auto &G : {GroupSpec::prime_power_power(3, 1, 2), GroupSpec::cyclic_power(2, 2),
                          GroupSpec::prime_power_power(5, 1, 1), GroupSpec({PrimePower{2, 1}, PrimePower{3, 1}})}) {
        const auto cert = find_monochromatic_ap("product_sigma", G);
        CHECK((cert.status == CertStatus::CounterexampleFound) == naive_ap(G, product_sigma_colouring));
    }
    CHECK_THROWS_AS(find_monochromatic_ap("sum_squares", GroupSpec::integer_box(1, 1)), PreconditionError);
}

TEST_CASE("subgroups under the parity colouring") {
    CHECK(find_monochromatic_subgroup("subgroup_parity", GroupSpec::prime_power_power(3, 2, 1)).status ==
          CertStatus::Verified);
    CHECK(find_monochromatic_subgroup("subgroup_parity", GroupSpec::prime_power_power(3, 1, 2), true).status ==
          CertStatus::Verified);
    // Constant colouring: every subgroup is monochromatic.
    const auto sq = find_monochromatic_subgroup("sigma", GroupSpec::cyclic_power(2, 1));
    CHECK(sq.status == CertStatus::CounterexampleFound);
}

TEST_CASE("span check") {
    const auto cert = find_monochromatic_span(3, 2, 4);
    CHECK(cert.status == CertStatus::Verified);
    CHECK(cert.enumerated == 80);
    CHECK_THROWS_AS(find_monochromatic_span(4, 2, 4), PreconditionError);
}

TEST_CASE("FS matrix identities") {
    const auto G = GroupSpec::cyclic_power(5, 6);
    std::vector<Element> g;
    for (std::size_t i = 0; i < 6; ++i)
        g.push_back(G.basis(i));
    const std::vector<std::size_t> alphas{0, 1}, gammas{3, 5};
    const auto cert = check_fs_matrix_identities(g, alphas, 2, gammas, product_sigma_colouring);
    CHECK(cert.status == CertStatus::Verified);

    const auto m = fs_matrix_from_split(g, alphas, 2, gammas);
    CHECK(m.at(1, 0) == g[2] - g[1]);
    CHECK(m.at(0, 1) == g[3] - g[2]);

    CHECK_THROWS_AS(check_fs_matrix_identities(g, std::vector<std::size_t>{1, 0}, 2, gammas, sigma),
                    PreconditionError);
    CHECK_THROWS_AS(check_fs_matrix_identities(g, alphas, 4, gammas, sigma), PreconditionError);
    CHECK_THROWS_AS(check_fs_matrix_identities(g, alphas, 2, std::vector<std::size_t>{3}, sigma),
                    PreconditionError);
    std::vector<Element> dependent = g;
    dependent[5] = g[0] + g[1];
    CHECK_THROWS_AS(check_fs_matrix_identities(dependent, alphas, 2, gammas, sigma), PreconditionError);
}

TEST_CASE("delta systems agree with brute force") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t k = 1 + rng() % 3;
        const std::size_t n = 2 + rng() % 9;
        std::vector<std::vector<std::int64_t>> family;
        for (std::size_t i = 0; i < n; ++i) {
            std::set<std::int64_t> s;
            while (s.size() < k)
                s.insert(static_cast<std::int64_t>(rng() % 8));
            family.emplace_back(s.begin(), s.end());
        }
        const std::size_t target = 2 + rng() % 3;
        const auto found = delta_system_find(family, target, DeltaSearchMode::Exhaustive);
        CHECK(found.has_value() == naive_has_delta_system(family, target));
        if (found) {
            CHECK(found->subfamily.size() == target);
            CHECK(is_delta_system(found->subfamily));
        }
        const auto greedy = delta_system_find(family, target, DeltaSearchMode::Greedy);
        if (greedy)
            CHECK(is_delta_system(greedy->subfamily));
        CHECK(delta_system_find(family, target).has_value() == found.has_value());
    }
}

TEST_CASE("delta system edge cases") {
    const std::vector<std::vector<std::int64_t>> family{{1, 2}, {1, 3}, {1, 4}, {2, 3}};
    const auto d = delta_system_find(family, 3);
    REQUIRE(d);
    CHECK(d->root == std::vector<std::int64_t>{1});
    CHECK(delta_system_find(family, 0)->members.empty());
    CHECK_FALSE(delta_system_find(family, 5));
    CHECK_THROWS_AS(delta_system_find({{1}, {1, 2}}, 2), PreconditionError);
    CHECK_THROWS_AS(delta_system_find({{2, 1}}, 1), PreconditionError);
}

TEST_CASE("support growth shadow") {
    const auto G = GroupSpec::prime_power_power(3, 1, 6);
    // Two elements with equal sigma whose sum keeps it: FS is monochromatic.
    const std::vector<Element> ok{G.make_ints({1, 2, 0, 0, 0, 0}), G.make_ints({0, 1, 2, 0, 0, 0})};
    CHECK(fs_support_growth_check(G, ok).status == CertStatus::Verified);
    const std::vector<Element> bad{G.make_ints({1, 0, 0, 0, 0, 0}), G.make_ints({0, 1, 0, 0, 0, 0})};
    CHECK_THROWS_AS(fs_support_growth_check(G, bad), PreconditionError);
}

TEST_CASE("prime exponent extraction") {
    const auto G = GroupSpec::cyclic_power(6, 6);
    std::vector<Element> xs;
    for (std::size_t i = 0; i < 6; ++i)
        xs.push_back(G.basis(i));
    const auto ex = prime_exponent_extract(xs, 3);
    REQUIRE(ex.success);
    CHECK(ex.prime == 2);
    CHECK(ex.multiplier == 3);
    CHECK(ex.block_size == 1);
    for (const auto &z : ex.elements)
        CHECK(order(z) == Order(2));

    const auto ex3 = prime_exponent_extract(xs, 2, 3);
    REQUIRE(ex3.success);
    for (const auto &z : ex3.elements)
        CHECK(order(z) == Order(3));

    // All supports share coordinate 0; blocks of m members with equal root value.
    const auto H = GroupSpec::cyclic_power(2, 6);
    std::vector<Element> ys;
    for (std::size_t i = 1; i < 6; ++i)
        ys.push_back(H.basis(0) + H.basis(i));
    const auto ey = prime_exponent_extract(ys, 2);
    REQUIRE(ey.success);
    CHECK(ey.block_size == 2);
    CHECK(ey.root == std::vector<std::size_t>{0});
    CHECK(ey.elements.size() == 2);
    CHECK(supp(ey.elements[0]).size() == 2);

    CHECK_FALSE(prime_exponent_extract(ys, 3).success);
    const std::vector<Element> mixed{G.basis(0), 2 * G.basis(1)};
    CHECK_THROWS_AS(prime_exponent_extract(mixed, 1), PreconditionError);
    CHECK_THROWS_AS(prime_exponent_extract(xs, 1, 5), PreconditionError);
}
