#include "pforge/colourings.hpp"

#include <algorithm>
#include <charconv>

namespace pforge {

bool is_prime_number(std::int64_t p) {
    if (p < 2)
        return false;
    for (std::int64_t d = 2; d * d <= p; ++d)
        if (p % d == 0)
            return false;
    return true;
}

BinaryBranch BinaryBranch::parse(std::string_view s) {
    BinaryBranch b;
    for (char c : s) {
        if (c != '0' && c != '1')
            throw StructuralError("branch must be a string of 0/1, got '" + std::string(s) + "'");
        b.bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return b;
}

std::string BinaryBranch::str() const {
    std::string s;
    for (auto b : bits)
        s.push_back(static_cast<char>('0' + b));
    return s;
}

BranchSet BranchSet::make(std::vector<BinaryBranch> elems) {
    std::sort(elems.begin(), elems.end());
    if (std::adjacent_find(elems.begin(), elems.end()) != elems.end())
        throw StructuralError("branch set members must be distinct");
    for (const auto &e : elems)
        if (e.length() != elems.front().length())
            throw StructuralError("branch set members must have equal length");
    BranchSet s;
    s.elems_ = std::move(elems);
    return s;
}

BranchSet operator^(const BranchSet &x, const BranchSet &y) {
    BranchSet out;
    std::set_symmetric_difference(x.elems_.begin(), x.elems_.end(), y.elems_.begin(), y.elems_.end(),
                                  std::back_inserter(out.elems_));
    return out;
}

std::vector<BranchSet> enumerate_branch_sets(std::size_t kappa, std::size_t max_size) {
    if (kappa == 0 || kappa > 16)
        throw SizeError("kappa must be in [1, 16]");
    std::vector<BinaryBranch> branches;
    for (std::uint32_t v = 0; v < (1u << kappa); ++v) {
        BinaryBranch b;
        for (std::size_t i = kappa; i > 0; --i)
            b.bits.push_back(static_cast<std::uint8_t>((v >> (i - 1)) & 1u));
        branches.push_back(std::move(b));
    }
    std::vector<BranchSet> out;
    for (std::size_t size = 1; size <= std::min(max_size, branches.size()); ++size) {
        std::vector<std::size_t> idx(size);
        for (std::size_t i = 0; i < size; ++i)
            idx[i] = i;
        while (true) {
            std::vector<BinaryBranch> members;
            for (auto i : idx)
                members.push_back(branches[i]);
            out.push_back(BranchSet::make(std::move(members)));
            std::size_t pos = size;
            while (pos > 0 && idx[pos - 1] == branches.size() - size + pos - 1)
                --pos;
            if (pos == 0)
                break;
            ++idx[pos - 1];
            for (std::size_t j = pos; j < size; ++j)
                idx[j] = idx[j - 1] + 1;
        }
    }
    return out;
}

std::optional<std::uint32_t> delta(const BinaryBranch &f, const BinaryBranch &g) {
    if (f.length() != g.length())
        throw StructuralError("delta: branches have different lengths");
    for (std::size_t i = 0; i < f.length(); ++i)
        if (f.bits[i] != g.bits[i])
            return static_cast<std::uint32_t>(i);
    return std::nullopt;
}

ColourToken delta_colouring(const BranchSet &x) {
    ColourToken::Matrix m;
    m.size = x.size();
    m.entries.reserve(m.size * m.size);
    for (const auto &f : x.elems())
        for (const auto &g : x.elems())
            m.entries.push_back(delta(f, g));
    return ColourToken(std::move(m));
}

ColourToken sum_squares_colouring(const Element &x) {
    if (!x.spec().is_torsion_free())
        throw PreconditionError("sum_squares: every factor must be torsion-free");
    Scalar total = 0;
    for (const auto &c : x.coords())
        total += c * c;
    return ColourToken::integer(total);
}

ColourToken product_sigma_colouring(const Element &x) {
    std::vector<ColourToken> parts;
    for (auto p : x.spec().prime_classes())
        parts.push_back(sigma(project_p(x, p)));
    return ColourToken::tuple(std::move(parts));
}

std::int64_t valuation(const Scalar &q, std::int64_t p) {
    if (q == 0)
        throw PreconditionError("valuation of zero is undefined");
    const mpz_class prime(static_cast<long>(p));
    std::int64_t v = 0;
    mpz_class num = q.get_num();
    mpz_class den = q.get_den();
    while (mpz_divisible_p(num.get_mpz_t(), prime.get_mpz_t())) {
        num /= prime;
        ++v;
    }
    while (mpz_divisible_p(den.get_mpz_t(), prime.get_mpz_t())) {
        den /= prime;
        --v;
    }
    return v;
}

namespace {

int parity(std::int64_t v) {
    return static_cast<int>(((v % 2) + 2) % 2);
}

} // namespace

ColourToken subgroup_colouring(const Element &x) {
    if (x.is_zero())
        return ColourToken::bit(0);
    const GroupSpec &spec = x.spec();
    for (auto p : spec.prime_classes()) {
        if (p == 2)
            continue;
        for (std::size_t i = 0; i < x.rank(); ++i) {
            if (spec.prime_class(i) != p || x[i] == 0)
                continue;
            // First nonzero coordinate of the least odd-or-zero class.
            Scalar q = x[i];
            if (spec.is_finite_factor(i))
                q = Scalar(x[i].get_num(), static_cast<long>(spec.factor_modulus(i)));
            q.canonicalize();
            return ColourToken::bit(parity(valuation(q, 2)));
        }
    }
    throw PreconditionError("subgroup_parity: element is supported only on 2-primary factors");
}

ColourToken valuation_colouring(const Element &x, std::int64_t a) {
    if (!is_prime_number(a))
        throw PreconditionError("valuation colouring needs a prime a");
    for (const auto &f : x.spec().factors())
        if (!std::holds_alternative<IntegerBox>(f))
            throw PreconditionError("valuation colouring needs integer factors");
    for (const auto &c : x.coords())
        if (c != 0)
            return ColourToken::bit(parity(valuation(c, a)));
    throw PreconditionError("valuation colouring is undefined at zero");
}

ElementColouring colouring_by_id(std::string_view id) {
    if (id == "sigma")
        return [](const Element &x) { return sigma(x); };
    if (id == "sum_squares")
        return sum_squares_colouring;
    if (id == "product_sigma")
        return product_sigma_colouring;
    if (id == "subgroup_parity")
        return subgroup_colouring;
    constexpr std::string_view prefix = "valuation:a=";
    if (id.starts_with(prefix)) {
        std::int64_t a = 0;
        const auto rest = id.substr(prefix.size());
        const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), a);
        if (ec != std::errc() || ptr != rest.data() + rest.size() || !is_prime_number(a))
            throw StructuralError("valuation colouring id needs a prime: '" + std::string(id) + "'");
        return [a](const Element &x) { return valuation_colouring(x, a); };
    }
    throw StructuralError("unknown colouring id '" + std::string(id) + "'");
}

} // namespace pforge
