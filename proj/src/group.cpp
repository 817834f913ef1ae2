#include "pforge/group.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>

namespace pforge {

namespace {

std::int64_t ipow(std::int64_t base, int exp) {
    std::int64_t r = 1;
    for (int i = 0; i < exp; ++i) {
        if (r > std::numeric_limits<std::int64_t>::max() / base)
            throw StructuralError("prime power modulus overflows int64");
        r *= base;
    }
    return r;
}

bool is_prime(std::int64_t p) {
    if (p < 2)
        return false;
    for (std::int64_t d = 2; d * d <= p; ++d)
        if (p % d == 0)
            return false;
    return true;
}

std::int64_t least_prime_factor(std::int64_t m) {
    for (std::int64_t d = 2; d * d <= m; ++d)
        if (m % d == 0)
            return d;
    return m;
}

void validate(const FactorSpec &f) {
    std::visit(
        [](const auto &v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Cyclic>) {
                if (v.modulus < 2)
                    throw StructuralError("cyclic modulus must be >= 2");
            }
            else if constexpr (std::is_same_v<T, PrimePower>) {
                if (!is_prime(v.prime))
                    throw StructuralError("prime_power: p must be prime, got " + std::to_string(v.prime));
                if (v.exponent < 1)
                    throw StructuralError("prime_power: k must be >= 1");
                (void)v.modulus();
            }
            else if constexpr (std::is_same_v<T, IntegerBox>) {
                if (v.bound < 1)
                    throw StructuralError("int_box bound must be >= 1");
            }
            else {
                if (v.denominator < 1 || v.bound < 1)
                    throw StructuralError("rat_box denominator and bound must be >= 1");
            }
        },
        f);
}

// Values of one factor in enumeration order.
std::vector<Scalar> factor_values(const FactorSpec &f) {
    std::vector<Scalar> out;
    std::visit(
        [&](const auto &v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Cyclic>) {
                for (std::int64_t a = 0; a < v.modulus; ++a)
                    out.emplace_back(a);
            }
            else if constexpr (std::is_same_v<T, PrimePower>) {
                for (std::int64_t a = 0; a < v.modulus(); ++a)
                    out.emplace_back(a);
            }
            else if constexpr (std::is_same_v<T, IntegerBox>) {
                for (std::int64_t a = -v.bound; a <= v.bound; ++a)
                    out.emplace_back(a);
            }
            else {
                for (std::int64_t a = -v.bound * v.denominator; a <= v.bound * v.denominator; ++a) {
                    Scalar q(a, v.denominator);
                    q.canonicalize();
                    out.push_back(q);
                }
            }
        },
        f);
    return out;
}

void require_same_spec(const Element &x, const Element &y) {
    if (!(x.spec() == y.spec()))
        throw StructuralError("elements belong to different group specs");
}

mpz_class mod_floor(const mpz_class &a, std::int64_t m) {
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(m));
    return r;
}

} // namespace

std::int64_t PrimePower::modulus() const {
    return ipow(prime, exponent);
}

GroupSpec::GroupSpec(std::vector<FactorSpec> factors) {
    if (factors.empty())
        throw StructuralError("group spec needs at least one factor");
    for (const auto &f : factors)
        validate(f);
    factors_ = std::make_shared<const std::vector<FactorSpec>>(std::move(factors));
}

GroupSpec GroupSpec::cyclic_power(std::int64_t modulus, std::size_t rank) {
    return GroupSpec(std::vector<FactorSpec>(rank, Cyclic{modulus}));
}

GroupSpec GroupSpec::prime_power_power(std::int64_t prime, int exponent, std::size_t rank) {
    return GroupSpec(std::vector<FactorSpec>(rank, PrimePower{prime, exponent}));
}

GroupSpec GroupSpec::integer_box(std::int64_t bound, std::size_t rank) {
    return GroupSpec(std::vector<FactorSpec>(rank, IntegerBox{bound}));
}

bool GroupSpec::is_finite_factor(std::size_t i) const {
    return std::holds_alternative<Cyclic>(factor(i)) || std::holds_alternative<PrimePower>(factor(i));
}

bool GroupSpec::is_finite() const {
    for (std::size_t i = 0; i < rank(); ++i)
        if (!is_finite_factor(i))
            return false;
    return true;
}

bool GroupSpec::is_torsion_free() const {
    for (std::size_t i = 0; i < rank(); ++i)
        if (is_finite_factor(i))
            return false;
    return true;
}

std::int64_t GroupSpec::factor_modulus(std::size_t i) const {
    if (const auto *c = std::get_if<Cyclic>(&factor(i)))
        return c->modulus;
    if (const auto *p = std::get_if<PrimePower>(&factor(i)))
        return p->modulus();
    throw PreconditionError("factor " + std::to_string(i) + " is torsion-free");
}

std::int64_t GroupSpec::prime_class(std::size_t i) const {
    if (const auto *c = std::get_if<Cyclic>(&factor(i)))
        return least_prime_factor(c->modulus);
    if (const auto *p = std::get_if<PrimePower>(&factor(i)))
        return p->prime;
    return 0;
}

std::vector<std::int64_t> GroupSpec::prime_classes() const {
    std::vector<std::int64_t> out;
    for (std::size_t i = 0; i < rank(); ++i)
        out.push_back(prime_class(i));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::uint64_t GroupSpec::enumeration_size() const {
    std::uint64_t total = 1;
    for (const auto &f : *factors_) {
        std::uint64_t n = factor_values(f).size();
        if (total > std::numeric_limits<std::uint64_t>::max() / n)
            return std::numeric_limits<std::uint64_t>::max();
        total *= n;
    }
    return total;
}

Element GroupSpec::zero() const {
    return Element(*this, std::vector<Scalar>(rank()));
}

Element GroupSpec::make(std::vector<Scalar> coords) const {
    if (coords.size() != rank())
        throw StructuralError("element has " + std::to_string(coords.size()) + " coordinates, spec has " +
                              std::to_string(rank()));
    for (std::size_t i = 0; i < rank(); ++i) {
        auto &c = coords[i];
        c.canonicalize();
        if (const auto *r = std::get_if<RationalBox>(&factor(i))) {
            if (!c.get_den().fits_slong_p() || r->denominator % c.get_den().get_si() != 0)
                throw StructuralError("coordinate " + std::to_string(i) + " denominator does not divide " +
                                      std::to_string(r->denominator));
        }
        else if (c.get_den() != 1) {
            throw StructuralError("coordinate " + std::to_string(i) + " must be an integer");
        }
    }
    Element e(*this, std::move(coords));
    e.reduce();
    return e;
}

Element GroupSpec::make_ints(std::initializer_list<std::int64_t> coords) const {
    std::vector<Scalar> c;
    for (auto v : coords)
        c.emplace_back(static_cast<long>(v));
    return make(std::move(c));
}

Element GroupSpec::basis(std::size_t i) const {
    std::vector<Scalar> c(rank());
    c.at(i) = 1;
    return make(std::move(c));
}

std::vector<Element> GroupSpec::enumerate(std::uint64_t limit) const {
    if (enumeration_size() > limit)
        throw SizeError("group enumeration exceeds limit of " + std::to_string(limit) + " elements");
    std::vector<std::vector<Scalar>> values;
    for (const auto &f : *factors_)
        values.push_back(factor_values(f));

    std::vector<Element> out;
    out.reserve(enumeration_size());
    std::vector<std::size_t> digit(rank(), 0);
    while (true) {
        std::vector<Scalar> c(rank());
        for (std::size_t i = 0; i < rank(); ++i)
            c[i] = values[i][digit[i]];
        out.push_back(Element(*this, std::move(c)));
        std::size_t i = rank();
        while (i > 0) {
            --i;
            if (++digit[i] < values[i].size())
                break;
            digit[i] = 0;
            if (i == 0)
                return out;
        }
    }
}

void Element::reduce() {
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (spec_.is_finite_factor(i))
            coords_[i] = Scalar(mod_floor(coords_[i].get_num(), spec_.factor_modulus(i)));
    }
}

bool Element::is_zero() const {
    for (const auto &c : coords_)
        if (c != 0)
            return false;
    return true;
}

Element operator+(const Element &x, const Element &y) {
    require_same_spec(x, y);
    std::vector<Scalar> c(x.rank());
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = x.coords_[i] + y.coords_[i];
    Element e(x.spec_, std::move(c));
    e.reduce();
    return e;
}

Element operator-(const Element &x) {
    std::vector<Scalar> c(x.rank());
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = -x.coords_[i];
    Element e(x.spec_, std::move(c));
    e.reduce();
    return e;
}

Element operator-(const Element &x, const Element &y) {
    return x + (-y);
}

Element operator*(std::int64_t k, const Element &x) {
    std::vector<Scalar> c(x.rank());
    const Scalar factor(static_cast<long>(k));
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = factor * x.coords_[i];
    Element e(x.spec_, std::move(c));
    e.reduce();
    return e;
}

Element add(const Element &x, const Element &y) {
    return x + y;
}

Element neg(const Element &x) {
    return -x;
}

std::vector<std::size_t> supp(const Element &x) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < x.rank(); ++i)
        if (x[i] != 0)
            out.push_back(i);
    return out;
}

std::vector<Scalar> sigma_entries(const Element &x) {
    std::vector<Scalar> out;
    for (const auto &c : x.coords())
        if (c != 0)
            out.push_back(c);
    return out;
}

ColourToken sigma(const Element &x) {
    return ColourToken::seq(sigma_entries(x));
}

Element project_p(const Element &x, std::int64_t p) {
    std::vector<Scalar> c = x.coords();
    for (std::size_t i = 0; i < c.size(); ++i)
        if (x.spec().prime_class(i) != p)
            c[i] = 0;
    return x.spec().make(std::move(c));
}

Order order(const Element &x) {
    std::uint64_t result = 1;
    for (std::size_t i = 0; i < x.rank(); ++i) {
        if (x[i] == 0)
            continue;
        if (!x.spec().is_finite_factor(i))
            return std::nullopt;
        const auto m = static_cast<std::uint64_t>(x.spec().factor_modulus(i));
        const auto a = static_cast<std::uint64_t>(x[i].get_num().get_si());
        result = std::lcm(result, m / std::gcd(a, m));
    }
    return result;
}

std::vector<FormalSum> fs_formal(std::span<const Element> xs, std::size_t limit) {
    if (xs.size() > limit || xs.size() >= 63)
        throw SizeError("FS of " + std::to_string(xs.size()) + " elements exceeds limit " + std::to_string(limit));
    if (xs.empty())
        return {};
    for (std::size_t i = 1; i < xs.size(); ++i)
        require_same_spec(xs[0], xs[i]);
    {
        std::vector<Element> sorted(xs.begin(), xs.end());
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw StructuralError("FS input elements must be distinct");
    }
    const std::uint64_t count = std::uint64_t{1} << xs.size();
    std::vector<FormalSum> out;
    out.reserve(count - 1);
    // out[mask - 1] holds the sum for mask; mask with its low bit cleared is already present.
    for (std::uint64_t mask = 1; mask < count; ++mask) {
        const auto low = static_cast<std::size_t>(std::countr_zero(mask));
        const std::uint64_t rest = mask & (mask - 1);
        if (rest == 0)
            out.push_back({mask, xs[low]});
        else
            out.push_back({mask, out[rest - 1].value + xs[low]});
    }
    return out;
}

std::vector<Element> fs_set(std::span<const Element> xs, std::size_t limit) {
    std::vector<Element> out;
    for (auto &f : fs_formal(xs, limit))
        out.push_back(std::move(f.value));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

IndexedMatrix::IndexedMatrix(std::size_t rows, std::size_t cols, std::vector<Element> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows_ == 0 || cols_ == 0)
        throw StructuralError("indexed matrix must be nonempty");
    if (entries_.size() != rows_ * cols_)
        throw StructuralError("indexed matrix entry count does not match its shape");
    for (const auto &e : entries_)
        require_same_spec(entries_.front(), e);
}

bool IndexedMatrix::entries_distinct() const {
    std::vector<Element> sorted = entries_;
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

std::vector<MatrixFormalSum> fs_matrix_formal(const IndexedMatrix &m, std::size_t limit) {
    // (rows + 1)^cols - 1 formal sums; bounded like fs_set's 2^limit - 1.
    const std::uint64_t cap = std::uint64_t{1} << std::min<std::size_t>(limit, 62);
    std::uint64_t total = 1;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        total *= m.rows() + 1;
        if (total > cap)
            throw SizeError("FS_matrix formal sum count exceeds 2^" + std::to_string(limit));
    }

    std::vector<MatrixFormalSum> out;
    out.reserve(total - 1);
    std::vector<std::size_t> choice(m.cols(), 0);
    const Element zero = m.at(0, 0).spec().zero();
    while (true) {
        std::size_t c = m.cols();
        bool done = true;
        while (c > 0) {
            --c;
            if (++choice[c] <= m.rows()) {
                done = false;
                break;
            }
            choice[c] = 0;
        }
        if (done)
            break;
        Element sum = zero;
        for (std::size_t col = 0; col < m.cols(); ++col)
            if (choice[col] != 0)
                sum = sum + m.at(choice[col] - 1, col);
        out.push_back({choice, std::move(sum)});
    }
    return out;
}

std::vector<Element> fs_matrix(const IndexedMatrix &m, std::size_t limit) {
    std::vector<Element> out;
    for (auto &f : fs_matrix_formal(m, limit))
        out.push_back(std::move(f.value));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Element> subgroup_closure(const GroupSpec &spec, std::span<const Element> gens, std::size_t cap) {
    std::set<Element> seen{spec.zero()};
    std::vector<Element> frontier{spec.zero()};
    while (!frontier.empty()) {
        std::vector<Element> next;
        for (const auto &e : frontier) {
            for (const auto &g : gens) {
                for (auto candidate : {e + g, e - g}) {
                    if (seen.insert(candidate).second) {
                        if (seen.size() > cap)
                            throw ClosureOverflow("subgroup closure exceeded cap of " + std::to_string(cap));
                        next.push_back(std::move(candidate));
                    }
                }
            }
        }
        frontier = std::move(next);
    }
    return {seen.begin(), seen.end()};
}

namespace {

// Integer coordinates of x in Z^rank; finite factors contribute relation rows.
std::vector<mpz_class> lattice_coords(const Element &x) {
    std::vector<mpz_class> out(x.rank());
    for (std::size_t i = 0; i < x.rank(); ++i) {
        if (const auto *r = std::get_if<RationalBox>(&x.spec().factor(i))) {
            Scalar scaled = x[i] * Scalar(static_cast<long>(r->denominator));
            out[i] = scaled.get_num();
        }
        else {
            out[i] = x[i].get_num();
        }
    }
    return out;
}

// Row-echelon form over Z; returns rows with strictly increasing pivot columns.
std::vector<std::vector<mpz_class>> echelon(std::vector<std::vector<mpz_class>> rows, std::size_t dim) {
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < dim && pivot_row < rows.size(); ++col) {
        while (true) {
            std::size_t best = rows.size();
            for (std::size_t r = pivot_row; r < rows.size(); ++r) {
                if (rows[r][col] == 0)
                    continue;
                if (best == rows.size() || abs(rows[r][col]) < abs(rows[best][col]))
                    best = r;
            }
            if (best == rows.size())
                break;
            std::swap(rows[pivot_row], rows[best]);
            bool cleared = true;
            for (std::size_t r = pivot_row + 1; r < rows.size(); ++r) {
                if (rows[r][col] == 0)
                    continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), rows[r][col].get_mpz_t(), rows[pivot_row][col].get_mpz_t());
                for (std::size_t c = col; c < dim; ++c)
                    rows[r][c] -= q * rows[pivot_row][c];
                if (rows[r][col] != 0)
                    cleared = false;
            }
            if (cleared) {
                ++pivot_row;
                break;
            }
        }
    }
    rows.resize(pivot_row);
    return rows;
}

} // namespace

bool in_subgroup(const Element &x, std::span<const Element> gens) {
    const GroupSpec &spec = x.spec();
    const std::size_t dim = x.rank();
    std::vector<std::vector<mpz_class>> rows;
    for (const auto &g : gens) {
        require_same_spec(x, g);
        rows.push_back(lattice_coords(g));
    }
    for (std::size_t i = 0; i < dim; ++i) {
        if (spec.is_finite_factor(i)) {
            std::vector<mpz_class> rel(dim);
            rel[i] = static_cast<long>(spec.factor_modulus(i));
            rows.push_back(std::move(rel));
        }
    }
    const auto basis = echelon(std::move(rows), dim);
    auto target = lattice_coords(x);
    std::size_t next = 0;
    for (std::size_t col = 0; col < dim; ++col) {
        if (next < basis.size() && basis[next][col] != 0) {
            const auto &row = basis[next++];
            if (!mpz_divisible_p(target[col].get_mpz_t(), row[col].get_mpz_t()))
                return false;
            const mpz_class q = target[col] / row[col];
            for (std::size_t c = col; c < dim; ++c)
                target[c] -= q * row[c];
        }
        else if (target[col] != 0) {
            return false;
        }
    }
    return true;
}

IndependentScan independent_sequence(std::span<const Element> pool, std::size_t target) {
    IndependentScan scan;
    if (target == 0) {
        scan.complete = true;
        return scan;
    }
    for (const auto &candidate : pool) {
        if (in_subgroup(candidate, scan.kept))
            continue;
        scan.kept.push_back(candidate);
        if (scan.kept.size() == target) {
            scan.complete = true;
            break;
        }
    }
    return scan;
}

bool is_independent(std::span<const Element> seq) {
    for (std::size_t i = 0; i < seq.size(); ++i)
        if (in_subgroup(seq[i], seq.first(i)))
            return false;
    return true;
}

} // namespace pforge
