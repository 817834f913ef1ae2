#include "pforge/json_io.hpp"

namespace pforge {

namespace {

std::int64_t get_int(const json &j, const char *key) {
    if (!j.is_object() || !j.contains(key) || !j.at(key).is_number_integer())
        throw StructuralError(std::string("expected integer field '") + key + "'");
    return j.at(key).get<std::int64_t>();
}

Scalar scalar_from_json(const json &j) {
    if (j.is_number_integer())
        return Scalar(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer()) {
        const auto den = j[1].get<std::int64_t>();
        if (den == 0)
            throw StructuralError("zero denominator");
        Scalar q(static_cast<long>(j[0].get<std::int64_t>()), static_cast<long>(den));
        q.canonicalize();
        return q;
    }
    throw StructuralError("expected an integer or [num, den], got " + j.dump());
}

} // namespace

json to_json(const GroupSpec &spec) {
    json factors = json::array();
    for (const auto &f : spec.factors()) {
        std::visit(
            [&](const auto &v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, Cyclic>)
                    factors.push_back({{"kind", "cyclic"}, {"m", v.modulus}});
                else if constexpr (std::is_same_v<T, PrimePower>)
                    factors.push_back({{"kind", "prime_power"}, {"p", v.prime}, {"k", v.exponent}});
                else if constexpr (std::is_same_v<T, IntegerBox>)
                    factors.push_back({{"kind", "int_box"}, {"bound", v.bound}});
                else
                    factors.push_back({{"kind", "rat_box"}, {"den", v.denominator}, {"bound", v.bound}});
            },
            f);
    }
    return json{{"factors", factors}};
}

GroupSpec group_spec_from_json(const json &j) {
    if (!j.is_object() || !j.contains("factors") || !j.at("factors").is_array())
        throw StructuralError("group spec JSON needs a \"factors\" array");
    std::vector<FactorSpec> factors;
    for (const auto &f : j.at("factors")) {
        if (!f.is_object() || !f.contains("kind") || !f.at("kind").is_string())
            throw StructuralError("factor needs a string \"kind\"");
        const auto kind = f.at("kind").get<std::string>();
        if (kind == "cyclic")
            factors.emplace_back(Cyclic{get_int(f, "m")});
        else if (kind == "prime_power")
            factors.emplace_back(PrimePower{get_int(f, "p"), static_cast<int>(get_int(f, "k"))});
        else if (kind == "int_box")
            factors.emplace_back(IntegerBox{get_int(f, "bound")});
        else if (kind == "rat_box")
            factors.emplace_back(RationalBox{get_int(f, "den"), get_int(f, "bound")});
        else
            throw StructuralError("unknown factor kind '" + kind + "'");
    }
    return GroupSpec(std::move(factors));
}

json element_to_json(const Element &x) {
    json out = json::array();
    for (std::size_t i = 0; i < x.rank(); ++i) {
        if (std::holds_alternative<RationalBox>(x.spec().factor(i)))
            out.push_back(json::array({x[i].get_num().get_si(), x[i].get_den().get_si()}));
        else
            out.push_back(scalar_to_json(x[i]));
    }
    return out;
}

Element element_from_json(const GroupSpec &spec, const json &j) {
    if (!j.is_array())
        throw StructuralError("element JSON must be an array");
    std::vector<Scalar> coords;
    for (const auto &c : j)
        coords.push_back(scalar_from_json(c));
    return spec.make(std::move(coords));
}

json to_json(const Pattern &p) {
    return json{{"n", p.n()}, {"m", p.m()}, {"l", p.l()}, {"rows", p.rows()}};
}

Pattern pattern_from_json(const json &j) {
    if (!j.is_object() || !j.contains("rows"))
        throw StructuralError("pattern JSON needs \"m\" and \"rows\"");
    const auto m = get_int(j, "m");
    auto rows = j.at("rows").get<std::vector<std::vector<std::int64_t>>>();
    Pattern p = Pattern::make(m, std::move(rows));
    if (j.contains("n") && get_int(j, "n") != static_cast<std::int64_t>(p.n()))
        throw StructuralError("pattern JSON: n does not match the row count");
    if (j.contains("l") && get_int(j, "l") != static_cast<std::int64_t>(p.l()))
        throw StructuralError("pattern JSON: l does not match the row length");
    return p;
}

json to_json(const SearchOutcome &o) {
    json region{{"n", o.n}, {"m", o.m}, {"l_min", o.l_min}, {"l_max", o.l_max}};
    if (o.m == 0)
        region["entry_bound"] = o.entry_bound;
    json out{{"status", to_string(o.status)}, {"nodes", o.nodes}, {"region", region}, {"l_reached", o.l_reached}};
    if (o.pattern) {
        out["pattern"] = to_json(*o.pattern);
        out["signature"] = is_adequate(*o.pattern).signature;
    }
    else {
        out["pattern"] = nullptr;
    }
    return out;
}

json to_json(const BranchSet &x) {
    json out = json::array();
    for (const auto &b : x.elems())
        out.push_back(b.str());
    return out;
}

BranchSet branch_set_from_json(const json &j) {
    if (!j.is_array())
        throw StructuralError("branch set JSON must be an array of 0/1 strings");
    std::vector<BinaryBranch> elems;
    for (const auto &b : j) {
        if (!b.is_string())
            throw StructuralError("branch must be a string");
        elems.push_back(BinaryBranch::parse(b.get<std::string>()));
    }
    return BranchSet::make(std::move(elems));
}

} // namespace pforge
