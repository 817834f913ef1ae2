#include "pforge/colour_token.hpp"

#include <limits>

namespace pforge {

namespace {

nlohmann::json integer_to_json(const mpz_class &z) {
    if (z.fits_slong_p())
        return static_cast<std::int64_t>(z.get_si());
    return z.get_str();
}

} // namespace

nlohmann::json scalar_to_json(const Scalar &s) {
    if (s.get_den() == 1)
        return integer_to_json(s.get_num());
    return nlohmann::json::array({integer_to_json(s.get_num()), integer_to_json(s.get_den())});
}

bool ColourToken::Tuple::operator==(const Tuple &other) const {
    return items == other.items;
}

nlohmann::json ColourToken::to_json() const {
    return std::visit(
        [](const auto &v) -> nlohmann::json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Int>) {
                return scalar_to_json(v.value);
            }
            else if constexpr (std::is_same_v<T, Seq>) {
                auto out = nlohmann::json::array();
                for (const auto &e : v.entries)
                    out.push_back(scalar_to_json(e));
                return out;
            }
            else if constexpr (std::is_same_v<T, Matrix>) {
                auto out = nlohmann::json::array();
                for (std::size_t i = 0; i < v.size; ++i) {
                    auto row = nlohmann::json::array();
                    for (std::size_t j = 0; j < v.size; ++j) {
                        const auto &e = v.entries[i * v.size + j];
                        if (e)
                            row.push_back(*e);
                        else
                            row.push_back("TOP");
                    }
                    out.push_back(std::move(row));
                }
                return out;
            }
            else if constexpr (std::is_same_v<T, Tuple>) {
                auto out = nlohmann::json::array();
                for (const auto &item : v.items)
                    out.push_back(item.to_json());
                return out;
            }
            else {
                return v.value;
            }
        },
        value_);
}

std::string ColourToken::canonical() const {
    return to_json().dump();
}

} // namespace pforge
