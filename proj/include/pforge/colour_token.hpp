#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

namespace pforge {

using Scalar = mpq_class;

/// Structured colour value; the common codomain of every colouring.
///
/// Tokens compare structurally. Within one colouring's codomain two tokens
/// are equal exactly when their canonical JSON strings are byte-identical.
class ColourToken {
  public:
    struct Int {
        Scalar value; // integer-valued except for sum_squares over rationals
        bool operator==(const Int &) const = default;
    };
    struct Seq {
        std::vector<Scalar> entries;
        bool operator==(const Seq &) const = default;
    };
    struct Matrix {
        std::size_t size = 0;
        // Row-major; nullopt is the diagonal sentinel TOP.
        std::vector<std::optional<std::uint32_t>> entries;
        bool operator==(const Matrix &) const = default;
    };
    struct Tuple {
        std::vector<ColourToken> items;
        bool operator==(const Tuple &) const;
    };
    struct Bit {
        int value = 0;
        bool operator==(const Bit &) const = default;
    };

    using Value = std::variant<Int, Seq, Matrix, Tuple, Bit>;

    ColourToken() : value_(Bit{0}) {}
    ColourToken(Value v) : value_(std::move(v)) {}

    static ColourToken integer(Scalar v) { return ColourToken(Int{std::move(v)}); }
    static ColourToken seq(std::vector<Scalar> e) { return ColourToken(Seq{std::move(e)}); }
    static ColourToken bit(int b) { return ColourToken(Bit{b ? 1 : 0}); }
    static ColourToken tuple(std::vector<ColourToken> items) { return ColourToken(Tuple{std::move(items)}); }

    const Value &value() const { return value_; }

    template <class T> bool holds() const { return std::holds_alternative<T>(value_); }
    template <class T> const T &as() const { return std::get<T>(value_); }

    bool operator==(const ColourToken &other) const { return value_ == other.value_; }
    bool operator!=(const ColourToken &other) const { return !(*this == other); }

    // Total order on tokens, used for colour-id tables. Not semantically meaningful.
    bool operator<(const ColourToken &other) const { return canonical() < other.canonical(); }

    nlohmann::json to_json() const;
    // Compact JSON, no whitespace. This is the hashing form.
    std::string canonical() const;

  private:
    Value value_;
};

// Integers as JSON numbers (strings when they overflow int64), others as [num,den].
nlohmann::json scalar_to_json(const Scalar &s);

} // namespace pforge
