#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

namespace floergrid {

// Exact element of (1/2)Z, stored as twice its value.
class HalfInt {
public:
    constexpr HalfInt() = default;
    constexpr HalfInt(int v) : twice_(2 * static_cast<std::int64_t>(v)) {}

    static constexpr HalfInt from_twice(std::int64_t t) {
        HalfInt h;
        h.twice_ = t;
        return h;
    }

    constexpr std::int64_t twice() const { return twice_; }
    constexpr bool is_integer() const { return twice_ % 2 == 0; }

    std::int64_t to_int() const {
        if (!is_integer()) throw std::domain_error("half-integer is not integral: " + str());
        return twice_ / 2;
    }

    std::string str() const {
        if (is_integer()) return std::to_string(twice_ / 2);
        return std::to_string(twice_) + "/2";
    }

    constexpr HalfInt operator-() const { return from_twice(-twice_); }
    constexpr HalfInt& operator+=(HalfInt o) { twice_ += o.twice_; return *this; }
    constexpr HalfInt& operator-=(HalfInt o) { twice_ -= o.twice_; return *this; }
    friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return a += b; }
    friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return a -= b; }
    friend constexpr HalfInt operator*(int k, HalfInt a) { return from_twice(k * a.twice_); }
    friend constexpr auto operator<=>(HalfInt, HalfInt) = default;
    friend constexpr bool operator==(HalfInt, HalfInt) = default;

    friend std::ostream& operator<<(std::ostream& os, HalfInt h) { return os << h.str(); }

private:
    std::int64_t twice_ = 0;
};

inline HalfInt parse_half_int(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return HalfInt(std::stoi(s));
        if (s.substr(slash + 1) != "2") throw std::invalid_argument(s);
        return HalfInt::from_twice(std::stoll(s.substr(0, slash)));
    } catch (const std::logic_error&) {
        throw std::invalid_argument("not a half-integer: " + s);
    }
}

} // namespace floergrid
