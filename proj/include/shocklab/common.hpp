#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace shocklab {

using i32 = std::int32_t;
using i64 = std::int64_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;

struct Point {
    i64 x = 0;
    i64 y = 0;
    friend bool operator==(const Point&, const Point&) = default;
};

// a >= b componentwise, i.e. b can reach a along an up-right path
inline bool reaches(Point from, Point to) { return to.x >= from.x && to.y >= from.y; }

class InvalidParameter : public std::invalid_argument {
public:
    explicit InvalidParameter(const std::string& what) : std::invalid_argument(what) {}
};

class WindowOverflow : public std::runtime_error {
public:
    explicit WindowOverflow(const std::string& what) : std::runtime_error(what) {}
};

class DegenerateTie : public std::runtime_error {
public:
    explicit DegenerateTie(const std::string& what) : std::runtime_error(what) {}
};

class InsufficientHorizon : public std::runtime_error {
public:
    explicit InsufficientHorizon(const std::string& what) : std::runtime_error(what) {}
};

class ContractViolation : public std::logic_error {
public:
    explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

// floor(q) where q is an exact rational evaluated in doubles; values within a
// relative 1e-9 of an integer snap to it so that rational densities like 0.75
// give the same lattice sites regardless of rounding direction.
inline i64 snapped_floor(double q) {
    double r = std::nearbyint(q);
    if (std::fabs(q - r) <= 1e-9 * (1.0 + std::fabs(q))) return static_cast<i64>(r);
    return static_cast<i64>(std::floor(q));
}

inline i64 snapped_ceil(double q) {
    double r = std::nearbyint(q);
    if (std::fabs(q - r) <= 1e-9 * (1.0 + std::fabs(q))) return static_cast<i64>(r);
    return static_cast<i64>(std::ceil(q));
}

}  // namespace shocklab
