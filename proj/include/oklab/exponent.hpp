#pragma once

#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "oklab/errors.hpp"

namespace oklab {

/// A lattice point of N^n: the valuation values and semigroup elements the
/// whole library is built from. Coordinates are nonnegative by invariant.
class Exponent {
public:
    Exponent() = default;

    explicit Exponent(std::vector<int> coords) : c_(std::move(coords)) {
        for (int v : c_)
            if (v < 0) throw InputError("exponent with negative coordinate");
    }

    Exponent(std::initializer_list<int> coords) : Exponent(std::vector<int>(coords)) {}

    static Exponent zero(int n) { return Exponent(std::vector<int>(static_cast<std::size_t>(n), 0)); }

    int dim() const { return static_cast<int>(c_.size()); }
    int operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& coords() const { return c_; }

    int total_degree() const { return std::accumulate(c_.begin(), c_.end(), 0); }

    Exponent operator+(const Exponent& o) const {
        require_same_dim(o);
        std::vector<int> r(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) r[i] = c_[i] + o.c_[i];
        return Exponent(std::move(r));
    }

    /// Componentwise difference; errors if any coordinate would go negative.
    Exponent minus(const Exponent& o) const {
        require_same_dim(o);
        std::vector<int> r(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) {
            r[i] = c_[i] - o.c_[i];
            if (r[i] < 0) throw InputError("exponent difference leaves N^n");
        }
        return Exponent(std::move(r));
    }

    std::int64_t dot(std::span<const std::int64_t> w) const {
        if (w.size() != c_.size()) throw InputError("weight dimension mismatch");
        std::int64_t s = 0;
        for (std::size_t i = 0; i < c_.size(); ++i) s += w[i] * c_[i];
        return s;
    }

    bool operator==(const Exponent& o) const { return c_ == o.c_; }
    bool operator!=(const Exponent& o) const { return c_ != o.c_; }
    /// Plain lexicographic comparison; used for container keys and
    /// byte-stable file output independently of any session order.
    bool operator<(const Exponent& o) const { return c_ < o.c_; }

    std::string str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(c_[i]);
        }
        return s + ")";
    }

private:
    void require_same_dim(const Exponent& o) const {
        if (c_.size() != o.c_.size()) throw InputError("exponent dimension mismatch");
    }

    std::vector<int> c_;
};

} // namespace oklab
