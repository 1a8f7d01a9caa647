#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oklab/errors.hpp"
#include "oklab/exponent.hpp"

namespace oklab {

enum class Ordering { Less, Equal, Greater };

enum class OrderKind { Lex, Deglex, Weight };

/// An additive total order on N^n: lexicographic, degree-lexicographic, or a
/// weight-vector order. Weight orders break dot-product ties lexicographically
/// so that the result is a genuine total order (elimination needs totality).
struct OrderSpec {
    OrderKind kind = OrderKind::Lex;
    std::vector<std::int64_t> weight; // used iff kind == Weight; entries > 0

    static OrderSpec lex() { return {OrderKind::Lex, {}}; }
    static OrderSpec deglex() { return {OrderKind::Deglex, {}}; }
    static OrderSpec weighted(std::vector<std::int64_t> w) {
        for (auto v : w)
            if (v <= 0) throw InputError("weight order requires strictly positive entries");
        if (w.empty()) throw InputError("weight order requires a nonempty weight vector");
        return {OrderKind::Weight, std::move(w)};
    }
};

namespace detail {
inline Ordering lex_compare(const Exponent& a, const Exponent& b) {
    for (int i = 0; i < a.dim(); ++i) {
        if (a[i] < b[i]) return Ordering::Less;
        if (a[i] > b[i]) return Ordering::Greater;
    }
    return Ordering::Equal;
}
} // namespace detail

inline Ordering compare(const OrderSpec& order, const Exponent& a, const Exponent& b) {
    if (a.dim() != b.dim()) throw InputError("compare: exponent dimension mismatch");
    switch (order.kind) {
    case OrderKind::Lex:
        return detail::lex_compare(a, b);
    case OrderKind::Deglex: {
        const int da = a.total_degree(), db = b.total_degree();
        if (da != db) return da < db ? Ordering::Less : Ordering::Greater;
        return detail::lex_compare(a, b);
    }
    case OrderKind::Weight: {
        if (static_cast<int>(order.weight.size()) != a.dim())
            throw InputError("compare: weight dimension mismatch");
        const std::int64_t wa = a.dot(order.weight), wb = b.dot(order.weight);
        if (wa != wb) return wa < wb ? Ordering::Less : Ordering::Greater;
        return detail::lex_compare(a, b);
    }
    }
    throw InputError("compare: unknown order kind");
}

inline bool less(const OrderSpec& order, const Exponent& a, const Exponent& b) {
    return compare(order, a, b) == Ordering::Less;
}

/// Smallest C with C > |alpha| for every alpha in A.
inline std::int64_t separating_degree_bound(std::span<const Exponent> A) {
    if (A.empty()) throw InputError("separating weight of an empty exponent set");
    int maxdeg = 0;
    for (const auto& a : A) maxdeg = std::max(maxdeg, a.total_degree());
    return static_cast<std::int64_t>(maxdeg) + 1;
}

/// Weight vector gamma with: alpha in A, alpha < beta in N^n (under `base`)
/// implies alpha.gamma < beta.gamma.
///
/// For the lex order this is gamma_i = (2C)^(n-i) with C = 1 + max|alpha|.
/// That chain of inequalities compares coordinates left to right, so for the
/// degree-first and weight-first orders the same lex vector is added on top of
/// a dominant multiple of the leading comparison key (total degree resp. the
/// weight vector); the multiplier C(2C)^(n-1) strictly exceeds the largest
/// possible lex-part deficit over A.
inline std::vector<std::int64_t> separating_weight(const OrderSpec& base,
                                                   std::span<const Exponent> A) {
    const std::int64_t C = separating_degree_bound(A);
    const int n = A.front().dim();
    for (const auto& a : A)
        if (a.dim() != n) throw InputError("separating_weight: mixed dimensions");

    std::vector<std::int64_t> lex_part(static_cast<std::size_t>(n));
    std::int64_t p = 1;
    for (int i = n - 1; i >= 0; --i) {
        lex_part[static_cast<std::size_t>(i)] = p;
        p *= 2 * C;
    }
    const std::int64_t dominant = C * lex_part[0]; // C * (2C)^(n-1)

    std::vector<std::int64_t> gamma = lex_part;
    switch (base.kind) {
    case OrderKind::Lex:
        break;
    case OrderKind::Deglex:
        for (auto& g : gamma) g += dominant;
        break;
    case OrderKind::Weight: {
        if (static_cast<int>(base.weight.size()) != n)
            throw InputError("separating_weight: weight dimension mismatch");
        for (int i = 0; i < n; ++i)
            gamma[static_cast<std::size_t>(i)] += dominant * base.weight[static_cast<std::size_t>(i)];
        break;
    }
    }
    return gamma;
}

/// Exhaustive check of the separation property over the box [0,B]^n:
/// for all alpha in A and beta in the box, alpha < beta under `base`
/// implies alpha.gamma < beta.gamma. False is a valid result.
inline bool verify_separation(const OrderSpec& base, std::span<const Exponent> A,
                              std::span<const std::int64_t> gamma, int box_bound) {
    if (A.empty()) throw InputError("verify_separation: empty exponent set");
    const int n = A.front().dim();
    if (static_cast<int>(gamma.size()) != n)
        throw InputError("verify_separation: gamma dimension mismatch");
    for (const auto& a : A) {
        if (a.dim() != n) throw InputError("verify_separation: mixed dimensions");
        for (int i = 0; i < n; ++i)
            if (a[i] > box_bound) throw InputError("verify_separation: box bound below A");
    }

    const bool weighted = base.kind == OrderKind::Weight;
    if (weighted && static_cast<int>(base.weight.size()) != n)
        throw InputError("verify_separation: weight dimension mismatch");

    std::vector<std::int64_t> adot(A.size()), akey(A.size());
    std::vector<int> adeg(A.size());
    for (std::size_t j = 0; j < A.size(); ++j) {
        adot[j] = A[j].dot(gamma);
        adeg[j] = A[j].total_degree();
        if (weighted) akey[j] = A[j].dot(base.weight);
    }

    // odometer over [0,B]^n with running gamma.beta, |beta| and weight.beta
    std::vector<int> beta(static_cast<std::size_t>(n), 0);
    std::int64_t bdot = 0, bkey = 0;
    int bdeg = 0;
    auto lex_less = [&](const Exponent& a) {
        for (int i = 0; i < n; ++i) {
            if (a[i] != beta[static_cast<std::size_t>(i)])
                return a[i] < beta[static_cast<std::size_t>(i)];
        }
        return false;
    };
    for (;;) {
        for (std::size_t j = 0; j < A.size(); ++j) {
            if (adot[j] < bdot) continue; // cannot violate
            bool a_less;
            switch (base.kind) {
            case OrderKind::Lex:
                a_less = lex_less(A[j]);
                break;
            case OrderKind::Deglex:
                a_less = adeg[j] != bdeg ? adeg[j] < bdeg : lex_less(A[j]);
                break;
            default:
                a_less = akey[j] != bkey ? akey[j] < bkey : lex_less(A[j]);
                break;
            }
            if (a_less) return false; // alpha < beta but gamma fails to separate
        }
        int i = n - 1;
        for (; i >= 0; --i) {
            auto& bi = beta[static_cast<std::size_t>(i)];
            if (bi < box_bound) {
                ++bi;
                bdot += gamma[static_cast<std::size_t>(i)];
                ++bdeg;
                if (weighted) bkey += base.weight[static_cast<std::size_t>(i)];
                break;
            }
            bdot -= gamma[static_cast<std::size_t>(i)] * bi;
            bdeg -= bi;
            if (weighted) bkey -= base.weight[static_cast<std::size_t>(i)] * bi;
            bi = 0;
        }
        if (i < 0) return true;
    }
}

/// Serialized order spec: "lex", "deglex", "weight:4,1".
inline std::string format_order(const OrderSpec& o) {
    switch (o.kind) {
    case OrderKind::Lex: return "lex";
    case OrderKind::Deglex: return "deglex";
    case OrderKind::Weight: {
        std::string s = "weight:";
        for (std::size_t i = 0; i < o.weight.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(o.weight[i]);
        }
        return s;
    }
    }
    return "lex";
}

inline OrderSpec parse_order(std::string_view text) {
    if (text == "lex") return OrderSpec::lex();
    if (text == "deglex") return OrderSpec::deglex();
    constexpr std::string_view prefix = "weight:";
    if (text.substr(0, prefix.size()) == prefix) {
        std::vector<std::int64_t> w;
        std::string_view rest = text.substr(prefix.size());
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string_view tok = rest.substr(0, comma);
            try {
                w.push_back(std::stoll(std::string(tok)));
            } catch (const std::exception&) {
                throw InputError("bad weight entry: " + std::string(tok));
            }
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        return OrderSpec::weighted(std::move(w));
    }
    throw InputError("unknown order spec: " + std::string(text) +
                     " (expected lex, deglex, or weight:<w1,...,wn>)");
}

} // namespace oklab
