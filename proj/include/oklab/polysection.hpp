#pragma once

#include <complex>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "oklab/errors.hpp"
#include "oklab/exponent.hpp"
#include "oklab/order.hpp"
#include "oklab/rational.hpp"

namespace oklab {

/// A polynomial "section" in flag-adapted coordinates: a finite map from
/// exponents to exact rational coefficients. Zero coefficients are never
/// stored; the term map is keyed by plain lex so iteration (and file output)
/// is deterministic regardless of the session order.
class PolySection {
public:
    PolySection() = default;
    explicit PolySection(int dim) : n_(dim) {}

    static PolySection monomial(Exponent e, Rat coeff = Rat(1)) {
        PolySection s(e.dim());
        s.add_term(std::move(e), std::move(coeff));
        return s;
    }

    static PolySection constant(int dim, Rat c) {
        return monomial(Exponent::zero(dim), std::move(c));
    }

    int dim() const { return n_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const std::map<Exponent, Rat>& terms() const { return terms_; }

    Rat coeff(const Exponent& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    void add_term(Exponent e, Rat c) {
        if (n_ == 0) n_ = e.dim();
        if (e.dim() != n_) throw InputError("term dimension mismatch");
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            if (c != 0) terms_.emplace(std::move(e), std::move(c));
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    PolySection& operator+=(const PolySection& o) {
        check_dim(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }

    PolySection& operator-=(const PolySection& o) {
        check_dim(o);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }

    PolySection& scale(const Rat& c) {
        if (c == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, v] : terms_) v *= c;
        return *this;
    }

    friend PolySection operator+(PolySection a, const PolySection& b) { return a += b; }
    friend PolySection operator-(PolySection a, const PolySection& b) { return a -= b; }

    friend PolySection operator*(const PolySection& a, const PolySection& b) {
        a.check_dim(b);
        PolySection r(a.n_ ? a.n_ : b.n_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) r.add_term(ea + eb, ca * cb);
        return r;
    }

    friend PolySection operator*(const Rat& c, PolySection s) {
        s.scale(c);
        return s;
    }

    bool operator==(const PolySection& o) const { return terms_ == o.terms_; }

    /// Order-minimal exponent with nonzero coefficient: v(s). Errors on zero.
    Exponent valuation(const OrderSpec& order) const {
        if (is_zero()) throw InputError("valuation of the zero section");
        auto it = terms_.begin();
        Exponent best = it->first;
        for (++it; it != terms_.end(); ++it)
            if (less(order, it->first, best)) best = it->first;
        return best;
    }

    int max_total_degree() const {
        int d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, e.total_degree());
        return d;
    }

    std::complex<double> eval(std::span<const std::complex<double>> z) const {
        if (static_cast<int>(z.size()) != n_) throw InputError("eval: point dimension mismatch");
        std::complex<double> acc = 0.0;
        for (const auto& [e, c] : terms_) {
            std::complex<double> m = to_double(c);
            for (int i = 0; i < n_; ++i)
                for (int k = 0; k < e[i]; ++k) m *= z[static_cast<std::size_t>(i)];
            acc += m;
        }
        return acc;
    }

    /// Substitutes z_i -> images[i]; exact polynomial composition.
    PolySection substitute(std::span<const PolySection> images) const {
        if (static_cast<int>(images.size()) != n_)
            throw InputError("substitute: wrong number of images");
        const int out_dim = images.empty() ? n_ : images.front().dim();
        // powers[i][k] = images[i]^k, grown on demand
        std::vector<std::vector<PolySection>> powers(images.size());
        for (std::size_t i = 0; i < images.size(); ++i)
            powers[i].push_back(PolySection::constant(out_dim, 1));
        PolySection result(out_dim);
        for (const auto& [e, c] : terms_) {
            PolySection term = PolySection::constant(out_dim, c);
            for (int i = 0; i < n_; ++i) {
                auto& pw = powers[static_cast<std::size_t>(i)];
                while (static_cast<int>(pw.size()) <= e[i])
                    pw.push_back(pw.back() * images[static_cast<std::size_t>(i)]);
                term = term * pw[static_cast<std::size_t>(e[i])];
            }
            result += term;
        }
        return result;
    }

    /// Byte-stable term list "e1,...,en:num/den;...", terms sorted by lex.
    std::string format() const {
        std::string s;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            if (!first) s += ";";
            first = false;
            for (int i = 0; i < e.dim(); ++i) {
                if (i) s += ",";
                s += std::to_string(e[i]);
            }
            s += ":" + format_rat(c);
        }
        return s;
    }

    static PolySection parse(int dim, std::string_view text) {
        PolySection s(dim);
        while (!text.empty()) {
            const auto semi = text.find(';');
            std::string_view term = text.substr(0, semi);
            const auto colon = term.find(':');
            if (colon == std::string_view::npos)
                throw InputError("bad term (missing ':'): " + std::string(term));
            std::vector<int> coords;
            std::string_view elist = term.substr(0, colon);
            while (!elist.empty()) {
                const auto comma = elist.find(',');
                try {
                    coords.push_back(std::stoi(std::string(elist.substr(0, comma))));
                } catch (const std::exception&) {
                    throw InputError("bad exponent entry in term: " + std::string(term));
                }
                if (comma == std::string_view::npos) break;
                elist = elist.substr(comma + 1);
            }
            if (static_cast<int>(coords.size()) != dim)
                throw InputError("term has wrong dimension: " + std::string(term));
            s.add_term(Exponent(std::move(coords)), parse_rat(term.substr(colon + 1)));
            if (semi == std::string_view::npos) break;
            text = text.substr(semi + 1);
        }
        return s;
    }

private:
    void check_dim(const PolySection& o) const {
        if (n_ && o.n_ && n_ != o.n_) throw InputError("section dimension mismatch");
    }

    int n_ = 0;
    std::map<Exponent, Rat> terms_;
};

inline Exponent valuation(const OrderSpec& order, const PolySection& s) {
    return s.valuation(order);
}

inline PolySection multiply(const PolySection& s, const PolySection& t) { return s * t; }

} // namespace oklab
