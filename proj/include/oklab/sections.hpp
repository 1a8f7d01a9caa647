#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "oklab/errors.hpp"
#include "oklab/order.hpp"
#include "oklab/polysection.hpp"
#include "oklab/polytope.hpp"

namespace oklab {

/// A space of polynomial sections at tensor power `level`, spanned by `basis`.
struct SectionSpace {
    int dim_ambient = 0;
    int level = 1;
    std::vector<PolySection> basis;
};

/// The set A(kL) of leading exponents together with the distinguished basis
/// s_alpha = z^alpha + (tail supported off A(kL) at exponents above alpha).
/// `exponents` and `distinguished` are index-aligned, sorted ascending in the
/// order that produced them.
struct LeadingSet {
    int level = 1;
    OrderSpec order;
    std::vector<Exponent> exponents;
    std::vector<PolySection> distinguished;

    const PolySection& section_for(const Exponent& e) const {
        for (std::size_t i = 0; i < exponents.size(); ++i)
            if (exponents[i] == e) return distinguished[i];
        throw InputError("no distinguished section for exponent " + e.str());
    }
};

/// Column-sorted Gauss-Jordan over the rationals. The pivots are exactly the
/// valuations of the space; a dependent input element is reported by index.
inline LeadingSet eliminate(const OrderSpec& order, const SectionSpace& space) {
    if (space.basis.empty()) throw InputError("eliminate: empty basis");
    std::vector<PolySection> rows;
    std::vector<Exponent> pivots;
    std::map<Exponent, std::size_t> pivot_row; // plain-lex keyed lookup

    for (std::size_t input = 0; input < space.basis.size(); ++input) {
        PolySection v = space.basis[input];
        if (v.dim() != 0 && v.dim() != space.dim_ambient)
            throw InputError("eliminate: basis element of wrong dimension");
        for (;;) {
            if (v.is_zero())
                throw DependentBasisError(input, "basis element " + std::to_string(input + 1) +
                                                     " is linearly dependent on earlier elements");
            const Exponent m = v.valuation(order);
            auto it = pivot_row.find(m);
            if (it == pivot_row.end()) {
                // clear every other pivot exponent from the tail, then commit
                std::vector<std::pair<Exponent, Rat>> hits;
                for (const auto& [e, c] : v.terms())
                    if (pivot_row.count(e) && !(e == m)) hits.emplace_back(e, c);
                for (const auto& [e, c] : hits) v -= c * rows[pivot_row.at(e)];
                v.scale(Rat(1) / v.coeff(m));
                const std::size_t row_id = rows.size();
                for (std::size_t r = 0; r < rows.size(); ++r) {
                    const Rat c = rows[r].coeff(m);
                    if (c != 0) rows[r] -= c * v;
                }
                rows.push_back(std::move(v));
                pivots.push_back(m);
                pivot_row.emplace(m, row_id);
                break;
            }
            v -= v.coeff(m) * rows[it->second];
        }
    }

    std::vector<std::size_t> perm(rows.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
        return less(order, pivots[a], pivots[b]);
    });

    LeadingSet out;
    out.level = space.level;
    out.order = order;
    for (std::size_t i : perm) {
        out.exponents.push_back(pivots[i]);
        out.distinguished.push_back(rows[i]);
    }
    return out;
}

/// An invertible polynomial coordinate change: `forward[i]` writes the old
/// coordinate z_i as a polynomial in the new coordinates w, `inverse[i]`
/// writes w_i in terms of z. Both compositions are verified to be the
/// identity exactly (polynomial maps with polynomial inverses compose
/// without truncation).
struct CoordinateChange {
    std::vector<PolySection> forward;
    std::vector<PolySection> inverse;

    int dim() const { return static_cast<int>(forward.size()); }

    void verify() const {
        const int n = dim();
        if (static_cast<int>(inverse.size()) != n)
            throw InputError("coordinate change: forward/inverse arity mismatch");
        for (int i = 0; i < n; ++i) {
            // z_i(w(z)) must equal z_i, and w_i(z(w)) must equal w_i
            const PolySection zi = forward[static_cast<std::size_t>(i)].substitute(inverse);
            if (!(zi == PolySection::monomial(unit_exponent(n, i))))
                throw InputError("coordinate change is not invertible: z_" + std::to_string(i + 1) +
                                 " fails the composition check");
            const PolySection wi = inverse[static_cast<std::size_t>(i)].substitute(forward);
            if (!(wi == PolySection::monomial(unit_exponent(n, i))))
                throw InputError("coordinate change is not invertible: w_" + std::to_string(i + 1) +
                                 " fails the composition check");
        }
    }

    static Exponent unit_exponent(int n, int i) {
        std::vector<int> c(static_cast<std::size_t>(n), 0);
        c[static_cast<std::size_t>(i)] = 1;
        return Exponent(std::move(c));
    }

    static CoordinateChange identity(int n) {
        CoordinateChange cc;
        for (int i = 0; i < n; ++i) {
            cc.forward.push_back(PolySection::monomial(unit_exponent(n, i)));
            cc.inverse.push_back(PolySection::monomial(unit_exponent(n, i)));
        }
        return cc;
    }
};

/// Rewrites every basis element in the new coordinates.
inline SectionSpace change_coordinates(const SectionSpace& space, const CoordinateChange& map) {
    if (map.dim() != space.dim_ambient)
        throw InputError("change_coordinates: dimension mismatch");
    map.verify();
    SectionSpace out;
    out.dim_ambient = space.dim_ambient;
    out.level = space.level;
    for (const auto& s : space.basis) out.basis.push_back(s.substitute(map.forward));
    return out;
}

// ---------------------------------------------------------------------------
// Built-in models

enum class ModelFamily { ProjectiveSpace, Toric, Curve, Custom };

/// Description of a section-space model: which family, its numeric data, and
/// an optional flag chart (polynomial coordinate change applied to the basis).
struct ModelSpec {
    ModelFamily family = ModelFamily::Curve;
    int n = 1;                      // ambient dimension (ProjectiveSpace)
    int degree = 1;                 // d (ProjectiveSpace, Curve)
    std::vector<std::vector<int>> toric_vertices; // lattice polytope (Toric)
    std::string custom_path;        // section-space file (Custom)
    std::optional<CoordinateChange> chart;

    static ModelSpec projective_space(int n, int d) {
        if (n < 1 || n > 4 || d < 1) throw InputError("projective_space requires 1<=n<=4, d>=1");
        ModelSpec m;
        m.family = ModelFamily::ProjectiveSpace;
        m.n = n;
        m.degree = d;
        return m;
    }

    static ModelSpec curve(int d) {
        if (d < 1) throw InputError("curve requires d >= 1");
        ModelSpec m;
        m.family = ModelFamily::Curve;
        m.degree = d;
        m.n = 1;
        return m;
    }

    static ModelSpec toric(std::vector<std::vector<int>> vertices) {
        if (vertices.empty()) throw InputError("toric model requires polytope vertices");
        ModelSpec m;
        m.family = ModelFamily::Toric;
        m.toric_vertices = std::move(vertices);
        m.n = static_cast<int>(m.toric_vertices.front().size());
        return m;
    }

    static ModelSpec custom(std::string path) {
        ModelSpec m;
        m.family = ModelFamily::Custom;
        m.custom_path = std::move(path);
        return m;
    }

    /// Self-intersection number (L^n) when the family knows it.
    std::optional<Int> intersection_number() const;
};

/// All lattice points of the polytope with the given integer vertices,
/// enumerated over the bounding box and filtered by the exact facet form.
inline std::vector<Exponent> lattice_points(const std::vector<std::vector<int>>& verts) {
    if (verts.empty()) throw InputError("lattice_points: no vertices");
    const int n = static_cast<int>(verts.front().size());
    std::vector<RatVec> pts;
    for (const auto& v : verts) {
        if (static_cast<int>(v.size()) != n) throw InputError("lattice polytope: mixed dimensions");
        RatVec p;
        for (int c : v) {
            if (c < 0) throw InputError("lattice polytope must lie in the nonnegative orthant");
            p.push_back(Rat(c));
        }
        pts.push_back(std::move(p));
    }
    const RatPolytope P = convex_hull(pts);
    std::vector<int> lo(static_cast<std::size_t>(n), 0), hi(static_cast<std::size_t>(n), 0);
    for (const auto& v : verts)
        for (int i = 0; i < n; ++i) {
            lo[static_cast<std::size_t>(i)] = std::min(lo[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(i)]);
            hi[static_cast<std::size_t>(i)] = std::max(hi[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(i)]);
        }
    std::vector<Exponent> out;
    std::vector<int> cur = lo;
    for (;;) {
        RatVec x;
        for (int c : cur) x.push_back(Rat(c));
        if (P.contains(x)) out.push_back(Exponent(cur));
        int i = n - 1;
        for (; i >= 0; --i) {
            if (cur[static_cast<std::size_t>(i)] < hi[static_cast<std::size_t>(i)]) {
                ++cur[static_cast<std::size_t>(i)];
                break;
            }
            cur[static_cast<std::size_t>(i)] = lo[static_cast<std::size_t>(i)];
        }
        if (i < 0) break;
    }
    return out;
}

namespace modeldetail {

/// Flag vertex convention for toric models: the lexicographically smallest
/// vertex is translated to the origin; the translated polytope must stay in
/// the nonnegative orthant for the chart to make sense.
inline std::vector<int> toric_flag_vertex(const std::vector<std::vector<int>>& verts) {
    std::vector<int> best = verts.front();
    for (const auto& v : verts) best = std::min(best, v);
    return best;
}

inline std::vector<Exponent> monomials_up_to_degree(int n, int maxdeg) {
    std::vector<Exponent> out;
    std::vector<int> cur(static_cast<std::size_t>(n), 0);
    for (;;) {
        int deg = 0;
        for (int v : cur) deg += v;
        if (deg <= maxdeg) out.push_back(Exponent(cur));
        int i = n - 1;
        for (; i >= 0; --i) {
            if (cur[static_cast<std::size_t>(i)] < maxdeg) {
                ++cur[static_cast<std::size_t>(i)];
                break;
            }
            cur[static_cast<std::size_t>(i)] = 0;
        }
        if (i < 0) break;
    }
    return out;
}

} // namespace modeldetail

SectionSpace parse_section_space(std::string_view text); // defined below

inline SectionSpace load_section_space(const std::string& path);

/// Basis of H^0(X, kL) in the affine flag chart for the built-in models.
inline SectionSpace model_sections(const ModelSpec& model, int k) {
    if (k < 1) throw InputError("model_sections requires k >= 1");
    SectionSpace out;
    out.level = k;
    switch (model.family) {
    case ModelFamily::ProjectiveSpace: {
        out.dim_ambient = model.n;
        for (auto& e : modeldetail::monomials_up_to_degree(model.n, k * model.degree))
            out.basis.push_back(PolySection::monomial(std::move(e)));
        break;
    }
    case ModelFamily::Curve: {
        out.dim_ambient = 1;
        for (int j = 0; j <= k * model.degree; ++j)
            out.basis.push_back(PolySection::monomial(Exponent{j}));
        break;
    }
    case ModelFamily::Toric: {
        const auto flag = modeldetail::toric_flag_vertex(model.toric_vertices);
        const int n = static_cast<int>(flag.size());
        out.dim_ambient = n;
        std::vector<std::vector<int>> scaled;
        for (const auto& v : model.toric_vertices) {
            std::vector<int> s(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) {
                s[i] = k * (v[i] - flag[i]);
                if (s[i] < 0)
                    throw InputError(
                        "toric polytope does not sit in the orthant at its lex-smallest vertex");
            }
            scaled.push_back(std::move(s));
        }
        for (auto& e : lattice_points(scaled)) out.basis.push_back(PolySection::monomial(std::move(e)));
        break;
    }
    case ModelFamily::Custom: {
        out = load_section_space(model.custom_path);
        if (out.level != k)
            throw InputError("custom section file has level " + std::to_string(out.level) +
                             ", requested k=" + std::to_string(k));
        break;
    }
    }
    if (model.chart) return change_coordinates(out, *model.chart);
    return out;
}

inline std::optional<Int> ModelSpec::intersection_number() const {
    switch (family) {
    case ModelFamily::ProjectiveSpace:
        return int_pow(Int(degree), static_cast<unsigned>(n));
    case ModelFamily::Curve:
        return Int(degree);
    case ModelFamily::Toric: {
        std::vector<RatVec> pts;
        for (const auto& v : toric_vertices) {
            RatVec p;
            for (int c : v) p.push_back(Rat(c));
            pts.push_back(std::move(p));
        }
        const RatPolytope P = convex_hull(pts);
        Rat f = 1;
        for (int i = 2; i <= n; ++i) f *= i;
        const Rat vol = P.volume() * f; // n! vol is an integer for lattice polytopes
        return rat_num(vol) / rat_den(vol);
    }
    case ModelFamily::Custom:
        return std::nullopt;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Body of the graded pieces

/// Delta_k = (1/k) Conv(A(kL)).
inline RatPolytope delta_k(const LeadingSet& lead) {
    if (lead.exponents.empty()) throw InputError("delta_k of an empty leading set");
    std::vector<RatVec> pts;
    for (const auto& e : lead.exponents) {
        RatVec p;
        for (int i = 0; i < e.dim(); ++i) p.push_back(Rat(e[i], lead.level));
        pts.push_back(std::move(p));
    }
    return convex_hull(std::move(pts));
}

// ---------------------------------------------------------------------------
// Section-space file format (text, line oriented):
//   header "n=<dim> k=<level>", then one section per line as ";"-separated
//   terms "e1,...,en:num/den", terms sorted by lex. Emission is byte-stable.

inline std::string emit_section_space(const SectionSpace& space) {
    std::string out = "n=" + std::to_string(space.dim_ambient) +
                      " k=" + std::to_string(space.level) + "\n";
    for (const auto& s : space.basis) out += s.format() + "\n";
    return out;
}

inline SectionSpace parse_section_space(std::string_view text) {
    SectionSpace space;
    std::size_t pos = 0;
    bool header_done = false;
    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (line.empty() || line.front() == '#') continue;
        if (!header_done) {
            std::istringstream hs{std::string(line)};
            std::string tok;
            bool have_n = false, have_k = false;
            while (hs >> tok) {
                if (tok.rfind("n=", 0) == 0) {
                    space.dim_ambient = std::stoi(tok.substr(2));
                    have_n = true;
                } else if (tok.rfind("k=", 0) == 0) {
                    space.level = std::stoi(tok.substr(2));
                    have_k = true;
                } else if (tok.rfind("trunc", 0) == 0) {
                    throw InputError("truncated section spaces are not supported; "
                                     "supply exact polynomial sections");
                } else {
                    throw InputError("unknown section-space header field: " + tok);
                }
            }
            if (!have_n || !have_k) throw InputError("section-space header must carry n= and k=");
            if (space.dim_ambient < 1 || space.level < 1)
                throw InputError("section-space header values must be positive");
            header_done = true;
            continue;
        }
        space.basis.push_back(PolySection::parse(space.dim_ambient, line));
    }
    if (!header_done) throw InputError("section-space file has no header");
    if (space.basis.empty()) throw InputError("section-space file has no sections");
    return space;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline SectionSpace load_section_space(const std::string& path) {
    return parse_section_space(read_text_file(path));
}

} // namespace oklab
