#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "oklab/errors.hpp"
#include "oklab/linalg.hpp"
#include "oklab/rational.hpp"

namespace oklab {

/// One facet inequality normal.x <= offset. Normals are primitive integer
/// vectors (stored as rationals), so facet identity is canonical.
struct Facet {
    RatVec normal;
    Rat offset;
    std::vector<std::size_t> vertex_ids; // indices into RatPolytope::vertices()
};

namespace hulldetail {

struct SimpFacet {
    std::vector<std::size_t> ids; // exactly n point indices
    RatVec g;
    Rat c;
};

/// Normal of the hyperplane through pts[ids[0..n-1]] via cofactor expansion
/// of the (n-1) x n difference matrix. Zero vector means a degenerate simplex.
inline RatVec hyperplane_normal(const std::vector<RatVec>& pts,
                                const std::vector<std::size_t>& ids, int n) {
    std::vector<RatVec> diff;
    for (int r = 1; r < n; ++r) {
        RatVec row(static_cast<std::size_t>(n));
        for (int c = 0; c < n; ++c) row[static_cast<std::size_t>(c)] = pts[ids[static_cast<std::size_t>(r)]][static_cast<std::size_t>(c)] - pts[ids[0]][static_cast<std::size_t>(c)];
        diff.push_back(std::move(row));
    }
    RatVec normal(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        std::vector<RatVec> minor;
        for (const auto& row : diff) {
            RatVec m;
            for (int c = 0; c < n; ++c)
                if (c != j) m.push_back(row[static_cast<std::size_t>(c)]);
            minor.push_back(std::move(m));
        }
        Rat d = minor.empty() ? Rat(1) : rat_det(minor);
        normal[static_cast<std::size_t>(j)] = (j % 2 == 0) ? d : -d;
    }
    return normal;
}

inline SimpFacet make_facet(const std::vector<RatVec>& pts, std::vector<std::size_t> ids,
                            const RatVec& interior_ref, int n) {
    SimpFacet f;
    f.g = hyperplane_normal(pts, ids, n);
    bool all_zero = true;
    for (const auto& v : f.g)
        if (v != 0) all_zero = false;
    if (all_zero) throw Error("internal: degenerate facet simplex in convex hull");
    f.c = dot(f.g, pts[ids[0]]);
    const Rat side = dot(f.g, interior_ref);
    if (side > f.c) {
        for (auto& v : f.g) v = -v;
        f.c = -f.c;
    } else if (side == f.c) {
        throw Error("internal: hull reference point on a facet hyperplane");
    }
    f.ids = std::move(ids);
    return f;
}

/// Scales (g, c) to a primitive integer vector without changing orientation.
inline void canonicalize_halfspace(RatVec& g, Rat& c) {
    Int l = 1;
    for (const auto& v : g) l = boost::multiprecision::lcm(l, rat_den(v));
    l = boost::multiprecision::lcm(l, rat_den(c));
    Int gc = 0;
    std::vector<Int> ig;
    for (const auto& v : g) {
        ig.push_back(rat_num(v) * (l / rat_den(v)));
        gc = boost::multiprecision::gcd(gc, ig.back());
    }
    Int ic = rat_num(c) * (l / rat_den(c));
    gc = boost::multiprecision::gcd(gc, ic);
    if (gc == 0) gc = 1;
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = Rat(ig[i] / gc);
    c = Rat(ic / gc);
}

} // namespace hulldetail

/// A rational convex polytope in the nonnegative orthant, carrying both the
/// irredundant vertex list and (when full-dimensional) the facet description.
/// Lower-dimensional hulls are kept with volume 0 and no facet form.
class RatPolytope {
public:
    RatPolytope() = default;

    static RatPolytope empty_polytope(int ambient) {
        RatPolytope p;
        p.n_ = ambient;
        p.dim_ = -1;
        return p;
    }

    int ambient_dim() const { return n_; }
    int dim() const { return dim_; }
    bool is_empty() const { return dim_ < 0; }
    bool full_dimensional() const { return dim_ == n_ && n_ >= 1; }
    const std::vector<RatVec>& vertices() const { return vertices_; }
    const std::vector<Facet>& facets() const { return facets_; }
    const Rat& volume() const { return volume_; }

    bool contains(const RatVec& x) const {
        if (static_cast<int>(x.size()) != n_) throw InputError("contains: dimension mismatch");
        if (is_empty()) return false;
        if (full_dimensional()) {
            for (const auto& f : facets_)
                if (dot(f.normal, x) > f.offset) return false;
            return true;
        }
        return contains_degenerate(x);
    }

    bool operator==(const RatPolytope& o) const {
        return n_ == o.n_ && dim_ == o.dim_ && vertices_ == o.vertices_;
    }

    friend RatPolytope convex_hull(std::vector<RatVec> points);

private:
    bool contains_degenerate(const RatVec& x) const;

    int n_ = 0;
    int dim_ = -1;
    std::vector<RatVec> vertices_;
    std::vector<Facet> facets_;
    Rat volume_ = 0;
};

/// Exact convex hull for ambient dimension <= 4, incremental beneath-beyond
/// with rational arithmetic. Points must lie in the nonnegative orthant.
inline RatPolytope convex_hull(std::vector<RatVec> points) {
    using namespace hulldetail;
    if (points.empty()) throw InputError("convex hull of an empty point set");
    const int n = static_cast<int>(points.front().size());
    if (n < 1 || n > 4) throw InputError("convex hull supports dimensions 1 through 4");
    for (const auto& p : points) {
        if (static_cast<int>(p.size()) != n) throw InputError("convex hull: mixed dimensions");
        for (const auto& v : p)
            if (v < 0) throw InputError("convex hull: point outside the nonnegative orthant");
    }

    // dedupe
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    RatPolytope poly;
    poly.n_ = n;

    // greedy affinely independent subset; reduced holds row-reduced differences
    std::vector<std::size_t> simplex_ids{0};
    std::vector<RatVec> reduced;
    for (std::size_t i = 1; i < points.size() && reduced.size() < static_cast<std::size_t>(n); ++i) {
        RatVec d(static_cast<std::size_t>(n));
        for (int c = 0; c < n; ++c) d[static_cast<std::size_t>(c)] = points[i][static_cast<std::size_t>(c)] - points[0][static_cast<std::size_t>(c)];
        for (const auto& row : reduced) {
            std::size_t piv = 0;
            while (piv < row.size() && row[piv] == 0) ++piv;
            if (piv < row.size() && d[piv] != 0) {
                const Rat f = d[piv] / row[piv];
                for (std::size_t c = 0; c < d.size(); ++c) d[c] -= f * row[c];
            }
        }
        bool zero = true;
        for (const auto& v : d)
            if (v != 0) zero = false;
        if (!zero) {
            reduced.push_back(std::move(d));
            simplex_ids.push_back(i);
        }
    }
    const int d = static_cast<int>(reduced.size()); // affine dimension

    if (d == 0) {
        poly.dim_ = 0;
        poly.vertices_ = {points[0]};
        poly.volume_ = 0;
        return poly;
    }

    if (d < n) {
        // project onto pivot coordinates of the affine basis and recurse
        std::vector<std::size_t> piv_cols;
        {
            auto rows = reduced;
            std::size_t rank_rows = 0;
            for (std::size_t col = 0; col < rows[0].size() && rank_rows < rows.size(); ++col) {
                std::size_t piv = rank_rows;
                while (piv < rows.size() && rows[piv][col] == 0) ++piv;
                if (piv == rows.size()) continue;
                std::swap(rows[piv], rows[rank_rows]);
                for (std::size_t r = 0; r < rows.size(); ++r) {
                    if (r == rank_rows || rows[r][col] == 0) continue;
                    const Rat f = rows[r][col] / rows[rank_rows][col];
                    for (std::size_t c = col; c < rows[r].size(); ++c)
                        rows[r][c] -= f * rows[rank_rows][c];
                }
                piv_cols.push_back(col);
                ++rank_rows;
            }
        }
        std::vector<RatVec> proj(points.size());
        for (std::size_t i = 0; i < points.size(); ++i)
            for (std::size_t c : piv_cols) proj[i].push_back(points[i][c]);
        // the projection can land outside the orthant only if the original
        // points did, which was rejected above
        RatPolytope sub = convex_hull(proj);
        poly.dim_ = d;
        std::set<RatVec> subverts(sub.vertices_.begin(), sub.vertices_.end());
        for (std::size_t i = 0; i < points.size(); ++i)
            if (subverts.count(proj[i])) poly.vertices_.push_back(points[i]);
        std::sort(poly.vertices_.begin(), poly.vertices_.end());
        poly.vertices_.erase(std::unique(poly.vertices_.begin(), poly.vertices_.end()),
                             poly.vertices_.end());
        poly.volume_ = 0;
        return poly;
    }

    if (n == 1) {
        poly.dim_ = 1;
        const RatVec lo = points.front(), hi = points.back(); // points are sorted
        poly.vertices_ = {lo, hi};
        poly.facets_.push_back(Facet{{Rat(-1)}, -lo[0], {0}});
        poly.facets_.push_back(Facet{{Rat(1)}, hi[0], {1}});
        poly.volume_ = hi[0] - lo[0];
        return poly;
    }

    // full-dimensional beneath-beyond
    RatVec ref(static_cast<std::size_t>(n), Rat(0));
    for (std::size_t id : simplex_ids)
        for (int c = 0; c < n; ++c) ref[static_cast<std::size_t>(c)] += points[id][static_cast<std::size_t>(c)];
    for (int c = 0; c < n; ++c) ref[static_cast<std::size_t>(c)] /= Rat(static_cast<int>(simplex_ids.size()));

    std::vector<SimpFacet> facets;
    for (std::size_t omit = 0; omit < simplex_ids.size(); ++omit) {
        std::vector<std::size_t> ids;
        for (std::size_t i = 0; i < simplex_ids.size(); ++i)
            if (i != omit) ids.push_back(simplex_ids[i]);
        facets.push_back(make_facet(points, std::move(ids), ref, n));
    }

    std::set<std::size_t> in_simplex(simplex_ids.begin(), simplex_ids.end());
    for (std::size_t p = 0; p < points.size(); ++p) {
        if (in_simplex.count(p)) continue;
        std::vector<std::size_t> visible;
        for (std::size_t f = 0; f < facets.size(); ++f)
            if (dot(facets[f].g, points[p]) > facets[f].c) visible.push_back(f);
        if (visible.empty()) continue;

        std::map<std::vector<std::size_t>, int> ridge_count;
        for (std::size_t f : visible)
            for (std::size_t omit = 0; omit < facets[f].ids.size(); ++omit) {
                std::vector<std::size_t> ridge;
                for (std::size_t i = 0; i < facets[f].ids.size(); ++i)
                    if (i != omit) ridge.push_back(facets[f].ids[i]);
                std::sort(ridge.begin(), ridge.end());
                ++ridge_count[ridge];
            }

        std::vector<SimpFacet> next;
        std::set<std::size_t> visible_set(visible.begin(), visible.end());
        for (std::size_t f = 0; f < facets.size(); ++f)
            if (!visible_set.count(f)) next.push_back(std::move(facets[f]));
        for (const auto& [ridge, count] : ridge_count) {
            if (count != 1) continue;
            std::vector<std::size_t> ids = ridge;
            ids.push_back(p);
            next.push_back(make_facet(points, std::move(ids), ref, n));
        }
        facets = std::move(next);
    }

    // merge simplicial facets into geometric facets by canonical hyperplane
    struct Merged {
        RatVec g;
        Rat c;
        std::set<std::size_t> ids;
    };
    std::map<std::pair<RatVec, Rat>, Merged> merged;
    for (auto& f : facets) {
        RatVec g = f.g;
        Rat c = f.c;
        canonicalize_halfspace(g, c);
        auto& m = merged[{g, c}];
        m.g = g;
        m.c = c;
        m.ids.insert(f.ids.begin(), f.ids.end());
    }

    // identify true vertices: active facet normals span the ambient space
    std::set<std::size_t> candidates;
    for (const auto& [key, m] : merged) candidates.insert(m.ids.begin(), m.ids.end());
    std::set<std::size_t> vertex_ids;
    for (std::size_t id : candidates) {
        std::vector<RatVec> active;
        for (const auto& [key, m] : merged)
            if (dot(m.g, points[id]) == m.c) active.push_back(m.g);
        if (static_cast<int>(rat_rank(active)) == n) vertex_ids.insert(id);
    }

    poly.dim_ = n;
    std::map<RatVec, std::size_t> vertex_index;
    for (std::size_t id : vertex_ids) poly.vertices_.push_back(points[id]);
    std::sort(poly.vertices_.begin(), poly.vertices_.end());
    for (std::size_t i = 0; i < poly.vertices_.size(); ++i) vertex_index[poly.vertices_[i]] = i;

    for (const auto& [key, m] : merged) {
        Facet f;
        f.normal = m.g;
        f.offset = m.c;
        for (std::size_t id : m.ids)
            if (vertex_ids.count(id)) f.vertex_ids.push_back(vertex_index.at(points[id]));
        std::sort(f.vertex_ids.begin(), f.vertex_ids.end());
        poly.facets_.push_back(std::move(f));
    }
    std::sort(poly.facets_.begin(), poly.facets_.end(), [](const Facet& a, const Facet& b) {
        return std::tie(a.normal, a.offset) < std::tie(b.normal, b.offset);
    });

    // exact volume: cone the simplicial boundary over the first vertex
    const RatVec& apex = poly.vertices_.front();
    Rat vol = 0;
    for (const auto& f : facets) {
        std::vector<RatVec> rows;
        for (std::size_t id : f.ids) {
            RatVec row(static_cast<std::size_t>(n));
            for (int c = 0; c < n; ++c) row[static_cast<std::size_t>(c)] = points[id][static_cast<std::size_t>(c)] - apex[static_cast<std::size_t>(c)];
            rows.push_back(std::move(row));
        }
        Rat dv = rat_det(rows);
        if (dv < 0) dv = -dv;
        vol += dv;
    }
    Rat fact = 1;
    for (int i = 2; i <= n; ++i) fact *= i;
    poly.volume_ = vol / fact;

    // cross-validate the two descriptions
    for (const auto& p : points)
        for (const auto& f : poly.facets_)
            if (dot(f.normal, p) > f.offset)
                throw Error("internal: hull facet cuts off an input point");
    for (const auto& f : poly.facets_)
        if (static_cast<int>(f.vertex_ids.size()) < n)
            throw Error("internal: hull facet with too few vertices");
    return poly;
}

inline bool RatPolytope::contains_degenerate(const RatVec& x) const {
    // x is in the hull iff adding it changes neither dimension nor vertices
    auto pts = vertices_;
    pts.push_back(x);
    RatPolytope grown = convex_hull(std::move(pts));
    return grown.dim_ == dim_ && grown.vertices_ == vertices_;
}

/// True iff every vertex of q lies in p.
inline bool contains_polytope(const RatPolytope& p, const RatPolytope& q) {
    if (q.is_empty()) return true;
    for (const auto& v : q.vertices())
        if (!p.contains(v)) return false;
    return true;
}

/// Is this facet implied by a coordinate hyperplane (normal = -e_j, offset 0)?
inline bool is_coordinate_facet(const Facet& f) {
    if (f.offset != 0) return false;
    int nonzero = 0;
    bool neg = false;
    for (const auto& v : f.normal) {
        if (v != 0) {
            ++nonzero;
            neg = v < 0;
        }
    }
    return nonzero == 1 && neg;
}

/// Membership in the essential interior: inside the polytope, inside the
/// orthant, and strict on every facet not implied by a coordinate hyperplane.
inline bool essential_membership(const RatPolytope& p, const RatVec& x) {
    if (!p.full_dimensional())
        throw InputError("essential membership requires a full-dimensional polytope");
    if (static_cast<int>(x.size()) != p.ambient_dim())
        throw InputError("essential membership: dimension mismatch");
    for (const auto& v : x)
        if (v < 0) return false;
    for (const auto& f : p.facets()) {
        const Rat s = f.offset - dot(f.normal, x);
        if (s < 0) return false;
        if (s == 0 && !is_coordinate_facet(f)) return false;
    }
    return true;
}

/// P cut with {x_axis = value}, re-indexed into the hyperplane coordinates.
inline RatPolytope slice(const RatPolytope& p, int axis, const Rat& value) {
    const int n = p.ambient_dim();
    if (axis < 0 || axis >= n) throw InputError("slice: axis out of range");
    if (n < 2) throw InputError("slice needs ambient dimension >= 2");
    if (p.is_empty()) return RatPolytope::empty_polytope(n - 1);
    auto drop = [&](const RatVec& v) {
        RatVec r;
        for (int c = 0; c < n; ++c)
            if (c != axis) r.push_back(v[static_cast<std::size_t>(c)]);
        return r;
    };
    std::vector<RatVec> pts;
    const auto& vs = p.vertices();
    for (const auto& v : vs)
        if (v[static_cast<std::size_t>(axis)] == value) pts.push_back(drop(v));
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j) {
            const Rat a = vs[i][static_cast<std::size_t>(axis)] - value;
            const Rat b = vs[j][static_cast<std::size_t>(axis)] - value;
            if ((a < 0 && b > 0) || (a > 0 && b < 0)) {
                const Rat t = -a / (b - a);
                RatVec x(static_cast<std::size_t>(n));
                for (int c = 0; c < n; ++c)
                    x[static_cast<std::size_t>(c)] =
                        vs[i][static_cast<std::size_t>(c)] +
                        t * (vs[j][static_cast<std::size_t>(c)] - vs[i][static_cast<std::size_t>(c)]);
                pts.push_back(drop(x));
            }
        }
    if (pts.empty()) return RatPolytope::empty_polytope(n - 1);
    return convex_hull(std::move(pts));
}

/// (P cut with {x_axis >= threshold}) translated by -threshold along the axis.
inline RatPolytope shift(const RatPolytope& p, int axis, const Rat& threshold) {
    const int n = p.ambient_dim();
    if (axis < 0 || axis >= n) throw InputError("shift: axis out of range");
    if (p.is_empty()) return RatPolytope::empty_polytope(n);
    std::vector<RatVec> pts;
    const auto& vs = p.vertices();
    for (const auto& v : vs)
        if (v[static_cast<std::size_t>(axis)] >= threshold) pts.push_back(v);
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j) {
            const Rat a = vs[i][static_cast<std::size_t>(axis)] - threshold;
            const Rat b = vs[j][static_cast<std::size_t>(axis)] - threshold;
            if ((a < 0 && b > 0) || (a > 0 && b < 0)) {
                const Rat t = -a / (b - a);
                RatVec x(static_cast<std::size_t>(n));
                for (int c = 0; c < n; ++c)
                    x[static_cast<std::size_t>(c)] =
                        vs[i][static_cast<std::size_t>(c)] +
                        t * (vs[j][static_cast<std::size_t>(c)] - vs[i][static_cast<std::size_t>(c)]);
                pts.push_back(std::move(x));
            }
        }
    if (pts.empty()) return RatPolytope::empty_polytope(n);
    for (auto& x : pts) x[static_cast<std::size_t>(axis)] -= threshold;
    return convex_hull(std::move(pts));
}

/// Simplex with vertices {0, a_1 e_1, ..., a_n e_n}; all a_i > 0.
inline RatPolytope simplex_body(const RatVec& a) {
    for (const auto& v : a)
        if (v <= 0) throw InputError("simplex body requires strictly positive axis lengths");
    const int n = static_cast<int>(a.size());
    std::vector<RatVec> pts{RatVec(static_cast<std::size_t>(n), Rat(0))};
    for (int i = 0; i < n; ++i) {
        RatVec v(static_cast<std::size_t>(n), Rat(0));
        v[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)];
        pts.push_back(std::move(v));
    }
    return convex_hull(std::move(pts));
}

/// Largest t with t * (standard unit simplex) contained in P. By convexity this
/// is the supremum of r such that the squared-radius ball region
/// { sum |z_i|^2 < r } maps into the polytope's essential interior.
inline Rat seshadri_param(const RatPolytope& p) {
    if (!p.full_dimensional())
        throw InputError("seshadri parameter requires a full-dimensional polytope");
    const RatVec origin(static_cast<std::size_t>(p.ambient_dim()), Rat(0));
    if (!p.contains(origin)) return Rat(0);
    bool bound_found = false;
    Rat best = 0;
    for (const auto& f : p.facets()) {
        Rat gmax = 0;
        for (const auto& v : f.normal) gmax = std::max(gmax, v);
        if (gmax <= 0) continue; // never binds for t >= 0 (offset >= 0 since 0 is inside)
        const Rat t = f.offset / gmax;
        if (!bound_found || t < best) {
            best = t;
            bound_found = true;
        }
    }
    if (!bound_found) throw Error("internal: unbounded polytope in seshadri_param");
    return best;
}

/// mu(z) = (|z_1|^2, ..., |z_n|^2), exactly, from rational real/imag parts.
inline RatVec moment_of_point(const std::vector<std::pair<Rat, Rat>>& z) {
    RatVec mu;
    mu.reserve(z.size());
    for (const auto& [re, im] : z) mu.push_back(re * re + im * im);
    return mu;
}

/// Okounkov-domain membership: mu(z) lands in the essential interior of P.
inline bool domain_membership(const RatPolytope& p, const std::vector<std::pair<Rat, Rat>>& z) {
    return essential_membership(p, moment_of_point(z));
}

inline bool domain_membership_mu(const RatPolytope& p, const RatVec& mu) {
    return essential_membership(p, mu);
}

/// Ellipsoid E(a_1,...,a_n) membership: sum |z_i|^2 / a_i < 1. Equivalent to
/// domain membership for the simplex body of a.
inline bool ellipsoid_domain(const RatVec& a, const std::vector<std::pair<Rat, Rat>>& z) {
    if (a.size() != z.size()) throw InputError("ellipsoid: dimension mismatch");
    const RatVec mu = moment_of_point(z);
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] <= 0) throw InputError("ellipsoid requires positive axis lengths");
        s += mu[i] / a[i];
    }
    return s < 1;
}

inline bool ellipsoid_domain_mu(const RatVec& a, const RatVec& mu) {
    if (a.size() != mu.size()) throw InputError("ellipsoid: dimension mismatch");
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] <= 0) throw InputError("ellipsoid requires positive axis lengths");
        if (mu[i] < 0) return false;
        s += mu[i] / a[i];
    }
    return s < 1;
}

/// Per-level polytope chain Delta_k along a divisibility-ordered level list.
struct BodyApprox {
    std::vector<std::pair<int, RatPolytope>> levels;

    /// Checks Delta_k subset Delta_m for every stored pair with k | m.
    bool inclusions_hold() const {
        for (std::size_t i = 0; i < levels.size(); ++i)
            for (std::size_t j = 0; j < levels.size(); ++j) {
                if (i == j) continue;
                const auto& [k, pk] = levels[i];
                const auto& [m, pm] = levels[j];
                if (m % k == 0 && m > k && !contains_polytope(pm, pk)) return false;
            }
        return true;
    }
};

} // namespace oklab
