#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "oklab/errors.hpp"
#include "oklab/polytope.hpp"

namespace oklab {

// Polytope file: header "n=<dim>", then one vertex per line as num/den
// rationals separated by single spaces. Emission is byte-stable (vertices in
// canonical order); parsing reconstructs the facet form from the hull.

inline std::string emit_polytope(const RatPolytope& p) {
    std::string out = "n=" + std::to_string(p.ambient_dim()) + "\n";
    for (const auto& v : p.vertices()) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out += " ";
            out += format_rat(v[i]);
        }
        out += "\n";
    }
    return out;
}

inline RatPolytope parse_polytope(std::string_view text) {
    int n = -1;
    std::vector<RatVec> vertices;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string line{text.substr(pos, eol - pos)};
        pos = eol + 1;
        if (line.empty() || line.front() == '#') continue;
        if (n < 0) {
            if (line.rfind("n=", 0) != 0) throw InputError("polytope file must start with n=<dim>");
            n = std::stoi(line.substr(2));
            if (n < 1 || n > 4) throw InputError("polytope dimension out of range");
            continue;
        }
        std::istringstream ls(line);
        RatVec v;
        std::string tok;
        while (ls >> tok) v.push_back(parse_rat(tok));
        if (static_cast<int>(v.size()) != n)
            throw InputError("polytope vertex with wrong coordinate count: " + line);
        vertices.push_back(std::move(v));
    }
    if (n < 0) throw InputError("polytope file has no header");
    if (vertices.empty()) throw InputError("polytope file has no vertices");
    return convex_hull(std::move(vertices));
}

/// Human-readable report with both descriptions.
inline std::string format_polytope_report(const RatPolytope& p) {
    std::ostringstream os;
    os << "n=" << p.ambient_dim() << " dim=" << p.dim();
    if (p.is_empty()) {
        os << " (empty)\n";
        return os.str();
    }
    os << " volume=" << format_rat_short(p.volume()) << "\n";
    os << "vertices (" << p.vertices().size() << "):\n";
    for (const auto& v : p.vertices()) {
        os << " ";
        for (const auto& c : v) os << " " << format_rat_short(c);
        os << "\n";
    }
    if (p.full_dimensional()) {
        os << "facets (" << p.facets().size() << "):\n";
        for (const auto& f : p.facets()) {
            os << " ";
            for (const auto& g : f.normal) os << " " << format_rat_short(g);
            os << "  <=  " << format_rat_short(f.offset) << "\n";
        }
    }
    return os.str();
}

inline void write_file_atomic(const std::string& path, std::string_view content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write file: " + tmp);
        out << content;
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw InputError("cannot move " + tmp + " into place: " + ec.message());
}

inline RatPolytope load_polytope(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_polytope(ss.str());
}

} // namespace oklab
