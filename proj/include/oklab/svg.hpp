#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "oklab/errors.hpp"
#include "oklab/polytope.hpp"

namespace oklab {

/// Minimal SVG scene for 2-D bodies: axes, filled polygons, point clouds.
class SvgScene {
public:
    SvgScene(double xmax, double ymax) : xmax_(std::max(xmax, 1e-9)), ymax_(std::max(ymax, 1e-9)) {}

    void add_polytope(const RatPolytope& p, const std::string& stroke, const std::string& fill) {
        if (p.ambient_dim() != 2 || p.is_empty()) return;
        std::vector<std::pair<double, double>> pts;
        double cx = 0, cy = 0;
        for (const auto& v : p.vertices()) {
            pts.emplace_back(to_double(v[0]), to_double(v[1]));
            cx += pts.back().first;
            cy += pts.back().second;
        }
        cx /= static_cast<double>(pts.size());
        cy /= static_cast<double>(pts.size());
        std::sort(pts.begin(), pts.end(), [&](const auto& a, const auto& b) {
            return std::atan2(a.second - cy, a.first - cx) < std::atan2(b.second - cy, b.first - cx);
        });
        std::ostringstream os;
        os << "<polygon points=\"";
        for (const auto& [x, y] : pts) os << sx(x) << "," << sy(y) << " ";
        os << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\" stroke-width=\"1.5\"/>";
        body_ += os.str();
        body_ += "\n";
    }

    void add_points(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                    double radius = 1.2) {
        std::ostringstream os;
        for (const auto& [x, y] : pts)
            os << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"" << radius
               << "\" fill=\"" << color << "\"/>\n";
        body_ += os.str();
    }

    std::string str() const {
        std::ostringstream os;
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
           << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
        os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
        // axes
        os << "<line x1=\"" << sx(0) << "\" y1=\"" << sy(0) << "\" x2=\"" << sx(xmax_ * 1.05)
           << "\" y2=\"" << sy(0) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        os << "<line x1=\"" << sx(0) << "\" y1=\"" << sy(0) << "\" x2=\"" << sx(0) << "\" y2=\""
           << sy(ymax_ * 1.05) << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        os << body_;
        os << "</svg>\n";
        return os.str();
    }

private:
    static constexpr double W = 640, H = 640, PAD = 40;

    double sx(double x) const { return PAD + x / (xmax_ * 1.1) * (W - 2 * PAD); }
    double sy(double y) const { return H - PAD - y / (ymax_ * 1.1) * (H - 2 * PAD); }

    double xmax_, ymax_;
    std::string body_;
};

/// Renders a family of 2-D bodies (e.g. a Delta_k chain) with optional sample
/// points overlaid.
inline std::string render_bodies_svg(const std::vector<RatPolytope>& bodies,
                                     const std::vector<std::pair<double, double>>& cloud = {}) {
    double xmax = 1, ymax = 1;
    for (const auto& p : bodies) {
        if (p.ambient_dim() != 2) throw InputError("svg rendering is limited to 2-D bodies");
        for (const auto& v : p.vertices()) {
            xmax = std::max(xmax, to_double(v[0]));
            ymax = std::max(ymax, to_double(v[1]));
        }
    }
    SvgScene scene(xmax, ymax);
    static const char* strokes[] = {"#1b6ca8", "#a83232", "#2e8b57", "#8a2be2", "#b8860b"};
    static const char* fills[] = {"#1b6ca822", "#a8323222", "#2e8b5722", "#8a2be222", "#b8860b22"};
    for (std::size_t i = 0; i < bodies.size(); ++i)
        scene.add_polytope(bodies[i], strokes[i % 5], fills[i % 5]);
    if (!cloud.empty()) scene.add_points(cloud, "#333333", 1.0);
    return scene.str();
}

} // namespace oklab
