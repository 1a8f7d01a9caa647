// Command-line front end: model construction, body computation, volume and
// Seshadri reports, moment images, capped potentials, degeneration
// certificates, and the aggregated property suite.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oklab/cap.hpp"
#include "oklab/degeneration.hpp"
#include "oklab/io.hpp"
#include "oklab/moment.hpp"
#include "oklab/order.hpp"
#include "oklab/polytope.hpp"
#include "oklab/quadrature.hpp"
#include "oklab/sections.hpp"
#include "oklab/svg.hpp"
#include "oklab/verify.hpp"

using namespace oklab;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

CoordinateChange load_chart(const std::string& path) {
    const std::string text = read_text_file(path);
    int n = -1;
    CoordinateChange cc;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        if (n < 0) {
            if (line.rfind("n=", 0) != 0) throw InputError("chart file must start with n=<dim>");
            n = std::stoi(line.substr(2));
            continue;
        }
        if (line.rfind("fwd ", 0) == 0)
            cc.forward.push_back(PolySection::parse(n, line.substr(4)));
        else if (line.rfind("inv ", 0) == 0)
            cc.inverse.push_back(PolySection::parse(n, line.substr(4)));
        else
            throw InputError("chart lines must start with 'fwd ' or 'inv ': " + line);
    }
    if (n < 1) throw InputError("chart file has no header");
    if (static_cast<int>(cc.forward.size()) != n || static_cast<int>(cc.inverse.size()) != n)
        throw InputError("chart file needs n 'fwd' and n 'inv' polynomials");
    cc.verify();
    return cc;
}

ModelSpec parse_model(const std::string& text, const std::string& chart_path) {
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    ModelSpec spec;
    if (head.size() == 2 && head[0] == 'p' && head[1] >= '1' && head[1] <= '4') {
        int d = 1;
        if (colon != std::string::npos) {
            const std::string rest = text.substr(colon + 1);
            if (rest.rfind("d=", 0) != 0) throw InputError("projective model expects p<n>:d=<deg>");
            d = std::stoi(rest.substr(2));
        }
        spec = ModelSpec::projective_space(head[1] - '0', d);
    } else if (head == "curve") {
        if (colon == std::string::npos) throw InputError("curve model expects curve:d=<deg>");
        const std::string rest = text.substr(colon + 1);
        if (rest.rfind("d=", 0) != 0) throw InputError("curve model expects curve:d=<deg>");
        spec = ModelSpec::curve(std::stoi(rest.substr(2)));
    } else if (head == "toric") {
        if (colon == std::string::npos) throw InputError("toric model expects toric:<polytope file>");
        const RatPolytope P = load_polytope(text.substr(colon + 1));
        std::vector<std::vector<int>> verts;
        for (const auto& v : P.vertices()) {
            std::vector<int> iv;
            for (const auto& c : v) {
                if (rat_den(c) != 1) throw InputError("toric model requires lattice vertices");
                iv.push_back(static_cast<int>(rat_num(c).convert_to<long long>()));
            }
            verts.push_back(std::move(iv));
        }
        spec = ModelSpec::toric(std::move(verts));
    } else if (head == "custom") {
        if (colon == std::string::npos) throw InputError("custom model expects custom:<section file>");
        spec = ModelSpec::custom(text.substr(colon + 1));
    } else {
        throw InputError("unknown model: " + text +
                         " (expected p<n>:d=, curve:d=, toric:<file>, custom:<file>)");
    }
    if (!chart_path.empty()) spec.chart = load_chart(chart_path);
    return spec;
}

std::vector<int> parse_levels(const std::string& text) {
    std::vector<int> ks;
    for (const auto& tok : split(text, ','))
        if (!tok.empty()) ks.push_back(std::stoi(tok));
    if (ks.empty()) throw InputError("empty level list");
    for (std::size_t i = 0; i + 1 < ks.size(); ++i)
        if (ks[i + 1] <= ks[i]) throw InputError("levels must be strictly increasing");
    for (int k : ks)
        if (k < 1) throw InputError("levels must be positive");
    return ks;
}

Box parse_box(const std::string& text) {
    std::vector<double> lo, hi;
    for (const auto& axis : split(text, ',')) {
        const auto parts = split(axis, ':');
        if (parts.size() != 2) throw InputError("box axis must be lo:hi, got " + axis);
        lo.push_back(std::stod(parts[0]));
        hi.push_back(std::stod(parts[1]));
    }
    return Box::of(std::move(lo), std::move(hi));
}

std::string body_name(int k) { return "Delta_" + std::to_string(k); }

int cmd_body(const std::string& model_s, const std::string& chart, const std::string& order_s,
             const std::string& levels_s, const std::string& out_prefix, const std::string& svg_path,
             const std::string& sections_prefix, bool print_blocks) {
    const ModelSpec model = parse_model(model_s, chart);
    const OrderSpec order = parse_order(order_s);
    const auto levels = parse_levels(levels_s);
    BodyApprox chain;
    std::vector<RatPolytope> bodies;
    for (int k : levels) {
        const LeadingSet L = eliminate(order, model_sections(model, k));
        RatPolytope P = delta_k(L);
        std::printf("k=%d  |A|=%zu  vertices=%zu  vol=%s\n", k, L.exponents.size(),
                    P.vertices().size(), format_rat_short(P.volume()).c_str());
        if (print_blocks) std::fputs(format_polytope_report(P).c_str(), stdout);
        if (!out_prefix.empty())
            write_file_atomic(out_prefix + "_k" + std::to_string(k) + ".poly", emit_polytope(P));
        if (!sections_prefix.empty())
            write_file_atomic(sections_prefix + "_k" + std::to_string(k) + ".sec",
                              emit_section_space(SectionSpace{P.ambient_dim(), k, L.distinguished}));
        bodies.push_back(P);
        chain.levels.emplace_back(k, std::move(P));
    }
    std::string report;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (i) report += " <= ";
        report += body_name(levels[i]);
    }
    const bool ok = chain.inclusions_hold();
    std::printf("%s: %s\n", report.c_str(), ok ? "OK" : "VIOLATED");
    if (!svg_path.empty()) {
        if (bodies.front().ambient_dim() == 2)
            write_file_atomic(svg_path, render_bodies_svg(bodies));
        else
            std::printf("svg output skipped: bodies are not 2-dimensional\n");
    }
    return ok ? 0 : 1;
}

int cmd_volume(const std::string& model_s, const std::string& chart, const std::string& order_s,
               int k) {
    const ModelSpec model = parse_model(model_s, chart);
    const OrderSpec order = parse_order(order_s);
    const LeadingSet L = eliminate(order, model_sections(model, k));
    const RatPolytope P = delta_k(L);
    const int n = P.ambient_dim();
    Rat fact = 1;
    for (int i = 2; i <= n; ++i) fact *= i;
    const Rat scaled = fact * P.volume();
    if (n == 1)
        std::printf("Delta = [%s, %s]\n", format_rat_short(P.vertices().front()[0]).c_str(),
                    format_rat_short(P.vertices().back()[0]).c_str());
    std::printf("vol(Delta_%d) = %s\n", k, format_rat_short(P.volume()).c_str());
    std::printf("%d!*vol = %s\n", n, format_rat_short(scaled).c_str());
    if (const auto ln = model.intersection_number()) {
        const bool match = scaled == Rat(*ln);
        std::printf("(L^n) = %s  [%s]\n", ln->str().c_str(),
                    match ? "matches n!*vol" : "n!*vol approaches this from below");
    }
    return 0;
}

int cmd_seshadri(const std::string& poly_path, const std::string& model_s,
                 const std::string& chart, const std::string& order_s, int k) {
    RatPolytope P;
    if (!poly_path.empty()) {
        P = load_polytope(poly_path);
    } else if (!model_s.empty()) {
        P = delta_k(eliminate(parse_order(order_s), model_sections(parse_model(model_s, chart), k)));
    } else {
        throw InputError("seshadri needs --polytope or --model");
    }
    std::printf("t* = %s\n", format_rat_short(seshadri_param(P)).c_str());
    return 0;
}

int cmd_domain(const std::string& poly_path, const std::string& z_s, const std::string& mu_s) {
    const RatPolytope P = load_polytope(poly_path);
    bool inside;
    if (!mu_s.empty()) {
        RatVec mu;
        for (const auto& tok : split(mu_s, ',')) mu.push_back(parse_rat(tok));
        inside = domain_membership_mu(P, mu);
    } else if (!z_s.empty()) {
        std::vector<std::pair<Rat, Rat>> z;
        for (const auto& pair_s : split(z_s, ';')) {
            const auto parts = split(pair_s, ',');
            if (parts.size() != 2) throw InputError("each z coordinate needs re,im: " + pair_s);
            z.emplace_back(parse_rat(parts[0]), parse_rat(parts[1]));
        }
        inside = domain_membership(P, z);
    } else {
        throw InputError("domain needs --z or --mu");
    }
    std::printf("inside: %s\n", inside ? "yes" : "no");
    return 0;
}

int cmd_moment_image(const std::string& model_s, const std::string& chart,
                     const std::string& order_s, int k, double R, int grid,
                     const std::string& csv_path, const std::string& svg_path) {
    const LeadingSet L = eliminate(parse_order(order_s), model_sections(parse_model(model_s, chart), k));
    const MomentModel A = MomentModel::from_leading_set(L);
    const int n = A.n;
    std::string csv;
    for (int i = 0; i < n; ++i) csv += "x" + std::to_string(i + 1) + ",";
    for (int i = 0; i < n; ++i) csv += "mu" + std::to_string(i + 1) + (i + 1 < n ? "," : "\n");
    std::vector<std::pair<double, double>> cloud;
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    std::vector<double> x(static_cast<std::size_t>(n));
    for (;;) {
        for (int i = 0; i < n; ++i)
            x[static_cast<std::size_t>(i)] = -R + 2.0 * R * idx[static_cast<std::size_t>(i)] / (grid - 1);
        const auto mu = moment_map(A, x);
        char buf[64];
        for (int i = 0; i < n; ++i) {
            std::snprintf(buf, sizeof buf, "%.12g,", x[static_cast<std::size_t>(i)]);
            csv += buf;
        }
        for (int i = 0; i < n; ++i) {
            std::snprintf(buf, sizeof buf, i + 1 < n ? "%.12g," : "%.12g\n", mu[static_cast<std::size_t>(i)]);
            csv += buf;
        }
        if (n == 2) cloud.emplace_back(mu[0], mu[1]);
        int i = n - 1;
        for (; i >= 0; --i) {
            if (++idx[static_cast<std::size_t>(i)] < grid) break;
            idx[static_cast<std::size_t>(i)] = 0;
        }
        if (i < 0) break;
    }
    if (!csv_path.empty())
        write_file_atomic(csv_path, csv);
    else
        std::fputs(csv.c_str(), stdout);
    if (!svg_path.empty() && n == 2)
        write_file_atomic(svg_path, render_bodies_svg({delta_k(L)}, cloud));
    return 0;
}

int cmd_moment_volume(const std::string& model_s, const std::string& chart,
                      const std::string& order_s, int k, const std::string& box_s,
                      double rel_tol, double abs_tol) {
    if (!(rel_tol > 0) || !(abs_tol > 0)) throw InputError("tolerances must be positive");
    const LeadingSet L = eliminate(parse_order(order_s), model_sections(parse_model(model_s, chart), k));
    const MomentModel A = MomentModel::from_leading_set(L);
    QuadOptions opt;
    opt.rel_tol = rel_tol;
    opt.abs_tol = abs_tol;
    double vol;
    if (box_s.empty() || box_s == "all") {
        vol = symplectic_volume_all(A, opt);
        const double exact = to_double(A.hull().volume());
        const double err = std::abs(vol - exact) / std::max(exact, 1e-300);
        std::printf("quadrature = %.10g\n", vol);
        std::printf("vol(Conv A) = %.10g\n", exact);
        std::printf("relative error = %.3g (tolerance %.3g)\n", err, rel_tol);
        if (err > rel_tol) throw NumericError("quadrature missed the exact volume");
    } else {
        const Box b = parse_box(box_s);
        std::vector<AxisRange> region;
        for (int i = 0; i < b.dim(); ++i)
            region.push_back(AxisRange::finite(b.lo[static_cast<std::size_t>(i)],
                                               b.hi[static_cast<std::size_t>(i)]));
        vol = symplectic_volume(A, region, opt);
        std::printf("quadrature over box = %.10g\n", vol);
    }
    return 0;
}

int cmd_moment_cap(const std::string& model_s, const std::string& chart, const std::string& order_s,
                   int k, const std::string& box_s, double margin, double delta, int grid,
                   double pad) {
    const LeadingSet L = eliminate(parse_order(order_s), model_sections(parse_model(model_s, chart), k));
    const MomentModel A = MomentModel::from_leading_set(L);
    const PotentialField field = capped_potential(A, parse_box(box_s), margin, delta);
    std::printf("shift C = %.10g, delta = %g, margin = %g\n", field.shift(), field.delta(),
                field.margin());
    const CapAudit audit = audit_field(field, grid, pad);
    std::printf("euclidean on region: %s\n", audit.euclidean_on_region ? "yes" : "NO");
    std::printf("correction compactly supported: %s\n",
                audit.correction_compactly_supported ? "yes" : "NO");
    std::printf("convex (min eigenvalue %.3e): %s\n", audit.min_eigenvalue,
                audit.convex ? "yes" : "NO");
    std::printf("max |correction| over window = %.6g\n", audit.max_correction);
    if (!audit.pass()) throw NumericError("capped potential failed its grid audit");
    return 0;
}

// interprets --tau values as the nearest dyadic 2^-j at or below the input
int dyadic_exponent(double tau) {
    if (!(tau > 0 && tau < 1)) throw InputError("tau must lie in (0,1)");
    int j = 1;
    while (j < 30 && std::pow(2.0, -j) > tau) ++j;
    return j;
}

int cmd_degenerate_check(const std::string& model_s, const std::string& chart,
                         const std::string& order_s, int k, double radius, double tau_opt) {
    const LeadingSet L = eliminate(parse_order(order_s), model_sections(parse_model(model_s, chart), k));
    const auto gamma = separating_weight(L.order, L.exponents);
    std::printf("gamma = (");
    for (std::size_t i = 0; i < gamma.size(); ++i)
        std::printf(i ? ",%lld" : "%lld", static_cast<long long>(gamma[i]));
    std::printf(")\n");
    const double C = degeneration_error_constant(L, gamma, radius);
    std::printf("coefficient-sum constant C = %.10g (sup-ball radius %g)\n", C, radius);
    std::printf("%-8s %-14s %-14s\n", "tau", "error bound", "C*tau");
    bool ok = true;
    const int j0 = tau_opt > 0 ? dyadic_exponent(tau_opt) : 1;
    const int j1 = tau_opt > 0 ? j0 : 10;
    for (int j = j0; j <= j1; ++j) {
        const DegenerationRun run(L, gamma, Rat(1, 1 << j), radius);
        const double err = degeneration_error(run);
        const double cap = C * to_double(run.tau);
        std::printf("2^-%-5d %-14.6g %-14.6g\n", j, err, cap);
        if (err > cap + 1e-15) ok = false;
    }
    std::printf("error <= C*tau: %s\n", ok ? "OK" : "VIOLATED");
    return ok ? 0 : 1;
}

int cmd_degenerate_certify(const std::string& model_s, const std::string& chart,
                           const std::string& order_s, int k, double delta, int grid,
                           double u_shrink, double k_shrink, double ball,
                           const std::string& u_box_s, const std::string& k_box_s,
                           double tau_opt) {
    const LeadingSet L = eliminate(parse_order(order_s), model_sections(parse_model(model_s, chart), k));
    const auto gamma = separating_weight(L.order, L.exponents);
    const MomentModel A = MomentModel::from_leading_set(L);
    Box U = u_box_s.empty() ? shrink_box(A, u_shrink) : parse_box(u_box_s);
    Box K = k_box_s.empty() ? shrink_box(A, k_shrink) : parse_box(k_box_s);
    if (!U.strictly_inside(K))
        throw NumericError("shrink factors produced non-nested boxes; adjust --u-shrink/--k-shrink");
    const int first = tau_opt > 0 ? dyadic_exponent(tau_opt) : 1;
    const auto cert = gluing_certificate(L, gamma, U, K, delta, grid, ball, 1e-9, first);
    std::fputs(format_certificate(cert).c_str(), stdout);
    if (!cert.success) throw NumericError("no gluing certificate found: " + cert.failure_reason);
    return cert.grid_stable && cert.pointwise_equalities ? 0 : 1;
}

int cmd_verify(std::uint64_t seed, bool fast) {
    const auto results = run_property_suite(seed, fast);
    int fails = 0;
    for (const auto& r : results) {
        std::printf("%-4s %s%s%s\n", r.pass ? "ok" : "FAIL", r.name.c_str(),
                    r.detail.empty() ? "" : " -- ", r.detail.c_str());
        if (!r.pass) ++fails;
    }
    std::printf("%zu checks, %d failures\n", results.size(), fails);
    return fails ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Newton-Okounkov bodies, Okounkov domains, and toric-degeneration "
                 "certificates from explicit polynomial section spaces"};
    app.require_subcommand(1);

    std::string model, chart, order = "lex", levels = "1", out_prefix, svg_path, poly_path;
    std::string z_s, mu_s, box_s, u_box_s, k_box_s, csv_path, sections_prefix;
    int k = 1, grid = 64;
    double R = 8.0, rel_tol = 1e-2, abs_tol = 1e-8, margin = 0.1, delta = 1e-2, pad = 6.0;
    double u_shrink = 0.8, k_shrink = 0.95, ball = 1.0, radius = 1.0, tau = 0.0;
    std::uint64_t seed = 0;
    bool fast = false, print_blocks = false;

    auto add_model = [&](CLI::App* cmd, bool required = true) {
        auto* opt = cmd->add_option("--model", model, "model spec: p<n>:d=, curve:d=, toric:<file>, custom:<file>");
        if (required) opt->required();
        cmd->add_option("--chart", chart, "flag chart file (fwd/inv polynomial lines)");
        cmd->add_option("--order", order, "additive order: lex, deglex, weight:<w1,..>");
    };

    auto* body = app.add_subcommand("body", "Delta_k chain with inclusion report");
    add_model(body);
    body->add_option("--k", levels, "comma-separated levels")->required();
    body->add_option("--out", out_prefix, "polytope file prefix");
    body->add_option("--sections-out", sections_prefix, "distinguished-basis section file prefix");
    body->add_flag("--print", print_blocks, "print vertex and facet blocks");
    body->add_option("--svg", svg_path, "render 2-D bodies to this SVG");

    auto* volume = app.add_subcommand("volume", "exact body volume and n!*vol report");
    add_model(volume);
    volume->add_option("--k", k, "level");

    auto* seshadri = app.add_subcommand("seshadri", "largest inscribed standard simplex scale");
    seshadri->add_option("--polytope", poly_path, "polytope file");
    add_model(seshadri, false);
    seshadri->add_option("--k", k, "level");

    auto* domain = app.add_subcommand("domain", "Okounkov-domain membership queries");
    domain->add_option("--polytope", poly_path, "polytope file")->required();
    domain->add_option("--z", z_s, "complex point: re,im;re,im;...");
    domain->add_option("--mu", mu_s, "moment coordinates: m1,m2,...");

    auto* moment = app.add_subcommand("moment", "moment-map numerics");
    moment->require_subcommand(1);
    auto* mimage = moment->add_subcommand("image", "sample the moment image as CSV/SVG");
    add_model(mimage);
    mimage->add_option("--k", k, "level");
    mimage->add_option("-R,--range", R, "sample box half-width in x");
    mimage->add_option("--grid", grid, "samples per axis");
    mimage->add_option("--out", csv_path, "CSV output path (stdout when omitted)");
    mimage->add_option("--svg", svg_path, "render body and image cloud (n=2)");
    auto* mvolume = moment->add_subcommand("volume", "quadrature of det Hess against the body volume");
    add_model(mvolume);
    mvolume->add_option("--k", k, "level");
    mvolume->add_option("--box", box_s, "integration box lo:hi,lo:hi (default: all)");
    mvolume->add_option("--rel-tol", rel_tol, "relative tolerance");
    mvolume->add_option("--abs-tol", abs_tol, "absolute tolerance");
    auto* mcap = moment->add_subcommand("cap", "capped potential field with grid audit");
    add_model(mcap);
    mcap->add_option("--k", k, "level");
    mcap->add_option("--box", box_s, "cap region lo:hi,... in x coordinates")->required();
    mcap->add_option("--margin", margin, "shrink margin in gradient coordinates")->required();
    mcap->add_option("--delta", delta, "regularized-max smoothing width");
    mcap->add_option("--grid", grid, "audit grid per axis");
    mcap->add_option("--pad", pad, "audit window padding");

    auto* degenerate = app.add_subcommand("degenerate", "toric degeneration tools");
    degenerate->require_subcommand(1);
    auto* dcheck = degenerate->add_subcommand("check", "rescaled-basis error bound audit");
    add_model(dcheck);
    dcheck->add_option("--k", k, "level");
    dcheck->add_option("--radius", radius, "sup-norm ball radius");
    dcheck->add_option("--tau", tau, "audit a single scale (rounded down to 2^-j)");
    auto* dcert = degenerate->add_subcommand("certify", "regularized-max gluing certificate");
    add_model(dcert);
    dcert->add_option("--k", k, "level");
    dcert->add_option("--delta", delta, "band width delta");
    dcert->add_option("--tau", tau, "start the scale search here (rounded down to 2^-j)");
    dcert->add_option("--grid", grid, "certification grid per axis");
    dcert->add_option("--u-shrink", u_shrink, "inner box target shrink factor");
    dcert->add_option("--k-shrink", k_shrink, "outer box target shrink factor");
    dcert->add_option("--u-box", u_box_s, "explicit inner box lo:hi,...");
    dcert->add_option("--k-box", k_box_s, "explicit outer box lo:hi,...");
    dcert->add_option("--ball", ball, "reference ball radius for the rescaled chart");

    auto* verify = app.add_subcommand("verify", "run every module's property suite");
    verify->add_option("--seed", seed, "random seed");
    verify->add_flag("--fast", fast, "smaller sample counts");

    CLI11_PARSE(app, argc, argv);

    try {
        if (body->parsed())
            return cmd_body(model, chart, order, levels, out_prefix, svg_path, sections_prefix,
                            print_blocks);
        if (volume->parsed()) return cmd_volume(model, chart, order, k);
        if (seshadri->parsed()) return cmd_seshadri(poly_path, model, chart, order, k);
        if (domain->parsed()) return cmd_domain(poly_path, z_s, mu_s);
        if (moment->parsed()) {
            if (mimage->parsed())
                return cmd_moment_image(model, chart, order, k, R, grid, csv_path, svg_path);
            if (mvolume->parsed())
                return cmd_moment_volume(model, chart, order, k, box_s, rel_tol, abs_tol);
            if (mcap->parsed())
                return cmd_moment_cap(model, chart, order, k, box_s, margin, delta, grid, pad);
        }
        if (degenerate->parsed()) {
            if (dcheck->parsed()) return cmd_degenerate_check(model, chart, order, k, radius, tau);
            if (dcert->parsed())
                return cmd_degenerate_certify(model, chart, order, k, delta, grid, u_shrink,
                                              k_shrink, ball, u_box_s, k_box_s, tau);
        }
        if (verify->parsed()) return cmd_verify(seed, fast);
    } catch (const RegionError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const InputError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const NumericError& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return 3;
    } catch (const DependentBasisError& e) {
        std::fprintf(stderr, "property violation: %s\n", e.what());
        return 1;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
