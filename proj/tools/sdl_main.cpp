// Command-line surface of the Schwarz dynamics laboratory: renders of the
// parameter/dynamical planes, ray tracing, center/boundary solvers, the
// combinatorial straightening chi, laminations, and CSV scans.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

#include "sdl/angles.hpp"
#include "sdl/render.hpp"
#include "sdl/schwarz.hpp"
#include "sdl/straightening.hpp"
#include "sdl/tricorn.hpp"

using json = nlohmann::json;
using namespace sdl;

namespace {

cx parse_complex(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) return cx(std::stod(s), 0.0);
    return cx(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
}

Tolerances tol_profile(const std::string& name) {
    Tolerances t;
    if (name == "strict") {
        t.cycle_residual = 1e-11;
        t.center_residual = 1e-12;
        t.ray_gap = 1e-9;
    } else if (name == "loose") {
        t.cycle_residual = 1e-7;
        t.center_residual = 1e-8;
        t.ray_gap = 1e-5;
    }
    return t;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path);
    f << text;
}

struct Common {
    std::string out = "out";
    int threads = 0;
    int max_iter = 64;
    std::string tol = "default";
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--out", c.out, "output path prefix");
    app->add_option("--threads", c.threads, "worker threads (default: SDL_THREADS or all cores)");
    app->add_option("--max-iter", c.max_iter, "iteration budget");
    app->add_option("--tol-profile", c.tol, "tolerance profile: default|strict|loose");
}

render::RenderJob make_job(const Common& c, cx center, double w, double h, int px) {
    render::RenderJob job;
    job.win.center = center;
    job.win.width = w;
    job.win.height = h;
    job.px_w = px;
    job.px_h = px;
    job.max_iter = c.max_iter;
    job.threads = c.threads;
    job.tol = tol_profile(c.tol);
    return job;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sdl: a numerical laboratory for the circle-and-cardioid Schwarz family and the Tricorn"};
    app.set_config("--config", "", "key=value config file");
    app.require_subcommand(1);

    Common c;

    // render-cs
    auto* rcs = app.add_subcommand("render-cs", "render the connectedness-locus scan");
    std::string rcs_center = "0.06,0.0";
    double rcs_width = 1.1;
    int rcs_px = 1024;
    bool rcs_csv = false;
    add_common(rcs, c);
    rcs->add_option("--center", rcs_center, "window center RE,IM");
    rcs->add_option("--width", rcs_width, "window width in plane units");
    rcs->add_option("--px", rcs_px, "image size (pixels, square)");
    rcs->add_flag("--csv", rcs_csv, "also write the scan CSV");

    // render-dyn
    auto* rdy = app.add_subcommand("render-dyn", "render a dynamical plane of F_a");
    std::string rdy_a = "0.1875,0";
    std::string rdy_center;
    double rdy_width = 0.0;
    int rdy_px = 1024;
    add_common(rdy, c);
    rdy->add_option("--a", rdy_a, "parameter RE,IM")->required();
    rdy->add_option("--center", rdy_center, "window center RE,IM (default: circle center)");
    rdy->add_option("--width", rdy_width, "window width (default: 2.6 r_a)");
    rdy->add_option("--px", rdy_px, "image size");

    // render-tricorn / render-limb
    auto* rtc = app.add_subcommand("render-tricorn", "render the Tricorn");
    std::string rtc_center = "0,0";
    double rtc_width = 4.0;
    int rtc_px = 1024;
    std::vector<std::string> rtc_rays;
    add_common(rtc, c);
    rtc->add_option("--center", rtc_center);
    rtc->add_option("--width", rtc_width);
    rtc->add_option("--px", rtc_px);
    rtc->add_option("--ray", rtc_rays, "parameter-ray overlay angle p/q (repeatable)");

    auto* rlb = app.add_subcommand("render-limb", "render the real basilica limb");
    std::string rlb_center = "-1.35,0";
    double rlb_width = 1.5;
    int rlb_px = 1024;
    std::vector<std::string> rlb_rays;
    add_common(rlb, c);
    rlb->add_option("--center", rlb_center);
    rlb->add_option("--width", rlb_width);
    rlb->add_option("--px", rlb_px);
    rlb->add_option("--ray", rlb_rays, "parameter-ray overlay angle p/q (repeatable)");

    // ray
    auto* ray = app.add_subcommand("ray", "trace a dynamical ray");
    std::string ray_family = "s";
    std::string ray_angle;
    std::string ray_a = "0.1875,0";
    std::string ray_c = "-1,0";
    int ray_depth = 64;
    bool ray_parameter = false;
    add_common(ray, c);
    ray->add_option("--family", ray_family, "s (Schwarz) or t (Tricorn)")->required();
    ray->add_option("--angle", ray_angle, "angle p/q, or itinerary pre|per for family s")->required();
    ray->add_option("--depth", ray_depth, "pullback depth / levels");
    ray->add_option("--a", ray_a, "Schwarz parameter RE,IM");
    ray->add_option("--c", ray_c, "Tricorn parameter RE,IM");
    ray->add_flag("--parameter", ray_parameter, "trace a Tricorn parameter ray instead");

    // center
    auto* ctr = app.add_subcommand("center", "solve for a superattracting center");
    std::string ctr_family = "s";
    int ctr_period = 3;
    std::string ctr_seed = "0.2,0";
    add_common(ctr, c);
    ctr->add_option("--family", ctr_family)->required();
    ctr->add_option("--period", ctr_period)->required();
    ctr->add_option("--seed", ctr_seed)->required();

    // chi
    auto* chi = app.add_subcommand("chi", "combinatorial straightening of a center");
    std::string chi_a = "0,0";
    int chi_period = 0;
    int chi_depth = 6;
    add_common(chi, c);
    chi->add_option("--a", chi_a, "Schwarz center RE,IM")->required();
    chi->add_option("--period", chi_period, "period (0 = detect)");
    chi->add_option("--depth", chi_depth, "verification depth");

    // index-exp
    auto* iexp = app.add_subcommand("index-exp", "the height-0 parabolic index experiment");
    add_common(iexp, c);

    // lamination
    auto* lam = app.add_subcommand("lamination", "parameter-plane lamination model");
    std::string lam_which = "l";
    int lam_maxp = 6;
    bool lam_svg = false;
    add_common(lam, c);
    lam->add_option("--which", lam_which, "cs or l");
    lam->add_option("--max-period", lam_maxp);
    lam->add_flag("--svg", lam_svg, "also write SVG");

    // scan
    auto* scan = app.add_subcommand("scan", "CSV scan of the parameter plane");
    std::string scan_center = "0.06,0.0";
    double scan_width = 1.1;
    int scan_grid = 128;
    add_common(scan, c);
    scan->add_option("--center", scan_center);
    scan->add_option("--width", scan_width);
    scan->add_option("--grid", scan_grid, "grid resolution per side");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0;  // --help
        std::cerr << "{\"error\":\"usage\",\"what\":\"" << e.what() << "\"}\n";
        return 3;
    }

    try {
        const Tolerances tol = tol_profile(c.tol);

        if (rcs->parsed()) {
            auto job = make_job(c, parse_complex(rcs_center), rcs_width, rcs_width, rcs_px);
            std::vector<render::ScanRow> rows;
            const auto im = render::render_cs_locus(job, rcs_csv ? &rows : nullptr);
            img::write_png(c.out + ".png", im);
            if (rcs_csv) write_text(c.out + ".csv", render::scan_csv(rows));
            std::cout << "{\"schema\":\"sdl-1\",\"wrote\":\"" << c.out << ".png\"}\n";
        } else if (rdy->parsed()) {
            const cx a = parse_complex(rdy_a);
            const auto geom = cardioid::circumcircle(a, tol);
            const cx center = rdy_center.empty() ? geom.a : parse_complex(rdy_center);
            const double w = rdy_width > 0 ? rdy_width : 2.6 * geom.r;
            auto job = make_job(c, center, w, w, rdy_px);
            const auto im = render::render_dynamical_plane(a, job);
            img::write_png(c.out + ".png", im);
            std::cout << "{\"schema\":\"sdl-1\",\"wrote\":\"" << c.out << ".png\"}\n";
        } else if (rtc->parsed() || rlb->parsed()) {
            const bool limb = rlb->parsed();
            auto job = make_job(c, parse_complex(limb ? rlb_center : rtc_center),
                                limb ? rlb_width : rtc_width, limb ? rlb_width : rtc_width,
                                limb ? rlb_px : rtc_px);
            std::vector<angles::Rational> overlays;
            for (const auto& s : (limb ? rlb_rays : rtc_rays))
                overlays.push_back(angles::Rational::parse(s));
            const auto im = limb ? render::render_basilica_limb(job, overlays)
                                 : render::render_tricorn(job, overlays);
            img::write_png(c.out + ".png", im);
            std::cout << "{\"schema\":\"sdl-1\",\"wrote\":\"" << c.out << ".png\"}\n";
        } else if (ray->parsed()) {
            json j;
            j["schema"] = "sdl-1";
            if (ray_family == "s") {
                const cx a = parse_complex(ray_a);
                const auto m = schwarz::SchwarzMap::create(a, tol);
                angles::RhoAngle ang;
                if (ray_angle.find('|') != std::string::npos)
                    ang = angles::RhoAngle::from_itinerary(angles::Itinerary::parse(ray_angle));
                else
                    ang = angles::E_inverse(angles::Rational::parse(ray_angle));
                const auto rt = schwarz::trace_ray(m, ang, ray_depth);
                j["family"] = "s";
                j["angle"] = ang.str();
                if (rt.landing.is_inf()) throw Error("ray landing escaped to infinity");
                j["landing"] = {rt.landing.value().real(), rt.landing.value().imag()};
                j["cauchy_gap"] = rt.cauchy_gap;
                j["itinerary_verified"] = rt.itinerary_verified;
                json pts = json::array();
                for (const auto& p : rt.points) pts.push_back({p.real(), p.imag()});
                j["points"] = pts;
            } else {
                const auto th = angles::Rational::parse(ray_angle);
                const auto rt = ray_parameter
                                    ? tricorn::trace_parameter_ray(th, ray_depth, 1.0 + 1e-4, tol)
                                    : tricorn::trace_dynamical_ray(parse_complex(ray_c), th,
                                                                   ray_depth, tol);
                j["family"] = "t";
                j["angle"] = th.str();
                j["landing"] = {rt.landing.real(), rt.landing.imag()};
                j["cauchy_gap"] = rt.cauchy_gap;
                json pts = json::array();
                for (const auto& p : rt.points) pts.push_back({p.real(), p.imag()});
                j["points"] = pts;
                j["potentials"] = rt.potentials;
            }
            std::cout << j.dump() << "\n";
        } else if (ctr->parsed()) {
            const cx seed = parse_complex(ctr_seed);
            const cx z = (ctr_family == "s") ? schwarz::find_center(ctr_period, seed, tol)
                                             : tricorn::find_center(ctr_period, seed, tol);
            json j = {{"schema", "sdl-1"},
                      {"family", ctr_family},
                      {"period", ctr_period},
                      {"center", {z.real(), z.imag()}}};
            std::cout << j.dump() << "\n";
        } else if (chi->parsed()) {
            const auto res = straightening::chi_center(parse_complex(chi_a), chi_period, tol);
            const auto rep = straightening::verify_straightening(res.a, res.c, chi_depth, tol);
            json j = {{"schema", "sdl-1"},
                      {"a", {res.a.real(), res.a.imag()}},
                      {"c", {res.c.real(), res.c.imag()}},
                      {"period", res.period},
                      {"characteristic_angles_S", {res.s_pair.t_minus.str(), res.s_pair.t_plus.str()}},
                      {"characteristic_angles_T", {res.t_pair.t_minus.str(), res.t_pair.t_plus.str()}},
                      {"verified_depth", rep.ok ? rep.depth : 0}};
            std::cout << j.dump() << "\n";
        } else if (iexp->parsed()) {
            const auto r = straightening::index_experiment(tol);
            json j = {{"schema", "sdl-1"},
                      {"a_root", r.s_root.parameter},
                      {"c_root", r.t_root.parameter},
                      {"iota_S", r.iota_S},
                      {"iota_T", r.iota_T},
                      {"separation", r.separation},
                      {"arcs_matched_by_angles", r.arcs_matched_by_angles},
                      {"s_points",
                       {{{"a", r.s_root.parameter}, {"multiplicity", r.s_root.multiplicity}, {"index", r.s_root.index}},
                        {{"a", r.s_other.parameter}, {"multiplicity", r.s_other.multiplicity}, {"index", r.s_other.index}}}},
                      {"t_points",
                       {{{"c", r.t_root.parameter}, {"multiplicity", r.t_root.multiplicity}, {"index", r.t_root.index}},
                        {{"c", r.t_other.parameter}, {"multiplicity", r.t_other.multiplicity}, {"index", r.t_other.index}}}}};
            std::cout << j.dump() << "\n";
        } else if (lam->parsed()) {
            const auto which = (lam_which == "cs") ? portraits::ParameterModel::CS_model
                                                   : portraits::ParameterModel::L_model;
            const auto l = portraits::parameter_lamination(lam_maxp, which);
            write_text(c.out + ".json", portraits::to_json(l) + "\n");
            if (lam_svg) write_text(c.out + ".svg", render::lamination_svg(l));
            auto job = make_job(c, cx(0, 0), 2.2, 2.2, 800);
            img::write_png(c.out + ".png", render::render_lamination_disk(l, job));
            std::cout << "{\"schema\":\"sdl-1\",\"leaves\":" << l.leaves.size() << ",\"wrote\":\""
                      << c.out << ".json\"}\n";
        } else if (scan->parsed()) {
            auto job = make_job(c, parse_complex(scan_center), scan_width, scan_width, scan_grid);
            std::vector<render::ScanRow> rows;
            render::render_cs_locus(job, &rows);
            write_text(c.out + ".csv", render::scan_csv(rows));
            std::cout << "{\"schema\":\"sdl-1\",\"rows\":" << rows.size() << ",\"wrote\":\"" << c.out
                      << ".csv\"}\n";
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << "{\"error\":\"solver\",\"what\":\"" << e.what() << "\"}\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "{\"error\":\"invalid-input\",\"what\":\"" << e.what() << "\"}\n";
        return 3;
    }
}
