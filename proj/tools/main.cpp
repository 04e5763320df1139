// writhe-lab: invariants of closed polygonal space curves and ribbons, and
// anti-parallel reconnection surgery with a conservation ledger.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "writhe_lab/curve_io.hpp"
#include "writhe_lab/curves.hpp"
#include "writhe_lab/invariants.hpp"
#include "writhe_lab/pathway.hpp"
#include "writhe_lab/reconnection.hpp"

namespace wl = writhe_lab;
using nlohmann::json;

namespace {

struct Tolerances {
    std::map<std::string, double> values;

    double get(const std::string& name, double fallback) const {
        const auto it = values.find(name);
        return it == values.end() ? fallback : it->second;
    }
};

Tolerances parse_tolerances(const std::vector<std::string>& raw) {
    Tolerances tol;
    for (const auto& item : raw) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw CLI::ValidationError("--tol expects NAME=VALUE: " + item);
        }
        const double v = std::stod(item.substr(eq + 1));
        if (!(v > 0.0)) throw CLI::ValidationError("tolerance must be positive: " + item);
        tol.values[item.substr(0, eq)] = v;
    }
    return tol;
}

wl::Vec3 parse_triple(const std::string& s, const char* what) {
    wl::Vec3 v;
    if (std::sscanf(s.c_str(), "%lf,%lf,%lf", &v.x, &v.y, &v.z) != 3) {
        throw CLI::ValidationError(std::string(what) + " expects X,Y,Z");
    }
    return v;
}

std::pair<std::size_t, std::size_t> parse_site(const std::string& s) {
    unsigned long a = 0, b = 0;
    if (std::sscanf(s.c_str(), "%lu,%lu", &a, &b) != 2) {
        throw CLI::ValidationError("--site expects I,J");
    }
    return {a, b};
}

wl::FluxTube tube_from(const wl::StoredComponent& comp) {
    wl::PolygonalCurve curve(comp.vertices);
    if (comp.framing) {
        return wl::FluxTube(wl::Ribbon(curve, *comp.framing), comp.flux.value_or(1.0));
    }
    // Default reference framing: the zero-twist parallel transport frame.
    const wl::Vec3 v0 = wl::orthogonal_unit(curve.vertex_tangent(0));
    return wl::FluxTube(wl::parallel_transport_frame(curve, v0),
                        comp.flux.value_or(1.0));
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw wl::IoError("cannot open output file: " + path);
    out << text;
}

// ---- gen ---------------------------------------------------------------------

struct GenOptions {
    std::string kind;
    std::string out;
    std::size_t n = 64;
    double radius = 1.0;
    double small_radius = 0.5;
    double big_radius = 2.0;
    double separation = 1.0;
    int p = 2, q = 3;
    std::uint64_t seed = 0;
    std::string center = "0,0,0";
    std::string normal = "0,0,1";
};

int cmd_gen(const GenOptions& opt) {
    wl::StoredSystem sys;
    auto add = [&](const wl::PolygonalCurve& c) {
        wl::StoredComponent comp;
        comp.vertices = c.vertices();
        sys.components.push_back(std::move(comp));
    };
    if (opt.kind == "circle") {
        add(wl::make_circle(parse_triple(opt.center, "--center"),
                            parse_triple(opt.normal, "--normal"), opt.radius, opt.n));
    } else if (opt.kind == "torus_knot") {
        add(wl::make_torus_knot(opt.p, opt.q, opt.big_radius, opt.small_radius, opt.n));
    } else if (opt.kind == "hopf") {
        const wl::CurveSystem hopf = wl::make_hopf_link(opt.separation, opt.radius, opt.n);
        add(hopf.component(0));
        add(hopf.component(1));
    } else if (opt.kind == "random") {
        add(wl::make_random_closed_polygon(opt.n, opt.seed));
    } else {
        throw CLI::ValidationError("unknown generator kind: " + opt.kind);
    }
    wl::write_curve_file(opt.out, sys);
    return 0;
}

// ---- invariants ----------------------------------------------------------------

json invariants_report(const wl::StoredSystem& stored, const std::string& nu_arg) {
    const wl::CurveSystem system = stored.curves();
    json report;
    json components = json::array();
    for (std::size_t i = 0; i < system.size(); ++i) {
        const auto& comp = stored.components[i];
        const auto& curve = system.component(i);
        json jc;
        jc["index"] = i;
        jc["vertices"] = curve.size();
        jc["writhe"] = wl::writhe(curve);
        const wl::TorsionResult torsion = wl::total_torsion(curve);
        jc["total_torsion"] = torsion.value;
        jc["degenerate_torsion_samples"] = torsion.degenerate_samples;
        if (comp.framing) {
            const wl::FluxTube tube = tube_from(comp);
            jc["helicity_report"] =
                json::parse(wl::format_helicity_report(wl::helicity_single(tube)));
        }
        components.push_back(jc);
    }
    report["components"] = components;

    json pairs = json::array();
    for (std::size_t i = 0; i < system.size(); ++i) {
        for (std::size_t j = i + 1; j < system.size(); ++j) {
            const double clearance = wl::CurveSystem::component_clearance(
                system.component(i), system.component(j));
            if (!(clearance > 0.0)) {
                json jp;
                jp["a"] = i;
                jp["b"] = j;
                jp["touching"] = true;
                jp["linking_number_gauss"] =
                    wl::linking_number_gauss(system.component(i), system.component(j));
                pairs.push_back(jp);
                continue;
            }
            json jp;
            jp["a"] = i;
            jp["b"] = j;
            jp["touching"] = false;
            const double lk =
                wl::linking_number_gauss(system.component(i), system.component(j));
            jp["linking_number_gauss"] = lk;
            jp["linking_number"] = wl::linking_number(system.component(i), system.component(j));
            jp["min_distance"] = clearance;
            pairs.push_back(jp);
        }
    }
    report["pairs"] = pairs;
    report["system_writhe"] = wl::writhe_system(system);
    if (!nu_arg.empty()) {
        const wl::Vec3 nu = wl::unit(parse_triple(nu_arg, "--nu"));
        report["projection"] =
            json::parse(wl::format_projection_report(wl::directional_writhe(system, nu)));
    }
    return report;
}

std::string invariants_csv(const json& report) {
    std::string csv = "scope,quantity,value\r\n";
    auto row = [&](const std::string& scope, const std::string& quantity, double v) {
        csv += scope + "," + quantity + "," + wl::format_double(v) + "\r\n";
    };
    for (const auto& jc : report["components"]) {
        const std::string scope = "component:" + std::to_string(jc["index"].get<int>());
        row(scope, "writhe", jc["writhe"].get<double>());
        row(scope, "total_torsion", jc["total_torsion"].get<double>());
        if (jc.contains("helicity_report")) {
            const auto& h = jc["helicity_report"];
            for (const char* key : {"twist", "intrinsic_twist", "self_linking", "flux",
                                    "centerline_helicity", "intrinsic_twist_helicity",
                                    "helicity"}) {
                row(scope, key, h[key].get<double>());
            }
        }
    }
    for (const auto& jp : report["pairs"]) {
        const std::string scope = "pair:" + std::to_string(jp["a"].get<int>()) + "-" +
                                  std::to_string(jp["b"].get<int>());
        row(scope, "linking_number_gauss", jp["linking_number_gauss"].get<double>());
    }
    row("system", "writhe", report["system_writhe"].get<double>());
    if (report.contains("projection")) {
        row("system", "directional_writhe",
            report["projection"]["directional_writhe"].get<double>());
    }
    return csv;
}

// ---- reconnect -----------------------------------------------------------------

int cmd_reconnect(const std::string& in, const std::string& site_arg,
                  const std::string& out, const Tolerances& tol) {
    const wl::StoredSystem stored = wl::read_curve_file(in);
    const auto [sa, sb] = parse_site(site_arg);
    const double conservation = tol.get("conservation", 1e-9);
    wl::ReconnectionSite site{sa, sb, tol.get("snap", 1e-9)};

    wl::ReconnectionLedger ledger;
    wl::StoredSystem result;
    if (stored.components.size() == 2) {
        auto [tube, led] =
            wl::reconnect_tubes(tube_from(stored.components[0]),
                                tube_from(stored.components[1]), site);
        ledger = led;
        wl::StoredComponent comp;
        comp.vertices = tube.ribbon().curve().vertices();
        comp.framing = tube.ribbon().framing();
        comp.flux = tube.flux();
        result.components.push_back(std::move(comp));
    } else if (stored.components.size() == 1) {
        auto [tubes, led] = wl::self_reconnect_tube(tube_from(stored.components[0]), site);
        ledger = led;
        for (const auto& tube : tubes) {
            wl::StoredComponent comp;
            comp.vertices = tube.ribbon().curve().vertices();
            comp.framing = tube.ribbon().framing();
            comp.flux = tube.flux();
            result.components.push_back(std::move(comp));
        }
    } else {
        throw wl::InvalidParameterError(
            "reconnect expects a 1-component (self) or 2-component (pair) input");
    }

    wl::write_curve_file(out, result);
    const std::string ledger_json = wl::format_ledger(ledger);
    write_text(out + ".ledger.json", ledger_json + "\n");
    std::cout << ledger_json << "\n";

    const double delta_wr = std::fabs(ledger.wr_before - ledger.wr_after);
    if (delta_wr > conservation) {
        std::cerr << "writhe conservation violated: |dWr| = " << delta_wr
                  << " > " << conservation << "\n";
        return 2;
    }
    return 0;
}

// ---- pathway -------------------------------------------------------------------

int cmd_pathway(const std::string& out_dir, const std::string& fixtures_dir,
                const Tolerances& tol) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const wl::PathwayRun run = wl::run_pathway();

    auto dump_state = [&](const wl::CurveSystem& system, const std::string& name) {
        wl::StoredSystem stored;
        for (const auto& c : system.components()) {
            wl::StoredComponent comp;
            comp.vertices = c.vertices();
            stored.components.push_back(std::move(comp));
        }
        wl::write_curve_file((fs::path(out_dir) / name).string(), stored);
    };

    dump_state(run.initial, "step0_trefoil.json");
    std::string csv =
        "step,name,components,wr_before,wr_after,abs_delta_wr,delta_tw,delta_h\r\n";
    const std::string names[3] = {"step1_hopf_pair.json", "step2_unknot.json",
                                  "step3_unlinked_pair.json"};
    bool conserved = true;
    const double conservation = tol.get("conservation", 1e-9);
    for (std::size_t k = 0; k < run.steps.size(); ++k) {
        const auto& step = run.steps[k];
        dump_state(step.state, names[k]);
        write_text((fs::path(out_dir) / ("ledger" + std::to_string(k + 1) + ".json")).string(),
                   wl::format_ledger(step.ledger) + "\n");
        const double dwr = std::fabs(step.ledger.wr_before - step.ledger.wr_after);
        conserved = conserved && dwr <= conservation;
        csv += std::to_string(k + 1) + "," + step.name + "," +
               std::to_string(step.state.size()) + "," +
               wl::format_double(step.ledger.wr_before) + "," +
               wl::format_double(step.ledger.wr_after) + "," + wl::format_double(dwr) +
               "," + wl::format_double(step.ledger.delta_tw) + "," +
               wl::format_double(step.ledger.delta_h) + "\r\n";

        json info;
        info["components"] = step.state.size();
        info["wr_after"] = step.ledger.wr_after;
        json lk_table = json::array();
        for (std::size_t i = 0; i < step.state.size(); ++i) {
            for (std::size_t j = i + 1; j < step.state.size(); ++j) {
                json jp;
                jp["a"] = i;
                jp["b"] = j;
                jp["linking_number_gauss"] = wl::linking_number_gauss(
                    step.state.component(i), step.state.component(j));
                lk_table.push_back(jp);
            }
        }
        info["lk_table"] = lk_table;
        std::cout << "step " << (k + 1) << " (" << step.name
                  << "): " << info.dump() << "\n";
    }
    write_text((fs::path(out_dir) / "summary.csv").string(), csv);

    // Digitized tracing frames: their directional writhe along +z must be +1.
    const fs::path frames = fs::path(fixtures_dir) / "fig2c";
    if (fs::exists(frames)) {
        std::string frame_csv = "frame,directional_writhe\r\n";
        bool frames_ok = true;
        for (int t = 0; t <= 3; ++t) {
            const std::string file = (frames / ("frame_t" + std::to_string(t) + ".json")).string();
            const wl::StoredSystem stored = wl::read_curve_file(file);
            const wl::ProjectionReport rep =
                wl::directional_writhe(stored.curves(), {0, 0, 1});
            frame_csv += "t" + std::to_string(t) + "," +
                         std::to_string(rep.directional_writhe) + "\r\n";
            frames_ok = frames_ok && rep.directional_writhe == 1;
        }
        write_text((fs::path(out_dir) / "fig2c.csv").string(), frame_csv);
        if (!frames_ok) {
            std::cerr << "digitized frame directional writhe differs from +1\n";
            return 2;
        }
    }

    if (!conserved) {
        std::cerr << "writhe conservation violated along the pathway\n";
        return 2;
    }
    return 0;
}

// ---- sweep ---------------------------------------------------------------------

int cmd_sweep(const std::string& in, std::uint64_t samples, std::uint64_t seed,
              const std::string& out) {
    const wl::StoredSystem stored = wl::read_curve_file(in);
    if (stored.components.size() != 1) {
        throw wl::InvalidParameterError("sweep expects a single-component input");
    }
    const wl::PolygonalCurve curve(stored.components[0].vertices);
    const double reference = wl::writhe(curve);
    std::string csv = "samples,estimate,stderr,reference\r\n";
    for (std::uint64_t n = 2; n <= samples; n *= 2) {
        const wl::MonteCarloEstimate mc = wl::writhe_monte_carlo(curve, n, seed);
        csv += std::to_string(n) + "," + wl::format_double(mc.estimate) + "," +
               wl::format_double(mc.stderr_) + "," + wl::format_double(reference) +
               "\r\n";
    }
    if (out.empty()) {
        std::cout << csv;
    } else {
        write_text(out, csv);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"writhe-lab: writhe, twist and helicity of polygonal curves, "
                 "and anti-parallel reconnection surgery"};
    app.require_subcommand(1);

    unsigned threads = 1;
    app.add_option("--threads", threads, "kernel worker threads (results are bit-identical)");
    std::vector<std::string> tol_raw;
    app.add_option("--tol", tol_raw, "tolerance override NAME=VALUE (repeatable)");

    GenOptions gen;
    CLI::App* gen_cmd = app.add_subcommand("gen", "generate a curve file");
    gen_cmd->add_option("kind", gen.kind, "circle|torus_knot|hopf|random")->required();
    gen_cmd->add_option("--out", gen.out, "output curve file")->required();
    gen_cmd->add_option("--n", gen.n, "vertex count");
    gen_cmd->add_option("--radius", gen.radius, "circle/hopf radius");
    gen_cmd->add_option("--R", gen.big_radius, "torus major radius");
    gen_cmd->add_option("--r", gen.small_radius, "torus minor radius");
    gen_cmd->add_option("--p", gen.p, "torus knot p");
    gen_cmd->add_option("--q", gen.q, "torus knot q");
    gen_cmd->add_option("--separation", gen.separation, "hopf center separation");
    gen_cmd->add_option("--seed", gen.seed, "random generator seed");
    gen_cmd->add_option("--center", gen.center, "circle center X,Y,Z");
    gen_cmd->add_option("--normal", gen.normal, "circle normal X,Y,Z");

    std::string in_path, out_path, nu_arg, site_arg, csv_path;
    CLI::App* inv_cmd = app.add_subcommand("invariants", "invariant report for a curve file");
    inv_cmd->add_option("--in", in_path, "input curve file")->required();
    inv_cmd->add_option("--out", out_path, "write the JSON report here");
    inv_cmd->add_option("--csv", csv_path, "write the flat CSV report here");
    inv_cmd->add_option("--nu", nu_arg, "projection direction X,Y,Z");

    std::string r_in, r_out, r_site;
    CLI::App* rec_cmd = app.add_subcommand("reconnect", "anti-parallel reconnection surgery");
    rec_cmd->add_option("--in", r_in, "input curve file (1 or 2 components)")->required();
    rec_cmd->add_option("--site", r_site, "site edge indices I,J")->required();
    rec_cmd->add_option("--out", r_out, "output curve file")->required();

    std::string p_out = "pathway_out", p_fixtures = "fixtures";
    CLI::App* path_cmd = app.add_subcommand("pathway", "run the minimal reconnection pathway");
    path_cmd->add_option("--out-dir", p_out, "output directory");
    path_cmd->add_option("--fixtures", p_fixtures, "fixtures directory (fig2c frames)");

    std::string s_in, s_out;
    std::uint64_t s_samples = 1 << 16, s_seed = 0;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "monte carlo convergence sweep");
    sweep_cmd->add_option("--in", s_in, "input curve file (single component)")->required();
    sweep_cmd->add_option("--samples", s_samples, "maximum sample count");
    sweep_cmd->add_option("--seed", s_seed, "sampler seed");
    sweep_cmd->add_option("--out", s_out, "output CSV (stdout when omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        wl::set_kernel_threads(threads);
        const Tolerances tol = parse_tolerances(tol_raw);
        if (gen_cmd->parsed()) return cmd_gen(gen);
        if (inv_cmd->parsed()) {
            const json report = invariants_report(wl::read_curve_file(in_path), nu_arg);
            const std::string text = report.dump(2);
            if (!out_path.empty()) write_text(out_path, text + "\n");
            if (!csv_path.empty()) write_text(csv_path, invariants_csv(report));
            std::cout << text << "\n";
            return 0;
        }
        if (rec_cmd->parsed()) return cmd_reconnect(r_in, r_site, r_out, tol);
        if (path_cmd->parsed()) return cmd_pathway(p_out, p_fixtures, tol);
        if (sweep_cmd->parsed()) return cmd_sweep(s_in, s_samples, s_seed, s_out);
    } catch (const wl::IoError& e) {
        std::cerr << "error: " << e.what();
        if (e.byte_offset() >= 0) std::cerr << " (byte " << e.byte_offset() << ")";
        std::cerr << "\n";
        return 1;
    } catch (const wl::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
