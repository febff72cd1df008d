#include "fpm/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "fpm/bootstrap.hpp"
#include "fpm/errors.hpp"
#include "fpm/gcode.hpp"
#include "fpm/io.hpp"
#include "fpm/sensitivity.hpp"

namespace fpm::cli {

namespace {

constexpr double kPi = 3.141592653589793238462643383279;
constexpr double kDegToRad = kPi / 180.0;

int default_threads() {
    if (const char* env = std::getenv("FPM_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

struct Output {
    std::string path;  // empty = stdout
    bool force = false;

    void write(const std::string& data, const nlohmann::json& manifest) const {
        if (path.empty()) {
            std::cout << data;
            std::cerr << "manifest: " << manifest.dump() << "\n";
            return;
        }
        write_text_file(path, data, force);
        write_text_file(path + ".manifest.json", manifest.dump(2) + "\n", force);
    }
};

nlohmann::json make_manifest(const std::string& subcommand, const nlohmann::json& config,
                             const std::vector<std::string>& inputs, const Output& out) {
    nlohmann::json j;
    j["tool"] = "fpm";
    j["version"] = kToolVersion;
    j["subcommand"] = subcommand;
    j["config"] = config;
    j["inputs"] = inputs;
    j["outputs"] = out.path.empty() ? nlohmann::json::array({"stdout"})
                                    : nlohmann::json::array({out.path});
    return j;
}

Vec3 parse_vec3(const std::string& text) {
    std::istringstream in(text);
    std::string cell;
    double v[3];
    for (int k = 0; k < 3; ++k) {
        if (!std::getline(in, cell, ','))
            throw Error("expected three comma-separated components, got '" + text + "'");
        v[k] = std::stod(cell);
    }
    return {v[0], v[1], v[2]};
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::istringstream in(text);
    std::string cell;
    while (std::getline(in, cell, ',')) out.push_back(std::stod(cell));
    return out;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        v[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    return v;
}

std::string format_csv(double v) {
    std::ostringstream s;
    s.precision(12);
    s << v;
    return s.str();
}

struct CommonSensitivityFlags {
    double sigma_rel = 5e-4;
    int points = 50;
    int instances = 50;
    double workspace = 0.4;
    std::uint64_t seed = 0;
    std::string aggregate = "rms";
    std::string reference = "type-mean";

    void attach(CLI::App* cmd) {
        cmd->add_option("--sigma-rel", sigma_rel, "noise std as a fraction of L_c");
        cmd->add_option("--points", points, "workspace samples per instance");
        cmd->add_option("--instances", instances, "perturbation instances");
        cmd->add_option("--workspace", workspace, "relative workspace W_d/L_c");
        cmd->add_option("--seed", seed, "root random seed");
        cmd->add_option("--aggregate", aggregate, "rms | mean | ratio-of-means")
            ->check(CLI::IsMember({"rms", "mean", "ratio-of-means"}));
        cmd->add_option("--reference", reference, "type-mean | nominal link-RMSE reference")
            ->check(CLI::IsMember({"type-mean", "nominal"}));
    }

    SensitivityConfig to_config() const {
        SensitivityConfig cfg;
        cfg.sigma_rel = sigma_rel;
        cfg.n_points = points;
        cfg.n_instances = instances;
        cfg.workspace_rel = workspace;
        cfg.seed = seed;
        cfg.aggregate = aggregate == "mean" ? SensitivityAggregate::MeanOfRatios
                        : aggregate == "ratio-of-means" ? SensitivityAggregate::RatioOfMeans
                                                        : SensitivityAggregate::RmsOfRatios;
        cfg.reference = reference == "nominal" ? LinkRmseReference::Nominal
                                               : LinkRmseReference::TypeMean;
        return cfg;
    }

    nlohmann::json to_json() const {
        return {{"sigma_rel", sigma_rel}, {"points", points},   {"instances", instances},
                {"workspace", workspace}, {"seed", seed},       {"aggregate", aggregate},
                {"reference", reference}};
    }
};

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Flat-Plane Mechanism toolkit"};
    app.require_subcommand(1);

    // ---- fk ----
    auto* fk_cmd = app.add_subcommand("fk", "forward kinematics at one control pose");
    std::string fk_design;
    double fk_theta = 0.0, fk_phi = 0.0;
    Output fk_out;
    fk_cmd->add_option("--design", fk_design, "design JSON file")->required();
    fk_cmd->add_option("--theta", fk_theta, "control deflection, degrees")->required();
    fk_cmd->add_option("--phi", fk_phi, "control azimuth, degrees");
    fk_cmd->add_option("-o,--output", fk_out.path, "output path (default stdout)");
    fk_cmd->add_flag("--force", fk_out.force, "overwrite existing outputs");

    // ---- ik ----
    auto* ik_cmd = app.add_subcommand("ik", "inverse kinematics for a planar target");
    std::string ik_design;
    double ik_x = 0.0, ik_y = 0.0;
    Output ik_out;
    ik_cmd->add_option("--design", ik_design)->required();
    ik_cmd->add_option("--x", ik_x, "target x, design units")->required();
    ik_cmd->add_option("--y", ik_y, "target y, design units")->required();
    ik_cmd->add_option("-o,--output", ik_out.path);
    ik_cmd->add_flag("--force", ik_out.force);

    // ---- validate ----
    auto* val_cmd = app.add_subcommand("validate", "design-space validity report");
    std::string val_design;
    Output val_out;
    val_cmd->add_option("--design", val_design)->required();
    val_cmd->add_option("-o,--output", val_out.path);
    val_cmd->add_flag("--force", val_out.force);

    // ---- links ----
    auto* links_cmd = app.add_subcommand("links", "convert between design parameters and link lengths");
    std::string links_design;
    Output links_out;
    links_cmd->add_option("--design", links_design)->required();
    links_cmd->add_option("-o,--output", links_out.path);
    links_cmd->add_flag("--force", links_out.force);

    // ---- sensitivity ----
    auto* sens_cmd = app.add_subcommand("sensitivity", "Monte Carlo kinematic sensitivity S_k");
    std::string sens_design;
    CommonSensitivityFlags sens_flags;
    Output sens_out;
    sens_cmd->add_option("--design", sens_design)->required();
    sens_flags.attach(sens_cmd);
    sens_cmd->add_option("-o,--output", sens_out.path);
    sens_cmd->add_flag("--force", sens_out.force);

    // ---- sweep ----
    auto* sweep_cmd = app.add_subcommand("sweep", "S_k landscape over an (H, R) grid, L_c = 1");
    std::string sweep_grid = "20x20", sweep_h = "0.025:0.5", sweep_r = "0.1:1.05";
    double sweep_gamma = 90.0;
    int sweep_threads = default_threads();
    CommonSensitivityFlags sweep_flags;
    Output sweep_out;
    sweep_cmd->add_option("--grid", sweep_grid, "nodes as NHxNR");
    sweep_cmd->add_option("--h-range", sweep_h, "H range lo:hi");
    sweep_cmd->add_option("--r-range", sweep_r, "R range lo:hi");
    sweep_cmd->add_option("--gamma", sweep_gamma, "apex angle, degrees");
    sweep_cmd->add_option("--threads", sweep_threads, "worker cap (FPM_THREADS default)");
    sweep_flags.instances = 20;
    sweep_flags.attach(sweep_cmd);
    sweep_cmd->add_option("-o,--output", sweep_out.path);
    sweep_cmd->add_flag("--force", sweep_out.force);

    // ---- tradeoff ----
    auto* trade_cmd = app.add_subcommand("tradeoff", "workspace-flatness trade-off curve");
    std::string trade_design, trade_levels = "0.1,0.2,0.4";
    CommonSensitivityFlags trade_flags;
    Output trade_out;
    trade_cmd->add_option("--design", trade_design)->required();
    trade_cmd->add_option("--levels", trade_levels, "ascending workspace levels");
    trade_flags.attach(trade_cmd);
    trade_cmd->add_option("-o,--output", trade_out.path);
    trade_cmd->add_flag("--force", trade_out.force);

    // ---- flatness ----
    auto* flat_cmd = app.add_subcommand("flatness", "RMS flatness of a surface scan");
    std::string flat_scan;
    Output flat_out;
    flat_cmd->add_option("--scan", flat_scan, "scan CSV (x,y,z)")->required();
    flat_cmd->add_option("-o,--output", flat_out.path);
    flat_cmd->add_flag("--force", flat_out.force);

    // ---- calibrate ----
    auto* cal_cmd = app.add_subcommand("calibrate", "build a Z-error field from a reference scan");
    std::string cal_scan;
    Output cal_out;
    cal_cmd->add_option("--scan", cal_scan)->required();
    cal_cmd->add_option("-o,--output", cal_out.path);
    cal_cmd->add_flag("--force", cal_out.force);

    // ---- compensate ----
    auto* comp_cmd = app.add_subcommand("compensate", "apply a Z-error field to a scan");
    std::string comp_scan, comp_field;
    bool comp_omit = false;
    Output comp_out;
    comp_cmd->add_option("--scan", comp_scan)->required();
    comp_cmd->add_option("--field", comp_field)->required();
    comp_cmd->add_flag("--omit-out-of-domain", comp_omit,
                       "error on out-of-domain points instead of clipping");
    comp_cmd->add_option("-o,--output", comp_out.path);
    comp_cmd->add_flag("--force", comp_out.force);

    // ---- tilt ----
    auto* tilt_cmd = app.add_subcommand("tilt", "tilt angle between two plane normals");
    std::string tilt_ni, tilt_ng;
    Output tilt_out;
    tilt_cmd->add_option("--ni", tilt_ni, "normal as x,y,z")->required();
    tilt_cmd->add_option("--ng", tilt_ng, "normal as x,y,z")->required();
    tilt_cmd->add_option("-o,--output", tilt_out.path);
    tilt_cmd->add_flag("--force", tilt_out.force);

    // ---- bootstrap ----
    auto* boot_cmd = app.add_subcommand("bootstrap", "measurement-free fabrication refinement");
    std::uint64_t boot_seed = 0;
    int boot_iters = 3;
    NoiseModel boot_noise;
    std::string boot_init = "1,2,3,2,3";
    int boot_sk_instances = 50;
    Output boot_out;
    boot_cmd->add_option("--seed", boot_seed);
    boot_cmd->add_option("--iters", boot_iters);
    boot_cmd->add_option("--copy-noise", boot_noise.copy_sigma_rel);
    boot_cmd->add_option("--closure-noise", boot_noise.closure_sigma_rel);
    boot_cmd->add_option("--cut-noise", boot_noise.cut_sigma_rel);
    boot_cmd->add_option("--init", boot_init, "initial lengths A,B,C,K,D");
    boot_cmd->add_option("--sk-instances", boot_sk_instances, "instances per s_k evaluation");
    boot_cmd->add_option("-o,--output", boot_out.path);
    boot_cmd->add_flag("--force", boot_out.force);

    // ---- scale-link ----
    auto* scale_cmd = app.add_subcommand("scale-link", "integer-multiple link scaling trace");
    double scale_seed_length = 1.0;
    int scale_n = 3, scale_max_iters = 6;
    std::uint64_t scale_seed = 0;
    NoiseModel scale_noise;
    Output scale_out;
    scale_cmd->add_option("--seed-length", scale_seed_length);
    scale_cmd->add_option("--n", scale_n, "integer multiple")->required();
    scale_cmd->add_option("--seed", scale_seed);
    scale_cmd->add_option("--max-iters", scale_max_iters);
    scale_cmd->add_option("--copy-noise", scale_noise.copy_sigma_rel);
    scale_cmd->add_option("--closure-noise", scale_noise.closure_sigma_rel);
    scale_cmd->add_option("--cut-noise", scale_noise.cut_sigma_rel);
    scale_cmd->add_option("-o,--output", scale_out.path);
    scale_cmd->add_flag("--force", scale_out.force);

    // ---- plan ----
    auto* plan_cmd = app.add_subcommand("plan", "convert G-code into joint-space samples");
    std::string plan_gcode, plan_design, plan_field, plan_lines_json;
    double plan_max_segment = 1.0;
    Output plan_out;
    plan_cmd->add_option("--gcode", plan_gcode, "G-code text file")->required();
    plan_cmd->add_option("--design", plan_design)->required();
    plan_cmd->add_option("--field", plan_field, "optional Z-error field JSON");
    plan_cmd->add_option("--max-segment", plan_max_segment);
    plan_cmd->add_option("--lines-json", plan_lines_json, "also write per-sample source lines");
    plan_cmd->add_option("-o,--output", plan_out.path);
    plan_cmd->add_flag("--force", plan_out.force);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            std::cout << app.help();
            return 0;
        }
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (*fk_cmd) {
            const DesignFile d = load_design(fk_design);
            const auto [endpoint, trace] =
                forward(d.links, {fk_theta * kDegToRad, fk_phi * kDegToRad});
            std::ostringstream s;
            s.precision(12);
            s << endpoint.x() << ' ' << endpoint.y() << ' ' << endpoint.z() << '\n';
            fk_out.write(s.str(), make_manifest("fk",
                                                {{"theta_deg", fk_theta}, {"phi_deg", fk_phi}},
                                                {fk_design}, fk_out));
        } else if (*ik_cmd) {
            const DesignFile d = load_design(ik_design);
            const JointAngles j = inverse(d.links, ik_x, ik_y);
            std::ostringstream s;
            s.precision(12);
            s << j.alpha / kDegToRad << ' ' << j.beta / kDegToRad << '\n';
            ik_out.write(s.str(),
                         make_manifest("ik", {{"x", ik_x}, {"y", ik_y}}, {ik_design}, ik_out));
        } else if (*val_cmd) {
            const DesignFile d = load_design(val_design);
            const ValidityReport rep = validate_links(d.links);
            nlohmann::json j;
            j["valid"] = rep.valid;
            j["obtuse_check"] = rep.obtuse_check;
            j["triangle_check"] = rep.triangle_check;
            j["apex_check"] = rep.apex_check;
            j["margins"] = rep.margins;
            val_out.write(j.dump(2) + "\n", make_manifest("validate", {}, {val_design}, val_out));
        } else if (*links_cmd) {
            const DesignFile d = load_design(links_design);
            nlohmann::json j;
            j["links"] = {{"A", d.links.a}, {"B", d.links.b}, {"C", d.links.c}, {"D", d.links.d}};
            if (!d.params) {
                const DesignParams p = design_from_links(d.links);
                j["L_c"] = p.l_c;
                j["R"] = p.r;
                j["H"] = p.h;
                j["gamma_deg"] = p.gamma / kDegToRad;
            } else {
                j["L_c"] = d.params->l_c;
                j["R"] = d.params->r;
                j["H"] = d.params->h;
                j["gamma_deg"] = d.params->gamma / kDegToRad;
            }
            j["unit"] = d.unit;
            links_out.write(j.dump(2) + "\n",
                            make_manifest("links", {}, {links_design}, links_out));
        } else if (*sens_cmd) {
            const DesignFile d = load_design(sens_design);
            const SensitivityResult res = kinematic_sensitivity(d.links, sens_flags.to_config());
            std::ostringstream s;
            s.precision(12);
            s << "s_k " << res.s_k << "\n"
              << "ci95 " << res.ci95 << "\n"
              << "flatness_rmse_mean " << res.flatness_rmse_mean << "\n"
              << "link_rmse_mean " << res.link_rmse_mean << "\n"
              << "failures " << res.failures << "\n";
            sens_out.write(s.str(), make_manifest("sensitivity", sens_flags.to_json(),
                                                  {sens_design}, sens_out));
        } else if (*sweep_cmd) {
            int nh = 0, nr = 0;
            if (std::sscanf(sweep_grid.c_str(), "%dx%d", &nh, &nr) != 2 || nh < 1 || nr < 1)
                throw Error("sweep: --grid must look like 20x20");
            const auto h_range = parse_list(std::string(sweep_h).replace(sweep_h.find(':'), 1, ","));
            const auto r_range = parse_list(std::string(sweep_r).replace(sweep_r.find(':'), 1, ","));
            if (h_range.size() != 2 || r_range.size() != 2)
                throw Error("sweep: ranges must look like lo:hi");
            const auto rows = sweep_landscape(linspace(h_range[0], h_range[1], nh),
                                              linspace(r_range[0], r_range[1], nr),
                                              sweep_gamma * kDegToRad, sweep_flags.to_config(),
                                              sweep_threads);
            std::ostringstream s;
            s << "H,R,gamma,H_over_R,s_k,ci95,failures\n";
            for (const auto& row : rows)
                s << format_csv(row.h) << ',' << format_csv(row.r) << ','
                  << format_csv(sweep_gamma) << ',' << format_csv(row.h_over_r) << ','
                  << format_csv(row.s_k) << ',' << format_csv(row.ci95) << ','
                  << row.failures << '\n';
            nlohmann::json cfg = sweep_flags.to_json();
            cfg["grid"] = sweep_grid;
            cfg["h_range"] = sweep_h;
            cfg["r_range"] = sweep_r;
            cfg["gamma_deg"] = sweep_gamma;
            cfg["threads"] = sweep_threads;
            sweep_out.write(s.str(), make_manifest("sweep", cfg, {}, sweep_out));
        } else if (*trade_cmd) {
            const DesignFile d = load_design(trade_design);
            const auto levels = parse_list(trade_levels);
            const auto curve = workspace_flatness_curve(d.links, trade_flags.to_config(), levels);
            std::ostringstream s;
            s << "w_rel,flatness_rmse,ci95,failures\n";
            for (const auto& pt : curve)
                s << format_csv(pt.w_rel) << ',' << format_csv(pt.flatness_rmse) << ','
                  << format_csv(pt.ci95) << ',' << pt.failures << '\n';
            nlohmann::json cfg = trade_flags.to_json();
            cfg["levels"] = levels;
            trade_out.write(s.str(), make_manifest("tradeoff", cfg, {trade_design}, trade_out));
        } else if (*flat_cmd) {
            const SurfaceScan scan = load_scan_csv(flat_scan);
            std::ostringstream s;
            s.precision(12);
            s << flatness_rmse(scan) << '\n';
            flat_out.write(s.str(), make_manifest("flatness", {}, {flat_scan}, flat_out));
        } else if (*cal_cmd) {
            const SurfaceScan scan = load_scan_csv(cal_scan);
            const ErrorField field = build_error_field(scan);
            nlohmann::json j;
            j["plane"] = {{"a", field.a}, {"b", field.b}, {"c", field.c}};
            j["grid"] = {{"xs", field.xs}, {"ys", field.ys}, {"e", field.e}};
            cal_out.write(j.dump(2) + "\n", make_manifest("calibrate", {}, {cal_scan}, cal_out));
        } else if (*comp_cmd) {
            const SurfaceScan scan = load_scan_csv(comp_scan);
            const ErrorField field = load_field_json(comp_field);
            const SurfaceScan corrected = compensate(scan, field, !comp_omit);
            std::ostringstream s;
            s.precision(17);
            s << "# unit=mm\nx,y,z\n";
            for (const Vec3& p : corrected.points)
                s << p.x() << ',' << p.y() << ',' << p.z() << '\n';
            comp_out.write(s.str(), make_manifest("compensate", {{"omit", comp_omit}},
                                                  {comp_scan, comp_field}, comp_out));
        } else if (*tilt_cmd) {
            std::ostringstream s;
            s.precision(12);
            s << tilt_between_planes(parse_vec3(tilt_ni), parse_vec3(tilt_ng)) << '\n';
            tilt_out.write(s.str(), make_manifest("tilt", {{"ni", tilt_ni}, {"ng", tilt_ng}},
                                                  {}, tilt_out));
        } else if (*boot_cmd) {
            const auto init_lengths = parse_list(boot_init);
            if (init_lengths.size() != 5)
                throw Error("bootstrap: --init needs A,B,C,K,D");
            BootstrapState init;
            init.len_a = init_lengths[0];
            init.len_b = init_lengths[1];
            init.len_c = init_lengths[2];
            init.len_k = init_lengths[3];
            init.len_d = init_lengths[4];
            SensitivityConfig sk_cfg;
            sk_cfg.n_instances = boot_sk_instances;
            sk_cfg.seed = RandomStream(boot_seed).substream(1).next_u64();
            const auto states = bootstrap_refine(init, boot_noise, RandomStream(boot_seed),
                                                 boot_iters, sk_cfg);
            std::ostringstream s;
            s << "iter,len_A,len_B,len_C,len_K,len_D,delta_mean,s_k\n";
            for (const auto& st : states)
                s << st.iteration << ',' << format_csv(st.len_a) << ',' << format_csv(st.len_b)
                  << ',' << format_csv(st.len_c) << ',' << format_csv(st.len_k) << ','
                  << format_csv(st.len_d) << ',' << format_csv(st.delta_mean) << ','
                  << format_csv(st.s_k) << '\n';
            nlohmann::json cfg = {{"seed", boot_seed},
                                  {"iters", boot_iters},
                                  {"init", boot_init},
                                  {"copy_noise", boot_noise.copy_sigma_rel},
                                  {"closure_noise", boot_noise.closure_sigma_rel},
                                  {"cut_noise", boot_noise.cut_sigma_rel},
                                  {"sk_instances", boot_sk_instances}};
            boot_out.write(s.str(), make_manifest("bootstrap", cfg, {}, boot_out));
        } else if (*scale_cmd) {
            const ScalingTrace trace = scale_link_integer(scale_seed_length, scale_n, scale_noise,
                                                          RandomStream(scale_seed), scale_max_iters);
            std::ostringstream s;
            s << "iter,estimated_length,relative_error\n";
            for (const auto& step : trace)
                s << step.iteration << ',' << format_csv(step.estimated_length) << ','
                  << format_csv(step.relative_error) << '\n';
            nlohmann::json cfg = {{"seed", scale_seed},
                                  {"n", scale_n},
                                  {"seed_length", scale_seed_length},
                                  {"max_iters", scale_max_iters}};
            scale_out.write(s.str(), make_manifest("scale-link", cfg, {}, scale_out));
        } else if (*plan_cmd) {
            const DesignFile d = load_design(plan_design);
            const std::string text = read_text_file(plan_gcode);
            const auto cmds = parse_gcode(text);
            std::optional<ErrorField> field;
            if (!plan_field.empty()) field = load_field_json(plan_field);
            PlanConfig pc;
            pc.max_segment = plan_max_segment;
            const auto samples =
                plan_trajectory(cmds, d.links, field ? &*field : nullptr, pc);
            std::ostringstream s;
            s << "index,alpha_rad,beta_rad,z_mm\n";
            s.precision(12);
            for (const auto& sample : samples)
                s << sample.index << ',' << sample.alpha << ',' << sample.beta << ','
                  << sample.z << '\n';
            nlohmann::json cfg = {{"max_segment", plan_max_segment}};
            plan_out.write(s.str(), make_manifest("plan", cfg,
                                                  {plan_gcode, plan_design}, plan_out));
            if (!plan_lines_json.empty()) {
                nlohmann::json lines = nlohmann::json::array();
                for (const auto& sample : samples)
                    lines.push_back({{"index", sample.index}, {"line", sample.source_line}});
                write_text_file(plan_lines_json, lines.dump(2) + "\n", plan_out.force);
            }
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace fpm::cli
