#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "aeroflex/control.hpp"
#include "aeroflex/metrics.hpp"
#include "aeroflex/sim.hpp"
#include "aeroflex/trim.hpp"
#include "aeroflex/turbulence.hpp"

namespace fs = std::filesystem;
using namespace aeroflex;

namespace {

AircraftConfig resolve_config(const std::string& path) {
    if (path.empty() || path == "default") return default_aircraft();
    if (!fs::exists(path)) {
        std::cerr << "config not found: " << path << "\n";
        std::exit(2);
    }
    return load_config(path);
}

void write_trim_report(const TrimPoint& tp, const std::string& path,
                       const std::string& format) {
    if (format == "csv") {
        std::ofstream out(path);
        out << "V_ms,alpha_rad,elevator_rad,thrust_N,Fw_N,Mphi_Nm,residual\n";
        out << tp.V << "," << tp.alpha << "," << tp.elevator << ","
            << tp.thrust << "," << tp.root_loads(0) << "," << tp.root_loads(1)
            << "," << tp.residual << "\n";
    } else {
        nlohmann::json j;
        j["V_ms"] = tp.V;
        j["alpha_rad"] = tp.alpha;
        j["alpha_deg"] = rad2deg(tp.alpha);
        j["elevator_rad"] = tp.elevator;
        j["elevator_deg"] = rad2deg(tp.elevator);
        j["thrust_N"] = tp.thrust;
        j["Fw_N"] = tp.root_loads(0);
        j["Mphi_Nm"] = tp.root_loads(1);
        j["residual"] = tp.residual;
        std::ofstream out(path);
        out << j.dump(2) << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"flexible-aircraft flight dynamics and load-control toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", format = "json";
    uint64_t seed = 1;
    app.add_option("--config", config_path, "aircraft config file (or 'default')");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--format", format, "output format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));

    double V = 35.0, altitude = 1000.0;
    bool rigid = false;

    auto* cmd_trim = app.add_subcommand("trim", "solve straight-level trim");
    cmd_trim->add_option("--speed", V, "airspeed m/s");
    cmd_trim->add_option("--altitude", altitude, "altitude m");
    cmd_trim->add_flag("--rigid", rigid, "rigid-aircraft variant");

    auto* cmd_lin = app.add_subcommand("linearize", "linear model about trim");
    cmd_lin->add_option("--speed", V, "airspeed m/s");
    cmd_lin->add_option("--altitude", altitude, "altitude m");
    cmd_lin->add_flag("--rigid", rigid, "rigid-aircraft variant");

    auto* cmd_modes = app.add_subcommand("modes", "eigenmodes about trim");
    cmd_modes->add_option("--speed", V, "airspeed m/s");
    cmd_modes->add_option("--altitude", altitude, "altitude m");
    cmd_modes->add_flag("--rigid", rigid, "rigid-aircraft variant");

    double ext_x = 4096.0, ext_y = 512.0, spacing = 2.0, Lg = 762.0, sigma = 6.0;
    auto* cmd_turb = app.add_subcommand("gen-turbulence",
                                        "synthesize a frozen gust field");
    cmd_turb->add_option("--extent-x", ext_x, "field length m");
    cmd_turb->add_option("--extent-y", ext_y, "field width m");
    cmd_turb->add_option("--spacing", spacing, "grid spacing m");
    cmd_turb->add_option("--length-scale", Lg, "turbulence length scale m");
    cmd_turb->add_option("--sigma", sigma, "gust intensity m/s");

    std::string scenario_path;
    auto* cmd_run = app.add_subcommand("run", "run a closed-loop scenario");
    cmd_run->add_option("scenario", scenario_path, "scenario file")->required();

    std::string log_path, baseline_path;
    auto* cmd_metrics = app.add_subcommand("metrics", "metrics from a log");
    cmd_metrics->add_option("log", log_path, "log csv")->required();
    cmd_metrics->add_option("--baseline", baseline_path, "baseline log csv");

    auto* cmd_lqr = app.add_subcommand("design-wing-lqr",
                                       "wing load-control gain design");
    cmd_lqr->add_option("--speed", V, "airspeed m/s");
    cmd_lqr->add_option("--altitude", altitude, "altitude m");

    CLI11_PARSE(app, argc, argv);

    try {
        fs::create_directories(out_dir);
        if (*cmd_trim) {
            const AircraftConfig cfg = resolve_config(config_path);
            const AircraftModel ac = build_aircraft(cfg, V, altitude, rigid);
            const TrimPoint tp = trim_aircraft(ac, V);
            write_trim_report(tp, out_dir + "/trim." + format, format);
            std::cout << "alpha " << rad2deg(tp.alpha) << " deg, elevator "
                      << rad2deg(tp.elevator) << " deg, thrust " << tp.thrust
                      << " N, residual " << tp.residual << "\n";
        } else if (*cmd_lin || *cmd_modes) {
            const AircraftConfig cfg = resolve_config(config_path);
            const AircraftModel ac = build_aircraft(cfg, V, altitude, rigid);
            const TrimPoint tp = trim_aircraft(ac, V);
            const LinearModel lm = linearize(ac, tp);
            if (*cmd_lin) {
                std::ofstream out(out_dir + "/linear_model.csv");
                out.precision(14);
                for (int i = 0; i < lm.A.rows(); ++i)
                    for (int j = 0; j < lm.A.cols(); ++j)
                        out << lm.A(i, j) << (j + 1 < lm.A.cols() ? "," : "\n");
                std::cout << "state dimension " << lm.A.rows() << "\n";
            } else {
                const int nxe = rigid ? 0 : ac.wing.n_states();
                const auto modes = modal_analysis(lm, nxe);
                write_modes_csv(modes, out_dir + "/modes.csv");
                std::cout << modes.size() << " modes written\n";
            }
        } else if (*cmd_turb) {
            const TurbulenceField f = generate_turbulence(ext_x, ext_y, spacing,
                                                          Lg, sigma, seed);
            save_turbulence(f, out_dir + "/turbulence.bin");
            if (format == "csv")
                export_turbulence_csv(f, out_dir + "/turbulence.csv");
            std::cout << "field " << f.nx << "x" << f.ny << " written\n";
        } else if (*cmd_run) {
            if (!fs::exists(scenario_path)) {
                std::cerr << "scenario not found: " << scenario_path << "\n";
                return 2;
            }
            const AircraftConfig cfg = resolve_config(config_path);
            const Scenario sc = load_scenario(scenario_path);
            const SimResult res = run_simulation(cfg, sc);
            res.log.write_csv(out_dir + "/log.csv");
            const CsvTable t = read_csv(out_dir + "/log.csv");
            write_metrics_json(compute_metrics(t, nullptr),
                               out_dir + "/metrics.json");
            if (res.diverged) {
                std::cerr << "simulation diverged; partial log written\n";
                return 1;
            }
            std::cout << "log.csv + metrics.json written to " << out_dir << "\n";
        } else if (*cmd_metrics) {
            if (!fs::exists(log_path)) {
                std::cerr << "log not found: " << log_path << "\n";
                return 2;
            }
            const CsvTable log = read_csv(log_path);
            CsvTable base;
            const bool has_base = !baseline_path.empty();
            if (has_base) base = read_csv(baseline_path);
            const auto m = compute_metrics(log, has_base ? &base : nullptr);
            write_metrics_json(m, out_dir + "/metrics.json");
            for (const auto& [k, v] : m) std::cout << k << " " << v << "\n";
        } else if (*cmd_lqr) {
            const AircraftConfig cfg = resolve_config(config_path);
            const AircraftModel ac = build_aircraft(cfg, V, altitude, false);
            const WingLqrDesign d = design_wing_lqr(ac.wing, cfg.control, cfg.flap_act.time_constant_s);
            nlohmann::json j;
            j["state_dim"] = d.nx + 2;
            j["input_dim"] = int(d.B_aug.cols());
            j["riccati_residual_rel"] = d.lqr.residual;
            const MatX Acl = d.A_aug + d.B_aug * d.lqr.K_X;
            Eigen::VectorXcd ev = MatX(Acl).eigenvalues();
            double max_re = -1e30;
            for (int i = 0; i < ev.size(); ++i)
                max_re = std::max(max_re, ev(i).real());
            j["closed_loop_max_real"] = max_re;
            j["gain_norm"] = d.lqr.K_X.norm();
            std::ofstream out(out_dir + "/wing_lqr.json");
            out << j.dump(2) << "\n";
            std::cout << "riccati residual " << d.lqr.residual
                      << ", closed-loop max Re " << max_re << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
