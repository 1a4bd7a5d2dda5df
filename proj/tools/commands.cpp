#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "fixtures.hpp"
#include "spikecert/config.hpp"
#include "spikecert/determinant.hpp"
#include "spikecert/normalization.hpp"
#include "spikecert/scan.hpp"
#include "spikecert/solver.hpp"

namespace spikecert::cli {

namespace fs = std::filesystem;

namespace {

json load_config(const CommonArgs& args) {
    json cfg = load_json_file(args.config_path);
    for (const auto& ov : args.overrides) apply_override(cfg, ov);
    return cfg;
}

ScanPolicy policy_from(const json& cfg, const CommonArgs& args) {
    ScanPolicy p = scan_policy_from_json(cfg.contains("scan") ? cfg.at("scan") : json(nullptr));
    if (args.grid_override) p.grid_points = *args.grid_override;
    return p;
}

int run_certify(const json& cfg, const CommonArgs& args, json& out_json) {
    Framework fw = framework_from_json(cfg.at("framework"));
    ScanPolicy policy = policy_from(cfg, args);
    json result;
    bool all_valid = true;
    if (cfg.contains("spikes")) {
        SpikeConfiguration spikes = spikes_from_json(cfg.at("spikes"));
        CertificateVerdict v = spikes.all_positive() ? certify_spikes(fw, spikes, policy)
                                                     : certify_signed_spikes(fw, spikes, policy);
        result["eta_v"] = verdict_to_json(v);
        all_valid = all_valid && v.valid;
        if (!args.out_path.empty()) {
            CsvWriter csv({"t", "eta", "excluded"});
            for (std::size_t i = 0; i < v.grid.points.size(); ++i) {
                double t = v.grid.points[i];
                double excluded = 0.0;
                for (std::size_t a = 0; a < v.excl_radii.size() && a < spikes.positions.size(); ++a)
                    if (std::fabs(t - spikes.positions[a]) < v.excl_radii[a]) excluded = 1.0;
                csv.add_row({t, v.grid_eta[i], excluded});
            }
            csv.write(args.out_path + ".grid.csv");
        }
    }
    if (cfg.contains("eta_w")) {
        double x0 = cfg.at("eta_w").at("x0").get<double>();
        int m = cfg.at("eta_w").at("M").get<int>();
        CertificateVerdict v = certify_point(fw, x0, m, policy);
        result["eta_w"] = verdict_to_json(v);
        all_valid = all_valid && v.valid;
        if (!args.out_path.empty()) {
            CsvWriter csv({"t", "eta", "excluded"});
            for (std::size_t i = 0; i < v.grid.points.size(); ++i) {
                double t = v.grid.points[i];
                double excluded = std::fabs(t - x0) < (v.excl_radii.empty() ? 0.0 : v.excl_radii[0]) ? 1.0 : 0.0;
                csv.add_row({t, v.grid_eta[i], excluded});
            }
            csv.write(args.out_path + ".eta_w.grid.csv");
        }
    }
    if (!cfg.contains("spikes") && !cfg.contains("eta_w")) throw ConfigError("certify needs spikes or eta_w");
    result["valid"] = all_valid;
    out_json = result;
    return all_valid ? 0 : 2;
}

} // namespace

int cmd_certify(const CommonArgs& args) {
    try {
        json cfg = load_config(args);
        json out;
        int code = run_certify(cfg, args, out);
        if (!args.out_path.empty()) {
            std::ofstream f(args.out_path + ".verdict.json");
            f << out.dump(2) << "\n";
        }
        std::cout << out.dump(2) << "\n";
        return code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_criteria(const CommonArgs& args) {
    try {
        json cfg = load_config(args);
        Framework fw = framework_from_json(cfg.at("framework"));
        SpikeConfiguration spikes = spikes_from_json(cfg.at("spikes"));
        ScanPolicy policy = policy_from(cfg, args);

        Certificate cert = compute_eta_V(fw, spikes);
        auto [lo, hi] = scan_interval(cert, policy);
        int grid_points = policy.grid_points;
        if (cfg.contains("grid")) {
            lo = cfg.at("grid").value("lo", lo);
            hi = cfg.at("grid").value("hi", hi);
            grid_points = cfg.at("grid").value("points", grid_points);
        }
        DeterminantOptions dopts;
        if (cfg.contains("determinant")) {
            dopts.tuple_budget = cfg.at("determinant").value("tuple_budget", dopts.tuple_budget);
            dopts.force_extended = cfg.at("determinant").value("force_extended", dopts.force_extended);
        }
        DeterminantReport rep = determinant_report(fw, spikes.positions, lo, hi, grid_points, dopts);

        json out;
        out["kind"] = "V";
        out["min_value"] = rep.min_value;
        out["argmin"] = rep.argmin;
        out["positive_on_grid"] = rep.min_value > 0.0;
        out["extension_points"] = rep.extension_points;
        out["cramer_residuals"] = rep.cramer_residuals;
        if (rep.has_cauchy_binet) {
            out["cauchy_binet"] = {{"gram_residual", rep.cb_gram_residual},
                                   {"d_residual_max", rep.cb_d_residual_max}};
        }
        if (cfg.contains("eta_w")) {
            double x0 = cfg.at("eta_w").at("x0").get<double>();
            int m = cfg.at("eta_w").at("M").get<int>();
            DeterminantReport repw = determinant_report_W(fw, x0, m, lo, hi, grid_points, dopts);
            out["eta_w"] = {{"min_value", repw.min_value},
                            {"argmin", repw.argmin},
                            {"positive_on_grid", repw.min_value > 0.0},
                            {"extension_points", repw.extension_points},
                            {"cramer_residuals", repw.cramer_residuals}};
        }
        if (!args.out_path.empty()) {
            CsvWriter csv({"t", "D_V", "eta_V", "one_minus_eta"});
            CertificateEvaluator<double> eval_d(cert);
            CertificateEvaluator<DD> eval_dd(cert);
            for (std::size_t i = 0; i < rep.grid_t.size(); ++i) {
                double t = rep.grid_t[i];
                double eta = cert.extended_precision ? to_double(eval_dd(0, DD(t))) : eval_d(0, t);
                csv.add_row({t, rep.grid_d[i], eta, 1.0 - eta});
            }
            csv.write(args.out_path + ".criteria.csv");
            std::ofstream f(args.out_path + ".criteria.json");
            f << out.dump(2) << "\n";
        }
        std::cout << out.dump(2) << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_solve(const CommonArgs& args) {
    try {
        json cfg = load_config(args);
        Framework fw = framework_from_json(cfg.at("framework"));
        double lambda = cfg.at("lambda").get<double>();
        SolverOptions opts = solver_options_from_json(cfg.contains("solver") ? cfg.at("solver") : json(nullptr));
        std::vector<double> y;
        if (cfg.contains("observation")) {
            y = cfg.at("observation").get<std::vector<double>>();
        } else if (cfg.contains("spikes")) {
            y = fw.forward(spikes_from_json(cfg.at("spikes")));
        } else {
            throw ConfigError("solve needs an observation or spikes to forward-simulate");
        }
        SolverResult res = solve_pblasso(fw, y, lambda, opts);
        json out;
        out["spikes"] = spikes_to_json(res.spikes);
        out["objective"] = res.objective;
        out["dual_gap"] = res.dual_gap;
        out["max_dual_violation"] = res.max_dual_violation;
        out["support_dual_values"] = res.support_dual_values;
        out["iterations"] = res.iterations;
        out["converged"] = res.converged;
        if (!args.out_path.empty()) {
            std::ofstream f(args.out_path + ".solution.json");
            f << out.dump(2) << "\n";
        }
        std::cout << out.dump(2) << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_experiment(const CommonArgs& args) {
    try {
        json cfg = load_config(args);
        Framework fw = framework_from_json(cfg.at("framework"));
        SpikeConfiguration truth = spikes_from_json(cfg.at("spikes"));
        ExperimentConfig ec = experiment_from_json(cfg.at("experiment"));
        if (args.seed_override) ec.seed = *args.seed_override;
        ExperimentReport rep = support_stability_experiment(fw, truth, ec);
        json out;
        out["loglog_slope"] = rep.slope_defined ? json(rep.loglog_slope) : json(nullptr);
        json scales = json::array();
        for (const auto& s : rep.scales) {
            scales.push_back({{"noise", s.noise},
                              {"success_rate", s.success_rate},
                              {"mean_pos_err", std::isfinite(s.mean_pos_err) ? json(s.mean_pos_err) : json(nullptr)},
                              {"max_pos_err", std::isfinite(s.max_pos_err) ? json(s.max_pos_err) : json(nullptr)},
                              {"mean_amp_err", std::isfinite(s.mean_amp_err) ? json(s.mean_amp_err) : json(nullptr)}});
        }
        out["scales"] = scales;
        if (!args.out_path.empty()) {
            CsvWriter csv({"noise", "trial", "n_spikes", "pos_err", "amp_err", "dual_gap"});
            for (const auto& t : rep.trials)
                csv.add_row({t.noise, double(t.trial), double(t.n_spikes), t.pos_err, t.amp_err, t.dual_gap});
            csv.write(args.out_path + ".experiment.csv");
            std::ofstream f(args.out_path + ".experiment.json");
            f << out.dump(2) << "\n";
        }
        std::cout << out.dump(2) << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_reproduce(const std::string& figure, const CommonArgs& args) {
    try {
        if (args.out_path.empty()) throw ConfigError("reproduce needs --out DIR");
        fs::create_directories(args.out_path);
        auto panels = figure_panels(figure);
        std::string readme = "# " + figure + "\n\n";
        readme += "Per panel: `<name>.csv` holds the certificate grid (t, eta, excluded),\n";
        readme += "`<name>.meta.json` the framework, spikes, and verdict.\n\n";
        readme += "| panel | expected | computed | note |\n|---|---|---|---|\n";
        for (const auto& panel : panels) {
            json cfg = json::parse(panel.config_json);
            for (const auto& ov : args.overrides) apply_override(cfg, ov);
            Framework fw = framework_from_json(cfg.at("framework"));
            SpikeConfiguration spikes = spikes_from_json(cfg.at("spikes"));
            ScanPolicy policy = policy_from(cfg, args);
            CertificateVerdict v = certify_spikes(fw, spikes, policy);
            CsvWriter csv({"t", "eta", "excluded"});
            for (std::size_t i = 0; i < v.grid.points.size(); ++i) {
                double t = v.grid.points[i];
                double excluded = 0.0;
                for (std::size_t a = 0; a < v.excl_radii.size() && a < spikes.positions.size(); ++a)
                    if (std::fabs(t - spikes.positions[a]) < v.excl_radii[a]) excluded = 1.0;
                csv.add_row({t, v.grid_eta[i], excluded});
            }
            csv.write(fs::path(args.out_path) / (panel.name + ".csv"));
            json meta;
            meta["framework"] = framework_to_json(fw);
            meta["spikes"] = spikes_to_json(spikes);
            meta["samples"] = [&] {
                json s = json::array();
                for (const auto& a : fw.measure().atoms) s.push_back(a.location);
                return s;
            }();
            meta["verdict"] = verdict_to_json(v);
            meta["expected_valid"] = panel.expected_valid;
            std::ofstream mf(fs::path(args.out_path) / (panel.name + ".meta.json"));
            mf << meta.dump(2) << "\n";
            readme += "| " + panel.name + " | " + (panel.expected_valid ? "valid" : "invalid") + " | " +
                      (v.valid ? "valid" : "invalid") + " | " + panel.note + " |\n";
        }
        std::ofstream rf(fs::path(args.out_path) / "README.md");
        rf << readme;
        std::cout << "wrote " << panels.size() << " panels to " << args.out_path << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace spikecert::cli
