#include <CLI11.hpp>

#include "commands.hpp"
#include "fixtures.hpp"

int main(int argc, char** argv) {
    CLI::App app{"dual-certificate toolkit for positive sparse-spike recovery"};
    app.require_subcommand(1);

    spikecert::cli::CommonArgs args;
    int grid = -1;
    std::uint64_t seed = 0;
    bool seed_set = false;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* copt = sub->add_option("--config", args.config_path, "configuration JSON");
        if (config_required) copt->required();
        sub->add_option("--out", args.out_path, "output path prefix (or directory for reproduce)");
        sub->add_option("--grid", grid, "override the scan grid point count");
        sub->add_option("--seed", seed, "override the experiment seed")->each([&](const std::string&) {
            seed_set = true;
        });
        sub->add_option("--set", args.overrides, "dot-path config override, key.path=value")
            ->take_all()
            ->expected(-1);
    };

    auto* certify = app.add_subcommand("certify", "solve the dual precertificate and certify it");
    add_common(certify, true);
    auto* criteria = app.add_subcommand("criteria", "evaluate the determinant criteria and cross-identities");
    add_common(criteria, true);
    auto* solve = app.add_subcommand("solve", "run the positive BLASSO solver");
    add_common(solve, true);
    auto* experiment = app.add_subcommand("experiment", "run the support-stability experiment");
    add_common(experiment, true);
    auto* reproduce = app.add_subcommand("reproduce", "emit the figure reproduction bundles");
    std::string figure;
    reproduce->add_option("figure", figure, "one of: laplace-fig1, gauss-fig2, gauss-confined-fig3")
        ->required()
        ->check(CLI::IsMember(spikecert::cli::figure_names()));
    add_common(reproduce, false);

    CLI11_PARSE(app, argc, argv);

    if (grid >= 2) args.grid_override = grid;
    if (seed_set) args.seed_override = seed;

    if (certify->parsed()) return spikecert::cli::cmd_certify(args);
    if (criteria->parsed()) return spikecert::cli::cmd_criteria(args);
    if (solve->parsed()) return spikecert::cli::cmd_solve(args);
    if (experiment->parsed()) return spikecert::cli::cmd_experiment(args);
    if (reproduce->parsed()) return spikecert::cli::cmd_reproduce(figure, args);
    return 1;
}
