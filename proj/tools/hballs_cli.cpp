#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hballs/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"swept balls and two-phase quadrature pairs on planar grids"};
    app.require_subcommand(1);

    hballs::RunRequest req;
    std::string param;
    std::vector<double> values;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", req.config_path, "JSON scenario config")->required();
        cmd->add_option("--out", req.out_dir, "output directory (overrides the config)");
        cmd->add_option("--set", req.overrides,
                        "config override as key=value; dotted keys reach into objects");
        cmd->add_option("--green", req.green, "Green function evaluation")
            ->check(CLI::IsMember({"analytic", "numeric"}));
    };

    CLI::App* compute = app.add_subcommand("compute", "run a scenario and write all artifacts");
    add_common(compute);
    CLI::App* verify = app.add_subcommand("verify", "run a scenario, write summary.json only");
    add_common(verify);
    CLI::App* sweep = app.add_subcommand("sweep", "re-run a scenario over a parameter");
    add_common(sweep);
    sweep->add_option("--param", param, "swept parameter: alpha, h or x0_y")
        ->required()
        ->check(CLI::IsMember({"alpha", "h", "x0_y"}));
    sweep->add_option("--values", values, "parameter values")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : hballs::ExitConfigError;
    }

    if (sweep->parsed()) return hballs::run_sweep(req, param, values);
    req.write_artifacts = compute->parsed();
    return hballs::run_scenario(req);
}
