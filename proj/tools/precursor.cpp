#include <iostream>

#include <CLI11.hpp>

#include "precursor/commands.hpp"

int main(int argc, char** argv) {
    using namespace precursor::cli;

    CLI::App app{"Mine failure precursors from fleet telemetry and event logs"};
    app.require_subcommand(1);

    CommonOptions common;
    std::string out;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config, "JSON config file");
        sub->add_option("--out", out, "Output directory (overrides io.outdir)");
        sub->add_option("--threads", common.threads, "Worker threads")->check(CLI::PositiveNumber);
    };

    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic fleet with planted precursors");
    add_common(simulate);
    simulate->add_option("--seed", seed, "Random seed");

    auto* run = app.add_subcommand("run", "Fit detectors and select precursor combinations");
    add_common(run);

    auto* crossval = app.add_subcommand("crossval", "Leave-one-unit-out cross-validation");
    add_common(crossval);

    CurvesOptions curves;
    std::string events;
    long long tolerance = -1;
    auto* curves_cmd = app.add_subcommand("curves", "ROC / precision-recall curves of a per-flight score");
    add_common(curves_cmd);
    curves_cmd->add_option("--scores", curves.scores, "CSV unit_id,flight,score");
    curves_cmd->add_option("--baseline", curves.baseline, "Parameter for the single-threshold baseline");
    curves_cmd->add_option("--direction", curves.direction, "Baseline direction: above|below")
        ->check(CLI::IsMember({"above", "below"}));
    curves_cmd->add_option("--events", events, "Event CSV (overrides io.events)");
    curves_cmd->add_option("--tolerance", tolerance, "Onset tolerance in flights (overrides eval.tolerance)");
    curves_cmd->add_option("--nu", curves.nu, "Confidence threshold reported as the operating point");
    curves_cmd->add_option("--features-out", curves.features_out, "Also write lagged features to this CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kInputError;
    }

    if (!out.empty()) common.out = out;
    if (simulate->parsed() && simulate->count("--seed") > 0) common.seed = seed;

    if (simulate->parsed()) return cmd_simulate(common, std::cerr);
    if (run->parsed()) return cmd_run(common, std::cerr);
    if (crossval->parsed()) return cmd_crossval(common, std::cerr);

    curves.common = common;
    if (!events.empty()) curves.events = events;
    if (tolerance >= 0) curves.tolerance = tolerance;
    return cmd_curves(curves, std::cerr);
}
