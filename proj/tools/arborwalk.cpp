#include <iostream>

#include <CLI11.hpp>

#include "arborwalk/cli/manifest.hpp"
#include "arborwalk/cli/plots.hpp"
#include "arborwalk/cli/runner.hpp"

int main(int argc, char** argv) {
    using namespace arborwalk::cli;
    CLI::App app{"Coined quantum walks on homogeneous trees"};
    app.require_subcommand(1);

    std::string manifest_path;
    RunOptions options;
    std::string out_dir;
    int stop_after = -1;
    auto* run_cmd = app.add_subcommand("run", "Run an experiment manifest");
    run_cmd->add_option("manifest", manifest_path, "Manifest JSON file")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--out", out_dir, "Output directory (overrides output_dir)");
    run_cmd->add_option("--threads", options.threads, "OpenMP threads")->check(CLI::NonNegativeNumber);
    run_cmd->add_flag("--resume", options.resume, "Reuse finished units in the output directory");
    run_cmd->add_option("--stop-after", stop_after, "Stop after computing this many units")
        ->check(CLI::NonNegativeNumber);

    std::string result_dir;
    auto* plot_cmd = app.add_subcommand("plot", "Write SVG plots for a result directory");
    plot_cmd->add_option("resultdir", result_dir, "Result directory")->required();

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate", "Check a manifest without running it");
    validate_cmd->add_option("manifest", validate_path, "Manifest JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*run_cmd) {
            const Manifest m = load_manifest(manifest_path);
            options.out = out_dir;
            if (stop_after >= 0) options.stop_after = stop_after;
            const RunResult r = run(m, options);
            if (r.complete) {
                std::cout << "wrote " << r.dir.string() << " (" << r.units << " units, " << r.reused
                          << " reused)\n";
            } else {
                std::cout << "stopped after " << r.computed << " of " << r.units
                          << " units; rerun with --resume to finish\n";
            }
        } else if (*plot_cmd) {
            const PlotReport report = emit_plots(result_dir);
            for (const auto& n : report.notices) std::cerr << "notice: " << n << "\n";
            for (const auto& p : report.written) std::cout << "wrote " << p.string() << "\n";
        } else if (*validate_cmd) {
            const Manifest m = load_manifest(validate_path);
            std::cout << "ok: " << kind_name(m.kind) << ", " << grid_points(m.coin).size()
                      << " grid points\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
    return 0;
}
