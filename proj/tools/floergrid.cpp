#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace floergrid;
using namespace floergrid::cli;

int main(int argc, char** argv) {
    CLI::App app{"Grid-diagram knot Floer homology: gradings, homology tables, tau, moves and cobordisms"};
    app.require_subcommand(1);

    Flags flags;
    std::string format = "json";
    app.add_option("--window", flags.window, "Maslov window slack W")->check(CLI::NonNegativeNumber);
    app.add_flag("--certify", flags.certify, "Recompute with slack W+2 and require identical results");
    app.add_option("--threads", flags.threads, "Worker threads for per-grading work (0 = all cores)")
        ->check(CLI::NonNegativeNumber);
    app.add_flag("--override-size-cap", flags.override_cap, "Allow grids above the size cap");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "table"}));

    std::string grid, script;
    auto* validate = app.add_subcommand("validate", "Check diagram invariants");
    validate->add_option("grid", grid, "Grid file")->required();
    auto* info = app.add_subcommand("info", "Generators with Maslov and Alexander gradings");
    info->add_option("grid", grid, "Grid file")->required();
    auto* tau = app.add_subcommand("tau", "Homology tables and the tau invariant");
    tau->add_option("grid", grid, "Grid file")->required();
    auto* moves = app.add_subcommand("moves", "Apply a move script");
    moves->add_option("grid", grid, "Grid file")->required();
    moves->add_option("script", script, "Move script")->required();
    moves->add_flag("--check-tau", flags.check_tau, "Assert tau is unchanged by an isotopy-only script");
    auto* cob = app.add_subcommand("cobordism", "Run a cobordism script and check the genus bound");
    cob->add_option("script", script, "Cobordism script")->required();
    auto* slice = app.add_subcommand("slice-check", "Slice obstruction from tau");
    slice->add_option("grid", grid, "Grid file")->required();

    for (auto* sub : {validate, info, tau, moves, cob, slice}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    Outcome out;
    if (*validate) out = cmd_validate(grid);
    else if (*info) out = cmd_info(grid, flags);
    else if (*tau) out = cmd_tau(grid, flags);
    else if (*moves) out = cmd_moves(grid, script, flags);
    else if (*cob) out = cmd_cobordism(script, flags);
    else out = cmd_slice_check(grid, flags);

    if (format == "table") std::cout << render_table(out.envelope);
    else std::cout << out.envelope.dump(2) << "\n";
    return out.exit_code;
}
