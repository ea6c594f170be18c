// ksync -- build, evaluate, draw, and verify synchronized counting automata
// for k-automatic sequences.
#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ksync/jobs.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Synchronized counting automata for automatic sequences"};
    app.require_subcommand(1);

    ksync::JobSpec spec;
    uint32_t base = 2;
    uint32_t iter_cap = 64;
    size_t state_cap = 1'000'000;
    uint64_t range_max = 0;

    auto add_caps = [&](CLI::App* cmd) {
        cmd->add_option("--iter-cap", iter_cap, "Fixed-point iteration cap")
            ->capture_default_str();
        cmd->add_option("--state-cap", state_cap, "State cap for intermediate automata")
            ->capture_default_str();
    };
    auto add_base = [&](CLI::App* cmd) {
        cmd->add_option("--base", base, "Expected numeration base")->capture_default_str();
    };

    CLI::App* build = app.add_subcommand(
        "build", "Construct an automaton for one analysis of a sequence and write it to a file");
    build->add_option("--seq", spec.sequence, "Built-in sequence name or DFAO file path")
        ->required();
    build
        ->add_option("--analysis", spec.analysis,
                     "One of: complexity, appearance, powers, primitive, blockcount")
        ->required();
    build->add_option("--out", spec.out_path, "Output file for the automaton")->required();
    build->add_option("--dot", spec.dot_path, "Also write a GraphViz rendering here");
    add_caps(build);
    add_base(build);

    CLI::App* eval = app.add_subcommand(
        "eval", "Evaluate a previously built automaton at one point or over a range");
    eval->add_option("file", spec.in_path, "Automaton file produced by build")->required();
    CLI::Option* n_opt = eval->add_option("--n", spec.n, "Evaluation point");
    CLI::Option* range_opt =
        eval->add_option("--range", range_max, "Tabulate 0..RANGE as tab-separated rows");
    n_opt->excludes(range_opt);
    range_opt->excludes(n_opt);
    add_base(eval);

    CLI::App* diagram = app.add_subcommand(
        "diagram", "Render rows of first-occurrence positions for factor lengths 1..N");
    diagram->add_option("--seq", spec.sequence, "Built-in sequence name or DFAO file path")
        ->required();
    diagram->add_option("--nmax", spec.n_max, "Largest factor length to draw")
        ->capture_default_str();
    diagram->add_option("--out", spec.out_path, "Write the diagram here instead of stdout");
    add_base(diagram);

    CLI::App* verify = app.add_subcommand(
        "verify", "Build all analyses for a sequence and check them against brute force");
    verify->add_option("--seq", spec.sequence, "Built-in sequence name or DFAO file path")
        ->required();
    verify->add_option("--nmax", spec.n_max, "Check values up to this bound")
        ->capture_default_str();
    verify->add_option("--ref", spec.ref_sequence,
                       "Built-in name whose rule the sequence letters must match");
    verify->add_option("--out", spec.out_path,
                       "Directory for round-trip scratch files (default: temp dir)");
    add_caps(verify);
    add_base(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2; // flag errors are malformed input
    }

    spec.base = base;
    spec.limits.iter_cap = iter_cap;
    spec.limits.state_cap = state_cap;
    if (range_opt->count() > 0) spec.range_max = range_max;

    if (*build) return ksync::run_build(spec, std::cout, std::cerr);
    if (*eval) return ksync::run_eval(spec, std::cout, std::cerr);
    if (*diagram) return ksync::run_diagram(spec, std::cout, std::cerr);
    if (*verify) return ksync::run_verify(spec, std::cout, std::cerr);
    return 2;
}
