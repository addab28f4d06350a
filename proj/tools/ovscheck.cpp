// ovscheck: run an ordered-vector-space script and print a report.
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ovs/cli/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Exact checks on finite-dimensional ordered vector spaces over Q"};
    std::string file, format = "text";
    ovs::cli::Options opt;
    app.add_option("--file", file, "script file (reads stdin when omitted or '-')");
    app.add_option("--format", format, "report format")->check(CLI::IsMember({"text", "structured"}));
    app.add_option("--seed", opt.seed, "seed for sampling-based falsification")->capture_default_str();
    app.add_option("--sample-budget", opt.sample_budget, "candidate pairs tried by falsify")->capture_default_str();
    app.add_option("--cell-budget", opt.limits.cell_budget, "maximum DNF cells per formula")->capture_default_str();
    app.add_option("--atom-budget", opt.limits.atom_budget, "maximum atoms per elimination step")
        ->capture_default_str();
    app.add_option("--lattice-dim-max", opt.lattice_dim_max, "largest dimension for lattice checks")
        ->capture_default_str();
    app.add_flag("--timing", opt.timing, "add wall-clock millis to each record (breaks byte determinism)");
    CLI11_PARSE(app, argc, argv);

    std::string text;
    if (file.empty() || file == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        text = ss.str();
    } else {
        std::ifstream in(file, std::ios::binary);
        if (!in) {
            std::cerr << "ovscheck: cannot read '" << file << "'\n";
            return 2;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }

    ovs::cli::Script script;
    try {
        script = ovs::cli::parse(text);
    } catch (const ovs::Error& e) {
        std::cerr << "ovscheck: " << e.what() << "\n";
        return ovs::cli::exit_code_for(e);
    }
    auto report = ovs::cli::run(script, opt);
    std::cout << (format == "structured" ? ovs::cli::render_structured(report) : ovs::cli::render_text(report));
    for (const auto& r : report.records)
        if (r.error) std::cerr << "ovscheck: line " << r.line << ": " << *r.error << "\n";
    return report.exit_code;
}
