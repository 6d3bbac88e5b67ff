#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qnkit/cli/document.hpp"
#include "qnkit/cli/render.hpp"
#include "qnkit/cli/run.hpp"
#include "qnkit/cli/sweep.hpp"
#include "qnkit/error.hpp"

namespace {

int execute(const std::string& command, const std::string& path, const std::string& format,
            const std::string& output, const qnkit::cli::RunOptions& options)
{
    using namespace qnkit::cli;
    const Format fmt = parse_format(format);
    const ModelDocument doc = load_model(path);
    const ResultDocument result = command == "sweep" ? run_sweep(doc, options) : run(command, doc, options);
    const std::string text = render(result, fmt);
    if (output.empty()) {
        std::cout << text;
        std::cout.flush();
    } else {
        std::ofstream out(output, std::ios::binary);
        if (!out || !(out << text))
            qnkit::fail(qnkit::errc::invalid_parameter, "cannot write " + output);
    }
    for (const auto& w : result.warnings)
        if (w.rfind("NumericalUnderflow", 0) == 0)
            std::cerr << "warning: " << w << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Markov chain, queueing station and queueing network solver"};
    app.require_subcommand(1, 1);

    std::string path;
    std::string format = "table";
    std::string output;
    qnkit::cli::RunOptions options;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("model", path, "JSON model file")->required();
        sub->add_option("--method", options.method, "mva, conv, bs, aba or bsb")
            ->check(CLI::IsMember({"mva", "conv", "bs", "aba", "bsb"}));
        sub->add_option("--format", format, "table, csv or json")->check(CLI::IsMember({"table", "csv", "json"}));
        sub->add_option("--output", output, "write to a file instead of standard output");
        sub->add_option("--horizon", options.horizon, "transient horizon (time, or steps for a DTMC)");
        sub->add_option("--tol", options.tol, "Bard-Schweitzer tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--max-iter", options.max_iter, "Bard-Schweitzer iteration limit")->check(CLI::PositiveNumber);
        sub->add_option("--jobs", options.jobs, "sweep worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--analysis", options.analysis, "stationary, transient, sojourn, mtta or passage");
        sub->add_flag("--transient-until-absorbing", options.until_absorbing,
                      "mean time to absorption and sojourn times before it");
        sub->add_option("--horizon-units", options.horizon_units,
                        "seconds, minutes, hours, days, weeks or years");
        sub->add_flag("--time-averaged", options.time_averaged, "divide sojourn times by the horizon");
    };
    add_common(app.add_subcommand("solve", "solve a model"));
    add_common(app.add_subcommand("bounds", "throughput and response time bounds of a network"));
    add_common(app.add_subcommand("sweep", "solve a model over its sweep grid"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return execute(command, path, format, output, options);
    } catch (const qnkit::error& e) {
        std::cerr << "error: " << qnkit::to_string(e.code()) << ": " << e.detail() << '\n';
        return qnkit::exit_code(e.code());
    } catch (const std::bad_alloc&) {
        std::cerr << "error: out of memory\n";
        return 3;
    }
}
