// ssdlab: command-line entry point.
//
// Exit codes: 0 success, 1 validation error, 2 runtime error,
// 3 classify found no social dilemma.

#include "ssd/error.hpp"
#include "ssd/experiment.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace ex = ssd::experiment;

int main(int argc, char** argv)
{
    CLI::App app{"ssdlab - sequential social dilemma laboratory"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ex::kVersion));

    std::string path;
    std::string dump;

    auto* classify = app.add_subcommand("classify", "classify a 2x2 matrix game");
    classify->add_option("game", path, "matrix game file")->required();
    auto* normalize = app.add_subcommand("normalize", "normalize a matrix game per agent");
    normalize->add_option("game", path, "matrix game file")->required();
    auto* schelling = app.add_subcommand("schelling", "scripted Schelling sweep");
    schelling->add_option("config", path, "experiment config")->required();
    auto* train = app.add_subcommand("train", "train independent Q-learners");
    train->add_option("config", path, "experiment config")->required();
    auto* trace = app.add_subcommand("trace", "replay a visibility trace through the estimate exchange");
    trace->add_option("trace", path, "trace file")->required();
    trace->add_option("-o,--out", dump, "write the dump here instead of stdout");
    auto* report = app.add_subcommand("report", "aggregate metrics of finished runs into plot_data.csv");
    report->add_option("run_dir", path, "run directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (classify->parsed()) {
            return ex::cmd_classify(path, std::cout);
        }
        if (normalize->parsed()) {
            return ex::cmd_normalize(path, std::cout);
        }
        if (schelling->parsed()) {
            return ex::cmd_schelling(path, std::cout);
        }
        if (train->parsed()) {
            return ex::cmd_train(path, std::cout);
        }
        if (trace->parsed()) {
            std::optional<std::filesystem::path> out;
            if (!dump.empty()) {
                out = dump;
            }
            return ex::cmd_trace(path, out, std::cout);
        }
        if (report->parsed()) {
            return ex::cmd_report(path, std::cout);
        }
    } catch (const ssd::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
