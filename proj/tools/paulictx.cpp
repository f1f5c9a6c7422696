#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "paulictx/io.hpp"

namespace {

using paulictx::HamiltonianFile;
using paulictx::ReportDocument;

struct Outcome {
    int code = 0;  // 0 noncontextual, 1 contextual, 2 error
    nlohmann::json json;
    std::string text;
};

std::string read_stdin() {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    return buffer.str();
}

HamiltonianFile load(const std::string& path) {
    if (path == "-") {
        return paulictx::parse_hamiltonian_text(read_stdin(), "stdin");
    }
    return paulictx::parse_hamiltonian_file(path);
}

Outcome run_one(
    const std::string& path, const std::function<ReportDocument(const HamiltonianFile&)>& runner) {
    try {
        ReportDocument doc = runner(load(path));
        Outcome outcome;
        outcome.code = doc.contextual ? 1 : 0;
        outcome.json = paulictx::to_json(doc);
        outcome.text = paulictx::to_text(doc);
        return outcome;
    } catch (const std::exception& e) {
        Outcome outcome;
        outcome.code = 2;
        outcome.json = {{"error", e.what()}};
        outcome.text = std::string("error: ") + e.what() + "\n";
        return outcome;
    }
}

int emit(const std::vector<Outcome>& outcomes, const std::string& format, const std::string& output) {
    std::string content;
    if (format == "json") {
        if (outcomes.size() == 1) {
            content = outcomes[0].json.dump(2) + "\n";
        } else {
            nlohmann::json all = nlohmann::json::array();
            for (const Outcome& o : outcomes) {
                all.push_back(o.json);
            }
            content = all.dump(2) + "\n";
        }
    } else {
        for (std::size_t i = 0; i < outcomes.size(); ++i) {
            if (i) {
                content += "\n";
            }
            content += outcomes[i].text;
        }
    }

    if (output.empty()) {
        std::cout << content;
    } else {
        std::ofstream out(output);
        if (!out) {
            std::cerr << "error: cannot write " << output << "\n";
            return 2;
        }
        out << content;
    }

    int code = 0;
    for (const Outcome& o : outcomes) {
        if (o.code == 2) {
            std::cerr << o.text;
        }
        code = std::max(code, o.code);
    }
    return code;
}

int run_all(
    const std::vector<std::string>& files, const std::string& format, const std::string& output,
    const std::function<ReportDocument(const HamiltonianFile&)>& runner) {
    std::vector<std::future<Outcome>> futures;
    futures.reserve(files.size());
    for (const std::string& path : files) {
        futures.push_back(
            std::async(std::launch::async, [&runner, path] { return run_one(path, runner); }));
    }
    std::vector<Outcome> outcomes;
    outcomes.reserve(files.size());
    for (std::future<Outcome>& f : futures) {
        outcomes.push_back(f.get());
    }
    return emit(outcomes, format, output);
}

struct CommonOpts {
    std::vector<std::string> files;
    std::string format = "text";
    std::string output;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_format = true) {
    cmd->add_option("files", opts.files, "input files ('-' reads stdin)")->required();
    if (with_format) {
        cmd->add_option("--format", opts.format, "output format")
            ->check(CLI::IsMember({"text", "json"}))
            ->capture_default_str();
    }
    cmd->add_option("-o,--output", opts.output, "write output to this file instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Analyze the commutation structure of Pauli operator sets: classify them,\n"
        "produce witness trees for obstructions, and quantify how far a Hamiltonian\n"
        "is from having a classically consistent outcome assignment.\n\n"
        "Exit code: 0 all inputs noncontextual, 1 some input contextual, 2 error."};
    app.require_subcommand(1);

    CommonOpts check_opts;
    CLI::App* check = app.add_subcommand("check", "Classify each input set");
    add_common(check, check_opts);

    CommonOpts witness_opts;
    CLI::App* witness =
        app.add_subcommand("witness", "Build an identity-valued witness tree for contextual inputs");
    add_common(witness, witness_opts);

    CommonOpts measure_opts;
    std::string p_list = "0,1,2";
    std::string method_name = "exact";
    unsigned seed = 0;
    int starts = 8;
    std::size_t exact_cap = 24;
    CLI::App* measure = app.add_subcommand("measure", "Compute contextuality distance measures");
    add_common(measure, measure_opts);
    measure->add_option("--p", p_list, "comma separated norm orders (0, values >= 1, inf)")
        ->capture_default_str();
    measure->add_option("--method", method_name, "exact (branch and bound) or greedy")
        ->check(CLI::IsMember({"exact", "greedy"}))
        ->capture_default_str();
    measure->add_option("--seed", seed, "base seed for the greedy method")->capture_default_str();
    measure->add_option("--starts", starts, "greedy restarts, best result wins")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    measure->add_option("--exact-cap", exact_cap, "refuse exact search above this many terms")
        ->capture_default_str();

    CommonOpts graph_opts;
    CLI::App* graph = app.add_subcommand("graph", "Emit the commutation graph in Graphviz format");
    add_common(graph, graph_opts, /*with_format=*/false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (check->parsed()) {
        return run_all(check_opts.files, check_opts.format, check_opts.output, paulictx::run_check);
    }
    if (witness->parsed()) {
        return run_all(
            witness_opts.files, witness_opts.format, witness_opts.output, paulictx::run_witness);
    }
    if (measure->parsed()) {
        std::vector<double> ps;
        try {
            ps = paulictx::parse_p_list(p_list);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
        paulictx::MeasureMethod method = method_name == "greedy" ? paulictx::MeasureMethod::kGreedy
                                                                 : paulictx::MeasureMethod::kExact;
        paulictx::MeasureOptions options;
        options.seed = seed;
        options.greedy_starts = starts;
        options.exact_cap = exact_cap;
        return run_all(
            measure_opts.files, measure_opts.format, measure_opts.output,
            [&](const HamiltonianFile& f) { return paulictx::run_measure(f, ps, method, options); });
    }

    // graph
    std::vector<Outcome> outcomes;
    for (const std::string& path : graph_opts.files) {
        try {
            HamiltonianFile f = load(path);
            paulictx::Verdict verdict = paulictx::is_contextual(f.hamiltonian.terms);
            Outcome outcome;
            outcome.code = verdict.contextual() ? 1 : 0;
            outcome.text = paulictx::export_dot(verdict);
            outcomes.push_back(std::move(outcome));
        } catch (const std::exception& e) {
            Outcome outcome;
            outcome.code = 2;
            outcome.text = std::string("error: ") + e.what() + "\n";
            outcomes.push_back(std::move(outcome));
        }
    }
    return emit(outcomes, "text", graph_opts.output);
}
