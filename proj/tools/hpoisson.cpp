#include <hpoisson/format.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace fmt = hpoisson::format;

namespace {

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_usage = 2;

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::optional<fmt::Document> load(const std::string& path) {
    auto text = read_file(path);
    if (!text) {
        std::cerr << "hpoisson: cannot read " << path << "\n";
        return std::nullopt;
    }
    try {
        return fmt::parse(*text);
    } catch (const fmt::ParseError& e) {
        std::cerr << path << ": " << e.what() << "\n";
        return std::nullopt;
    }
}

nlohmann::ordered_json to_json(const std::vector<fmt::TaskResult>& rs) {
    auto out = nlohmann::ordered_json::array();
    for (const auto& r : rs)
        out.push_back({{"task", r.task},
                       {"verdict", fmt::to_string(r.verdict)},
                       {"residual", r.residual},
                       {"details", r.details},
                       {"time_ms", r.time_ms}});
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact checks for homotopy Poisson structures and their relatives"};
    app.require_subcommand(1);

    std::string file;
    std::optional<std::string> task;
    bool json = false;
    std::optional<int> max_degree;
    std::optional<std::uint64_t> seed;

    auto* check = app.add_subcommand("check", "run the tasks of a document");
    check->add_option("FILE", file, "document to check")->required();
    check->add_option("--task", task, "run only the task with this name");
    check->add_flag("--json", json, "print a machine-readable report instead");
    check->add_option("--max-degree", max_degree, "abort when an intermediate polynomial exceeds this degree")
        ->check(CLI::NonNegativeNumber);
    check->add_option("--seed", seed, "seed for randomized sub-checks");

    std::string render_file;
    auto* render = app.add_subcommand("render", "print the canonical form of a document");
    render->add_option("FILE", render_file, "document to render")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    if (*render) {
        auto doc = load(render_file);
        if (!doc) return exit_usage;
        std::cout << fmt::render(*doc);
        return exit_pass;
    }

    auto doc = load(file);
    if (!doc) return exit_usage;
    if (task && std::none_of(doc->tasks.begin(), doc->tasks.end(), [&](const fmt::Task& t) { return t.name == *task; })) {
        std::cerr << "hpoisson: no task named '" << *task << "'\n";
        return exit_usage;
    }

    fmt::RunOptions opts;
    opts.max_degree = max_degree;
    opts.seed = seed;
    auto results = fmt::run(*doc, opts, task);

    if (json) std::cout << to_json(results).dump(2) << "\n";
    else std::cout << fmt::report(results);

    for (const auto& r : results)
        if (r.degree_limit_hit) std::cerr << "hpoisson: aborted " << r.task << ": " << r.details << "\n";
    return fmt::all_passed(results) ? exit_pass : exit_fail;
}
