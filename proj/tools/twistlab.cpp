// twistlab: command-line front end.
//
//   twistlab VERB [ARGS_JSON]            single command, result on stdout
//   twistlab --in FILE [--parallel]      batch of {"id", "verb", "args"} records
//
// Exit codes: 0 success (including per-entry batch errors), 1 usage or parse
// error, 2 domain error in single-command mode.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "twistlab/cli.hpp"

namespace {

using twistlab::cli::Json;

std::string read_all(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    std::ifstream in(path, std::ios::binary);
    if (!in) throw twistlab::Error(twistlab::ErrorKind::usage, "cannot open '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Json parse_json(const std::string& text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw twistlab::Error(twistlab::ErrorKind::usage, what + " is not valid JSON: " + e.what());
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"twistlab: exact continued fractions, noncommutative tori, dimension groups and curve twists"};
    std::string verb;
    std::string args_text = "{}";
    std::string in_path;
    std::string out_path;
    bool parallel = false;
    bool pretty = false;
    app.add_option("verb", verb, "Command verb, e.g. cf.expand");
    app.add_option("args", args_text, "Arguments as a JSON object");
    app.add_option("--in", in_path, "Batch file (JSON array); '-' for stdin");
    app.add_option("--out", out_path, "Write output here instead of stdout");
    app.add_flag("--parallel", parallel, "Run batch entries concurrently");
    app.add_flag("--pretty", pretty, "Indent JSON output");
    app.footer("Verbs: cf.expand cf.value cf.convergents torus.morita torus.iso torus.invariant\n"
               "       dimgroup.from-period dimgroup.positive dimgroup.compare\n"
               "       curve.j curve.twist curve.iso curve.twist-between\n"
               "Env:   TWISTLAB_ITER_CAP overrides the dimension-group iteration cap (default 64).");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    auto emit = [&](const Json& value) {
        const std::string text = value.dump(pretty ? 2 : -1) + "\n";
        if (out_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) throw twistlab::Error(twistlab::ErrorKind::usage, "cannot write '" + out_path + "'");
            out << text;
        }
    };

    try {
        const auto opts = twistlab::cli::options_from_environment();
        if (!in_path.empty()) {
            if (!verb.empty()) throw twistlab::Error(twistlab::ErrorKind::usage, "give either a verb or --in, not both");
            const auto entries = twistlab::cli::parse_batch(parse_json(read_all(in_path), "batch file"));
            emit(twistlab::cli::run_batch(entries, parallel, opts));
            return 0;
        }
        if (verb.empty()) {
            std::cerr << app.help();
            return 1;
        }
        const Json args = parse_json(args_text, "arguments");
        emit(twistlab::cli::run_command(verb, args, opts));
        return 0;
    } catch (const twistlab::Error& e) {
        const int rc = twistlab::cli::exit_code_for(e.kind());
        if (rc == 1) {
            std::cerr << "twistlab: " << e.what() << "\n";
        } else {
            std::cout << twistlab::cli::error_json(e).dump(pretty ? 2 : -1) << "\n";
        }
        return rc;
    } catch (const std::exception& e) {
        std::cerr << "twistlab: internal error: " << e.what() << "\n";
        return 2;
    }
}
