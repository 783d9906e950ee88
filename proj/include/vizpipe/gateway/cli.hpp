#pragma once

#include "vizpipe/engine.hpp"
#include "vizpipe/errors.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace vizpipe {

/// A problem with the spec itself, anchored at a line of the spec file.
class SpecError : public Error {
public:
    SpecError(const std::string& file, std::size_t line, const std::string& what)
        : Error(file + ":" + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct OutputSpec {
    std::string format; // png | x3d | vtk
    std::filesystem::path path;
    int width = 640;
    int height = 480;
};

/// Declarative batch job: an input, node declarations applied with the
/// engine's add_source/add_filter/add_module rules, camera overrides and outputs.
struct RunSpec {
    std::filesystem::path file;
    std::string text;
    Json input;    // null, {path} or {builder: "contour3d", path, contours?, colormap?}
    Json pipeline; // list of node records
    Json camera;   // scene property overrides
    std::vector<OutputSpec> outputs;
};

/// Parses and validates a spec file. Relative paths resolve against the
/// spec's directory. `require_outputs` is false when outputs come from flags.
RunSpec load_run_spec(const std::filesystem::path& file, const Registry& registry, bool require_outputs = true);

/// Builds the spec's pipeline on `engine` in a fresh scene.
void build_run_spec(Engine& engine, const RunSpec& spec);

/// Throws Error naming the first node with status error.
void check_pipeline_health(const Engine& engine);

void write_output(const Engine& engine, const OutputSpec& output);

/// Parses "WxH"; throws Error on malformed text.
std::pair<int, int> parse_size(const std::string& text);

/// Entry point behind the `vizpipe` executable. Returns the process exit code:
/// 0 success, 1 pipeline/render/replay failure, 2 bad spec or usage.
int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace vizpipe
