#include "vizpipe/gateway/cli.hpp"

#include "vizpipe/errors.hpp"
#include "vizpipe/gateway/http_server.hpp"
#include "vizpipe/mlab.hpp"
#include "vizpipe/recorder.hpp"
#include "vizpipe/render.hpp"
#include "vizpipe/vtkio.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

namespace vizpipe {

namespace fs = std::filesystem;

namespace {

std::size_t line_at(const std::string& text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

/// Line of the first occurrence of `needle`, or 1.
std::size_t line_of(const std::string& text, const std::string& needle) {
    const auto pos = text.find(needle);
    return pos == std::string::npos ? 1 : line_at(text, pos);
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path resolve(const fs::path& base, const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? path : (base / path).lexically_normal();
}

std::string format_from_path(const fs::path& p) {
    std::string ext = p.extension().string();
    if (!ext.empty()) ext.erase(0, 1);
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == "x3d" || ext == "vtk" ? ext : "png";
}

void check_records(const RunSpec& spec, const Registry& registry, const Json& records) {
    auto fail = [&](const std::string& needle, const std::string& msg) {
        throw SpecError(spec.file.string(), line_of(spec.text, needle), msg);
    };
    if (!records.is_array()) fail("\"pipeline\"", "'pipeline' must be a list of node records");
    for (const auto& r : records) {
        if (!r.is_object() || !r.contains("factory_id") || !r["factory_id"].is_string())
            fail("\"pipeline\"", "every pipeline entry needs a string 'factory_id'");
        const std::string id = r["factory_id"].get<std::string>();
        if (!registry.find(id) && id != ModuleManager::kFactoryId)
            fail("\"" + id + "\"", "unknown factory '" + id + "'");
        if (r.contains("children")) check_records(spec, registry, r["children"]);
    }
}

ImageData image_from(const Dataset& d, const fs::path& path) {
    const auto* img = std::get_if<ImageData>(&d);
    if (!img || !img->point_scalars()) throw Error("'" + path.string() + "' holds no image data with scalars");
    return *img;
}

/// Image scalars as a numpy-ordered (nx, ny, nz) array.
NumericArray grid_array(const ImageData& img) {
    const auto [nx, ny, nz] = img.dims();
    std::vector<double> v(img.point_count());
    const auto values = img.point_scalars()->to_doubles();
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j)
            for (std::size_t k = 0; k < nz; ++k) v[(i * ny + j) * nz + k] = values[i + nx * (j + ny * k)];
    return NumericArray({nx, ny, nz}, std::move(v));
}

const Node* vtk_output_node(const Scene& scene) {
    const Node* last_module = nullptr;
    const Node* last_any = nullptr;
    static_cast<const Node&>(scene).visit_preorder([&](const Node& n) {
        if (n.outputs().empty() || !n.outputs().front()) return;
        if (n.kind() == NodeKind::Module) last_module = &n;
        if (n.kind() != NodeKind::Scene) last_any = &n;
    });
    return last_module ? last_module : last_any;
}

void write_file(const fs::path& path, const std::string& bytes) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << bytes;
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

} // namespace

std::pair<int, int> parse_size(const std::string& text) {
    int w = 0, h = 0;
    char x = 0;
    std::istringstream in(text);
    if (!(in >> w >> x >> h) || (x != 'x' && x != 'X') || w < 1 || h < 1 || w > 8192 || h > 8192 || !in.eof())
        throw Error("size must look like WxH, got '" + text + "'");
    return {w, h};
}

RunSpec load_run_spec(const fs::path& file, const Registry& registry, bool require_outputs) {
    RunSpec spec;
    spec.file = file;
    try {
        spec.text = read_text(file);
    } catch (const Error& e) {
        throw SpecError(file.string(), 1, e.what());
    }
    auto fail = [&](const std::string& needle, const std::string& msg) {
        throw SpecError(file.string(), line_of(spec.text, needle), msg);
    };
    Json doc;
    try {
        doc = Json::parse(spec.text);
    } catch (const Json::parse_error& e) {
        throw SpecError(file.string(), line_at(spec.text, e.byte ? e.byte - 1 : 0), "malformed JSON");
    }
    if (!doc.is_object()) throw SpecError(file.string(), 1, "spec must be a JSON object");
    const fs::path base = file.parent_path();

    spec.input = doc.value("input", Json());
    if (!spec.input.is_null()) {
        if (!spec.input.is_object() || !spec.input.contains("path") || !spec.input["path"].is_string())
            fail("\"input\"", "'input' needs a string 'path'");
        const std::string builder = spec.input.value("builder", "");
        if (!builder.empty() && builder != "contour3d") fail("\"" + builder + "\"", "unknown builder '" + builder + "'");
        spec.input["path"] = resolve(base, spec.input["path"].get<std::string>()).string();
        if (builder.empty() && !registry.reader_for(spec.input["path"].get<std::string>()))
            fail("\"path\"", "no reader registered for '" + spec.input["path"].get<std::string>() + "'");
        if (spec.input.contains("contours")) {
            const auto& c = spec.input["contours"];
            if (!c.is_array() || !std::all_of(c.begin(), c.end(), [](const Json& v) { return v.is_number(); }))
                fail("\"contours\"", "'contours' must be a list of numbers");
        }
    }

    spec.pipeline = doc.value("pipeline", Json::array());
    check_records(spec, registry, spec.pipeline);

    spec.camera = doc.value("camera", Json::object());
    if (!spec.camera.is_object()) fail("\"camera\"", "'camera' must be an object");
    Scene probe;
    for (const auto& [name, value] : spec.camera.items()) {
        if (!probe.has_property(name)) fail("\"" + name + "\"", "unknown camera property '" + name + "'");
        try {
            validate_value(probe.descriptor(name), value_from_json(value, probe.descriptor(name).kind));
        } catch (const Error& e) {
            fail("\"" + name + "\"", e.what());
        }
    }

    const Json outputs = doc.value("outputs", Json::array());
    if (!outputs.is_array()) fail("\"outputs\"", "'outputs' must be a list");
    for (const auto& o : outputs) {
        if (!o.is_object() || !o.contains("path") || !o["path"].is_string())
            fail("\"outputs\"", "every output needs a string 'path'");
        OutputSpec out;
        out.path = resolve(base, o["path"].get<std::string>());
        out.format = o.value("format", format_from_path(out.path));
        if (out.format != "png" && out.format != "x3d" && out.format != "vtk")
            fail("\"" + out.format + "\"", "unknown output format '" + out.format + "'");
        for (auto [key, target] : {std::pair{"width", &out.width}, std::pair{"height", &out.height}}) {
            if (!o.contains(key)) continue;
            if (!o[key].is_number_integer() || o[key].get<std::int64_t>() < 1 || o[key].get<std::int64_t>() > 8192)
                fail(std::string("\"") + key + "\"", std::string("'") + key + "' must be an integer in [1, 8192]");
            *target = o[key].get<int>();
        }
        spec.outputs.push_back(std::move(out));
    }
    if (require_outputs && spec.outputs.empty()) fail("\"outputs\"", "'outputs' must not be empty");
    return spec;
}

void build_run_spec(Engine& engine, const RunSpec& spec) {
    Mlab mlab(engine);
    Scene& scene = engine.new_scene();
    if (!spec.input.is_null()) {
        const std::string path = spec.input["path"].get<std::string>();
        if (spec.input.value("builder", "") == "contour3d") {
            const ImageData img = image_from(read_legacy_file(path), path);
            Contour3dOptions options;
            if (spec.input.contains("contours")) options.contours = spec.input["contours"].get<std::vector<double>>();
            if (spec.input.contains("colormap")) options.colormap = spec.input["colormap"].get<std::string>();
            options.origin = img.origin();
            options.spacing = img.spacing();
            mlab.contour3d(grid_array(img), options);
        } else {
            auto reader = engine.create(engine.registry().reader_for(path)->factory_id);
            reader->set_property("file_name", path);
            engine.add_source(std::move(reader));
        }
    }
    for (const auto& record : spec.pipeline) {
        std::unique_ptr<Node> node;
        try {
            node = node_from_record(engine.registry(), record);
        } catch (const StateLoadError& e) {
            throw SpecError(spec.file.string(), line_of(spec.text, "\"" + record["factory_id"].get<std::string>() + "\""),
                            e.what());
        }
        const std::string id = node->factory_id();
        try {
            switch (node->kind()) {
            case NodeKind::Source: engine.add_source(std::move(node)); break;
            case NodeKind::Filter: engine.add_filter(std::move(node)); break;
            default: engine.add_module(std::move(node)); break;
            }
        } catch (const Error& e) {
            throw SpecError(spec.file.string(), line_of(spec.text, "\"" + id + "\""), e.what());
        }
    }
    for (const auto& [name, value] : spec.camera.items())
        scene.set_property(name, value_from_json(value, scene.descriptor(name).kind));
}

void check_pipeline_health(const Engine& engine) {
    for (const auto& s : engine.scenes()) {
        const Node* bad = nullptr;
        static_cast<const Node&>(*s).visit_preorder([&](const Node& n) {
            if (!bad && n.status() == NodeStatus::Error) bad = &n;
        });
        if (bad) throw Error("node '" + bad->name() + "' failed: " + bad->status_message());
    }
}

void write_output(const Engine& engine, const OutputSpec& output) {
    const Scene* scene = engine.current_scene();
    if (!scene) throw Error("nothing to output: there is no scene");
    if (output.format == "vtk") {
        const Node* n = vtk_output_node(*scene);
        if (!n) throw Error("no dataset available for VTK output");
        write_file(output.path, write_legacy(*n->outputs().front()));
        return;
    }
    const SceneSnapshot snap = snapshot_scene(*scene);
    if (output.format == "x3d") write_file(output.path, export_x3d(snap.actors, snap.camera));
    else write_file(output.path, encode_png(render_snapshot(snap, output.width, output.height)));
}

// ---------------------------------------------------------------------------

namespace {

struct OutFlags {
    std::string out;
    std::string size;
    std::string format;

    std::optional<OutputSpec> output() const {
        if (!size.empty()) parse_size(size);
        if (out.empty()) {
            if (!format.empty()) throw Error("--format needs --out");
            return std::nullopt;
        }
        OutputSpec o;
        o.path = out;
        o.format = format.empty() ? format_from_path(o.path) : format;
        if (o.format != "png" && o.format != "x3d" && o.format != "vtk") throw Error("unknown format '" + o.format + "'");
        if (!size.empty()) std::tie(o.width, o.height) = parse_size(size);
        return o;
    }
};

void add_out_flags(CLI::App* cmd, OutFlags& flags) {
    cmd->add_option("--out", flags.out, "Write a single output to PATH");
    cmd->add_option("--size", flags.size, "Image size as WxH (default 640x480)");
    cmd->add_option("--format", flags.format, "png, x3d or vtk (default from --out extension)")
        ->check(CLI::IsMember({"png", "x3d", "vtk"}));
}

int run_command(const std::string& spec_path, const OutFlags& flags, const std::string& script_path,
                std::ostream& out, std::ostream& err) {
    std::optional<OutputSpec> override_output;
    try {
        override_output = flags.output();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    Engine engine;
    RunSpec spec;
    try {
        spec = load_run_spec(spec_path, engine.registry(), !override_output);
    } catch (const SpecError& e) {
        err << e.what() << '\n';
        return 2;
    }
    if (override_output) spec.outputs = {*override_output};
    else if (!flags.size.empty())
        for (auto& o : spec.outputs) std::tie(o.width, o.height) = parse_size(flags.size);

    Recorder recorder(engine);
    if (!script_path.empty()) recorder.start();
    try {
        build_run_spec(engine, spec);
    } catch (const SpecError& e) {
        err << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    try {
        check_pipeline_health(engine);
        for (const auto& o : spec.outputs) {
            write_output(engine, o);
            out << "wrote " << o.path.string() << '\n';
        }
        if (!script_path.empty()) {
            write_file(script_path, script_to_text(recorder.stop()));
            out << "wrote " << script_path << '\n';
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

int replay_command(const std::string& script_path, const OutFlags& flags, std::ostream& out, std::ostream& err) {
    try {
        const auto output = flags.output();
        Engine engine;
        replay(engine, script_from_text(read_text(script_path)));
        if (!engine.current_scene()) engine.new_scene();
        check_pipeline_health(engine);
        if (output) {
            write_output(engine, *output);
            out << "wrote " << output->path.string() << '\n';
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

int serve_command(const std::string& host, unsigned short port, std::ostream& out, std::ostream& err) {
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    EngineService service;
    service.with_engine([](Engine& e) { return e.new_scene().object_id(); });
    HttpServer server(service, host, port);
    try {
        server.start();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    out << "listening on http://" << host << ':' << server.port() << std::endl;
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
    return 0;
}

} // namespace

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Headless visualization pipeline: batch rendering, record/replay and a remote-control service"};
    app.require_subcommand(1);

    std::string spec_path, script_path, replay_path, host = "127.0.0.1";
    unsigned short port = 8787;
    OutFlags run_flags, record_flags, replay_flags;

    auto* run = app.add_subcommand("run", "Build a pipeline from a spec and write its outputs");
    run->add_option("spec", spec_path, "Run spec (JSON)")->required();
    add_out_flags(run, run_flags);

    auto* record = app.add_subcommand("record", "Run a spec while recording a replayable script");
    record->add_option("spec", spec_path, "Run spec (JSON)")->required();
    record->add_option("--script", script_path, "Script to write (.mvr.jsonl)")->required();
    add_out_flags(record, record_flags);

    auto* rep = app.add_subcommand("replay", "Rebuild a pipeline from a recorded script");
    rep->add_option("script", replay_path, "Recorded script (.mvr.jsonl)")->required();
    add_out_flags(rep, replay_flags);

    auto* serve = app.add_subcommand("serve", "Serve the HTTP/WebSocket API");
    serve->add_option("--port", port, "TCP port (default 8787)");
    serve->add_option("--host", host, "Address to bind (default 127.0.0.1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    if (*run) return run_command(spec_path, run_flags, "", out, err);
    if (*record) return run_command(spec_path, record_flags, script_path, out, err);
    if (*rep) return replay_command(replay_path, replay_flags, out, err);
    return serve_command(host, port, out, err);
}

} // namespace vizpipe
