// Command-line front end: batch assignment, session files, calibration and
// the REST service.
#include "dyncolor/dynamic_range.hpp"
#include "dyncolor/errors.hpp"
#include "dyncolor/metrics.hpp"
#include "dyncolor/naming.hpp"
#include "dyncolor/optimizer.hpp"
#include "dyncolor/sampling.hpp"
#include "dyncolor/service.hpp"
#include "dyncolor/session.hpp"

#include "CLI11.hpp"
#include "httplib.h"
#include "json.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace dyncolor;
using nlohmann::json;

namespace {

struct Common {
    std::string mode = "difference";
    std::optional<std::uint64_t> seed;
    std::string config;
    std::string names = DYNCOLOR_DATA_DIR "/names/synthetic_10.json";
    std::string harmony;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--mode", c.mode, "difference | similarity")->check(CLI::IsMember({"difference", "similarity"}));
    app->add_option("--seed", c.seed, "random seed");
    app->add_option("--config", c.config, "optimizer config JSON");
    app->add_option("--names", c.names, "color-name model JSON");
    app->add_option("--harmony", c.harmony, "pair-harmony scorer JSON");
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw ArgumentError("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

std::shared_ptr<const NameModel> names_of(const Common& c) {
    return std::make_shared<const NameModel>(load_name_model(std::filesystem::path(c.names)));
}

std::shared_ptr<const PairHarmonyScorer> harmony_of(const Common& c) {
    return c.harmony.empty() ? default_pair_harmony() : load_pair_harmony(c.harmony);
}

OptimizerConfig config_of(const Common& c) {
    OptimizerConfig cfg = c.config.empty() ? OptimizerConfig{} : OptimizerConfig::from_json(read_json(c.config));
    if (c.seed) cfg.seed = *c.seed;
    cfg.validate();
    return cfg;
}

SessionInputs inputs_of(const Common& c, const std::string& hierarchy, const std::string& layout) {
    SessionInputs in;
    in.hierarchy = load_hierarchy(std::filesystem::path(hierarchy));
    if (!layout.empty()) in.layout = load_layout(std::filesystem::path(layout));
    in.mode = spatial_mode_from_string(c.mode);
    in.config = config_of(c);
    in.names = names_of(c);
    in.pair_harmony = harmony_of(c);
    return in;
}

void print_palette(const json& palette, bool hex) {
    if (!hex) {
        std::cout << palette.dump(2) << "\n";
        return;
    }
    for (const auto& c : palette["visible"]) std::cout << c["id"].get<std::string>() << " " << c["hex"].get<std::string>() << "\n";
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hierarchical color assignment"};
    app.require_subcommand(1);

    Common common;
    std::string hierarchy, layout, session_path, out_path, node, trace_path;
    bool hex = false, table = false;

    auto* assign = app.add_subcommand("assign", "optimize top-level colors for a hierarchy");
    add_common(assign, common);
    assign->add_option("hierarchy", hierarchy, "hierarchy JSON")->required();
    assign->add_option("--layout", layout, "layout JSON");
    assign->add_option("--out", out_path, "write the session log here");
    assign->add_option("--trace", trace_path, "write the optimizer trace CSV here");
    assign->add_flag("--hex", hex, "print id/hex lines");

    auto* expand = app.add_subcommand("expand", "expand a node of a saved session");
    add_common(expand, common);
    expand->add_option("session", session_path, "session log JSON")->required();
    expand->add_option("node", node, "node id")->required();
    expand->add_option("--out", out_path, "write the updated log here (default: in place)");
    expand->add_flag("--hex", hex, "print id/hex lines");

    auto* evaluate_cmd = app.add_subcommand("evaluate", "metrics for a saved session");
    add_common(evaluate_cmd, common);
    evaluate_cmd->add_option("session", session_path, "session log JSON")->required();
    evaluate_cmd->add_flag("--table", table, "print the frontier as a table");

    std::string radii = "5,10,15,20,25", center = "62.5,62.5,315";
    int trials = 20;
    auto* calibrate = app.add_subcommand("calibrate-radius", "capacity versus sphere radius");
    add_common(calibrate, common);
    calibrate->add_option("--radii", radii, "comma-separated radii");
    calibrate->add_option("--center", center, "sphere center L,C,h");
    calibrate->add_option("--trials", trials, "trials per radius")->check(CLI::PositiveNumber);

    auto* trace = app.add_subcommand("trace", "optimizer trace CSV for the top level");
    add_common(trace, common);
    trace->add_option("hierarchy", hierarchy, "hierarchy JSON")->required();
    trace->add_option("--layout", layout, "layout JSON");

    std::string host = "127.0.0.1";
    int port = 8080;
    auto* serve = app.add_subcommand("serve", "run the REST service");
    add_common(serve, common);
    serve->add_option("--host", host);
    serve->add_option("--port", port);

    std::string c3;
    auto* import = app.add_subcommand("import-names", "convert c3 color-name data to the model format");
    import->add_option("input", c3, "c3 JSON")->required();
    import->add_option("--out", out_path, "output path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*assign) {
            Session s("cli", inputs_of(common, hierarchy, layout));
            for (const auto& w : s.warnings()) std::cerr << "warning: " << w << "\n";
            if (!out_path.empty()) write_json(out_path, s.event_log());
            if (!trace_path.empty()) {
                std::vector<TraceRow> rows;
                OptimizeOptions opt;
                opt.trace = &rows;
                OptimizerConfig cfg = s.inputs().config;
                cfg.seed = derive_seed(cfg.seed, "top");
                const auto classes = s.top_level();
                optimize(classes, FeasibleRangeSet::uniform(classes, default_range()), s.context_for(classes), cfg, opt);
                std::ofstream(trace_path) << trace_csv(rows);
            }
            print_palette(s.palette_json(), hex);
        } else if (*expand) {
            auto s = Session::replay("cli", read_json(session_path), names_of(common), harmony_of(common));
            const auto& rec = s->expand(node);
            for (const auto& w : s->warnings()) std::cerr << "warning: " << w << "\n";
            write_json(out_path.empty() ? session_path : out_path, s->event_log());
            if (hex) {
                for (const auto& c : rec.children) std::cout << c << " " << to_hex(s->color(c)) << "\n";
            } else {
                std::cout << s->palette_json().dump(2) << "\n";
            }
        } else if (*evaluate_cmd) {
            auto s = Session::replay("cli", read_json(session_path), names_of(common), harmony_of(common));
            const auto ev = s->evaluation_json();
            if (table) std::cout << EvaluationReport::from_json(ev["frontier"]).table();
            else std::cout << ev.dump(2) << "\n";
        } else if (*calibrate) {
            const auto c = parse_list(center);
            if (c.size() != 3) throw ArgumentError("--center expects L,C,h");
            const LabColor lab = to_lab(LchColor{c[0], c[1], c[2]});
            const std::uint64_t seed = common.seed.value_or(0);
            std::vector<RadiusSample> samples;
            std::cout << "radius,trial,capacity\n";
            for (double r : parse_list(radii)) {
                const auto range = FeasibleRange::make_sphere(lab, r, HueInterval{c[2], 180.0});
                for (int t = 0; t < trials; ++t) {
                    SamplerConfig sc;
                    sc.seed = derive_seed(seed, "calibrate-" + std::to_string(r) + "-" + std::to_string(t));
                    const double k = static_cast<double>(dart_throw(range, kSaturate, sc).size());
                    samples.push_back({r, k});
                    std::cout << r << "," << t << "," << k << "\n";
                }
            }
            const auto law = fit_radius_law(samples);
            std::cout << "# fit: capacity = " << law.scale << " * r^" << law.exponent << "  (R^2 = " << law.r_squared
                      << ")\n";
        } else if (*trace) {
            auto in = inputs_of(common, hierarchy, layout);
            Session s("cli", in);
            std::vector<TraceRow> rows;
            OptimizeOptions opt;
            opt.trace = &rows;
            OptimizerConfig cfg = in.config;
            cfg.seed = derive_seed(cfg.seed, "top");
            const auto classes = s.top_level();
            optimize(classes, FeasibleRangeSet::uniform(classes, default_range()), s.context_for(classes), cfg, opt);
            std::cout << trace_csv(rows);
        } else if (*serve) {
            SessionService service(names_of(common), harmony_of(common));
            httplib::Server server;
            service.mount(server);
            std::cerr << "listening on " << host << ":" << port << "\n";
            if (!server.listen(host, port)) throw ArgumentError("cannot listen on " + host + ":" + std::to_string(port));
        } else if (*import) {
            write_json(out_path, import_c3_name_data(read_json(c3)).to_json());
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
