#include "plates/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) plates::fail(plates::ErrorKind::Config, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) plates::fail(plates::ErrorKind::Config, "cannot write '" + path.string() + "'");
    out << text;
}

int cmd_run(const std::string& config_path, const std::string& out_flag, bool serial, const std::string& mesh_in) {
    const plates::RunConfig cfg = plates::load_config(config_path);
    plates::RunOptions opts;
    opts.serial = serial;
    if (!mesh_in.empty()) opts.mesh_in = mesh_in;

    fs::path out_dir = out_flag.empty() ? fs::path(cfg.out_dir) : fs::path(out_flag);
    fs::create_directories(out_dir);

    const auto rows = plates::run(cfg, opts);
    write_file(out_dir / (cfg.name + ".csv"), plates::report_csv(rows));
    write_file(out_dir / (cfg.name + "_timing.csv"), plates::timing_csv(rows));
    write_file(out_dir / (cfg.name + ".json"), plates::report_json(cfg, rows).dump(2) + "\n");
    if (cfg.locking) write_file(out_dir / (cfg.name + "_locking.csv"), plates::locking_csv(plates::locking_sweep(cfg, opts)));

    int code = plates::kExitOk;
    int flagged = 0;
    for (const auto& r : rows) {
        if (r.status == "error") {
            std::cerr << "error: " << r.case_id << " (mesh " << r.mesh << ", n " << r.gradient_index << "): " << r.message
                      << '\n';
            code = std::max(code, r.exit_code);
        } else if (r.status == "flagged") {
            ++flagged;
        }
    }
    std::cout << rows.size() << " rows written to " << (out_dir / (cfg.name + ".csv")).string();
    if (flagged) std::cout << " (" << flagged << " flagged)";
    std::cout << '\n';
    return code;
}

int cmd_compare(const std::string& report, const std::string& expected, std::optional<double> tol) {
    const auto rows = plates::compare(plates::parse_csv(slurp(report)), plates::parse_csv(slurp(expected)), tol);
    std::cout << plates::compare_table(rows);
    const bool ok = std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.pass; });
    return ok ? plates::kExitOk : plates::kExitCompare;
}

int cmd_mesh(const std::string& spec_path, const std::string& out) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(slurp(spec_path));
    } catch (const nlohmann::json::exception& e) {
        plates::fail(plates::ErrorKind::Config, std::string("cannot parse mesh spec: ") + e.what());
    }
    const plates::Mesh mesh = plates::generate_mesh(plates::parse_mesh_spec(doc));
    write_file(out, plates::write_mesh(mesh));
    std::cout << mesh.node_count() << " nodes, " << mesh.element_count() << " triangles written to " << out << '\n';
    return plates::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Functionally graded plate analyses with the CS-DSG3 triangle"};
    app.require_subcommand(1);

    std::string config_path, out_dir, mesh_in;
    bool serial = false;
    auto* run = app.add_subcommand("run", "run a configuration and write CSV/JSON reports");
    run->add_option("config", config_path, "run configuration (JSON)")->required();
    run->add_option("--out", out_dir, "output directory (default from the config)");
    run->add_flag("--serial", serial, "evaluate sweep points one at a time");
    run->add_option("--mesh-in", mesh_in, "use this mesh file instead of generating one");

    std::string report, expected;
    std::optional<double> tol;
    auto* cmp = app.add_subcommand("compare", "compare a report against expected values");
    cmp->add_option("report", report, "report CSV")->required();
    cmp->add_option("expected", expected, "expected-values CSV")->required();
    cmp->add_option("--tol", tol, "relative tolerance for every row");

    std::string spec_path, mesh_out;
    auto* mesh = app.add_subcommand("mesh", "generate a mesh file");
    mesh->add_option("spec", spec_path, "mesh spec (JSON with geometry and mesh)")->required();
    mesh->add_option("--mesh-out", mesh_out, "output mesh file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : plates::kExitConfig;
    }

    try {
        if (*run) return cmd_run(config_path, out_dir, serial, mesh_in);
        if (*cmp) return cmd_compare(report, expected, tol);
        return cmd_mesh(spec_path, mesh_out);
    } catch (const plates::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return plates::exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return plates::kExitNumeric;
    }
}
