#pragma once

#include "plates/errors.hpp"
#include "plates/material.hpp"
#include "plates/mesh.hpp"
#include "plates/solver.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace plates {

enum class Quantity {
    None,
    Deflection,        // 100 w_c D / (p a^4)
    Frequency,         // omega a^2 sqrt(rho h / D)
    FrequencyOmega,    // [omega^2 rho h a^4 / (D (1 - nu^2))]^(1/4)
    Buckling,          // N b^2 / (pi^2 D)
    CriticalTemperature,  // T_c - T_m, already physical
};

enum class ReferencePhase { Ceramic, Metal };

struct CaseConfig {
    std::string id;
    AnalysisCase analysis;
    Quantity quantity = Quantity::None;
    ReferencePhase phase = ReferencePhase::Ceramic;
};

struct GeometryConfig {
    double a = 1.0;
    double b = 1.0;
    double h = 0.1;
    double skew_deg = 0.0;
    std::optional<double> cutout_radius;
};

/// Sweep axes; an empty axis is not swept.
struct SweepAxes {
    std::vector<int> mesh;
    std::vector<double> gradient_index;
    std::vector<double> a_over_h;
    std::vector<double> delta_t;
    std::vector<double> r_over_a;
    std::vector<double> skew_deg;
};

struct LockingConfig {
    std::vector<double> a_over_h;
};

struct RunConfig {
    std::string name = "run";
    nlohmann::json material;  // preset reference or inline definition, see fgm_from_json
    GeometryConfig geometry;
    MeshSpec mesh;
    std::vector<CaseConfig> cases;
    SweepAxes sweep;
    std::optional<LockingConfig> locking;
    std::string out_dir = ".";
};

/// Parses a "schema": 1 document. Throws plates::Error(Config) on any problem.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

/// Mesh generation spec from the "geometry" and "mesh" sections of a document.
MeshSpec parse_mesh_spec(const nlohmann::json& doc);

/// One sweep point of one case.
struct ReportRow {
    std::string case_id;
    std::string kind;
    int mesh = 0;
    double gradient_index = 0.0;
    double a_over_h = 0.0;
    double delta_t = 0.0;
    double r_over_a = 0.0;
    double skew_deg = 0.0;
    int nodes = 0;
    int free_dofs = 0;
    double a = 0.0;
    double b = 0.0;
    double h = 0.0;
    double pressure = 0.0;
    NormalizationBasis basis;
    std::string quantity;
    double raw = 0.0;
    double normalized = 0.0;
    std::vector<double> normalized_modes;
    std::string status = "ok";  // ok | flagged | error
    std::string message;
    double wall_time = 0.0;
    int exit_code = 0;  // nonzero for error rows
};

struct RunOptions {
    bool serial = false;
    int threads = 0;                     // 0: PLATES_THREADS or hardware concurrency
    std::optional<std::string> mesh_in;  // overrides generation
};

/// Executes the cross product of sweep axes and cases. Rows come back in sweep order.
std::vector<ReportRow> run(const RunConfig& cfg, const RunOptions& opts = {});

struct LockingRow {
    double a_over_h = 0.0;
    double cs_dsg3 = 0.0;
    double dsg3 = 0.0;
    double reference = 0.0;
};

/// Normalized centre deflection of plain DSG3 and CS-DSG3 over a/h with the thin-plate
/// Navier value as reference. Uses the first static case and the configured mesh.
std::vector<LockingRow> locking_sweep(const RunConfig& cfg, const RunOptions& opts = {});

/// Deterministic CSV (no timing), timing CSV and JSON report.
std::string report_csv(const std::vector<ReportRow>& rows);
std::string timing_csv(const std::vector<ReportRow>& rows);
nlohmann::json report_json(const RunConfig& cfg, const std::vector<ReportRow>& rows);
std::string locking_csv(const std::vector<LockingRow>& rows);

/// Minimal CSV table: header plus rows of raw fields.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // -1 when absent
};

CsvTable parse_csv(const std::string& text);

struct CompareRow {
    std::string key;
    double actual = 0.0;
    double expected = 0.0;
    double rel_error = 0.0;
    double tolerance = 0.0;
    bool found = false;
    bool pass = false;
};

/// Matches expected rows to report rows on every shared key column. The expected file has an
/// "expected" column, optionally "tol" (relative) and "column" (report column, default "normalized").
std::vector<CompareRow> compare(const CsvTable& report, const CsvTable& expected, std::optional<double> tol_override);
std::string compare_table(const std::vector<CompareRow>& rows);

/// Process exit codes.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitCompare = 4;

int exit_code_for(ErrorKind kind);

std::string format_double(double v);

}  // namespace plates
