#include "plates/cli.hpp"

#include "plates/reference.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

namespace plates {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void config_error(const std::string& msg) { fail(ErrorKind::Config, msg); }

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        config_error(std::string("bad value for '") + key + "'");
    }
}

double positive(const json& j, const char* key, double fallback) {
    const double v = get_or(j, key, fallback);
    if (!(v > 0.0) || !std::isfinite(v)) config_error(std::string("'") + key + "' must be positive");
    return v;
}

template <class T>
std::vector<T> axis(const json& sweep, const char* key) {
    if (!sweep.contains(key)) return {};
    const auto& a = sweep.at(key);
    if (!a.is_array() || a.empty()) config_error(std::string("sweep axis '") + key + "' must be a non-empty array");
    std::vector<T> out;
    for (const auto& v : a) {
        if (!v.is_number()) config_error(std::string("sweep axis '") + key + "' must hold numbers");
        out.push_back(v.get<T>());
    }
    return out;
}

EdgeSupport edge_support(const std::string& s) {
    const std::string v = lower(s);
    if (v == "free" || v == "f") return EdgeSupport::Free;
    if (v == "simple" || v == "s") return EdgeSupport::Simple;
    if (v == "clamped" || v == "c") return EdgeSupport::Clamped;
    config_error("unknown edge support '" + s + "'");
}

ProfileShape profile_shape(const std::string& s) {
    const std::string v = lower(s);
    if (v == "series" || v == "nonlinear") return ProfileShape::Series;
    if (v == "linear") return ProfileShape::Linear;
    config_error("unknown temperature profile '" + s + "'");
}

ThermalState parse_thermal(const json& j) {
    const std::string mode = lower(get_or<std::string>(j, "mode", "uniform"));
    const double t0 = get_or(j, "T0", 300.0);
    if (mode == "uniform") return ThermalState::uniform(get_or(j, "T", t0), t0);
    if (mode == "gradient")
        return ThermalState::gradient(get_or(j, "Tc", t0), get_or(j, "Tm", t0), t0,
                                      profile_shape(get_or<std::string>(j, "profile", "series")));
    config_error("thermal mode must be 'uniform' or 'gradient'");
}

EigenOptions parse_eigen(const json& j) {
    EigenOptions e;
    const std::string s = lower(get_or<std::string>(j, "strategy", "auto"));
    if (s == "auto") e.strategy = EigenStrategy::Auto;
    else if (s == "dense") e.strategy = EigenStrategy::Dense;
    else if (s == "krylov") e.strategy = EigenStrategy::Krylov;
    else config_error("unknown eigen strategy '" + s + "'");
    e.dense_threshold = get_or(j, "dense_threshold", e.dense_threshold);
    e.block_size = get_or(j, "block_size", e.block_size);
    e.max_basis = get_or(j, "max_basis", e.max_basis);
    e.tolerance = get_or(j, "tolerance", e.tolerance);
    e.seed = get_or(j, "seed", e.seed);
    if (e.block_size < 1 || e.max_basis < 1 || !(e.tolerance > 0.0)) config_error("invalid eigen options");
    return e;
}

Quantity default_quantity(AnalysisCase::Kind kind) {
    switch (kind) {
    case AnalysisCase::Kind::Static: return Quantity::Deflection;
    case AnalysisCase::Kind::Modal: return Quantity::Frequency;
    case AnalysisCase::Kind::BucklingMechanical: return Quantity::Buckling;
    case AnalysisCase::Kind::BucklingThermal: return Quantity::CriticalTemperature;
    }
    return Quantity::None;
}

Quantity parse_quantity(const std::string& s) {
    const std::string v = lower(s);
    if (v == "none") return Quantity::None;
    if (v == "deflection") return Quantity::Deflection;
    if (v == "frequency") return Quantity::Frequency;
    if (v == "frequency_omega" || v == "omega") return Quantity::FrequencyOmega;
    if (v == "buckling") return Quantity::Buckling;
    if (v == "critical_temperature") return Quantity::CriticalTemperature;
    config_error("unknown quantity '" + s + "'");
}

const char* quantity_name(Quantity q) {
    switch (q) {
    case Quantity::None: return "none";
    case Quantity::Deflection: return "deflection";
    case Quantity::Frequency: return "frequency";
    case Quantity::FrequencyOmega: return "frequency_omega";
    case Quantity::Buckling: return "buckling";
    case Quantity::CriticalTemperature: return "critical_temperature";
    }
    return "none";
}

CaseConfig parse_case(const json& j, std::size_t index) {
    if (!j.is_object()) config_error("case entries must be objects");
    CaseConfig c;
    c.id = get_or<std::string>(j, "id", "case" + std::to_string(index + 1));
    AnalysisCase& a = c.analysis;

    const std::string kind = lower(get_or<std::string>(j, "kind", ""));
    if (kind == "static") a.kind = AnalysisCase::Kind::Static;
    else if (kind == "modal") a.kind = AnalysisCase::Kind::Modal;
    else if (kind == "buckling_mechanical") a.kind = AnalysisCase::Kind::BucklingMechanical;
    else if (kind == "buckling_thermal") a.kind = AnalysisCase::Kind::BucklingThermal;
    else config_error("case '" + c.id + "': kind must be static, modal, buckling_mechanical or buckling_thermal");

    a.supports = Supports::from_code(get_or<std::string>(j, "supports", "SSSS"));
    const std::string in_plane = lower(get_or<std::string>(j, "in_plane", "normal"));
    if (in_plane == "normal") a.supports.in_plane = InPlaneRestraint::Normal;
    else if (in_plane == "tangential") a.supports.in_plane = InPlaneRestraint::Tangential;
    else config_error("in_plane must be 'normal' or 'tangential'");
    if (j.contains("hole")) a.supports.hole = edge_support(get_or<std::string>(j, "hole", "free"));

    a.pressure = get_or(j, "pressure", 1.0);
    a.modes = get_or(j, "modes", 1);
    if (a.modes < 1) config_error("case '" + c.id + "': modes must be >= 1");
    const std::string load = lower(get_or<std::string>(j, "load", "uniaxial"));
    if (load == "uniaxial") a.pattern = LoadPattern::Uniaxial;
    else if (load == "biaxial") a.pattern = LoadPattern::Biaxial;
    else config_error("load must be 'uniaxial' or 'biaxial'");

    if (j.contains("thermal")) a.thermal = parse_thermal(j.at("thermal"));
    a.metal_temperature_rise = get_or(j, "metal_rise", a.metal_temperature_rise);
    a.profile = profile_shape(get_or<std::string>(j, "profile", "series"));
    const std::string prestress = lower(get_or<std::string>(j, "prestress", "uniform"));
    if (prestress == "uniform") a.prestress = PrestressMode::Uniform;
    else if (prestress == "membrane") a.prestress = PrestressMode::MembraneSolve;
    else config_error("prestress must be 'uniform' or 'membrane'");

    const std::string smoothing = lower(get_or<std::string>(j, "smoothing", "cs-dsg3"));
    if (smoothing == "cs-dsg3") a.assembly.smoothing = Smoothing::CellBased;
    else if (smoothing == "dsg3") a.assembly.smoothing = Smoothing::None;
    else config_error("smoothing must be 'cs-dsg3' or 'dsg3'");
    if (j.contains("stabilization")) {
        const auto& s = j.at("stabilization");
        if (s.is_boolean()) {
            a.assembly.stabilization.enabled = s.get<bool>();
        } else if (s.is_number()) {
            a.assembly.stabilization = {true, s.get<double>()};
        } else {
            config_error("stabilization must be a boolean or the alpha value");
        }
    }
    if (j.contains("eigen")) a.eigen = parse_eigen(j.at("eigen"));

    c.quantity = default_quantity(a.kind);
    if (j.contains("normalize")) {
        const auto& n = j.at("normalize");
        if (n.contains("quantity")) c.quantity = parse_quantity(n.at("quantity").get<std::string>());
        const std::string phase = lower(get_or<std::string>(n, "phase", "ceramic"));
        if (phase == "ceramic") c.phase = ReferencePhase::Ceramic;
        else if (phase == "metal") c.phase = ReferencePhase::Metal;
        else config_error("normalize.phase must be 'ceramic' or 'metal'");
    }
    return c;
}

GeometryConfig parse_geometry(const json& g) {
    GeometryConfig out;
    out.a = positive(g, "a", 1.0);
    out.b = positive(g, "b", out.a);
    if (g.contains("h") && g.contains("a_over_h")) config_error("give either h or a_over_h");
    if (g.contains("a_over_h")) out.h = out.a / positive(g, "a_over_h", 10.0);
    else out.h = positive(g, "h", out.a / 10.0);
    out.skew_deg = get_or(g, "skew_deg", 0.0);
    if (!(std::abs(out.skew_deg) < 90.0)) config_error("skew_deg must lie in (-90, 90)");
    if (g.contains("cutout_radius")) out.cutout_radius = positive(g, "cutout_radius", 0.0);
    return out;
}

MeshSpec mesh_spec_for(const GeometryConfig& g, const json& m) {
    MeshSpec spec;
    spec.a = g.a;
    spec.b = g.b;
    spec.h = g.h;
    spec.skew = g.skew_deg * std::numbers::pi / 180.0;
    const std::string kind = lower(get_or<std::string>(m, "kind", g.cutout_radius ? "perforated" : "rectangle"));
    if (kind == "rectangle") {
        if (g.cutout_radius) config_error("a cutout needs the perforated mesh kind");
        spec.kind = MeshSpec::Kind::Rectangle;
        spec.rectangle.nx = get_or(m, "nx", 8);
        spec.rectangle.ny = get_or(m, "ny", spec.rectangle.nx);
        const std::string diag = lower(get_or<std::string>(m, "diagonal", "alternating"));
        if (diag == "alternating") spec.rectangle.diagonal = DiagonalRule::Alternating;
        else if (diag == "uniform") spec.rectangle.diagonal = DiagonalRule::Uniform;
        else config_error("diagonal must be 'alternating' or 'uniform'");
        if (spec.rectangle.nx < 1 || spec.rectangle.ny < 1) config_error("nx and ny must be >= 1");
    } else if (kind == "perforated") {
        if (!g.cutout_radius) config_error("perforated mesh needs geometry.cutout_radius");
        spec.kind = MeshSpec::Kind::Perforated;
        spec.perforated.radius = *g.cutout_radius;
        spec.perforated.radial = get_or(m, "radial", 8);
        spec.perforated.circumferential = get_or(m, "circumferential", 64);
    } else {
        config_error("mesh kind must be 'rectangle' or 'perforated'");
    }
    return spec;
}

}  // namespace

MeshSpec parse_mesh_spec(const json& doc) {
    try {
        if (!doc.is_object()) config_error("mesh spec must be a JSON object");
        const GeometryConfig g = parse_geometry(doc.value("geometry", json::object()));
        return mesh_spec_for(g, doc.value("mesh", json::object()));
    } catch (const json::exception& e) {
        config_error(std::string("mesh spec: ") + e.what());
    }
}

RunConfig parse_config(const json& doc) {
    try {
        if (!doc.is_object()) config_error("config must be a JSON object");
        if (get_or(doc, "schema", 0) != 1) config_error("config needs \"schema\": 1");
        RunConfig cfg;
        cfg.name = get_or<std::string>(doc, "name", cfg.name);
        if (!doc.contains("material")) config_error("config needs a material");
        cfg.material = doc.at("material");
        if (!cfg.material.is_object()) config_error("material must be an object");
        cfg.geometry = parse_geometry(doc.value("geometry", json::object()));
        cfg.mesh = mesh_spec_for(cfg.geometry, doc.value("mesh", json::object()));

        const json cases = doc.value("cases", json::array());
        if (!cases.is_array() || cases.empty()) config_error("config needs at least one case");
        for (std::size_t i = 0; i < cases.size(); ++i) cfg.cases.push_back(parse_case(cases[i], i));
        for (std::size_t i = 0; i < cfg.cases.size(); ++i)
            for (std::size_t k = 0; k < i; ++k)
                if (cfg.cases[i].id == cfg.cases[k].id) config_error("duplicate case id '" + cfg.cases[i].id + "'");

        if (doc.contains("sweep")) {
            const json& s = doc.at("sweep");
            if (!s.is_object()) config_error("sweep must be an object");
            for (const auto& [key, value] : s.items()) {
                (void)value;
                static const char* known[] = {"mesh", "n", "a_over_h", "delta_t", "r_over_a", "skew_deg"};
                if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) ==
                    std::end(known))
                    config_error("unknown sweep axis '" + key + "'");
            }
            cfg.sweep.mesh = axis<int>(s, "mesh");
            cfg.sweep.gradient_index = axis<double>(s, "n");
            cfg.sweep.a_over_h = axis<double>(s, "a_over_h");
            cfg.sweep.delta_t = axis<double>(s, "delta_t");
            cfg.sweep.r_over_a = axis<double>(s, "r_over_a");
            cfg.sweep.skew_deg = axis<double>(s, "skew_deg");
            for (int m : cfg.sweep.mesh)
                if (m < 1) config_error("mesh sweep values must be >= 1");
            for (double v : cfg.sweep.a_over_h)
                if (!(v > 0.0)) config_error("a_over_h sweep values must be positive");
            for (double v : cfg.sweep.gradient_index)
                if (!(v >= 0.0)) config_error("n sweep values must be >= 0");
            for (double v : cfg.sweep.r_over_a)
                if (!(v > 0.0 && v < 0.5)) config_error("r_over_a sweep values must lie in (0, 0.5)");
            for (double v : cfg.sweep.skew_deg)
                if (!(std::abs(v) < 90.0)) config_error("skew_deg sweep values must lie in (-90, 90)");
            if (!cfg.sweep.r_over_a.empty() && cfg.mesh.kind != MeshSpec::Kind::Perforated)
                config_error("r_over_a sweep needs the perforated mesh kind");
        }
        if (doc.contains("locking_sweep")) {
            LockingConfig l;
            l.a_over_h = axis<double>(doc.at("locking_sweep"), "a_over_h");
            if (l.a_over_h.empty()) config_error("locking_sweep needs an a_over_h array");
            for (double v : l.a_over_h)
                if (!(v > 0.0)) config_error("locking a_over_h values must be positive");
            cfg.locking = l;
        }
        if (doc.contains("output")) cfg.out_dir = get_or<std::string>(doc.at("output"), "dir", cfg.out_dir);
        // the material must be valid on its own before any sweep overrides
        json probe = cfg.material;
        probe["h"] = cfg.geometry.h;
        if (!probe.contains("n")) probe["n"] = 0.0;
        fgm_from_json(probe).validate();
        return cfg;
    } catch (const json::exception& e) {
        config_error(std::string("config: ") + e.what());
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Config) throw;
        fail(ErrorKind::Config, std::string("config: ") + e.what());
    }
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot open config '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        config_error("cannot parse '" + path + "': " + e.what());
    }
    return parse_config(doc);
}

namespace {

struct Point {
    int mesh = 0;
    double n = 0.0;
    double a_over_h = 0.0;
    double delta_t = 0.0;
    double r_over_a = 0.0;
    double skew_deg = 0.0;
};

int base_mesh(const MeshSpec& m) {
    return m.kind == MeshSpec::Kind::Rectangle ? m.rectangle.nx : m.perforated.radial;
}

std::vector<Point> sweep_points(const RunConfig& cfg) {
    const auto& s = cfg.sweep;
    const Point base{base_mesh(cfg.mesh),
                     cfg.material.value("n", 0.0),
                     cfg.geometry.a / cfg.geometry.h,
                     0.0,
                     cfg.geometry.cutout_radius ? *cfg.geometry.cutout_radius / cfg.geometry.a : 0.0,
                     cfg.geometry.skew_deg};
    auto or_base = [](const auto& values, auto fallback) {
        using T = decltype(fallback);
        return values.empty() ? std::vector<T>{fallback} : std::vector<T>(values.begin(), values.end());
    };
    std::vector<Point> out;
    for (int m : or_base(s.mesh, base.mesh))
        for (double n : or_base(s.gradient_index, base.n))
            for (double ah : or_base(s.a_over_h, base.a_over_h))
                for (double dt : or_base(s.delta_t, base.delta_t))
                    for (double r : or_base(s.r_over_a, base.r_over_a))
                        for (double psi : or_base(s.skew_deg, base.skew_deg)) out.push_back({m, n, ah, dt, r, psi});
    return out;
}

struct PointSetup {
    FgmDefinition fgm;
    MeshSpec spec;
    double a = 0.0;
    double b = 0.0;
    double h = 0.0;
};

PointSetup setup_point(const RunConfig& cfg, const Point& p) {
    PointSetup s;
    s.spec = cfg.mesh;
    s.a = cfg.geometry.a;
    s.b = s.spec.kind == MeshSpec::Kind::Perforated ? s.a : cfg.geometry.b;
    s.h = cfg.sweep.a_over_h.empty() ? cfg.geometry.h : s.a / p.a_over_h;
    s.spec.h = s.h;
    s.spec.skew = p.skew_deg * std::numbers::pi / 180.0;
    if (!cfg.sweep.mesh.empty()) {
        if (s.spec.kind == MeshSpec::Kind::Rectangle) s.spec.rectangle.nx = s.spec.rectangle.ny = p.mesh;
        else s.spec.perforated.radial = p.mesh;
    }
    if (!cfg.sweep.r_over_a.empty()) s.spec.perforated.radius = p.r_over_a * s.a;
    json material = cfg.material;
    material["n"] = p.n;
    material["h"] = s.h;
    s.fgm = fgm_from_json(material);
    return s;
}

AnalysisCase apply_delta_t(AnalysisCase c, const RunConfig& cfg, double dt) {
    if (cfg.sweep.delta_t.empty() || c.kind == AnalysisCase::Kind::BucklingThermal) return c;
    ThermalState& t = c.thermal;
    if (t.mode == ThermalState::Mode::Gradient) t.ceramic_temperature = t.metal_temperature + dt;
    else t.temperature = t.reference_temperature + dt;
    return c;
}

std::string kind_name(AnalysisCase::Kind k) {
    switch (k) {
    case AnalysisCase::Kind::Static: return "static";
    case AnalysisCase::Kind::Modal: return "modal";
    case AnalysisCase::Kind::BucklingMechanical: return "buckling_mechanical";
    case AnalysisCase::Kind::BucklingThermal: return "buckling_thermal";
    }
    return "static";
}

double normalize(Quantity q, double raw, const ReportRow& r) {
    if (!std::isfinite(raw)) return kNaN;
    switch (q) {
    case Quantity::None: return raw;
    case Quantity::Deflection: return normalized_deflection(raw, r.pressure, r.a, r.h, r.basis);
    case Quantity::Frequency: return normalized_frequency(raw, r.a, r.h, r.basis);
    case Quantity::FrequencyOmega: return frequency_parameter(raw, r.a, r.h, r.basis);
    case Quantity::Buckling: return buckling_parameter(raw, r.b, r.h, r.basis);
    case Quantity::CriticalTemperature: return raw;
    }
    return raw;
}

void solve_row(ReportRow& row, const CaseConfig& cc, const Mesh& mesh, const PointSetup& s, const AnalysisCase& c) {
    const AnalysisResult res = run_case(mesh, s.fgm, c);
    row.free_dofs = res.free_dofs;
    switch (c.kind) {
    case AnalysisCase::Kind::Static:
        row.raw = res.center_deflection;
        row.normalized = normalize(cc.quantity, row.raw, row);
        break;
    case AnalysisCase::Kind::Modal:
        row.raw = res.first_frequency();
        for (Eigen::Index i = 0; i < res.eigenvalues.size(); ++i) {
            const double w2 = res.eigenvalues(i);
            row.normalized_modes.push_back(w2 < 0.0 ? kNaN : normalize(cc.quantity, std::sqrt(w2), row));
        }
        row.normalized = row.normalized_modes.empty() ? kNaN : row.normalized_modes.front();
        if (res.negative_eigenvalue) {
            row.status = "flagged";
            row.message = res.note;
        }
        break;
    case AnalysisCase::Kind::BucklingMechanical:
    case AnalysisCase::Kind::BucklingThermal:
        if (!res.buckled) {
            row.raw = row.normalized = kNaN;
            row.status = "flagged";
            row.message = res.note;
            break;
        }
        row.raw = res.critical();
        for (Eigen::Index i = 0; i < res.eigenvalues.size(); ++i)
            row.normalized_modes.push_back(normalize(cc.quantity, res.eigenvalues(i), row));
        row.normalized = row.normalized_modes.front();
        break;
    }
}

int worker_count(const RunOptions& opts, std::size_t jobs) {
    if (opts.serial) return 1;
    int n = opts.threads;
    if (n <= 0) {
        n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
        if (const char* env = std::getenv("PLATES_THREADS")) {
            int cap = 0;
            const char* end = env + std::char_traits<char>::length(env);
            if (std::from_chars(env, end, cap).ec == std::errc{} && cap > 0) n = std::min(n, cap);
        }
    }
    return std::max(1, std::min<int>(n, static_cast<int>(jobs)));
}

template <class Job>
void parallel_for(std::size_t count, int workers, Job job) {
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) job(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace

std::vector<ReportRow> run(const RunConfig& cfg, const RunOptions& opts) {
    if (cfg.cases.empty()) config_error("config needs at least one case");
    std::optional<Mesh> fixed_mesh;
    if (opts.mesh_in) {
        if (!cfg.sweep.mesh.empty() || !cfg.sweep.r_over_a.empty() || !cfg.sweep.skew_deg.empty())
            config_error("--mesh-in cannot be combined with mesh, r_over_a or skew_deg sweeps");
        std::ifstream in(*opts.mesh_in);
        if (!in) config_error("cannot open mesh '" + *opts.mesh_in + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        fixed_mesh = read_mesh(ss.str());
    }

    const std::vector<Point> points = sweep_points(cfg);
    std::vector<ReportRow> rows(points.size() * cfg.cases.size());
    // one job per sweep point; the mesh is shared by all cases of the point
    auto job = [&](std::size_t pi) {
        const Point& p = points[pi];
        std::optional<PointSetup> setup;
        std::optional<Mesh> mesh;
        std::string setup_error;
        int setup_code = 0;
        try {
            setup = setup_point(cfg, p);
            mesh = fixed_mesh ? *fixed_mesh : generate_mesh(setup->spec);
        } catch (const Error& e) {
            setup_error = e.what();
            setup_code = exit_code_for(e.kind());
        } catch (const std::exception& e) {
            setup_error = e.what();
            setup_code = kExitNumeric;
        }
        for (std::size_t ci = 0; ci < cfg.cases.size(); ++ci) {
            const CaseConfig& cc = cfg.cases[ci];
            ReportRow& row = rows[pi * cfg.cases.size() + ci];
            row.case_id = cc.id;
            row.kind = kind_name(cc.analysis.kind);
            row.mesh = p.mesh;
            row.gradient_index = p.n;
            row.a_over_h = p.a_over_h;
            row.delta_t = p.delta_t;
            row.r_over_a = p.r_over_a;
            row.skew_deg = p.skew_deg;
            row.quantity = quantity_name(cc.quantity);
            row.pressure = cc.analysis.kind == AnalysisCase::Kind::Static ? cc.analysis.pressure : 0.0;
            row.raw = row.normalized = kNaN;
            if (!setup) {
                row.status = "error";
                row.message = setup_error;
                row.exit_code = setup_code;
                continue;
            }
            row.nodes = static_cast<int>(mesh->node_count());
            row.a = setup->a;
            row.b = setup->b;
            row.h = setup->h;
            row.basis = NormalizationBasis::of(cc.phase == ReferencePhase::Ceramic ? setup->fgm.ceramic
                                                                                  : setup->fgm.metal);
            const auto start = std::chrono::steady_clock::now();
            try {
                solve_row(row, cc, *mesh, *setup, apply_delta_t(cc.analysis, cfg, p.delta_t));
            } catch (const Error& e) {
                row.status = "error";
                row.message = e.what();
                row.exit_code = exit_code_for(e.kind());
                row.raw = row.normalized = kNaN;
                row.normalized_modes.clear();
            } catch (const std::exception& e) {
                row.status = "error";
                row.message = e.what();
                row.exit_code = kExitNumeric;
                row.raw = row.normalized = kNaN;
                row.normalized_modes.clear();
            }
            row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        }
    };
    parallel_for(points.size(), worker_count(opts, points.size()), job);
    return rows;
}

std::vector<LockingRow> locking_sweep(const RunConfig& cfg, const RunOptions& opts) {
    if (!cfg.locking) config_error("config has no locking_sweep section");
    const CaseConfig* base = nullptr;
    for (const auto& c : cfg.cases)
        if (c.analysis.kind == AnalysisCase::Kind::Static) {
            base = &c;
            break;
        }
    if (!base) config_error("locking sweep needs a static case");
    if (cfg.mesh.kind != MeshSpec::Kind::Rectangle) config_error("locking sweep needs a rectangular mesh");

    const auto& ratios = cfg.locking->a_over_h;
    std::vector<LockingRow> out(ratios.size());
    const double reference = 100.0 * navier_center_deflection(cfg.geometry.a, cfg.geometry.b);
    auto job = [&](std::size_t i) {
        Point p;
        p.mesh = base_mesh(cfg.mesh);
        p.n = cfg.material.value("n", 0.0);
        p.a_over_h = ratios[i];
        p.skew_deg = cfg.geometry.skew_deg;
        RunConfig local = cfg;
        local.sweep = {};
        local.sweep.a_over_h = {ratios[i]};
        const PointSetup s = setup_point(local, p);
        const Mesh mesh = generate_mesh(s.spec);
        const NormalizationBasis basis =
            NormalizationBasis::of(base->phase == ReferencePhase::Ceramic ? s.fgm.ceramic : s.fgm.metal);
        auto deflection = [&](Smoothing smoothing) {
            AnalysisCase c = base->analysis;
            c.assembly.smoothing = smoothing;
            const AnalysisResult r = run_case(mesh, s.fgm, c);
            return normalized_deflection(r.center_deflection, c.pressure, s.a, s.h, basis);
        };
        out[i] = {ratios[i], deflection(Smoothing::CellBased), deflection(Smoothing::None), reference};
    };
    parallel_for(ratios.size(), worker_count(opts, ratios.size()), job);
    return out;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::string join_modes(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += format_double(v[i]);
    }
    return out;
}

}  // namespace

std::string report_csv(const std::vector<ReportRow>& rows) {
    std::ostringstream os;
    os << "case,kind,mesh,n,a_over_h,delta_t,r_over_a,skew_deg,nodes,free_dofs,a,b,h,pressure,"
          "ref_E,ref_nu,ref_rho,quantity,raw,normalized,modes,status,message\n";
    for (const auto& r : rows) {
        os << csv_field(r.case_id) << ',' << r.kind << ',' << r.mesh << ',' << format_double(r.gradient_index) << ','
           << format_double(r.a_over_h) << ',' << format_double(r.delta_t) << ',' << format_double(r.r_over_a) << ','
           << format_double(r.skew_deg) << ',' << r.nodes << ',' << r.free_dofs << ',' << format_double(r.a) << ','
           << format_double(r.b) << ',' << format_double(r.h) << ',' << format_double(r.pressure) << ','
           << format_double(r.basis.youngs) << ',' << format_double(r.basis.poisson) << ','
           << format_double(r.basis.density) << ',' << r.quantity << ',' << format_double(r.raw) << ','
           << format_double(r.normalized) << ',' << join_modes(r.normalized_modes) << ',' << r.status << ','
           << csv_field(r.message) << '\n';
    }
    return os.str();
}

std::string timing_csv(const std::vector<ReportRow>& rows) {
    std::ostringstream os;
    os << "case,mesh,n,a_over_h,delta_t,r_over_a,skew_deg,free_dofs,wall_time_s\n";
    for (const auto& r : rows)
        os << csv_field(r.case_id) << ',' << r.mesh << ',' << format_double(r.gradient_index) << ','
           << format_double(r.a_over_h) << ',' << format_double(r.delta_t) << ',' << format_double(r.r_over_a) << ','
           << format_double(r.skew_deg) << ',' << r.free_dofs << ',' << format_double(r.wall_time) << '\n';
    return os.str();
}

json report_json(const RunConfig& cfg, const std::vector<ReportRow>& rows) {
    auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    json out;
    out["schema"] = 1;
    out["name"] = cfg.name;
    out["rows"] = json::array();
    for (const auto& r : rows) {
        json modes = json::array();
        for (double m : r.normalized_modes) modes.push_back(num(m));
        out["rows"].push_back({{"case", r.case_id},
                               {"kind", r.kind},
                               {"mesh", r.mesh},
                               {"n", r.gradient_index},
                               {"a_over_h", r.a_over_h},
                               {"delta_t", r.delta_t},
                               {"r_over_a", r.r_over_a},
                               {"skew_deg", r.skew_deg},
                               {"nodes", r.nodes},
                               {"free_dofs", r.free_dofs},
                               {"a", r.a},
                               {"b", r.b},
                               {"h", r.h},
                               {"pressure", r.pressure},
                               {"ref_E", r.basis.youngs},
                               {"ref_nu", r.basis.poisson},
                               {"ref_rho", r.basis.density},
                               {"quantity", r.quantity},
                               {"raw", num(r.raw)},
                               {"normalized", num(r.normalized)},
                               {"modes", modes},
                               {"status", r.status},
                               {"message", r.message},
                               {"wall_time_s", r.wall_time}});
    }
    return out;
}

std::string locking_csv(const std::vector<LockingRow>& rows) {
    std::ostringstream os;
    os << "a_over_h,cs_dsg3,dsg3,reference\n";
    for (const auto& r : rows)
        os << format_double(r.a_over_h) << ',' << format_double(r.cs_dsg3) << ',' << format_double(r.dsg3) << ','
           << format_double(r.reference) << '\n';
    return os.str();
}

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

CsvTable parse_csv(const std::string& text) {
    CsvTable t;
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            record.push_back(field);
            field.clear();
            any = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            if (any || !field.empty()) {
                record.push_back(field);
                records.push_back(record);
            }
            record.clear();
            field.clear();
            any = false;
        } else {
            field += c;
            any = true;
        }
    }
    if (quoted) fail(ErrorKind::Parse, "unterminated quoted CSV field");
    if (any || !field.empty()) {
        record.push_back(field);
        records.push_back(record);
    }
    if (records.empty()) fail(ErrorKind::Parse, "empty CSV");
    t.header = records.front();
    for (std::size_t i = 1; i < records.size(); ++i) {
        if (records[i].size() != t.header.size())
            fail(ErrorKind::Parse, "CSV row " + std::to_string(i + 1) + " has " + std::to_string(records[i].size()) +
                                       " fields, header has " + std::to_string(t.header.size()));
        t.rows.push_back(records[i]);
    }
    return t;
}

namespace {

std::optional<double> as_number(const std::string& s) {
    if (s == "nan") return kNaN;
    double v = 0.0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    const auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc{} || res.ptr != e) return std::nullopt;
    return v;
}

bool same_key(const std::string& x, const std::string& y) {
    const auto a = as_number(x);
    const auto b = as_number(y);
    if (a && b) return std::abs(*a - *b) <= 1e-9 * std::max(1.0, std::abs(*b));
    return x == y;
}

constexpr double kDefaultTolerance = 0.01;

}  // namespace

std::vector<CompareRow> compare(const CsvTable& report, const CsvTable& expected, std::optional<double> tol_override) {
    const int exp_col = expected.column("expected");
    if (exp_col < 0) fail(ErrorKind::Parse, "expected file needs an 'expected' column");
    const int tol_col = expected.column("tol");
    const int target_col = expected.column("column");

    // every other expected column is a key and must exist in the report
    std::vector<std::pair<int, int>> keys;
    for (std::size_t i = 0; i < expected.header.size(); ++i) {
        const std::string& name = expected.header[i];
        if (name == "expected" || name == "tol" || name == "column" || name == "note") continue;
        const int rc = report.column(name);
        if (rc < 0) fail(ErrorKind::Parse, "key column '" + name + "' is missing from the report");
        keys.emplace_back(static_cast<int>(i), rc);
    }

    std::vector<CompareRow> out;
    for (const auto& er : expected.rows) {
        CompareRow row;
        for (const auto& [ei, ri] : keys) {
            (void)ri;
            if (!row.key.empty()) row.key += ';';
            row.key += expected.header[ei] + '=' + er[ei];
        }
        const auto ev = as_number(er[exp_col]);
        if (!ev) fail(ErrorKind::Parse, "non-numeric expected value '" + er[exp_col] + "'");
        row.expected = *ev;
        row.tolerance = kDefaultTolerance;
        if (tol_col >= 0 && !er[tol_col].empty()) {
            const auto t = as_number(er[tol_col]);
            if (!t) fail(ErrorKind::Parse, "non-numeric tolerance '" + er[tol_col] + "'");
            row.tolerance = *t;
        }
        if (tol_override) row.tolerance = *tol_override;
        const std::string target = target_col >= 0 && !er[target_col].empty() ? er[target_col] : "normalized";
        const int value_col = report.column(target);
        if (value_col < 0) fail(ErrorKind::Parse, "report has no column '" + target + "'");

        for (const auto& rr : report.rows) {
            bool match = true;
            for (const auto& [ei, ri] : keys)
                if (!same_key(er[ei], rr[ri])) {
                    match = false;
                    break;
                }
            if (!match) continue;
            const auto av = as_number(rr[value_col]);
            row.found = true;
            row.actual = av ? *av : kNaN;
            break;
        }
        if (row.found && std::isfinite(row.actual)) {
            row.rel_error = std::abs(row.actual - row.expected) / std::max(std::abs(row.expected), 1e-300);
            row.pass = row.rel_error <= row.tolerance;
        } else {
            row.actual = row.found ? row.actual : kNaN;
            row.rel_error = kNaN;
        }
        out.push_back(row);
    }
    return out;
}

std::string compare_table(const std::vector<CompareRow>& rows) {
    std::ostringstream os;
    os << "key,actual,expected,rel_error,tol,result\n";
    for (const auto& r : rows)
        os << csv_field(r.key) << ',' << format_double(r.actual) << ',' << format_double(r.expected) << ','
           << format_double(r.rel_error) << ',' << format_double(r.tolerance) << ','
           << (r.pass ? "PASS" : (r.found ? "FAIL" : "MISSING")) << '\n';
    return os.str();
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::Parse:
    case ErrorKind::Spec:
    case ErrorKind::Domain:
    case ErrorKind::Geometry:
    case ErrorKind::Mesh: return kExitConfig;
    default: return kExitNumeric;
    }
}

}  // namespace plates
