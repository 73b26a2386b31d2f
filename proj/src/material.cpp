#include "plates/material.hpp"

#include "plates/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace plates {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Domain: return "domain error";
        case ErrorKind::Spec: return "spec error";
        case ErrorKind::Geometry: return "geometry error";
        case ErrorKind::Mesh: return "mesh error";
        case ErrorKind::Parse: return "parse error";
        case ErrorKind::Numeric: return "numeric error";
        case ErrorKind::Config: return "config error";
        case ErrorKind::Internal: return "internal error";
    }
    return "error";
}

double property_at_temperature(const TemperatureCoefficients& c, double t) {
    if (!(t > 0.0)) fail(ErrorKind::Domain, "temperature must be positive, got " + std::to_string(t));
    return c.p0 * (c.pm1 / t + 1.0 + t * (c.p1 + t * (c.p2 + t * c.p3)));
}

void PhaseProperties::validate(std::string_view label) const {
    const std::string who(label);
    if (!(youngs_modulus.p0 > 0.0)) fail(ErrorKind::Domain, who + ": E coefficient P0 must be positive");
    if (!(density > 0.0)) fail(ErrorKind::Domain, who + ": density must be positive");
    if (!(conductivity > 0.0)) fail(ErrorKind::Domain, who + ": conductivity must be positive");
    if (!(poisson > 0.0 && poisson < 0.5)) fail(ErrorKind::Domain, who + ": Poisson ratio must lie in (0, 0.5)");
}

void FgmDefinition::validate() const {
    ceramic.validate("ceramic");
    metal.validate("metal");
    if (!(gradient_index >= 0.0)) fail(ErrorKind::Domain, "gradient index must be >= 0");
    if (!(thickness > 0.0)) fail(ErrorKind::Domain, "thickness must be positive");
    if (shear_correction.mode == ShearCorrection::Mode::Constant &&
        !(shear_correction.value > 0.0 && shear_correction.value <= 1.0))
        fail(ErrorKind::Domain, "constant shear correction must lie in (0, 1]");
}

ThermalState ThermalState::uniform(double t, double reference) {
    ThermalState s;
    s.mode = Mode::Uniform;
    s.temperature = t;
    s.ceramic_temperature = t;
    s.metal_temperature = t;
    s.reference_temperature = reference;
    return s;
}

ThermalState ThermalState::gradient(double t_ceramic, double t_metal, double reference, ProfileShape profile) {
    ThermalState s;
    s.mode = Mode::Gradient;
    s.temperature = t_metal;
    s.ceramic_temperature = t_ceramic;
    s.metal_temperature = t_metal;
    s.reference_temperature = reference;
    s.profile = profile;
    return s;
}

void ThermalState::validate() const {
    const bool ok = reference_temperature > 0.0 &&
                    (mode == Mode::Uniform ? temperature > 0.0
                                           : (ceramic_temperature > 0.0 && metal_temperature > 0.0));
    if (!ok) fail(ErrorKind::Domain, "temperatures must be positive (kelvin)");
}

BulkShear bulk_shear_from(double youngs, double poisson) {
    return {youngs / (3.0 * (1.0 - 2.0 * poisson)), youngs / (2.0 * (1.0 + poisson))};
}

namespace {

double thickness_coordinate(double z, double h) {
    const double tol = 1e-12 * h;
    if (z < -0.5 * h - tol || z > 0.5 * h + tol)
        fail(ErrorKind::Domain, "z = " + std::to_string(z) + " lies outside the plate thickness");
    return std::clamp((2.0 * z + h) / (2.0 * h), 0.0, 1.0);
}

}  // namespace

double volume_fraction(double z, const FgmDefinition& fgm) {
    const double s = thickness_coordinate(z, fgm.thickness);
    if (fgm.gradient_index == 0.0) return 1.0;
    return std::pow(s, fgm.gradient_index);
}

BulkShear mori_tanaka(const BulkShear& c, const BulkShear& m, double vc) {
    if (!(c.bulk > 0.0 && c.shear > 0.0 && m.bulk > 0.0 && m.shear > 0.0))
        fail(ErrorKind::Domain, "Mori-Tanaka requires positive moduli");
    if (!(vc >= 0.0 && vc <= 1.0)) fail(ErrorKind::Domain, "volume fraction outside [0, 1]");
    const double vm = 1.0 - vc;
    const double f1 = m.shear * (9.0 * m.bulk + 8.0 * m.shear) / (6.0 * (m.bulk + 2.0 * m.shear));
    const double dk = c.bulk - m.bulk;
    const double dg = c.shear - m.shear;
    BulkShear eff;
    eff.bulk = m.bulk + dk * vc / (1.0 + vm * 3.0 * dk / (3.0 * m.bulk + 4.0 * m.shear));
    eff.shear = m.shear + dg * vc / (1.0 + vm * dg / (m.shear + f1));
    return eff;
}

IsotropicModuli effective_isotropic(const BulkShear& k) {
    if (!(k.bulk > 0.0 && k.shear > 0.0)) fail(ErrorKind::Domain, "moduli must be positive");
    const double denom = 3.0 * k.bulk + k.shear;
    return {9.0 * k.bulk * k.shear / denom, (3.0 * k.bulk - 2.0 * k.shear) / (2.0 * denom)};
}

namespace {

struct PhaseState {
    double youngs;
    double expansion;
};

PhaseState phase_at(const PhaseProperties& p, double t) {
    return {property_at_temperature(p.youngs_modulus, t), property_at_temperature(p.thermal_expansion, t)};
}

double mix(double c, double m, double vc) { return c * vc + m * (1.0 - vc); }

}  // namespace

TransportProperties effective_transport(const FgmDefinition& fgm, double vc, double t) {
    if (!(vc >= 0.0 && vc <= 1.0)) fail(ErrorKind::Domain, "volume fraction outside [0, 1]");
    const auto& c = fgm.ceramic;
    const auto& m = fgm.metal;
    const PhaseState sc = phase_at(c, t);
    const PhaseState sm = phase_at(m, t);

    TransportProperties out;
    out.density = mix(c.density, m.density, vc);
    if (fgm.homogenization == Homogenization::RuleOfMixtures) {
        out.conductivity = mix(c.conductivity, m.conductivity, vc);
        out.expansion = mix(sc.expansion, sm.expansion, vc);
        return out;
    }

    const double vm = 1.0 - vc;
    const double dkappa = c.conductivity - m.conductivity;
    out.conductivity = m.conductivity + dkappa * vc / (1.0 + vm * dkappa / (3.0 * m.conductivity));

    const BulkShear kc = bulk_shear_from(sc.youngs, c.poisson);
    const BulkShear km = bulk_shear_from(sm.youngs, m.poisson);
    const BulkShear eff = mori_tanaka(kc, km, vc);
    const double span = 1.0 / kc.bulk - 1.0 / km.bulk;
    if (std::abs(span) <= 1e-14 / km.bulk) {
        // equal bulk moduli: the Levin relation degenerates, fall back to the volume average
        out.expansion = mix(sc.expansion, sm.expansion, vc);
    } else {
        out.expansion = sm.expansion + (sc.expansion - sm.expansion) * (1.0 / eff.bulk - 1.0 / km.bulk) / span;
    }
    return out;
}

double temperature_profile(const ThermalState& thermal, const FgmDefinition& fgm, double z) {
    const double s = thickness_coordinate(z, fgm.thickness);
    if (thermal.mode == ThermalState::Mode::Uniform) return thermal.temperature;

    const double tc = thermal.ceramic_temperature;
    const double tm = thermal.metal_temperature;
    if (thermal.profile == ProfileShape::Linear) return tm + (tc - tm) * s;

    const double n = fgm.gradient_index;
    const double ratio = (fgm.ceramic.conductivity - fgm.metal.conductivity) / fgm.metal.conductivity;
    double c = 0.0;
    double eta = 0.0;
    double sign_pow = 1.0;  // (-ratio)^k
    for (int k = 0; k <= 5; ++k) {
        const double e = k * n + 1.0;
        c += sign_pow / e;
        eta += sign_pow * std::pow(s, e) / e;
        sign_pow *= -ratio;
    }
    if (!(c > 0.0)) fail(ErrorKind::Numeric, "temperature series normalizer is not positive");
    return tm + (tc - tm) * eta / c;
}

PointProperties properties_at(const FgmDefinition& fgm, const ThermalState& thermal, double z) {
    PointProperties p;
    p.temperature = temperature_profile(thermal, fgm, z);
    const double vc = volume_fraction(z, fgm);
    const auto& c = fgm.ceramic;
    const auto& m = fgm.metal;
    const PhaseState sc = phase_at(c, p.temperature);
    const PhaseState sm = phase_at(m, p.temperature);

    if (fgm.homogenization == Homogenization::RuleOfMixtures) {
        p.youngs = mix(sc.youngs, sm.youngs, vc);
        p.poisson = mix(c.poisson, m.poisson, vc);
    } else if (vc == 1.0) {
        p.youngs = sc.youngs;
        p.poisson = c.poisson;
    } else if (vc == 0.0) {
        p.youngs = sm.youngs;
        p.poisson = m.poisson;
    } else {
        const IsotropicModuli e = effective_isotropic(
            mori_tanaka(bulk_shear_from(sc.youngs, c.poisson), bulk_shear_from(sm.youngs, m.poisson), vc));
        p.youngs = e.youngs;
        p.poisson = e.poisson;
    }
    const TransportProperties tr = effective_transport(fgm, vc, p.temperature);
    p.expansion = tr.expansion;
    p.density = tr.density;
    p.conductivity = tr.conductivity;
    return p;
}

const GaussRule& gauss_legendre(int order) {
    static std::mutex guard;
    static std::map<int, GaussRule> cache;
    std::lock_guard lock(guard);
    if (auto it = cache.find(order); it != cache.end()) return it->second;
    if (order < 1) fail(ErrorKind::Internal, "Gauss order must be >= 1");

    GaussRule rule;
    rule.points.resize(order);
    rule.weights.resize(order);
    for (int i = 0; i < (order + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (order == 1) p0 = 1.0;
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.points[i] = -x;
        rule.points[order - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[order - 1 - i] = w;
    }
    if (order == 1) {
        rule.points[0] = 0.0;
        rule.weights[0] = 2.0;
    }
    return cache.emplace(order, std::move(rule)).first->second;
}

namespace {

struct Panel {
    double lo;
    double hi;
};

// Panels graded geometrically towards `lo`, where power-law profiles with n < 1 are singular.
std::vector<Panel> graded_panels(double lo, double hi, int levels) {
    std::vector<Panel> panels;
    const double width = hi - lo;
    double left = lo;
    for (int k = levels; k >= 1; --k) {
        const double right = lo + width * std::ldexp(1.0, -k);
        panels.push_back({left, right});
        left = right;
    }
    panels.push_back({left, hi});
    return panels;
}

template <typename F>
void for_each_point(const std::vector<Panel>& panels, const GaussRule& rule, F&& f) {
    for (const Panel& p : panels) {
        const double half = 0.5 * (p.hi - p.lo);
        const double mid = 0.5 * (p.hi + p.lo);
        for (std::size_t q = 0; q < rule.points.size(); ++q) f(mid + half * rule.points[q], half * rule.weights[q]);
    }
}

struct SectionIntegrals {
    Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d B = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d D = Eigen::Matrix3d::Zero();
    double shear = 0.0;
    Eigen::Vector3d Nth = Eigen::Vector3d::Zero();
    Eigen::Vector3d Mth = Eigen::Vector3d::Zero();
    double p = 0.0;
    double i = 0.0;
};

SectionIntegrals integrate_section(const FgmDefinition& fgm, const ThermalState& thermal, int levels) {
    const double h = fgm.thickness;
    const double t0 = thermal.reference_temperature;
    SectionIntegrals s;
    for_each_point(graded_panels(-0.5 * h, 0.5 * h, levels), gauss_legendre(32), [&](double z, double w) {
        const PointProperties pt = properties_at(fgm, thermal, z);
        const double q11 = pt.youngs / (1.0 - pt.poisson * pt.poisson);
        const double q12 = pt.poisson * q11;
        const double q66 = pt.youngs / (2.0 * (1.0 + pt.poisson));
        Eigen::Matrix3d q;
        q << q11, q12, 0.0, q12, q11, 0.0, 0.0, 0.0, q66;
        s.A += w * q;
        s.B += (w * z) * q;
        s.D += (w * z * z) * q;
        s.shear += w * q66;
        const double nth = (q11 + q12) * pt.expansion * (pt.temperature - t0) * w;
        s.Nth += Eigen::Vector3d(nth, nth, 0.0);
        s.Mth += Eigen::Vector3d(nth * z, nth * z, 0.0);
        s.p += w * pt.density;
        s.i += w * z * z * pt.density;
    });
    return s;
}

double relative_gap(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double scale) {
    if (scale == 0.0) return (a - b).cwiseAbs().maxCoeff() == 0.0 ? 0.0 : 1.0;
    return (a - b).cwiseAbs().maxCoeff() / scale;
}

bool converged(const SectionIntegrals& x, const SectionIntegrals& y) {
    constexpr double tol = 1e-8;
    const double stiff = x.A.cwiseAbs().maxCoeff();
    const double h = std::sqrt(std::max(x.D.cwiseAbs().maxCoeff(), 0.0) / std::max(stiff, 1e-300));
    const double thermal = std::max(x.Nth.cwiseAbs().maxCoeff(), y.Nth.cwiseAbs().maxCoeff());
    return relative_gap(x.A, y.A, stiff) <= tol && relative_gap(x.B, y.B, stiff * h) <= tol &&
           relative_gap(x.D, y.D, stiff * h * h) <= tol && std::abs(x.shear - y.shear) <= tol * x.shear &&
           relative_gap(x.Nth, y.Nth, thermal) <= tol && relative_gap(x.Mth, y.Mth, thermal * h) <= tol &&
           std::abs(x.p - y.p) <= tol * x.p && std::abs(x.i - y.i) <= tol * x.i;
}

}  // namespace

ShearFactors shear_correction_factors(const FgmDefinition& fgm, const ThermalState& thermal) {
    if (fgm.shear_correction.mode == ShearCorrection::Mode::Constant)
        return {fgm.shear_correction.value, fgm.shear_correction.value};

    // tau(z) ~ g(z) = int_{-h/2}^{z} Q11 (zeta - z_n) dzeta, z_n = int zE / int E; k = (int g)^2 / (int G * int g^2/G)
    const double h = fgm.thickness;
    std::vector<Panel> panels;
    constexpr int uniform = 256;
    for (int k = 0; k < uniform; ++k) {
        const double lo = -0.5 * h + h * k / uniform;
        const double hi = -0.5 * h + h * (k + 1) / uniform;
        if (k == 0) {
            for (const Panel& p : graded_panels(lo, hi, 30)) panels.push_back(p);
        } else {
            panels.push_back({lo, hi});
        }
    }
    const GaussRule& rule = gauss_legendre(8);
    auto q11_at = [&](double z) {
        const PointProperties pt = properties_at(fgm, thermal, z);
        return pt.youngs / (1.0 - pt.poisson * pt.poisson);
    };

    double e_int = 0.0, ez_int = 0.0;
    for_each_point(panels, rule, [&](double z, double w) {
        const double e = properties_at(fgm, thermal, z).youngs;
        e_int += w * e;
        ez_int += w * e * z;
    });
    const double zn = ez_int / e_int;

    double g_start = 0.0;
    double g_int = 0.0, g2_over_g = 0.0, shear_int = 0.0;
    for (const Panel& p : panels) {
        const double half = 0.5 * (p.hi - p.lo);
        const double mid = 0.5 * (p.hi + p.lo);
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const double z = mid + half * rule.points[q];
            const double w = half * rule.weights[q];
            double g = g_start;
            const double sub_half = 0.5 * (z - p.lo);
            const double sub_mid = 0.5 * (z + p.lo);
            for (std::size_t r = 0; r < rule.points.size(); ++r) {
                const double zeta = sub_mid + sub_half * rule.points[r];
                g += sub_half * rule.weights[r] * q11_at(zeta) * (zeta - zn);
            }
            const PointProperties pt = properties_at(fgm, thermal, z);
            const double shear = pt.youngs / (2.0 * (1.0 + pt.poisson));
            g_int += w * g;
            g2_over_g += w * g * g / shear;
            shear_int += w * shear;
        }
        for (std::size_t r = 0; r < rule.points.size(); ++r) {
            const double zeta = mid + half * rule.points[r];
            g_start += half * rule.weights[r] * q11_at(zeta) * (zeta - zn);
        }
    }
    if (!(shear_int > 0.0 && g2_over_g > 0.0))
        fail(ErrorKind::Numeric, "degenerate section in shear correction evaluation");
    const double k = g_int * g_int / (shear_int * g2_over_g);
    return {k, k};
}

SectionStiffness section_stiffness(const FgmDefinition& fgm, const ThermalState& thermal) {
    fgm.validate();
    thermal.validate();

    constexpr int max_levels = 48;
    SectionIntegrals prev = integrate_section(fgm, thermal, 0);
    SectionIntegrals curr;
    bool ok = false;
    for (int level = 1; level <= max_levels; ++level) {
        curr = integrate_section(fgm, thermal, level);
        if (converged(prev, curr)) {
            ok = true;
            break;
        }
        prev = curr;
    }
    if (!ok) fail(ErrorKind::Numeric, "through-thickness quadrature did not converge");

    SectionStiffness sec;
    sec.thickness = fgm.thickness;
    sec.A = 0.5 * (curr.A + curr.A.transpose());
    sec.B = 0.5 * (curr.B + curr.B.transpose());
    sec.D = 0.5 * (curr.D + curr.D.transpose());
    sec.Nth = curr.Nth;
    sec.Mth = curr.Mth;
    sec.inertia_p = curr.p;
    sec.inertia_i = curr.i;
    sec.shear_factors = shear_correction_factors(fgm, thermal);
    sec.Es << sec.shear_factors.xz * curr.shear, 0.0, 0.0, sec.shear_factors.yz * curr.shear;
    return sec;
}

namespace {

PhaseProperties constant_phase(double e, double alpha, double rho, double kappa, double nu) {
    PhaseProperties p;
    p.youngs_modulus = TemperatureCoefficients::constant(e);
    p.thermal_expansion = TemperatureCoefficients::constant(alpha);
    p.density = rho;
    p.conductivity = kappa;
    p.poisson = nu;
    return p;
}

}  // namespace

std::vector<std::string> material_preset_names() { return {"Al/ZrO2", "Al/ZrO2-1", "Si3N4/SUS304", "Al/Al2O3"}; }

FgmDefinition material_preset(std::string_view name, double gradient_index, double thickness) {
    FgmDefinition f;
    f.gradient_index = gradient_index;
    f.thickness = thickness;
    // Densities, conductivities and expansion coefficients of Al, ZrO2 and Al2O3 that the
    // benchmark tables do not exercise are common handbook values.
    const PhaseProperties aluminium = constant_phase(70e9, 23e-6, 2707.0, 204.0, 0.3);
    if (name == "Al/ZrO2") {
        f.ceramic = constant_phase(151e9, 10e-6, 3000.0, 2.09, 0.3);
        f.metal = aluminium;
    } else if (name == "Al/ZrO2-1") {
        f.ceramic = constant_phase(200e9, 10e-6, 3000.0, 2.09, 0.3);
        f.metal = aluminium;
    } else if (name == "Al/Al2O3") {
        f.ceramic = constant_phase(380e9, 7.4e-6, 3800.0, 10.4, 0.3);
        f.metal = aluminium;
    } else if (name == "Si3N4/SUS304") {
        f.ceramic.youngs_modulus = {348.43e9, 0.0, -3.070e-4, 2.160e-7, -8.946e-11};
        f.ceramic.thermal_expansion = {5.8723e-6, 0.0, 9.095e-4, 0.0, 0.0};
        f.ceramic.density = 2370.0;
        f.ceramic.conductivity = 9.19;
        f.ceramic.poisson = 0.28;
        f.metal.youngs_modulus = {201.04e9, 0.0, 3.079e-4, -6.534e-7, 0.0};
        f.metal.thermal_expansion = {12.330e-6, 0.0, 8.086e-4, 0.0, 0.0};
        f.metal.density = 8166.0;
        f.metal.conductivity = 12.04;
        f.metal.poisson = 0.28;
    } else {
        fail(ErrorKind::Config, "unknown material preset '" + std::string(name) + "'");
    }
    return f;
}

namespace {

TemperatureCoefficients coeffs_from_json(const nlohmann::json& j, const char* key) {
    const auto& a = j.at(key);
    if (a.is_number()) return TemperatureCoefficients::constant(a.get<double>());
    if (!a.is_array() || a.size() != 5)
        fail(ErrorKind::Config, std::string(key) + " must be a number or an array of 5 coefficients");
    return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>(), a[3].get<double>(), a[4].get<double>()};
}

PhaseProperties phase_from_json(const nlohmann::json& j) {
    PhaseProperties p;
    p.youngs_modulus = coeffs_from_json(j, "E_coeffs");
    p.thermal_expansion = coeffs_from_json(j, "alpha_coeffs");
    p.density = j.at("rho").get<double>();
    p.conductivity = j.at("kappa").get<double>();
    p.poisson = j.at("nu").get<double>();
    return p;
}

nlohmann::json coeffs_to_json(const TemperatureCoefficients& c) { return {c.p0, c.pm1, c.p1, c.p2, c.p3}; }

nlohmann::json phase_to_json(const PhaseProperties& p) {
    return {{"E_coeffs", coeffs_to_json(p.youngs_modulus)},
            {"alpha_coeffs", coeffs_to_json(p.thermal_expansion)},
            {"rho", p.density},
            {"kappa", p.conductivity},
            {"nu", p.poisson}};
}

}  // namespace

FgmDefinition fgm_from_json(const nlohmann::json& doc) {
    try {
        FgmDefinition f;
        if (doc.contains("preset")) {
            f = material_preset(doc.at("preset").get<std::string>(), doc.value("n", 0.0), doc.value("h", 0.0));
        } else {
            f.ceramic = phase_from_json(doc.at("ceramic"));
            f.metal = phase_from_json(doc.at("metal"));
            f.gradient_index = doc.at("n").get<double>();
            f.thickness = doc.at("h").get<double>();
        }
        if (doc.contains("homogenization")) {
            const auto h = doc.at("homogenization").get<std::string>();
            if (h == "MoriTanaka") f.homogenization = Homogenization::MoriTanaka;
            else if (h == "RuleOfMixtures") f.homogenization = Homogenization::RuleOfMixtures;
            else fail(ErrorKind::Config, "unknown homogenization '" + h + "'");
        }
        if (doc.contains("shear_correction")) {
            const auto& s = doc.at("shear_correction");
            if (s.is_number()) {
                f.shear_correction = {ShearCorrection::Mode::Constant, s.get<double>()};
            } else if (s.is_string() && s.get<std::string>() == "EnergyEquivalence") {
                f.shear_correction.mode = ShearCorrection::Mode::EnergyEquivalence;
            } else {
                fail(ErrorKind::Config, "shear_correction must be a number or \"EnergyEquivalence\"");
            }
        }
        return f;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Config, std::string("material definition: ") + e.what());
    }
}

nlohmann::json fgm_to_json(const FgmDefinition& f) {
    nlohmann::json j;
    j["ceramic"] = phase_to_json(f.ceramic);
    j["metal"] = phase_to_json(f.metal);
    j["n"] = f.gradient_index;
    j["h"] = f.thickness;
    j["homogenization"] = f.homogenization == Homogenization::MoriTanaka ? "MoriTanaka" : "RuleOfMixtures";
    if (f.shear_correction.mode == ShearCorrection::Mode::Constant) j["shear_correction"] = f.shear_correction.value;
    else j["shear_correction"] = "EnergyEquivalence";
    return j;
}

}  // namespace plates
