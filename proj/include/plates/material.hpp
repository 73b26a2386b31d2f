#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace plates {

/// Cubic temperature law P(T) = P0 (P-1/T + 1 + P1 T + P2 T^2 + P3 T^3).
struct TemperatureCoefficients {
    double p0 = 0.0;
    double pm1 = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;
    double p3 = 0.0;

    static TemperatureCoefficients constant(double value) { return {value, 0.0, 0.0, 0.0, 0.0}; }
};

double property_at_temperature(const TemperatureCoefficients& coeffs, double temperature);

/// One constituent phase. Only E and alpha depend on temperature.
struct PhaseProperties {
    TemperatureCoefficients youngs_modulus;     // [Pa]
    TemperatureCoefficients thermal_expansion;  // [1/K]
    double density = 0.0;                       // [kg/m^3]
    double conductivity = 0.0;                  // [W/(m K)]
    double poisson = 0.0;

    void validate(std::string_view label) const;
};

enum class Homogenization { MoriTanaka, RuleOfMixtures };

struct ShearCorrection {
    enum class Mode { Constant, EnergyEquivalence };
    Mode mode = Mode::Constant;
    double value = 5.0 / 6.0;  // used in Constant mode
};

/// Ceramic on top (z = h/2), metal at the bottom (z = -h/2).
struct FgmDefinition {
    PhaseProperties ceramic;
    PhaseProperties metal;
    double gradient_index = 0.0;
    double thickness = 0.0;
    Homogenization homogenization = Homogenization::MoriTanaka;
    ShearCorrection shear_correction;

    void validate() const;
};

enum class ProfileShape {
    Series,  // six-term polynomial series of the steady conduction solution
    Linear,  // series truncated to its leading term
};

struct ThermalState {
    enum class Mode { Uniform, Gradient };
    Mode mode = Mode::Uniform;
    double temperature = 300.0;          // Uniform mode
    double ceramic_temperature = 300.0;  // Gradient mode, z = h/2
    double metal_temperature = 300.0;    // Gradient mode, z = -h/2
    double reference_temperature = 300.0;
    ProfileShape profile = ProfileShape::Series;

    static ThermalState uniform(double t, double reference = 300.0);
    static ThermalState gradient(double t_ceramic, double t_metal, double reference = 300.0,
                                 ProfileShape profile = ProfileShape::Series);
    void validate() const;
};

struct BulkShear {
    double bulk = 0.0;
    double shear = 0.0;
};

struct IsotropicModuli {
    double youngs = 0.0;
    double poisson = 0.0;
};

BulkShear bulk_shear_from(double youngs, double poisson);

double volume_fraction(double z, const FgmDefinition& fgm);

/// Mori-Tanaka estimate of the effective bulk and shear moduli.
BulkShear mori_tanaka(const BulkShear& ceramic, const BulkShear& metal, double ceramic_fraction);

IsotropicModuli effective_isotropic(const BulkShear& moduli);

struct TransportProperties {
    double conductivity = 0.0;
    double expansion = 0.0;
    double density = 0.0;
};

TransportProperties effective_transport(const FgmDefinition& fgm, double ceramic_fraction,
                                        double temperature);

/// Local thermo-elastic state at a through-thickness point.
struct PointProperties {
    double temperature = 0.0;
    double youngs = 0.0;
    double poisson = 0.0;
    double expansion = 0.0;
    double density = 0.0;
    double conductivity = 0.0;
};

PointProperties properties_at(const FgmDefinition& fgm, const ThermalState& thermal, double z);

/// Steady through-thickness temperature T(z) [K].
double temperature_profile(const ThermalState& thermal, const FgmDefinition& fgm, double z);

struct ShearFactors {
    double xz = 5.0 / 6.0;
    double yz = 5.0 / 6.0;
};

ShearFactors shear_correction_factors(const FgmDefinition& fgm, const ThermalState& thermal);

/// Through-thickness integrated plate section.
struct SectionStiffness {
    Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d B = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d D = Eigen::Matrix3d::Zero();
    Eigen::Matrix2d Es = Eigen::Matrix2d::Zero();
    Eigen::Vector3d Nth = Eigen::Vector3d::Zero();
    Eigen::Vector3d Mth = Eigen::Vector3d::Zero();
    double inertia_p = 0.0;  // int rho dz
    double inertia_i = 0.0;  // int z^2 rho dz
    ShearFactors shear_factors;
    double thickness = 0.0;
};

SectionStiffness section_stiffness(const FgmDefinition& fgm, const ThermalState& thermal);

/// Gauss-Legendre nodes/weights on [-1, 1].
struct GaussRule {
    std::vector<double> points;
    std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);

/// Named material systems: "Al/ZrO2", "Al/ZrO2-1", "Si3N4/SUS304", "Al/Al2O3".
FgmDefinition material_preset(std::string_view name, double gradient_index, double thickness);
std::vector<std::string> material_preset_names();

FgmDefinition fgm_from_json(const nlohmann::json& doc);
nlohmann::json fgm_to_json(const FgmDefinition& fgm);

}  // namespace plates
