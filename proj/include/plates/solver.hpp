#pragma once

#include "plates/eigensolver.hpp"
#include "plates/element.hpp"
#include "plates/material.hpp"
#include "plates/mesh.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace plates {

/// Global dof of a node: kNodeDofs * node + dof.
inline int global_dof(int node, int dof) { return kNodeDofs * node + dof; }

enum class EdgeSupport { Free, Simple, Clamped };

/// In-plane component held by a simply supported edge.
enum class InPlaneRestraint {
    Normal,      // u on x0/xa, v on y0/yb
    Tangential,  // v on x0/xa, u on y0/yb
};

/// Support per tagged edge. Simple support on x0/xa fixes u, w, theta_y (u', w, theta_y' on
/// skew edges); on y0/yb it fixes v, w, theta_x. With Tangential restraint u and v swap roles.
/// Clamped fixes all five dofs.
struct Supports {
    InPlaneRestraint in_plane = InPlaneRestraint::Normal;
    EdgeSupport x0 = EdgeSupport::Simple;
    EdgeSupport xa = EdgeSupport::Simple;
    EdgeSupport y0 = EdgeSupport::Simple;
    EdgeSupport yb = EdgeSupport::Simple;
    EdgeSupport hole = EdgeSupport::Free;

    /// Four letters from {S, C, F} in the order x0, y0, xa, yb, e.g. "SSSS", "CCCC", "SCSC".
    static Supports from_code(const std::string& code);
    std::string code() const;
};

struct AssemblyOptions {
    Smoothing smoothing = Smoothing::CellBased;
    Stabilization stabilization;
    bool mass = true;
};

struct GlobalSystem {
    SparseMatrix K;
    SparseMatrix M;  // empty unless requested
    int dofs = 0;
};

GlobalSystem assemble(const Mesh& mesh, const SectionStiffness& sec, const AssemblyOptions& opts = {});

/// Geometric stiffness from one resultant triple per element (or a single uniform one).
SparseMatrix assemble_geometric(const Mesh& mesh, const std::vector<Eigen::Vector3d>& resultants, double thickness);
SparseMatrix assemble_geometric(const Mesh& mesh, const Eigen::Vector3d& resultants, double thickness);

/// Consistent load of a uniform transverse pressure: p A_e / 3 on each element's w dofs.
Eigen::VectorXd pressure_load(const Mesh& mesh, double pressure);

/// Nodes that carry the edge-local frame: supported x0/xa edges of a skew plate.
std::vector<int> skew_nodes(const Mesh& mesh, const Supports& supports);

/// The 5x5 nodal rotation with delta = L_g delta'.
Eigen::Matrix<double, kNodeDofs, kNodeDofs> skew_block(double psi);

/// Block-diagonal T with L_g on `nodes` and identity elsewhere (identity matrix when psi = 0).
SparseMatrix skew_transformation(const Mesh& mesh, const std::vector<int>& nodes);

/// Constrained dofs in the (possibly transformed) frame, sorted and unique.
std::vector<int> constrained_dofs(const Mesh& mesh, const Supports& supports);

/// Row/column elimination map.
struct Reduction {
    std::vector<int> free;          // reduced -> full
    std::vector<int> full_to_free;  // -1 when constrained
    int full_size = 0;

    Reduction() = default;
    Reduction(int full_size, const std::vector<int>& constrained);
    int size() const { return static_cast<int>(free.size()); }
    SparseMatrix reduce(const SparseMatrix& a) const;
    Eigen::VectorXd reduce(const Eigen::VectorXd& v) const;
    Eigen::VectorXd expand(const Eigen::VectorXd& v) const;
};

enum class PrestressMode {
    Uniform,        // section resultants applied everywhere
    MembraneSolve,  // in-plane static solve, element resultants
};

/// In-plane resultants of a heated plate: -N_th per element, either uniform or from a
/// membrane solve with the case's in-plane edge restraints.
std::vector<Eigen::Vector3d> thermal_prestress(const Mesh& mesh, const SectionStiffness& sec,
                                               const Supports& supports, PrestressMode mode);

enum class LoadPattern { Uniaxial, Biaxial };

/// Unit compressive resultants of a mechanical pattern. The membrane mode loads the x edges
/// (and y edges for biaxial) with unit traction on a minimally restrained plate.
std::vector<Eigen::Vector3d> mechanical_prestress(const Mesh& mesh, const SectionStiffness& sec,
                                                  LoadPattern pattern, PrestressMode mode);

struct AnalysisCase {
    enum class Kind { Static, Modal, BucklingMechanical, BucklingThermal };
    Kind kind = Kind::Static;
    Supports supports;
    double pressure = 1.0;  // Static
    int modes = 1;          // Modal / buckling
    LoadPattern pattern = LoadPattern::Uniaxial;
    ThermalState thermal;                  // environment for Static/Modal/BucklingMechanical
    double metal_temperature_rise = 5.0;   // BucklingThermal: T_m - T_0
    ProfileShape profile = ProfileShape::Series;  // BucklingThermal
    PrestressMode prestress = PrestressMode::Uniform;
    AssemblyOptions assembly;
    EigenOptions eigen;
};

std::string to_string(AnalysisCase::Kind kind);

struct AnalysisResult {
    AnalysisCase::Kind kind = AnalysisCase::Kind::Static;
    Eigen::VectorXd displacement;  // Static, global frame, full dofs
    double center_deflection = 0.0;
    Eigen::VectorXd eigenvalues;   // omega^2 (Modal) or load multipliers (buckling), ascending
    Eigen::MatrixXd modes;         // global frame, full dofs
    bool negative_eigenvalue = false;  // Modal: pre-buckled by the thermal environment
    bool buckled = true;               // buckling: a positive multiplier exists
    int free_dofs = 0;
    std::string note;

    double critical() const;          // smallest multiplier
    double first_frequency() const;   // sqrt(omega^2), NaN when negative
};

AnalysisResult run_case(const Mesh& mesh, const FgmDefinition& fgm, const AnalysisCase& c);

/// Phase data used by the normalized scalars; E is the temperature law's P0.
struct NormalizationBasis {
    double youngs = 0.0;
    double poisson = 0.0;
    double density = 0.0;

    static NormalizationBasis of(const PhaseProperties& phase);
    double rigidity(double h) const;  // E h^3 / (12 (1 - nu^2))
};

double normalized_deflection(double w, double pressure, double a, double h, const NormalizationBasis& basis);
double normalized_frequency(double omega, double a, double h, const NormalizationBasis& basis);
/// Omega = [omega^2 rho h a^4 / (D (1 - nu^2))]^(1/4).
double frequency_parameter(double omega, double a, double h, const NormalizationBasis& basis);
double buckling_parameter(double resultant, double b, double h, const NormalizationBasis& basis);

}  // namespace plates
