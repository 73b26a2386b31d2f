#include "plates/solver.hpp"

#include "plates/errors.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>

namespace plates {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;
using Ldlt = Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>;

EdgeSupport support_from_letter(char c) {
    switch (c) {
    case 'S': case 's': return EdgeSupport::Simple;
    case 'C': case 'c': return EdgeSupport::Clamped;
    case 'F': case 'f': return EdgeSupport::Free;
    default: fail(ErrorKind::Config, std::string("unknown edge support letter '") + c + "' (use S, C or F)");
    }
}

char letter(EdgeSupport s) {
    switch (s) {
    case EdgeSupport::Simple: return 'S';
    case EdgeSupport::Clamped: return 'C';
    case EdgeSupport::Free: return 'F';
    }
    return '?';
}

void scatter(Triplets& t, const std::array<int, 3>& tri, const Matrix15& ke) {
    for (int i = 0; i < 3; ++i)
        for (int a = 0; a < kNodeDofs; ++a)
            for (int j = 0; j < 3; ++j)
                for (int b = 0; b < kNodeDofs; ++b) {
                    const double v = ke(kNodeDofs * i + a, kNodeDofs * j + b);
                    if (v != 0.0) t.emplace_back(global_dof(tri[i], a), global_dof(tri[j], b), v);
                }
}

SparseMatrix from_triplets(int n, const Triplets& t) {
    SparseMatrix m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

Vector15 gather(const Eigen::VectorXd& full, const std::array<int, 3>& tri) {
    Vector15 d;
    for (int i = 0; i < 3; ++i)
        for (int a = 0; a < kNodeDofs; ++a) d(kNodeDofs * i + a) = full(global_dof(tri[i], a));
    return d;
}

bool has_set(const Mesh& mesh, const std::string& name) {
    auto it = mesh.boundary_sets.find(name);
    return it != mesh.boundary_sets.end() && !it->second.empty();
}

void factor_or_fail(Ldlt& f, const SparseMatrix& k, const char* what) {
    f.compute(k);
    if (f.info() != Eigen::Success) fail(ErrorKind::Numeric, std::string(what) + ": factorization failed");
    const Eigen::VectorXd d = f.vectorD();
    if (d.size() == 0) fail(ErrorKind::Numeric, std::string(what) + ": no free dofs");
    if (!(d.minCoeff() > 1e-13 * d.cwiseAbs().maxCoeff()))
        fail(ErrorKind::Numeric, std::string(what) + ": stiffness is singular or indefinite (insufficient supports?)");
}

// Solves the in-plane problem K_m d = f on u, v only and returns element resultants A eps_p - n_th.
std::vector<Eigen::Vector3d> membrane_resultants(const Mesh& mesh, const SectionStiffness& sec,
                                                 const Eigen::VectorXd& load, std::vector<int> constrained,
                                                 const std::vector<int>& frame_nodes, const Eigen::Vector3d& n_th) {
    const int n = kNodeDofs * static_cast<int>(mesh.node_count());
    Triplets t;
    std::vector<Operator3> bp(mesh.element_count());
    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
        const ElementMatrices ops = csdsg3_operators(mesh.element_coords(e));
        bp[e] = ops.Bp_bar;
        const Matrix15 ke = ops.Bp_bar.transpose() * sec.A * ops.Bp_bar * ops.area;
        scatter(t, mesh.triangles[e], ke);
    }
    SparseMatrix k = from_triplets(n, t);
    for (std::size_t node = 0; node < mesh.node_count(); ++node)
        for (int dof : {W, ThetaX, ThetaY}) constrained.push_back(global_dof(static_cast<int>(node), dof));
    std::sort(constrained.begin(), constrained.end());
    constrained.erase(std::unique(constrained.begin(), constrained.end()), constrained.end());

    const SparseMatrix tr = skew_transformation(mesh, frame_nodes);
    const SparseMatrix kt = SparseMatrix(tr.transpose() * k * tr);
    const Eigen::VectorXd ft = tr.transpose() * load;
    const Reduction red(n, constrained);
    Ldlt f;
    factor_or_fail(f, red.reduce(kt), "membrane pre-solve");
    const Eigen::VectorXd d = tr * red.expand(f.solve(red.reduce(ft)));

    std::vector<Eigen::Vector3d> out(mesh.element_count());
    for (std::size_t e = 0; e < mesh.element_count(); ++e)
        out[e] = sec.A * (bp[e] * gather(d, mesh.triangles[e])) - n_th;
    return out;
}

double orientation_sign(int i, int j, const std::array<int, 3>& tri) {
    // counterclockwise triangle: edge (i -> j) in cyclic order keeps the interior on the left
    for (int k = 0; k < 3; ++k)
        if (tri[k] == i && tri[(k + 1) % 3] == j) return 1.0;
    return -1.0;
}

SectionStiffness with_thermal_resultant(SectionStiffness sec, const Eigen::Vector3d& n_th) {
    sec.Nth = n_th;
    return sec;
}

}  // namespace

Supports Supports::from_code(const std::string& code) {
    if (code.size() != 4) fail(ErrorKind::Config, "support code must have four letters (x0, y0, xa, yb), got '" + code + "'");
    Supports s;
    s.x0 = support_from_letter(code[0]);
    s.y0 = support_from_letter(code[1]);
    s.xa = support_from_letter(code[2]);
    s.yb = support_from_letter(code[3]);
    return s;
}

std::string Supports::code() const { return {letter(x0), letter(y0), letter(xa), letter(yb)}; }

GlobalSystem assemble(const Mesh& mesh, const SectionStiffness& sec, const AssemblyOptions& opts) {
    GlobalSystem sys;
    sys.dofs = kNodeDofs * static_cast<int>(mesh.node_count());
    Triplets tk, tm;
    tk.reserve(mesh.element_count() * 225);
    if (opts.mass) tm.reserve(mesh.element_count() * 45);
    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
        const Coords3 x = mesh.element_coords(e);
        const ElementMatrices ops = strain_operators(x, opts.smoothing);
        scatter(tk, mesh.triangles[e], element_stiffness(ops, sec, opts.stabilization));
        if (opts.mass) scatter(tm, mesh.triangles[e], element_mass(x, sec));
    }
    sys.K = from_triplets(sys.dofs, tk);
    if (opts.mass) sys.M = from_triplets(sys.dofs, tm);
    return sys;
}

SparseMatrix assemble_geometric(const Mesh& mesh, const std::vector<Eigen::Vector3d>& resultants, double thickness) {
    if (resultants.size() != mesh.element_count())
        fail(ErrorKind::Internal, "one resultant triple per element expected");
    Triplets t;
    t.reserve(mesh.element_count() * 27);
    for (std::size_t e = 0; e < mesh.element_count(); ++e)
        scatter(t, mesh.triangles[e], element_geometric(mesh.element_coords(e), resultants[e], thickness));
    return from_triplets(kNodeDofs * static_cast<int>(mesh.node_count()), t);
}

SparseMatrix assemble_geometric(const Mesh& mesh, const Eigen::Vector3d& resultants, double thickness) {
    return assemble_geometric(mesh, std::vector<Eigen::Vector3d>(mesh.element_count(), resultants), thickness);
}

Eigen::VectorXd pressure_load(const Mesh& mesh, double pressure) {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(kNodeDofs * static_cast<Eigen::Index>(mesh.node_count()));
    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
        const double share = pressure * mesh.signed_area(e) / 3.0;
        for (int node : mesh.triangles[e]) f(global_dof(node, W)) += share;
    }
    return f;
}

std::vector<int> skew_nodes(const Mesh& mesh, const Supports& supports) {
    std::vector<int> out;
    if (std::abs(mesh.geometry.skew) < 1e-15) return out;
    if (supports.x0 != EdgeSupport::Free && has_set(mesh, "x0")) {
        const auto& s = mesh.set("x0");
        out.insert(out.end(), s.begin(), s.end());
    }
    if (supports.xa != EdgeSupport::Free && has_set(mesh, "xa")) {
        const auto& s = mesh.set("xa");
        out.insert(out.end(), s.begin(), s.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Eigen::Matrix<double, kNodeDofs, kNodeDofs> skew_block(double psi) {
    const double c = std::cos(psi);
    const double s = std::sin(psi);
    Eigen::Matrix<double, kNodeDofs, kNodeDofs> l = Eigen::Matrix<double, kNodeDofs, kNodeDofs>::Zero();
    l(U, U) = c;   l(U, V) = s;
    l(V, U) = -s;  l(V, V) = c;
    l(W, W) = 1.0;
    l(ThetaX, ThetaX) = c;   l(ThetaX, ThetaY) = s;
    l(ThetaY, ThetaX) = -s;  l(ThetaY, ThetaY) = c;
    return l;
}

SparseMatrix skew_transformation(const Mesh& mesh, const std::vector<int>& nodes) {
    const int n = kNodeDofs * static_cast<int>(mesh.node_count());
    std::vector<char> rotated(mesh.node_count(), 0);
    for (int node : nodes) rotated.at(static_cast<std::size_t>(node)) = 1;
    const auto l = skew_block(mesh.geometry.skew);
    Triplets t;
    t.reserve(static_cast<std::size_t>(n) + 2 * nodes.size() * kNodeDofs);
    for (std::size_t node = 0; node < mesh.node_count(); ++node) {
        const int base = global_dof(static_cast<int>(node), 0);
        if (!rotated[node]) {
            for (int a = 0; a < kNodeDofs; ++a) t.emplace_back(base + a, base + a, 1.0);
            continue;
        }
        for (int a = 0; a < kNodeDofs; ++a)
            for (int b = 0; b < kNodeDofs; ++b)
                if (l(a, b) != 0.0) t.emplace_back(base + a, base + b, l(a, b));
    }
    return from_triplets(n, t);
}

std::vector<int> constrained_dofs(const Mesh& mesh, const Supports& supports) {
    std::vector<int> out;
    auto add = [&](const char* name, EdgeSupport s, std::initializer_list<int> simple) {
        if (s == EdgeSupport::Free || !has_set(mesh, name)) return;
        for (int node : mesh.set(name)) {
            if (s == EdgeSupport::Clamped) {
                for (int a = 0; a < kNodeDofs; ++a) out.push_back(global_dof(node, a));
            } else {
                for (int a : simple) out.push_back(global_dof(node, a));
            }
        }
    };
    // on rotated nodes the same indices address the edge-local u', theta_y'
    const bool normal = supports.in_plane == InPlaneRestraint::Normal;
    add("x0", supports.x0, {normal ? U : V, W, ThetaY});
    add("xa", supports.xa, {normal ? U : V, W, ThetaY});
    add("y0", supports.y0, {normal ? V : U, W, ThetaX});
    add("yb", supports.yb, {normal ? V : U, W, ThetaX});
    add("hole", supports.hole, {W});
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Reduction::Reduction(int n, const std::vector<int>& constrained) : full_to_free(static_cast<std::size_t>(n), 0), full_size(n) {
    for (int c : constrained) {
        if (c < 0 || c >= n) fail(ErrorKind::Internal, "constrained dof out of range");
        full_to_free[static_cast<std::size_t>(c)] = -1;
    }
    for (int i = 0; i < n; ++i) {
        if (full_to_free[static_cast<std::size_t>(i)] < 0) continue;
        full_to_free[static_cast<std::size_t>(i)] = static_cast<int>(free.size());
        free.push_back(i);
    }
}

SparseMatrix Reduction::reduce(const SparseMatrix& a) const {
    Triplets t;
    t.reserve(static_cast<std::size_t>(a.nonZeros()));
    for (int col = 0; col < a.outerSize(); ++col) {
        const int c = full_to_free[static_cast<std::size_t>(col)];
        if (c < 0) continue;
        for (SparseMatrix::InnerIterator it(a, col); it; ++it) {
            const int r = full_to_free[static_cast<std::size_t>(it.row())];
            if (r >= 0) t.emplace_back(r, c, it.value());
        }
    }
    SparseMatrix out(size(), size());
    out.setFromTriplets(t.begin(), t.end());
    return out;
}

Eigen::VectorXd Reduction::reduce(const Eigen::VectorXd& v) const {
    Eigen::VectorXd out(size());
    for (int i = 0; i < size(); ++i) out(i) = v(free[static_cast<std::size_t>(i)]);
    return out;
}

Eigen::VectorXd Reduction::expand(const Eigen::VectorXd& v) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(full_size);
    for (int i = 0; i < size(); ++i) out(free[static_cast<std::size_t>(i)]) = v(i);
    return out;
}

std::vector<Eigen::Vector3d> thermal_prestress(const Mesh& mesh, const SectionStiffness& sec,
                                               const Supports& supports, PrestressMode mode) {
    if (mode == PrestressMode::Uniform || sec.Nth.isZero(0.0))
        return std::vector<Eigen::Vector3d>(mesh.element_count(), -sec.Nth);

    const int n = kNodeDofs * static_cast<int>(mesh.node_count());
    Eigen::VectorXd load = Eigen::VectorXd::Zero(n);
    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
        const ElementMatrices ops = csdsg3_operators(mesh.element_coords(e));
        const Vector15 fe = ops.Bp_bar.transpose() * sec.Nth * ops.area;
        for (int i = 0; i < 3; ++i)
            for (int a = 0; a < kNodeDofs; ++a) load(global_dof(mesh.triangles[e][i], a)) += fe(kNodeDofs * i + a);
    }
    // in-plane restraint follows the support: one component on simple edges, both on clamped
    std::vector<int> constrained;
    const bool normal = supports.in_plane == InPlaneRestraint::Normal;
    auto restrain = [&](const char* name, EdgeSupport s, int dof) {
        if (s == EdgeSupport::Free || !has_set(mesh, name)) return;
        for (int node : mesh.set(name)) {
            constrained.push_back(global_dof(node, dof));
            if (s == EdgeSupport::Clamped) constrained.push_back(global_dof(node, dof == U ? V : U));
        }
    };
    restrain("x0", supports.x0, normal ? U : V);
    restrain("xa", supports.xa, normal ? U : V);
    restrain("y0", supports.y0, normal ? V : U);
    restrain("yb", supports.yb, normal ? V : U);
    restrain("hole", supports.hole == EdgeSupport::Clamped ? EdgeSupport::Clamped : EdgeSupport::Free, U);
    return membrane_resultants(mesh, sec, load, constrained, skew_nodes(mesh, supports), sec.Nth);
}

std::vector<Eigen::Vector3d> mechanical_prestress(const Mesh& mesh, const SectionStiffness& sec,
                                                  LoadPattern pattern, PrestressMode mode) {
    const Eigen::Vector3d unit = pattern == LoadPattern::Uniaxial ? Eigen::Vector3d(-1.0, 0.0, 0.0)
                                                                  : Eigen::Vector3d(-1.0, -1.0, 0.0);
    if (mode == PrestressMode::Uniform) return std::vector<Eigen::Vector3d>(mesh.element_count(), unit);

    // tractions sigma . n on the outer boundary edges
    Eigen::Matrix2d sigma;
    sigma << unit(0), unit(2), unit(2), unit(1);
    std::map<std::pair<int, int>, int> edge_use;
    std::map<std::pair<int, int>, std::array<int, 3>> edge_owner;
    for (const auto& tri : mesh.triangles)
        for (int k = 0; k < 3; ++k) {
            auto key = std::minmax(tri[k], tri[(k + 1) % 3]);
            ++edge_use[key];
            edge_owner[key] = tri;
        }
    std::set<int> outer;
    for (const char* name : {"x0", "xa", "y0", "yb"})
        if (has_set(mesh, name)) outer.insert(mesh.set(name).begin(), mesh.set(name).end());

    const int n = kNodeDofs * static_cast<int>(mesh.node_count());
    Eigen::VectorXd load = Eigen::VectorXd::Zero(n);
    for (const auto& [key, uses] : edge_use) {
        if (uses != 1 || !outer.count(key.first) || !outer.count(key.second)) continue;
        const auto& tri = edge_owner[key];
        const double sgn = orientation_sign(key.first, key.second, tri);
        const Eigen::Vector2d t = sgn * (mesh.nodes[key.second] - mesh.nodes[key.first]);
        const Eigen::Vector2d normal(t.y(), -t.x());  // outward, scaled by the edge length
        const Eigen::Vector2d force = 0.5 * sigma * normal;
        for (int node : {key.first, key.second}) {
            load(global_dof(node, U)) += force.x();
            load(global_dof(node, V)) += force.y();
        }
    }
    // minimal restraint against in-plane rigid motion
    auto corner = [&](const char* sx, const char* sy) {
        const auto& a = mesh.set(sx);
        const auto& b = mesh.set(sy);
        for (int i : a)
            if (std::find(b.begin(), b.end(), i) != b.end()) return i;
        fail(ErrorKind::Mesh, std::string("no corner node shared by ") + sx + " and " + sy);
    };
    const int c0 = corner("x0", "y0");
    const int c1 = corner("xa", "y0");
    const std::vector<int> constrained = {global_dof(c0, U), global_dof(c0, V), global_dof(c1, V)};
    return membrane_resultants(mesh, with_thermal_resultant(sec, Eigen::Vector3d::Zero()), load, constrained, {},
                               Eigen::Vector3d::Zero());
}

std::string to_string(AnalysisCase::Kind kind) {
    switch (kind) {
    case AnalysisCase::Kind::Static: return "static";
    case AnalysisCase::Kind::Modal: return "modal";
    case AnalysisCase::Kind::BucklingMechanical: return "buckling_mechanical";
    case AnalysisCase::Kind::BucklingThermal: return "buckling_thermal";
    }
    return "?";
}

double AnalysisResult::critical() const {
    if (eigenvalues.size() == 0) return std::numeric_limits<double>::quiet_NaN();
    return eigenvalues(0);
}

double AnalysisResult::first_frequency() const {
    if (eigenvalues.size() == 0 || eigenvalues(0) < 0.0) return std::numeric_limits<double>::quiet_NaN();
    return std::sqrt(eigenvalues(0));
}

AnalysisResult run_case(const Mesh& mesh, const FgmDefinition& fgm, const AnalysisCase& c) {
    using Kind = AnalysisCase::Kind;
    fgm.validate();
    if (c.modes < 1) fail(ErrorKind::Config, "number of modes must be >= 1");
    if (!std::isfinite(c.pressure)) fail(ErrorKind::Config, "pressure must be finite");

    AnalysisResult res;
    res.kind = c.kind;
    const double h = fgm.thickness;

    ThermalState environment = c.thermal;
    if (c.kind == Kind::BucklingThermal)
        environment = ThermalState::uniform(c.thermal.reference_temperature + c.metal_temperature_rise,
                                            c.thermal.reference_temperature);
    const SectionStiffness sec = section_stiffness(fgm, environment);

    AssemblyOptions assembly = c.assembly;
    assembly.mass = c.kind == Kind::Modal;
    const GlobalSystem sys = assemble(mesh, sec, assembly);

    const std::vector<int> frame = skew_nodes(mesh, c.supports);
    const SparseMatrix tr = skew_transformation(mesh, frame);
    auto to_local = [&](const SparseMatrix& a) { return SparseMatrix(tr.transpose() * a * tr); };
    const Reduction red(sys.dofs, constrained_dofs(mesh, c.supports));
    res.free_dofs = red.size();
    auto global_modes = [&](const Eigen::MatrixXd& v) {
        Eigen::MatrixXd out(sys.dofs, v.cols());
        for (Eigen::Index j = 0; j < v.cols(); ++j) out.col(j) = tr * red.expand(v.col(j));
        return out;
    };

    // stiffness including the environment's thermal prestress
    SparseMatrix k = sys.K;
    if (!sec.Nth.isZero(0.0)) k += assemble_geometric(mesh, thermal_prestress(mesh, sec, c.supports, c.prestress), h);
    const SparseMatrix kr = red.reduce(to_local(k));

    switch (c.kind) {
    case Kind::Static: {
        const Eigen::VectorXd f = red.reduce(Eigen::VectorXd(tr.transpose() * pressure_load(mesh, c.pressure)));
        Ldlt factor;
        factor_or_fail(factor, kr, "static solve");
        res.displacement = tr * red.expand(factor.solve(f));
        res.center_deflection = res.displacement(global_dof(center_node(mesh), W));
        break;
    }
    case Kind::Modal: {
        const SparseMatrix mr = red.reduce(to_local(sys.M));
        const EigenPairs ep = smallest_eigenpairs(kr, mr, c.modes, c.eigen);
        res.eigenvalues = ep.values;
        res.modes = global_modes(ep.vectors);
        const double scale = kr.diagonal().sum() / mr.diagonal().sum();
        res.negative_eigenvalue = ep.values.size() > 0 && ep.values(0) < -1e-10 * scale;
        if (res.negative_eigenvalue) res.note = "negative omega^2: thermally pre-buckled";
        break;
    }
    case Kind::BucklingMechanical:
    case Kind::BucklingThermal: {
        std::vector<Eigen::Vector3d> pattern;
        if (c.kind == Kind::BucklingMechanical) {
            pattern = mechanical_prestress(mesh, sec, c.pattern, c.prestress);
        } else {
            // resultants per unit T_c - T_m on top of the uniform metal-side rise
            const double tm = environment.temperature;
            const ThermalState unit = ThermalState::gradient(tm + 1.0, tm, tm, c.profile);
            const SectionStiffness per_degree = with_thermal_resultant(sec, section_stiffness(fgm, unit).Nth);
            pattern = thermal_prestress(mesh, per_degree, c.supports, c.prestress);
        }
        const SparseMatrix g = red.reduce(to_local(SparseMatrix(-assemble_geometric(mesh, pattern, h))));
        const EigenPairs ep = smallest_positive_buckling(kr, g, c.modes, c.eigen);
        res.eigenvalues = ep.values;
        res.modes = global_modes(ep.vectors);
        res.buckled = ep.values.size() > 0;
        if (!res.buckled) res.note = "no buckling under this pattern";
        break;
    }
    }
    return res;
}

NormalizationBasis NormalizationBasis::of(const PhaseProperties& phase) {
    return {phase.youngs_modulus.p0, phase.poisson, phase.density};
}

double NormalizationBasis::rigidity(double h) const {
    return youngs * h * h * h / (12.0 * (1.0 - poisson * poisson));
}

namespace {
void check_geometry(double a, double h) {
    if (!(a > 0.0) || !(h > 0.0)) fail(ErrorKind::Config, "normalization needs positive length and thickness");
}
}  // namespace

double normalized_deflection(double w, double pressure, double a, double h, const NormalizationBasis& basis) {
    check_geometry(a, h);
    if (pressure == 0.0) fail(ErrorKind::Config, "normalized deflection needs a nonzero pressure");
    return 100.0 * w * basis.rigidity(h) / (pressure * std::pow(a, 4));
}

double normalized_frequency(double omega, double a, double h, const NormalizationBasis& basis) {
    check_geometry(a, h);
    return omega * a * a * std::sqrt(basis.density * h / basis.rigidity(h));
}

double frequency_parameter(double omega, double a, double h, const NormalizationBasis& basis) {
    check_geometry(a, h);
    const double v = omega * omega * basis.density * h * std::pow(a, 4) /
                     (basis.rigidity(h) * (1.0 - basis.poisson * basis.poisson));
    return std::pow(v, 0.25);
}

double buckling_parameter(double resultant, double b, double h, const NormalizationBasis& basis) {
    check_geometry(b, h);
    return resultant * b * b / (std::numbers::pi * std::numbers::pi * basis.rigidity(h));
}

}  // namespace plates
