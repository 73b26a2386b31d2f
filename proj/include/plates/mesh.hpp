#pragma once

#include <Eigen/Dense>

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace plates {

struct PlateGeometry {
    double a = 1.0;
    double b = 1.0;
    double skew = 0.0;                   // psi [rad]
    std::optional<double> cutout_radius;  // central circular hole
};

/// Counterclockwise triangles over (x, y) nodes with tagged boundary node sets
/// "x0", "xa", "y0", "yb" (classified before skewing) and "hole".
struct Mesh {
    std::vector<Eigen::Vector2d> nodes;
    std::vector<std::array<int, 3>> triangles;
    std::map<std::string, std::vector<int>> boundary_sets;
    PlateGeometry geometry;

    std::size_t node_count() const { return nodes.size(); }
    std::size_t element_count() const { return triangles.size(); }
    std::array<Eigen::Vector2d, 3> element_coords(std::size_t e) const;
    double signed_area(std::size_t e) const;
    double total_area() const;
    const std::vector<int>& set(const std::string& name) const;

    /// Checks orientation, index range and duplicate nodes; throws plates::Error.
    void validate() const;
};

enum class DiagonalRule {
    Alternating,  // union-jack pattern
    Uniform,      // every cell split along (i,j)-(i+1,j+1)
};

struct RectanglePlan {
    int nx = 4;
    int ny = 4;
    DiagonalRule diagonal = DiagonalRule::Alternating;
};

struct PerforatedPlan {
    double radius = 0.1;
    int radial = 8;            // element layers between hole and outer square
    int circumferential = 64;  // divisions around the hole, multiple of 8
};

struct MeshSpec {
    enum class Kind { Rectangle, Perforated };
    Kind kind = Kind::Rectangle;
    RectanglePlan rectangle;
    PerforatedPlan perforated;
    double a = 1.0;
    double b = 1.0;
    double h = 0.1;
    double skew = 0.0;
};

Mesh structured_rectangle(const MeshSpec& spec);

/// (x, y) -> (x + y sin(psi), y cos(psi)); boundary sets keep their indices.
Mesh skew_map(const Mesh& mesh, double psi);

/// Eight transfinite blocks between the hole and the square boundary.
/// Node count is circumferential * (radial + 1); triangle count is 2 * circumferential * radial.
Mesh perforated_square(const MeshSpec& spec);

/// Dispatches on spec.kind and applies the skew.
Mesh generate_mesh(const MeshSpec& spec);

/// Classifies nodes against the parametric (un-skewed) frame of `geometry`.
std::map<std::string, std::vector<int>> boundary_sets(const std::vector<Eigen::Vector2d>& parametric_nodes,
                                                      const PlateGeometry& geometry);

/// Index of the node closest to the plate centre.
int center_node(const Mesh& mesh);

std::string write_mesh(const Mesh& mesh);
Mesh read_mesh(const std::string& text);

}  // namespace plates
