#include "oracles.hpp"

#include "plates/errors.hpp"
#include "plates/mesh.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace plates;

namespace {

MeshSpec rect(int nx, int ny, double a = 1.0, double b = 1.0, DiagonalRule d = DiagonalRule::Alternating) {
    MeshSpec s;
    s.a = a;
    s.b = b;
    s.rectangle = {nx, ny, d};
    return s;
}

MeshSpec holed(double r, int radial, int circ, double a = 1.0) {
    MeshSpec s;
    s.kind = MeshSpec::Kind::Perforated;
    s.a = s.b = a;
    s.perforated = {r, radial, circ};
    return s;
}

bool contains_point(const Mesh& m, const Eigen::Vector2d& p, double tol) {
    return std::any_of(m.nodes.begin(), m.nodes.end(), [&](const auto& q) { return (q - p).norm() <= tol; });
}

}  // namespace

TEST_CASE("structured rectangle counts and area") {
    const Mesh one = generate_mesh(rect(1, 1));
    CHECK(one.node_count() == 4);
    CHECK(one.element_count() == 2);
    CHECK(one.total_area() == doctest::Approx(1.0).epsilon(1e-15));

    const Mesh four = generate_mesh(rect(4, 4));
    CHECK(four.node_count() == 25);
    CHECK(four.element_count() == 32);
    for (const char* name : {"x0", "xa", "y0", "yb"}) CHECK(four.set(name).size() == 5);

    const Mesh forty = generate_mesh(rect(40, 40));
    CHECK(std::abs(forty.total_area() - 1.0) < 1e-12);
}

TEST_CASE("corner nodes belong to two edge sets") {
    const Mesh m = generate_mesh(rect(3, 5, 2.0, 1.0));
    int corners = 0;
    for (int i = 0; i < static_cast<int>(m.node_count()); ++i) {
        int count = 0;
        for (const char* name : {"x0", "xa", "y0", "yb"}) {
            const auto& s = m.set(name);
            count += std::find(s.begin(), s.end(), i) != s.end();
        }
        CHECK(count <= 2);
        corners += count == 2;
    }
    CHECK(corners == 4);
}

TEST_CASE("skew map") {
    const double psi = std::numbers::pi / 6;
    const Mesh base = generate_mesh(rect(2, 2));
    const Mesh same = skew_map(base, 0.0);
    for (std::size_t i = 0; i < base.node_count(); ++i) CHECK((same.nodes[i] - base.nodes[i]).norm() == 0.0);

    MeshSpec s = rect(2, 2);
    s.skew = psi;
    const Mesh m = generate_mesh(s);
    CHECK(contains_point(m, Eigen::Vector2d(0.5, std::sqrt(3.0) / 2), 1e-14));
    for (std::size_t e = 0; e < m.element_count(); ++e)
        CHECK(m.signed_area(e) == doctest::Approx(base.signed_area(e) * std::cos(psi)).epsilon(1e-13));
    for (const char* name : {"x0", "xa", "y0", "yb"}) CHECK(m.set(name) == base.set(name));
    CHECK_THROWS_AS(skew_map(base, std::numbers::pi / 2), Error);
}

TEST_CASE("perforated square") {
    const double r = 0.2;
    const Mesh m = generate_mesh(holed(r, 8, 64));
    CHECK(m.node_count() == 64 * 9);
    CHECK(m.element_count() == 2 * 64 * 8);
    CHECK(std::abs(m.total_area() - (1.0 - std::numbers::pi * r * r)) <= 0.005 * (1.0 - std::numbers::pi * r * r));
    CHECK(m.set("hole").size() == 64);
    for (int i : m.set("hole")) CHECK(std::abs((m.nodes[i] - Eigen::Vector2d(0.5, 0.5)).norm() - r) < 1e-12);
    for (std::size_t e = 0; e < m.element_count(); ++e) CHECK(m.signed_area(e) > 0.0);

    // invariant under a quarter turn about the centre
    for (const auto& p : m.nodes) {
        const Eigen::Vector2d q(0.5 - (p.y() - 0.5), 0.5 + (p.x() - 0.5));
        CHECK(contains_point(m, q, 1e-12));
    }
    CHECK_THROWS_AS(generate_mesh(holed(0.6, 4, 16)), Error);
    CHECK_THROWS_AS(generate_mesh(holed(0.2, 4, 12)), Error);
}

TEST_CASE("property: area partition and orientation of generated meshes") {
    oracle::Gen gen(5);
    for (int trial = 0; trial < 40; ++trial) {
        MeshSpec s;
        if (trial % 2 == 0) {
            s = rect(gen.integer(1, 12), gen.integer(1, 12), gen.uniform(0.2, 3.0), gen.uniform(0.2, 3.0),
                     trial % 4 ? DiagonalRule::Uniform : DiagonalRule::Alternating);
            s.skew = gen.uniform(-1.2, 1.2);
            const Mesh m = generate_mesh(s);
            CHECK(std::abs(m.total_area() - s.a * s.b * std::cos(s.skew)) <= 1e-12 * s.a * s.b);
            for (std::size_t e = 0; e < m.element_count(); ++e) CHECK(m.signed_area(e) > 0.0);
        } else {
            const double a = gen.uniform(0.5, 2.0);
            s = holed(gen.uniform(0.05, 0.4) * a, gen.integer(2, 8), 8 * gen.integer(3, 8), a);
            const Mesh m = generate_mesh(s);
            // the hole is an inscribed polygon, the outer square is exact
            const int nc = s.perforated.circumferential;
            const double r = s.perforated.radius;
            const double exact = a * a - 0.5 * nc * r * r * std::sin(2.0 * std::numbers::pi / nc);
            CHECK(std::abs(m.total_area() - exact) <= 1e-12 * exact);
            for (std::size_t e = 0; e < m.element_count(); ++e) CHECK(m.signed_area(e) > 0.0);
        }
    }
}

TEST_CASE("refinement nesting and skew commuting with refinement") {
    oracle::Gen gen(9);
    for (int trial = 0; trial < 10; ++trial) {
        const int nx = gen.integer(1, 6), ny = gen.integer(1, 6);
        const double a = gen.uniform(0.5, 2.0), b = gen.uniform(0.5, 2.0);
        const Mesh coarse = generate_mesh(rect(nx, ny, a, b));
        const Mesh fine = generate_mesh(rect(2 * nx, 2 * ny, a, b));
        for (const auto& p : coarse.nodes) CHECK(contains_point(fine, p, 1e-12));

        const double psi = gen.uniform(-1.0, 1.0);
        MeshSpec fs = rect(2 * nx, 2 * ny, a, b);
        fs.skew = psi;
        const Mesh refined_then_skewed = skew_map(fine, psi);
        const Mesh skew_generated = generate_mesh(fs);
        for (const auto& p : refined_then_skewed.nodes) CHECK(contains_point(skew_generated, p, 1e-12));
    }
}

TEST_CASE("mesh text round trip") {
    for (const MeshSpec& s : {rect(3, 2, 2.0, 1.0), holed(0.15, 3, 24)}) {
        MeshSpec spec = s;
        spec.skew = 0.3;
        const Mesh m = generate_mesh(spec);
        const Mesh back = read_mesh(write_mesh(m));
        CHECK(back.nodes == m.nodes);
        CHECK(back.triangles == m.triangles);
        CHECK(back.boundary_sets == m.boundary_sets);
        CHECK(back.geometry.skew == m.geometry.skew);
        CHECK(write_mesh(back) == write_mesh(m));
    }
}

TEST_CASE("mesh parsing") {
    const std::string fixture =
        "plmesh 1\nnodes 4\n0 0\n1 0\n1 1\n0 1\ntriangles 2\n0 1 2\n0 2 3\n";
    const Mesh m = read_mesh(fixture);
    CHECK(m.node_count() == 4);
    CHECK(m.element_count() == 2);
    CHECK(m.total_area() == doctest::Approx(1.0));

    auto kind_of = [](const std::string& text) {
        try {
            read_mesh(text);
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::Internal;
    };
    CHECK(kind_of("plmesh 1\nnodes 3\n0 0\n1 0\n0 1\ntriangles 0\n") == ErrorKind::Parse);
    CHECK(kind_of("plmesh 2\nnodes 0\n") == ErrorKind::Parse);
    CHECK(kind_of("plmesh 1\nnodes 3\n0 0\n1 0\n0 1\ntriangles 1\n0 1 7\n") != ErrorKind::Internal);
    // clockwise triangle
    CHECK(kind_of("plmesh 1\nnodes 3\n0 0\n1 0\n0 1\ntriangles 1\n0 2 1\n") != ErrorKind::Internal);
}

TEST_CASE("centre node") {
    const Mesh m = generate_mesh(rect(4, 4));
    CHECK((m.nodes[center_node(m)] - Eigen::Vector2d(0.5, 0.5)).norm() < 1e-15);
}
