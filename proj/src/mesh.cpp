#include "plates/mesh.hpp"

#include "plates/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace plates {

std::array<Eigen::Vector2d, 3> Mesh::element_coords(std::size_t e) const {
    const auto& t = triangles[e];
    return {nodes[t[0]], nodes[t[1]], nodes[t[2]]};
}

namespace {

double signed_area_of(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2, const Eigen::Vector2d& p3) {
    return 0.5 * ((p2.x() - p1.x()) * (p3.y() - p1.y()) - (p3.x() - p1.x()) * (p2.y() - p1.y()));
}

}  // namespace

double Mesh::signed_area(std::size_t e) const {
    const auto c = element_coords(e);
    return signed_area_of(c[0], c[1], c[2]);
}

double Mesh::total_area() const {
    double sum = 0.0;
    for (std::size_t e = 0; e < triangles.size(); ++e) sum += signed_area(e);
    return sum;
}

const std::vector<int>& Mesh::set(const std::string& name) const {
    auto it = boundary_sets.find(name);
    if (it == boundary_sets.end()) fail(ErrorKind::Mesh, "mesh has no boundary set '" + name + "'");
    return it->second;
}

void Mesh::validate() const {
    if (nodes.empty() || triangles.empty()) fail(ErrorKind::Mesh, "mesh has no nodes or no triangles");
    const int n = static_cast<int>(nodes.size());
    for (std::size_t e = 0; e < triangles.size(); ++e) {
        for (int i : triangles[e])
            if (i < 0 || i >= n) fail(ErrorKind::Mesh, "triangle " + std::to_string(e) + " references a missing node");
        if (!(signed_area(e) > 0.0)) fail(ErrorKind::Mesh, "triangle " + std::to_string(e) + " is not counterclockwise");
    }
    for (const auto& [name, ids] : boundary_sets)
        for (int i : ids)
            if (i < 0 || i >= n) fail(ErrorKind::Mesh, "boundary set '" + name + "' references a missing node");

    double extent = 0.0;
    for (const auto& p : nodes) extent = std::max(extent, p.cwiseAbs().maxCoeff());
    const double tol = 1e-12 * std::max(extent, 1e-300);
    std::vector<int> order(nodes.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return nodes[i].x() < nodes[j].x(); });
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (std::size_t j = i + 1; j < order.size() && nodes[order[j]].x() - nodes[order[i]].x() <= tol; ++j) {
            if (std::abs(nodes[order[j]].y() - nodes[order[i]].y()) <= tol)
                fail(ErrorKind::Mesh, "duplicate nodes " + std::to_string(order[i]) + " and " + std::to_string(order[j]));
        }
    }
}

std::map<std::string, std::vector<int>> boundary_sets(const std::vector<Eigen::Vector2d>& pts,
                                                      const PlateGeometry& g) {
    const double tol = 1e-9 * std::max(g.a, g.b);
    std::map<std::string, std::vector<int>> sets{{"x0", {}}, {"xa", {}}, {"y0", {}}, {"yb", {}}};
    if (g.cutout_radius) sets["hole"] = {};
    const Eigen::Vector2d centre(0.5 * g.a, 0.5 * g.b);
    for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
        const auto& p = pts[i];
        if (std::abs(p.x()) <= tol) sets["x0"].push_back(i);
        if (std::abs(p.x() - g.a) <= tol) sets["xa"].push_back(i);
        if (std::abs(p.y()) <= tol) sets["y0"].push_back(i);
        if (std::abs(p.y() - g.b) <= tol) sets["yb"].push_back(i);
        if (g.cutout_radius && std::abs((p - centre).norm() - *g.cutout_radius) <= tol) sets["hole"].push_back(i);
    }
    for (const auto& [name, ids] : sets)
        if (ids.empty()) fail(ErrorKind::Mesh, "boundary set '" + name + "' is empty");
    return sets;
}

Mesh structured_rectangle(const MeshSpec& spec) {
    const auto& plan = spec.rectangle;
    if (plan.nx < 1 || plan.ny < 1) fail(ErrorKind::Spec, "rectangle mesh needs nx, ny >= 1");
    if (!(spec.a > 0.0 && spec.b > 0.0)) fail(ErrorKind::Spec, "plate dimensions must be positive");

    Mesh m;
    m.geometry = {spec.a, spec.b, 0.0, std::nullopt};
    const int nx = plan.nx, ny = plan.ny;
    m.nodes.reserve((nx + 1) * (ny + 1));
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) m.nodes.emplace_back(spec.a * i / nx, spec.b * j / ny);

    auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
    m.triangles.reserve(2 * nx * ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int n00 = id(i, j), n10 = id(i + 1, j), n01 = id(i, j + 1), n11 = id(i + 1, j + 1);
            const bool main_diagonal = plan.diagonal == DiagonalRule::Uniform || (i + j) % 2 == 0;
            if (main_diagonal) {
                m.triangles.push_back({n00, n10, n11});
                m.triangles.push_back({n00, n11, n01});
            } else {
                m.triangles.push_back({n00, n10, n01});
                m.triangles.push_back({n10, n11, n01});
            }
        }
    }
    m.boundary_sets = boundary_sets(m.nodes, m.geometry);
    return m;
}

Mesh skew_map(const Mesh& mesh, double psi) {
    if (!(std::abs(psi) < 0.5 * std::numbers::pi)) fail(ErrorKind::Spec, "skew angle must satisfy |psi| < pi/2");
    Mesh out = mesh;
    if (psi == 0.0) return out;
    const double s = std::sin(psi), c = std::cos(psi);
    for (auto& p : out.nodes) p = Eigen::Vector2d(p.x() + p.y() * s, p.y() * c);
    out.geometry.skew = mesh.geometry.skew + psi;
    return out;
}

Mesh perforated_square(const MeshSpec& spec) {
    const auto& plan = spec.perforated;
    const double a = spec.a;
    const double r = plan.radius;
    if (!(a > 0.0)) fail(ErrorKind::Spec, "plate side must be positive");
    if (!(r > 0.0 && r < 0.5 * a)) fail(ErrorKind::Spec, "cutout radius must satisfy 0 < r < a/2");
    if (plan.radial < 1 || plan.circumferential < 8 || plan.circumferential % 8 != 0)
        fail(ErrorKind::Spec, "perforated mesh needs radial >= 1 and circumferential a positive multiple of 8");

    const int nc = plan.circumferential;
    const int nr = plan.radial;
    const int per_block = nc / 8;
    const Eigen::Vector2d centre(0.5 * a, 0.5 * a);
    const double half = 0.5 * a;

    // Square boundary point for circumferential station q, linear along each block's outer side.
    auto outer_point = [&](int q) {
        const int block = q / per_block;
        const double s = static_cast<double>(q % per_block) / per_block;
        auto ray_hit = [&](int k) {
            const double ang = k * std::numbers::pi / 4.0;
            const double c = std::cos(ang), sn = std::sin(ang);
            const double scale = half / std::max(std::abs(c), std::abs(sn));
            return Eigen::Vector2d(centre + scale * Eigen::Vector2d(c, sn));
        };
        const Eigen::Vector2d p0 = ray_hit(block), p1 = ray_hit(block + 1);
        Eigen::Vector2d p = (1.0 - s) * p0 + s * p1;
        // snap to the exact boundary line
        for (int d = 0; d < 2; ++d) {
            if (std::abs(p[d]) < 1e-12 * a) p[d] = 0.0;
            if (std::abs(p[d] - a) < 1e-12 * a) p[d] = a;
        }
        return p;
    };

    Mesh m;
    m.geometry = {a, a, 0.0, r};
    m.nodes.reserve(nc * (nr + 1));
    for (int j = 0; j <= nr; ++j) {
        const double t = static_cast<double>(j) / nr;
        for (int q = 0; q < nc; ++q) {
            const double ang = 2.0 * std::numbers::pi * q / nc;
            const Eigen::Vector2d inner = centre + r * Eigen::Vector2d(std::cos(ang), std::sin(ang));
            m.nodes.push_back(j == nr ? outer_point(q) : Eigen::Vector2d((1.0 - t) * inner + t * outer_point(q)));
        }
    }
    auto id = [nc](int j, int q) { return j * nc + (q % nc); };
    m.triangles.reserve(2 * nc * nr);
    for (int j = 0; j < nr; ++j) {
        for (int q = 0; q < nc; ++q) {
            const int n00 = id(j, q), n10 = id(j, q + 1), n01 = id(j + 1, q), n11 = id(j + 1, q + 1);
            // q runs counterclockwise and j outwards, so (n00, n01, n10) is positively oriented
            if ((j + q) % 2 == 0) {
                m.triangles.push_back({n00, n01, n11});
                m.triangles.push_back({n00, n11, n10});
            } else {
                m.triangles.push_back({n00, n01, n10});
                m.triangles.push_back({n10, n01, n11});
            }
        }
    }
    for (std::size_t e = 0; e < m.triangles.size(); ++e)
        if (!(m.signed_area(e) > 1e-14 * a * a))
            fail(ErrorKind::Spec, "cutout too close to the plate edge: inverted elements");
    m.boundary_sets = boundary_sets(m.nodes, m.geometry);
    return m;
}

Mesh generate_mesh(const MeshSpec& spec) {
    Mesh m = spec.kind == MeshSpec::Kind::Rectangle ? structured_rectangle(spec) : perforated_square(spec);
    return skew_map(m, spec.skew);
}

int center_node(const Mesh& mesh) {
    const auto& g = mesh.geometry;
    const Eigen::Vector2d c(0.5 * g.a + 0.5 * g.b * std::sin(g.skew), 0.5 * g.b * std::cos(g.skew));
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(mesh.nodes.size()); ++i) {
        const double d = (mesh.nodes[i] - c).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

namespace {

std::string shortest(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string write_mesh(const Mesh& mesh) {
    std::ostringstream os;
    const auto& g = mesh.geometry;
    os << "plmesh 1\n";
    os << "geometry " << shortest(g.a) << ' ' << shortest(g.b) << ' ' << shortest(g.skew) << ' '
       << (g.cutout_radius ? shortest(*g.cutout_radius) : std::string("none")) << '\n';
    os << "nodes " << mesh.nodes.size() << '\n';
    for (const auto& p : mesh.nodes) os << shortest(p.x()) << ' ' << shortest(p.y()) << '\n';
    os << "triangles " << mesh.triangles.size() << '\n';
    for (const auto& t : mesh.triangles) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    for (const auto& [name, ids] : mesh.boundary_sets) {
        os << "set " << name << ' ' << ids.size() << '\n';
        for (std::size_t i = 0; i < ids.size(); ++i) os << (i ? " " : "") << ids[i];
        os << '\n';
    }
    return os.str();
}

namespace {

class LineReader {
public:
    explicit LineReader(const std::string& text) : in_(text) {}

    // Next non-blank line split into tokens; false at end of input.
    bool next(std::vector<std::string>& tokens) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            std::istringstream ls(line);
            tokens.clear();
            for (std::string t; ls >> t;) tokens.push_back(t);
            if (!tokens.empty()) return true;
        }
        return false;
    }

    void expect(std::vector<std::string>& tokens, const char* what) {
        if (!next(tokens)) error(std::string("unexpected end of input, expected ") + what);
    }

    [[noreturn]] void error(const std::string& msg) const {
        fail(ErrorKind::Parse, "mesh line " + std::to_string(line_no_) + ": " + msg);
    }

    int line() const { return line_no_; }

    double number(const std::string& tok) const {
        double v = 0.0;
        auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) error("bad number '" + tok + "'");
        return v;
    }

    long integer(const std::string& tok) const {
        long v = 0;
        auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) error("bad integer '" + tok + "'");
        return v;
    }

private:
    std::istringstream in_;
    int line_no_ = 0;
};

}  // namespace

Mesh read_mesh(const std::string& text) {
    LineReader rd(text);
    std::vector<std::string> tok;
    rd.expect(tok, "header");
    if (tok.size() != 2 || tok[0] != "plmesh" || tok[1] != "1") rd.error("expected header 'plmesh 1'");

    Mesh m;
    bool have_geometry = false;
    rd.expect(tok, "'nodes N'");
    if (tok[0] == "geometry") {
        if (tok.size() != 5) rd.error("expected 'geometry a b skew r|none'");
        m.geometry.a = rd.number(tok[1]);
        m.geometry.b = rd.number(tok[2]);
        m.geometry.skew = rd.number(tok[3]);
        if (tok[4] != "none") m.geometry.cutout_radius = rd.number(tok[4]);
        have_geometry = true;
        rd.expect(tok, "'nodes N'");
    }
    if (tok.size() != 2 || tok[0] != "nodes") rd.error("expected 'nodes N'");
    const long n_nodes = rd.integer(tok[1]);
    if (n_nodes <= 0) rd.error("node count must be positive");
    m.nodes.reserve(n_nodes);
    for (long i = 0; i < n_nodes; ++i) {
        rd.expect(tok, "node coordinates");
        if (tok.size() != 2) rd.error("expected 'x y'");
        m.nodes.emplace_back(rd.number(tok[0]), rd.number(tok[1]));
    }

    rd.expect(tok, "'triangles M'");
    if (tok.size() != 2 || tok[0] != "triangles") rd.error("expected 'triangles M'");
    const long n_tri = rd.integer(tok[1]);
    if (n_tri <= 0) rd.error("element list is empty");
    m.triangles.reserve(n_tri);
    for (long e = 0; e < n_tri; ++e) {
        rd.expect(tok, "triangle connectivity");
        if (tok.size() != 3) rd.error("expected 'i j k'");
        std::array<int, 3> t{};
        for (int k = 0; k < 3; ++k) {
            const long v = rd.integer(tok[k]);
            if (v < 0 || v >= n_nodes) rd.error("node index " + tok[k] + " out of range");
            t[k] = static_cast<int>(v);
        }
        m.triangles.push_back(t);
        if (!(m.signed_area(m.triangles.size() - 1) > 0.0)) rd.error("triangle has nonpositive area");
    }

    while (rd.next(tok)) {
        if (tok.size() != 3 || tok[0] != "set") rd.error("expected 'set NAME K'");
        const std::string name = tok[1];
        const long count = rd.integer(tok[2]);
        if (count < 0) rd.error("negative set size");
        std::vector<int> ids;
        ids.reserve(count);
        while (static_cast<long>(ids.size()) < count) {
            rd.expect(tok, "set indices");
            for (const auto& t : tok) {
                const long v = rd.integer(t);
                if (v < 0 || v >= n_nodes) rd.error("set index " + t + " out of range");
                ids.push_back(static_cast<int>(v));
            }
        }
        if (static_cast<long>(ids.size()) != count) rd.error("set '" + name + "' has too many indices");
        m.boundary_sets[name] = std::move(ids);
    }

    if (!have_geometry) {
        // bounding box stands in for the plate dimensions
        double xmax = 0.0, ymax = 0.0;
        for (const auto& p : m.nodes) {
            xmax = std::max(xmax, p.x());
            ymax = std::max(ymax, p.y());
        }
        m.geometry = {xmax, ymax, 0.0, std::nullopt};
    }
    return m;
}

}  // namespace plates
