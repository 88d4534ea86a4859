#include "hballs/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace hballs {

void GridSpec::validate() const {
    if (!(h > 0.0) || !std::isfinite(h) || !std::isfinite(x_min) || !std::isfinite(y_min))
        throw Error("invalid grid spec");
    if (nx < 3 || ny < 3) throw Error("grid must be at least 3x3");
}

std::pair<int, int> GridSpec::nearest(Point p) const {
    int i = static_cast<int>(std::lround((p.x - x_min) / h));
    int j = static_cast<int>(std::lround((p.y - y_min) / h));
    i = std::clamp(i, 0, nx - 1);
    j = std::clamp(j, 0, ny - 1);
    return {i, j};
}

GridSpec make_grid(double x_min, double x_max, double y_min, double y_max, double h) {
    GridSpec g;
    g.x_min = x_min;
    g.y_min = y_min;
    g.h = h;
    g.nx = static_cast<int>(std::lround((x_max - x_min) / h)) + 1;
    g.ny = static_cast<int>(std::lround((y_max - y_min) / h)) + 1;
    g.validate();
    return g;
}

int DomainMask::interior_count() const {
    int n = 0;
    for (NodeClass c : cls)
        if (c == NodeClass::Interior) ++n;
    return n;
}

namespace {

bool point_in_polygon(const std::vector<Point>& v, Point p) {
    // even-odd rule
    bool inside = false;
    std::size_t n = v.size();
    for (std::size_t a = 0, b = n - 1; a < n; b = a++) {
        bool crosses = (v[a].y > p.y) != (v[b].y > p.y);
        if (!crosses) continue;
        double xint = v[b].x + (v[a].x - v[b].x) * (p.y - v[b].y) / (v[a].y - v[b].y);
        if (p.x < xint) inside = !inside;
    }
    return inside;
}

double cross(Point o, Point a, Point b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool segments_intersect(Point a, Point b, Point c, Point d) {
    double d1 = cross(c, d, a), d2 = cross(c, d, b);
    double d3 = cross(a, b, c), d4 = cross(a, b, d);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    return false;
}

void check_polygon_simple(const std::vector<Point>& v) {
    std::size_t n = v.size();
    if (n < 3) throw GeometryOutOfBounds("polygon needs at least 3 vertices");
    for (std::size_t a = 0; a < n; ++a) {
        std::size_t a2 = (a + 1) % n;
        for (std::size_t b = a + 1; b < n; ++b) {
            std::size_t b2 = (b + 1) % n;
            if (b == a || b2 == a || b == a2) continue;  // shared endpoint
            if (segments_intersect(v[a], v[a2], v[b], v[b2]))
                throw GeometryOutOfBounds("polygon is self-intersecting");
        }
    }
}

// geometry must sit strictly inside the grid box (half-plane / whole-plane
// far sides are allowed to coincide with it)
void check_fits(const GridSpec& g, double lo_x, double hi_x, double lo_y, double hi_y) {
    if (!(lo_x > g.x_min && hi_x < g.x_max() && lo_y > g.y_min && hi_y < g.y_max()))
        throw GeometryOutOfBounds("geometry does not fit strictly inside the grid box");
}

}  // namespace

DomainMask build_domain_mask(const GridSpec& grid, const DomainSpec& domain) {
    grid.validate();
    DomainMask m{grid, domain, std::vector<NodeClass>(grid.size(), NodeClass::Exterior)};

    auto in_open_set = [&](Point p) -> bool {
        return std::visit(
            [&]<class T>(const T& d) -> bool {
                if constexpr (std::is_same_v<T, WholePlaneBox>) {
                    (void)d;
                    return true;
                } else if constexpr (std::is_same_v<T, HalfPlane>) {
                    return p.y > d.offset;
                } else if constexpr (std::is_same_v<T, Disc>) {
                    return dist(p, d.center) < d.radius;
                } else if constexpr (std::is_same_v<T, Rectangle>) {
                    return p.x > d.lo.x && p.x < d.hi.x && p.y > d.lo.y && p.y < d.hi.y;
                } else {
                    return point_in_polygon(d.vertices, p);
                }
            },
            domain);
    };

    std::visit(
        [&]<class T>(const T& d) {
            if constexpr (std::is_same_v<T, Disc>) {
                if (!(d.radius > 0)) throw GeometryOutOfBounds("disc radius must be positive");
                check_fits(grid, d.center.x - d.radius, d.center.x + d.radius,
                           d.center.y - d.radius, d.center.y + d.radius);
            } else if constexpr (std::is_same_v<T, Rectangle>) {
                if (!(d.lo.x < d.hi.x && d.lo.y < d.hi.y))
                    throw GeometryOutOfBounds("empty rectangle");
                check_fits(grid, d.lo.x, d.hi.x, d.lo.y, d.hi.y);
            } else if constexpr (std::is_same_v<T, Polygon>) {
                check_polygon_simple(d.vertices);
                double lx = std::numeric_limits<double>::max(), hx = -lx, ly = lx, hy = -lx;
                for (Point p : d.vertices) {
                    lx = std::min(lx, p.x);
                    hx = std::max(hx, p.x);
                    ly = std::min(ly, p.y);
                    hy = std::max(hy, p.y);
                }
                check_fits(grid, lx, hx, ly, hy);
            } else if constexpr (std::is_same_v<T, HalfPlane>) {
                if (!(d.offset < grid.y_max())) throw GeometryOutOfBounds("half-plane above the box");
            }
        },
        domain);

    // interior = open-set membership, never on the outermost grid ring (the
    // ring realizes the far truncation for unbounded domains and keeps the
    // 5-point stencil inside the grid)
    for (int j = 1; j < grid.ny - 1; ++j)
        for (int i = 1; i < grid.nx - 1; ++i)
            if (in_open_set(grid.node(i, j))) m.cls[grid.index(i, j)] = NodeClass::Interior;

    // boundary = non-interior nodes 4-adjacent to an interior node
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            if (m.cls[grid.index(i, j)] == NodeClass::Interior) continue;
            bool adj = (i > 0 && m.interior(i - 1, j)) || (i + 1 < grid.nx && m.interior(i + 1, j)) ||
                       (j > 0 && m.interior(i, j - 1)) || (j + 1 < grid.ny && m.interior(i, j + 1));
            if (adj) m.cls[grid.index(i, j)] = NodeClass::Boundary;
        }

    // interior must be a single 4-connected component
    int total = m.interior_count();
    if (total == 0) throw GeometryOutOfBounds("domain contains no interior node");
    std::vector<std::uint8_t> seen(grid.size(), 0);
    std::queue<std::pair<int, int>> q;
    for (int j = 0; j < grid.ny && q.empty(); ++j)
        for (int i = 0; i < grid.nx && q.empty(); ++i)
            if (m.interior(i, j)) {
                q.push({i, j});
                seen[grid.index(i, j)] = 1;
            }
    int reached = 0;
    while (!q.empty()) {
        auto [i, j] = q.front();
        q.pop();
        ++reached;
        const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
            int i2 = i + di[k], j2 = j + dj[k];
            if (!grid.in_grid(i2, j2) || seen[grid.index(i2, j2)]) continue;
            if (m.interior(i2, j2)) {
                seen[grid.index(i2, j2)] = 1;
                q.push({i2, j2});
            }
        }
    }
    if (reached != total) throw DisconnectedDomain();
    return m;
}

int RegionMask::count() const {
    int n = 0;
    for (std::uint8_t b : member) n += b != 0;
    return n;
}

double ScalarField::interp(Point p) const {
    double fx = (p.x - grid.x_min) / grid.h;
    double fy = (p.y - grid.y_min) / grid.h;
    int i = std::clamp(static_cast<int>(std::floor(fx)), 0, grid.nx - 2);
    int j = std::clamp(static_cast<int>(std::floor(fy)), 0, grid.ny - 2);
    double tx = std::clamp(fx - i, 0.0, 1.0), ty = std::clamp(fy - j, 0.0, 1.0);
    return (1 - tx) * (1 - ty) * at(i, j) + tx * (1 - ty) * at(i + 1, j) +
           (1 - tx) * ty * at(i, j + 1) + tx * ty * at(i + 1, j + 1);
}

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double a : v) m = std::max(m, std::abs(a));
    return m;
}

double ComplexField::max_abs(const RegionMask& where) const {
    if (!(where.grid == grid)) throw GridMismatch();
    double m = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k)
        if (where.member[k]) m = std::max(m, std::abs(v[k]));
    return m;
}

double integrate(const RegionMask& region) { return region.grid.h * region.grid.h * region.count(); }

double integrate_field(const ScalarField& f, const RegionMask& region) {
    if (!(f.grid == region.grid)) throw GridMismatch();
    double s = 0.0;
    for (std::size_t k = 0; k < f.v.size(); ++k)
        if (region.member[k]) s += f.v[k];
    return f.grid.h * f.grid.h * s;
}

Complex integrate_field(const ComplexField& f, const RegionMask& region) {
    if (!(f.grid == region.grid)) throw GridMismatch();
    Complex s{0.0, 0.0};
    for (std::size_t k = 0; k < f.v.size(); ++k)
        if (region.member[k]) s += f.v[k];
    return f.grid.h * f.grid.h * s;
}

RegionMask region_from_field(const ScalarField& u, const DomainMask& mask, double theta_scale) {
    if (!(u.grid == mask.grid)) throw GridMismatch();
    if (theta_scale < 0) theta_scale = std::sqrt(std::numeric_limits<double>::epsilon());
    double umax = 0.0;
    for (double a : u.v) umax = std::max(umax, a);
    double theta = theta_scale * umax;
    RegionMask r(u.grid);
    for (std::size_t k = 0; k < u.v.size(); ++k)
        r.member[k] = (u.v[k] > theta && mask.cls[k] == NodeClass::Interior) ? 1 : 0;
    return r;
}

RegionMask dilate(const RegionMask& region, int cells) {
    RegionMask r = region;
    const GridSpec& g = region.grid;
    for (int c = 0; c < cells; ++c) {
        RegionMask next = r;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                if (r.at(i, j)) continue;
                bool nb = (i > 0 && r.at(i - 1, j)) || (i + 1 < g.nx && r.at(i + 1, j)) ||
                          (j > 0 && r.at(i, j - 1)) || (j + 1 < g.ny && r.at(i, j + 1));
                if (nb) next.set(i, j, true);
            }
        r = next;
    }
    return r;
}

RegionMask erode(const RegionMask& region, int cells) {
    RegionMask r = region;
    const GridSpec& g = region.grid;
    for (int c = 0; c < cells; ++c) {
        RegionMask next = r;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                if (!r.at(i, j)) continue;
                bool all = (i > 0 && r.at(i - 1, j)) && (i + 1 < g.nx && r.at(i + 1, j)) &&
                           (j > 0 && r.at(i, j - 1)) && (j + 1 < g.ny && r.at(i, j + 1));
                if (!all) next.set(i, j, false);
            }
        r = next;
    }
    return r;
}

RegionMask interior_region(const DomainMask& mask) {
    RegionMask r(mask.grid);
    for (std::size_t k = 0; k < mask.cls.size(); ++k)
        r.member[k] = mask.cls[k] == NodeClass::Interior ? 1 : 0;
    return r;
}

RegionMask interior_of_closure(const RegionMask& region, const DomainMask& mask) {
    if (!(region.grid == mask.grid)) throw GridMismatch();
    RegionMask closed = erode(dilate(region, 1), 1);
    for (std::size_t k = 0; k < closed.member.size(); ++k) {
        if (region.member[k]) closed.member[k] = 1;  // closing is extensive
        if (mask.cls[k] != NodeClass::Interior) closed.member[k] = 0;
    }
    return closed;
}

bool subset_of(const RegionMask& a, const RegionMask& b) {
    if (!(a.grid == b.grid)) throw GridMismatch();
    for (std::size_t k = 0; k < a.member.size(); ++k)
        if (a.member[k] && !b.member[k]) return false;
    return true;
}

int count_diff(const RegionMask& a, const RegionMask& b) {
    if (!(a.grid == b.grid)) throw GridMismatch();
    int n = 0;
    for (std::size_t k = 0; k < a.member.size(); ++k) n += (a.member[k] && !b.member[k]);
    return n;
}

RegionMask sym_diff(const RegionMask& a, const RegionMask& b) {
    if (!(a.grid == b.grid)) throw GridMismatch();
    RegionMask r(a.grid);
    for (std::size_t k = 0; k < a.member.size(); ++k)
        r.member[k] = (a.member[k] != b.member[k]) ? 1 : 0;
    return r;
}

RegionMask inner_rim(const RegionMask& region) {
    const GridSpec& g = region.grid;
    RegionMask r(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (!region.at(i, j)) continue;
            bool out = (i == 0 || !region.at(i - 1, j)) || (i + 1 == g.nx || !region.at(i + 1, j)) ||
                       (j == 0 || !region.at(i, j - 1)) || (j + 1 == g.ny || !region.at(i, j + 1));
            if (out) r.set(i, j, true);
        }
    return r;
}

bool within_cells_of(const RegionMask& a, const RegionMask& b, int cells) {
    if (!(a.grid == b.grid)) throw GridMismatch();
    const GridSpec& g = a.grid;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (!a.at(i, j)) continue;
            bool near = false;
            for (int dj = -cells; dj <= cells && !near; ++dj)
                for (int di = -cells; di <= cells && !near; ++di) {
                    int i2 = i + di, j2 = j + dj;
                    if (g.in_grid(i2, j2) && b.at(i2, j2)) near = true;
                }
            if (!near) return false;
        }
    return true;
}

StarshapeResult is_starshaped(const RegionMask& region, int ci, int cj) {
    const GridSpec& g = region.grid;
    if (!g.in_grid(ci, cj) || !region.at(ci, cj)) throw CenterOutsideRegion();
    StarshapeResult res;
    Point c = g.node(ci, cj);
    auto collar_ok = [&](int i, int j) {
        for (int dj = -1; dj <= 1; ++dj)
            for (int di = -1; di <= 1; ++di) {
                int i2 = i + di, j2 = j + dj;
                if (g.in_grid(i2, j2) && region.at(i2, j2)) return true;
            }
        return false;
    };
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (!region.at(i, j)) continue;
            Point p = g.node(i, j);
            double d = dist(c, p);
            int steps = std::max(1, static_cast<int>(std::ceil(d / (g.h / 2))));
            bool ok = true;
            for (int s = 1; s < steps && ok; ++s) {
                double t = static_cast<double>(s) / steps;
                auto [si, sj] = g.nearest({c.x + t * (p.x - c.x), c.y + t * (p.y - c.y)});
                if (!collar_ok(si, sj)) ok = false;
            }
            if (!ok) res.violations.push_back({i, j});
        }
    res.starshaped = res.violations.empty();
    return res;
}

}  // namespace hballs
