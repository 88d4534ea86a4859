#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "hballs/errors.hpp"
#include "hballs/geometry.hpp"

namespace hballs {

// Uniform square node grid: node (i,j) sits at (x_min + i*h, y_min + j*h),
// 0 <= i < nx, 0 <= j < ny.  Row-major storage, index = j*nx + i.
struct GridSpec {
    double x_min = 0.0;
    double y_min = 0.0;
    double h = 1.0;
    int nx = 0;
    int ny = 0;

    void validate() const;

    double x(int i) const { return x_min + i * h; }
    double y(int j) const { return y_min + j * h; }
    double x_max() const { return x(nx - 1); }
    double y_max() const { return y(ny - 1); }
    Point node(int i, int j) const { return {x(i), y(j)}; }
    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
    bool in_grid(int i, int j) const { return i >= 0 && i < nx && j >= 0 && j < ny; }
    // nearest node to a point (clamped to the grid)
    std::pair<int, int> nearest(Point p) const;
    bool operator==(const GridSpec&) const = default;
};

// build a grid covering [x_min,x_max] x [y_min,y_max] with spacing h
GridSpec make_grid(double x_min, double x_max, double y_min, double y_max, double h);

// Domain geometry.  WholePlaneBox means "all of the plane", realized on the
// finite grid box; the solution must then vanish well inside the box edges.
struct WholePlaneBox {};
struct HalfPlane {
    double offset = 0.0;  // K = { y > offset }
};
struct Disc {
    Point center;
    double radius = 1.0;
};
struct Rectangle {
    Point lo, hi;  // open rectangle (lo.x,hi.x) x (lo.y,hi.y)
};
struct Polygon {
    std::vector<Point> vertices;  // simple polygon, implicitly closed
};
using DomainSpec = std::variant<WholePlaneBox, HalfPlane, Disc, Rectangle, Polygon>;

enum class NodeClass : std::uint8_t { Exterior = 0, Boundary = 1, Interior = 2 };

// Node classification of a domain on a grid.
//  - INTERIOR: node lies in the open set K (never on the outermost grid ring)
//  - BOUNDARY: non-interior node 4-adjacent to an interior node
//  - EXTERIOR: everything else
// Invariants: interior nodes form one 4-connected component; every interior
// node's 4-neighbors are interior or boundary; every boundary node has at
// least one interior neighbor.
struct DomainMask {
    GridSpec grid;
    DomainSpec domain;
    std::vector<NodeClass> cls;

    NodeClass at(int i, int j) const { return cls[grid.index(i, j)]; }
    bool interior(int i, int j) const { return at(i, j) == NodeClass::Interior; }
    bool boundary(int i, int j) const { return at(i, j) == NodeClass::Boundary; }
    int interior_count() const;
};

// throws GeometryOutOfBounds, DisconnectedDomain
DomainMask build_domain_mask(const GridSpec& grid, const DomainSpec& domain);

// Node subset of a grid.
struct RegionMask {
    GridSpec grid;
    std::vector<std::uint8_t> member;

    RegionMask() = default;
    explicit RegionMask(const GridSpec& g) : grid(g), member(g.size(), 0) {}
    bool at(int i, int j) const { return member[grid.index(i, j)] != 0; }
    void set(int i, int j, bool v) { member[grid.index(i, j)] = v ? 1 : 0; }
    int count() const;
    bool empty() const { return count() == 0; }
};

struct ScalarField {
    GridSpec grid;
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(const GridSpec& g) : grid(g), v(g.size(), 0.0) {}
    ScalarField(const GridSpec& g, std::vector<double> vals) : grid(g), v(std::move(vals)) {}
    double at(int i, int j) const { return v[grid.index(i, j)]; }
    double& at(int i, int j) { return v[grid.index(i, j)]; }
    double interp(Point p) const;  // bilinear
    double max_abs() const;
};

struct ComplexField {
    GridSpec grid;
    std::vector<Complex> v;

    ComplexField() = default;
    explicit ComplexField(const GridSpec& g) : grid(g), v(g.size(), Complex{0.0, 0.0}) {}
    Complex at(int i, int j) const { return v[grid.index(i, j)]; }
    Complex& at(int i, int j) { return v[grid.index(i, j)]; }
    double max_abs(const RegionMask& where) const;
};

// midpoint quadrature: h^2 * (number of member nodes)
double integrate(const RegionMask& region);
// h^2 * sum of f over member nodes
double integrate_field(const ScalarField& f, const RegionMask& region);
Complex integrate_field(const ComplexField& f, const RegionMask& region);

// { u > theta } restricted to INTERIOR(K), theta = theta_scale * max(u).
// Default theta_scale = sqrt(machine epsilon).
RegionMask region_from_field(const ScalarField& u, const DomainMask& mask, double theta_scale = -1.0);

// Morphological close (dilate one node, erode one node, 4-neighborhood)
// intersected with INTERIOR(K); result contains the input region.
RegionMask interior_of_closure(const RegionMask& region, const DomainMask& mask);

RegionMask dilate(const RegionMask& region, int cells = 1);
RegionMask erode(const RegionMask& region, int cells = 1);
RegionMask interior_region(const DomainMask& mask);

// set helpers
bool subset_of(const RegionMask& a, const RegionMask& b);  // a ⊆ b
int count_diff(const RegionMask& a, const RegionMask& b);  // |a \ b|
RegionMask sym_diff(const RegionMask& a, const RegionMask& b);
// nodes of `region` that have a 4-neighbor outside `region` (inner rim)
RegionMask inner_rim(const RegionMask& region);
// true if every member of `a` is within Chebyshev distance `cells` of a member of `b`
bool within_cells_of(const RegionMask& a, const RegionMask& b, int cells);

struct StarshapeResult {
    bool starshaped = false;
    std::vector<std::array<int, 2>> violations;  // member nodes whose segment to the center leaves the region
};

// Ray test: for every member node p, sample the segment from the center node
// to p at spacing h/2; each sample must land within a one-cell collar of the
// region.  Throws CenterOutsideRegion.
StarshapeResult is_starshaped(const RegionMask& region, int center_i, int center_j);

}  // namespace hballs
