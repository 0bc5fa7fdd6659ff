#pragma once

#include <array>
#include <string>
#include <vector>

namespace forge {

// Hyperboloid (Minkowski) model of the hyperbolic plane: points are
// vectors with <x,x> = -1, x0 > 0, under <x,y> = -x0 y0 + x1 y1 + x2 y2.
// Geodesics are cut out by spacelike unit polar vectors; reflections and
// perpendicular distances are linear algebra in this model.

struct Vec3 {
    double v[3] = {0, 0, 0};
    double& operator[](int i) { return v[i]; }
    double operator[](int i) const { return v[i]; }
};

Vec3 operator+(const Vec3& a, const Vec3& b);
Vec3 operator-(const Vec3& a, const Vec3& b);
Vec3 operator*(double s, const Vec3& a);

// Minkowski inner product with signature (-,+,+).
double mink(const Vec3& a, const Vec3& b);
// Minkowski cross product: orthogonal to both arguments.
Vec3 mink_cross(const Vec3& a, const Vec3& b);

double point_distance(const Vec3& a, const Vec3& b);

// 3x3 matrix preserving the Minkowski form; orientation() is the sign of
// the determinant.
struct Isometry {
    double m[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

    Vec3 apply(const Vec3& x) const;
    Isometry operator*(const Isometry& other) const;
    double det() const;
    double trace() const { return m[0][0] + m[1][1] + m[2][2]; }
    bool orientation_preserving() const { return det() > 0; }
    // Max residual of M^T J M = J.
    double form_residual() const;

    static Isometry identity();
    static Isometry rotation(double angle);        // about the model basepoint
    static Isometry boost(double rapidity);        // translation along the x1-axis
    static Isometry reflection(const Vec3& unit_normal);
    // The isometry mapping the segment (a1, b1) onto (a2, b2); sign picks
    // one of the two candidates (they differ by the reflection across the
    // target geodesic).
    static Isometry segment_map(const Vec3& a1, const Vec3& b1, const Vec3& a2, const Vec3& b2,
                                int sign);
};

// Regular right-angled 2q-gon side length, cosh(L/2) = sqrt(2) cos(pi/2q).
double regular_side_length(int q);

// Side length of the equilateral 2q-gon with angles alternating theta and
// pi - theta, from the dual law of cosines on its seed triangle with
// angles (pi/q, theta/2, (pi-theta)/2).
double deformed_side_length(int q, double theta);

// Equilateral 2q-gon with interior angles alternating theta (even
// vertices) and pi - theta (odd vertices). Vertex k sits at angle k*pi/q
// around the center; side k runs from vertex k to vertex k+1. Sides with
// even index are red, odd are blue; theta is the counterclockwise
// interior angle from a red side to a blue side going clockwise around
// the polygon.
struct PolygonMetric {
    int q = 0;
    double theta = 0;
    double side_length = 0;
    std::vector<Vec3> vertices; // 2q points on the hyperboloid

    Vec3 vertex(int k) const { return vertices[((k % size()) + size()) % size()]; }
    int size() const { return static_cast<int>(vertices.size()); }
    bool side_is_red(int k) const { return ((k % 2) + 2) % 2 == 0; }
    Vec3 side_midpoint(int k) const;
    // Unit spacelike polar vector of the side geodesic.
    Vec3 side_normal(int k) const;
    double interior_angle(int k) const;

    std::string to_json() const; // 17 significant digits, fixed key order
};

// Construction residual above 1e-8 raises a numerical failure.
PolygonMetric build_polygon(int q, double theta);

// Length of the common perpendicular between the (extended) geodesics of
// two disjoint sides, |<n_i, n_j>| = cosh(distance). Adjacent sides raise
// SidesAdjacent; i == j gives 0.
double side_distance(const PolygonMetric& p, int i, int j);

// sinh(a) sinh(b) - cos(pi/q): zero exactly on the one-parameter family of
// quadrilaterals with three right angles and one angle pi/q.
double quad_relation_check(double a, double b, int q);

// Translation length of a hyperbolic isometry: 2 cosh(l) + 1 = trace for
// orientation-preserving elements; glide reflections go through their
// square. Elliptic and parabolic elements raise NotHyperbolic.
double length_from_trace(const Isometry& m);

} // namespace forge
