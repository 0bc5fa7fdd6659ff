#include "forge/hyperbolic.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "forge/error.hpp"

namespace forge {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Vec3 operator+(const Vec3& a, const Vec3& b) { return {{a[0] + b[0], a[1] + b[1], a[2] + b[2]}}; }
Vec3 operator-(const Vec3& a, const Vec3& b) { return {{a[0] - b[0], a[1] - b[1], a[2] - b[2]}}; }
Vec3 operator*(double s, const Vec3& a) { return {{s * a[0], s * a[1], s * a[2]}}; }

double mink(const Vec3& a, const Vec3& b) {
    return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

Vec3 mink_cross(const Vec3& a, const Vec3& b) {
    // Euclidean cross product with the time component flipped is
    // Minkowski-orthogonal to both arguments.
    Vec3 e{{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]}};
    return {{-e[0], e[1], e[2]}};
}

double point_distance(const Vec3& a, const Vec3& b) {
    double c = -mink(a, b);
    return std::acosh(std::max(1.0, c));
}

Vec3 Isometry::apply(const Vec3& x) const {
    Vec3 y;
    for (int i = 0; i < 3; ++i) y[i] = m[i][0] * x[0] + m[i][1] * x[1] + m[i][2] * x[2];
    return y;
}

Isometry Isometry::operator*(const Isometry& other) const {
    Isometry r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0;
            for (int k = 0; k < 3; ++k) s += m[i][k] * other.m[k][j];
            r.m[i][j] = s;
        }
    return r;
}

double Isometry::det() const {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

double Isometry::form_residual() const {
    // M^T J M - J, J = diag(-1, 1, 1).
    double worst = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = -m[0][i] * m[0][j] + m[1][i] * m[1][j] + m[2][i] * m[2][j];
            double target = (i == j) ? (i == 0 ? -1.0 : 1.0) : 0.0;
            worst = std::max(worst, std::abs(s - target));
        }
    return worst;
}

Isometry Isometry::identity() { return Isometry{}; }

Isometry Isometry::rotation(double angle) {
    Isometry r;
    r.m[1][1] = std::cos(angle);
    r.m[1][2] = -std::sin(angle);
    r.m[2][1] = std::sin(angle);
    r.m[2][2] = std::cos(angle);
    return r;
}

Isometry Isometry::boost(double rapidity) {
    Isometry r;
    r.m[0][0] = std::cosh(rapidity);
    r.m[0][1] = std::sinh(rapidity);
    r.m[1][0] = std::sinh(rapidity);
    r.m[1][1] = std::cosh(rapidity);
    return r;
}

Isometry Isometry::reflection(const Vec3& n) {
    // x -> x - 2 <x,n> n for a unit spacelike normal.
    Isometry r;
    double J[3] = {-1, 1, 1};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r.m[i][j] = (i == j ? 1.0 : 0.0) - 2.0 * n[i] * J[j] * n[j];
    return r;
}

namespace {

// J-orthonormal frame with column 0 the point a, column 1 the unit tangent
// at a toward b, column 2 the unit normal of the (a,b) geodesic.
Isometry frame(const Vec3& a, const Vec3& b) {
    Vec3 t = b + mink(a, b) * a; // tangential part of b at a
    double tn = std::sqrt(std::max(1e-300, mink(t, t)));
    t = (1.0 / tn) * t;
    Vec3 n = mink_cross(a, t);
    double nn = std::sqrt(std::max(1e-300, mink(n, n)));
    n = (1.0 / nn) * n;
    Isometry f;
    for (int i = 0; i < 3; ++i) {
        f.m[i][0] = a[i];
        f.m[i][1] = t[i];
        f.m[i][2] = n[i];
    }
    return f;
}

Isometry j_inverse(const Isometry& f) {
    // For F with F^T J F = J: F^{-1} = J F^T J.
    Isometry r;
    double J[3] = {-1, 1, 1};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r.m[i][j] = J[i] * f.m[j][i] * J[j];
    return r;
}

} // namespace

Isometry Isometry::segment_map(const Vec3& a1, const Vec3& b1, const Vec3& a2, const Vec3& b2,
                               int sign) {
    Isometry f1 = frame(a1, b1);
    Isometry f2 = frame(a2, b2);
    Isometry flip;
    flip.m[2][2] = sign >= 0 ? 1.0 : -1.0;
    return f2 * flip * j_inverse(f1);
}

double regular_side_length(int q) {
    require(q >= 3, "DomainError", "regular right-angled 2q-gons need q >= 3");
    return 2.0 * std::acosh(std::sqrt(2.0) * std::cos(kPi / (2.0 * q)));
}

double deformed_side_length(int q, double theta) {
    require(q >= 3, "DomainError", "polygon family needs q >= 3");
    require(theta > 0 && theta < kPi, "DomainError", "theta must lie in (0, pi)");
    double a = theta / 2.0, b = (kPi - theta) / 2.0;
    double c = (std::cos(a) * std::cos(b) + std::cos(kPi / q)) / (std::sin(a) * std::sin(b));
    return std::acosh(c);
}

Vec3 PolygonMetric::side_midpoint(int k) const {
    Vec3 s = vertex(k) + vertex(k + 1);
    double norm = std::sqrt(std::max(1e-300, -mink(s, s)));
    return (1.0 / norm) * s;
}

Vec3 PolygonMetric::side_normal(int k) const {
    Vec3 n = mink_cross(vertex(k), vertex(k + 1));
    double nn = std::sqrt(std::max(1e-300, mink(n, n)));
    return (1.0 / nn) * n;
}

double PolygonMetric::interior_angle(int k) const {
    Vec3 v = vertex(k);
    auto tangent_toward = [&](const Vec3& w) {
        Vec3 t = w + mink(v, w) * v;
        double tn = std::sqrt(std::max(1e-300, mink(t, t)));
        return (1.0 / tn) * t;
    };
    Vec3 t1 = tangent_toward(vertex(k - 1));
    Vec3 t2 = tangent_toward(vertex(k + 1));
    double c = mink(t1, t2);
    return std::acos(std::min(1.0, std::max(-1.0, c)));
}

std::string PolygonMetric::to_json() const {
    auto fmt = [](double x) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    std::ostringstream out;
    out << "{\n  \"q\": " << q << ",\n  \"theta\": " << fmt(theta)
        << ",\n  \"side_length\": " << fmt(side_length) << ",\n  \"vertices\": [\n";
    for (int k = 0; k < size(); ++k) {
        out << "    [" << fmt(vertices[k][0]) << ", " << fmt(vertices[k][1]) << ", "
            << fmt(vertices[k][2]) << "]" << (k + 1 < size() ? "," : "") << "\n";
    }
    out << "  ]\n}\n";
    return out.str();
}

PolygonMetric build_polygon(int q, double theta) {
    double s = deformed_side_length(q, theta); // validates q, theta

    // Seed triangle (center, v0, v1) with angles pi/q at the center,
    // theta/2 at v0 and (pi-theta)/2 at v1. Dual law of cosines gives the
    // center-vertex distances; the polygon is the orbit of the two radii
    // under rotation by pi/q.
    double A = kPi / q, B = theta / 2.0, C = (kPi - theta) / 2.0;
    double r_even = std::acosh((std::cos(A) * std::cos(B) + std::cos(C)) /
                               (std::sin(A) * std::sin(B)));
    double r_odd = std::acosh((std::cos(A) * std::cos(C) + std::cos(B)) /
                              (std::sin(A) * std::sin(C)));

    PolygonMetric p;
    p.q = q;
    p.theta = theta;
    p.side_length = s;
    p.vertices.resize(2 * q);
    for (int k = 0; k < 2 * q; ++k) {
        double r = (k % 2 == 0) ? r_even : r_odd;
        double ang = k * kPi / q;
        p.vertices[k] = Vec3{{std::cosh(r), std::sinh(r) * std::cos(ang),
                              std::sinh(r) * std::sin(ang)}};
    }

    double residual = 0;
    for (int k = 0; k < 2 * q; ++k) {
        residual = std::max(residual, std::abs(point_distance(p.vertex(k), p.vertex(k + 1)) - s));
        double want = (k % 2 == 0) ? theta : kPi - theta;
        residual = std::max(residual, std::abs(p.interior_angle(k) - want));
    }
    require(residual <= 1e-8, "NumericalFailure",
            "polygon construction residual " + std::to_string(residual));
    return p;
}

double side_distance(const PolygonMetric& p, int i, int j) {
    const int n = p.size();
    require(i >= 0 && i < n && j >= 0 && j < n, "DomainError", "side index out of range");
    if (i == j) return 0.0;
    int diff = std::abs(i - j);
    diff = std::min(diff, n - diff);
    require(diff != 1, "SidesAdjacent", "adjacent sides meet; no common perpendicular");
    double c = std::abs(mink(p.side_normal(i), p.side_normal(j)));
    return std::acosh(std::max(1.0, c));
}

double quad_relation_check(double a, double b, int q) {
    require(a > 0 && b > 0, "DomainError", "quadrilateral sides must be positive");
    return std::sinh(a) * std::sinh(b) - std::cos(kPi / q);
}

double length_from_trace(const Isometry& m) {
    require(m.form_residual() < 1e-6, "DomainError", "matrix does not preserve the form");
    const double tol = 1e-9;
    if (m.det() > 0) {
        double tr = m.trace();
        require(tr > 3.0 + tol, "NotHyperbolic",
                "orientation-preserving isometry with trace <= 3 (elliptic or parabolic)");
        return std::acosh((tr - 1.0) / 2.0);
    }
    // Glide reflection: the square is a translation of twice the length.
    Isometry sq = m * m;
    double tr = sq.trace();
    require(tr > 3.0 + tol, "NotHyperbolic", "orientation-reversing isometry is a pure reflection");
    return std::acosh((tr - 1.0) / 2.0) / 2.0;
}

} // namespace forge
