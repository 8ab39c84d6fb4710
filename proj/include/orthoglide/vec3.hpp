#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace orthoglide {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    static constexpr Vec3 zero() { return {0.0, 0.0, 0.0}; }
    static constexpr Vec3 unit_x() { return {1.0, 0.0, 0.0}; }
    static constexpr Vec3 unit_y() { return {0.0, 1.0, 0.0}; }
    static constexpr Vec3 unit_z() { return {0.0, 0.0, 1.0}; }

    constexpr double operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }
    double& operator[](std::size_t i) { return i == 0 ? x : (i == 1 ? y : z); }

    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr bool operator==(const Vec3& o) const = default;

    constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    constexpr Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    constexpr double squared_norm() const { return dot(*this); }
    double max_abs() const {
        return std::fmax(std::fabs(x), std::fmax(std::fabs(y), std::fabs(z)));
    }
    bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

/// 3x3 matrix stored as rows.
struct Mat3 {
    std::array<Vec3, 3> row{};

    static constexpr Mat3 identity() {
        return {{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}}};
    }
    static constexpr Mat3 diagonal(const Vec3& d) {
        return {{Vec3{d.x, 0, 0}, Vec3{0, d.y, 0}, Vec3{0, 0, d.z}}};
    }
    static constexpr Mat3 from_rows(const Vec3& r0, const Vec3& r1, const Vec3& r2) {
        return {{r0, r1, r2}};
    }

    constexpr double operator()(std::size_t i, std::size_t j) const { return row[i][j]; }
    double& operator()(std::size_t i, std::size_t j) { return row[i][j]; }

    constexpr Vec3 col(std::size_t j) const { return {row[0][j], row[1][j], row[2][j]}; }

    constexpr Vec3 operator*(const Vec3& v) const {
        return {row[0].dot(v), row[1].dot(v), row[2].dot(v)};
    }
    constexpr Mat3 operator*(const Mat3& m) const {
        Mat3 r;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                r(i, j) = row[i].dot(m.col(j));
        return r;
    }
    constexpr Mat3 operator-(const Mat3& m) const {
        Mat3 r;
        for (std::size_t i = 0; i < 3; ++i) r.row[i] = row[i] - m.row[i];
        return r;
    }
    constexpr Mat3 transposed() const {
        return from_rows(col(0), col(1), col(2));
    }

    constexpr double det() const {
        return row[0].dot(row[1].cross(row[2]));
    }

    /// Adjugate (transposed cofactor matrix); inverse = adjugate / det.
    constexpr Mat3 adjugate() const {
        const Vec3 c0 = row[1].cross(row[2]);
        const Vec3 c1 = row[2].cross(row[0]);
        const Vec3 c2 = row[0].cross(row[1]);
        // adj columns are the row cross products
        return from_rows(Vec3{c0.x, c1.x, c2.x}, Vec3{c0.y, c1.y, c2.y}, Vec3{c0.z, c1.z, c2.z});
    }

    double max_abs() const {
        return std::fmax(row[0].max_abs(), std::fmax(row[1].max_abs(), row[2].max_abs()));
    }
    bool finite() const { return row[0].finite() && row[1].finite() && row[2].finite(); }
};

/// Gram matrix M^T M (symmetric).
constexpr Mat3 gram(const Mat3& m) {
    Mat3 g;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            g(i, j) = m.col(i).dot(m.col(j));
    return g;
}

}  // namespace orthoglide
