#include "orthoglide/linalg3.hpp"

#include <algorithm>
#include <cmath>

namespace orthoglide {

namespace {

// One Jacobi rotation zeroing S(p,q); accumulates into V columns.
void jacobi_rotate(Mat3& s, Mat3& v, int p, int q) {
    const double spq = s(p, q);
    if (spq == 0.0) return;
    const double theta = (s(q, q) - s(p, p)) / (2.0 * spq);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double sn = t * c;

    const double spp = s(p, p), sqq = s(q, q);
    s(p, p) = spp - t * spq;
    s(q, q) = sqq + t * spq;
    s(p, q) = 0.0;
    s(q, p) = 0.0;
    const int r = 3 - p - q;  // remaining index
    const double srp = s(r, p), srq = s(r, q);
    s(r, p) = c * srp - sn * srq;
    s(p, r) = s(r, p);
    s(r, q) = sn * srp + c * srq;
    s(q, r) = s(r, q);

    for (int i = 0; i < 3; ++i) {
        const double vip = v(i, p), viq = v(i, q);
        v(i, p) = c * vip - sn * viq;
        v(i, q) = sn * vip + c * viq;
    }
}

double off_diag_sq(const Mat3& s) {
    return s(0, 1) * s(0, 1) + s(0, 2) * s(0, 2) + s(1, 2) * s(1, 2);
}

}  // namespace

SymEigen sym_eigen3(const Mat3& sym) {
    Mat3 s = sym;
    Mat3 v = Mat3::identity();
    const double scale = std::fmax(s.max_abs(), 1e-300);
    for (int sweep = 0; sweep < 30; ++sweep) {
        if (std::sqrt(off_diag_sq(s)) <= 1e-15 * scale) break;
        jacobi_rotate(s, v, 0, 1);
        jacobi_rotate(s, v, 0, 2);
        jacobi_rotate(s, v, 1, 2);
    }
    std::array<int, 3> idx = {0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return s(a, a) > s(b, b); });
    SymEigen out;
    for (int k = 0; k < 3; ++k) {
        out.values[k] = s(idx[k], idx[k]);
        out.vectors[k] = v.col(idx[k]);
    }
    return out;
}

std::array<double, 3> singular_values3(const Mat3& m) {
    // Work on columns of w; rotations from the right orthogonalize them.
    Mat3 w = m;
    const double scale = std::fmax(w.max_abs(), 1e-300);
    const double tol = 1e-15;
    for (int sweep = 0; sweep < 30; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                const Vec3 wp = w.col(p), wq = w.col(q);
                const double alpha = wp.squared_norm();
                const double beta = wq.squared_norm();
                const double gamma = wp.dot(wq);
                if (std::fabs(gamma) <= tol * std::sqrt(alpha * beta) ||
                    std::fabs(gamma) <= tol * tol * scale * scale)
                    continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t =
                    (zeta >= 0.0 ? 1.0 : -1.0) / (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = c * t;
                for (int i = 0; i < 3; ++i) {
                    const double a = w(i, p), b = w(i, q);
                    w(i, p) = c * a - sn * b;
                    w(i, q) = sn * a + c * b;
                }
            }
        }
        if (!rotated) break;
    }
    std::array<double, 3> sv = {w.col(0).norm(), w.col(1).norm(), w.col(2).norm()};
    std::sort(sv.begin(), sv.end(), [](double a, double b) { return a > b; });
    return sv;
}

bool solve3(const Mat3& a, const Vec3& b, Vec3& x) {
    double m[3][4] = {{a(0, 0), a(0, 1), a(0, 2), b.x},
                      {a(1, 0), a(1, 1), a(1, 2), b.y},
                      {a(2, 0), a(2, 1), a(2, 2), b.z}};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
        if (m[piv][col] == 0.0) return false;
        if (piv != col) std::swap(m[piv], m[col]);
        for (int r = col + 1; r < 3; ++r) {
            const double f = m[r][col] / m[col][col];
            for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
        }
    }
    for (int r = 2; r >= 0; --r) {
        double s = m[r][3];
        for (int c = r + 1; c < 3; ++c) s -= m[r][c] * (c == 0 ? x.x : (c == 1 ? x.y : x.z));
        if (m[r][r] == 0.0) return false;
        (r == 0 ? x.x : (r == 1 ? x.y : x.z)) = s / m[r][r];
    }
    return true;
}

}  // namespace orthoglide
