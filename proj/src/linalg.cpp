#include "mfspin/linalg.hpp"
#include "mfspin/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <utility>

namespace mfspin {

Mat identity(std::size_t k) {
    Mat a(k, Vec(k, 0.0));
    for (std::size_t i = 0; i < k; ++i) a[i][i] = 1.0;
    return a;
}

Mat zeros(std::size_t rows, std::size_t cols) { return Mat(rows, Vec(cols, 0.0)); }

Mat diag(const Vec& d) {
    Mat a(d.size(), Vec(d.size(), 0.0));
    for (std::size_t i = 0; i < d.size(); ++i) a[i][i] = d[i];
    return a;
}

Mat transpose(const Mat& a) {
    const std::size_t rows = a.size();
    const std::size_t cols = rows == 0 ? 0 : a[0].size();
    Mat t(cols, Vec(rows, 0.0));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) t[j][i] = a[i][j];
    return t;
}

Mat matmul(const Mat& a, const Mat& b) {
    const std::size_t rows = a.size();
    const std::size_t inner = b.size();
    const std::size_t cols = inner == 0 ? 0 : b[0].size();
    Mat c(rows, Vec(cols, 0.0));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t l = 0; l < inner; ++l) {
            const double ail = a[i][l];
            for (std::size_t j = 0; j < cols; ++j) c[i][j] += ail * b[l][j];
        }
    return c;
}

Vec matvec(const Mat& a, const Vec& x) {
    Vec y(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
    return y;
}

double max_abs(const Mat& a) {
    double m = 0.0;
    for (const auto& row : a)
        for (double v : row) m = std::max(m, std::abs(v));
    return m;
}

double max_abs_diff(const Mat& a, const Mat& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j)
            m = std::max(m, std::abs(a[i][j] - b[i][j]));
    return m;
}

double max_abs_diff(const Vec& a, const Vec& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double frobenius_distance(const Mat& a, const Mat& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) {
            const double d = a[i][j] - b[i][j];
            s += d * d;
        }
    return std::sqrt(s);
}

double euclidean_distance(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double infinity_norm(const Mat& a) {
    double m = 0.0;
    for (const auto& row : a) {
        double r = 0.0;
        for (double v : row) r += std::abs(v);
        m = std::max(m, r);
    }
    return m;
}

Mat gauss_jordan_inverse(Mat a, double rel_pivot_tol) {
    const std::size_t k = a.size();
    double scale = 0.0;
    for (const auto& row : a) {
        double r = 0.0;
        for (double v : row) r += std::abs(v);
        scale = std::max(scale, r);
    }
    if (scale == 0.0) throw NumericalError("gauss_jordan_inverse: zero matrix");

    Mat inv = identity(k);
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < k; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < rel_pivot_tol * scale)
            throw NumericalError("gauss_jordan_inverse: singular matrix (pivot below threshold)");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        const double d = a[col][col];
        for (std::size_t j = 0; j < k; ++j) {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for (std::size_t r = 0; r < k; ++r) {
            if (r == col) continue;
            const double f = a[r][col];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < k; ++j) {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

Vec solve_linear(Mat a, Vec b, double rel_pivot_tol) {
    const Mat inv = gauss_jordan_inverse(std::move(a), rel_pivot_tol);
    return matvec(inv, b);
}

Vec symmetric_eigenvalues(Mat a) {
    const std::size_t k = a.size();
    if (k == 1) return {a[0][0]};
    // cyclic Jacobi; k is tiny so convergence is quick
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j) off += a[i][j] * a[i][j];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < k; ++p) {
            for (std::size_t q = p + 1; q < k; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t i = 0; i < k; ++i) {
                    const double aip = a[i][p], aiq = a[i][q];
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < k; ++i) {
                    const double api = a[p][i], aqi = a[q][i];
                    a[p][i] = c * api - s * aqi;
                    a[q][i] = s * api + c * aqi;
                }
            }
        }
    }
    Vec ev(k);
    for (std::size_t i = 0; i < k; ++i) ev[i] = a[i][i];
    std::sort(ev.begin(), ev.end());
    return ev;
}

double spectral_radius_pjd(const Vec& p, const Mat& j, const Vec& d) {
    const std::size_t k = p.size();
    Vec b(k);
    for (std::size_t i = 0; i < k; ++i) b[i] = std::sqrt(p[i] * d[i]);
    Mat sym(k, Vec(k, 0.0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t l = 0; l < k; ++l) sym[i][l] = b[i] * j[i][l] * b[l];
    double rad = 0.0;
    for (double ev : symmetric_eigenvalues(std::move(sym))) rad = std::max(rad, std::abs(ev));
    return rad;
}

} // namespace mfspin
