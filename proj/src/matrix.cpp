#include "lffrl/matrix.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>

namespace lffrl {

namespace {

using EigenMap = Eigen::Map<
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using ConstEigenMap = Eigen::Map<
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

ConstEigenMap map(const Matrix& m) {
    return ConstEigenMap(m.data.data(), static_cast<Eigen::Index>(m.rows),
                         static_cast<Eigen::Index>(m.cols));
}

EigenMap map(Matrix& m) {
    return EigenMap(m.data.data(), static_cast<Eigen::Index>(m.rows),
                    static_cast<Eigen::Index>(m.cols));
}

}  // namespace

Matrix::Matrix(std::size_t r, std::size_t c, std::vector<double> values)
    : rows(r), cols(c), data(std::move(values)) {
    check(data.size() == rows * cols, "Matrix: data length must equal rows*cols");
}

bool Matrix::all_finite() const {
    return std::all_of(data.begin(), data.end(),
                       [](double v) { return std::isfinite(v); });
}

bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows == b.rows && a.cols == b.cols && a.data == b.data;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    check(a.cols == b.rows, "matmul: inner dimensions differ");
    Matrix out(a.rows, b.cols);
    map(out).noalias() = map(a) * map(b);
    return out;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    check(a.cols == b.cols, "matmul_nt: inner dimensions differ");
    Matrix out(a.rows, b.rows);
    map(out).noalias() = map(a) * map(b).transpose();
    return out;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    check(a.rows == b.rows, "matmul_tn: inner dimensions differ");
    Matrix out(a.cols, b.cols);
    map(out).noalias() = map(a).transpose() * map(b);
    return out;
}

Matrix transpose(const Matrix& a) {
    Matrix out(a.cols, a.rows);
    map(out) = map(a).transpose();
    return out;
}

std::vector<double> singular_values(const Matrix& a) {
    if (a.empty()) return {};
    // Work on the thinner orientation so columns are what get orthogonalized.
    Matrix w = a.cols <= a.rows ? a : transpose(a);
    const std::size_t n = w.rows, m = w.cols;

    auto col_dot = [&](std::size_t p, std::size_t q) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += w(i, p) * w(i, q);
        return s;
    };

    const double tol = 1e-14;
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < m; ++p) {
            for (std::size_t q = p + 1; q < m; ++q) {
                double app = col_dot(p, p), aqq = col_dot(q, q), apq = col_dot(p, q);
                if (std::abs(apq) <= tol * std::sqrt(app * aqq) + 1e-300) continue;
                rotated = true;
                double theta = 0.5 * std::atan2(2.0 * apq, app - aqq);
                double c = std::cos(theta), s = std::sin(theta);
                for (std::size_t i = 0; i < n; ++i) {
                    double vp = w(i, p), vq = w(i, q);
                    w(i, p) = c * vp + s * vq;
                    w(i, q) = -s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sv(m);
    for (std::size_t p = 0; p < m; ++p) sv[p] = std::sqrt(std::max(col_dot(p, p), 0.0));
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return sv;
}

}  // namespace lffrl
