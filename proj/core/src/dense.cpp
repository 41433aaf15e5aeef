#include "ebm/dense.hpp"

#include <algorithm>
#include <cmath>

#include "ebm/errors.hpp"

namespace ebm {

DenseMatrix DenseMatrix::identity(int order) {
    DenseMatrix m(order);
    for (int i = 0; i < order; ++i) m(i, i) = 1.0;
    return m;
}

double DenseMatrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
}

double DenseMatrix::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

bool DenseMatrix::is_symmetric(double rel_tol) const {
    double scale = max_abs();
    for (int i = 0; i < order_; ++i)
        for (int j = i + 1; j < order_; ++j)
            if (std::abs((*this)(i, j) - (*this)(j, i)) > rel_tol * scale) return false;
    return true;
}

DenseMatrix DenseMatrix::transposed() const {
    DenseMatrix t(order_);
    for (int i = 0; i < order_; ++i)
        for (int j = 0; j < order_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
    if (other.order_ != order_) fail(errc::bad_input, "matrix order mismatch");
    for (size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) {
    if (other.order_ != order_) fail(errc::bad_input, "matrix order mismatch");
    for (size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
}

DenseMatrix& DenseMatrix::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

std::vector<double> DenseMatrix::apply(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != order_) fail(errc::bad_input, "vector length mismatch");
    std::vector<double> y(order_, 0.0);
    for (int i = 0; i < order_; ++i) {
        double s = 0.0;
        for (int j = 0; j < order_; ++j) s += (*this)(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.order_ != b.order_) fail(errc::bad_input, "matrix order mismatch");
    int m = a.order_;
    DenseMatrix c(m);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k) {
            double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < m; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

} // namespace ebm
