#pragma once

#include <vector>

namespace ebm {

// Square dense real matrix, row-major. Orders stay small (a few dozen), so
// everything is plain O(n^3)-or-less loops with no blocking.
class DenseMatrix {
public:
    DenseMatrix() = default;
    explicit DenseMatrix(int order, double fill = 0.0)
        : order_(order), data_(static_cast<size_t>(order) * order, fill) {}

    static DenseMatrix identity(int order);

    int order() const { return order_; }

    double& operator()(int i, int j) { return data_[static_cast<size_t>(i) * order_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * order_ + j]; }

    const std::vector<double>& data() const { return data_; }

    double frobenius_norm() const;
    double max_abs() const;
    // max_ij |a_ij - a_ji| <= rel_tol * max_abs()
    bool is_symmetric(double rel_tol) const;
    DenseMatrix transposed() const;

    DenseMatrix& operator+=(const DenseMatrix& other);
    DenseMatrix& operator-=(const DenseMatrix& other);
    DenseMatrix& operator*=(double s);

    std::vector<double> apply(const std::vector<double>& x) const;

    friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
    friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
    friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
    friend DenseMatrix operator*(DenseMatrix a, double s) { return a *= s; }
    friend DenseMatrix operator*(double s, DenseMatrix a) { return a *= s; }

private:
    int order_ = 0;
    std::vector<double> data_;
};

} // namespace ebm
