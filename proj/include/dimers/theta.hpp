#pragma once

#include <vector>

#include "dimers/common.hpp"

namespace dimers {

// g x g period matrix stored row-major.
class PeriodMatrix {
public:
    PeriodMatrix() = default;
    PeriodMatrix(int g, CVec entries);

    int genus() const { return g_; }
    cplx operator()(int i, int j) const { return b_[static_cast<size_t>(i * g_ + j)]; }
    const CVec& entries() const { return b_; }

    // Smallest eigenvalue of Im B.
    double lambda_min() const { return lambda_min_; }

    // Checks symmetry, vanishing real part and positivity of Im B.
    ValidationReport validate(double tol = 1e-9) const;

private:
    int g_ = 0;
    CVec b_;
    double lambda_min_ = 0.0;
};

struct Characteristic {
    RVec delta1;
    RVec delta2;

    // 4<d1,d2> mod 2
    int parity() const;
    static Characteristic odd_default(int g, int index = 0);
};

int truncation_radius(const PeriodMatrix& B, double im_z_bound, double tol);

// Plain box sum over |m|_inf <= R.
cplx theta_box(const CVec& z, const PeriodMatrix& B, int R);

cplx theta(const CVec& z, const PeriodMatrix& B, double tol = 1e-12);
cplx theta(const RVec& x, const PeriodMatrix& B, double tol = 1e-12);

cplx theta_char(const Characteristic& delta, const CVec& z, const PeriodMatrix& B, double tol = 1e-12);
cplx theta_char(const Characteristic& delta, const RVec& x, const PeriodMatrix& B, double tol = 1e-12);

}  // namespace dimers
