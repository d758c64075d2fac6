#include "dimers/theta.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace dimers {

PeriodMatrix::PeriodMatrix(int g, CVec entries) : g_(g), b_(std::move(entries)) {
    if (g < 0 || b_.size() != static_cast<size_t>(g * g))
        fail(ErrorCode::invalid_argument, "period matrix has wrong size");
    if (g == 0) return;
    Eigen::MatrixXd im(g, g);
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) im(i, j) = 0.5 * ((*this)(i, j).imag() + (*this)(j, i).imag());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(im, Eigen::EigenvaluesOnly);
    lambda_min_ = es.eigenvalues().minCoeff();
}

ValidationReport PeriodMatrix::validate(double tol) const {
    ValidationReport rep;
    for (int i = 0; i < g_; ++i) {
        for (int j = 0; j < g_; ++j) {
            const cplx v = (*this)(i, j);
            if (j > i && std::abs(v - (*this)(j, i)) >= tol * (1.0 + std::abs(v)))
                rep.push_back({"period matrix not symmetric", {i + 1, j + 1}});
            if (std::abs(v.real()) >= tol) rep.push_back({"period matrix entry has nonzero real part", {i + 1, j + 1}});
        }
    }
    if (g_ > 0 && !(lambda_min_ > 0.0)) rep.push_back({"imaginary part of period matrix not positive definite", {}});
    return rep;
}

int Characteristic::parity() const {
    double s = 0.0;
    for (size_t i = 0; i < delta1.size() && i < delta2.size(); ++i) s += delta1[i] * delta2[i];
    const long p = std::lround(4.0 * s);
    return static_cast<int>(((p % 2) + 2) % 2);
}

Characteristic Characteristic::odd_default(int g, int index) {
    if (g < 1) fail(ErrorCode::invalid_argument, "odd characteristics need genus >= 1");
    if (index < 0 || index >= g) fail(ErrorCode::invalid_argument, "characteristic index out of range");
    Characteristic c{RVec(g, 0.0), RVec(g, 0.0)};
    c.delta1[index] = 0.5;
    c.delta2[index] = 0.5;
    return c;
}

namespace {

void check_tol(double tol) {
    if (!(tol > 0.0)) fail(ErrorCode::invalid_argument, "theta tolerance must be positive");
}

void check_matrix(const PeriodMatrix& B) {
    if (B.genus() > 0 && !(B.lambda_min() > 0.0))
        fail(ErrorCode::invalid_argument, "period matrix imaginary part is not positive definite");
}

// number of lattice points on the shell |m|_inf = k
double shell_count(int g, int k) {
    if (k == 0) return 1.0;
    return std::pow(2.0 * k + 1.0, g) - std::pow(2.0 * k - 1.0, g);
}

double im_norm(const CVec& z) {
    double s = 0.0;
    for (const auto& v : z) s += v.imag() * v.imag();
    return std::sqrt(s);
}

}  // namespace

int truncation_radius(const PeriodMatrix& B, double im_z_bound, double tol) {
    check_tol(tol);
    const int g = B.genus();
    if (g == 0) return 0;
    check_matrix(B);
    const double lam = B.lambda_min();
    const double c = 2.0 * kPi * std::max(0.0, im_z_bound) * std::sqrt(static_cast<double>(g));
    // |term| <= exp(-pi lam |m|^2 + 2 pi |Im z| |m|) and |m|_2 >= k on the shell k, |m|_2 <= sqrt(g) k
    auto term_bound = [&](int k) {
        const double kk = static_cast<double>(k);
        return shell_count(g, k) * std::exp(-kPi * lam * kk * kk + c * kk);
    };
    for (int R = 0; R < 10000; ++R) {
        double tail = 0.0;
        // sum the tail until the terms are negligible relative to tol and decreasing
        for (int k = R + 1;; ++k) {
            const double t = term_bound(k);
            tail += t;
            if (kPi * lam * k > c && t < 1e-3 * tol * 1e-3) break;
            if (k > R + 100000) break;
        }
        if (tail < tol) return R;
    }
    fail(ErrorCode::numeric, "theta truncation radius exceeds limit");
}

cplx theta_box(const CVec& z, const PeriodMatrix& B, int R) {
    const int g = B.genus();
    if (static_cast<int>(z.size()) != g) fail(ErrorCode::invalid_argument, "theta argument has wrong dimension");
    if (g == 0) return {1.0, 0.0};
    std::vector<int> m(g, -R);
    // Sum shells from the outside in for slightly better rounding; order is fixed so the result is reproducible.
    cplx total{0.0, 0.0};
    while (true) {
        cplx q{0.0, 0.0};
        for (int i = 0; i < g; ++i) {
            cplx row{0.0, 0.0};
            for (int j = 0; j < g; ++j) row += B(i, j) * static_cast<double>(m[j]);
            q += static_cast<double>(m[i]) * (0.5 * row + z[i]);
        }
        total += std::exp(kTwoPiI * q);
        int k = 0;
        while (k < g && m[k] == R) m[k++] = -R;
        if (k == g) break;
        ++m[k];
    }
    return total;
}

cplx theta(const CVec& z, const PeriodMatrix& B, double tol) {
    check_tol(tol);
    check_matrix(B);
    if (static_cast<int>(z.size()) != B.genus()) fail(ErrorCode::invalid_argument, "theta argument has wrong dimension");
    if (B.genus() == 0) return {1.0, 0.0};
    return theta_box(z, B, truncation_radius(B, im_norm(z), tol));
}

cplx theta(const RVec& x, const PeriodMatrix& B, double tol) {
    CVec z(x.begin(), x.end());
    return theta(z, B, tol);
}

cplx theta_char(const Characteristic& delta, const CVec& z, const PeriodMatrix& B, double tol) {
    const int g = B.genus();
    if (static_cast<int>(delta.delta1.size()) != g || static_cast<int>(delta.delta2.size()) != g)
        fail(ErrorCode::invalid_argument, "characteristic has wrong dimension");
    if (static_cast<int>(z.size()) != g) fail(ErrorCode::invalid_argument, "theta argument has wrong dimension");
    if (g == 0) return theta(z, B, tol);
    CVec shifted(g);
    cplx expo{0.0, 0.0};
    for (int i = 0; i < g; ++i) {
        cplx bd{0.0, 0.0};
        for (int j = 0; j < g; ++j) bd += B(i, j) * delta.delta1[j];
        shifted[i] = z[i] + delta.delta2[i] + bd;
        expo += 0.5 * bd * delta.delta1[i] + (z[i] + delta.delta2[i]) * delta.delta1[i];
    }
    return std::exp(kTwoPiI * expo) * theta(shifted, B, tol);
}

cplx theta_char(const Characteristic& delta, const RVec& x, const PeriodMatrix& B, double tol) {
    CVec z(x.begin(), x.end());
    return theta_char(delta, z, B, tol);
}

}  // namespace dimers
