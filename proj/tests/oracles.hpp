// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls into the library's series code.
#pragma once

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
constexpr double pi = 3.14159265358979323846;

// One handle at A = 0.25 + 0.9i, mu = 0.015, points {-2.4, -0.4, 0.4, 2.4}.
struct Gen {
    cplx A;
    double mu;
};
inline const std::vector<Gen> genus1 = {{{0.25, 0.9}, 0.015}};
inline const std::vector<Gen> genus2 = {{{1.2, 1.3}, 0.08}, {{-0.4, 0.6}, 0.03}};

// Imaginary parts of the genus-2 period matrix from period_matrix(genus2, 12) below (60 s to recompute).
inline constexpr double genus2_B11 = 0.396487660145264;
inline constexpr double genus2_B12 = 0.113039438222612;
inline constexpr double genus2_B22 = 0.540819241168368;

struct Mat {
    cplx a, b, c, d;
    Mat operator*(const Mat& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    cplx operator()(cplx z) const { return (a * z + b) / (c * z + d); }
    Mat scaled() const {
        const double s = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
        return {a / s, b / s, c / s, d / s};
    }
};

// The map with (s(z) - conj A)/(s(z) - A) = mu^e (z - conj A)/(z - A).
inline Mat generator(const Gen& g, int e) {
    const cplx A = g.A, B = std::conj(g.A);
    const double k = std::pow(g.mu, e);
    // T = [[1, -B], [1, -A]], inverse up to scale [[-A, B], [-1, 1]]
    const Mat T{1.0, -B, 1.0, -A};
    const Mat Ti{-A, B, -1.0, 1.0};
    const Mat D{k, 0.0, 0.0, 1.0};
    return (Ti * D * T).scaled();
}

// Visits every reduced word of total exponent mass <= L as (matrix, first generator, last generator).
// Generators are 0-based; the identity is visited with first = last = -1.
inline void for_each_word(const std::vector<Gen>& gens, int L,
                          const std::function<void(const Mat&, int first, int last)>& f) {
    const int g = static_cast<int>(gens.size());
    std::function<void(const Mat&, int, int, int)> rec = [&](const Mat& M, int first, int last, int mass) {
        f(M, first, last);
        for (int n = 0; n < g; ++n) {
            if (n == last) continue;
            for (int e = 1; mass + e <= L; ++e)
                for (int s : {1, -1}) rec((M * generator(gens[static_cast<size_t>(n)], s * e)).scaled(), first < 0 ? n : first, n, mass + e);
        }
    };
    rec(Mat{1.0, 0.0, 0.0, 1.0}, -1, -1, 0);
}

// Reduced words of mass exactly k: letters (generator, nonzero exponent), no two adjacent letters share a generator.
inline std::uint64_t count_reduced_words(int g, int k) {
    // ways[m][last used?] by dynamic programming over the mass
    std::vector<std::uint64_t> ending(static_cast<size_t>(k + 1), 0);  // words of mass m, counted per fixed last generator
    std::vector<std::uint64_t> total(static_cast<size_t>(k + 1), 0);
    total[0] = 1;
    for (int m = 1; m <= k; ++m) {
        std::uint64_t per_gen = 0;
        for (int e = 1; e <= m; ++e) {
            // append a letter of generator n with exponent +-e to a word not ending in n
            const std::uint64_t prev = (m - e == 0) ? 1 : total[static_cast<size_t>(m - e)] - ending[static_cast<size_t>(m - e)];
            per_gen += 2 * prev;
        }
        ending[static_cast<size_t>(m)] = per_gen;
        total[static_cast<size_t>(m)] = per_gen * static_cast<std::uint64_t>(g);
    }
    return total[static_cast<size_t>(k)];
}

// Holomorphic differential omega_n(z) (without dz) as a sum over G / <sigma_n>.
struct DifferentialSeries {
    std::vector<std::vector<std::pair<cplx, cplx>>> poles;  // per n: (image of conj A_n, image of A_n)

    DifferentialSeries(const std::vector<Gen>& gens, int L) {
        poles.resize(gens.size());
        for_each_word(gens, L, [&](const Mat& M, int, int last) {
            for (size_t n = 0; n < gens.size(); ++n) {
                if (last == static_cast<int>(n)) continue;
                poles[n].emplace_back(M(std::conj(gens[n].A)), M(gens[n].A));
            }
        });
    }
    cplx operator()(size_t n, cplx z) const {
        cplx s = 0.0;
        for (const auto& [b, a] : poles[n]) s += 1.0 / (z - b) - 1.0 / (z - a);
        return s / cplx(0.0, 2.0 * pi);
    }
    // Integral along the straight segment from p to q.
    cplx integrate(size_t n, cplx p, cplx q) const {
        auto f = [&](double t) { return (*this)(n, p + t * (q - p)) * (q - p); };
        using Q = boost::math::quadrature::gauss<double, 30>;
        cplx total = 0.0;
        const int pieces = 16;
        for (int k = 0; k < pieces; ++k) total += Q::integrate(f, double(k) / pieces, double(k + 1) / pieces);
        return total;
    }
};

// Upper hole circle of a generator: centre and radius.
inline std::pair<cplx, double> hole(const Gen& g) {
    const cplx c = (g.A - g.mu * std::conj(g.A)) / (1.0 - g.mu);
    const double r = 2.0 * std::sqrt(g.mu) * g.A.imag() / (1.0 - g.mu);
    return {c, r};
}

// B_nm from the b-cycle: the segment from the lowest point P of hole m to its mirror image,
// which the generator sigma_m maps P to.
inline std::vector<cplx> period_matrix(const std::vector<Gen>& gens, int L) {
    const DifferentialSeries w(gens, L);
    const size_t g = gens.size();
    std::vector<cplx> B(g * g);
    for (size_t m = 0; m < g; ++m) {
        const auto [c, r] = hole(gens[m]);
        const cplx P = c - cplx(0.0, r);
        for (size_t n = 0; n < g; ++n) B[n * g + m] = w.integrate(n, P, std::conj(P));
    }
    return B;
}

// Direct theta sum over a box, one-dimensional and two-dimensional versions.
inline cplx theta1(cplx z, cplx B, int R = 40) {
    cplx s = 0.0;
    for (int k = -R; k <= R; ++k) s += std::exp(cplx(0.0, pi) * (double(k * k) * B + 2.0 * double(k) * z));
    return s;
}

inline double total_variation(const std::map<std::vector<std::uint8_t>, double>& p,
                              const std::map<std::vector<std::uint8_t>, double>& q) {
    double tv = 0.0;
    for (const auto& [k, v] : p) {
        auto it = q.find(k);
        tv += std::abs(v - (it == q.end() ? 0.0 : it->second));
    }
    for (const auto& [k, v] : q)
        if (!p.count(k)) tv += std::abs(v);
    return 0.5 * tv;
}

}  // namespace oracle
