#pragma once

#include <optional>
#include <vector>

#include "dimers/common.hpp"

namespace dimers {

// Generator in U2 form: fixed points A and conj(A), real multiplier mu.
struct Generator {
    cplx A;
    double mu = 0.0;
};

struct SchottkyData {
    std::vector<Generator> generators;
    int genus() const { return static_cast<int>(generators.size()); }
};

// A point on the Riemann sphere.
struct ExtComplex {
    cplx z{0.0, 0.0};
    bool infinite = false;

    static ExtComplex inf() { return {cplx{}, true}; }
};

struct Mobius {
    cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

    static Mobius identity() { return {}; }
    cplx det() const { return a * d - b * c; }
    Mobius operator*(const Mobius& o) const;
    Mobius inverse() const;
    // Scaled so the largest entry has modulus one.
    Mobius normalized() const;
    cplx apply(cplx z) const { return (a * z + b) / (c * z + d); }
    ExtComplex apply(const ExtComplex& z) const;
    // Maps with the same projective class compare equal.
    bool projectively_equal(const Mobius& o, double tol) const;
};

ExtComplex mobius_apply(const Mobius& map, const ExtComplex& z);

struct Letter {
    int gen = 1;  // 1-based generator index
    int exp = 1;  // nonzero
};

struct GroupWord {
    std::vector<Letter> letters;

    bool is_identity() const { return letters.empty(); }
    int mass() const;
    bool is_reduced() const;
};

enum class CosetMode { full_group, right_coset, double_coset, double_coset_excluding_identity };

struct CosetFilter {
    CosetMode mode = CosetMode::full_group;
    int m = 0;
    int n = 0;

    static CosetFilter full() { return {}; }
    static CosetFilter right(int n) { return {CosetMode::right_coset, 0, n}; }
    static CosetFilter double_coset(int m, int n) { return {CosetMode::double_coset, m, n}; }
    static CosetFilter double_coset_excluding_identity(int m, int n) {
        return {CosetMode::double_coset_excluding_identity, m, n};
    }
    bool accepts(const GroupWord& w) const;
};

struct WordMap {
    GroupWord word;
    Mobius map;
};

struct Circle {
    cplx center;
    double radius = 0.0;
};

ValidationReport validate_u2(const SchottkyData& data);

// Matrix of sigma_n^exponent (n is 1-based).
Mobius generator_map(const SchottkyData& data, int n, int exponent);

Mobius word_map(const SchottkyData& data, const GroupWord& w);

// Reduced words of total exponent mass <= max_letters accepted by the filter,
// ordered by mass and then lexicographically.
std::vector<WordMap> enumerate_words(const SchottkyData& data, int max_letters, const CosetFilter& filter);

// Fixed circle of z -> sigma_n(conj z); it surrounds B_n = conj(A_n).
Circle oval_circle(const SchottkyData& data, int n);

// Fixed circle of z -> sigma_n^{-1}(conj z): the conjugate hole bounding the upper half-domain.
Circle hole_circle(const SchottkyData& data, int n);

// Euclidean radius and centre of the disc bounded by hole_circle, from the closed form.
Circle hole_disc_closed_form(const Generator& gen);

}  // namespace dimers
