#include "dimers/schottky.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

namespace dimers {

Mobius Mobius::operator*(const Mobius& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

Mobius Mobius::inverse() const { return {d, -b, -c, a}; }

Mobius Mobius::normalized() const {
    const double s = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
    if (s == 0.0) return *this;
    return {a / s, b / s, c / s, d / s};
}

ExtComplex Mobius::apply(const ExtComplex& z) const {
    if (z.infinite) {
        if (c == cplx{}) return ExtComplex::inf();
        return {a / c, false};
    }
    const cplx den = c * z.z + d;
    if (den == cplx{}) return ExtComplex::inf();
    return {(a * z.z + b) / den, false};
}

bool Mobius::projectively_equal(const Mobius& o, double tol) const {
    const Mobius p = normalized();
    const Mobius q = o.normalized();
    // pick the largest entry of p to fix the scalar
    const cplx pe[4] = {p.a, p.b, p.c, p.d};
    const cplx qe[4] = {q.a, q.b, q.c, q.d};
    int k = 0;
    for (int i = 1; i < 4; ++i)
        if (std::abs(pe[i]) > std::abs(pe[k])) k = i;
    if (std::abs(qe[k]) == 0.0) return false;
    const cplx lam = pe[k] / qe[k];
    for (int i = 0; i < 4; ++i)
        if (std::abs(pe[i] - lam * qe[i]) > tol) return false;
    return true;
}

ExtComplex mobius_apply(const Mobius& map, const ExtComplex& z) { return map.apply(z); }

int GroupWord::mass() const {
    int s = 0;
    for (const auto& l : letters) s += std::abs(l.exp);
    return s;
}

bool GroupWord::is_reduced() const {
    for (size_t i = 0; i < letters.size(); ++i) {
        if (letters[i].exp == 0) return false;
        if (i > 0 && letters[i].gen == letters[i - 1].gen) return false;
    }
    return true;
}

bool CosetFilter::accepts(const GroupWord& w) const {
    switch (mode) {
        case CosetMode::full_group:
            return true;
        case CosetMode::right_coset:
            return w.is_identity() || w.letters.back().gen != n;
        case CosetMode::double_coset:
            return w.is_identity() || (w.letters.front().gen != m && w.letters.back().gen != n);
        case CosetMode::double_coset_excluding_identity:
            return !w.is_identity() && w.letters.front().gen != m && w.letters.back().gen != n;
    }
    return false;
}

ValidationReport validate_u2(const SchottkyData& data) {
    ValidationReport rep;
    const int g = data.genus();
    for (int i = 0; i < g; ++i) {
        const auto& G = data.generators[i];
        if (!(G.A.imag() > 0.0)) rep.push_back({"Im(A) must be positive", {i + 1}});
        if (!(G.mu > 0.0 && G.mu < 1.0)) rep.push_back({"multiplier mu must lie in (0,1)", {i + 1}});
    }
    for (int i = 0; i < g; ++i) {
        for (int j = i + 1; j < g; ++j) {
            const auto& Gi = data.generators[i];
            const auto& Gj = data.generators[j];
            if (!(Gi.A.imag() > 0.0 && Gj.A.imag() > 0.0)) continue;
            if (!(Gi.mu > 0.0 && Gi.mu < 1.0 && Gj.mu > 0.0 && Gj.mu < 1.0)) continue;
            const Circle ci = hole_disc_closed_form(Gi);
            const Circle cj = hole_disc_closed_form(Gj);
            if (!(std::abs(ci.center - cj.center) > ci.radius + cj.radius))
                rep.push_back({"disc-disjointness violated", {i + 1, j + 1}});
        }
    }
    return rep;
}

Circle hole_disc_closed_form(const Generator& gen) {
    const double mu = gen.mu;
    const cplx c = (gen.A - mu * std::conj(gen.A)) / (1.0 - mu);
    const double r = 2.0 * std::sqrt(mu) * gen.A.imag() / (1.0 - mu);
    return {c, r};
}

Mobius generator_map(const SchottkyData& data, int n, int exponent) {
    if (n < 1 || n > data.genus())
        fail(ErrorCode::invalid_argument, "generator index " + std::to_string(n) + " out of range");
    if (exponent == 0) return Mobius::identity();
    const auto& G = data.generators[n - 1];
    const cplx A = G.A;
    const cplx B = std::conj(A);
    const double mu = std::pow(G.mu, exponent);
    // sigma = T^{-1} diag(mu, 1) T with T(z) = (z - B)/(z - A)
    const Mobius T{1.0, -B, 1.0, -A};
    const Mobius M{mu, 0.0, 0.0, 1.0};
    return (T.inverse() * M * T).normalized();
}

Mobius word_map(const SchottkyData& data, const GroupWord& w) {
    Mobius m = Mobius::identity();
    for (const auto& l : w.letters) m = (m * generator_map(data, l.gen, l.exp)).normalized();
    return m;
}

namespace {

// letter order used for the lexicographic tie-break
std::tuple<int, int, int> letter_key(const Letter& l) { return {l.gen, std::abs(l.exp), l.exp < 0 ? 1 : 0}; }

bool word_less(const WordMap& x, const WordMap& y) {
    const int mx = x.word.mass(), my = y.word.mass();
    if (mx != my) return mx < my;
    const auto& a = x.word.letters;
    const auto& b = y.word.letters;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [](const Letter& p, const Letter& q) { return letter_key(p) < letter_key(q); });
}

}  // namespace

std::vector<WordMap> enumerate_words(const SchottkyData& data, int max_letters, const CosetFilter& filter) {
    const int g = data.genus();
    if (max_letters < 0) fail(ErrorCode::invalid_argument, "max_letters must be non-negative");
    auto check = [g](int idx) {
        if (idx < 1 || idx > g) fail(ErrorCode::invalid_argument, "coset filter index out of range");
    };
    switch (filter.mode) {
        case CosetMode::full_group: break;
        case CosetMode::right_coset: check(filter.n); break;
        default: check(filter.m); check(filter.n);
    }

    // powers[gen-1][e + L]
    std::vector<std::vector<Mobius>> powers(g, std::vector<Mobius>(2 * max_letters + 1));
    for (int i = 0; i < g; ++i)
        for (int e = -max_letters; e <= max_letters; ++e) powers[i][e + max_letters] = generator_map(data, i + 1, e);

    std::vector<WordMap> all;
    all.push_back({GroupWord{}, Mobius::identity()});
    // breadth-first expansion; every word of mass k extends words of smaller mass
    std::vector<WordMap> frontier = all;
    while (!frontier.empty()) {
        std::vector<WordMap> next;
        for (const auto& wm : frontier) {
            const int mass = wm.word.mass();
            const int last = wm.word.is_identity() ? 0 : wm.word.letters.back().gen;
            for (int i = 1; i <= g; ++i) {
                if (i == last) continue;
                for (int e = 1; mass + e <= max_letters; ++e) {
                    for (int s : {1, -1}) {
                        WordMap nw = wm;
                        nw.word.letters.push_back({i, s * e});
                        nw.map = (wm.map * powers[i - 1][s * e + max_letters]).normalized();
                        next.push_back(std::move(nw));
                    }
                }
            }
        }
        all.insert(all.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    std::vector<WordMap> out;
    for (auto& wm : all)
        if (filter.accepts(wm.word)) out.push_back(std::move(wm));
    std::stable_sort(out.begin(), out.end(), word_less);
    return out;
}

namespace {

Circle fixed_circle(const Mobius& s) {
    // c z zbar + d z - a zbar - b = 0
    const Mobius m = s.normalized();
    if (std::abs(m.c) < 1e-300) fail(ErrorCode::validation, "oval fixed set is not a circle (c = 0)");
    const cplx z0 = m.a / m.c;
    const cplx kz = m.d / m.c;   // should equal -conj(z0)
    const cplx k0 = m.b / m.c;   // should be real
    const double scale = 1.0 + std::abs(z0);
    if (std::abs(kz + std::conj(z0)) > 1e-8 * scale || std::abs(k0.imag()) > 1e-8 * scale * scale)
        fail(ErrorCode::validation, "oval fixed set is not a circle (non-M-curve input)");
    const double r2 = std::norm(z0) + k0.real();
    if (!(r2 > 0.0)) fail(ErrorCode::validation, "oval fixed set is empty");
    return {z0, std::sqrt(r2)};
}

}  // namespace

Circle oval_circle(const SchottkyData& data, int n) { return fixed_circle(generator_map(data, n, 1)); }

Circle hole_circle(const SchottkyData& data, int n) { return fixed_circle(generator_map(data, n, -1)); }

}  // namespace dimers
