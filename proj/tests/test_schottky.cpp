#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "dimers/schottky.hpp"
#include "oracles.hpp"

using namespace dimers;

namespace {

SchottkyData g1_data() { return SchottkyData{{{cplx(0.25, 0.9), 0.015}}}; }
SchottkyData g2_data() { return SchottkyData{{{cplx(1.2, 1.3), 0.08}, {cplx(-0.4, 0.6), 0.03}}}; }

bool has_violation(const ValidationReport& r, const std::string& what, std::vector<int> idx) {
    for (const auto& v : r)
        if (v.what.find(what) != std::string::npos && v.indices == idx) return true;
    return false;
}

GroupWord random_word(std::mt19937_64& rng, int g, int letters) {
    GroupWord w;
    int last = 0;
    while (static_cast<int>(w.letters.size()) < letters) {
        const int gen = 1 + static_cast<int>(rng() % static_cast<unsigned>(g));
        if (gen == last) continue;
        const int e = 1 + static_cast<int>(rng() % 2u);
        w.letters.push_back({gen, (rng() & 1u) ? e : -e});
        last = gen;
    }
    return w;
}

}  // namespace

TEST_CASE("validate_u2 accepts valid data and the empty group") {
    CHECK(validate_u2(g1_data()).empty());
    CHECK(validate_u2(g2_data()).empty());
    CHECK(validate_u2(SchottkyData{}).empty());
}

TEST_CASE("validate_u2 reports coincident generators as overlapping discs") {
    SchottkyData d{{{cplx(0.25, 0.9), 0.015}, {cplx(0.25, 0.9), 0.015}}};
    const auto rep = validate_u2(d);
    CHECK(has_violation(rep, "disc-disjointness", {1, 2}));
}

TEST_CASE("validate_u2 reports parameter range violations with indices") {
    SchottkyData d{{{cplx(0.25, -0.9), 0.015}, {cplx(3.0, 1.0), 1.5}}};
    const auto rep = validate_u2(d);
    CHECK(has_violation(rep, "Im(A)", {1}));
    CHECK(has_violation(rep, "mu", {2}));
}

TEST_CASE("mobius_apply conventions") {
    const Mobius id = Mobius::identity();
    CHECK(std::abs(id.apply(cplx(3, 4)) - cplx(3, 4)) == 0.0);
    const Mobius inv{0.0, 1.0, 1.0, 0.0};
    CHECK(std::abs(inv.apply(cplx(2, 0)) - cplx(0.5, 0)) < 1e-15);
    CHECK(mobius_apply(inv, ExtComplex{cplx(0, 0), false}).infinite);
    const auto at_inf = mobius_apply(inv, ExtComplex::inf());
    CHECK_FALSE(at_inf.infinite);
    CHECK(std::abs(at_inf.z) < 1e-15);

    // sigma(infinity) lands inside the disc around conj(A)
    const auto d = g1_data();
    const auto img = mobius_apply(generator_map(d, 1, 1), ExtComplex::inf());
    const Circle c = hole_disc_closed_form(d.generators[0]);
    CHECK_FALSE(img.infinite);
    CHECK(std::abs(img.z - std::conj(c.center)) < c.radius);
}

TEST_CASE("generator maps: fixed points, inverse and multiplier") {
    for (const auto& d : {g1_data(), g2_data()}) {
        for (int n = 1; n <= d.genus(); ++n) {
            const cplx A = d.generators[static_cast<size_t>(n - 1)].A, B = std::conj(A);
            const double mu = d.generators[static_cast<size_t>(n - 1)].mu;
            const Mobius s = generator_map(d, n, 1);
            CHECK(std::abs(s.apply(A) - A) < 1e-14);
            CHECK(std::abs(s.apply(B) - B) < 1e-14);
            CHECK((s * generator_map(d, n, -1)).projectively_equal(Mobius::identity(), 1e-13));
            // derivative of a Mobius map is det / (cz + d)^2
            const cplx deriv = s.det() / ((s.c * B + s.d) * (s.c * B + s.d));
            CHECK(std::abs(std::abs(deriv) - mu) < 1e-12);
            CHECK(generator_map(d, n, 3).projectively_equal(s * s * s, 1e-12));
            // agrees with the independent construction
            const auto o = oracle::generator({A, mu}, 1);
            const Mobius om{o.a, o.b, o.c, o.d};
            CHECK(s.projectively_equal(om, 1e-12));
        }
    }
    CHECK_THROWS_AS(generator_map(g1_data(), 2, 1), Error);
}

TEST_CASE("enumerate_words: small counts") {
    CHECK(enumerate_words(g1_data(), 3, CosetFilter::full()).size() == 7);
    for (int L = 0; L <= 6; ++L)
        CHECK(enumerate_words(g1_data(), L, CosetFilter::double_coset_excluding_identity(1, 1)).empty());
    CHECK(enumerate_words(g2_data(), 2, CosetFilter::full()).size() == 17);
}

TEST_CASE("enumerate_words matches the reduced-word count of the free group") {
    for (int g = 1; g <= 2; ++g) {
        SchottkyData d = g == 1 ? g1_data() : g2_data();
        for (int L = 0; L <= 5; ++L) {
            std::uint64_t expect = 0;
            for (int k = 0; k <= L; ++k) expect += oracle::count_reduced_words(g, k);
            const auto words = enumerate_words(d, L, CosetFilter::full());
            CHECK(words.size() == expect);
            std::uint64_t visited = 0;
            oracle::for_each_word(g == 1 ? oracle::genus1 : oracle::genus2, L, [&](const oracle::Mat&, int, int) { ++visited; });
            CHECK(visited == expect);
        }
    }
}

TEST_CASE("enumerate_words: order, reducedness and filters") {
    const auto d = g2_data();
    const auto words = enumerate_words(d, 4, CosetFilter::full());
    REQUIRE(!words.empty());
    CHECK(words.front().word.is_identity());
    for (size_t i = 1; i < words.size(); ++i) CHECK(words[i - 1].word.mass() <= words[i].word.mass());
    for (const auto& w : words) {
        CHECK(w.word.is_reduced());
        CHECK(w.map.projectively_equal(word_map(d, w.word), 1e-12));
    }
    for (const auto& w : enumerate_words(d, 4, CosetFilter::right(1))) {
        if (w.word.is_identity()) continue;
        CHECK(w.word.letters.back().gen != 1);
    }
    for (const auto& w : enumerate_words(d, 4, CosetFilter::double_coset(1, 2))) {
        if (w.word.is_identity()) continue;
        CHECK(w.word.letters.front().gen != 1);
        CHECK(w.word.letters.back().gen != 2);
    }
    // deterministic
    const auto again = enumerate_words(d, 4, CosetFilter::full());
    REQUIRE(again.size() == words.size());
    for (size_t i = 0; i < words.size(); ++i) {
        CHECK(again[i].map.a == words[i].map.a);
        CHECK(again[i].map.d == words[i].map.d);
    }
}

TEST_CASE("word maps are homomorphic under concatenation") {
    std::mt19937_64 rng(11);
    const auto d = g2_data();
    for (int t = 0; t < 50; ++t) {
        GroupWord u = random_word(rng, 2, 1 + static_cast<int>(rng() % 3u));
        GroupWord v = random_word(rng, 2, 1 + static_cast<int>(rng() % 3u));
        if (u.letters.back().gen == v.letters.front().gen) continue;
        GroupWord uv = u;
        uv.letters.insert(uv.letters.end(), v.letters.begin(), v.letters.end());
        CHECK(word_map(d, uv).projectively_equal(word_map(d, u) * word_map(d, v), 1e-12));
    }
}

TEST_CASE("the group is closed under complex conjugation of coefficients") {
    const auto d = g2_data();
    const auto words = enumerate_words(d, 3, CosetFilter::full());
    for (const auto& w : words) {
        const Mobius c{std::conj(w.map.a), std::conj(w.map.b), std::conj(w.map.c), std::conj(w.map.d)};
        bool found = false;
        for (const auto& o : words)
            if (o.map.projectively_equal(c, 1e-10)) {
                found = true;
                break;
            }
        CHECK(found);
    }
}

TEST_CASE("oval and hole circles") {
    for (const auto& d : {g1_data(), g2_data()}) {
        for (int n = 1; n <= d.genus(); ++n) {
            const Circle ov = oval_circle(d, n);
            const Circle ho = hole_circle(d, n);
            const Circle closed = hole_disc_closed_form(d.generators[static_cast<size_t>(n - 1)]);
            CHECK(ov.radius > 0.0);
            const Mobius s = generator_map(d, n, 1), si = generator_map(d, n, -1);
            for (int k = 0; k < 32; ++k) {
                const cplx p = ov.center + ov.radius * std::polar(1.0, 2 * kPi * k / 32);
                CHECK(std::abs(s.apply(std::conj(p)) - p) < 1e-10 * (1 + std::abs(p)));
                const cplx q = ho.center + ho.radius * std::polar(1.0, 2 * kPi * k / 32);
                CHECK(std::abs(si.apply(std::conj(q)) - q) < 1e-10 * (1 + std::abs(q)));
            }
            // the two fixed circles are mirror images; the hole is the one in the upper half-plane
            CHECK(std::abs(std::conj(ov.center) - ho.center) < 1e-12);
            CHECK(std::abs(ov.radius - ho.radius) < 1e-12);
            CHECK(std::abs(ho.center - closed.center) < 1e-12);
            CHECK(std::abs(ho.radius - closed.radius) < 1e-12);
            CHECK(ho.center.imag() - ho.radius > 0.0);
            const auto [oc, orad] = oracle::hole({d.generators[static_cast<size_t>(n - 1)].A, d.generators[static_cast<size_t>(n - 1)].mu});
            CHECK(std::abs(oc - ho.center) < 1e-12);
            CHECK(std::abs(orad - ho.radius) < 1e-12);
        }
    }
    const auto d = g2_data();
    const Circle a = hole_circle(d, 1), b = hole_circle(d, 2);
    CHECK(std::abs(a.center - b.center) > a.radius + b.radius);
}
