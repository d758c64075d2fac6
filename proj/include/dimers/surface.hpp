#pragma once

#include <string>
#include <vector>

#include "dimers/schottky.hpp"
#include "dimers/theta.hpp"

namespace dimers {

// Marked points are finite reals; the point at infinity is reserved as the base point.
struct TrackPair {
    double p_minus = 0.0;
    double p_plus = 0.0;
};

struct HarnackData {
    std::vector<TrackPair> alphas;
    std::vector<TrackPair> betas;
};

struct AmoebaPolygonSample {
    cplx z;
    double x1 = 0, x2 = 0;
    double y1 = 0, y2 = 0;
    double s1 = 0, s2 = 0;
};

struct PeriodMatrixResult {
    PeriodMatrix B;
    double asymmetry = 0.0;  // max |B_nm - B_mn| before averaging
};

enum class BoundaryKind { real_arc, oval };

struct BoundaryPolyline {
    BoundaryKind kind = BoundaryKind::real_arc;
    int index = 0;  // arc index (0-based, counted from the arc through infinity) or oval index (1-based)
    std::vector<AmoebaPolygonSample> points;
};

// Cluster ordering, distinctness and distance to the Schottky circles.
ValidationReport validate_harnack(const SchottkyData& data, const HarnackData& harnack, double min_distance = 1e-6);

class Surface {
public:
    Surface(SchottkyData data, int max_letters);

    int genus() const { return data_.genus(); }
    int max_letters() const { return max_letters_; }
    const SchottkyData& data() const { return data_; }
    const std::vector<WordMap>& group() const { return group_; }
    const std::vector<WordMap>& right_coset(int n) const { return cosets_.at(static_cast<size_t>(n - 1)); }

    // True if z lies within distance margin of a closed Schottky disc (upper or lower).
    bool in_disc(cplx z, double margin = 0.0) const;
    // Upper hole circles, 1-based index.
    const Circle& hole(int n) const { return holes_.at(static_cast<size_t>(n - 1)); }

    PeriodMatrixResult period_matrix() const;

    cplx holomorphic_differential(int n, cplx z) const;

    // Abel map with base point at infinity (complex values, one per generator).
    CVec abel(cplx P) const;
    // Same on the real oval; imaginary parts are checked to vanish.
    RVec abel_real(double x) const;
    double abel_increment(double P, double Q, int n) const;

    cplx zeta_pair(const TrackPair& pair, cplx z) const;
    cplx zeta_pair(const TrackPair& pair, const ExtComplex& z) const;
    cplx dzeta_pair(const TrackPair& pair, cplx z) const;

    cplx zeta1(const HarnackData& h, cplx z) const;
    cplx zeta2(const HarnackData& h, cplx z) const;
    cplx dzeta1(const HarnackData& h, cplx z) const;
    cplx dzeta2(const HarnackData& h, cplx z) const;

    AmoebaPolygonSample amoeba_map(const HarnackData& h, cplx z) const;

    std::vector<BoundaryPolyline> trace_amoeba_boundary(const HarnackData& h, int samples_per_component,
                                                        double clip = 12.0) const;

private:
    void check_outside(cplx z) const;

    SchottkyData data_;
    int max_letters_;
    std::vector<WordMap> group_;
    std::vector<std::vector<WordMap>> cosets_;
    std::vector<Circle> holes_;
};

// Sorted list of all marked points.
RVec marked_points(const HarnackData& h);

}  // namespace dimers
