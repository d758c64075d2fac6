#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "dimers/surface.hpp"
#include "dimers/theta.hpp"

namespace dimers {

// Lattice sites in doubled coordinates: (X/2, Y/2). Black vertices have X, Y even,
// white vertices X, Y odd, faces of type A have X odd and Y even, type B the reverse.
struct Site {
    int X = 0;
    int Y = 0;
    bool operator==(const Site&) const = default;
};

enum class SiteKind { black, white, face_a, face_b };
SiteKind site_kind(Site s);

struct TrackLabel {
    bool alpha = true;
    bool minus = true;
    int index = 0;  // 0-based pair index
};

struct WeightOptions {
    RVec D;                                   // empty means zero
    std::optional<Characteristic> delta;      // odd characteristic, default Δ1 = Δ2 = e1/2
    double theta_tol = 1e-12;
};

// Quantities depending on a point P of the surface, cached for repeated use.
struct PointContext {
    cplx P;
    CVec abel;  // A(P)
    std::vector<cplx> e_alpha_minus, e_alpha_plus, e_beta_minus, e_beta_plus;  // Ê(P, label)
    cplx theta_base;                                                            // θ(A(P) + D)
};

class FockModel {
public:
    FockModel(const Surface& surface, HarnackData harnack, PeriodMatrix B, WeightOptions opts = {});

    int genus() const { return g_; }
    int m() const { return static_cast<int>(h_.alphas.size()); }
    int n() const { return static_cast<int>(h_.betas.size()); }
    const HarnackData& harnack() const { return h_; }
    const PeriodMatrix& period_matrix() const { return B_; }
    const RVec& D() const { return D_; }

    // Abel map of a marked point (base point at infinity).
    const RVec& abel_of(const TrackLabel& l) const;
    double point_of(const TrackLabel& l) const;

    // Labels of the strips crossed between doubled coordinates k and k+1.
    TrackLabel vertical_strip(int k) const;
    TrackLabel horizontal_strip(int k) const;

    RVec eta(Site s) const;

    // Ê(a, b) = θ[Δ](A(b) - A(a)); for genus zero it is b - a.
    double ehat(const TrackLabel& a, const TrackLabel& b) const;
    cplx ehat_point(const PointContext& ctx, const TrackLabel& l) const;

    double theta_shifted(const RVec& eta) const;  // θ(eta + D)
    cplx theta_shifted(const CVec& z) const;
    // Ê between arbitrary points given their coordinates and Abel images.
    cplx ehat_general(cplx a, const CVec& Aa, cplx b, const CVec& Ab) const;

    double edge_weight(Site w, Site b) const;

    // Corners of a face: blacks bA, bB and whites w1, w2 (see the source for the layout).
    struct FaceCorners {
        Site bA, bB, w1, w2;
    };
    FaceCorners face_corners(Site f) const;

    // Signed alternating ratio K(w1,bA) K(w2,bB) / (K(w1,bB) K(w2,bA)); negative on Kasteleyn faces.
    double alternating_ratio(Site f) const;
    // |alternating_ratio|
    double face_weight_alternating(Site f) const;
    // Same quantity assembled from the prime-form labels and the four neighbouring faces.
    double face_weight(Site f) const;

    PointContext context(cplx P) const;
    cplx ba_function(Site b, const PointContext& ctx) const;
    double dirac_residual(Site w, const PointContext& ctx) const;
    std::pair<cplx, cplx> monodromies(const PointContext& ctx) const;

    // Sum of A(α_i^-) - A(α_i^+) and the same for β.
    RVec alpha_period() const;
    RVec beta_period() const;
    // Distances of both periods to the integer lattice, stacked (2g entries).
    RVec periodicity_residual() const;

    // det of the magnetic (m n) x (m n) Kasteleyn matrix for the fundamental domain with lower-left black
    // vertex (i0, j0). row_norm_product receives the product of row 2-norms when non-null.
    cplx spectral_det(cplx z, cplx w, int i0 = 0, int j0 = 0, double* row_norm_product = nullptr) const;

private:
    void check_site(Site s, SiteKind k, const char* what) const;
    RVec strip_sum(int K, bool alpha) const;

    int g_;
    HarnackData h_;
    PeriodMatrix B_;
    RVec D_;
    Characteristic delta_;
    double tol_;
    const Surface* surface_;
    std::vector<RVec> a_am_, a_ap_, a_bm_, a_bp_;
    std::vector<RVec> prefix_alpha_, prefix_beta_;
};

double fay_residual(const FockModel& model, cplx P, double a1, double a2, double a3);

struct KasteleynTypeResult {
    int sign = 0;  // -1 or +1 when all checked label combinations agree, 0 otherwise
    bool pass = false;
    int combinations = 0;
};

struct KasteleynReport {
    KasteleynTypeResult type1, type2;
    // Sign checks of the actual Fock weights on a patch (filled only when a model is supplied).
    int patch_faces = 0;
    int patch_failures = 0;
    bool pass() const { return type1.pass && type2.pass && patch_failures == 0; }
};

// Multi-ratio sign conditions for the two square face types on the marked points.
KasteleynReport kasteleyn_check(const HarnackData& h);
// Adds the alternating-ratio sign test on every face of a size x size patch of black vertices.
KasteleynReport kasteleyn_check(const FockModel& model, int patch = 3);

struct MovablePoints {
    std::vector<int> alpha_minus;  // 0-based pair indices whose α^- point may move
    std::vector<int> beta_minus;
    static MovablePoints last_points(const HarnackData& h, int g);
};

HarnackData solve_periodic(const Surface& surface, const PeriodMatrix& B, const HarnackData& h,
                           const MovablePoints& movable, double tol = 1e-12);

// Flip ratios for an H x W vertex grid (faces (H-1) x (W-1), row-major).
std::vector<double> sampler_face_weights(const FockModel& model, int H, int W);

}  // namespace dimers
