#pragma once

#include <array>
#include <vector>

#include "dimers/surface.hpp"

namespace dimers {

struct RonkinOptions {
    double quad_tol = 1e-9;
    double base_point = 1e6;  // finite stand-in for infinity on the outer real arc
    double margin = 1e-3;
};

struct IntegrationPath {
    std::vector<cplx> waypoints;  // first entry is the base point
};

struct RonkinSample {
    cplx z;
    double x1 = 0, x2 = 0, y1 = 0, y2 = 0, s1 = 0, s2 = 0;
    double h = 0, rho = 0, sigma = 0;
    cplx R;
    std::array<std::array<double, 2>, 2> hess{};
};

// detour_hint > 0 forces the router to pick its detour-th admissible alternative route,
// used to obtain a second independent path to the same point.
IntegrationPath build_path(const Surface& s, const HarnackData& h, cplx z, const RonkinOptions& opts = {},
                           int detour_hint = 0);

bool path_is_admissible(const Surface& s, const HarnackData& h, const IntegrationPath& path, double margin);

// (1/pi) Im of the integral of zeta2 dzeta1 along the path.
double h_value(const Surface& s, const HarnackData& h, const IntegrationPath& path, double quad_tol);

// Same integral with the antisymmetric integrand zeta2 dzeta1 - zeta1 dzeta2, halved.
double h_value_symmetric(const Surface& s, const HarnackData& h, const IntegrationPath& path, double quad_tol);

cplx r_ratio(const Surface& s, const HarnackData& h, cplx z);

RonkinSample ronkin_sample(const Surface& s, const HarnackData& h, cplx z, const RonkinOptions& opts = {});

// sigma for one alpha pair and one beta pair from the symmetric explicit edge formula along an alternative route.
double sigma_explicit(const Surface& s, const HarnackData& h, cplx z, const RonkinOptions& opts = {});

// Newton inversions of the amoeba map (Re zeta) and of the polygon map (Im zeta).
cplx invert_amoeba(const Surface& s, const HarnackData& h, double x1, double x2, cplx start);
cplx invert_polygon(const Surface& s, const HarnackData& h, double s1, double s2, cplx start);

double rho_at(const Surface& s, const HarnackData& h, cplx z, const RonkinOptions& opts = {});
double sigma_at(const Surface& s, const HarnackData& h, cplx z, const RonkinOptions& opts = {});

// Central finite differences of rho in the amoeba coordinates.
std::array<double, 2> rho_gradient_fd(const Surface& s, const HarnackData& h, cplx z, double step,
                                      const RonkinOptions& opts = {});

// |Div(grad sigma o grad rho) - 2| at the amoeba point of z.
double euler_lagrange_residual(const Surface& s, const HarnackData& h, cplx z, double fd_step,
                               const RonkinOptions& opts = {});

}  // namespace dimers
