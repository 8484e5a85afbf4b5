#pragma once

#include <optional>

#include "sdl/complexpt.hpp"
#include "sdl/errors.hpp"
#include "sdl/tolerances.hpp"

namespace sdl::cardioid {

// Riemann map of the main cardioid, phi(lambda) = lambda/2 - lambda^2/4.
cx phi(cx lambda);
cx phi_derivative(cx lambda);
SpherePoint phi(const SpherePoint& lambda);

// Inverse of phi on the closed unit disk: the root of lambda^2 - 2 lambda + 4w
// with |lambda| <= 1, selected by testing both roots explicitly. nullopt means
// w lies outside the closed cardioid.
std::optional<cx> phi_inverse(cx w, double tol = 1e-12);

// Schwarz reflection of the cardioid: sigma(phi(lambda)) = phi(1/conj(lambda)).
// sigma(0) = infinity. Throws OutsideCardioid when phi_inverse fails.
SpherePoint schwarz_sigma(cx w, double tol = 1e-12);

// d sigma / d conj(w). Throws CriticalPointError at w = 0 (pole of order 3 in
// the lambda chart).
cx sigma_wirtinger(cx w);

// Geometry of the circumscribing circle |w - a| = r_a and its contact data.
struct DropletGeometry {
    cx a;              // circle center
    double r = 0.0;    // circumradius
    cx alpha;          // tangency point on the cardioid boundary
    double t_alpha = 0.0;  // boundary parameter: alpha = phi(e^{2 pi i t_alpha})
    cx alpha_prime;    // the sigma-preimage of alpha inside the cardioid
    bool degenerate_tangency = false;  // flagged at a = -1/12

    static constexpr double cusp = 0.25;
};

// Circumcircle by 512-point grid seed plus Newton polish. Throws SlitError
// when two distinct maximizers tie (a on (-inf, -1/12)).
DropletGeometry circumcircle(cx a, const Tolerances& tol = default_tolerances());

// Like circumcircle but never throws SlitError: returns the radius/tangency of
// the global maximum even when it is attained twice (used by the slit-interval
// dynamics, where both tangencies are legitimate).
DropletGeometry circumcircle_allow_slit(cx a, const Tolerances& tol = default_tolerances());

// Inversion in the circumcircle; fixes it pointwise, swaps a and infinity.
SpherePoint circle_reflect(const DropletGeometry& g, const SpherePoint& w);

enum class Region { Interior, BoundaryRegular, Singular, Outside };

// Classifies w against the droplet T_a = closed disk minus open cardioid,
// with the singular collar around alpha_a and 1/4.
Region droplet_contains(const DropletGeometry& g, const SpherePoint& w,
                        const Tolerances& tol = default_tolerances());

// A point of the open droplet interior, used to seed ray pullbacks.
cx droplet_interior_point(const DropletGeometry& g, const Tolerances& tol = default_tolerances());

}  // namespace sdl::cardioid
