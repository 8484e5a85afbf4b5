#pragma once

#include <optional>
#include <vector>

#include "sdl/angles.hpp"
#include "sdl/complexpt.hpp"
#include "sdl/tolerances.hpp"

namespace sdl::tricorn {

inline cx f_apply(cx c, cx z) { return std::conj(z) * std::conj(z) + c; }

// First n with |f^n(z)| > R_esc, or nullopt if bounded up to the budget.
std::optional<int> escape_time(cx c, cx z, double R_esc, int max_iter);

// Boettcher position of the critical value, Phi(c) = phi_c(c). Modulus from
// the Green's function; argument by conjugation-parity square roots continued
// along the orbit. Throws InsideTricorn.
cx phi_big(cx c, int max_iter = 3000);

struct RayPath {
    angles::Rational angle;
    std::vector<cx> points;
    std::vector<double> potentials;
    cx landing{};
    double cauchy_gap = 0.0;
    int levels_done = 0;
};

// Dynamical ray of f_c at a rational angle: dyadic-potential targets, Newton
// corrected, conjugation parity handled exactly through the m2 orbit of theta.
RayPath trace_dynamical_ray(cx c, const angles::Rational& theta, int levels,
                            const Tolerances& tol = default_tolerances());

// Parameter ray of the Tricorn: predictor-corrector continuation of
// Phi(c) = r e^{2 pi i theta} from r = 4 down to r_end.
RayPath trace_parameter_ray(const angles::Rational& theta, int levels, double r_end = 1.0 + 1e-4,
                            const Tolerances& tol = default_tolerances());

// Solve f_c^{period}(0) = 0 over c (two real unknowns).
cx find_center(int period, cx seed, const Tolerances& tol = default_tolerances());

// All minimal-period-`period` centers found from a seed grid over the box.
std::vector<cx> find_all_centers(int period, cx lo, cx hi, int grid_n = 48,
                                 const Tolerances& tol = default_tolerances());

struct WirtingerValue {
    cx value{0.0, 0.0};
    bool anti = false;
};

// Multiplier of f^{period} along the cycle (parity-tracked chain rule,
// d f / d conj(z) = 2 conj(z)).
WirtingerValue cycle_multiplier(cx c, const std::vector<cx>& cycle);

std::optional<std::vector<cx>> locate_cycle(cx c, int period, cx seed,
                                            const Tolerances& tol = default_tolerances());

cx parabolic_index(cx c, cx fixed_point, int return_period,
                   const Tolerances& tol = default_tolerances());
int fixed_point_multiplicity(cx c, cx fixed_point, int return_period, double delta = 1e-3);

double find_real_parabolic_boundary(int odd_period, double lo, double hi,
                                    const Tolerances& tol = default_tolerances());

struct LandingClasses {
    std::vector<std::vector<angles::Rational>> classes;  // co-landing angle classes
    std::vector<cx> landing_points;                      // one per class
    double resolution = 0.0;  // smallest separation between distinct clusters
};

// Empirical rational lamination: rays at all angles of period <= max_period
// plus their preimages up to the given preperiod, clustered by landing point.
LandingClasses rational_lamination(cx c, int max_period, int levels, int preperiod = 1,
                                   const Tolerances& tol = default_tolerances());

}  // namespace sdl::tricorn
