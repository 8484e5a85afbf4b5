#pragma once

#include <optional>
#include <vector>

#include "sdl/angles.hpp"
#include "sdl/cardioid.hpp"
#include "sdl/complexpt.hpp"
#include "sdl/tolerances.hpp"
#include "sdl/triangle.hpp"

namespace sdl::schwarz {

// F_a on its domain: the cardioid reflection on the closed cardioid, circle
// reflection outside the open circumdisk.
struct SchwarzMap {
    cx a;
    cardioid::DropletGeometry geom;
    Tolerances tol;

    static SchwarzMap create(cx a, const Tolerances& tol = default_tolerances());
};

// One step of F. nullopt means w lies in the open droplet (no image; terminal
// escape). Throws SingularPointError inside the singular collars.
std::optional<SpherePoint> F_apply(const SchwarzMap& m, const SpherePoint& w);

// Wirtinger derivative d F / d conj(w) at a finite non-critical point.
cx F_wirtinger(const SchwarzMap& m, const SpherePoint& w);

// Sector symbol of a point of the domain: 2 outside the circumdisk, 1 or 3 in
// the cardioid by the collar rule (symbol 1 iff arg(phi^-1 w)/2pi in
// (0, t_alpha)). Rendering-grade inside the cardioid.
int sector_symbol(const SchwarzMap& m, const SpherePoint& w);

struct EscapeRecord {
    bool escapes = false;
    int rank = 0;
    triangle::Word address;
    SpherePoint terminal;
    bool hit_singular = false;
};

EscapeRecord classify_point(const SchwarzMap& m, const SpherePoint& w, int max_iter);

// Depth n(a): iterations for the critical value infinity to reach the
// fundamental tile. nullopt = non-escaping up to the budget.
std::optional<int> depth(cx a, int max_iter, const Tolerances& tol = default_tolerances());

struct PreimageBranch {
    SpherePoint w;
    int symbol;  // 1, 2, 3; 0 for the critical preimage of infinity
};
std::vector<PreimageBranch> inverse_branches(const SchwarzMap& m, const SpherePoint& z);

struct RayTrace {
    std::vector<cx> points;        // successive tile representatives
    SpherePoint landing;
    double cauchy_gap = 0.0;
    int passes = 0;
    bool vertex_ray = false;       // landed analytically at alpha_a or the cusp
    bool itinerary_verified = false;
};

// Dynamical ray with the given rho-itinerary, by pullback along inverse
// branches (periodic tail accelerated by backward iteration of the composed
// branch map). `depth` bounds the number of pullback passes.
RayTrace trace_dynamical_ray(const SchwarzMap& m, const angles::Itinerary& it, int depth);
RayTrace trace_ray(const SchwarzMap& m, const angles::RhoAngle& angle, int depth);

struct WirtingerValue {
    cx value{0.0, 0.0};
    bool anti = false;  // parity: true = anti-holomorphic composition
};

enum class CycleClass { Attracting, Repelling, Parabolic, Superattracting };

struct CycleRecord {
    std::vector<SpherePoint> points;  // in orbit order
    int period = 0;
    WirtingerValue multiplier;        // of F^{period} with parity flag
    CycleClass cls = CycleClass::Repelling;
};

// Multiplier of F^{period} along the cycle via the parity-tracked chain rule.
WirtingerValue cycle_multiplier(const SchwarzMap& m, const std::vector<SpherePoint>& cycle);

// Newton on the holomorphic even iterate from grid seeds; deduplicated,
// verified, minimal-period-filtered cycles of the requested period.
std::vector<CycleRecord> find_cycles(const SchwarzMap& m, int period, int grid_n = 40);

// Koenigs ratio of the odd-period-k attracting cycle; 0 at a center.
cx koenigs_ratio(cx a, int k, const Tolerances& tol = default_tolerances());

// Residue index (1/2 pi i) contour dz / (z - F^{return_period}(z)) about the
// fixed point; trapezoid on shrinking circles until two radii agree.
cx parabolic_index(const SchwarzMap& m, cx fixed_point, int return_period);

// Number of fixed points of F^{return_period} (with multiplicity) inside the
// contour of radius delta: 2 for a simple parabolic, 3 for a cusp.
int fixed_point_multiplicity(const SchwarzMap& m, cx fixed_point, int return_period,
                             double delta = 1e-3);

// Solve F_a^{period}(0) = 0 over a as two real unknowns (damped Newton with a
// differenced Jacobian).
cx find_center(int period, cx seed, const Tolerances& tol = default_tolerances());

// All period-`period` centers found from a seed grid over the given box.
std::vector<cx> find_all_centers(int period, cx lo, cx hi, int grid_n = 48,
                                 const Tolerances& tol = default_tolerances());

// Real boundary point of an odd-period component: bisection on the
// second-iterate multiplier crossing 1 along the real axis.
double find_real_parabolic_boundary(int odd_period, double lo, double hi,
                                    const Tolerances& tol = default_tolerances());

// Locate the period-k cycle of F_a by Newton from a seed; nullopt on failure.
std::optional<std::vector<SpherePoint>> locate_cycle(const SchwarzMap& m, int period, cx seed);

// Lemma check on the slit: the first n defined iterates of infinity stay on
// the negative real axis (computed in pure real arithmetic).
bool slit_orbit_check(double a, int n = 100);

}  // namespace sdl::schwarz
