#pragma once

namespace sdl {

// Every numeric threshold used by the library lives here, so a run can be
// tightened or loosened in one place (CLI --tol-profile).
struct Tolerances {
    double boundary = 1e-12;         // on-curve classification collar
    double sing_collar = 1e-9;       // singular points alpha_a and 1/4
    double slit_theta = 1e-6;        // two maximizers count as distinct beyond this
    double slit_value = 1e-9;        // ... when their values tie within this
    double newton_theta = 1e-14;     // circumcircle Newton |dtheta|
    double cycle_residual = 1e-9;    // |F^p(w) - w| for a verified cycle
    double center_residual = 1e-10;  // |F^p(0)| at a center
    double branch_ambiguity = 1e-12; // nearest-preimage tie threshold
    double multiplier_neutral = 1e-8;    // attracting/repelling band around |lambda|=1
    double parabolic_crossing = 1e-8;    // |lambda - 1| at a boundary point
    double koenigs_increment = 1e-10;    // Koenigs limit truncation
    double index_agree = 1e-7;           // contour radius halving agreement
    double landing_cluster = 1e-4;       // co-landing cluster radius (tricorn laminations)
    double ray_gap = 1e-7;               // target Cauchy gap for traced rays
};

inline const Tolerances& default_tolerances() {
    static const Tolerances t{};
    return t;
}

}  // namespace sdl
