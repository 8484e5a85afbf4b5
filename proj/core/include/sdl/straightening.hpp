#pragma once

#include <optional>
#include <vector>

#include "sdl/angles.hpp"
#include "sdl/complexpt.hpp"
#include "sdl/portraits.hpp"
#include "sdl/tolerances.hpp"

namespace sdl::straightening {

// Characteristic (root) ray pair of a center, found by tracing all candidate
// periodic rays, clustering co-landing pairs at F^k-fixed points, and taking
// the innermost validated pair (the root sector is the smallest one around
// the critical value).
struct CharPairSchwarz {
    angles::RhoAngle t_minus, t_plus;
    cx landing;
};
struct CharPairTricorn {
    angles::Rational t_minus, t_plus;
    cx landing;
};

// Minimal period of the superattracting critical orbit; throws NoConvergence
// if the parameter is not a center up to max_period.
int detect_schwarz_center_period(cx a, int max_period = 12,
                                 const Tolerances& tol = default_tolerances());
int detect_tricorn_center_period(cx c, int max_period = 12,
                                 const Tolerances& tol = default_tolerances());

CharPairSchwarz characteristic_angles_schwarz(cx a, int period,
                                              const Tolerances& tol = default_tolerances());
CharPairTricorn characteristic_angles_tricorn(cx c, int period,
                                              const Tolerances& tol = default_tolerances());

struct ChiResult {
    cx a;
    cx c;
    int period = 0;
    CharPairSchwarz s_pair;
    CharPairTricorn t_pair;
    bool verified = false;  // image rays co-land at the image dynamical root
};

// Combinatorial straightening on centers: push the characteristic pair
// through E, land the Tricorn parameter rays, solve for the center, verify.
ChiResult chi_center(cx a, int period = 0, const Tolerances& tol = default_tolerances());

// Inverse direction: pull the pair back by E^-1 and match it against the
// schwarz centers of the same period.
ChiResult chi_inverse_center(cx c, int period = 0, const Tolerances& tol = default_tolerances());

struct StraighteningReport {
    bool ok = false;
    int depth = 0;
    int leaf_count = 0;
    int mismatches = 0;
    bool pair_match = false;  // E(schwarz pair) equals the tricorn pair
};

// Leafwise correspondence of the two pullback laminations under E, exact on
// the symbolic side.
StraighteningReport verify_straightening(cx a, cx c, int depth,
                                         const Tolerances& tol = default_tolerances());

struct ArcPointData {
    double parameter = 0.0;  // real boundary parameter
    int multiplicity = 0;    // fixed points of the return map in the contour: 2 simple, 3 cusp
    bool on_root_arc = false;
    double index = 0.0;      // residue index of the parabolic cycle (second iterate)
    double index_imag = 0.0;
};

struct IndexExperimentResult {
    ArcPointData s_root, s_other;  // schwarz family period-3 real boundary points
    ArcPointData t_root, t_other;  // tricorn family
    double iota_S = 0.0, iota_T = 0.0;
    double separation = 0.0;
    bool arcs_matched_by_angles = false;
};

// The discontinuity experiment: parabolic indices of the height-0 (real)
// root-arc parameters of the period-3 components in both families.
IndexExperimentResult index_experiment(const Tolerances& tol = default_tolerances());

}  // namespace sdl::straightening
