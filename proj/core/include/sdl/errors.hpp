#pragma once

#include <stdexcept>
#include <string>

namespace sdl {

// Base for all recoverable computational failures. CLI maps these to exit code 2.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct OutsideCardioid : Error {
    explicit OutsideCardioid(const std::string& w = "point outside closed cardioid") : Error(w) {}
};

// Raised by the Wirtinger derivative at the critical point w = 0.
struct CriticalPointError : Error {
    int pole_order;
    explicit CriticalPointError(int order)
        : Error("derivative chart has a pole at the critical point (order " +
                std::to_string(order) + ")"),
          pole_order(order) {}
};

// Circumcircle is tangent at two distinct points: a lies on the slit (-inf, -1/12).
struct SlitError : Error {
    double theta1, theta2;
    SlitError(double t1, double t2)
        : Error("circumcircle touches the cardioid at two points (parameter on the slit)"),
          theta1(t1), theta2(t2) {}
};

struct SingularPointError : Error {
    explicit SingularPointError(const std::string& w = "orbit entered a singular-point collar") : Error(w) {}
};

struct InteriorOfPi : Error {
    InteriorOfPi() : Error("rho is undefined on the interior of the ideal triangle") {}
};

struct OnVertex : Error {
    OnVertex() : Error("angle lies on a partition vertex {0, 1/3, 2/3}") {}
};

struct InadmissibleWord : Error {
    InadmissibleWord() : Error("word has two equal consecutive symbols") {}
};

struct HitsFixedPoint : Error {
    int iterate;
    explicit HitsFixedPoint(int it)
        : Error("orbit hits a fixed point {0, 1/3, 2/3} at iterate " + std::to_string(it)),
          iterate(it) {}
};

struct NoRealization : Error {
    explicit NoRealization(const std::string& w = "no angle realizes this itinerary") : Error(w) {}
};

struct BranchAmbiguity : Error {
    explicit BranchAmbiguity(const std::string& w = "inverse branches too close to disambiguate") : Error(w) {}
};

struct NoConvergence : Error {
    explicit NoConvergence(const std::string& w = "iteration did not converge") : Error(w) {}
};

struct NotOddAttracting : Error {
    explicit NotOddAttracting(const std::string& w = "no attracting cycle of the requested odd period") : Error(w) {}
};

struct LinearizationDiverged : Error {
    LinearizationDiverged() : Error("Koenigs linearization did not stabilize") {}
};

struct ContourThroughZero : Error {
    ContourThroughZero() : Error("z - g(z) vanishes on the integration contour") {}
};

struct NoBracketedCrossing : Error {
    NoBracketedCrossing() : Error("bracket does not straddle a multiplier-1 crossing") {}
};

struct InsideTricorn : Error {
    InsideTricorn() : Error("orbit stays bounded; Boettcher value undefined") {}
};

struct NewtonStall : Error {
    int last_good_level;
    explicit NewtonStall(int level)
        : Error("ray Newton stalled after level " + std::to_string(level)), last_good_level(level) {}
};

struct ContinuationStall : Error {
    double last_radius;
    explicit ContinuationStall(double r)
        : Error("parameter-ray continuation stalled at |Phi| = " + std::to_string(r)), last_radius(r) {}
};

struct SeedFailed : Error {
    explicit SeedFailed(const std::string& w = "could not seed the solver") : Error(w) {}
};

struct VerificationFailed : Error {
    explicit VerificationFailed(const std::string& w = "post-solve verification failed") : Error(w) {}
};

struct AmbiguousRoot : Error {
    explicit AmbiguousRoot(const std::string& w = "co-landing clusters unresolved; re-run at higher depth") : Error(w) {}
};

struct NoPortrait : Error {
    explicit NoPortrait(const std::string& w = "pair does not generate a formal orbit portrait") : Error(w) {}
};

}  // namespace sdl
