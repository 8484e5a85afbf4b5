#include "sdl/angles.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "sdl/triangle.hpp"

namespace sdl::angles {

namespace {
using i128 = __int128;

long long checked_ll(i128 v) {
    if (v > i128(0x7fffffffffffffffLL) || v < -i128(0x7fffffffffffffffLL))
        throw Error("rational angle overflow");
    return (long long)v;
}
}  // namespace

Rational::Rational(long long num, long long den) : num_(num), den_(den) {
    if (den_ == 0) throw Error("zero denominator");
    if (den_ < 0) {
        den_ = -den_;
        num_ = -num_;
    }
    reduce();
}

void Rational::reduce() {
    num_ %= den_;
    if (num_ < 0) num_ += den_;
    const long long g = std::gcd(num_, den_);
    num_ /= g;
    den_ /= g;
}

Rational Rational::parse(const std::string& s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(s), 1);
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

std::string Rational::str() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
}

bool Rational::operator<(const Rational& o) const {
    return i128(num_) * o.den_ < i128(o.num_) * den_;
}

Rational Rational::m2() const {
    const i128 n = i128(-2) * num_;
    i128 m = n % den_;
    if (m < 0) m += den_;
    return Rational(checked_ll(m), den_);
}

std::array<Rational, 2> Rational::m2_preimages() const {
    // Solutions of -2x = theta (mod 1): (k - theta)/2 for k = 1, 2.
    return {Rational(checked_ll(i128(den_) - num_), 2 * den_),
            Rational(checked_ll(i128(2) * den_ - num_), 2 * den_)};
}

Rational Rational::reflected() const { return Rational(den_ - num_, den_); }

bool Rational::is_vertex() const { return vertex_index() >= 0; }

int Rational::vertex_index() const {
    if (num_ == 0) return 0;
    if (3 * num_ == den_) return 1;
    if (3 * num_ == 2 * den_) return 2;
    return -1;
}

int Rational::arc() const {
    if (is_vertex()) throw OnVertex();
    const i128 three_n = i128(3) * num_;
    if (three_n < den_) return 1;
    if (three_n < i128(2) * den_) return 2;
    return 3;
}

int Rational::period_under_m2() const {
    Rational x = *this;
    for (int n = 1; n <= 2 * den_ + 2; ++n) {
        x = x.m2();
        if (x == *this) return n;
    }
    return 0;
}

std::pair<int, int> Rational::orbit_shape() const {
    std::map<std::pair<long long, long long>, int> seen;
    Rational x = *this;
    int i = 0;
    while (true) {
        auto key = std::make_pair(x.num(), x.den());
        auto it = seen.find(key);
        if (it != seen.end()) return {it->second, i - it->second};
        seen.emplace(key, i);
        x = x.m2();
        ++i;
    }
}

Rational m2_map(const Rational& theta) { return theta.m2(); }

std::vector<Rational> angles_of_period(int n) {
    // Fixed set of m2^n has denominator D = 2^n - (-1)^n.
    const long long D = (n % 2 == 0) ? ((1LL << n) - 1) : ((1LL << n) + 1);
    std::vector<Rational> out;
    for (long long j = 0; j < D; ++j) {
        Rational r(j, D);
        if (r.period_under_m2() == n) out.push_back(r);
    }
    return out;
}

std::vector<Rational> angles_of_period_dividing(int n) {
    const long long D = (n % 2 == 0) ? ((1LL << n) - 1) : ((1LL << n) + 1);
    std::vector<Rational> out;
    for (long long j = 0; j < D; ++j) {
        Rational r(j, D);
        const int p = r.period_under_m2();
        if (p > 0 && n % p == 0) out.push_back(r);
    }
    // Odd n: period-d angles for even d | n have a different denominator family
    // and are already included only when d | n; the loop above covers exactly
    // the angles fixed by m2^n, which is the set wanted.
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool Itinerary::admissible() const {
    if (per.empty()) return false;
    auto bad = [](uint8_t s) { return s < 1 || s > 3; };
    for (uint8_t s : pre)
        if (bad(s)) return false;
    for (uint8_t s : per)
        if (bad(s)) return false;
    std::vector<uint8_t> seq = pre;
    seq.insert(seq.end(), per.begin(), per.end());
    seq.push_back(per.front());  // wraparound junction
    for (size_t i = 1; i < seq.size(); ++i)
        if (seq[i] == seq[i - 1]) return false;
    return true;
}

void Itinerary::normalize() {
    if (per.empty()) return;
    // Primitive period.
    const size_t n = per.size();
    for (size_t d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        bool rep = true;
        for (size_t i = d; i < n && rep; ++i) rep = per[i] == per[i % d];
        if (rep) {
            per.resize(d);
            break;
        }
    }
    // Minimal preperiod: absorb trailing preperiod symbols that already match
    // the periodic tail.
    while (!pre.empty() && pre.back() == per.back()) {
        std::rotate(per.rbegin(), per.rbegin() + 1, per.rend());
        pre.pop_back();
    }
    // Period-2 tails code the three vertices, each in two phases; keep the
    // min-start phase so equality of angles is syntactic.
    if (per.size() == 2 && per[0] > per[1] && (pre.empty() || pre.back() != per[1]))
        std::swap(per[0], per[1]);
}

Itinerary Itinerary::shifted() const {
    Itinerary out = *this;
    if (!out.pre.empty()) {
        out.pre.erase(out.pre.begin());
    } else {
        std::rotate(out.per.begin(), out.per.begin() + 1, out.per.end());
    }
    out.normalize();
    return out;
}

Itinerary Itinerary::prepended(uint8_t symbol) const {
    Itinerary out = *this;
    out.pre.insert(out.pre.begin(), symbol);
    out.normalize();
    return out;
}

std::string Itinerary::str() const {
    std::string s;
    for (uint8_t c : pre) s.push_back(char('0' + c));
    s.push_back('|');
    for (uint8_t c : per) s.push_back(char('0' + c));
    return s;
}

Itinerary Itinerary::parse(const std::string& s) {
    Itinerary it;
    const auto bar = s.find('|');
    const std::string pre = bar == std::string::npos ? "" : s.substr(0, bar);
    const std::string per = bar == std::string::npos ? s : s.substr(bar + 1);
    for (char c : pre) it.pre.push_back(uint8_t(c - '0'));
    for (char c : per) it.per.push_back(uint8_t(c - '0'));
    it.normalize();
    return it;
}

Itinerary itinerary_of_rational(const Rational& theta) {
    std::map<std::pair<long long, long long>, int> seen;
    std::vector<uint8_t> symbols;
    Rational x = theta;
    int i = 0;
    while (true) {
        if (x.is_vertex()) throw HitsFixedPoint(i);
        auto key = std::make_pair(x.num(), x.den());
        auto it = seen.find(key);
        if (it != seen.end()) {
            Itinerary out;
            out.pre.assign(symbols.begin(), symbols.begin() + it->second);
            out.per.assign(symbols.begin() + it->second, symbols.end());
            out.normalize();
            return out;
        }
        seen.emplace(key, i);
        symbols.push_back(uint8_t(x.arc()));
        x = x.m2();
        ++i;
    }
}

namespace {

// Inverse-branch choice: the preimage of an angle with symbol s_next landing
// in arc s is x = (k - y)/2 with k determined by (s, s_next) alone.
int branch_k(int s, int s_next) {
    if (s == 1) return 1;
    if (s == 3) return 2;
    return s_next == 1 ? 1 : 2;  // s == 2
}

bool in_closed_arc(const Rational& x, int s) {
    // Closed arc bounds s/3-ish: arc 1 = [0,1/3], 2 = [1/3,2/3], 3 = [2/3,1].
    const i128 t = i128(3) * x.num();
    switch (s) {
        case 1: return t <= x.den();
        case 2: return t >= x.den() && t <= i128(2) * x.den();
        default: return t >= i128(2) * x.den() || x.num() == 0;  // 1 ~ 0
    }
}

}  // namespace

Rational rational_from_itinerary(const Itinerary& raw) {
    Itinerary it = raw;
    it.normalize();
    if (!it.admissible()) throw NoRealization("inadmissible itinerary");
    const size_t n = it.per.size();
    if (n > 60) throw Error("period too long for exact solve");

    // Periodic part: unroll theta_j = (k_j - theta_{j+1}) / 2 around the cycle.
    i128 numer = 0;
    for (size_t j = 0; j < n; ++j) {
        const int s = it.per[j];
        const int s_next = it.per[(j + 1) % n];
        const i128 k = branch_k(s, s_next);
        const i128 w = i128(1) << (n - 1 - j);
        numer += ((j % 2 == 0) ? k : -k) * w;
    }
    const i128 den = (n % 2 == 0) ? (i128(1) << n) - 1 : (i128(1) << n) + 1;
    i128 m = numer % den;
    if (m < 0) m += den;
    Rational x(checked_ll(m), checked_ll(den));

    // Preperiod: pull back choosing the branch demanded by the declared arcs.
    for (size_t i = it.pre.size(); i-- > 0;) {
        const int s = it.pre[i];
        const int s_next = (i + 1 < it.pre.size()) ? it.pre[i + 1] : it.per.front();
        const int k = branch_k(s, s_next);
        x = Rational(checked_ll(i128(k) * x.den() - x.num()), 2 * x.den());
    }

    // Verify the full word forward, closed arcs (vertex codings are allowed to
    // sit on arc endpoints).
    Rational y = x;
    const size_t steps = it.pre.size() + 2 * n;
    for (size_t i = 0; i < steps; ++i) {
        if (!in_closed_arc(y, it.symbol_at(i))) throw NoRealization();
        y = y.m2();
    }
    return x;
}

RhoAngle RhoAngle::at_vertex(int k) {
    RhoAngle a;
    a.vertex = true;
    a.vertex_k = k;
    a.numeric = k / 3.0;
    a.precision = 0.0;
    return a;
}

RhoAngle RhoAngle::from_itinerary(Itinerary it) {
    it.normalize();
    RhoAngle a;
    a.itin = std::move(it);
    a.numeric = rho_angle_value(a.itin);
    a.precision = 1e-12;
    // Itineraries that code a vertex collapse to the vertex representation.
    const Rational r = rational_from_itinerary(a.itin);
    if (r.is_vertex()) return at_vertex(r.vertex_index());
    return a;
}

RhoAngle RhoAngle::shifted() const {
    if (vertex) return *this;
    return from_itinerary(itin.shifted());
}

Rational E_of(const RhoAngle& x) {
    if (x.vertex) return Rational(x.vertex_k, 3);
    return rational_from_itinerary(x.itin);
}

RhoAngle E_inverse(const Rational& theta) {
    const int v = theta.vertex_index();
    if (v >= 0) return RhoAngle::at_vertex(v);
    try {
        return RhoAngle::from_itinerary(itinerary_of_rational(theta));
    } catch (const HitsFixedPoint& hit) {
        // The orbit reaches a vertex; code the tail by the vertex's two-cycle
        // in the phase admissible after the prefix.
        Itinerary it;
        Rational x = theta;
        for (int i = 0; i < hit.iterate; ++i) {
            it.pre.push_back(uint8_t(x.arc()));
            x = x.m2();
        }
        static const uint8_t tails[3][2] = {{1, 3}, {1, 2}, {2, 3}};
        const int k = x.vertex_index();
        uint8_t t0 = tails[k][0], t1 = tails[k][1];
        if (!it.pre.empty() && it.pre.back() == t0) std::swap(t0, t1);
        it.per = {t0, t1};
        it.normalize();
        if (!(rational_from_itinerary(it) == theta)) throw;
        return RhoAngle::from_itinerary(it);
    }
}

std::pair<double, double> rho_angle_position(const Itinerary& it, int depth) {
    if (depth < 1) throw Error("depth must be >= 1");
    auto arc_bounds = [](int s) -> std::pair<double, double> {
        return {(s - 1) / 3.0, s / 3.0};
    };
    // The preimage of an angle in arc s_i under rho, landing in arc s_{i-1},
    // is side reflection s_{i-1} applied on the circle (an involution).
    auto pull = [](int j, double t) {
        cx w = triangle::side_reflection(j, unit(t));
        w /= std::abs(w);
        double u = angle_of(w);
        if (j == 3 && u < 0.5) u = 1.0;  // the vertex 1 ~ 0 case
        return u;
    };
    auto [lo, hi] = arc_bounds(it.symbol_at(depth - 1));
    for (int i = depth - 2; i >= 0; --i) {
        const int s = it.symbol_at(i);
        // Reflection reverses orientation; endpoints swap.
        const double nlo = pull(s, hi);
        const double nhi = pull(s, lo);
        auto [alo, ahi] = arc_bounds(s);
        lo = std::max(nlo, alo);
        hi = std::min(nhi, ahi);
        if (hi < lo) hi = lo;  // degenerate by rounding
    }
    return {0.5 * (lo + hi), 0.5 * (hi - lo)};
}

namespace {

struct AntiMoebius {
    cx a{1}, b{0}, c{0}, d{1};
    bool conjugates = false;

    cx apply(cx z) const {
        if (conjugates) z = std::conj(z);
        return (a * z + b) / (c * z + d);
    }
};

AntiMoebius reflection_matrix(int j) {
    const cx cc = triangle::side_center(j);
    return {cc, cx(-1.0, 0.0), cx(1.0, 0.0), -std::conj(cc), true};
}

// G o F, projectively normalized so long compositions stay finite.
AntiMoebius compose(const AntiMoebius& G, const AntiMoebius& F) {
    cx fa = F.a, fb = F.b, fc = F.c, fd = F.d;
    if (G.conjugates) {
        fa = std::conj(fa);
        fb = std::conj(fb);
        fc = std::conj(fc);
        fd = std::conj(fd);
    }
    AntiMoebius R;
    R.a = G.a * fa + G.b * fc;
    R.b = G.a * fb + G.b * fd;
    R.c = G.c * fa + G.d * fc;
    R.d = G.c * fb + G.d * fd;
    R.conjugates = G.conjugates ^ F.conjugates;
    const double s = std::max(std::max(std::abs(R.a), std::abs(R.b)),
                              std::max(std::abs(R.c), std::abs(R.d)));
    if (s > 0.0) {
        R.a /= s;
        R.b /= s;
        R.c /= s;
        R.d /= s;
    }
    return R;
}

std::vector<cx> moebius_fixed_points(const AntiMoebius& M) {
    // c z^2 + (d - a) z - b = 0.
    std::vector<cx> out;
    if (std::abs(M.c) < 1e-15) {
        if (std::abs(M.d - M.a) > 1e-15) out.push_back(M.b / (M.d - M.a));
        return out;
    }
    const cx disc = std::sqrt((M.d - M.a) * (M.d - M.a) + 4.0 * M.c * M.b);
    out.push_back(((M.a - M.d) + disc) / (2.0 * M.c));
    out.push_back(((M.a - M.d) - disc) / (2.0 * M.c));
    return out;
}

double moebius_deriv_mag(const AntiMoebius& M, cx z) {
    const cx det = M.a * M.d - M.b * M.c;
    const cx q = M.c * (M.conjugates ? std::conj(z) : z) + M.d;
    return std::abs(det) / std::norm(q);
}

}  // namespace

double rho_angle_value(const Itinerary& raw) {
    Itinerary it = raw;
    it.normalize();
    if (!it.admissible()) throw NoRealization("inadmissible itinerary");

    AntiMoebius T;  // R_{s1} o ... o R_{sn}
    for (uint8_t s : it.per) T = compose(T, reflection_matrix(s));
    const AntiMoebius M = T.conjugates ? compose(T, T) : T;

    const int s1 = it.per.front();
    const double lo = (s1 - 1) / 3.0, hi = s1 / 3.0;
    cx best{};
    double best_deriv = 1e300;
    bool found = false;
    for (cx z : moebius_fixed_points(M)) {
        if (std::abs(std::abs(z) - 1.0) > 1e-6) continue;
        z /= std::abs(z);
        double t = angle_of(z);
        // Vertex 0 wraps: present it on the matching side of the arc.
        if (s1 == 3 && t < 0.5) t += 1.0;
        if (s1 == 1 && t > 0.5) t -= 1.0;
        if (t < lo - 1e-9 || t > hi + 1e-9) continue;
        if (std::abs(T.apply(z) - z) > 1e-6) continue;
        const double dm = moebius_deriv_mag(T, z);
        if (!found || dm < best_deriv) {
            best = z;
            best_deriv = dm;
            found = true;
        }
    }
    if (!found) throw NoRealization("no circle fixed point matches the periodic word");

    cx x = best;
    for (size_t i = it.pre.size(); i-- > 0;) {
        x = triangle::side_reflection(it.pre[i], x);
        x /= std::abs(x);
    }
    return angle_of(x);
}

}  // namespace sdl::angles
