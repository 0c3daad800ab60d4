#pragma once

#include <cmath>
#include <functional>
#include <optional>

namespace nsac::geometry {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
    friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

enum class Shape { circle };

/// A circle Gamma_t, rigidly translated with constant velocity.
///
/// Orientation: the bubble interior is Omega+ (chi = 1, c ~ +1) and the
/// exterior is Omega- (chi = 0, c ~ -1).  The signed distance is positive
/// inside, the normal grad d points into the bubble and the curvature of a
/// circle is H = +1/R.  With `period` set, distances use the minimum image
/// on a periodic box [0, period.x) x [0, period.y).
struct AnalyticInterface {
    Shape shape = Shape::circle;
    Vec2 center;
    double radius = 0.0;
    Vec2 velocity;
    std::optional<Vec2> period;

    static AnalyticInterface circle(Vec2 center, double radius, Vec2 velocity = {},
                                    std::optional<Vec2> period = std::nullopt);

    Vec2 center_at(double t) const;
    /// x - center(t), reduced to the minimum image on periodic boxes.
    Vec2 offset(Vec2 x, double t) const;
};

/// Tubular half-width delta.  The cut-off profile phi, the weight theta and
/// the curvature cut-off zeta are fixed functions of d / delta.
struct GeometryParams {
    double delta = 0.1;
};

/// phi(x) = (1 - x^2)^2 for |x| < 1, else 0.
double cutoff_phi(double x);
double cutoff_phi_derivative(double x);

/// Odd truncation of the signed distance: -r on |r| <= delta/2, -sign(r) delta
/// for |r| >= delta, joined by the C^1 monotone cubic Hermite blend.
double theta_profile(double r, double delta);
double theta_profile_derivative(double r, double delta);

/// 1 on |r| <= delta, 0 on |r| >= 2 delta, quintic smoothstep in between.
double zeta_profile(double r, double delta);

double signed_distance(const AnalyticInterface& iface, Vec2 x, double t);

/// Orthogonal projection onto Gamma_t.  Undefined at the centre of the circle.
Vec2 project(const AnalyticInterface& iface, Vec2 x, double t);

struct NormalCurvature {
    Vec2 normal;             // n_Gamma(P x) = grad d
    double curvature;        // H_Gamma(P x) = -Lap d on Gamma
    double normal_velocity;  // V_Gamma(P x) = -d_t d
};

/// Throws OutOfTubeError unless |d(x, t)| < 3 delta.
NormalCurvature normal_and_curvature(const AnalyticInterface& iface, const GeometryParams& params, Vec2 x,
                                     double t);

/// xi = phi(d / delta) grad d.
Vec2 xi_field(const AnalyticInterface& iface, const GeometryParams& params, Vec2 x, double t);

/// div xi = phi'(d/delta)/delta |grad d|^2 + phi(d/delta) Lap d, evaluated exactly.
double xi_divergence(const AnalyticInterface& iface, const GeometryParams& params, Vec2 x, double t);

double theta_weight(const AnalyticInterface& iface, const GeometryParams& params, Vec2 x, double t);

/// H(x) = H_Gamma(P x) n_Gamma(P x) zeta(x): constant along normals inside
/// the delta tube and zero outside the 2 delta tube.
Vec2 extended_curvature(const AnalyticInterface& iface, const GeometryParams& params, Vec2 x, double t);

using VelocityFunction = std::function<Vec2(Vec2 x, double t)>;

/// Constant normal extension v(P x).  Throws OutOfTubeError unless |d| < 2 delta.
Vec2 extended_velocity(const AnalyticInterface& iface, const GeometryParams& params, const VelocityFunction& v,
                       Vec2 x, double t);

/// Throws ConfigError unless Gamma stays farther than 3 delta from the walls
/// of [0, Lx] x [0, Ly] for all t in [t_begin, t_end].  On periodic boxes the
/// requirement is separation from the periodic images instead.
void require_margin(const AnalyticInterface& iface, const GeometryParams& params, double Lx, double Ly,
                    bool periodic, double t_begin = 0.0, double t_end = 0.0);

enum class JacobianMode { curved, flat };

struct TubularQuadrature {
    int radial_panels = 16;
    int angular_points = 256;
};

/// int_Gamma int_{-w}^{w} g(r, p) J(r) dr dsigma(p) with J(r) = max(0, (R - r)/R)
/// (or J = 1 in flat mode), by composite Gauss-Legendre in r and the
/// periodic trapezoid rule along the circle.  Requires w <= 2 delta.
double tubular_integral(const std::function<double(double r, Vec2 p)>& g, const AnalyticInterface& iface,
                        const GeometryParams& params, double half_width, JacobianMode mode = JacobianMode::curved,
                        TubularQuadrature quadrature = {}, double t = 0.0);

}  // namespace nsac::geometry
