#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace aeroflex {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

constexpr double kGravity = 9.81;          // m/s^2
constexpr double kSeaLevelDensity = 1.225; // kg/m^3
constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

// ISA troposphere density.
inline double air_density(double altitude_m) {
    return kSeaLevelDensity * std::pow(1.0 - 2.25577e-5 * altitude_m, 4.2559);
}

inline Mat3 skew(const Vec3& v) {
    Mat3 s;
    s << 0.0, -v.z(), v.y(),
         v.z(), 0.0, -v.x(),
        -v.y(), v.x(), 0.0;
    return s;
}

inline Mat3 rot_x(double a) {
    Mat3 r;
    r << 1, 0, 0,
         0, std::cos(a), std::sin(a),
         0, -std::sin(a), std::cos(a);
    return r;
}

inline Mat3 rot_y(double a) {
    Mat3 r;
    r << std::cos(a), 0, -std::sin(a),
         0, 1, 0,
         std::sin(a), 0, std::cos(a);
    return r;
}

inline Mat3 rot_z(double a) {
    Mat3 r;
    r << std::cos(a), std::sin(a), 0,
        -std::sin(a), std::cos(a), 0,
         0, 0, 1;
    return r;
}

// Inertial -> body, 3-2-1 sequence (yaw psi, pitch theta, roll phi).
inline Mat3 dcm_body_from_inertial(double phi, double theta, double psi) {
    return rot_x(phi) * rot_y(theta) * rot_z(psi);
}

// Aerodynamic -> body: x_A along airspeed, z_A in the symmetry plane.
inline Mat3 dcm_body_from_aero(double alpha, double beta) {
    return rot_y(alpha) * rot_z(-beta);
}

// Kinematic (flight-path) -> body. The kinematic frame has x along the
// velocity vector and z in the local vertical plane; mu banks about x.
inline Mat3 dcm_body_from_kinematic(double alpha, double beta, double mu) {
    return dcm_body_from_aero(alpha, beta) * rot_x(mu);
}

// Inertial -> kinematic via course chi and climb gamma.
inline Mat3 dcm_kinematic_from_inertial(double chi, double gamma) {
    return rot_y(gamma) * rot_z(chi);
}

// Rigid-body motion state. Position in a north-east-down inertial frame,
// velocity expressed as magnitude/course/climb, attitude relative to the
// velocity vector (mu, alpha, beta), body rates in the body frame.
struct RigidState {
    Vec3 position{Vec3::Zero()};   // x north, y east, z down [m]
    double V{0.0};                 // ground speed [m/s]
    double chi{0.0};               // course angle [rad]
    double gamma{0.0};             // climb angle [rad]
    double mu{0.0};                // bank about velocity [rad]
    double alpha{0.0};             // angle of attack [rad]
    double beta{0.0};              // sideslip [rad]
    Vec3 omega{Vec3::Zero()};      // p, q, r [rad/s]

    Vec3 velocity_body() const {
        return dcm_body_from_kinematic(alpha, beta, mu) * Vec3(V, 0.0, 0.0);
    }
    Mat3 dcm_body_from_inertial_frame() const {
        return dcm_body_from_kinematic(alpha, beta, mu) *
               dcm_kinematic_from_inertial(chi, gamma);
    }
};

} // namespace aeroflex
