#pragma once

#include <string>
#include <vector>

#include "aeroflex/types.hpp"

namespace aeroflex {

// Beam cross-section properties at a spanwise station (wing frame, x from
// the root clamp outward).
struct BeamSection {
    double station_m{0.0};
    double EI_Nm2{0.0};        // bending stiffness
    double GJ_Nm2{0.0};        // torsional stiffness
    double mass_per_m_kg{0.0}; // running mass
    double pitch_inertia_per_m_kgm{0.0}; // torsional inertia about the elastic axis
};

// Trailing-edge flap attached at a structural node, hinged at a fixed chord
// fraction, restrained by a hinge spring.
struct FlapSpec {
    int node_index{0};          // 1..n_nodes (node 0 is the clamped root)
    double mass_kg{0.0};
    double hinge_inertia_kgm2{0.0};   // about the hinge line
    double static_moment_kgm{0.0};    // flap mass moment about the hinge
    double hinge_stiffness_Nm{0.0};   // spring rate [N*m/rad]
    double hinge_damping_Nms{0.0};
    double hinge_offset_m{0.0};       // hinge distance aft of the elastic axis
};

// Aerodynamic strip on the wing. Thin-airfoil flap integrals T10..T12
// follow from the hinge chord fraction and are stored explicitly.
struct StripAeroSpec {
    double station_m{0.0};   // strip midpoint, wing frame
    double width_m{0.0};
    double semichord_m{0.0};
    double ea_offset{0.0};   // elastic-axis position aft of midchord, in semichords
    double CLa{0.0};         // section lift-curve slope [1/rad]
    double T10{0.0};
    double T11{0.0};
    double T12{0.0};
};

// Quasi-steady lifting surface away from the wing (tail, fin). The force
// acts along `normal` (body frame) proportional to the local flow angle.
struct SurfaceSpec {
    std::string name;
    Vec3 position_m{Vec3::Zero()};  // body frame, from the reference point
    Vec3 normal{Vec3::Zero()};      // force direction at positive local angle
    double area_m2{0.0};
    double CLa{0.0};
    double incidence_rad{0.0};
    double control_gain{0.0};       // flow-angle change per rad of control
    std::string control;            // "elevator", "rudder" or empty
};

struct PointMass {
    std::string name;
    double mass_kg{0.0};
    Vec3 position_m{Vec3::Zero()};
};

struct ActuatorSpec {
    double time_constant_s{0.0};
    double limit_rad{0.0};      // symmetric position limit (0 = none)
    double rate_limit{0.0};     // rad/s or 1/s (0 = none)
};

// Gains and rates for the cascaded control loops.
struct ControlConfig {
    // Position loop (50 Hz)
    double K_Y{0.5};
    double K_Z{0.5};
    // Flight-path loop (50 Hz)
    double K_chi{1.0};
    double K_gamma_sigma{2.0};
    double disturbance_bound{0.5};   // epsilon-bar for the super-twisting terms
    double CLa_total{5.7};           // lift-slope estimate used in the control effectiveness
    // Attitude loop (100 Hz)
    Vec3 K1{Vec3(2.0, 2.0, 2.0)};
    Vec3 K2{Vec3(5.0, 5.0, 5.0)};
    Vec3 K_s{Vec3(0.2, 0.2, 0.2)};
    double gamma_s{0.5};
    // Wing-load loop (100 Hz)
    double q_integral{1.0};          // LQR weight on the shear-tracking integral
    double q_elastic_rate{1e-4};     // LQR weight on elastic-rate states
    double r_flap{40.0};             // LQR control weight
    double bending_cap_Nm{5000.0};   // root-bending allocation limit
    double shear_filter_gain{0.5};   // reference-model DC gain factor (of q*S*CLa_w)
    double shear_filter_tau_s{0.0};  // 0 = derive from b/(0.3 V)
    // Loop rates
    double fast_loop_hz{100.0};
    double slow_loop_hz{50.0};
};

struct AircraftConfig {
    int schema_version{1};
    std::string name;

    // geometry
    double span_m{0.0};
    double wing_area_m2{0.0};
    double chord_m{0.0};
    double wing_root_offset_m{0.0};   // lateral distance from centerline to the clamp
    double wing_incidence_rad{0.0};
    Vec3 wing_root_position_m{Vec3::Zero()}; // body frame position of the right clamp

    // mass
    double mass_kg{0.0};
    std::vector<PointMass> fuselage_masses;

    // wing structure and aerodynamics (one side; the left wing mirrors it)
    std::vector<BeamSection> beam_sections;
    std::vector<FlapSpec> flaps;
    std::vector<StripAeroSpec> strips;

    // other surfaces and drag
    std::vector<SurfaceSpec> surfaces;
    double CD0{0.0};
    double k_drag{0.0};

    // propulsion: thrust along body x at the reference point
    double max_thrust_N{0.0};

    // actuators
    ActuatorSpec elevator{0.02, deg2rad(20.0), 0.0};
    ActuatorSpec rudder{0.02, deg2rad(20.0), 0.0};
    ActuatorSpec throttle{0.2, 0.0, 0.0};
    ActuatorSpec flap_act{0.02, deg2rad(30.0), 0.0};

    ControlConfig control;

    int n_elements() const { return int(beam_sections.size()) - 1; }
    int n_strips() const { return int(strips.size()); }
};

// Closed-form thin-airfoil flap constants for a hinge at chordwise position
// c_h (aft of midchord, in semichords).
double theodorsen_T10(double ch);
double theodorsen_T11(double ch);
double theodorsen_T12(double ch);

AircraftConfig default_aircraft();
AircraftConfig load_config(const std::string& path);
void save_config(const AircraftConfig& cfg, const std::string& path);
void validate_config(const AircraftConfig& cfg); // throws std::runtime_error

} // namespace aeroflex
